//! Build a bundle for a small fibered filtration and query diagrams.

use pdbundle::fixtures;
use pdbundle::rational::{frac, Point};
use pdbundle::{Locator, PDBundle};

fn main() -> pdbundle::Result<()> {
    // Two vertices a, b and the edge ab over the unit square; b's value
    // rises from -1 at the origin to 1 elsewhere.
    let bundle = PDBundle::build(fixtures::ff1())?;
    let stats = bundle.stats();
    println!("N = {}, m = {}, faces = {} (merged from {})", stats.n, stats.m, stats.faces, stats.faces_before_merge);

    let locator = Locator::new(&bundle);
    for (x, y) in [(frac(0, 1), frac(0, 1)), (frac(1, 4), frac(1, 4)), (frac(3, 4), frac(3, 4))] {
        let p = Point::new(x, y);
        let (face, diagram) = locator.diagram(&bundle, &p, 0)?;
        println!("p = {p}, face {face}:");
        print!("{diagram}");
    }
    Ok(())
}
