//! Vietoris-Rips filtrations of point clouds attached to base vertices.

use pdbundle::fixtures;
use pdbundle::rational::{int, Point};
use pdbundle::vr::vietoris_rips_fibered;
use pdbundle::{Locator, PDBundle};

fn main() -> pdbundle::Result<()> {
    let base = fixtures::unit_square();
    // Four points per base vertex; the square opens into a long rectangle
    // towards the far corner.
    let cloud = |w: i64| vec![vec![int(0), int(0)], vec![int(w), int(0)], vec![int(w), int(2)], vec![int(0), int(2)]];
    let clouds = vec![cloud(2), cloud(3), cloud(3), cloud(5)];
    let f = vietoris_rips_fibered(base, &clouds, 2)?;
    let bundle = PDBundle::build(f)?;
    let locator = Locator::new(&bundle);
    println!("N = {}, faces = {}", bundle.stats().n, bundle.stats().faces);
    for (x, y) in [(0, 0), (1, 1)] {
        let p = Point::from_ints(x, y);
        let (_, h1) = locator.diagram(&bundle, &p, 1)?;
        println!("H1 at {p} (squared distances):");
        print!("{h1}");
    }
    Ok(())
}
