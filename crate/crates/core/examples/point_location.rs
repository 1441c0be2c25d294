//! Compare slab point location with a linear scan.

use pdbundle::fixtures::{random_grid_vr, GridVrParams};
use pdbundle::query::{comparison_count, locate_bruteforce};
use pdbundle::rational::{frac, Point};
use pdbundle::{Locator, PDBundle};

fn main() -> pdbundle::Result<()> {
    let bundle = PDBundle::build(random_grid_vr(7, &GridVrParams::small()))?;
    let locator = Locator::new(&bundle);
    let (lo, hi) = bundle.filtration().base().bbox();
    let mut agree = 0;
    let before = comparison_count();
    for i in 0..500 {
        let (t, u) = (frac(i * 31 % 97, 96), frac(i * 17 % 89, 88));
        let p = Point::new(&lo.x + (&hi.x - &lo.x) * t, &lo.y + (&hi.y - &lo.y) * u);
        let (face, _) = locator.locate(&bundle, &p)?;
        if Some(face) == locate_bruteforce(bundle.arrangement(), &p) {
            agree += 1;
        }
    }
    let per_query = (comparison_count() - before) as f64 / 500.0;
    println!("{agree}/500 points agree; {per_query:.1} comparisons per query; {} faces", bundle.stats().faces);
    Ok(())
}
