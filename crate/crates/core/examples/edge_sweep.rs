//! Find where the simplex order changes along base edges.

use pdbundle::fixtures;
use pdbundle::rational::int;
use pdbundle::sweep::{brute_force, kinetic, sweep_edge, SweepMethod};

fn main() {
    // Affine functions on [0, 1] given by their end values.
    let lines = vec![(int(0), int(3)), (int(2), int(0)), (int(1), int(1)), (int(3), int(-1))];
    let fast = kinetic(&lines);
    let slow = brute_force(&lines);
    for (t, pairs) in &fast {
        println!("t = {t}: {pairs:?}");
    }
    assert_eq!(fast, slow);

    let f = fixtures::ff2();
    for e in 0..f.base().edges().len() {
        let [u, v] = f.base().edge(e).v;
        for c in sweep_edge(&f, e, SweepMethod::Kinetic) {
            println!("edge {u}-{v} at t = {}: swaps {:?}", c.at.t, c.swaps);
        }
    }
}
