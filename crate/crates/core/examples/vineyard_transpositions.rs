//! Maintain an RU decomposition while swapping adjacent simplices.

use pdbundle::complex::SimplexIndexing;
use pdbundle::{ReductionState, SimplicialComplex};

fn main() -> pdbundle::Result<()> {
    // A filled triangle: x, y, z, xy, xz, yz, xyz.
    let k = SimplicialComplex::new(vec![vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]])?;
    let mut state = ReductionState::new(&k, SimplexIndexing::identity(k.len()))?;
    println!("start:  {:?}", state.pairing());

    // Move yz (id 5) ahead of xz and xy, then back.
    for k_pos in [4, 3, 3, 4] {
        let (a, b) = (state.indexing().simplex_at(k_pos), state.indexing().simplex_at(k_pos + 1));
        let update = state.transpose(&k, k_pos)?;
        state.audit(&k)?;
        println!(
            "swap {a}<->{b}: pairing changed = {}, order = {:?}, pairs = {:?}",
            update.pairing_changed,
            state.indexing().order(),
            state.pairing().pairs
        );
    }
    Ok(())
}
