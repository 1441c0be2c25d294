//! Inspect the subdivision of the base and walk its dual graph.

use pdbundle::bundle::{traversal_path, BuildOptions};
use pdbundle::{fixtures, PDBundle};

fn main() -> pdbundle::Result<()> {
    let opts = BuildOptions { merge: false, ..Default::default() };
    let bundle = PDBundle::build_with(fixtures::ff1(), opts)?;
    let arr = bundle.arrangement();
    for v in 0..arr.vertices().len() {
        println!("vertex {v}: {} ({:?})", arr.point(v), arr.vertex(v).place);
    }
    for (e, edge) in arr.edges().iter().enumerate() {
        let h = 2 * e;
        println!("edge {e}: {} -> {} label {:?}", arr.half_edge(h).origin, arr.dest(h), edge.label);
    }
    for f in arr.live_faces() {
        println!("face {f} in triangle {}: {:?}", arr.faces()[f].tri, arr.face_polygon(f));
    }
    let graph = arr.dual_graph();
    let walk = traversal_path(&graph, 0);
    println!("walk from face 0 crosses half-edges {walk:?}");
    Ok(())
}
