//! Piecewise-linear persistence diagram bundles over triangulated surfaces.
//!
//! A [`FiberedFiltration`] assigns a filtration of a fixed simplicial
//! complex to every point of a triangulated base surface, linearly on each
//! triangle. [`PDBundle::build`] subdivides the base into polygons on which
//! the simplex order is constant, computes one pairing template per
//! polygon with vineyard updates, and answers diagram queries at any base
//! point in time linear in the number of simplices.

pub mod arrangement;
pub mod bundle;
pub mod complex;
pub mod error;
pub mod filtration;
pub mod fixtures;
pub mod io;
pub mod query;
pub mod rational;
pub mod reduction;
pub mod service;
pub mod sweep;
pub mod vr;

pub use bundle::{BuildOptions, PDBundle};
pub use complex::{SimplexId, SimplexIndexing, SimplicialComplex};
pub use error::{Error, Result};
pub use filtration::{FiberedFiltration, TriangulatedSurface};
pub use query::Locator;
pub use rational::{Point, Rational};
pub use reduction::{Diagram, DiagramPoint, PairingFunction, ReductionState};
