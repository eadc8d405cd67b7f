//! Arc coordinates for right-angled hexagons in the Siegel space of `Sp(4,R)`,
//! and maximal representations of the reflection group `W3 = Z/2 * Z/2 * Z/2`
//! and of the pair-of-pants group built from them.
//!
//! The crate is organised bottom-up:
//!
//! * [`symmat`] — closed-form 2×2 symmetric linear algebra and 4×4 carriers,
//! * [`lagrangian`] — Lagrangians of `R^4`, (anti)symplectic maps, cross-ratios, maximality,
//! * [`tube`] — R-tubes, vectorial distance, orthogonality, projections, the `R × H²` splitting,
//! * [`hexagon`] — ordered right-angled hexagons, arc coordinates, polygonal chains, the malefic map,
//! * [`reflection`] — antisymplectic reflections, reflection sets and the parameter set 𝒦,
//! * [`maxrep`] — maximal `W3` representations, their restriction to the free group, orbit checks,
//! * [`scan`] — grid scans of the malefic map with gap/collision detectors.
//!
//! Data-parallel work (grid scans, batch validation) goes through [`par`], which uses
//! rayon when the default `parallel` feature is on and plain iterators otherwise.

pub mod error;
pub mod hexagon;
pub mod lagrangian;
pub mod maxrep;
pub mod par;
pub mod reflection;
pub mod sampling;
pub mod scan;
pub mod symmat;
pub mod tol;
pub mod tube;

pub use error::{GeomError, Result};
