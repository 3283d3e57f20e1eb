//! Deformation quantization of linear Poisson structures through graph
//! combinatorics.
//!
//! * [`graph`]: Lie-admissible graphs, canonical forms, enumeration.
//! * [`algebra`]: rational graph vectors, AS/Jacobi quotients, composition.
//! * [`weights`]: Gauss maps, preimage counting, Monte-Carlo weights and the
//!   generating series `Z`.
//! * [`star`]: polynomials over the dual of a Lie algebra, graph operators,
//!   the star product and the Gutt product.

pub mod algebra;
pub mod error;
pub mod graph;
pub mod rational;
pub mod star;
pub mod weights;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
