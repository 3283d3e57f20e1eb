//! Polynomial functions on the dual of a Lie algebra and the graph star
//! product for its linear Poisson structure.

mod lie;
mod ops;
mod poly;
mod product;

pub use lie::LieAlgebra;
pub use ops::{apply_b, apply_b_vector, b_respects_relations, is_casimir, poisson_bracket, RelationCheck};
pub use poly::{HSeries, Polynomial};
pub use product::{
    associativity_residual, compare_products, gutt_star, star, star_filtered, star_series, star_tree_level,
    ProductComparison,
};
