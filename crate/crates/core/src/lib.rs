//! Linear algebra for small dg-categories over a field: complexes, dg-modules,
//! natural transformations, ends and coends, Kan extensions, ideals and
//! triangular matrix categories.

pub mod category;
pub mod compat;
pub mod complex;
pub mod ends;
pub mod field;
pub mod fixtures;
pub mod functor;
pub mod graded;
pub mod ideal;
pub mod kan;
pub mod linalg;
pub mod matrix;
pub mod module;
pub mod nat;
pub mod random;
pub mod recollement;
pub mod report;
pub mod sign;
