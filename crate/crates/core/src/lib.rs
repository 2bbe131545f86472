//! Exact computations with the non-commutative dg-algebra of a trivalent
//! plane graph: coefficient groups, gardens and their words, the invariance
//! moves with their exactness witnesses, and the correspondence between
//! finite-field representations and face colorings.

pub mod algebra;
pub mod colorings;
pub mod dg_transformations;
pub mod garden;
pub mod group_theory;
pub mod plane_graph;
pub mod representations;
pub mod words;
