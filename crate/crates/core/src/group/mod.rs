//! Finitely generated commutative groups `Z^d x Z_m1 x ... x Z_mk`, their
//! finite subsets, and maps between them.

pub mod context;
pub mod hom;
pub mod lattice;
pub mod set;
pub mod text;

pub use context::{GroupContext, GroupVector};
pub use hom::{apply_hom, compress, fibers, Homomorphism};
pub use set::{iterated_sumset, sumset, sumset_many, PointSet};
pub use text::{format_point_set, parse_point_set};
