//! Lines in the complete intersection of four Pfaffian quadrics in `P^11`, their
//! classification against the torsion, hyperelliptic and row-vanishing loci, and the
//! explicit parametrized families of special lines.

pub mod binary;
pub mod families;
pub mod field;
pub mod geometry;
pub mod linalg;
pub mod pencil;
pub mod poly;
pub mod ring;
pub mod strata;
pub mod cli;
pub mod sampler;
pub mod store;
pub mod verify;
