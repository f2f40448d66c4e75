pub mod lattice;
pub mod polyhedral;
pub mod monoid;
pub mod moncomplex;
pub mod cohomology;
pub mod cech;
pub mod frobenius;
