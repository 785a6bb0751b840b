pub mod cone;
pub mod error;
pub mod geometry;
pub mod lattice;
pub mod lp;
pub mod minkowski;
pub mod polygon;
pub mod zariski;

#[cfg(test)]
mod testutil;
