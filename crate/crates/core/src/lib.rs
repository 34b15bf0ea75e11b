pub mod catalog;
pub mod coeff;
pub mod cohomology;
pub mod complex;
pub mod exterior;
pub mod groebner;
pub mod lcs;
pub mod lie;
pub mod linalg;
pub mod parametric;
