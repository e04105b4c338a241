//! Exact and numeric toolkit for Virasoro representations realized on
//! coefficients of univalent functions, together with the Shapovalov form,
//! annulus bubble numerics and chordal Loewner evolution.

pub mod geom;
pub mod linalg;
pub mod loewner;
pub mod partition;
pub mod poly;
pub mod rational;
pub mod series;
pub mod spectral;
pub mod verma;
