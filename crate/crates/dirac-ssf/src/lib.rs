//! Numerical toolkit for resonances of the semiclassical Dirac
//! operator: complex-distortion spectra, spectral shift functions from
//! scattering phases, Weyl-term asymptotics, and WKB parametrix
//! identities, all at desk scale.

pub mod bessel;
pub mod dirac_core;
pub mod distortion;
pub mod fields;
pub mod fit;
pub mod linalg;
pub mod quad;
pub mod radial_model;
pub mod resonance_solver;
