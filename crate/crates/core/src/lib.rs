//! Mostow, unitary-split and bipolar decompositions of complex matrices,
//! the derivative of the matrix geometric mean, first-order perturbation
//! bounds for every factor, and the machinery that checks those bounds.

pub mod error;
pub mod matcore;
pub mod sylvester;
pub mod geomean;
pub mod decompose;
pub mod bounds;
pub mod validate;
pub mod cli;
