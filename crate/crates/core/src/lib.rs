//! Quantitative model of a superfluid ⁴He acoustic resonator read out by a
//! niobium microwave cavity: phonon and ³He attenuation, cylinder eigenmodes,
//! cell thermalization, microwave readout budgets and ringdown Q extraction.

pub mod attenuation;
pub mod bessel;
pub mod cavity_modes;
pub mod cli;
pub mod constants;
pub mod error;
pub mod microwave;
pub mod numfmt;
pub mod ringdown;
pub mod thermal;

pub use error::{ModelError, Result};
