//! Vibration fault diagnosis with a Morlet band-pass filter whose centre and
//! bandwidth are tuned by the crayfish optimization algorithm to maximise
//! correlated kurtosis, followed by squared-envelope analysis.

pub mod ck;
pub mod coa;
pub mod error;
mod fft;
pub mod io;
pub mod kurtogram;
pub mod morlet;
pub mod pipeline;
pub mod plot;
pub mod signal;
pub mod synth;

pub use error::{Error, Result};
