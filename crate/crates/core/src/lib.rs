//! Symbolic audio classification: feature extraction from audio, interval
//! temporal logic over the resulting series, propositional and modal decision
//! trees and forests, and rule extraction with coverage/confidence scoring.

pub mod dsp;
pub mod error;
pub mod eval;
pub mod io;
pub mod learner;
pub mod logic;
pub mod logiset;
pub mod par;

pub use error::{Error, Result};
