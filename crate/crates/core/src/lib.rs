//! Rotisserie win-probability objective and the machinery around it: the
//! statistical primitives it is built from, its analytic gradient, Monte
//! Carlo ground truth, snake-draft agents that maximize it, and a season
//! simulator for head-to-head agent comparisons.

pub mod draft;
pub mod error;
pub mod gradient;
pub mod io;
pub mod objective;
pub mod oracle;
pub mod projection;
pub mod rng;
pub mod scoring;
pub mod season;
pub mod stats;

pub use error::{Error, Result};
