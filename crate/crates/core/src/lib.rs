//! Exact analysis of continuous piecewise-linear maps of [0,1].
//!
//! All geometry is done in arbitrary-precision rationals. Markov maps (finite breakpoint
//! orbits) get exact graph-theoretic answers; other maps get budgeted answers that may be
//! `Undecided`.

pub mod basic;
pub mod cycle;
pub mod decomp;
pub mod entropy;
pub mod error;
pub mod fixtures;
pub mod interval;
pub mod map;
pub mod markov;
pub mod orbit;
pub mod prolong;
pub mod rat;
pub mod shadow;
pub mod tower;
pub mod transit;

pub use error::{Error, Result};
pub use interval::{Interval, IntervalSet};
pub use map::{PLMap, Side, SidedPoint};
pub use markov::{markovize, MarkovSystem};
pub use rat::Rat;
