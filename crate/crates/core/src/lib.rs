//! Simulation and analysis toolkit for millimeter-wave MIMO links whose
//! transmit and receive antennas can switch between several orthogonal
//! reconfiguration states.
//!
//! The crate is organised bottom-up:
//!
//! - [`numerics`]: complex matrices, Hermitian log-determinants, the error
//!   function and its inverse, semi-infinite quadrature and seeded random
//!   streams.
//! - [`channel`]: clustered multipath channels, one independent matrix per
//!   reconfiguration state.
//! - [`beamspace`]: DFT beam bases, the virtual channel and beam masks.
//! - [`rate`]: throughput of a low-dimensional sub-channel and exhaustive
//!   beam/state search.
//! - [`fastsel`]: fast state selection followed by greedy (ISSA) receive and
//!   transmit beam selection.
//! - [`analysis`]: closed-form average and outage throughput gains under a
//!   Gaussian rate model.
//! - [`simlab`]: Monte Carlo harness producing empirical gains, loss ratios
//!   and rate histograms.
//! - [`cli`]: the `rmimo` command line front end.

// NaN must fail range checks, so `!(x > 0.0)` is deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision, clippy::needless_range_loop)]

pub mod analysis;
pub mod beamspace;
pub mod channel;
pub mod cli;
pub mod error;
pub mod fastsel;
pub mod numerics;
pub mod rate;
pub mod simlab;

pub use analysis::GaussianRateModel;
pub use beamspace::{BeamMask, Beamspace};
pub use channel::{ChannelSet, SystemConfig};
pub use error::{Error, Result};
pub use numerics::CMatrix;
pub use rate::SelectionOutcome;
