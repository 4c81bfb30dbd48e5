//! Clonal-interference dynamics on the unit interval.
//!
//! A population is described by trajectories with values in `[0, 1]`.
//! Trajectory 0 starts at height 1 with slope 0; every later trajectory is
//! born at a given time with a given slope advantage over the current
//! resident. When a climber reaches height 1 it becomes the new resident and
//! every living trajectory's slope drops by the winner's old slope;
//! a trajectory that sinks back to the extinction level dies and stays there.
//!
//! Heights kink at every resident change, so evolving them directly costs
//! quadratic time ([`oracle::simulate_naive`] does exactly that and serves as
//! ground truth). The production solver ([`engine::build`]) instead tracks
//! the straight ray each trajectory follows after birth and maintains their
//! upper envelope in one linear pass. Everything else — heights, extinction
//! times, kink ledgers, renewal structure, genealogy, and the Gerrish–Lenski
//! style predictions — is recovered from that envelope.
//!
//! The crate is `no_std`-compatible (`alloc` only) when built with
//! `--no-default-features`.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod config;
pub mod constructions;
pub mod degeneracy;
pub mod engine;
pub mod genealogy;
pub mod heights;
pub mod heuristics;
pub mod oracle;
pub mod profile;

pub use config::{BirthConfig, BirthEvent, ConfigError};
pub use engine::{build, ContinuedRay, EngineOutput, SweepStats};
pub use profile::{DomainError, ResidencySegment, ResidentProfile};

/// Default absolute/relative tolerance for post-hoc coincidence checks.
///
/// The solvers themselves never compare with a tolerance; this is only used
/// when classifying finished outputs (degeneracy detection, profile
/// comparison).
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A slope change of one trajectory: from time `t` on, its height moves with
/// slope `slope` (until the next entry).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SlopeChange {
    /// Time of the change.
    pub t: f64,
    /// Right slope from `t` on.
    pub slope: f64,
}

/// `true` when `a` and `b` agree within `tol`, scaled up for large values.
pub(crate) fn close(a: f64, b: f64, tol: f64) -> bool {
    let scale = 1.0_f64.max(a.abs()).max(b.abs());
    (a - b).abs() <= tol * scale
}
