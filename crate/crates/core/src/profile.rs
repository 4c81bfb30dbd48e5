//! Resident profiles: who holds height 1 when, and at what fitness.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::close;

/// A query outside the domain of a finished solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainError {
    /// Time queries start at 0.
    NegativeTime { t: f64 },
    /// Trajectory index out of range.
    UnknownTrajectory { index: usize },
    /// A ray was evaluated before its start time.
    BeforeStart { index: usize, t: f64 },
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DomainError::NegativeTime { t } => write!(f, "time {t} is before the start of the system"),
            DomainError::UnknownTrajectory { index } => write!(f, "no trajectory with index {index}"),
            DomainError::BeforeStart { index, t } => {
                write!(f, "ray {index} is not defined at time {t} (before its birth)")
            }
        }
    }
}

impl core::error::Error for DomainError {}

/// One residency stretch: trajectory `m` is resident from `s` until the next
/// segment starts; `fitness` is the mean-fitness value on the stretch and
/// `y_start` the resident ray's value at `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ResidencySegment {
    /// Start of the stretch (a resident change time, except for the first).
    pub s: f64,
    /// Resident trajectory index.
    pub m: usize,
    /// Mean fitness while `m` is resident; equals the slope of ray `m`.
    pub fitness: f64,
    /// Value of the resident ray at `s`.
    pub y_start: f64,
}

/// Right-continuous description of the resident and the mean fitness.
///
/// Segment starts and fitness values both increase strictly along the list;
/// the first segment is always `(s = 0, m = 0, fitness = 0)`, and the last
/// one extends to infinity.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ResidentProfile {
    /// The residency stretches in time order.
    pub segments: Vec<ResidencySegment>,
}

/// First disagreement between two profiles, for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileDifference {
    /// Index of the first differing segment (or the shorter length).
    pub segment: usize,
    /// Which field differs: `"len"`, `"s"`, `"m"`, `"fitness"`, or `"y_start"`.
    pub field: &'static str,
    /// The two values that differ (`m` and lengths are cast to `f64`).
    pub left: f64,
    /// See `left`.
    pub right: f64,
}

impl fmt::Display for ProfileDifference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "segment {}: {} differs ({} vs {})",
            self.segment, self.field, self.left, self.right
        )
    }
}

impl ResidentProfile {
    /// The profile before any birth: trajectory 0 resident forever.
    pub fn root() -> Self {
        ResidentProfile {
            segments: vec![ResidencySegment { s: 0.0, m: 0, fitness: 0.0, y_start: 1.0 }],
        }
    }

    /// Index of the segment covering `t` (right-continuous: at a change time
    /// the new resident already counts).
    pub fn segment_index_at(&self, t: f64) -> Result<usize, DomainError> {
        if t.is_nan() || t < 0.0 {
            return Err(DomainError::NegativeTime { t });
        }
        // partition_point is at least 1: the first segment starts at 0.
        Ok(self.segments.partition_point(|seg| seg.s <= t) - 1)
    }

    /// The resident trajectory at `t`.
    pub fn resident_at(&self, t: f64) -> Result<usize, DomainError> {
        Ok(self.segments[self.segment_index_at(t)?].m)
    }

    /// Mean fitness at `t`.
    pub fn fitness_at(&self, t: f64) -> Result<f64, DomainError> {
        Ok(self.segments[self.segment_index_at(t)?].fitness)
    }

    /// Value of the resident ray at `t` (the upper envelope of all rays).
    pub fn resident_line_at(&self, t: f64) -> Result<f64, DomainError> {
        let seg = &self.segments[self.segment_index_at(t)?];
        Ok(seg.y_start + seg.fitness * (t - seg.s))
    }

    /// The resident changes, i.e. every segment after the initial one.
    pub fn changes(&self) -> &[ResidencySegment] {
        &self.segments[1..]
    }

    /// The final residency stretch.
    pub fn last(&self) -> &ResidencySegment {
        self.segments.last().expect("a profile always has the root segment")
    }

    /// First field-level disagreement with `other`, comparing times and
    /// fitness values within `tol` (scaled for large magnitudes) and resident
    /// indices exactly. `None` means the profiles agree.
    pub fn first_difference(&self, other: &Self, tol: f64) -> Option<ProfileDifference> {
        let n = self.segments.len().min(other.segments.len());
        for i in 0..n {
            let (a, b) = (&self.segments[i], &other.segments[i]);
            if !close(a.s, b.s, tol) {
                return Some(ProfileDifference { segment: i, field: "s", left: a.s, right: b.s });
            }
            if a.m != b.m {
                return Some(ProfileDifference {
                    segment: i,
                    field: "m",
                    left: a.m as f64,
                    right: b.m as f64,
                });
            }
            if !close(a.fitness, b.fitness, tol) {
                return Some(ProfileDifference {
                    segment: i,
                    field: "fitness",
                    left: a.fitness,
                    right: b.fitness,
                });
            }
            if !close(a.y_start, b.y_start, tol) {
                return Some(ProfileDifference {
                    segment: i,
                    field: "y_start",
                    left: a.y_start,
                    right: b.y_start,
                });
            }
        }
        if self.segments.len() != other.segments.len() {
            return Some(ProfileDifference {
                segment: n,
                field: "len",
                left: self.segments.len() as f64,
                right: other.segments.len() as f64,
            });
        }
        None
    }
}
