//! Validated birth configurations — the input every solver consumes.

use alloc::vec::Vec;
use core::fmt;

/// One birth: at time `t` a new trajectory appears whose slope exceeds the
/// current resident's by `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BirthEvent {
    /// Birth time, finite and `>= 0`.
    pub t: f64,
    /// Selective advantage, finite and `> 0`.
    pub a: f64,
}

/// Why a raw event list was rejected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConfigError {
    /// A birth time was negative or not finite.
    BadBirthTime { index: usize, t: f64 },
    /// An advantage was non-positive or not finite.
    NonPositiveSlope { index: usize, a: f64 },
    /// Events were not in increasing time order (and sorting was not asked for).
    UnorderedBirthTimes { index: usize },
    /// Two births at exactly the same time.
    DuplicateBirthTime { index: usize, t: f64 },
    /// `birth_depth` outside `(0, 1]` or not finite.
    InvalidBirthDepth { birth_depth: f64 },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ConfigError::BadBirthTime { index, t } => {
                write!(f, "birth {index}: time {t} must be finite and non-negative")
            }
            ConfigError::NonPositiveSlope { index, a } => {
                write!(f, "birth {index}: advantage {a} must be finite and positive")
            }
            ConfigError::UnorderedBirthTimes { index } => {
                write!(f, "birth {index} is earlier than its predecessor (input not sorted)")
            }
            ConfigError::DuplicateBirthTime { index, t } => {
                write!(f, "birth {index}: duplicate birth time {t}")
            }
            ConfigError::InvalidBirthDepth { birth_depth } => {
                write!(f, "birth depth {birth_depth} must lie in (0, 1]")
            }
        }
    }
}

impl core::error::Error for ConfigError {}

/// A time-ordered birth list plus the birth depth.
///
/// `birth_depth` is the gap below the resident ray at which a newborn starts:
/// 1 in the standard model (newborns start at height 0 and die at 0), and
/// `1 - b` under moderate selection (newborns start at height `b` and die on
/// returning to `b`).
///
/// Ordering, positivity, and depth range are enforced at construction, so the
/// solvers never see malformed input.
#[derive(Debug, Clone, PartialEq)]
pub struct BirthConfig {
    events: Vec<BirthEvent>,
    birth_depth: f64,
}

impl BirthConfig {
    /// Standard-model birth depth.
    pub const STANDARD_DEPTH: f64 = 1.0;

    /// Validates an already time-ordered event list.
    pub fn new(events: Vec<BirthEvent>, birth_depth: f64) -> Result<Self, ConfigError> {
        if !(birth_depth > 0.0 && birth_depth <= 1.0) {
            return Err(ConfigError::InvalidBirthDepth { birth_depth });
        }
        for (index, ev) in events.iter().enumerate() {
            if !ev.t.is_finite() || ev.t < 0.0 {
                return Err(ConfigError::BadBirthTime { index, t: ev.t });
            }
            if !ev.a.is_finite() || ev.a <= 0.0 {
                return Err(ConfigError::NonPositiveSlope { index, a: ev.a });
            }
            if index > 0 {
                let prev = events[index - 1].t;
                if ev.t < prev {
                    return Err(ConfigError::UnorderedBirthTimes { index });
                }
                if ev.t == prev {
                    return Err(ConfigError::DuplicateBirthTime { index, t: ev.t });
                }
            }
        }
        Ok(Self { events, birth_depth })
    }

    /// Sorts by birth time, then validates; exact duplicates are still rejected.
    pub fn from_unsorted(mut events: Vec<BirthEvent>, birth_depth: f64) -> Result<Self, ConfigError> {
        events.sort_by(|x, y| x.t.total_cmp(&y.t));
        Self::new(events, birth_depth)
    }

    /// Standard-model configuration (birth depth 1).
    pub fn standard(events: Vec<BirthEvent>) -> Result<Self, ConfigError> {
        Self::new(events, Self::STANDARD_DEPTH)
    }

    /// The births, in strictly increasing time order. Trajectory `i + 1`
    /// corresponds to `events()[i]`; trajectory 0 is implicit.
    pub fn events(&self) -> &[BirthEvent] {
        &self.events
    }

    /// Gap below the resident ray at which newborns start.
    pub fn birth_depth(&self) -> f64 {
        self.birth_depth
    }

    /// Number of births (trajectory 0 not counted).
    pub fn len(&self) -> usize {
        self.events.len()
    }

    /// `true` when there are no births at all.
    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}
