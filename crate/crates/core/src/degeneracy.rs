//! Post-hoc detection of measure-zero coincidences.
//!
//! The solvers themselves never compare with a tolerance — exact ties are
//! resolved by fixed rules (steeper ray wins, then the younger one). But a
//! birth list sitting within rounding distance of a tie is fragile: a
//! different arithmetic order could flip the outcome. This module inspects a
//! finished solution and flags every such near-coincidence so callers can
//! decide whether to trust, perturb, or reject the input.

use alloc::vec::Vec;

use crate::close;
use crate::config::BirthConfig;
use crate::engine::{build, EngineOutput};
use crate::heights::extinction_time;

/// The event an extinction coincided with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum CoincidentEvent {
    ResidentChange { resident: usize },
    Birth { born: usize },
}

/// One kind of near-tie.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum DegeneracyKind {
    /// At a resident change a third trajectory also sits at height one.
    TripleAtOne { outgoing: usize, incoming: usize, bystander: usize },
    /// A trajectory dies at the same instant something else happens.
    ExtinctionCoincidence { dying: usize, event: CoincidentEvent },
    /// A birth lands exactly on a resident change.
    BirthAtResidentChange { born: usize },
}

/// A near-tie, where it happened, and what it involves.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DegeneracyFlag {
    pub t: f64,
    pub kind: DegeneracyKind,
}

/// All near-ties found in one solution.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DegeneracyReport {
    /// The relative closeness used; times within `tolerance` (scaled by
    /// magnitude) count as coinciding.
    pub tolerance: f64,
    /// Flags in time order.
    pub flags: Vec<DegeneracyFlag>,
}

impl DegeneracyReport {
    /// No near-ties: every tolerance-sized perturbation of the input keeps
    /// the same combinatorial outcome.
    pub fn is_clean(&self) -> bool {
        self.flags.is_empty()
    }
}

/// Solve `config` and inspect the result; see [`detect_degeneracy_in`].
pub fn detect_degeneracy(config: &BirthConfig, tolerance: f64) -> DegeneracyReport {
    detect_degeneracy_in(&build(config), tolerance)
}

// Indices into the sorted `times` list whose value is within tolerance of x.
fn window(times: &[f64], x: f64, tolerance: f64) -> core::ops::Range<usize> {
    let at = times.partition_point(|&t| t < x);
    let mut lo = at;
    while lo > 0 && close(times[lo - 1], x, tolerance) {
        lo -= 1;
    }
    let mut hi = at;
    while hi < times.len() && close(times[hi], x, tolerance) {
        hi += 1;
    }
    lo..hi
}

/// Inspect a finished solution for near-ties within `tolerance`.
pub fn detect_degeneracy_in(out: &EngineOutput, tolerance: f64) -> DegeneracyReport {
    let mut flags: Vec<DegeneracyFlag> = Vec::new();
    let segs = &out.profile.segments;

    let change_times: Vec<f64> = segs[1..].iter().map(|s| s.s).collect();
    let birth_times: Vec<f64> = out.rays[1..].iter().map(|r| r.t).collect();

    // births landing on resident changes
    for ray in &out.rays[1..] {
        if !window(&change_times, ray.t, tolerance).is_empty() {
            flags.push(DegeneracyFlag {
                t: ray.t,
                kind: DegeneracyKind::BirthAtResidentChange { born: ray.index },
            });
        }
    }

    // extinctions landing on changes or births
    let extinctions: Vec<f64> = (0..out.rays.len())
        .map(|i| extinction_time(out, i).expect("ray indices are in range"))
        .collect();
    for (i, &e) in extinctions.iter().enumerate() {
        if !e.is_finite() {
            continue;
        }
        for j in window(&change_times, e, tolerance) {
            flags.push(DegeneracyFlag {
                t: e,
                kind: DegeneracyKind::ExtinctionCoincidence {
                    dying: i,
                    event: CoincidentEvent::ResidentChange { resident: segs[j + 1].m },
                },
            });
        }
        for j in window(&birth_times, e, tolerance) {
            flags.push(DegeneracyFlag {
                t: e,
                kind: DegeneracyKind::ExtinctionCoincidence {
                    dying: i,
                    event: CoincidentEvent::Birth { born: j + 1 },
                },
            });
        }
    }

    // a third trajectory touching height one at a change: walk each ray
    // along the changes inside its lifetime and compare it to the envelope
    for ray in &out.rays {
        let e = extinctions[ray.index];
        let j0 = segs.partition_point(|seg| seg.s <= ray.t);
        for (j, seg) in segs.iter().enumerate().skip(j0) {
            if seg.s > e {
                break;
            }
            let (outgoing, incoming) = (segs[j - 1].m, seg.m);
            if ray.index == outgoing || ray.index == incoming {
                continue;
            }
            if close(ray.line_value(seg.s), seg.y_start, tolerance) {
                flags.push(DegeneracyFlag {
                    t: seg.s,
                    kind: DegeneracyKind::TripleAtOne { outgoing, incoming, bystander: ray.index },
                });
            }
        }
    }

    flags.sort_by(|a, b| a.t.total_cmp(&b.t));
    DegeneracyReport { tolerance, flags }
}
