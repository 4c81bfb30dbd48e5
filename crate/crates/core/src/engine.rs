//! Linear-time construction of the resident profile.
//!
//! Every trajectory, once the running mean fitness is added back, moves along
//! a straight ray: it starts a fixed gap below its parent's ray and keeps a
//! constant slope forever. The resident at any time is whoever's ray is on
//! top, so the whole computation reduces to building the upper envelope of n
//! rays whose starting points themselves sit on the envelope.
//!
//! [`build`] does this in a single pass: a cursor walks forward through the
//! segment list to find each newcomer's parent (segment starts only grow, so
//! the cursor never backs up), and a backward loop pops segments the newcomer
//! overtakes (each segment is popped at most once). Both loops together touch
//! at most `3n` segments, giving Θ(n) overall.

use alloc::vec::Vec;

use crate::config::BirthConfig;
use crate::profile::{DomainError, ResidencySegment, ResidentProfile};

/// A trajectory in the additive picture: a ray starting `birth_depth` below
/// its parent's ray, with slope `parent slope + own advantage`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ContinuedRay {
    /// Trajectory index (0 is the initial resident).
    pub index: usize,
    /// Birth time.
    pub t: f64,
    /// Index of the resident at birth, or -1 for the root.
    pub parent: isize,
    /// Constant slope of the ray.
    pub slope: f64,
    /// Value of the ray at its birth time.
    pub y0: f64,
}

impl ContinuedRay {
    /// Value of the ray at `t`, defined for all `t` (extrapolates backwards).
    pub fn line_value(&self, t: f64) -> f64 {
        self.y0 + self.slope * (t - self.t)
    }

    /// Value of the ray at `t`, rejecting times before birth.
    pub fn value_at(&self, t: f64) -> Result<f64, DomainError> {
        if t.is_nan() || t < self.t {
            return Err(DomainError::BeforeStart { index: self.index, t });
        }
        Ok(self.line_value(t))
    }

    /// Parent index as `usize`; `None` for the root.
    pub fn parent_index(&self) -> Option<usize> {
        usize::try_from(self.parent).ok()
    }
}

/// Work counters for one [`build`] run, used to check the linear-time bound.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SweepStats {
    /// Forward cursor advances during parent searches.
    pub steps_forward: usize,
    /// Iterations of the backward overtake loop (pops plus the final probe).
    pub steps_backward: usize,
    /// Segments removed because a newcomer overtook them.
    pub segments_discarded: usize,
}

impl SweepStats {
    /// Total segment visits; bounded by `3n` for `n` births.
    pub fn sweep_steps(&self) -> usize {
        self.steps_forward + self.steps_backward
    }
}

/// Everything the sweep produces: the rays, the profile, and work counters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EngineOutput {
    /// Ray `i` describes trajectory `i`; index 0 is the initial resident.
    pub rays: Vec<ContinuedRay>,
    /// The resident profile (upper envelope of the rays).
    pub profile: ResidentProfile,
    /// Work counters for the run.
    pub stats: SweepStats,
    /// The birth depth the run used; extinction happens this far below the
    /// envelope.
    pub birth_depth: f64,
}

impl EngineOutput {
    /// The ray of trajectory `index`.
    pub fn ray(&self, index: usize) -> Result<&ContinuedRay, DomainError> {
        self.rays.get(index).ok_or(DomainError::UnknownTrajectory { index })
    }

    /// A trajectory dies when its ray falls this far below the envelope.
    pub fn extinction_depth(&self) -> f64 {
        self.birth_depth
    }
}

/// Build the resident profile for `config` in a single Θ(n) sweep.
pub fn build(config: &BirthConfig) -> EngineOutput {
    let depth = config.birth_depth();
    let mut rays: Vec<ContinuedRay> = Vec::with_capacity(config.len() + 1);
    rays.push(ContinuedRay { index: 0, t: 0.0, parent: -1, slope: 0.0, y0: 1.0 });

    let mut segments: Vec<ResidencySegment> = Vec::with_capacity(config.len() + 1);
    segments.push(ResidencySegment { s: 0.0, m: 0, fitness: 0.0, y_start: 1.0 });

    let mut stats = SweepStats::default();
    // cursor: index of the segment covering the previous birth time. Birth
    // times only grow, so it never moves backwards.
    let mut cursor = 0usize;

    for (offset, ev) in config.events().iter().enumerate() {
        let i = offset + 1;

        // Parent search: advance to the segment covering ev.t. Pops only ever
        // remove segments starting after the current birth time, so the
        // cursor's segment is still present and still covers the previous
        // birth time.
        debug_assert!(cursor < segments.len(), "cursor points at a live segment");
        while cursor + 1 < segments.len() && segments[cursor + 1].s <= ev.t {
            cursor += 1;
            stats.steps_forward += 1;
        }
        let parent = segments[cursor].m;

        // The newcomer starts exactly `depth` below its parent's ray.
        let slope = rays[parent].slope + ev.a;
        let y0 = rays[parent].line_value(ev.t) - depth;
        let ray = ContinuedRay { index: i, t: ev.t, parent: parent as isize, slope, y0 };
        rays.push(ray);

        // Overtake loop: drop envelope segments the new ray submerges, then
        // append the crossing with the survivor if the new ray ever wins.
        loop {
            stats.steps_backward += 1;
            let last = *segments.last().expect("the root segment is never popped");
            let at = if last.s > ev.t { last.s } else { ev.t };
            let top = rays[last.m].line_value(at);
            let gap = top - ray.line_value(at);
            let rel = slope - rays[last.m].slope;
            // Ties go to the steeper ray, and the newcomer has the highest
            // index, so gap == 0 with rel >= 0 means the newcomer wins at
            // `at` already.
            if gap < 0.0 || (gap == 0.0 && rel >= 0.0) {
                // The parent segment covers ev.t and sits `depth` above the
                // newcomer there, so only segments starting after ev.t can be
                // submerged.
                debug_assert!(last.s > ev.t, "a segment covering the birth time was popped");
                segments.pop();
                stats.segments_discarded += 1;
                continue;
            }
            if rel > 0.0 {
                // Strictly steeper: the newcomer overtakes at a finite time.
                let x = at + gap / rel;
                segments.push(ResidencySegment {
                    s: x,
                    m: i,
                    fitness: slope,
                    y_start: ray.line_value(x),
                });
            }
            break;
        }
    }

    EngineOutput {
        rays,
        profile: ResidentProfile { segments },
        stats,
        birth_depth: depth,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{BirthConfig, BirthEvent};

    fn events(pairs: &[(f64, f64)]) -> Vec<BirthEvent> {
        pairs.iter().map(|&(t, a)| BirthEvent { t, a }).collect()
    }

    fn standard(pairs: &[(f64, f64)]) -> BirthConfig {
        BirthConfig::standard(events(pairs)).expect("test config must validate")
    }

    #[test]
    fn no_births_leaves_the_root_resident() {
        let out = build(&standard(&[]));
        assert_eq!(out.rays.len(), 1);
        assert_eq!(out.profile, ResidentProfile::root());
        assert_eq!(out.stats.sweep_steps(), 0);
    }

    #[test]
    fn single_birth_takes_over_after_climbing_the_gap() {
        // born at 0.5 with advantage 2, one unit below the flat root ray:
        // catches up after 1/2 time unit, so the change is at t = 1.
        let out = build(&standard(&[(0.5, 2.0)]));
        let segs = &out.profile.segments;
        assert_eq!(segs.len(), 2, "expected exactly one resident change");
        assert_eq!((segs[1].s, segs[1].m, segs[1].fitness), (1.0, 1, 2.0));
        assert_eq!(segs[1].y_start, 1.0, "the envelope is continuous at a change");
        assert_eq!(out.rays[1].parent, 0);
        assert_eq!(out.rays[1].y0, 0.0);
    }

    #[test]
    fn pending_takeover_is_discarded_by_a_steeper_newcomer() {
        // Trajectory 2 is on course to take over at 3.4, but trajectory 3 is
        // born into 1's reign and submerges that pending stint entirely.
        let out = build(&standard(&[(1.0, 1.0), (1.8, 1.5), (2.35, 1.5)]));

        let r = &out.rays;
        assert_eq!((r[1].t, r[1].parent, r[1].slope, r[1].y0), (1.0, 0, 1.0, 0.0));
        assert_eq!((r[2].t, r[2].parent, r[2].slope, r[2].y0), (1.8, 0, 1.5, 0.0));
        assert_eq!((r[3].t, r[3].parent), (2.35, 1));
        assert_eq!(r[3].slope, 2.5, "child slope stacks on the resident's slope");
        // resident ray at 2.35 is 1.35; the child starts one unit below
        assert!((r[3].y0 - 0.35).abs() < 1e-15, "y0 = {}", r[3].y0);

        let segs = &out.profile.segments;
        assert_eq!(segs.len(), 3, "trajectory 2 never becomes resident: {segs:?}");
        assert_eq!((segs[1].m, segs[2].m), (1, 3));
        assert_eq!(segs[1].s, 2.0);
        assert!((segs[2].s - (2.35 + 2.0 / 3.0)).abs() < 1e-12, "s2 = {}", segs[2].s);
        assert_eq!(out.stats.segments_discarded, 1, "exactly one stint was submerged");
        // fitness along the profile increases strictly
        assert!(segs.windows(2).all(|w| w[0].fitness < w[1].fitness));
    }

    #[test]
    fn exact_tie_at_the_top_goes_to_the_steeper_ray() {
        // Both rays reach the root line exactly at t = 1. The steeper one
        // (index 2) takes the spot; trajectory 1's pending stint is popped.
        let out = build(&standard(&[(0.5, 2.0), (0.75, 4.0)]));
        let segs = &out.profile.segments;
        assert_eq!(segs.len(), 2, "trajectory 1's stint is fully submerged: {segs:?}");
        assert_eq!((segs[1].s, segs[1].m, segs[1].fitness), (1.0, 2, 4.0));
    }

    #[test]
    fn quadratic_family_n3_profile() {
        // t_k = 1 - 1/k + (k-1)/9, a_k = k: every trajectory gets a stint.
        let n = 3.0;
        let pairs: Vec<(f64, f64)> = (1..=3)
            .map(|k| {
                let kf = k as f64;
                (1.0 - 1.0 / kf + (kf - 1.0) / (n * n), kf)
            })
            .collect();
        let out = build(&standard(&pairs));
        let segs = &out.profile.segments;
        assert_eq!(segs.len(), 4);
        let expect = [(1.0, 1usize), (11.0 / 9.0, 2), (13.0 / 9.0, 3)];
        for (seg, &(s, m)) in segs[1..].iter().zip(&expect) {
            assert!((seg.s - s).abs() < 1e-12, "change at {} expected {}", seg.s, s);
            assert_eq!(seg.m, m);
        }
    }

    #[test]
    fn sweep_work_is_linear() {
        // alternating winners and losers keep both loops busy
        let pairs: Vec<(f64, f64)> = (1..=200)
            .map(|i| {
                let t = i as f64 * 0.01;
                let a = if i % 3 == 0 { 0.2 } else { 2.0 + (i % 7) as f64 };
                (t, a)
            })
            .collect();
        let cfg = standard(&pairs);
        let out = build(&cfg);
        assert!(
            out.stats.sweep_steps() <= 3 * cfg.len(),
            "sweep visited {} segments for {} births",
            out.stats.sweep_steps(),
            cfg.len()
        );
    }

    #[test]
    fn deep_birth_depth_shifts_the_whole_race() {
        // depth 0.7: the climber starts 0.7 below the root ray instead of 1.
        let cfg = BirthConfig::new(events(&[(0.5, 2.0)]), 0.7).unwrap();
        let out = build(&cfg);
        assert!((out.rays[1].y0 - 0.3).abs() < 1e-15, "y0 = {}", out.rays[1].y0);
        let segs = &out.profile.segments;
        assert_eq!(segs.len(), 2);
        assert!((segs[1].s - 0.85).abs() < 1e-15, "change at {}", segs[1].s);
        assert_eq!(out.extinction_depth(), 0.7);
    }
}
