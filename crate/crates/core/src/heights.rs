//! Heights, lifetimes, and kink accounting on top of an envelope solution.
//!
//! Everything here is derived from an [`EngineOutput`]: a trajectory's height
//! at time `t` is its ray minus the resident line plus one, it dies when the
//! gap to the resident line reaches the birth depth, and its kinks are the
//! resident changes it lives through. Single queries are logarithmic in the
//! number of segments; the batch functions sweep once over all of them.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::engine::{ContinuedRay, EngineOutput};
use crate::profile::{DomainError, ResidencySegment};
use crate::SlopeChange;

// Time at which `ray`, extended along `seg`'s resident line, has sunk `depth`
// below it; None if the ray is not falling relative to this segment. Shared
// by every lifetime computation so they agree on the arithmetic.
fn sink_on_segment(ray: &ContinuedRay, seg: &ResidencySegment, depth: f64) -> Option<f64> {
    let gs = ray.slope - seg.fitness;
    if gs >= 0.0 {
        return None;
    }
    let t0 = if seg.s > ray.t { seg.s } else { ray.t };
    // margin above the extinction level at t0
    let g0 = ray.line_value(t0) - (seg.y_start + seg.fitness * (t0 - seg.s)) + depth;
    let hit = t0 + g0 / -gs;
    Some(if hit > t0 { hit } else { t0 })
}

/// When trajectory `index` dies, or infinity if it never does.
///
/// Two binary searches over the profile: the margin above the extinction
/// level is concave in time and positive just after birth, so the segment
/// starts where it has run out form a suffix of the segment list.
pub fn extinction_time(out: &EngineOutput, index: usize) -> Result<f64, DomainError> {
    let ray = out.ray(index)?;
    let depth = out.birth_depth;
    let segs = &out.profile.segments;

    // first segment starting strictly after birth; the one before covers it
    let lo = segs.partition_point(|seg| seg.s <= ray.t);
    let sunk = lo + segs[lo..].partition_point(|seg| ray.line_value(seg.s) - seg.y_start + depth > 0.0);

    if sunk < segs.len() {
        // margin positive at segment sunk-1's start, gone at its end, so the
        // ray must be falling there; the unwrap_or covers the last-ulp case
        // where the recorded segment start already sits on the boundary
        let seg = &segs[sunk - 1];
        return Ok(sink_on_segment(ray, seg, depth).unwrap_or(segs[sunk].s));
    }
    match sink_on_segment(ray, segs.last().expect("profiles are never empty"), depth) {
        Some(t) => Ok(t),
        None => Ok(f64::INFINITY),
    }
}

/// Height of trajectory `index` at time `t`: one while resident, one minus
/// the gap to the resident line while alive, zero outside the lifetime.
pub fn height_at(out: &EngineOutput, index: usize, t: f64) -> Result<f64, DomainError> {
    if t.is_nan() || t < 0.0 {
        return Err(DomainError::NegativeTime { t });
    }
    let ray = out.ray(index)?;
    if t < ray.t || t > extinction_time(out, index)? {
        return Ok(0.0);
    }
    let envelope = out.profile.resident_line_at(t)?;
    Ok(ray.line_value(t) - (envelope - 1.0))
}

/// One vertex of a piecewise-linear height graph.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PathVertex {
    pub t: f64,
    pub h: f64,
}

/// The height graph of one trajectory, ready for plotting.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TrajectoryPath {
    pub index: usize,
    pub birth: f64,
    /// Infinity when the trajectory never dies.
    pub extinction: f64,
    /// Graph vertices in time order, starting at the birth point and ending
    /// at the extinction point when there is one.
    pub vertices: Vec<PathVertex>,
    /// Speed after each vertex that starts a new linear piece: entry 0 is
    /// the birth speed, later entries follow resident changes.
    pub kinks: Vec<SlopeChange>,
}

/// Height graph of a single trajectory. O(log n + own kinks).
pub fn trajectory_polyline(out: &EngineOutput, index: usize) -> Result<TrajectoryPath, DomainError> {
    let ray = out.ray(index)?;
    let depth = out.birth_depth;
    let e = extinction_time(out, index)?;
    let segs = &out.profile.segments;

    let birth_h = if index == 0 { 1.0 } else { 1.0 - depth };
    let mut vertices = vec![PathVertex { t: ray.t, h: birth_h }];
    let j0 = segs.partition_point(|seg| seg.s <= ray.t) - 1;
    let mut kinks = vec![SlopeChange { t: ray.t, slope: ray.slope - segs[j0].fitness }];

    for seg in &segs[j0 + 1..] {
        // a change the trajectory does not strictly outlive is not its kink
        if seg.s >= e {
            break;
        }
        vertices.push(PathVertex { t: seg.s, h: ray.line_value(seg.s) - seg.y_start + 1.0 });
        kinks.push(SlopeChange { t: seg.s, slope: ray.slope - seg.fitness });
    }
    if e.is_finite() {
        vertices.push(PathVertex { t: e, h: 1.0 - depth });
    }
    Ok(TrajectoryPath { index, birth: ray.t, extinction: e, vertices, kinks })
}

/// The advantage of some trajectory is not an integer in `1..=bound`, so the
/// slope-bounded batch sweep does not apply.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeBoundError {
    pub index: usize,
    pub advantage: f64,
    pub bound: u32,
}

impl fmt::Display for SlopeBoundError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "trajectory {} has advantage {}, not an integer in 1..={}",
            self.index, self.advantage, self.bound
        )
    }
}

impl core::error::Error for SlopeBoundError {}

/// All height graphs plus the work counter of the batch sweep.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SlopeProfiles {
    /// Entry `i` is trajectory `i`'s height graph.
    pub polylines: Vec<TrajectoryPath>,
    /// Kink updates performed at resident changes; with advantages in
    /// `1..=k` this is at most `(3k+1) * n` for `n` births.
    pub updates: usize,
}

/// Height graphs for every trajectory in one sweep over the profile.
///
/// Requires every advantage to be an integer in `1..=bound`: then each
/// trajectory's speed starts at most at `bound`, drops by at least one per
/// change it survives, and stays above `-2 * bound`, so each graph has a
/// bounded number of pieces and the sweep is linear in `bound * n`.
pub fn all_slope_profiles(out: &EngineOutput, bound: u32) -> Result<SlopeProfiles, SlopeBoundError> {
    let depth = out.birth_depth;
    let segs = &out.profile.segments;
    let bf = f64::from(bound);
    for ray in &out.rays[1..] {
        let parent = &out.rays[ray.parent as usize];
        let a = ray.slope - parent.slope;
        // integer advantages survive the subtraction exactly
        if !(a >= 1.0 && a <= bf && a == ((a as u64) as f64)) {
            return Err(SlopeBoundError { index: ray.index, advantage: a, bound });
        }
    }

    let mut paths: Vec<TrajectoryPath> = out
        .rays
        .iter()
        .map(|r| TrajectoryPath {
            index: r.index,
            birth: r.t,
            extinction: f64::INFINITY,
            vertices: Vec::new(),
            kinks: Vec::new(),
        })
        .collect();
    paths[0].vertices.push(PathVertex { t: 0.0, h: 1.0 });
    paths[0].kinks.push(SlopeChange { t: 0.0, slope: 0.0 });

    let mut alive: Vec<usize> = vec![0];
    let mut next_birth = 1usize;
    let mut updates = 0usize;

    for j in 1..segs.len() {
        let seg = segs[j];
        // births on segment j-1: strictly before this change
        while next_birth < out.rays.len() && out.rays[next_birth].t < seg.s {
            let r = &out.rays[next_birth];
            paths[next_birth].vertices.push(PathVertex { t: r.t, h: 1.0 - depth });
            paths[next_birth].kinks.push(SlopeChange { t: r.t, slope: r.slope - segs[j - 1].fitness });
            alive.push(next_birth);
            next_birth += 1;
        }

        // deaths on segment j-1 (a death exactly at the change counts too);
        // everyone else lives through the change and takes a kink
        let prev = segs[j - 1];
        alive.retain(|&i| {
            let ray = &out.rays[i];
            if let Some(tau) = sink_on_segment(ray, &prev, depth) {
                if tau <= seg.s {
                    paths[i].extinction = tau;
                    paths[i].vertices.push(PathVertex { t: tau, h: 1.0 - depth });
                    return false;
                }
            }
            true
        });
        for &i in &alive {
            let ray = &out.rays[i];
            paths[i].vertices.push(PathVertex { t: seg.s, h: ray.line_value(seg.s) - seg.y_start + 1.0 });
            paths[i].kinks.push(SlopeChange { t: seg.s, slope: ray.slope - seg.fitness });
            updates += 1;
        }
    }

    // births after the last change, then final fates on the last segment
    let last = *segs.last().expect("profiles are never empty");
    while next_birth < out.rays.len() {
        let r = &out.rays[next_birth];
        paths[next_birth].vertices.push(PathVertex { t: r.t, h: 1.0 - depth });
        paths[next_birth].kinks.push(SlopeChange { t: r.t, slope: r.slope - last.fitness });
        alive.push(next_birth);
        next_birth += 1;
    }
    for &i in &alive {
        if let Some(tau) = sink_on_segment(&out.rays[i], &last, depth) {
            paths[i].extinction = tau;
            paths[i].vertices.push(PathVertex { t: tau, h: 1.0 - depth });
        }
    }

    Ok(SlopeProfiles { polylines: paths, updates })
}

/// One resident change in a [`KinkLedger`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct KinkEntry {
    /// Change time.
    pub s: f64,
    /// Incoming resident.
    pub resident: usize,
    /// Trajectories alive at the change; each takes one kink.
    pub alive: usize,
    /// Running kink total including this change.
    pub cumulative: u64,
}

/// Kink counts per resident change and in total, up to a horizon.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct KinkLedger {
    pub horizon: f64,
    pub entries: Vec<KinkEntry>,
    pub total: u64,
}

/// Count every trajectory kink at changes up to `horizon` (use infinity for
/// all of them). Alive at a change means born strictly before it and dying
/// strictly after it.
pub fn count_kinks(out: &EngineOutput, horizon: f64) -> KinkLedger {
    debug_assert!(!horizon.is_nan(), "horizon must be a number or infinity");
    let mut deaths: Vec<f64> = (0..out.rays.len())
        .filter_map(|i| {
            let e = extinction_time(out, i).expect("ray indices are in range");
            e.is_finite().then_some(e)
        })
        .collect();
    deaths.sort_unstable_by(f64::total_cmp);

    let mut entries = Vec::new();
    let mut total = 0u64;
    let mut born = 0usize;
    let mut dead = 0usize;
    for seg in out.profile.changes() {
        if seg.s > horizon {
            break;
        }
        while born < out.rays.len() && out.rays[born].t < seg.s {
            born += 1;
        }
        while dead < deaths.len() && deaths[dead] <= seg.s {
            dead += 1;
        }
        let alive = born - dead;
        total += alive as u64;
        entries.push(KinkEntry { s: seg.s, resident: seg.m, alive, cumulative: total });
    }
    KinkLedger { horizon, entries, total }
}

/// Tallies over one inter-event stretch of the system.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct IntervalStats {
    pub start: f64,
    pub end: f64,
    /// Births strictly inside the stretch (a birth exactly at the end point
    /// belongs to the next stretch).
    pub births: usize,
    /// Kinks handed out at changes inside the stretch.
    pub kinks: u64,
    /// Mean-fitness gain over the stretch.
    pub fitness_increment: f64,
}

/// Renewal and solitary-change structure of one solved system.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RenewalRecord {
    /// Times when the system collapses to its resident alone, the resident
    /// being new since the previous such collapse.
    pub renewal_times: Vec<f64>,
    /// Change times after which no alive trajectory is still climbing.
    pub solitary_times: Vec<f64>,
    /// Stretches between consecutive renewals (the first starts at 0);
    /// trailing unfinished stretches are dropped.
    pub renewal_intervals: Vec<IntervalStats>,
    /// Same, between consecutive solitary changes.
    pub solitary_intervals: Vec<IntervalStats>,
}

// Max-heap key ordering f64 slopes totally; ties broken by index.
#[derive(PartialEq, Eq)]
struct SlopeKey {
    slope: u64,
    index: usize,
}

impl SlopeKey {
    fn new(slope: f64, index: usize) -> Self {
        // total_cmp order as sortable bits: flip sign bit for positives,
        // all bits for negatives
        let bits = slope.to_bits();
        let key = if bits >> 63 == 0 { bits ^ (1 << 63) } else { !bits };
        SlopeKey { slope: key, index }
    }
}

impl Ord for SlopeKey {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.slope.cmp(&other.slope).then(self.index.cmp(&other.index))
    }
}

impl PartialOrd for SlopeKey {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

// Running tallies for one open interval.
struct OpenInterval {
    start: f64,
    births: usize,
    kinks: u64,
    fitness0: f64,
}

impl OpenInterval {
    fn close(&mut self, end: f64, fitness: f64) -> IntervalStats {
        let stats = IntervalStats {
            start: self.start,
            end,
            births: self.births,
            kinks: self.kinks,
            fitness_increment: fitness - self.fitness0,
        };
        *self = OpenInterval { start: end, births: 0, kinks: 0, fitness0: fitness };
        stats
    }
}

/// Sweep the merged event stream (deaths, changes, births — in that order at
/// equal times) and extract renewal times, solitary changes, and per-stretch
/// tallies.
pub fn renewal_and_solitary(out: &EngineOutput) -> RenewalRecord {
    let segs = &out.profile.segments;
    let rays = &out.rays;

    let mut deaths: Vec<(f64, usize)> = (0..rays.len())
        .filter_map(|i| {
            let e = extinction_time(out, i).expect("ray indices are in range");
            e.is_finite().then_some((e, i))
        })
        .collect();
    deaths.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

    let mut heap: BinaryHeap<SlopeKey> = BinaryHeap::new();
    let mut slope_of = vec![0.0f64; rays.len()];
    let mut is_dead = vec![false; rays.len()];
    heap.push(SlopeKey::new(0.0, 0));

    let mut alive_count = 1usize;
    let mut resident = 0usize;
    let mut last_renewal_resident = 0usize;
    let mut fitness = 0.0f64;

    let mut renewal_times = Vec::new();
    let mut solitary_times = Vec::new();
    let mut renewal_intervals = Vec::new();
    let mut solitary_intervals = Vec::new();
    let mut ren = OpenInterval { start: 0.0, births: 0, kinks: 0, fitness0: 0.0 };
    let mut sol = OpenInterval { start: 0.0, births: 0, kinks: 0, fitness0: 0.0 };

    let (mut d, mut c, mut b) = (0usize, 1usize, 1usize);
    loop {
        // next event: the smallest (time, kind) with deaths < changes < births
        let mut pick: Option<(f64, u8)> = None;
        if d < deaths.len() {
            pick = Some((deaths[d].0, 0));
        }
        if c < segs.len() {
            let cand = (segs[c].s, 1);
            if pick.is_none_or(|p| (cand.0, cand.1) < p) {
                pick = Some(cand);
            }
        }
        if b < rays.len() {
            let cand = (rays[b].t, 2);
            if pick.is_none_or(|p| (cand.0, cand.1) < p) {
                pick = Some(cand);
            }
        }
        let Some((t, kind)) = pick else { break };

        match kind {
            0 => {
                let (_, i) = deaths[d];
                d += 1;
                is_dead[i] = true;
                alive_count -= 1;
                // the resident is always alive, so the count never hits zero
                debug_assert!(alive_count >= 1, "the resident cannot die in office");
                if alive_count == 1 && resident != last_renewal_resident {
                    renewal_times.push(t);
                    renewal_intervals.push(ren.close(t, fitness));
                    last_renewal_resident = resident;
                }
            }
            1 => {
                let seg = segs[c];
                c += 1;
                let kinks_here = alive_count as u64;
                ren.kinks += kinks_here;
                sol.kinks += kinks_here;
                fitness = seg.fitness;
                resident = seg.m;
                // drop stale heap tops, then ask whether anyone still climbs
                while let Some(top) = heap.peek() {
                    if is_dead[top.index] {
                        heap.pop();
                    } else {
                        break;
                    }
                }
                let max_slope = heap.peek().map(|k| slope_of[k.index]).unwrap_or(f64::NEG_INFINITY);
                if max_slope <= seg.fitness {
                    solitary_times.push(seg.s);
                    solitary_intervals.push(sol.close(seg.s, fitness));
                }
            }
            _ => {
                let r = &rays[b];
                b += 1;
                alive_count += 1;
                slope_of[r.index] = r.slope;
                heap.push(SlopeKey::new(r.slope, r.index));
                ren.births += 1;
                sol.births += 1;
            }
        }
    }

    RenewalRecord { renewal_times, solitary_times, renewal_intervals, solitary_intervals }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{BirthConfig, BirthEvent};
    use crate::engine::build;

    fn standard(pairs: &[(f64, f64)]) -> EngineOutput {
        let events = pairs.iter().map(|&(t, a)| BirthEvent { t, a }).collect();
        build(&BirthConfig::standard(events).expect("test config must validate"))
    }

    fn assert_near(x: f64, y: f64, tol: f64, what: &str) {
        assert!((x - y).abs() <= tol, "{what}: {x} vs {y}");
    }

    #[test]
    fn lifetimes_of_the_preempted_takeover_system() {
        let out = standard(&[(1.0, 1.0), (1.8, 1.5), (2.35, 1.5)]);
        assert_eq!(extinction_time(&out, 0).unwrap(), 3.0);
        assert_near(extinction_time(&out, 1).unwrap(), 2.35 + 4.0 / 3.0, 1e-12, "e1");
        assert_near(extinction_time(&out, 2).unwrap(), 3.825, 1e-12, "e2");
        assert_eq!(extinction_time(&out, 3).unwrap(), f64::INFINITY);
        assert!(matches!(
            extinction_time(&out, 9),
            Err(DomainError::UnknownTrajectory { index: 9 })
        ));
    }

    #[test]
    fn heights_track_the_gap_to_the_resident() {
        let out = standard(&[(0.5, 2.0)]);
        assert_eq!(height_at(&out, 0, 0.0).unwrap(), 1.0);
        assert_eq!(height_at(&out, 1, 0.5).unwrap(), 0.0, "newborns start at the floor");
        assert_near(height_at(&out, 1, 0.75).unwrap(), 0.5, 1e-12, "halfway up");
        assert_eq!(height_at(&out, 1, 1.0).unwrap(), 1.0, "arrival");
        // after the change the root falls at speed 2 and dies at 1.5
        assert_near(height_at(&out, 0, 1.25).unwrap(), 0.5, 1e-12, "root falling");
        assert_eq!(height_at(&out, 0, 2.0).unwrap(), 0.0, "dead means height zero");
        assert_eq!(height_at(&out, 1, 0.25).unwrap(), 0.0, "unborn means height zero");
        assert!(height_at(&out, 0, -1.0).is_err());
    }

    #[test]
    fn polyline_matches_hand_computed_graph() {
        let out = standard(&[(1.0, 1.0), (1.8, 1.5), (2.35, 1.5)]);
        let p = trajectory_polyline(&out, 2).unwrap();
        assert_eq!(p.birth, 1.8);
        assert_near(p.extinction, 3.825, 1e-12, "extinction");
        // born at the floor, kinked at both changes, dead at 3.825
        assert_eq!(p.vertices.len(), 4);
        assert_eq!((p.vertices[0].t, p.vertices[0].h), (1.8, 0.0));
        assert_eq!(p.vertices[1].t, 2.0);
        assert_near(p.vertices[1].h, 0.3, 1e-12, "height at first change");
        assert_near(p.vertices[2].h, 0.80833333333333, 1e-9, "height at second change");
        assert_eq!((p.vertices[3].t, p.vertices[3].h), (p.extinction, 0.0));
        let slopes: Vec<f64> = p.kinks.iter().map(|k| k.slope).collect();
        assert_eq!(slopes, vec![1.5, 0.5, -1.0]);
    }

    #[test]
    fn own_reign_registers_height_exactly_one() {
        let out = standard(&[(1.0, 1.0), (1.8, 1.5), (2.35, 1.5)]);
        let p = trajectory_polyline(&out, 3).unwrap();
        assert_eq!(p.extinction, f64::INFINITY);
        // vertex at its own takeover is exactly one, no rounding
        assert_eq!(p.vertices.last().unwrap().h, 1.0);
        assert_eq!(p.kinks.last().unwrap().slope, 0.0);
    }

    #[test]
    fn batch_profiles_agree_with_single_walks() {
        let out = standard(&[(0.0, 1.0), (0.6111111111111112, 2.0), (0.8888888888888888, 3.0)]);
        let batch = all_slope_profiles(&out, 3).expect("integer advantages");
        for i in 0..out.rays.len() {
            let single = trajectory_polyline(&out, i).unwrap();
            let b = &batch.polylines[i];
            assert_eq!(b.kinks, single.kinks, "kinks of trajectory {i}");
            assert_eq!(b.vertices.len(), single.vertices.len(), "vertices of trajectory {i}");
            for (u, v) in b.vertices.iter().zip(&single.vertices) {
                assert_near(u.t, v.t, 1e-12, "vertex time");
                assert_near(u.h, v.h, 1e-12, "vertex height");
            }
        }
    }

    #[test]
    fn batch_profiles_reject_fractional_advantages() {
        let out = standard(&[(0.5, 2.0), (0.9, 1.5)]);
        let err = all_slope_profiles(&out, 3).unwrap_err();
        assert_eq!(err.index, 2);
        assert_eq!(err.advantage, 1.5);
    }

    #[test]
    fn kink_ledger_counts_alive_trajectories_per_change() {
        let out = standard(&[(1.0, 1.0), (1.8, 1.5), (2.35, 1.5)]);
        let ledger = count_kinks(&out, f64::INFINITY);
        assert_eq!(ledger.total, 6);
        assert_eq!(ledger.entries.len(), 2);
        assert_eq!((ledger.entries[0].alive, ledger.entries[1].alive), (3, 3));
        assert_eq!(ledger.entries[1].cumulative, 6);
        // a horizon between the changes keeps only the first entry
        let early = count_kinks(&out, 2.5);
        assert_eq!(early.total, 3);
        assert_eq!(early.entries.len(), 1);
    }

    #[test]
    fn birth_exactly_at_a_change_joins_the_new_reign() {
        // climber 1 arrives at t = 2 and climber 2 is born at that instant:
        // degenerate, but well-defined — the newborn takes no kink there
        let out = standard(&[(1.0, 1.0), (2.0, 0.5)]);
        assert_eq!(out.rays[2].parent, 1, "the newborn's parent is the incoming resident");
        let ledger = count_kinks(&out, f64::INFINITY);
        assert_eq!(
            ledger.entries.iter().map(|e| e.alive).collect::<Vec<_>>(),
            vec![2, 2],
            "alive at t=2 are {{0,1}}; at the later change the root is dead"
        );
    }

    #[test]
    fn renewals_and_solitary_changes_of_the_frozen_example() {
        let out = standard(&[(1.0, 1.0), (1.8, 1.5), (2.35, 1.5)]);
        let rec = renewal_and_solitary(&out);
        assert_eq!(rec.renewal_times.len(), 1);
        assert_near(rec.renewal_times[0], 3.825, 1e-12, "first renewal");
        // at the first change trajectory 2 (slope 1.5) still outclimbs the
        // new fitness 1, so only the second change is solitary
        assert_eq!(rec.solitary_times.len(), 1);
        assert_eq!(rec.solitary_times[0], out.profile.segments[2].s);
        let ri = &rec.renewal_intervals[0];
        assert_eq!((ri.start, ri.end), (0.0, rec.renewal_times[0]));
        assert_eq!(ri.births, 3);
        assert_eq!(ri.kinks, 6);
        assert_near(ri.fitness_increment, 2.5, 1e-12, "fitness gained");
        // the solitary stretch closes at the change itself, kinks included
        let si = &rec.solitary_intervals[0];
        assert_eq!((si.start, si.end), (0.0, rec.solitary_times[0]));
        assert_eq!((si.births, si.kinks), (3, 6));
    }

    #[test]
    fn non_solitary_change_is_detected() {
        // climber 2 (speed 3) is still climbing when 1 (speed 2) arrives at 1.0
        let out = standard(&[(0.5, 2.0), (0.9, 3.0)]);
        let rec = renewal_and_solitary(&out);
        let segs = &out.profile.segments;
        assert_eq!(segs.len(), 3, "both become resident in turn");
        assert_eq!(rec.solitary_times, vec![segs[2].s], "only the second change is solitary");
    }

    #[test]
    fn renewal_fires_when_the_system_collapses_to_its_resident() {
        // trajectory 2 (speed 0.1) is overtaken by the change at 1.0, falls,
        // and dies without arriving; once it and the root are gone the system
        // is resident 1 alone — that death is the renewal
        let out = standard(&[(0.5, 2.0), (0.8, 0.1)]);
        let rec = renewal_and_solitary(&out);
        assert_eq!(rec.renewal_times.len(), 1);
        let e0 = extinction_time(&out, 0).unwrap();
        let e2 = extinction_time(&out, 2).unwrap();
        assert_near(rec.renewal_times[0], e0.max(e2), 1e-12, "renewal at the last death");
        // an intermediate death (two still alive) does not renew
        assert!(e2 < e0, "trajectory 2 dies first in this construction");
    }
}
