//! Event-driven reference simulation in the height picture.
//!
//! [`simulate_naive`] advances every trajectory's height explicitly, one
//! event at a time: arrivals at height one (resident changes), falls to the
//! extinction level, and scheduled births. It shares no code or formulas
//! with the envelope sweep in [`crate::engine`], so the two implementations
//! can be used to check each other. Cost is quadratic in the number of
//! births; use it on small systems.

use alloc::vec;
use alloc::vec::Vec;

use crate::config::BirthConfig;
use crate::profile::{ResidencySegment, ResidentProfile};
use crate::SlopeChange;

/// How a simulated trajectory's record ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum FinalStatus {
    /// Fell to the extinction level.
    Extinct,
    /// Is the resident when the simulation runs out of events.
    ResidentForever,
    /// Sits at height one with zero speed but lost the residency tie-break;
    /// only exactly simultaneous arrivals produce this.
    AtHeightOne,
    /// Floats below height one with zero speed, never to move again.
    Stalled,
}

/// One simulated trajectory: lifetime and full speed history.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SimTrajectory {
    pub index: usize,
    pub birth: f64,
    /// Extinction time, or infinity if the trajectory never dies.
    pub extinction: f64,
    pub status: FinalStatus,
    /// Entry 0 is the birth speed; each later entry is the speed after a
    /// resident change the trajectory lived through.
    pub kinks: Vec<SlopeChange>,
}

/// Number of alive trajectories (= kinks handed out) at one resident change.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct KinkCount {
    pub t: f64,
    pub alive: usize,
}

/// A coincidence the exact solvers are allowed to resolve differently.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum DegenerateEventKind {
    /// Two or more trajectories reached height one at the same instant.
    SimultaneousArrival,
    /// An extinction landed exactly on an arrival or a birth.
    ExtinctionAtEvent,
    /// A birth landed exactly on a resident change.
    BirthAtChange,
}

/// When and how the simulation hit a measure-zero coincidence.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DegenerateEvent {
    pub t: f64,
    pub kind: DegenerateEventKind,
}

/// Full output of the reference simulation.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SimResult {
    pub trajectories: Vec<SimTrajectory>,
    pub profile: ResidentProfile,
    /// Total kinks handed out at resident changes.
    pub total_kinks: u64,
    /// Alive count at each resident change, in time order.
    pub change_counts: Vec<KinkCount>,
    /// Exact-tie coincidences the run stumbled into (empty for generic data).
    pub degenerate_events: Vec<DegenerateEvent>,
}

impl SimResult {
    /// Re-derive the kink total from the per-trajectory histories; always
    /// equals `total_kinks` (the birth entry is not a kink).
    pub fn kink_total_from_histories(&self) -> u64 {
        self.trajectories.iter().map(|t| t.kinks.len() as u64 - 1).sum()
    }
}

// One moving point: height, speed relative to the resident, and liveness.
struct Body {
    h: f64,
    v: f64,
    alive: bool,
}

/// Simulate the height picture event by event.
///
/// Every trajectory is tracked as a (height, speed) pair; between events all
/// heights move linearly. The next event is the earliest of: a climber
/// reaching height one, a faller reaching the extinction level, or the next
/// scheduled birth. Coincidences are processed extinctions first, then the
/// resident change, then the birth, and are recorded as degenerate events.
pub fn simulate_naive(config: &BirthConfig) -> SimResult {
    let depth = config.birth_depth();
    let floor = 1.0 - depth;
    let events = config.events();

    let mut bodies: Vec<Body> = vec![Body { h: 1.0, v: 0.0, alive: true }];
    let mut traj: Vec<SimTrajectory> = vec![SimTrajectory {
        index: 0,
        birth: 0.0,
        extinction: f64::INFINITY,
        status: FinalStatus::ResidentForever,
        kinks: vec![SlopeChange { t: 0.0, slope: 0.0 }],
    }];

    let mut profile = ResidentProfile::root();
    let mut fitness = 0.0_f64;
    let mut resident = 0usize;
    let mut total_kinks = 0u64;
    let mut change_counts: Vec<KinkCount> = Vec::new();
    let mut degenerate: Vec<DegenerateEvent> = Vec::new();

    let mut next_birth = 0usize;
    let mut now = 0.0_f64;
    let mut cands: Vec<f64> = Vec::new();

    loop {
        // Candidate event time per body, computed before advancing so the
        // participant check below can use exact equality.
        cands.clear();
        cands.resize(bodies.len(), f64::INFINITY);
        let mut best = f64::INFINITY;
        for (i, b) in bodies.iter().enumerate() {
            if !b.alive || b.v == 0.0 {
                continue;
            }
            let raw = if b.v > 0.0 {
                now + (1.0 - b.h) / b.v
            } else {
                now + (b.h - floor) / -b.v
            };
            // rounding may put a body a hair past its threshold; never
            // schedule into the past
            let cand = if raw > now { raw } else { now };
            cands[i] = cand;
            if cand < best {
                best = cand;
            }
        }
        if next_birth < events.len() {
            best = best.min(events[next_birth].t);
        }
        if !best.is_finite() {
            break;
        }

        let dt = best - now;
        for b in bodies.iter_mut().filter(|b| b.alive) {
            b.h += b.v * dt;
        }
        now = best;
        let birth_now = next_birth < events.len() && events[next_birth].t == best;

        // extinctions first: a trajectory dying at this instant takes no part
        // in a simultaneous change
        let mut died = false;
        for i in 0..bodies.len() {
            if bodies[i].alive && bodies[i].v < 0.0 && cands[i] == best {
                bodies[i].alive = false;
                traj[i].extinction = now;
                traj[i].status = FinalStatus::Extinct;
                died = true;
            }
        }

        let arrivals: Vec<usize> = (0..bodies.len())
            .filter(|&i| bodies[i].alive && bodies[i].v > 0.0 && cands[i] == best)
            .collect();
        if !arrivals.is_empty() {
            if died {
                degenerate.push(DegenerateEvent { t: now, kind: DegenerateEventKind::ExtinctionAtEvent });
            }
            if arrivals.len() > 1 {
                degenerate.push(DegenerateEvent { t: now, kind: DegenerateEventKind::SimultaneousArrival });
            }
            if birth_now {
                degenerate.push(DegenerateEvent { t: now, kind: DegenerateEventKind::BirthAtChange });
            }

            // fastest arriver wins; among equals, the latest-born
            let v_star = arrivals.iter().map(|&i| bodies[i].v).fold(f64::NEG_INFINITY, f64::max);
            let winner = *arrivals
                .iter()
                .filter(|&&i| bodies[i].v == v_star)
                .last()
                .expect("arrivals is non-empty");
            for &i in &arrivals {
                bodies[i].h = 1.0;
            }

            // every alive trajectory, the new resident included, has its
            // speed cut by the winner's arrival speed
            let mut alive_count = 0usize;
            for (i, b) in bodies.iter_mut().enumerate() {
                if !b.alive {
                    continue;
                }
                b.v -= v_star;
                traj[i].kinks.push(SlopeChange { t: now, slope: b.v });
                alive_count += 1;
            }
            total_kinks += alive_count as u64;
            change_counts.push(KinkCount { t: now, alive: alive_count });

            fitness += v_star;
            let prev = *profile.segments.last().expect("profile starts non-empty");
            profile.segments.push(ResidencySegment {
                s: now,
                m: winner,
                fitness,
                y_start: prev.y_start + prev.fitness * (now - prev.s),
            });
            resident = winner;
        } else if died && birth_now {
            degenerate.push(DegenerateEvent { t: now, kind: DegenerateEventKind::ExtinctionAtEvent });
        }

        if birth_now {
            let ev = events[next_birth];
            next_birth += 1;
            bodies.push(Body { h: floor, v: ev.a, alive: true });
            traj.push(SimTrajectory {
                index: bodies.len() - 1,
                birth: ev.t,
                extinction: f64::INFINITY,
                status: FinalStatus::Stalled,
                kinks: vec![SlopeChange { t: ev.t, slope: ev.a }],
            });
        }
    }

    for (i, b) in bodies.iter().enumerate() {
        if !b.alive {
            continue;
        }
        traj[i].status = if i == resident {
            FinalStatus::ResidentForever
        } else if b.h == 1.0 {
            FinalStatus::AtHeightOne
        } else {
            FinalStatus::Stalled
        };
    }

    SimResult {
        trajectories: traj,
        profile,
        total_kinks,
        change_counts,
        degenerate_events: degenerate,
    }
}
