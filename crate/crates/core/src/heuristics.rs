//! Birth-list-only survival heuristics and their comparison against the
//! exact solver.
//!
//! The Gerrish–Lenski style of reasoning never solves the dynamics: it walks
//! the birth list once and discards any arrival that overlaps a stronger
//! one, predicting that each survivor takes over at `t + 1/a` (the time its
//! ray needs to climb the unit gap). [`gl_predict`] implements two variants;
//! [`gl_compare`] lines their verdicts up against the exact profile.

use alloc::vec;
use alloc::vec::Vec;

use crate::config::BirthConfig;
use crate::engine::build;
use crate::heights::renewal_and_solitary;

/// Which discarding rule to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum GlMode {
    /// Discard an arrival only for a stronger later arrival inside its own
    /// climbing window.
    Original,
    /// Additionally discard an arrival born inside the still-open window of
    /// an at-least-as-strong earlier survivor.
    Refined,
}

/// Which side of the discarded arrival its killer came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum KillerDirection {
    Past,
    Future,
}

/// The arrival that caused a discard.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GlKiller {
    pub index: usize,
    pub direction: KillerDirection,
}

/// A trajectory the heuristic expects to take over, and when.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GlPredicted {
    pub index: usize,
    pub time: f64,
}

/// A trajectory the heuristic wrote off.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GlDiscarded {
    pub index: usize,
    pub killer: GlKiller,
}

/// Everything one heuristic pass decides.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GlPrediction {
    pub mode: GlMode,
    /// Survivors with their predicted takeover times, in birth order; the
    /// times increase strictly.
    pub predicted: Vec<GlPredicted>,
    /// Discards with their killers, in birth order.
    pub discarded: Vec<GlDiscarded>,
}

/// Run the heuristic over a birth list.
///
/// Arrivals are scanned in birth order. In [`GlMode::Refined`] an arrival is
/// first checked against earlier survivors: any non-discarded `j < i` with
/// `t_j < t_i < t_j + 1/a_j` and `a_j >= a_i` kills it (the earliest such
/// `j`). An arrival still alive — or any arrival in [`GlMode::Original`] —
/// is then checked against the raw future: any `j > i` with
/// `t_i < t_j < t_i + 1/a_i` and `a_j > a_i` kills it (again the earliest).
pub fn gl_predict(config: &BirthConfig, mode: GlMode) -> GlPrediction {
    let ev = config.events();
    let n = ev.len();
    let mut dead = vec![false; n];
    let mut predicted = Vec::new();
    let mut discarded = Vec::new();

    for i in 0..n {
        let window_end = ev[i].t + 1.0 / ev[i].a;
        let mut killer: Option<GlKiller> = None;

        if mode == GlMode::Refined {
            for j in 0..i {
                if dead[j] {
                    continue;
                }
                if ev[i].t < ev[j].t + 1.0 / ev[j].a && ev[j].a >= ev[i].a {
                    killer = Some(GlKiller { index: j + 1, direction: KillerDirection::Past });
                    break;
                }
            }
        }
        if killer.is_none() {
            for j in i + 1..n {
                // birth times increase, so past the window nothing matters
                if ev[j].t >= window_end {
                    break;
                }
                if ev[j].a > ev[i].a {
                    killer = Some(GlKiller { index: j + 1, direction: KillerDirection::Future });
                    break;
                }
            }
        }

        match killer {
            Some(k) => {
                dead[i] = true;
                discarded.push(GlDiscarded { index: i + 1, killer: k });
            }
            None => predicted.push(GlPredicted { index: i + 1, time: window_end }),
        }
    }

    // survivors' windows cannot nest, so predictions come out ordered
    debug_assert!(
        predicted.windows(2).all(|w| w[0].time < w[1].time),
        "predicted takeover times must increase strictly"
    );
    GlPrediction { mode, predicted, discarded }
}

/// One trajectory's fate under the exact solver and both heuristics.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GlRow {
    pub index: usize,
    /// When the trajectory actually became resident, if ever.
    pub exact_resident_time: Option<f64>,
    /// Whether its takeover was a solitary change (no climber left above the
    /// new fitness).
    pub exact_solitary: bool,
    pub refined_time: Option<f64>,
    pub refined_killer: Option<GlKiller>,
    pub original_time: Option<f64>,
    pub original_killer: Option<GlKiller>,
}

/// Side-by-side comparison plus disagreement counts.
///
/// A heuristic "disagrees" on a trajectory when it predicts a takeover the
/// exact solver does not deliver, or misses one it does. The `_vs_solitary`
/// counts compare against solitary takeovers only.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GlComparison {
    pub rows: Vec<GlRow>,
    pub refined_vs_residents: usize,
    pub original_vs_residents: usize,
    pub refined_vs_solitary: usize,
    pub original_vs_solitary: usize,
}

/// Solve `config` exactly and line the result up against both heuristics.
pub fn gl_compare(config: &BirthConfig) -> GlComparison {
    let out = build(config);
    let renewal = renewal_and_solitary(&out);
    let n = config.len();

    let mut resident_time: Vec<Option<f64>> = vec![None; n + 1];
    let mut solitary = vec![false; n + 1];
    for seg in out.profile.changes() {
        resident_time[seg.m] = Some(seg.s);
        // solitary times are copies of profile change times, so exact
        // equality is the right match
        if renewal.solitary_times.binary_search_by(|t| t.total_cmp(&seg.s)).is_ok() {
            solitary[seg.m] = true;
        }
    }

    let mut heuristic_time = [vec![None; n + 1], vec![None; n + 1]];
    let mut heuristic_killer = [vec![None; n + 1], vec![None; n + 1]];
    for (slot, mode) in [(0, GlMode::Refined), (1, GlMode::Original)] {
        let prediction = gl_predict(config, mode);
        for p in &prediction.predicted {
            heuristic_time[slot][p.index] = Some(p.time);
        }
        for d in &prediction.discarded {
            heuristic_killer[slot][d.index] = Some(d.killer);
        }
    }

    let mut rows = Vec::with_capacity(n);
    let mut counts = [0usize; 4];
    for i in 1..=n {
        let row = GlRow {
            index: i,
            exact_resident_time: resident_time[i],
            exact_solitary: solitary[i],
            refined_time: heuristic_time[0][i],
            refined_killer: heuristic_killer[0][i],
            original_time: heuristic_time[1][i],
            original_killer: heuristic_killer[1][i],
        };
        let is_resident = row.exact_resident_time.is_some();
        let is_solitary_resident = is_resident && row.exact_solitary;
        counts[0] += usize::from(row.refined_time.is_some() != is_resident);
        counts[1] += usize::from(row.original_time.is_some() != is_resident);
        counts[2] += usize::from(row.refined_time.is_some() != is_solitary_resident);
        counts[3] += usize::from(row.original_time.is_some() != is_solitary_resident);
        rows.push(row);
    }

    GlComparison {
        rows,
        refined_vs_residents: counts[0],
        original_vs_residents: counts[1],
        refined_vs_solitary: counts[2],
        original_vs_solitary: counts[3],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::BirthEvent;

    fn standard(pairs: &[(f64, f64)]) -> BirthConfig {
        let events = pairs.iter().map(|&(t, a)| BirthEvent { t, a }).collect();
        BirthConfig::standard(events).expect("test config must validate")
    }

    #[test]
    fn refined_discards_both_neighbours_of_a_strong_survivor() {
        let cfg = standard(&[(1.0, 1.0), (1.8, 1.5), (2.35, 1.5)]);
        let p = gl_predict(&cfg, GlMode::Refined);
        assert_eq!(p.predicted.len(), 1);
        assert_eq!(p.predicted[0].index, 2);
        assert!((p.predicted[0].time - (1.8 + 1.0 / 1.5)).abs() < 1e-12);
        let killers: Vec<(usize, GlKiller)> = p.discarded.iter().map(|d| (d.index, d.killer)).collect();
        assert_eq!(
            killers,
            vec![
                (1, GlKiller { index: 2, direction: KillerDirection::Future }),
                (3, GlKiller { index: 2, direction: KillerDirection::Past }),
            ]
        );
    }

    #[test]
    fn original_keeps_the_last_arrival() {
        let cfg = standard(&[(1.0, 1.0), (1.8, 1.5), (2.35, 1.5)]);
        let p = gl_predict(&cfg, GlMode::Original);
        let survivors: Vec<usize> = p.predicted.iter().map(|s| s.index).collect();
        // equal strength does not kill from the future, and 3 has no future
        assert_eq!(survivors, vec![2, 3]);
    }

    #[test]
    fn disjoint_windows_survive_in_both_modes() {
        let cfg = standard(&[(1.0, 1.0), (3.0, 1.0)]);
        for mode in [GlMode::Original, GlMode::Refined] {
            let p = gl_predict(&cfg, mode);
            let times: Vec<f64> = p.predicted.iter().map(|s| s.time).collect();
            assert_eq!(times, vec![2.0, 4.0], "{mode:?}");
        }
    }

    #[test]
    fn comparison_counts_misses_and_false_alarms() {
        // exact residents are 1 and 3; only the second change is solitary
        let cmp = gl_compare(&standard(&[(1.0, 1.0), (1.8, 1.5), (2.35, 1.5)]));
        assert_eq!(cmp.rows.len(), 3);
        assert_eq!(cmp.rows[0].exact_resident_time, Some(2.0));
        assert!(!cmp.rows[0].exact_solitary);
        assert!(cmp.rows[2].exact_solitary);

        // refined predicts {2}: misses 1 and 3, false-alarms on 2
        assert_eq!(cmp.refined_vs_residents, 3);
        // original predicts {2, 3}: misses 1, false-alarms on 2
        assert_eq!(cmp.original_vs_residents, 2);
        // solitary takeovers are {3} alone
        assert_eq!(cmp.refined_vs_solitary, 2);
        assert_eq!(cmp.original_vs_solitary, 1);
    }

    #[test]
    fn clean_separation_gives_perfect_agreement() {
        let cmp = gl_compare(&standard(&[(1.0, 1.0), (3.0, 1.0)]));
        assert_eq!(cmp.refined_vs_residents, 0);
        assert_eq!(cmp.original_vs_residents, 0);
        assert_eq!(cmp.refined_vs_solitary, 0);
        assert_eq!(cmp.original_vs_solitary, 0);
        // and the predicted times are the exact change times
        assert_eq!(cmp.rows[0].refined_time, cmp.rows[0].exact_resident_time);
        assert_eq!(cmp.rows[1].refined_time, cmp.rows[1].exact_resident_time);
    }
}
