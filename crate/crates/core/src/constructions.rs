//! Built-in birth lists with provable extremal behaviour, used as test
//! fixtures and benchmark inputs.

use alloc::vec;
use alloc::vec::Vec;

use crate::config::{BirthConfig, BirthEvent};

/// A system of `n` births whose kink total is exactly `n * (n + 1)`.
///
/// Birth `k` (advantage `k`) lands at `1 - 1/k + (k-1)/n^2`: every takeover
/// succeeds, the changes pile up just after `t = 1` at `1 + 2(k-1)/n^2`, and
/// every trajectory is still alive at every change — so each of the `n`
/// changes hands out `n + 1` kinks. This meets the quadratic worst case for
/// kink counting.
pub fn quadratic_kinks_config(n: usize) -> BirthConfig {
    let nf = n as f64;
    let events: Vec<BirthEvent> = (1..=n)
        .map(|k| {
            let kf = k as f64;
            BirthEvent { t: 1.0 - 1.0 / kf + (kf - 1.0) / (nf * nf), a: kf }
        })
        .collect();
    BirthConfig::standard(events).expect("the quadratic family is always a valid birth list")
}

/// Three births driving trajectory 0's speed to exactly `-(2k - 1)`, the
/// lowest value any trajectory can reach when advantages are integers in
/// `1..=k`.
///
/// The first birth (advantage `k-1`) takes over at `1/(k-1)`; the second
/// (advantage `k`) is timed so its takeover lands while trajectory 0 is
/// still falling, stacking the two speed cuts to `-(2k - 1)`; the third
/// arrives long after trajectory 0 is dead, showing the bound is not beaten.
/// Requires `k >= 2`.
pub fn extreme_slope_config(k: u32) -> BirthConfig {
    assert!(k >= 2, "the extreme-slope construction needs k >= 2, got {k}");
    let kf = f64::from(k);
    let t1 = 0.0;
    // midpoint of the window (1/(k-1), 2/(k-1) - 1/k): late enough to stack
    // on the first takeover, early enough to beat trajectory 0's death
    let t2 = 1.0 / (kf - 1.0) + (1.0 / (kf - 1.0) - 1.0 / kf) / 2.0;
    let t3 = t2 + 1.0 / kf + 1.0;
    let events = vec![
        BirthEvent { t: t1, a: kf - 1.0 },
        BirthEvent { t: t2, a: kf },
        BirthEvent { t: t3, a: 1.0 },
    ];
    BirthConfig::standard(events).expect("the extreme-slope construction is a valid birth list")
}

/// The three-birth system on which the refined heuristic discards the actual
/// winner: trajectory 2's window covers both neighbours, yet the exact
/// dynamics crown 1 and then 3.
pub fn gl_failure_config() -> BirthConfig {
    let events = vec![
        BirthEvent { t: 1.0, a: 1.0 },
        BirthEvent { t: 1.8, a: 1.5 },
        BirthEvent { t: 2.35, a: 1.5 },
    ];
    BirthConfig::standard(events).expect("the heuristic-failure fixture is a valid birth list")
}
