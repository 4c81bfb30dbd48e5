//! Poisson birth streams and Monte Carlo estimators.
//!
//! A random system is a Poisson(λ) stream of births on `[0, horizon)` with
//! i.i.d. advantages; an optional thinning step keeps each birth with
//! probability `a/(1+a)` (the chance it would ever matter). Estimators run
//! the envelope engine over independent replicate streams and aggregate the
//! long-run rates the theory pins down: fitness gain per unit time, kinks
//! per unit time, and their renewal-cycle quotients.

use clonaldyn_core::heights::{count_kinks, renewal_and_solitary, IntervalStats};
use clonaldyn_core::{build, BirthConfig, BirthEvent};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedIndex;
use rand_distr::{Exp, Pareto};
use rayon::prelude::*;
use serde::Serialize;
use std::str::FromStr;

/// Law of the i.i.d. advantage draws. All parameters must be positive.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SlopeDistribution {
    Constant { c: f64 },
    Exponential { mean: f64 },
    /// Finitely many values with relative weights.
    Discrete { atoms: Vec<(f64, f64)> },
    Pareto { shape: f64, scale: f64 },
}

impl SlopeDistribution {
    /// False exactly for the heavy tails (pareto with shape ≤ 1) whose
    /// fitness grows superlinearly instead of settling on a speed.
    pub fn has_finite_mean(&self) -> bool {
        match self {
            SlopeDistribution::Pareto { shape, .. } => *shape > 1.0,
            _ => true,
        }
    }

    fn check(&self) -> Result<(), PitError> {
        let bad = |msg: &str| Err(PitError::Distribution(msg.into()));
        match self {
            SlopeDistribution::Constant { c } if !(*c > 0.0 && c.is_finite()) => {
                bad("constant advantage must be positive and finite")
            }
            SlopeDistribution::Exponential { mean } if !(*mean > 0.0 && mean.is_finite()) => {
                bad("exponential mean must be positive and finite")
            }
            SlopeDistribution::Discrete { atoms } => {
                if atoms.is_empty() {
                    return bad("discrete law needs at least one atom");
                }
                if atoms.iter().any(|(v, w)| !(*v > 0.0 && v.is_finite() && *w > 0.0)) {
                    return bad("discrete atoms need positive values and weights");
                }
                Ok(())
            }
            SlopeDistribution::Pareto { shape, scale }
                if !(*shape > 0.0 && *scale > 0.0 && shape.is_finite() && scale.is_finite()) =>
            {
                bad("pareto shape and scale must be positive and finite")
            }
            _ => Ok(()),
        }
    }
}

/// Specs look like `const:1`, `exp:1.5`, `discrete:1@1,2.5@3`, or
/// `pareto:0.8:1`.
impl FromStr for SlopeDistribution {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, rest) = s.split_once(':').ok_or("expected kind:parameters")?;
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("bad number {x:?}: {e}"));
        let dist = match kind {
            "const" => SlopeDistribution::Constant { c: num(rest)? },
            "exp" => SlopeDistribution::Exponential { mean: num(rest)? },
            "discrete" => {
                let atoms = rest
                    .split(',')
                    .map(|atom| {
                        let (v, w) = atom.split_once('@').ok_or("atoms look like value@weight")?;
                        Ok((num(v)?, num(w)?))
                    })
                    .collect::<Result<Vec<_>, String>>()?;
                SlopeDistribution::Discrete { atoms }
            }
            "pareto" => {
                let (shape, scale) = rest.split_once(':').ok_or("pareto takes shape:scale")?;
                SlopeDistribution::Pareto { shape: num(shape)?, scale: num(scale)? }
            }
            other => return Err(format!("unknown distribution kind {other:?}")),
        };
        dist.check().map_err(|e| e.to_string())?;
        Ok(dist)
    }
}

// Sampler built once per replicate; rejection keeps every draw positive.
enum Prepared {
    Constant(f64),
    Exponential(Exp<f64>),
    Discrete { values: Vec<f64>, pick: WeightedIndex<f64> },
    Pareto(Pareto<f64>),
}

impl Prepared {
    fn new(dist: &SlopeDistribution) -> Self {
        match dist {
            SlopeDistribution::Constant { c } => Prepared::Constant(*c),
            SlopeDistribution::Exponential { mean } => {
                Prepared::Exponential(Exp::new(1.0 / mean).expect("validated rate"))
            }
            SlopeDistribution::Discrete { atoms } => Prepared::Discrete {
                values: atoms.iter().map(|(v, _)| *v).collect(),
                pick: WeightedIndex::new(atoms.iter().map(|(_, w)| *w)).expect("validated weights"),
            },
            SlopeDistribution::Pareto { shape, scale } => {
                Prepared::Pareto(Pareto::new(*scale, *shape).expect("validated parameters"))
            }
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        loop {
            let a = match self {
                Prepared::Constant(c) => *c,
                Prepared::Exponential(exp) => exp.sample(rng),
                Prepared::Discrete { values, pick } => values[pick.sample(rng)],
                Prepared::Pareto(p) => p.sample(rng),
            };
            // an exact zero draw is possible in principle and invalid as a slope
            if a > 0.0 {
                return a;
            }
        }
    }
}

/// Everything that determines a random ensemble.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PitParams {
    /// Poisson birth intensity.
    pub lambda: f64,
    pub dist: SlopeDistribution,
    /// Births are sampled on `[0, horizon)` and rates divide by it.
    pub horizon: f64,
    pub seed: u64,
    /// Keep each birth with probability `a/(1+a)`.
    pub thinning: bool,
    pub birth_depth: f64,
}

impl PitParams {
    pub fn validate(&self) -> Result<(), PitError> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(PitError::Lambda(self.lambda));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(PitError::Horizon(self.horizon));
        }
        if !(self.birth_depth > 0.0 && self.birth_depth <= 1.0) {
            return Err(PitError::Depth(self.birth_depth));
        }
        self.dist.check()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PitError {
    #[error("birth intensity must be positive and finite, got {0}")]
    Lambda(f64),
    #[error("horizon must be positive and finite, got {0}")]
    Horizon(f64),
    #[error("birth depth must lie in (0, 1], got {0}")]
    Depth(f64),
    #[error("{0}")]
    Distribution(String),
    #[error("need at least one replicate")]
    NoReplicates,
}

/// Draw one replicate's birth config. The stream is fully determined by
/// `(params.seed, replicate)`, and a longer horizon extends a shorter one
/// without disturbing the shared prefix.
pub fn sample_beth(params: &PitParams, replicate: u64) -> BirthConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(replicate);
    let gap = Exp::new(params.lambda).expect("validated intensity");
    let dist = Prepared::new(&params.dist);

    let mut events: Vec<BirthEvent> = Vec::new();
    let mut t = 0.0;
    loop {
        // fixed draw order per arrival: gap, advantage, thinning coin
        t += gap.sample(&mut rng);
        if t >= params.horizon {
            break;
        }
        let a = dist.sample(&mut rng);
        if params.thinning && rng.random::<f64>() >= a / (1.0 + a) {
            continue;
        }
        if let Some(last) = events.last() {
            // exactly coincident arrivals are invalid; nudge by one ulp
            if t <= last.t {
                t = last.t.next_up();
            }
        }
        events.push(BirthEvent { t, a });
    }
    BirthConfig::new(events, params.birth_depth).expect("stream times strictly increase")
}

/// Point estimate with its standard error and the raw per-replicate values.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateReport {
    /// What the values estimate: `speed` or `kink-rate`.
    pub estimand: &'static str,
    pub estimate: f64,
    /// Sample standard deviation over √replicates.
    pub stderr: f64,
    pub replicates: usize,
    pub values: Vec<f64>,
    #[serde(rename = "params_echo")]
    pub params: PitParams,
}

fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

fn run_replicates<F>(
    params: &PitParams,
    replicates: usize,
    estimand: &'static str,
    per_replicate: F,
) -> Result<EstimateReport, PitError>
where
    F: Fn(&BirthConfig) -> f64 + Sync,
{
    params.validate()?;
    if replicates == 0 {
        return Err(PitError::NoReplicates);
    }
    // replicate order is preserved, so the report is thread-count independent
    let values: Vec<f64> = (0..replicates as u64)
        .into_par_iter()
        .map(|r| per_replicate(&sample_beth(params, r)))
        .collect();
    let (estimate, stderr) = mean_and_stderr(&values);
    Ok(EstimateReport {
        estimand,
        estimate,
        stderr,
        replicates,
        values,
        params: params.clone(),
    })
}

/// Mean fitness gain per unit time, `F(horizon)/horizon`, over replicates.
pub fn estimate_speed(params: &PitParams, replicates: usize) -> Result<EstimateReport, PitError> {
    let horizon = params.horizon;
    run_replicates(params, replicates, "speed", move |cfg| {
        let out = build(cfg);
        out.profile.fitness_at(horizon).expect("horizon is positive") / horizon
    })
}

/// Mean kinks per unit time, `K(horizon)/horizon`, over replicates.
pub fn estimate_kink_rate(
    params: &PitParams,
    replicates: usize,
) -> Result<EstimateReport, PitError> {
    let horizon = params.horizon;
    run_replicates(params, replicates, "kink-rate", move |cfg| {
        let out = build(cfg);
        count_kinks(&out, horizon).total as f64 / horizon
    })
}

/// A ratio-of-means estimate with its delta-method standard error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Quotient {
    pub estimate: f64,
    pub stderr: f64,
    /// Interval samples behind the ratio.
    pub samples: usize,
}

// Ratio of sample means over (value, duration) pairs; the stderr linearizes
// the ratio around the means and keeps the value/duration covariance.
fn quotient(pairs: &[(f64, f64)]) -> Quotient {
    let m = pairs.len() as f64;
    if pairs.is_empty() {
        return Quotient { estimate: f64::NAN, stderr: f64::NAN, samples: 0 };
    }
    let vbar = pairs.iter().map(|p| p.0).sum::<f64>() / m;
    let dbar = pairs.iter().map(|p| p.1).sum::<f64>() / m;
    let r = vbar / dbar;
    if pairs.len() < 2 {
        return Quotient { estimate: r, stderr: 0.0, samples: pairs.len() };
    }
    let (mut vv, mut vd, mut dd) = (0.0, 0.0, 0.0);
    for (v, d) in pairs {
        vv += (v - vbar) * (v - vbar);
        vd += (v - vbar) * (d - dbar);
        dd += (d - dbar) * (d - dbar);
    }
    let denom = m - 1.0;
    let var = (vv / denom - 2.0 * r * (vd / denom) + r * r * (dd / denom)) / (m * dbar * dbar);
    Quotient { estimate: r, stderr: var.max(0.0).sqrt(), samples: pairs.len() }
}

/// One regeneration stretch, echoed into reports.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct IntervalSample {
    pub start: f64,
    pub end: f64,
    pub births: usize,
    pub kinks: u64,
    pub fitness_gain: f64,
}

impl From<IntervalStats> for IntervalSample {
    fn from(s: IntervalStats) -> Self {
        IntervalSample {
            start: s.start,
            end: s.end,
            births: s.births,
            kinks: s.kinks,
            fitness_gain: s.fitness_increment,
        }
    }
}

/// Renewal-cycle quotients from one adaptively extended stream.
#[derive(Debug, Clone, Serialize)]
pub struct RenewalReport {
    /// Kinks per unit time via collapse-to-resident cycles.
    pub kinks_per_time: Quotient,
    /// Fitness per unit time via solitary-change cycles.
    pub fitness_per_time: Quotient,
    pub renewal_samples: Vec<IntervalSample>,
    pub solitary_samples: Vec<IntervalSample>,
    pub horizon_used: f64,
    /// True when the horizon cap was hit before enough cycles closed; the
    /// quotients then rest on fewer samples than requested.
    pub truncated: bool,
    #[serde(rename = "params_echo")]
    pub params: PitParams,
}

/// Estimate the renewal quotients E(K over cycle)/E(cycle) and
/// E(F over cycle)/E(cycle) by extending one stream until at least
/// `min_cycles` cycles of each kind closed (cycle samples are i.i.d.
/// because the system restarts from a bare resident at every renewal).
/// The horizon starts at `params.horizon`, doubles as needed, and gives
/// up at `max_horizon`, flagging the report as truncated.
pub fn renewal_estimates(
    params: &PitParams,
    min_cycles: usize,
    max_horizon: f64,
) -> Result<RenewalReport, PitError> {
    params.validate()?;
    if min_cycles == 0 {
        return Err(PitError::NoReplicates);
    }
    let mut horizon = params.horizon;
    loop {
        let cfg = sample_beth(&PitParams { horizon, ..params.clone() }, 0);
        let out = build(&cfg);
        let record = renewal_and_solitary(&out);
        let enough = record.renewal_intervals.len() >= min_cycles
            && record.solitary_intervals.len() >= min_cycles;
        let capped = horizon * 2.0 > max_horizon;
        if enough || capped {
            let renewal: Vec<IntervalSample> =
                record.renewal_intervals.iter().map(|s| (*s).into()).collect();
            let solitary: Vec<IntervalSample> =
                record.solitary_intervals.iter().map(|s| (*s).into()).collect();
            let k_pairs: Vec<(f64, f64)> =
                renewal.iter().map(|s| (s.kinks as f64, s.end - s.start)).collect();
            let f_pairs: Vec<(f64, f64)> =
                solitary.iter().map(|s| (s.fitness_gain, s.end - s.start)).collect();
            return Ok(RenewalReport {
                kinks_per_time: quotient(&k_pairs),
                fitness_per_time: quotient(&f_pairs),
                renewal_samples: renewal,
                solitary_samples: solitary,
                horizon_used: horizon,
                truncated: !enough,
                params: params.clone(),
            });
        }
        horizon *= 2.0;
    }
}

/// Long-run kink rate of the constant-advantage model: `2λ` raw, thinned
/// down by the keep probability `c/(1+c)`.
pub fn predicted_kink_rate(lambda: f64, c: f64, thinning: bool) -> f64 {
    if thinning {
        2.0 * lambda * c / (1.0 + c)
    } else {
        2.0 * lambda
    }
}

/// Long-run speed of the thinned constant-advantage model,
/// `λc²/(1+c+λ)`.
pub fn predicted_speed(lambda: f64, c: f64) -> f64 {
    lambda * c * c / (1.0 + c + lambda)
}
