//! Two lazy walkers moved jointly by good optimal couplings.
//!
//! From a state `(u, v)` with `u != v` the next state is drawn from the
//! cost-optimal coupling of the lazy rows at `u` and `v` that maximizes the
//! mass on strictly closer pairs. Once the walkers meet they move together.
//! The distance `Z_t = d(X_t, Y_t)` is then a super-martingale whenever every
//! edge has non-negative curvature.

use std::num::NonZeroUsize;
use std::sync::Arc;

use lru::LruCache;
use rand_core::RngCore;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{input_err, Error, Result};
use crate::generators::{stream, uniform_below};
use crate::graph::Graph;
use crate::transport::{good_optimal_coupling, TransportPlan};

/// Per-worker plan cache capacity.
const PLAN_CACHE_CAPACITY: usize = 1 << 16;

/// Normal quantile for a two-sided 99% Wilson interval.
pub const WILSON_Z_99: f64 = 2.575_829_303_548_900_4;

/// Summary of one-step distance increments `Z_{t+1} - Z_t` taken before meeting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriftStats {
    pub samples: u64,
    pub mean: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeetingExperiment {
    pub pair: (usize, usize),
    pub trials: usize,
    pub horizon: usize,
    pub seed: u64,
    /// Meeting time of every trial, `None` if the walkers had not met by the horizon.
    pub meeting_times: Vec<Option<usize>>,
    /// `(t, fraction of trials with tau > t)` for `t = 0..=horizon`.
    pub tail: Vec<(usize, f64)>,
    pub met: usize,
    /// Mean and median meeting time over trials that met.
    pub mean_meeting_time: Option<f64>,
    pub median_meeting_time: Option<usize>,
    pub drift: DriftStats,
}

impl MeetingExperiment {
    /// Trials with `tau >= t`.
    pub fn count_at_least(&self, t: usize) -> usize {
        self.meeting_times
            .iter()
            .filter(|m| m.map_or(true, |tau| tau >= t))
            .count()
    }

    /// Empirical `P(tau >= t)`.
    pub fn prob_at_least(&self, t: usize) -> f64 {
        self.count_at_least(t) as f64 / self.trials as f64
    }

    /// Wilson 99% upper confidence bound on `P(tau >= t)`.
    pub fn wilson_upper_at_least(&self, t: usize) -> f64 {
        wilson_upper(self.count_at_least(t), self.trials, WILSON_Z_99)
    }
}

/// Upper end of the Wilson score interval for `successes` out of `n`.
pub fn wilson_upper(successes: usize, n: usize, z: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let center = p + z2 / (2.0 * n);
    let spread = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center + spread) / (1.0 + z2 / n)).min(1.0)
}

/// `z (2a + K - z) / a^2`, plus one when the caller cannot guarantee that the
/// conditional variances sum to at least `a^2` before time `t`.
pub fn supermartingale_bound(z: f64, k: f64, a: f64, variance_sum_guaranteed: bool) -> Result<f64> {
    if !(a > 0.0) {
        return Err(input_err!("a must be positive, got {a}"));
    }
    if !(k > 0.0) {
        return Err(input_err!("increment bound K must be positive, got {k}"));
    }
    if !(z >= 0.0) {
        return Err(input_err!("starting value z must be non-negative, got {z}"));
    }
    let residual = if variance_sum_guaranteed { 0.0 } else { 1.0 };
    Ok(z * (2.0 * a + k - z) / (a * a) + residual)
}

/// Meeting-time tail bound `8 d / a` with `a = sqrt(t / (2 deg))`, valid on a
/// non-negatively curved `deg`-regular graph where the variance clause holds
/// deterministically.
pub fn regular_meeting_bound(distance: usize, degree: usize, t: usize) -> f64 {
    let a = (t as f64 / (2.0 * degree as f64)).sqrt();
    8.0 * distance as f64 / a
}

type PlanCache = LruCache<(usize, usize), Arc<TransportPlan>>;

fn new_cache() -> PlanCache {
    LruCache::new(NonZeroUsize::new(PLAN_CACHE_CAPACITY).unwrap())
}

fn plan_for(g: &Graph, cache: &mut PlanCache, u: usize, v: usize) -> Result<Arc<TransportPlan>> {
    if let Some(p) = cache.get(&(u, v)) {
        return Ok(Arc::clone(p));
    }
    let plan = Arc::new(good_optimal_coupling(g, u, v)?);
    cache.put((u, v), Arc::clone(&plan));
    Ok(plan)
}

fn sample_plan(plan: &TransportPlan, rng: &mut impl RngCore) -> (usize, usize, usize) {
    let mut r = uniform_below(rng, plan.scale);
    for (entry, &units) in plan.entries.iter().zip(&plan.units) {
        if r < units {
            return (entry.source, entry.target, entry.distance);
        }
        r -= units;
    }
    unreachable!("plan units sum to its scale")
}

fn lazy_step(g: &Graph, u: usize, rng: &mut impl RngCore) -> usize {
    let deg = g.degree(u) as u64;
    let r = uniform_below(rng, 2 * deg);
    if r < deg {
        u
    } else {
        g.neighbors(u)[(r - deg) as usize]
    }
}

struct Trial {
    meeting_time: Option<usize>,
    drift_sum: f64,
    drift_sq: f64,
    drift_n: u64,
    position: (usize, usize),
}

fn run_trial(
    g: &Graph,
    start: (usize, usize, usize),
    steps: usize,
    stop_when_met: bool,
    rng: &mut impl RngCore,
    cache: &mut PlanCache,
) -> Result<Trial> {
    let (mut u, mut v, mut z) = start;
    let mut trial = Trial {
        meeting_time: None,
        drift_sum: 0.0,
        drift_sq: 0.0,
        drift_n: 0,
        position: (u, v),
    };
    for t in 1..=steps {
        if u == v {
            u = lazy_step(g, u, rng);
            v = u;
        } else {
            let plan = plan_for(g, cache, u, v)?;
            let (nu, nv, nz) = sample_plan(&plan, rng);
            let inc = nz as f64 - z as f64;
            trial.drift_sum += inc;
            trial.drift_sq += inc * inc;
            trial.drift_n += 1;
            (u, v, z) = (nu, nv, nz);
            if u == v {
                trial.meeting_time = Some(t);
                if stop_when_met {
                    break;
                }
            }
        }
    }
    trial.position = (u, v);
    Ok(trial)
}

fn validate_pair(g: &Graph, x: usize, y: usize) -> Result<usize> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x == y {
        return Err(input_err!("coupled walkers must start at distinct vertices"));
    }
    g.distance(x, y)?
        .finite()
        .ok_or_else(|| Error::MetricInfinite(format!("{x} and {y} are in different components")))
}

/// Runs `trials` independent coupled chains from `(x, y)` for up to `horizon` steps.
///
/// Trial `i` draws from the SplitMix64 stream derived from `(seed, i)`, so the
/// result does not depend on the thread count.
pub fn coupled_meeting_experiment(
    g: &Graph,
    x: usize,
    y: usize,
    horizon: usize,
    trials: usize,
    seed: u64,
) -> Result<MeetingExperiment> {
    let d0 = validate_pair(g, x, y)?;
    if trials == 0 {
        return Err(input_err!("at least one trial is required"));
    }
    let results: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map_init(new_cache, |cache, i| {
            let mut rng = stream(seed, i as u64);
            run_trial(g, (x, y, d0), horizon, true, &mut rng, cache)
        })
        .collect::<Result<_>>()?;

    let meeting_times: Vec<Option<usize>> = results.iter().map(|r| r.meeting_time).collect();
    let mut met_times: Vec<usize> = meeting_times.iter().flatten().copied().collect();
    met_times.sort_unstable();
    let mut tail = Vec::with_capacity(horizon + 1);
    let mut hist = vec![0usize; horizon + 1];
    for &t in &met_times {
        hist[t] += 1;
    }
    let mut met_by = 0;
    for (t, &h) in hist.iter().enumerate() {
        met_by += h;
        tail.push((t, (trials - met_by) as f64 / trials as f64));
    }

    let (mut sum, mut sq, mut n) = (0.0, 0.0, 0u64);
    for r in &results {
        sum += r.drift_sum;
        sq += r.drift_sq;
        n += r.drift_n;
    }
    let drift = if n == 0 {
        DriftStats { samples: 0, mean: 0.0, std_error: 0.0 }
    } else {
        let mean = sum / n as f64;
        let var = if n > 1 { (sq - n as f64 * mean * mean).max(0.0) / (n - 1) as f64 } else { 0.0 };
        DriftStats { samples: n, mean, std_error: (var / n as f64).sqrt() }
    };

    Ok(MeetingExperiment {
        pair: (x, y),
        trials,
        horizon,
        seed,
        met: met_times.len(),
        mean_meeting_time: (!met_times.is_empty())
            .then(|| met_times.iter().sum::<usize>() as f64 / met_times.len() as f64),
        median_meeting_time: met_times.get(met_times.len().saturating_sub(1) / 2).copied(),
        meeting_times,
        tail,
        drift,
    })
}

/// Positions `(X_t, Y_t)` of the coupled chain after exactly `t` steps, one per trial.
pub fn coupled_positions(
    g: &Graph,
    x: usize,
    y: usize,
    t: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<(usize, usize)>> {
    let d0 = validate_pair(g, x, y)?;
    (0..trials)
        .into_par_iter()
        .map_init(new_cache, |cache, i| {
            let mut rng = stream(seed, i as u64);
            run_trial(g, (x, y, d0), t, false, &mut rng, cache).map(|r| r.position)
        })
        .collect()
}
