//! Lazy-walk distributions, entropy and return-probability diagnostics,
//! and the coupled two-walker experiment.

mod coupling;
mod lumped;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{input_err, Result};
use crate::graph::Graph;
use crate::rational::{to_f64, Rational};

pub use coupling::{
    coupled_positions, coupled_meeting_experiment, regular_meeting_bound, supermartingale_bound,
    wilson_upper, DriftStats, MeetingExperiment, WILSON_Z_99,
};
pub use lumped::LumpedChain;

/// Walks up to this many steps are computed in exact arithmetic under [`WalkMode::Auto`].
pub const EXACT_STEP_LIMIT: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WalkMode {
    /// Exact up to [`EXACT_STEP_LIMIT`] steps, floating point beyond.
    #[default]
    Auto,
    Exact,
    Float,
}

impl WalkMode {
    fn resolve(self, t: usize) -> Arithmetic {
        match self {
            WalkMode::Exact => Arithmetic::Exact,
            WalkMode::Float => Arithmetic::Float,
            WalkMode::Auto if t <= EXACT_STEP_LIMIT => Arithmetic::Exact,
            WalkMode::Auto => Arithmetic::Float,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Probabilities {
    Exact(BTreeMap<usize, Rational>),
    Float(BTreeMap<usize, f64>),
}

/// Law of the lazy walk after `t` steps from `origin`; only positive entries are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkDistribution {
    pub origin: usize,
    pub t: usize,
    pub probabilities: Probabilities,
}

impl WalkDistribution {
    pub fn arithmetic(&self) -> Arithmetic {
        match self.probabilities {
            Probabilities::Exact(_) => Arithmetic::Exact,
            Probabilities::Float(_) => Arithmetic::Float,
        }
    }

    pub fn get(&self, v: usize) -> f64 {
        match &self.probabilities {
            Probabilities::Exact(m) => m.get(&v).map_or(0.0, to_f64),
            Probabilities::Float(m) => m.get(&v).copied().unwrap_or(0.0),
        }
    }

    pub fn get_exact(&self, v: usize) -> Option<Rational> {
        match &self.probabilities {
            Probabilities::Exact(m) => Some(m.get(&v).cloned().unwrap_or_else(Rational::zero)),
            Probabilities::Float(_) => None,
        }
    }

    pub fn support(&self) -> Vec<usize> {
        match &self.probabilities {
            Probabilities::Exact(m) => m.keys().copied().collect(),
            Probabilities::Float(m) => m.keys().copied().collect(),
        }
    }

    pub fn to_f64_map(&self) -> BTreeMap<usize, f64> {
        self.support().into_iter().map(|v| (v, self.get(v))).collect()
    }
}

/// `P^t(o, .)` for the lazy walk on `g`.
pub fn walk_distribution(g: &Graph, o: usize, t: usize, mode: WalkMode) -> Result<WalkDistribution> {
    let chain = LumpedChain::from_graph(g, o)?;
    let cell_of = chain.cell_of().expect("chain built from a graph");
    let probabilities = match mode.resolve(t) {
        Arithmetic::Exact => {
            let (num, denom) = chain.run_exact(t);
            let scale = num_traits::pow(BigInt::from(denom), t);
            let per_cell: Vec<Rational> = num
                .into_iter()
                .enumerate()
                .map(|(c, n)| Rational::new(BigInt::from(n), &scale * BigInt::from(chain.cell_size(c))))
                .collect();
            Probabilities::Exact(
                cell_of
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| !per_cell[c].is_zero())
                    .map(|(v, &c)| (v, per_cell[c].clone()))
                    .collect(),
            )
        }
        Arithmetic::Float => {
            let mut last = Vec::new();
            chain.run_float(t, |step, mass| {
                if step == t {
                    last = mass.to_vec();
                }
            });
            Probabilities::Float(
                cell_of
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| last[c] > 0.0)
                    .map(|(v, &c)| (v, last[c] / chain.cell_size(c) as f64))
                    .collect(),
            )
        }
    };
    Ok(WalkDistribution { origin: o, t, probabilities })
}

/// `P^t(o, o)` in floating point.
pub fn return_probability(g: &Graph, o: usize, t: usize) -> Result<f64> {
    Ok(return_probabilities_of(&LumpedChain::from_graph(g, o)?, t)[t])
}

/// `P^t(o, o)` exactly.
pub fn return_probability_exact(g: &Graph, o: usize, t: usize) -> Result<Rational> {
    let chain = LumpedChain::from_graph(g, o)?;
    let (num, denom) = chain.run_exact(t);
    Ok(Rational::new(
        BigInt::from(num[0].clone()),
        num_traits::pow(BigInt::from(denom), t),
    ))
}

/// `P^s(root, root)` for `s = 0..=steps`.
pub fn return_probabilities_of(chain: &LumpedChain, steps: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(steps + 1);
    chain.run_float(steps, |_, mass| out.push(mass[0]));
    out
}

/// Entropies `H_t` of the walk law and the rates `H_t / t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropySeries {
    pub origin: usize,
    pub values: Vec<(usize, f64)>,
    pub rate_estimates: Vec<(usize, f64)>,
}

impl EntropySeries {
    pub fn entropy(&self, t: usize) -> Option<f64> {
        self.values.get(t).map(|v| v.1)
    }

    pub fn rate(&self, t: usize) -> Option<f64> {
        self.rate_estimates.iter().find(|r| r.0 == t).map(|r| r.1)
    }
}

pub fn entropy_series(g: &Graph, o: usize, t_max: usize) -> Result<EntropySeries> {
    let mut series = entropy_series_of(&LumpedChain::from_graph(g, o)?, t_max);
    series.origin = o;
    Ok(series)
}

/// Entropy series of the walk from the chain's root (reported as origin 0).
pub fn entropy_series_of(chain: &LumpedChain, t_max: usize) -> EntropySeries {
    let mut values = Vec::with_capacity(t_max + 1);
    chain.run_float(t_max, |t, mass| values.push((t, chain.entropy(mass))));
    let rate_estimates = values.iter().skip(1).map(|&(t, h)| (t, h / t as f64)).collect();
    EntropySeries { origin: 0, values, rate_estimates }
}

/// Even-time root sequence `(P^{2t}(o, o))^{1/(2t)}`, `t = 1..=t_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusSeries {
    pub origin: usize,
    pub values: Vec<(usize, f64)>,
    /// Whether the sequence never decreases; a trend diagnostic only.
    pub nondecreasing: bool,
}

impl RadiusSeries {
    pub fn at(&self, t: usize) -> Option<f64> {
        self.values.iter().find(|v| v.0 == t).map(|v| v.1)
    }
}

pub fn spectral_radius_estimate(g: &Graph, o: usize, t_max: usize) -> Result<RadiusSeries> {
    let mut series = spectral_radius_estimate_of(&LumpedChain::from_graph(g, o)?, t_max);
    series.origin = o;
    Ok(series)
}

pub fn spectral_radius_estimate_of(chain: &LumpedChain, t_max: usize) -> RadiusSeries {
    let ret = return_probabilities_of(chain, 2 * t_max);
    let values: Vec<(usize, f64)> = (1..=t_max)
        .map(|t| (t, ret[2 * t].powf(1.0 / (2 * t) as f64)))
        .collect();
    let nondecreasing = values.windows(2).all(|w| w[1].1 >= w[0].1);
    RadiusSeries { origin: 0, values, nondecreasing }
}

/// `H_t / t - 2 ln(1 / r_t)` with `r_t` the even-time radius estimate.
pub fn entropy_radius_gap(g: &Graph, o: usize, t: usize) -> Result<f64> {
    entropy_radius_gap_of(&LumpedChain::from_graph(g, o)?, t)
}

pub fn entropy_radius_gap_of(chain: &LumpedChain, t: usize) -> Result<f64> {
    if t == 0 {
        return Err(input_err!("entropy/radius gap needs t >= 1"));
    }
    let h = entropy_series_of(chain, t).values[t].1;
    let r = spectral_radius_estimate_of(chain, t).values[t - 1].1;
    Ok(h / t as f64 - 2.0 * (1.0 / r).ln())
}
