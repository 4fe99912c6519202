//! Metrics and experiment drivers: price sweeps on a fixed scenario,
//! budget sweeps, Monte Carlo parameter sweeps over fading ensembles, and
//! the benchmark rate table.
//!
//! Monte Carlo reductions are deterministic by construction: trials are
//! grouped into fixed-size chunks, each chunk folds its trials in index
//! order, and chunk summaries merge in chunk order. Thread count affects
//! only which worker computes a chunk, never any floating-point result.

use rayon::prelude::*;
use serde::Serialize;

use crate::baselines::{even_allocation, sumrate_optimal_allocation};
use crate::error::{Error, Result};
use crate::ksbs::{allocate, Allocation, Scheme};
use crate::model::{effective_snr, rate, Scenario};
use crate::pricing::optimal_price;
use crate::scenarios::{
    pathloss_scenario, sample_rayleigh, static_network_geometry, FadingSpec, Geometry,
};

/// Trials per reduction chunk. Fixed so that results do not depend on the
/// worker count.
const CHUNK: usize = 256;

/// Scheme order used by every driver that reports all three.
const SCHEMES: [Scheme; 3] = [Scheme::Ksbs, Scheme::Even, Scheme::SumrateOptimal];

/// One aggregated sweep point for one scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    /// The x-axis quantity: a price, a relay power in dB, a channel
    /// variance, or a user count.
    pub swept_value: f64,
    pub scheme: Scheme,
    /// Price in effect (mean of the per-trial optimal price for Monte
    /// Carlo sweeps).
    pub lambda: f64,
    /// Total relay power handed out (mean over trials).
    pub power_sold: f64,
    /// Price times power sold (mean over trials).
    pub revenue: f64,
    /// Network sum rate (mean over trials).
    pub sum_rate: f64,
    /// Normalized rate spread (mean over trials).
    pub fairness: f64,
    /// Trials averaged into this record.
    pub n_trials: usize,
}

/// Which knob [`montecarlo_sweep`] turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// Relay budget in dB.
    RelayPowerDb,
    /// Variance of the source-to-relay channel.
    VarF,
    /// Number of users; values must be positive integers.
    NUsers,
}

/// One row of the benchmark rate table: per-user rates of one scheme at
/// one price.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateRow {
    pub lambda: f64,
    pub scheme: Scheme,
    pub rates: Vec<f64>,
    pub fairness: f64,
    pub sum_rate: f64,
}

/// Achieved rate of every user under the given powers.
pub fn per_user_rates(scenario: &Scenario, powers: &[f64]) -> Result<Vec<f64>> {
    if powers.len() != scenario.n_users() {
        return Err(Error::MismatchedLengths {
            users: scenario.n_users(),
            powers: powers.len(),
        });
    }
    scenario
        .users()
        .iter()
        .zip(powers)
        .map(|(u, &p)| Ok(rate(effective_snr(u, p)?)))
        .collect()
}

/// Network sum rate of an allocation.
pub fn sum_rate(scenario: &Scenario, allocation: &Allocation) -> Result<f64> {
    Ok(per_user_rates(scenario, &allocation.powers)?.iter().sum())
}

/// Normalized rate spread `(max - min) / max`. Smaller is fairer. A rate
/// vector with no positive entry has no spread to normalize and maps
/// to 0.
pub fn fairness(rates: &[f64]) -> f64 {
    let max = rates.iter().fold(f64::NEG_INFINITY, |a, &x| a.max(x));
    if max <= 0.0 {
        return 0.0;
    }
    let min = rates.iter().fold(f64::INFINITY, |a, &x| a.min(x));
    (max - min) / max
}

/// The three per-scheme metric tuples of one solved scenario:
/// `[lambda, power_sold, revenue, sum_rate, fairness]` in [`SCHEMES`]
/// order.
fn solve_all(scenario: &Scenario, lambda: f64) -> Result<[[f64; 5]; 3]> {
    let allocs = [
        allocate(scenario, lambda)?,
        even_allocation(scenario, lambda)?,
        sumrate_optimal_allocation(scenario)?,
    ];
    let mut out = [[0.0; 5]; 3];
    for (row, alloc) in out.iter_mut().zip(&allocs) {
        let rates = per_user_rates(scenario, &alloc.powers)?;
        let sold = alloc.power_sold();
        *row = [
            lambda,
            sold,
            lambda * sold,
            rates.iter().sum(),
            fairness(&rates),
        ];
    }
    Ok(out)
}

fn record(swept_value: f64, scheme: Scheme, metrics: [f64; 5], n_trials: usize) -> SweepRecord {
    SweepRecord {
        swept_value,
        scheme,
        lambda: metrics[0],
        power_sold: metrics[1],
        revenue: metrics[2],
        sum_rate: metrics[3],
        fairness: metrics[4],
        n_trials,
    }
}

/// All three schemes on one fixed scenario across a price grid. The
/// sum-rate-optimal allocation ignores the price, so its power and rate
/// fields repeat across the grid.
pub fn sweep_price(scenario: &Scenario, lambda_grid: &[f64]) -> Result<Vec<SweepRecord>> {
    if lambda_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let opt = sumrate_optimal_allocation(scenario)?;
    let opt_rates = per_user_rates(scenario, &opt.powers)?;
    let opt_sold = opt.power_sold();
    let opt_sum: f64 = opt_rates.iter().sum();
    let opt_fair = fairness(&opt_rates);
    let mut records = Vec::with_capacity(3 * lambda_grid.len());
    for &lambda in lambda_grid {
        for scheme in [Scheme::Ksbs, Scheme::Even] {
            let alloc = match scheme {
                Scheme::Ksbs => allocate(scenario, lambda)?,
                _ => even_allocation(scenario, lambda)?,
            };
            let rates = per_user_rates(scenario, &alloc.powers)?;
            let sold = alloc.power_sold();
            records.push(record(
                lambda,
                scheme,
                [lambda, sold, lambda * sold, rates.iter().sum(), fairness(&rates)],
                1,
            ));
        }
        records.push(record(
            lambda,
            Scheme::SumrateOptimal,
            [lambda, opt_sold, lambda * opt_sold, opt_sum, opt_fair],
            1,
        ));
    }
    Ok(records)
}

/// All three schemes on a path-loss network across a relay-budget grid
/// (dB). Each budget gets its own optimal price.
pub fn sweep_budget(geometry: &Geometry, q_db: f64, p_db_grid: &[f64]) -> Result<Vec<SweepRecord>> {
    if p_db_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut records = Vec::with_capacity(3 * p_db_grid.len());
    for &p_db in p_db_grid {
        let scenario = pathloss_scenario(geometry, q_db, p_db)?;
        let lambda = optimal_price(&scenario)?.lambda_star;
        let metrics = solve_all(&scenario, lambda)?;
        for (scheme, row) in SCHEMES.into_iter().zip(metrics) {
            records.push(record(p_db, scheme, row, 1));
        }
    }
    Ok(records)
}

/// Running means over a contiguous block of trials.
#[derive(Clone, Copy)]
struct BlockMeans {
    count: usize,
    means: [[f64; 5]; 3],
}

impl BlockMeans {
    fn empty() -> Self {
        BlockMeans {
            count: 0,
            means: [[0.0; 5]; 3],
        }
    }

    fn push(&mut self, sample: [[f64; 5]; 3]) {
        self.count += 1;
        let inv = 1.0 / self.count as f64;
        for (m, s) in self.means.iter_mut().zip(&sample) {
            for (mv, sv) in m.iter_mut().zip(s) {
                *mv += (sv - *mv) * inv;
            }
        }
    }

    fn merge(self, other: BlockMeans) -> BlockMeans {
        if other.count == 0 {
            return self;
        }
        if self.count == 0 {
            return other;
        }
        let total = self.count + other.count;
        let weight = other.count as f64 / total as f64;
        let mut means = self.means;
        for (m, o) in means.iter_mut().zip(&other.means) {
            for (mv, ov) in m.iter_mut().zip(o) {
                *mv += (ov - *mv) * weight;
            }
        }
        BlockMeans {
            count: total,
            means,
        }
    }
}

/// Statistics of one fading trial at its own optimal price.
fn trial_metrics(spec: &FadingSpec, trial: u64) -> Result<[[f64; 5]; 3]> {
    let scenario = sample_rayleigh(spec, trial);
    let lambda = optimal_price(&scenario)?.lambda_star;
    solve_all(&scenario, lambda)
}

/// Monte Carlo sweep over one ensemble parameter. Every grid value runs
/// `n_trials` independent fading trials; each trial solves the pricing
/// problem and all three allocation schemes at that trial's optimal
/// price, and the records carry the per-scheme means.
///
/// Results are bit-identical for a given spec regardless of thread count.
pub fn montecarlo_sweep(
    template: &FadingSpec,
    parameter: SweepParameter,
    values: &[f64],
    n_trials: usize,
) -> Result<Vec<SweepRecord>> {
    if values.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if n_trials == 0 {
        return Err(Error::NoTrials);
    }
    let mut records = Vec::with_capacity(3 * values.len());
    for &value in values {
        let spec = match parameter {
            SweepParameter::RelayPowerDb => template.with_p_db(value)?,
            SweepParameter::VarF => template.with_var_f(value)?,
            SweepParameter::NUsers => {
                if !value.is_finite() || value < 1.0 || value.fract() != 0.0 {
                    return Err(Error::InvalidUserCount(value));
                }
                template.with_n_users(value as usize)?
            }
        };
        let n_chunks = n_trials.div_ceil(CHUNK);
        let blocks: Vec<BlockMeans> = (0..n_chunks)
            .into_par_iter()
            .map(|c| {
                let lo = c * CHUNK;
                let hi = (lo + CHUNK).min(n_trials);
                let mut block = BlockMeans::empty();
                for t in lo..hi {
                    block.push(trial_metrics(&spec, t as u64)?);
                }
                Ok(block)
            })
            .collect::<Result<_>>()?;
        let total = blocks
            .into_iter()
            .fold(BlockMeans::empty(), BlockMeans::merge);
        for (scheme, row) in SCHEMES.into_iter().zip(total.means) {
            records.push(record(value, scheme, row, total.count));
        }
    }
    Ok(records)
}

/// The benchmark rate table: per-user rates, fairness, and sum rate of
/// all three schemes on the static path-loss network at five reference
/// prices. The sum-rate-optimal rows repeat at every price since that
/// scheme never sees the price.
pub fn static_rate_table() -> Result<Vec<RateRow>> {
    let scenario = pathloss_scenario(&static_network_geometry(), 10.0, 15.0)?;
    let prices = [0.0, 0.0013, 0.0027, 0.0047, 0.0053];
    let mut rows = Vec::with_capacity(3 * prices.len());
    for lambda in prices {
        let allocs = [
            allocate(&scenario, lambda)?,
            even_allocation(&scenario, lambda)?,
            sumrate_optimal_allocation(&scenario)?,
        ];
        for alloc in allocs {
            let rates = per_user_rates(&scenario, &alloc.powers)?;
            rows.push(RateRow {
                lambda,
                scheme: alloc.scheme,
                fairness: fairness(&rates),
                sum_rate: rates.iter().sum(),
                rates,
            });
        }
    }
    Ok(rows)
}

/// Revenue-maximizing price for the even-allocation scheme, by grid
/// search: unlike the bargaining scheme it has no closed form. Returns
/// the best grid price and its revenue; ties keep the earliest grid
/// point.
pub fn even_optimal_price(scenario: &Scenario, lambda_grid: &[f64]) -> Result<(f64, f64)> {
    if lambda_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut best = (lambda_grid[0], f64::NEG_INFINITY);
    for &lambda in lambda_grid {
        let revenue = lambda * even_allocation(scenario, lambda)?.power_sold();
        if revenue > best.1 {
            best = (lambda, revenue);
        }
    }
    Ok(best)
}
