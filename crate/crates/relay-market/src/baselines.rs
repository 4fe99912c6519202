//! Comparison schemes: even power allocation and the sum-rate optimum.
//!
//! Even allocation gives each user at most an equal share `P/N` of the
//! relay budget, still respecting individual demand at the quoted price.
//! The sum-rate optimum ignores prices entirely and splits the budget to
//! maximize the network sum rate; it is the efficiency yardstick the
//! bargaining scheme is measured against.

use crate::demand::ideal_power;
use crate::error::{Error, Result};
use crate::ksbs::{Allocation, Scheme};
use crate::model::{ensure_price, quality_b, Scenario, UserLink};

/// Outer tolerance on the allocated total, relative to the budget.
const SUM_TOL: f64 = 1e-9;
/// Bisection depths: inner solves a per-user power on `[0, P]`, outer
/// solves the shared multiplier. Both brackets shrink geometrically, so
/// these depths exhaust f64 resolution long before they run out.
const INNER_ITERS: usize = 100;
const OUTER_ITERS: usize = 200;

/// Equal-share allocation: each user receives `min(ideal demand, P/N)`.
///
/// The bargaining level `k` is not meaningful here and is set to 1.
pub fn even_allocation(scenario: &Scenario, lambda: f64) -> Result<Allocation> {
    ensure_price(lambda)?;
    let budget = scenario.relay_power();
    let share = budget / scenario.n_users() as f64;
    let mut powers = Vec::with_capacity(scenario.n_users());
    for user in scenario.users() {
        powers.push(ideal_power(user, lambda, budget)?.min(share));
    }
    let participants = (0..powers.len()).filter(|&i| powers[i] > 0.0).collect();
    Ok(Allocation {
        powers,
        k: 1.0,
        participants,
        scheme: Scheme::Even,
    })
}

/// Relay-side view of one user's rate curve: `snr(p) = b*p/(a*p+1) + u0`.
struct RateCurve {
    b: f64,
    a: f64,
    u0: f64,
}

impl RateCurve {
    fn new(user: &UserLink) -> Self {
        let w = user.q() * user.f2();
        RateCurve {
            b: quality_b(user),
            a: user.g2() / (w + 1.0),
            u0: user.q() * user.h2(),
        }
    }

    /// d rate / d power, strictly decreasing in `p` when `b > 0`.
    fn marginal(&self, p: f64) -> f64 {
        let t = self.a * p + 1.0;
        let snr = self.b * p / t + self.u0;
        self.b / (t * t * (1.0 + snr) * core::f64::consts::LN_2)
    }

    /// Power at which the marginal rate equals `mu`, clipped to `[0, cap]`.
    fn power_at_marginal(&self, mu: f64, cap: f64) -> f64 {
        if self.b == 0.0 || self.marginal(0.0) <= mu {
            return 0.0;
        }
        if self.marginal(cap) >= mu {
            return cap;
        }
        let mut lo = 0.0;
        let mut hi = cap;
        for _ in 0..INNER_ITERS {
            let mid = 0.5 * (lo + hi);
            if self.marginal(mid) > mu {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Splits the budget to maximize the sum of user rates, via bisection on
/// the shared marginal-rate multiplier (water-filling). Each rate term is
/// concave in its power, so equal marginals at the common multiplier are
/// sufficient for optimality. Prices play no role.
///
/// The bargaining level `k` is not meaningful here and is set to 1.
pub fn sumrate_optimal_allocation(scenario: &Scenario) -> Result<Allocation> {
    let curves: Vec<RateCurve> = scenario.users().iter().map(RateCurve::new).collect();
    if curves.iter().all(|c| c.b == 0.0) {
        return Err(Error::NoMarket);
    }
    let budget = scenario.relay_power();
    let fill = |mu: f64| -> Vec<f64> {
        curves
            .iter()
            .map(|c| c.power_at_marginal(mu, budget))
            .collect()
    };
    // At mu = 0 every active user wants the whole budget.
    let mut powers = fill(0.0);
    if powers.iter().sum::<f64>() > budget {
        let mut lo = 0.0;
        let mut hi = curves.iter().map(|c| c.marginal(0.0)).fold(0.0, f64::max);
        for _ in 0..OUTER_ITERS {
            let mu = 0.5 * (lo + hi);
            let trial = fill(mu);
            let total: f64 = trial.iter().sum();
            if (total - budget).abs() <= SUM_TOL * budget {
                powers = trial;
                break;
            }
            // Keep total(lo) >= budget >= total(hi).
            if total > budget {
                lo = mu;
            } else {
                hi = mu;
                powers = trial;
            }
        }
    }
    let participants = (0..powers.len()).filter(|&i| powers[i] > 0.0).collect();
    Ok(Allocation {
        powers,
        k: 1.0,
        participants,
        scheme: Scheme::SumrateOptimal,
    })
}
