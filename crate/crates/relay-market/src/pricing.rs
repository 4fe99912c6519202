//! Revenue-optimal relay pricing, computed analytically.
//!
//! Revenue as a function of the unit price is piecewise smooth: each time
//! the price crosses a user's quality the set of buyers shrinks by one.
//! Below the floor price `b_lb` aggregate demand exceeds the budget, so the
//! relay never needs to price lower. The optimum is found by solving one
//! scalar subproblem per interval between consecutive qualities and taking
//! the best candidate; no numeric search over prices is required.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ksbs::allocate;
use crate::model::{ensure_price, quality_b, Scenario};

/// One per-interval candidate: the subproblem's optimal price and the
/// revenue the restricted buyer set would produce there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PriceCandidate {
    /// 1-based interval index; interval `i` admits the `i` strongest buyers.
    pub interval: usize,
    /// Clamped subproblem optimum.
    pub lambda: f64,
    /// Analytic revenue of the first `i` buyers at that price.
    pub revenue: f64,
}

/// Output of [`optimal_price`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PricingSolution {
    /// Revenue-maximizing unit price.
    pub lambda_star: f64,
    /// Floor price at which aggregate ideal demand equals the budget.
    pub b_lb: f64,
    /// Revenue at `lambda_star`: the price times the power actually sold.
    pub revenue: f64,
    /// Positive user qualities, sorted descending.
    pub ordered_b: Vec<f64>,
    /// Number of users whose quality is at least `b_lb`.
    pub m: usize,
    /// Per-interval candidates, index `1..=M`.
    pub candidates: Vec<PriceCandidate>,
}

/// Buyers with positive quality, strongest first.
struct Market {
    /// Qualities, descending.
    b: Vec<f64>,
    /// Matching `q*f2` weights.
    w: Vec<f64>,
}

impl Market {
    fn build(scenario: &Scenario) -> Self {
        let mut pairs: Vec<(f64, f64)> = scenario
            .users()
            .iter()
            .filter_map(|u| {
                let b = quality_b(u);
                (b > 0.0).then(|| (b, u.q() * u.f2()))
            })
            .collect();
        pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
        Market {
            b: pairs.iter().map(|p| p.0).collect(),
            w: pairs.iter().map(|p| p.1).collect(),
        }
    }

    /// Aggregate ideal demand at trial price `price`, ignoring the budget
    /// cap: sum of `max(0, w/sqrt(b) * (1/sqrt(price) - 1/sqrt(b)))`.
    fn phi(&self, price: f64) -> f64 {
        let inv = 1.0 / price.sqrt();
        self.b
            .iter()
            .zip(&self.w)
            .map(|(&b, &w)| (w / b.sqrt() * (inv - 1.0 / b.sqrt())).max(0.0))
            .sum()
    }

    /// Prefix sums `(sum w/sqrt(b), sum w/b)` over the first `i` buyers.
    fn prefix_sums(&self, i: usize) -> (f64, f64) {
        let mut s1 = 0.0;
        let mut s2 = 0.0;
        for j in 0..i {
            s1 += self.w[j] / self.b[j].sqrt();
            s2 += self.w[j] / self.b[j];
        }
        (s1, s2)
    }
}

/// Market plus the floor price and the count of buyers above the floor.
fn market_floor(scenario: &Scenario) -> Result<(Market, usize, f64)> {
    let market = Market::build(scenario);
    if market.b.is_empty() {
        return Err(Error::NoMarket);
    }
    let budget = scenario.relay_power();
    // Largest m whose m-th quality still sees excess demand: phi(b_m) < P.
    // phi(b_1) = 0, so m_scan >= 1; phi past the last buyer is treated as
    // infinite, so m_scan may reach the full market.
    let mut m_scan = 0;
    for i in 0..market.b.len() {
        if market.phi(market.b[i]) < budget {
            m_scan = i + 1;
        } else {
            break;
        }
    }
    let (s1, s2) = market.prefix_sums(m_scan);
    let ratio = s1 / (budget + s2);
    Ok((market, m_scan, ratio * ratio))
}

/// Total ideal demand at a trial price, budget cap ignored.
pub fn demand_curve(scenario: &Scenario, b: f64) -> Result<f64> {
    if !b.is_finite() || b <= 0.0 {
        return Err(Error::InvalidTrialPrice(b));
    }
    Ok(Market::build(scenario).phi(b))
}

/// The floor price `b_lb`: where aggregate ideal demand exactly equals the
/// relay budget. Demand is decreasing in the price, so pricing below the
/// floor only creates unsatisfiable demand.
pub fn lower_bound_price(scenario: &Scenario) -> Result<f64> {
    market_floor(scenario).map(|(_, _, b_lb)| b_lb)
}

/// Optimal price of the `i`-th interval subproblem, clamped into the
/// interval `gamma = (lower, upper)`.
///
/// The unclamped optimum is `c_i = (S1_i / (2*S2_i))^2` from the prefix
/// sums over the `i` strongest buyers.
pub fn subproblem_price(scenario: &Scenario, i: usize, gamma: (f64, f64)) -> Result<f64> {
    let (market, m_scan, _) = market_floor(scenario)?;
    if i == 0 || i > m_scan {
        return Err(Error::InvalidInterval {
            index: i,
            max: m_scan,
        });
    }
    let (lower, upper) = gamma;
    if !lower.is_finite() || !upper.is_finite() || lower < 0.0 || lower > upper {
        return Err(Error::InvalidIntervalBounds { lower, upper });
    }
    let (s1, s2) = market.prefix_sums(i);
    let root = s1 / (2.0 * s2);
    Ok((root * root).clamp(lower, upper))
}

/// Analytic revenue of the `i` strongest buyers at price `lambda`:
/// `S1_i*sqrt(lambda) - S2_i*lambda`. Valid while all `i` buyers are
/// interior, i.e. for `lambda` inside the `i`-th interval.
pub fn interval_revenue(scenario: &Scenario, i: usize, lambda: f64) -> Result<f64> {
    ensure_price(lambda)?;
    let (market, m_scan, _) = market_floor(scenario)?;
    if i == 0 || i > m_scan {
        return Err(Error::InvalidInterval {
            index: i,
            max: m_scan,
        });
    }
    let (s1, s2) = market.prefix_sums(i);
    Ok(s1 * lambda.sqrt() - s2 * lambda)
}

/// Revenue-maximizing price over the whole market.
///
/// Builds the interval decomposition `[b_lb, b_M], ..., [b_2, b_1]`, solves
/// each interval in closed form, and picks the best candidate; ties break
/// toward the smaller price (same revenue, more power sold). When the
/// strongest quality satisfies `b_1 < 4*b_lb` every interval's revenue is
/// still rising at its left edge, so the floor price itself is optimal and
/// is returned exactly.
pub fn optimal_price(scenario: &Scenario) -> Result<PricingSolution> {
    let (market, m_scan, b_lb) = market_floor(scenario)?;
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    let mut candidates = Vec::with_capacity(m_scan);
    for i in 1..=m_scan {
        s1 += market.w[i - 1] / market.b[i - 1].sqrt();
        s2 += market.w[i - 1] / market.b[i - 1];
        let upper = market.b[i - 1];
        let lower = if i == m_scan { b_lb } else { market.b[i] };
        let root = s1 / (2.0 * s2);
        let lambda = (root * root).clamp(lower, upper);
        candidates.push(PriceCandidate {
            interval: i,
            lambda,
            revenue: s1 * lambda.sqrt() - s2 * lambda,
        });
    }
    let (lambda_star, revenue) = if market.b[0] < 4.0 * b_lb {
        // After the loop (s1, s2) hold the full-market prefix sums.
        (b_lb, s1 * b_lb.sqrt() - s2 * b_lb)
    } else {
        let mut best = &candidates[0];
        for c in &candidates[1..] {
            // Candidates are non-increasing in lambda, so >= walks ties
            // toward the smaller price.
            if c.revenue >= best.revenue {
                best = c;
            }
        }
        (best.lambda, best.revenue)
    };
    let m = market.b.iter().filter(|&&b| b >= b_lb).count();
    Ok(PricingSolution {
        lambda_star,
        b_lb,
        revenue,
        ordered_b: market.b,
        m,
        candidates,
    })
}

/// Realized revenue at a price: `lambda` times the power the bargaining
/// allocation actually sells there.
pub fn revenue_at(scenario: &Scenario, lambda: f64) -> Result<f64> {
    let alloc = allocate(scenario, lambda)?;
    Ok(lambda * alloc.power_sold())
}

/// Largest price at which a single user with quality `b`, weight `w`, and
/// ideal demand capped at `budget` would still demand the whole budget.
/// Used as an independent bound in tests.
#[cfg(test)]
fn solo_full_budget_price(b: f64, w: f64, budget: f64) -> f64 {
    let t = b * budget / w + 1.0;
    b / (t * t)
}
