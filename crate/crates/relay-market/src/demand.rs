//! Closed-form per-user demand: how much relay power a user would buy at a
//! given unit price if the whole budget were available to it.
//!
//! The demand curve drives both sides of the market: the bargaining
//! allocator treats it as each user's ideal point, and the pricing engine
//! aggregates it to find where demand meets the budget.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{direct_snr, ensure_price, quality_b, UserLink};

/// Which regime a user's demand landed in at a given price.
///
/// `PricedOut` holds exactly when the demanded power is zero. Points on
/// the interior/cap boundary are tagged `Interior`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DemandCase {
    /// The price is at or above the user's quality; it buys nothing.
    PricedOut,
    /// The unconstrained optimum fits within the budget.
    Interior,
    /// The unconstrained optimum exceeds the budget; demand is clamped.
    BudgetCapped,
}

/// A user's ideal operating point at a price: the power it would buy, the
/// utility it would reach, and the regime that produced them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdealDemand {
    /// Ideal relay power purchase, in [0, budget].
    pub power: f64,
    /// Utility at that purchase; never below the disagreement utility.
    pub utility: f64,
    /// The demand regime.
    pub case: DemandCase,
}

pub(crate) fn ensure_budget(budget: f64) -> Result<()> {
    if !budget.is_finite() || budget <= 0.0 {
        return Err(Error::InvalidBudget(budget));
    }
    Ok(())
}

/// Ideal demand of one user at unit price `lambda` under a relay budget.
///
/// Maximizes `utility(user, p, lambda)` over `p` in `[0, budget]`. The
/// maximizer is the compact form
/// `max(0, min(((q*f2 + 1)/g2) * (sqrt(g2 / (lambda*(1 + 1/(q*f2)))) - 1), budget))`
/// with two limits handled explicitly: `lambda = 0` demands the whole
/// budget (when quality is positive) and zero-quality users demand nothing
/// at every price.
pub fn ideal_demand(user: &UserLink, lambda: f64, budget: f64) -> Result<IdealDemand> {
    ensure_price(lambda)?;
    ensure_budget(budget)?;
    let b = quality_b(user);
    let u0 = direct_snr(user).value();
    if b == 0.0 || lambda >= b {
        return Ok(IdealDemand {
            power: 0.0,
            utility: u0,
            case: DemandCase::PricedOut,
        });
    }
    // Quality is positive, so q, f2, g2 are all positive here.
    let w = user.q() * user.f2();
    let a = user.g2() / (w + 1.0);
    if lambda == 0.0 {
        return Ok(IdealDemand {
            power: budget,
            utility: b * budget / (a * budget + 1.0) + u0,
            case: DemandCase::BudgetCapped,
        });
    }
    let unclamped =
        ((w + 1.0) / user.g2()) * ((user.g2() / (lambda * (1.0 + 1.0 / w))).sqrt() - 1.0);
    if unclamped <= 0.0 {
        Ok(IdealDemand {
            power: 0.0,
            utility: u0,
            case: DemandCase::PricedOut,
        })
    } else if unclamped > budget {
        Ok(IdealDemand {
            power: budget,
            utility: b * budget / (a * budget + 1.0) - lambda * budget + u0,
            case: DemandCase::BudgetCapped,
        })
    } else {
        let s = (lambda / b).sqrt();
        Ok(IdealDemand {
            power: unclamped,
            utility: w * (1.0 - s) * (1.0 - s) + u0,
            case: DemandCase::Interior,
        })
    }
}

/// Ideal power demand `P_i^I(lambda)`; see [`ideal_demand`].
pub fn ideal_power(user: &UserLink, lambda: f64, budget: f64) -> Result<f64> {
    Ok(ideal_demand(user, lambda, budget)?.power)
}

/// Ideal utility `u_i^I(lambda)`; see [`ideal_demand`].
pub fn ideal_utility(user: &UserLink, lambda: f64, budget: f64) -> Result<f64> {
    Ok(ideal_demand(user, lambda, budget)?.utility)
}
