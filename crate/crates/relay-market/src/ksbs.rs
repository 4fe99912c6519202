//! Bargaining-fair division of the relay budget at a fixed price.
//!
//! When aggregate ideal demand fits inside the budget everyone simply gets
//! their demand. Otherwise the budget binds and the allocation equalizes
//! every participant's penalty ratio: the fraction of its maximum possible
//! utility gain that it actually realizes. The common ratio `k` is found by
//! bisection; each user's power at a ratio comes from a closed-form
//! quadratic, so no numeric optimizer is involved.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::demand::{ensure_budget, ideal_demand};
use crate::error::{Error, Result};
use crate::model::{direct_snr, ensure_power, ensure_price, quality_b, Scenario, UserLink};

/// Which allocation scheme produced an [`Allocation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Equal-penalty bargaining allocation.
    Ksbs,
    /// Per-user budget slice capped by ideal demand.
    Even,
    /// Sum-rate maximizing allocation, price-blind.
    SumrateOptimal,
}

impl Scheme {
    /// Stable lowercase tag used in CSV output and CLI flags.
    pub fn tag(self) -> &'static str {
        match self {
            Scheme::Ksbs => "ksbs",
            Scheme::Even => "even",
            Scheme::SumrateOptimal => "sumrate-optimal",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Result of dividing the relay budget among the users of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Allocation {
    /// Relay power per user, in the scenario's caller order.
    pub powers: Vec<f64>,
    /// Achieved common penalty ratio; 1 when demand fits in the budget
    /// (vacuously 1 when nobody participates).
    pub k: f64,
    /// Indices of users holding positive power; for priced schemes these
    /// are the users whose quality strictly exceeds the price.
    pub participants: Vec<usize>,
    /// Which scheme produced this allocation.
    pub scheme: Scheme,
}

impl Allocation {
    /// Total relay power handed out.
    pub fn power_sold(&self) -> f64 {
        self.powers.iter().sum()
    }
}

/// Per-participant constants of the penalty ratio
/// `psi(p) = (b*p/(a*p + 1) - lambda*p) / d`.
struct PenaltyCurve {
    b: f64,
    a: f64,
    /// Maximum utility gain `d = u_ideal - u_disagreement`; positive for
    /// every participant.
    d: f64,
    ideal: f64,
}

impl PenaltyCurve {
    fn psi(&self, p: f64, lambda: f64) -> f64 {
        (self.b * p / (self.a * p + 1.0) - lambda * p) / self.d
    }

    /// The smaller non-negative solution of `psi(p) = k`, i.e. the cheapest
    /// power at which the user realizes fraction `k` of its maximum gain.
    fn power_at(&self, k: f64, lambda: f64) -> f64 {
        if k == 0.0 {
            return 0.0;
        }
        let kd = k * self.d;
        let p = if lambda == 0.0 {
            // psi is a Moebius map; the quadratic degenerates to linear.
            kd / (self.b - kd * self.a)
        } else {
            // lambda*a*p^2 + (k*d*a + lambda - b)*p + k*d = 0. The linear
            // coefficient is negative for every k in [0, 1], so the stable
            // path computes the larger root first and recovers the smaller
            // one from the product of roots.
            let b_q = kd * self.a + lambda - self.b;
            let disc = (b_q * b_q - 4.0 * lambda * self.a * kd).max(0.0);
            let larger = 0.5 * (-b_q + disc.sqrt());
            kd / larger
        };
        p.min(self.ideal)
    }
}

/// Builds the penalty curve for a user, or `None` when it does not
/// participate at this price.
fn participant_curve(user: &UserLink, lambda: f64, budget: f64) -> Result<Option<PenaltyCurve>> {
    ensure_price(lambda)?;
    ensure_budget(budget)?;
    let b = quality_b(user);
    if b <= lambda {
        return Ok(None);
    }
    let dem = ideal_demand(user, lambda, budget)?;
    let w = user.q() * user.f2();
    Ok(Some(PenaltyCurve {
        b,
        a: user.g2() / (w + 1.0),
        d: dem.utility - direct_snr(user).value(),
        ideal: dem.power,
    }))
}

/// Orders users descending by (quality, q, f2, g2, h2) so that internal
/// summation order is a function of the user set, not of caller order.
fn canonical_cmp(x: &UserLink, y: &UserLink) -> Ordering {
    let kx = [quality_b(x), x.q(), x.f2(), x.g2(), x.h2()];
    let ky = [quality_b(y), y.q(), y.f2(), y.g2(), y.h2()];
    for (a, b) in kx.iter().zip(ky.iter()) {
        match a.total_cmp(b) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Fraction of its maximum possible utility gain the user realizes when
/// buying `p_i` at price `lambda` under the given budget.
///
/// Zero at `p_i = 0`, one at the ideal demand, strictly increasing in
/// between. Errors when the user does not participate (`b <= lambda`),
/// since the gain denominator is zero there.
pub fn penalty_ratio(user: &UserLink, p_i: f64, lambda: f64, budget: f64) -> Result<f64> {
    ensure_power(p_i)?;
    let curve = participant_curve(user, lambda, budget)?.ok_or(Error::NonParticipant {
        b: quality_b(user),
        lambda,
    })?;
    Ok(curve.psi(p_i, lambda))
}

/// The unique power in `[0, ideal demand]` at which the user's penalty
/// ratio equals `k`. Inverse of [`penalty_ratio`] on its increasing region.
pub fn power_at_level(user: &UserLink, k: f64, lambda: f64, budget: f64) -> Result<f64> {
    if !k.is_finite() || !(0.0..=1.0).contains(&k) {
        return Err(Error::LevelOutOfRange(k));
    }
    let curve = participant_curve(user, lambda, budget)?.ok_or(Error::NonParticipant {
        b: quality_b(user),
        lambda,
    })?;
    Ok(curve.power_at(k, lambda))
}

/// Relative tolerance on the budget residual in the bisection on `k`.
const BUDGET_TOL: f64 = 1e-9;
const MAX_BISECT: usize = 200;

/// Bargaining allocation of the relay budget at unit price `lambda`.
///
/// Participants are the users with quality strictly above the price. If
/// their total ideal demand fits inside the budget each gets its demand
/// and `k = 1`; otherwise the common penalty level `k` is bisected until
/// the allocation spends the budget to within `1e-9` relative.
pub fn allocate(scenario: &Scenario, lambda: f64) -> Result<Allocation> {
    ensure_price(lambda)?;
    let users = scenario.users();
    let budget = scenario.relay_power();
    let mut participants = Vec::new();
    let mut entries: Vec<(usize, PenaltyCurve)> = Vec::new();
    for (i, user) in users.iter().enumerate() {
        if let Some(curve) = participant_curve(user, lambda, budget)? {
            participants.push(i);
            entries.push((i, curve));
        }
    }
    let mut powers = vec![0.0; users.len()];
    if entries.is_empty() {
        return Ok(Allocation {
            powers,
            k: 1.0,
            participants,
            scheme: Scheme::Ksbs,
        });
    }
    entries.sort_by(|x, y| canonical_cmp(&users[y.0], &users[x.0]));
    let total_ideal: f64 = entries.iter().map(|e| e.1.ideal).sum();
    let k = if total_ideal <= budget {
        for (i, curve) in &entries {
            powers[*i] = curve.ideal;
        }
        1.0
    } else {
        let tol = BUDGET_TOL * budget;
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        let mut k = 0.0;
        let mut converged = false;
        for _ in 0..MAX_BISECT {
            k = 0.5 * (lo + hi);
            let sold: f64 = entries.iter().map(|e| e.1.power_at(k, lambda)).sum();
            if (sold - budget).abs() <= tol {
                converged = true;
                break;
            }
            if sold > budget {
                hi = k;
            } else {
                lo = k;
            }
        }
        if !converged {
            // Fall back to the under-budget side so the budget invariant
            // holds even if the residual tolerance was never met.
            k = lo;
        }
        for (i, curve) in &entries {
            powers[*i] = curve.power_at(k, lambda);
        }
        k
    };
    Ok(Allocation {
        powers,
        k,
        participants,
        scheme: Scheme::Ksbs,
    })
}
