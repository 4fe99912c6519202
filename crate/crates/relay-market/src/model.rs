//! Scenario data model and the SNR, utility, rate, and quality primitives.
//!
//! All quantities are linear scale. Channels enter every formula through
//! their power gains only, so links store squared magnitudes and nothing
//! else; decibels appear solely at the I/O boundary via [`db_to_linear`].

use serde::Serialize;

use crate::error::{Error, Result};

/// One source-destination pair and its channels.
///
/// `q` is the user's transmit power, `f2` the user-to-relay power gain,
/// `g2` the relay-to-destination power gain, and `h2` the direct
/// user-to-destination power gain. All four are finite and non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UserLink {
    pub(crate) q: f64,
    pub(crate) f2: f64,
    pub(crate) g2: f64,
    pub(crate) h2: f64,
}

impl UserLink {
    /// Validates and builds a link.
    pub fn new(q: f64, f2: f64, g2: f64, h2: f64) -> Result<Self> {
        for (name, value) in [("q", q), ("f2", f2), ("g2", g2), ("h2", h2)] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidGain { name, value });
            }
        }
        Ok(Self { q, f2, g2, h2 })
    }

    /// Transmit power of the user, linear scale.
    pub fn q(&self) -> f64 {
        self.q
    }

    /// User-to-relay channel power gain.
    pub fn f2(&self) -> f64 {
        self.f2
    }

    /// Relay-to-destination channel power gain.
    pub fn g2(&self) -> f64 {
        self.g2
    }

    /// Direct user-to-destination channel power gain.
    pub fn h2(&self) -> f64 {
        self.h2
    }
}

/// A network instance: the users and the relay's total power budget.
///
/// User order is the caller's order. Solvers may reorder internally but
/// always report results back in this order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    users: Vec<UserLink>,
    relay_power: f64,
}

impl Scenario {
    /// Validates and builds a scenario: non-empty users, positive budget.
    pub fn new(users: Vec<UserLink>, relay_power: f64) -> Result<Self> {
        if users.is_empty() {
            return Err(Error::EmptyScenario);
        }
        if !relay_power.is_finite() || relay_power <= 0.0 {
            return Err(Error::InvalidBudget(relay_power));
        }
        Ok(Self { users, relay_power })
    }

    /// The users in caller order.
    pub fn users(&self) -> &[UserLink] {
        &self.users
    }

    /// Total relay power budget, linear scale.
    pub fn relay_power(&self) -> f64 {
        self.relay_power
    }

    /// Number of users.
    pub fn n_users(&self) -> usize {
        self.users.len()
    }
}

/// A dimensionless linear SNR, guaranteed non-negative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct SnrValue(f64);

impl SnrValue {
    /// Wraps a non-negative finite SNR.
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidSnr(value));
        }
        Ok(Self(value))
    }

    /// The raw linear SNR.
    pub fn value(self) -> f64 {
        self.0
    }
}

pub(crate) fn ensure_power(p: f64) -> Result<()> {
    if !p.is_finite() || p < 0.0 {
        return Err(Error::InvalidPower(p));
    }
    Ok(())
}

pub(crate) fn ensure_price(lambda: f64) -> Result<()> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::InvalidPrice(lambda));
    }
    Ok(())
}

/// Converts decibels to linear scale: `10^(x/10)`.
pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

/// Effective received SNR when the relay spends `p_i` of its power on this
/// user: `q*p_i*f2*g2 / (p_i*g2 + q*f2 + 1) + q*h2`.
///
/// At `p_i = 0` this reduces exactly to [`direct_snr`]; as `p_i` grows it
/// saturates at `q*(f2 + h2)`.
pub fn effective_snr(user: &UserLink, p_i: f64) -> Result<SnrValue> {
    ensure_power(p_i)?;
    let relayed = user.q * p_i * user.f2 * user.g2 / (p_i * user.g2 + user.q * user.f2 + 1.0);
    Ok(SnrValue(relayed + user.q * user.h2))
}

/// SNR over the direct link alone: `q*h2`.
pub fn direct_snr(user: &UserLink) -> SnrValue {
    SnrValue(user.q * user.h2)
}

/// What the user gets minus what it pays: `effective_snr(p_i) - lambda*p_i`.
///
/// Buying nothing always yields the direct-only SNR, the user's
/// disagreement utility.
pub fn utility(user: &UserLink, p_i: f64, lambda: f64) -> Result<f64> {
    ensure_price(lambda)?;
    Ok(effective_snr(user, p_i)?.value() - lambda * p_i)
}

/// Per-user quality measure `b = q*f2*g2 / (q*f2 + 1)`.
///
/// This is the marginal SNR gain of the first unit of relay power; a user
/// buys relay power exactly when its quality exceeds the unit price.
/// Degenerate users (any of `q`, `f2`, `g2` zero) have quality exactly 0.
pub fn quality_b(user: &UserLink) -> f64 {
    let w = user.q * user.f2;
    w * user.g2 / (w + 1.0)
}

/// Achievable rate for an SNR: `log2(1 + snr)` in bit/s/Hz.
pub fn rate(snr: SnrValue) -> f64 {
    (1.0 + snr.0).log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn static_user_1() -> UserLink {
        UserLink::new(10.0, 1.0 / 234.0, 1.0 / 34.0, 0.0025).unwrap()
    }

    fn static_user_2() -> UserLink {
        UserLink::new(10.0, 0.01, 0.04, 1.0 / 225.0).unwrap()
    }

    fn static_user_3() -> UserLink {
        UserLink::new(10.0, 1.0 / 34.0, 1.0 / 34.0, 0.01).unwrap()
    }

    fn random_user(rng: &mut ChaCha8Rng) -> UserLink {
        UserLink::new(
            rng.random_range(0.5..20.0),
            rng.random_range(0.001..0.5),
            rng.random_range(0.001..0.5),
            rng.random_range(0.0..0.1),
        )
        .unwrap()
    }

    #[test]
    fn link_constructor_rejects_bad_gains() {
        assert!(matches!(
            UserLink::new(-1.0, 0.1, 0.1, 0.1),
            Err(Error::InvalidGain { name: "q", .. })
        ));
        assert!(matches!(
            UserLink::new(1.0, f64::NAN, 0.1, 0.1),
            Err(Error::InvalidGain { name: "f2", .. })
        ));
        assert!(matches!(
            UserLink::new(1.0, 0.1, f64::INFINITY, 0.1),
            Err(Error::InvalidGain { name: "g2", .. })
        ));
        assert!(UserLink::new(0.0, 0.0, 0.0, 0.0).is_ok());
    }

    #[test]
    fn scenario_constructor_enforces_invariants() {
        let u = static_user_1();
        assert!(matches!(Scenario::new(vec![], 1.0), Err(Error::EmptyScenario)));
        assert!(matches!(
            Scenario::new(vec![u], 0.0),
            Err(Error::InvalidBudget(_))
        ));
        assert!(matches!(
            Scenario::new(vec![u], f64::NAN),
            Err(Error::InvalidBudget(_))
        ));
        let sc = Scenario::new(vec![u, static_user_2()], 31.6228).unwrap();
        assert_eq!(sc.n_users(), 2);
        assert_eq!(sc.users()[1], static_user_2());
    }

    #[test]
    fn effective_snr_at_zero_power_is_exactly_direct() {
        for user in [static_user_1(), static_user_2(), static_user_3()] {
            let snr = effective_snr(&user, 0.0).unwrap();
            assert_eq!(snr.value(), direct_snr(&user).value());
        }
        let snr = effective_snr(&static_user_2(), 0.0).unwrap();
        assert!((snr.value() - 10.0 / 225.0).abs() < 1e-15);
    }

    #[test]
    fn effective_snr_matches_reference_point() {
        // Independent arithmetic: 10*8.4746*(1/34)^2 / (8.4746/34 + 10/34 + 1) + 0.1.
        let snr = effective_snr(&static_user_3(), 8.4746).unwrap();
        assert!((snr.value() - 0.14749973152276924).abs() < 1e-14);
    }

    #[test]
    fn effective_snr_saturates_at_q_times_f2_plus_h2() {
        for user in [static_user_2(), static_user_3()] {
            let snr = effective_snr(&user, 1e18).unwrap().value();
            let limit = user.q() * (user.f2() + user.h2());
            assert!((snr - limit).abs() <= 1e-6 * limit);
        }
    }

    #[test]
    fn effective_snr_rejects_negative_power() {
        assert!(matches!(
            effective_snr(&static_user_1(), -0.5),
            Err(Error::InvalidPower(_))
        ));
        assert!(matches!(
            effective_snr(&static_user_1(), f64::NAN),
            Err(Error::InvalidPower(_))
        ));
    }

    #[test]
    fn direct_snr_examples() {
        assert!((direct_snr(&static_user_1()).value() - 0.025).abs() < 1e-15);
        assert!((direct_snr(&static_user_3()).value() - 0.1).abs() < 1e-15);
        let silent = UserLink::new(0.0, 0.1, 0.1, 0.5).unwrap();
        assert_eq!(direct_snr(&silent).value(), 0.0);
    }

    #[test]
    fn utility_at_zero_power_is_disagreement_point() {
        for lambda in [0.0, 0.0013, 0.01, 5.0] {
            let u = utility(&static_user_2(), 0.0, lambda).unwrap();
            assert_eq!(u, direct_snr(&static_user_2()).value());
        }
    }

    #[test]
    fn utility_free_power_is_snr_at_full_budget() {
        let p = 31.622776601683793;
        let u = utility(&static_user_3(), p, 0.0).unwrap();
        assert_eq!(u, effective_snr(&static_user_3(), p).unwrap().value());
    }

    #[test]
    fn utility_second_crossing_returns_to_disagreement() {
        // Net gain b*p/(a*p+1) - lambda*p has a second zero at
        // p = q*f2*(1/lambda - 1/b); utility there equals the
        // disagreement point again.
        let user = static_user_2();
        let lambda = 0.0013;
        let b = quality_b(&user);
        let p = user.q() * user.f2() * (1.0 / lambda - 1.0 / b);
        let u = utility(&user, p, lambda).unwrap();
        assert!((u - direct_snr(&user).value()).abs() < 1e-12);
    }

    #[test]
    fn utility_rejects_negative_inputs() {
        assert!(matches!(
            utility(&static_user_1(), -1.0, 0.1),
            Err(Error::InvalidPower(_))
        ));
        assert!(matches!(
            utility(&static_user_1(), 1.0, -0.1),
            Err(Error::InvalidPrice(_))
        ));
    }

    #[test]
    fn utility_is_concave_in_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let user = random_user(&mut rng);
            let lambda = rng.random_range(0.0..0.01);
            let p1 = rng.random_range(0.0..50.0);
            let p2 = rng.random_range(0.0..50.0);
            let theta: f64 = rng.random_range(0.0..1.0);
            let mid = utility(&user, theta * p1 + (1.0 - theta) * p2, lambda).unwrap();
            let chord = theta * utility(&user, p1, lambda).unwrap()
                + (1.0 - theta) * utility(&user, p2, lambda).unwrap();
            assert!(mid >= chord - 1e-12);
        }
    }

    #[test]
    fn utility_slope_at_zero_is_quality_minus_price() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let user = random_user(&mut rng);
            let lambda = rng.random_range(0.0..0.001);
            let h = 1e-6;
            let u0 = utility(&user, 0.0, lambda).unwrap();
            let u1 = utility(&user, h, lambda).unwrap();
            let u2 = utility(&user, 2.0 * h, lambda).unwrap();
            // Second-order one-sided difference.
            let slope = (4.0 * u1 - 3.0 * u0 - u2) / (2.0 * h);
            let expected = quality_b(&user) - lambda;
            assert!((slope - expected).abs() <= 1e-6 * expected.abs().max(1e-9));
        }
    }

    #[test]
    fn quality_b_reference_values() {
        assert!((quality_b(&static_user_3()) - 0.0066844919786096255).abs() < 1e-18);
        assert!((quality_b(&static_user_3()) - 6.685e-3).abs() < 1e-6);
        assert!((quality_b(&static_user_2()) - 0.0036363636363636364).abs() < 1e-18);
        assert!((quality_b(&static_user_2()) - 4e-3 / 1.1).abs() < 1e-15);
        assert!((quality_b(&static_user_1()) - 0.0012054001928640309).abs() < 1e-18);
    }

    #[test]
    fn quality_b_is_zero_for_degenerate_users() {
        assert_eq!(quality_b(&UserLink::new(0.0, 0.3, 0.3, 0.1).unwrap()), 0.0);
        assert_eq!(quality_b(&UserLink::new(5.0, 0.0, 0.3, 0.1).unwrap()), 0.0);
        assert_eq!(quality_b(&UserLink::new(5.0, 0.3, 0.0, 0.1).unwrap()), 0.0);
    }

    #[test]
    fn quality_b_below_q_times_g2() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let user = random_user(&mut rng);
            assert!(quality_b(&user) < user.q() * user.g2());
        }
    }

    #[test]
    fn rate_reference_values() {
        assert!((rate(SnrValue::new(0.025).unwrap()) - 0.03562390973072122).abs() < 1e-15);
        assert!((rate(SnrValue::new(1.0 / 22.5).unwrap()) - 0.06273575534796275).abs() < 1e-15);
        assert!((rate(SnrValue::new(0.025).unwrap()) - 0.0356).abs() < 1e-4);
        assert!((rate(SnrValue::new(1.0 / 22.5).unwrap()) - 0.0627).abs() < 1e-4);
        assert_eq!(rate(SnrValue::new(0.0).unwrap()), 0.0);
    }

    #[test]
    fn snr_value_rejects_invalid() {
        assert!(SnrValue::new(-0.1).is_err());
        assert!(SnrValue::new(f64::NAN).is_err());
        assert!(SnrValue::new(f64::INFINITY).is_err());
    }

    #[test]
    fn db_to_linear_reference_values() {
        assert_eq!(db_to_linear(0.0), 1.0);
        assert_eq!(db_to_linear(10.0), 10.0);
        assert!((db_to_linear(15.0) - 31.622776601683793).abs() < 1e-12);
    }

    #[test]
    fn effective_snr_is_increasing_and_concave_in_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..100 {
            let user = random_user(&mut rng);
            if user.q() * user.f2() * user.g2() == 0.0 {
                continue;
            }
            let p = rng.random_range(0.1..100.0);
            let h = 1e-4 * p;
            let lo = effective_snr(&user, p - h).unwrap().value();
            let mid = effective_snr(&user, p).unwrap().value();
            let hi = effective_snr(&user, p + h).unwrap().value();
            assert!(hi > mid && mid > lo);
            // Finite-difference second derivative.
            assert!(hi - 2.0 * mid + lo < 0.0);
        }
    }
}
