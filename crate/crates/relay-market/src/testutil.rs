//! Shared fixtures for unit tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{db_to_linear, Scenario, UserLink};

/// The three-user benchmark network derived from the fixed geometry:
/// users at (-15,3), (-10,0), (-5,-3), relay at the origin, destinations
/// at (5,3), (5,0), (5,-3), power gains 1/d^2, q = 10 dB.
pub fn static_users() -> [UserLink; 3] {
    [
        UserLink::new(10.0, 1.0 / 234.0, 1.0 / 34.0, 0.0025).unwrap(),
        UserLink::new(10.0, 0.01, 0.04, 1.0 / 225.0).unwrap(),
        UserLink::new(10.0, 1.0 / 34.0, 1.0 / 34.0, 0.01).unwrap(),
    ]
}

/// Relay budget of the benchmark network: 15 dB.
pub fn static_budget() -> f64 {
    db_to_linear(15.0)
}

/// The benchmark scenario.
pub fn static_scenario() -> Scenario {
    Scenario::new(static_users().to_vec(), static_budget()).unwrap()
}

/// A random user with gains in ranges that exercise all demand branches.
pub fn random_user(rng: &mut ChaCha8Rng) -> UserLink {
    UserLink::new(
        rng.random_range(0.5..20.0),
        rng.random_range(0.001..0.5),
        rng.random_range(0.001..0.5),
        rng.random_range(0.0..0.1),
    )
    .unwrap()
}

/// A random scenario with `n` users and a budget in [5, 100).
pub fn random_scenario(rng: &mut ChaCha8Rng, n: usize) -> Scenario {
    let users = (0..n).map(|_| random_user(rng)).collect();
    Scenario::new(users, rng.random_range(5.0..100.0)).unwrap()
}

/// A deterministic RNG for property-style checks.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
