//! Scenario construction: seeded Rayleigh fading draws for Monte Carlo
//! sweeps and a deterministic path-loss network on a planar layout.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{db_to_linear, Scenario, UserLink};

/// Planar node layout: one source and one destination per user plus a
/// single relay. Every channel endpoint pair keeps a positive distance so
/// inverse-square gains stay finite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Geometry {
    user_positions: Vec<[f64; 2]>,
    destination_positions: Vec<[f64; 2]>,
    relay_position: [f64; 2],
}

fn dist_sq(a: [f64; 2], b: [f64; 2]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    dx * dx + dy * dy
}

impl Geometry {
    pub fn new(
        user_positions: Vec<[f64; 2]>,
        destination_positions: Vec<[f64; 2]>,
        relay_position: [f64; 2],
    ) -> Result<Self> {
        if user_positions.is_empty() || user_positions.len() != destination_positions.len() {
            return Err(Error::InvalidGeometry {
                users: user_positions.len(),
                destinations: destination_positions.len(),
            });
        }
        let all_finite = user_positions
            .iter()
            .chain(&destination_positions)
            .chain(core::iter::once(&relay_position))
            .all(|p| p[0].is_finite() && p[1].is_finite());
        if !all_finite {
            return Err(Error::NonFiniteCoordinate);
        }
        for (i, (u, d)) in user_positions.iter().zip(&destination_positions).enumerate() {
            if dist_sq(*u, relay_position) == 0.0 {
                return Err(Error::ZeroDistance {
                    kind: "user-relay",
                    index: i,
                });
            }
            if dist_sq(relay_position, *d) == 0.0 {
                return Err(Error::ZeroDistance {
                    kind: "relay-destination",
                    index: i,
                });
            }
            if dist_sq(*u, *d) == 0.0 {
                return Err(Error::ZeroDistance {
                    kind: "user-destination",
                    index: i,
                });
            }
        }
        Ok(Geometry {
            user_positions,
            destination_positions,
            relay_position,
        })
    }

    pub fn user_positions(&self) -> &[[f64; 2]] {
        &self.user_positions
    }

    pub fn destination_positions(&self) -> &[[f64; 2]] {
        &self.destination_positions
    }

    pub fn relay_position(&self) -> [f64; 2] {
        self.relay_position
    }

    pub fn n_users(&self) -> usize {
        self.user_positions.len()
    }
}

/// Ensemble description for Rayleigh-fading draws: channel variances,
/// node powers in dB, and the RNG seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FadingSpec {
    n_users: usize,
    var_f: f64,
    var_g: f64,
    var_h: f64,
    q_db: f64,
    p_db: f64,
    seed: u64,
}

fn ensure_variance(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::InvalidVariance { name, value });
    }
    Ok(())
}

fn ensure_db(value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::NonFiniteDb(value));
    }
    Ok(())
}

impl FadingSpec {
    pub fn new(
        n_users: usize,
        var_f: f64,
        var_g: f64,
        var_h: f64,
        q_db: f64,
        p_db: f64,
        seed: u64,
    ) -> Result<Self> {
        if n_users == 0 {
            return Err(Error::NoUsers);
        }
        ensure_variance("var_f", var_f)?;
        ensure_variance("var_g", var_g)?;
        ensure_variance("var_h", var_h)?;
        ensure_db(q_db)?;
        ensure_db(p_db)?;
        Ok(FadingSpec {
            n_users,
            var_f,
            var_g,
            var_h,
            q_db,
            p_db,
            seed,
        })
    }

    pub fn with_n_users(mut self, n_users: usize) -> Result<Self> {
        if n_users == 0 {
            return Err(Error::NoUsers);
        }
        self.n_users = n_users;
        Ok(self)
    }

    pub fn with_var_f(mut self, var_f: f64) -> Result<Self> {
        ensure_variance("var_f", var_f)?;
        self.var_f = var_f;
        Ok(self)
    }

    pub fn with_var_g(mut self, var_g: f64) -> Result<Self> {
        ensure_variance("var_g", var_g)?;
        self.var_g = var_g;
        Ok(self)
    }

    pub fn with_var_h(mut self, var_h: f64) -> Result<Self> {
        ensure_variance("var_h", var_h)?;
        self.var_h = var_h;
        Ok(self)
    }

    pub fn with_q_db(mut self, q_db: f64) -> Result<Self> {
        ensure_db(q_db)?;
        self.q_db = q_db;
        Ok(self)
    }

    pub fn with_p_db(mut self, p_db: f64) -> Result<Self> {
        ensure_db(p_db)?;
        self.p_db = p_db;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn n_users(&self) -> usize {
        self.n_users
    }

    pub fn var_f(&self) -> f64 {
        self.var_f
    }

    pub fn var_g(&self) -> f64 {
        self.var_g
    }

    pub fn var_h(&self) -> f64 {
        self.var_h
    }

    pub fn q_db(&self) -> f64 {
        self.q_db
    }

    pub fn p_db(&self) -> f64 {
        self.p_db
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Draws one fading realization. Power gains are sampled directly as
/// exponential variates (the squared magnitude of a circularly symmetric
/// complex Gaussian), with means equal to the per-channel variances.
///
/// The generator runs on a per-trial stream of the seeded cipher, so any
/// trial can be generated independently of the others: parallel sweeps
/// produce bit-identical scenarios in any evaluation order.
pub fn sample_rayleigh(spec: &FadingSpec, trial: u64) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(trial);
    let exp_f = Exp::new(1.0 / spec.var_f).expect("variance is positive");
    let exp_g = Exp::new(1.0 / spec.var_g).expect("variance is positive");
    let exp_h = Exp::new(1.0 / spec.var_h).expect("variance is positive");
    let q = db_to_linear(spec.q_db);
    let mut users = Vec::with_capacity(spec.n_users);
    for _ in 0..spec.n_users {
        let f2 = exp_f.sample(&mut rng);
        let g2 = exp_g.sample(&mut rng);
        let h2 = exp_h.sample(&mut rng);
        users.push(UserLink::new(q, f2, g2, h2).expect("sampled gains are valid"));
    }
    Scenario::new(users, db_to_linear(spec.p_db)).expect("spec invariants carry over")
}

/// Builds the deterministic network where every power gain is the inverse
/// squared distance of its link.
pub fn pathloss_scenario(geometry: &Geometry, q_db: f64, p_db: f64) -> Result<Scenario> {
    ensure_db(q_db)?;
    ensure_db(p_db)?;
    let q = db_to_linear(q_db);
    let mut users = Vec::with_capacity(geometry.n_users());
    for (u, d) in geometry
        .user_positions
        .iter()
        .zip(&geometry.destination_positions)
    {
        let f2 = 1.0 / dist_sq(*u, geometry.relay_position);
        let g2 = 1.0 / dist_sq(geometry.relay_position, *d);
        let h2 = 1.0 / dist_sq(*u, *d);
        users.push(UserLink::new(q, f2, g2, h2)?);
    }
    Scenario::new(users, db_to_linear(p_db))
}

/// The three-user benchmark layout: sources strung out west of the relay
/// at the origin, destinations lined up to the east. User 1 is farthest
/// from both the relay and its destination, user 3 closest.
pub fn static_network_geometry() -> Geometry {
    Geometry::new(
        vec![[-15.0, 3.0], [-10.0, 0.0], [-5.0, -3.0]],
        vec![[5.0, 3.0], [5.0, 0.0], [5.0, -3.0]],
        [0.0, 0.0],
    )
    .expect("benchmark layout is valid")
}
