//! Python bindings for the relay market library.
//!
//! Wraps the core types behind thin frozen classes and re-exposes the
//! solver entry points as module functions. Library errors surface as
//! ValueError with the library's message text.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use relay_market::baselines;
use relay_market::demand;
use relay_market::harness;
use relay_market::ksbs;
use relay_market::model;
use relay_market::pricing;
use relay_market::scenarios;

fn value_error(e: relay_market::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// One user's link budget: transmit power and the three power gains.
#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct UserLink {
    inner: model::UserLink,
}

#[pymethods]
impl UserLink {
    #[new]
    fn new(q: f64, f2: f64, g2: f64, h2: f64) -> PyResult<Self> {
        let inner = model::UserLink::new(q, f2, g2, h2).map_err(value_error)?;
        Ok(Self { inner })
    }

    #[getter]
    fn q(&self) -> f64 {
        self.inner.q()
    }

    #[getter]
    fn f2(&self) -> f64 {
        self.inner.f2()
    }

    #[getter]
    fn g2(&self) -> f64 {
        self.inner.g2()
    }

    #[getter]
    fn h2(&self) -> f64 {
        self.inner.h2()
    }

    /// Relay-path quality: the supremum price at which this user buys.
    fn quality(&self) -> f64 {
        model::quality_b(&self.inner)
    }

    /// Achievable rate at a relay power purchase.
    fn rate(&self, power: f64) -> PyResult<f64> {
        let snr = model::effective_snr(&self.inner, power).map_err(value_error)?;
        Ok(model::rate(snr))
    }

    /// Utility at a relay power purchase under a unit price.
    fn utility(&self, power: f64, lambda: f64) -> PyResult<f64> {
        model::utility(&self.inner, power, lambda).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!(
            "UserLink(q={}, f2={}, g2={}, h2={})",
            self.inner.q(),
            self.inner.f2(),
            self.inner.g2(),
            self.inner.h2()
        )
    }
}

/// A relay market: the users and the relay power budget.
#[pyclass(frozen)]
struct Scenario {
    inner: model::Scenario,
}

#[pymethods]
impl Scenario {
    #[new]
    fn new(users: Vec<UserLink>, relay_power: f64) -> PyResult<Self> {
        let links = users.into_iter().map(|u| u.inner).collect();
        let inner = model::Scenario::new(links, relay_power).map_err(value_error)?;
        Ok(Self { inner })
    }

    #[getter]
    fn relay_power(&self) -> f64 {
        self.inner.relay_power()
    }

    #[getter]
    fn n_users(&self) -> usize {
        self.inner.n_users()
    }

    #[getter]
    fn users(&self) -> Vec<UserLink> {
        self.inner
            .users()
            .iter()
            .map(|&inner| UserLink { inner })
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(n_users={}, relay_power={})",
            self.inner.n_users(),
            self.inner.relay_power()
        )
    }
}

/// Result of an allocation scheme: per-user powers and metadata.
#[pyclass(frozen)]
struct Allocation {
    #[pyo3(get)]
    powers: Vec<f64>,
    #[pyo3(get)]
    k: f64,
    #[pyo3(get)]
    participants: Vec<usize>,
    #[pyo3(get)]
    scheme: String,
}

impl From<ksbs::Allocation> for Allocation {
    fn from(a: ksbs::Allocation) -> Self {
        Self {
            scheme: a.scheme.tag().to_string(),
            powers: a.powers,
            k: a.k,
            participants: a.participants,
        }
    }
}

#[pymethods]
impl Allocation {
    fn power_sold(&self) -> f64 {
        self.powers.iter().sum()
    }

    fn __repr__(&self) -> String {
        format!(
            "Allocation(scheme={:?}, k={}, powers={:?})",
            self.scheme, self.k, self.powers
        )
    }
}

/// The revenue-optimal price and the search artifacts behind it.
#[pyclass(frozen)]
struct PricingSolution {
    #[pyo3(get)]
    lambda_star: f64,
    #[pyo3(get)]
    b_lb: f64,
    #[pyo3(get)]
    revenue: f64,
    #[pyo3(get)]
    ordered_b: Vec<f64>,
    #[pyo3(get)]
    m: usize,
    /// Per-interval candidates as (interval, lambda, revenue) tuples.
    #[pyo3(get)]
    candidates: Vec<(usize, f64, f64)>,
}

#[pymethods]
impl PricingSolution {
    fn __repr__(&self) -> String {
        format!(
            "PricingSolution(lambda_star={}, b_lb={}, revenue={})",
            self.lambda_star, self.b_lb, self.revenue
        )
    }
}

/// A Rayleigh fading ensemble description.
#[pyclass(frozen)]
struct FadingSpec {
    inner: scenarios::FadingSpec,
}

#[pymethods]
impl FadingSpec {
    #[new]
    fn new(
        n_users: usize,
        var_f: f64,
        var_g: f64,
        var_h: f64,
        q_db: f64,
        p_db: f64,
        seed: u64,
    ) -> PyResult<Self> {
        let inner = scenarios::FadingSpec::new(n_users, var_f, var_g, var_h, q_db, p_db, seed)
            .map_err(value_error)?;
        Ok(Self { inner })
    }

    fn __repr__(&self) -> String {
        format!(
            "FadingSpec(n_users={}, var_f={}, var_g={}, var_h={}, q_db={}, p_db={}, seed={})",
            self.inner.n_users(),
            self.inner.var_f(),
            self.inner.var_g(),
            self.inner.var_h(),
            self.inner.q_db(),
            self.inner.p_db(),
            self.inner.seed()
        )
    }
}

/// One user's ideal demand at a price: the power it would buy.
#[pyfunction]
fn ideal_power(user: &UserLink, lambda: f64, budget: f64) -> PyResult<f64> {
    demand::ideal_power(&user.inner, lambda, budget).map_err(value_error)
}

/// Ideal demand with its regime tag: (power, utility, case).
#[pyfunction]
fn ideal_demand(user: &UserLink, lambda: f64, budget: f64) -> PyResult<(f64, f64, String)> {
    let d = demand::ideal_demand(&user.inner, lambda, budget).map_err(value_error)?;
    let case = match d.case {
        demand::DemandCase::PricedOut => "priced-out",
        demand::DemandCase::Interior => "interior",
        demand::DemandCase::BudgetCapped => "budget-capped",
    };
    Ok((d.power, d.utility, case.to_string()))
}

/// Bargaining allocation at a price.
#[pyfunction]
fn allocate(scenario: &Scenario, lambda: f64) -> PyResult<Allocation> {
    ksbs::allocate(&scenario.inner, lambda)
        .map(Allocation::from)
        .map_err(value_error)
}

/// Even-split baseline at a price.
#[pyfunction]
fn even_allocation(scenario: &Scenario, lambda: f64) -> PyResult<Allocation> {
    baselines::even_allocation(&scenario.inner, lambda)
        .map(Allocation::from)
        .map_err(value_error)
}

/// Sum-rate-optimal benchmark over the whole budget.
#[pyfunction]
fn sumrate_optimal_allocation(scenario: &Scenario) -> PyResult<Allocation> {
    baselines::sumrate_optimal_allocation(&scenario.inner)
        .map(Allocation::from)
        .map_err(value_error)
}

/// Revenue-optimal price for the scenario.
#[pyfunction]
fn optimal_price(scenario: &Scenario) -> PyResult<PricingSolution> {
    let sol = pricing::optimal_price(&scenario.inner).map_err(value_error)?;
    Ok(PricingSolution {
        lambda_star: sol.lambda_star,
        b_lb: sol.b_lb,
        revenue: sol.revenue,
        ordered_b: sol.ordered_b,
        m: sol.m,
        candidates: sol
            .candidates
            .iter()
            .map(|c| (c.interval, c.lambda, c.revenue))
            .collect(),
    })
}

/// Aggregate ideal demand at a trial price.
#[pyfunction]
fn demand_curve(scenario: &Scenario, price: f64) -> PyResult<f64> {
    pricing::demand_curve(&scenario.inner, price).map_err(value_error)
}

/// Floor price at which aggregate demand equals the budget.
#[pyfunction]
fn lower_bound_price(scenario: &Scenario) -> PyResult<f64> {
    pricing::lower_bound_price(&scenario.inner).map_err(value_error)
}

/// Realized revenue of the bargaining allocation at a price.
#[pyfunction]
fn revenue_at(scenario: &Scenario, lambda: f64) -> PyResult<f64> {
    pricing::revenue_at(&scenario.inner, lambda).map_err(value_error)
}

/// Per-user achievable rates at a power vector.
#[pyfunction]
fn per_user_rates(scenario: &Scenario, powers: Vec<f64>) -> PyResult<Vec<f64>> {
    harness::per_user_rates(&scenario.inner, &powers).map_err(value_error)
}

/// Normalized rate spread: (max - min) / max, 0 for all-zero input.
#[pyfunction]
fn fairness(rates: Vec<f64>) -> f64 {
    harness::fairness(&rates)
}

/// Draws the trial-indexed scenario from a fading ensemble.
#[pyfunction]
fn sample_rayleigh(spec: &FadingSpec, trial: u64) -> Scenario {
    Scenario {
        inner: scenarios::sample_rayleigh(&spec.inner, trial),
    }
}

/// The three-user benchmark network at the given powers (both in dB).
#[pyfunction]
fn static_scenario(q_db: f64, p_db: f64) -> PyResult<Scenario> {
    let geometry = scenarios::static_network_geometry();
    scenarios::pathloss_scenario(&geometry, q_db, p_db)
        .map(|inner| Scenario { inner })
        .map_err(value_error)
}

#[pymodule]
fn relay_market_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<UserLink>()?;
    m.add_class::<Scenario>()?;
    m.add_class::<Allocation>()?;
    m.add_class::<PricingSolution>()?;
    m.add_class::<FadingSpec>()?;
    m.add_function(wrap_pyfunction!(ideal_power, m)?)?;
    m.add_function(wrap_pyfunction!(ideal_demand, m)?)?;
    m.add_function(wrap_pyfunction!(allocate, m)?)?;
    m.add_function(wrap_pyfunction!(even_allocation, m)?)?;
    m.add_function(wrap_pyfunction!(sumrate_optimal_allocation, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_price, m)?)?;
    m.add_function(wrap_pyfunction!(demand_curve, m)?)?;
    m.add_function(wrap_pyfunction!(lower_bound_price, m)?)?;
    m.add_function(wrap_pyfunction!(revenue_at, m)?)?;
    m.add_function(wrap_pyfunction!(per_user_rates, m)?)?;
    m.add_function(wrap_pyfunction!(fairness, m)?)?;
    m.add_function(wrap_pyfunction!(sample_rayleigh, m)?)?;
    m.add_function(wrap_pyfunction!(static_scenario, m)?)?;
    Ok(())
}
