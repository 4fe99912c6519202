//! Error type shared by every module in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Domain and validation failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A channel gain or transmit power fed to a link constructor was
    /// negative, NaN, or infinite.
    #[error("{name} must be finite and non-negative, got {value}")]
    InvalidGain { name: &'static str, value: f64 },

    /// The relay budget must be a positive finite amount of power.
    #[error("relay power budget must be positive and finite, got {0}")]
    InvalidBudget(f64),

    /// A scenario needs at least one user.
    #[error("scenario must contain at least one user")]
    EmptyScenario,

    /// A per-user relay power share outside [0, inf).
    #[error("relay power share must be finite and non-negative, got {0}")]
    InvalidPower(f64),

    /// A unit price outside [0, inf).
    #[error("price must be finite and non-negative, got {0}")]
    InvalidPrice(f64),

    /// An SNR value outside [0, inf).
    #[error("snr must be finite and non-negative, got {0}")]
    InvalidSnr(f64),

    /// The user's quality does not exceed the price, so it buys no power
    /// and its penalty ratio is undefined.
    #[error("user does not participate at price {lambda}: quality {b} must exceed the price")]
    NonParticipant { b: f64, lambda: f64 },

    /// The common penalty level is a ratio and must lie in [0, 1].
    #[error("penalty level must lie in [0, 1], got {0}")]
    LevelOutOfRange(f64),

    /// The aggregate demand curve is evaluated at trial prices > 0 only.
    #[error("trial price must be positive and finite, got {0}")]
    InvalidTrialPrice(f64),

    /// Every user has zero quality, so no price sells any power.
    #[error("no user has positive quality; the market is degenerate")]
    NoMarket,

    /// Pricing subproblems are indexed 1..=M.
    #[error("interval index {index} outside 1..={max}")]
    InvalidInterval { index: usize, max: usize },

    /// Interval bounds for a pricing subproblem were unordered or invalid.
    #[error("interval bounds must satisfy 0 <= lower <= upper and be finite, got ({lower}, {upper})")]
    InvalidIntervalBounds { lower: f64, upper: f64 },

    /// User and destination lists must pair up one to one.
    #[error("geometry needs matching non-empty user and destination lists, got {users} users and {destinations} destinations")]
    InvalidGeometry { users: usize, destinations: usize },

    /// Node coordinates must be finite.
    #[error("coordinates must be finite")]
    NonFiniteCoordinate,

    /// Two endpoints of a modeled channel coincide, so 1/d^2 is undefined.
    #[error("{kind} distance is zero for user {index}; channel gain undefined")]
    ZeroDistance { kind: &'static str, index: usize },

    /// A channel variance must be positive and finite.
    #[error("{name} must be positive and finite, got {value}")]
    InvalidVariance { name: &'static str, value: f64 },

    /// A fading specification needs at least one user.
    #[error("fading spec needs at least one user")]
    NoUsers,

    /// Decibel quantities must be finite.
    #[error("decibel value must be finite, got {0}")]
    NonFiniteDb(f64),

    /// An allocation does not line up with the scenario it is scored on.
    #[error("allocation has {powers} powers for {users} users")]
    MismatchedLengths { users: usize, powers: usize },

    /// Sweeps need a non-empty grid of values.
    #[error("sweep needs a non-empty grid")]
    EmptyGrid,

    /// Monte Carlo sweeps need at least one trial.
    #[error("monte carlo needs at least one trial")]
    NoTrials,

    /// A swept user count must be a positive integer value.
    #[error("swept user count must be a positive integer, got {0}")]
    InvalidUserCount(f64),
}
