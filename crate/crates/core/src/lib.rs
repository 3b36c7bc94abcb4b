//! Coverage probability, normalized average rate and optimal SINR
//! classification thresholds for planned fractional frequency reuse (FFR) on a
//! hexagonal two-tier downlink, with a seeded Monte Carlo cross-check.
//!
//! All numeric code is generic over [`Real`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`.

pub mod analytics;
pub mod error;
pub mod fading;
pub mod geometry;
pub mod montecarlo;
pub mod numerics;
pub mod optimizer;
pub mod scalar;

pub use analytics::{Correlation, CoverageBreakdown, LinkGains, QuadratureConfig, SpatialGrid};
pub use error::{FfrError, Result};
pub use fading::{draw_powers, subband_correlation, ChannelProfile, CorrelationMode, FadingDraw, FadingSampler, SubbandPlan, TdlChannel};
pub use geometry::{build_layout, interferer_distances, InterfererSet, Point};
pub use montecarlo::{Estimate, Quantity, Scheme};
pub use optimizer::{KVariant, Method, ThresholdSolver, ThresholdTableRow};
pub use scalar::{db_to_linear, linear_to_db, Real};

pub type NetworkLayout = geometry::NetworkLayout<f64>;
pub type UserPosition = geometry::UserPosition<f64>;
pub type SystemParams = analytics::SystemParams<f64>;
pub type ThresholdSolution = optimizer::ThresholdSolution<f64>;
pub type SimConfig = montecarlo::SimConfig<f64>;
pub type Placement = montecarlo::Placement<f64>;
