//! Connectivity statistics for a 1-D chain of vehicles with independent
//! Rayleigh-fading links.
//!
//! The library answers one family of questions: given `n` vehicles in a row
//! whose consecutive pairs connect independently with probability `p`, what
//! are the exact distributions of the number of clusters, the size of a
//! (uniformly chosen) cluster, the biggest cluster, and the number of idle
//! vehicles? `p` itself can be derived from a physical channel model
//! integrated over an intervehicle spacing distribution.
//!
//! Three independent routes to the same distributions keep each other
//! honest:
//!
//! * [`analytic`] — closed forms, exact rational arithmetic;
//! * [`oracle`] — exhaustive enumeration of all link patterns;
//! * [`montecarlo`] — a seeded, reproducible simulator.

pub mod analytic;
pub mod channel;
pub mod error;
pub mod gfseries;
pub mod montecarlo;
pub mod oracle;
pub mod pmf;
pub mod quad;
pub mod rng;
pub mod spacing;

pub use channel::{ChannelParams, DerivedChannel};
pub use error::{Error, Result};
pub use montecarlo::{EmpiricalResult, LinkModel, LinkRealization, Scenario};
pub use pmf::{ExactMoments, Moments, Pmf, PmfSource};
pub use spacing::SpacingModel;
