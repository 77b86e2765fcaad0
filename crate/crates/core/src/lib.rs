//! Executable involution principle on random villages.
//!
//! * [`scenario`]: the village model, sampling and enumeration.
//! * [`chase`]: the chase itself, for villages and for abstract bijections.
//! * [`exact`]: exact request-count laws, moments and generating functions.
//! * [`series`]: the truncated series engine behind the generating functions.
//! * [`montecarlo`]: seeded simulation and goodness-of-fit.
//! * [`story`]: the chase told as a story.
//! * [`verify`]: cross-checks between all of the above.

pub mod chase;
pub mod error;
pub mod exact;
pub mod montecarlo;
pub mod rational;
pub mod scenario;
pub mod series;
pub mod story;
pub mod verify;

pub use chase::{chase_one, induced_bijection, match_all, ChaseTrace, Matching};
pub use error::{Error, Result};
pub use exact::{
    central_moment, geometric_limit_distance, joint_pathlength_census, pgf_single, pgf_total,
    single_moments_closed, single_pmf, total_moments_closed, total_pmf, ExactPmf, MomentSet,
};
pub use montecarlo::{chi_squared, simulate_single, simulate_total, tv_distance, Histogram};
pub use rational::binomial;
pub use scenario::{enumerate_scenarios, random_scenario, scenario_count, validate, Scenario};
pub use series::SeriesPoly;
pub use story::tell_story;
