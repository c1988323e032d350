//! The Stein learner for one-dimensional online linear optimization on
//! [-1, 1].
//!
//! Each round it plays x_t = E_Z[f_{s_{t-1},ρ_{t-1},h}(s_{t-1} + ρ_t Z)],
//! where f is the bounded Stein solution for target h and ρ_0 ≥ ρ_1 ≥ … is a
//! variance-budget schedule.

mod decision;
mod learner;
mod schedule;

pub use decision::{
    decide, decide_closed_abs, decide_closed_huber, decide_generic, effective_learning_rate,
    RoundState, DEGENERATE_SCALE,
};
pub use learner::{DecisionPath, LearnerState};
pub use schedule::{rho_sqrt_horizon, RhoPolicy, RhoSchedule};
