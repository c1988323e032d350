//! Games, metrics and bound verification.

mod adversary;
mod bounds;
mod game;
mod prefactors;
mod stochastic;
mod tradeoff;

pub use adversary::{Adversary, AdversaryKind};
pub use bounds::{lower_bound_value, pathwise_bound, BoundLedger};
pub use game::{play, GameTranscript, Learner};
pub use prefactors::{
    gamma_huber, gamma_lse, gamma_mwu, gamma_ogd, gamma_sth, gap_mwu, gap_ogd, prefactors,
    Prefactors,
};
pub use stochastic::{run_stochastic, StochasticReport, TrialRecord, MIN_TRIALS};
pub use tradeoff::{
    baseline_prefactor, baseline_tradeoff, solve_gamma_eps, two_point_check, TradeoffPoint,
    TwoPointCheck,
};
