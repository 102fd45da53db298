//! Achievable perfect-secrecy rates for the general Gaussian multiple-access
//! wire-tap channel.
//!
//! The crate works on a channel in standard form: unit receiver gains, unit
//! noise variances, and per-user eavesdropper gains `h_k`. Raw channel
//! descriptions are mapped there by [`standardize`].
//!
//! * [`region`] builds the achievable region at a fixed power allocation as a
//!   list of halfspaces, one per nonempty user subset.
//! * [`power`] finds the sum-rate maximizing allocation with the
//!   limiting-user threshold rule.
//! * [`jamming`] solves the two-user problem in which a user with a poor
//!   channel transmits noise to degrade the eavesdropper.
//! * [`oracle`] re-derives the optima by exhaustive grid search.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
mod error;
pub mod jamming;
pub mod oracle;
pub mod power;
pub mod rate;
pub mod region;
pub mod subset;

pub use channel::{sort_by_gain, standardize, ChannelParams, Permutation, StandardChannel};
pub use error::{Error, Result};
pub use jamming::{
    case_a_threshold, case_b_threshold, jam_objective, jam_roots, psi1, psi2, solve_case_a,
    solve_case_b, solve_jamming, Branch, CaseTag, JamRoots, JammingSolution, TwoUserChannel,
};
pub use oracle::{grid_max_jamming, grid_max_sum_rate, GridOptimum, GridSpec};
pub use power::{max_sum_rate, prune_bad_users, rho, sum_rate_at, SumRateSolution};
pub use rate::{g, RateUnit};
pub use region::{
    build_region, contains, is_feasible, phi, subset_rates, union_sweep, Feasibility, Halfspace,
    PowerAllocation, RateRegion, SubsetRates, Witness,
};
pub use subset::Subset;

/// Largest supported user count. Feasibility checks visit all `2^K - 1`
/// subsets.
pub const MAX_USERS: usize = 16;

/// Absolute slack allowed on `phi_S >= 0` when testing membership in the
/// allowable power set.
pub const FEASIBILITY_TOL: f64 = 1e-12;
