//! Sum-rate maximizing power allocation.
//!
//! Maximizing `g(Σ P_k) - g(Σ h_k P_k)` over the allowable set is the same as
//! minimizing
//!
//! ```text
//! rho(P) = (1 + Σ h_k P_k) / (1 + Σ P_k)
//! ```
//!
//! Users with `h_k >= 1` never transmit. Among the rest, sorted by `h`, the
//! optimum switches on users `1..=l` at full power and silences the others,
//! where the limiting user `l` satisfies
//! `h_l < rho(first l users at full power) <= h_{l+1}`.

use serde::{Serialize, Serializer};

use crate::channel::{sort_by_gain, StandardChannel};
use crate::error::Result;
use crate::rate::RateUnit;
use crate::region::{feasibility_unchecked, PowerAllocation};

/// Relative tolerance for `h_j == rho` ties and for `h_k == 1`.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumRateSolution {
    /// Optimal powers in the caller's user order.
    pub p_star: PowerAllocation,
    /// Number of users switched on in `h`-sorted order; `0` means nobody
    /// transmits.
    #[serde(rename = "limiting_index")]
    pub limiting_user: usize,
    /// 0-based original indices of users with `P*_k > 0`, ascending.
    #[serde(rename = "limiting_user", serialize_with = "one_based")]
    pub transmitting: Vec<usize>,
    pub sum_rate: f64,
    pub rho_star: f64,
    pub rate_unit: RateUnit,
}

fn one_based<S: Serializer>(v: &[usize], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|i| i + 1))
}

pub fn rho(p: &PowerAllocation, ch: &StandardChannel) -> Result<f64> {
    p.check_against(ch)?;
    Ok(rho_raw(p.as_slice(), ch.h()))
}

fn rho_raw(p: &[f64], h: &[f64]) -> f64 {
    let (num, den) = p
        .iter()
        .zip(h)
        .fold((1.0, 1.0), |(n, d), (&pk, &hk)| (n + hk * pk, d + pk));
    num / den
}

/// Sum secrecy rate `g(Σ P_k) - g(Σ h_k P_k)`. Negative when `P` is outside
/// the allowable set.
pub fn sum_rate_at(p: &PowerAllocation, ch: &StandardChannel) -> Result<f64> {
    p.check_against(ch)?;
    Ok(sum_rate_raw(p.as_slice(), ch.h(), ch.rate_unit()))
}

pub(crate) fn sum_rate_raw(p: &[f64], h: &[f64], unit: RateUnit) -> f64 {
    let total: f64 = p.iter().sum();
    let seen: f64 = p.iter().zip(h).map(|(&pk, &hk)| hk * pk).sum();
    unit.half_log1p(total) - unit.half_log1p(seen)
}

#[inline]
fn is_bad_user(h: f64) -> bool {
    h >= 1.0 - TIE_TOL
}

/// Silences every user whose eavesdropper gain is at least 1. This never
/// increases `rho`.
pub fn prune_bad_users(p: &PowerAllocation, ch: &StandardChannel) -> Result<PowerAllocation> {
    p.check_against(ch)?;
    let q = p
        .as_slice()
        .iter()
        .zip(ch.h())
        .map(|(&pk, &hk)| if is_bad_user(hk) { 0.0 } else { pk })
        .collect();
    PowerAllocation::new(q)
}

/// Closed-form sum-rate maximizing allocation.
pub fn max_sum_rate(ch: &StandardChannel) -> SumRateSolution {
    let (sorted, perm) = sort_by_gain(ch);
    let h = sorted.h();
    let p_max = sorted.p_max();
    let candidates = h.iter().take_while(|&&hk| !is_bad_user(hk)).count();

    let (mut num, mut den) = (1.0, 1.0);
    let mut l = 0;
    while l < candidates {
        let ratio = num / den;
        // a user exactly at the threshold adds nothing; leave it silent
        if h[l] >= ratio * (1.0 - TIE_TOL) {
            break;
        }
        num += h[l] * p_max[l];
        den += p_max[l];
        l += 1;
    }

    let mut sorted_p = vec![0.0; h.len()];
    sorted_p[..l].copy_from_slice(&p_max[..l]);
    let p_star = perm.scatter(&sorted_p);
    let mut transmitting: Vec<usize> = perm.order()[..l]
        .iter()
        .copied()
        .filter(|&i| p_star[i] > 0.0)
        .collect();
    transmitting.sort_unstable();

    debug_assert!(feasibility_unchecked(&p_star, ch).feasible);
    let sum_rate = sum_rate_raw(&p_star, ch.h(), ch.rate_unit());
    SumRateSolution {
        rho_star: rho_raw(&p_star, ch.h()),
        p_star: PowerAllocation::new(p_star).expect("caps are nonnegative"),
        limiting_user: l,
        transmitting,
        sum_rate,
        rate_unit: ch.rate_unit(),
    }
}
