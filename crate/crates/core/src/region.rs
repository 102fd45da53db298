//! Per-subset rate quantities, the allowable power set, and the achievable
//! secrecy region at a fixed power allocation.
//!
//! For a subset `S` of users and powers `P`:
//!
//! ```text
//! C^M_S  = g(Σ_S P_k)                 C^W_S  = g(Σ_S h_k P_k)
//! C̃^M_S = g(Σ_S P_k / (1 + Σ_Sᶜ P_k))
//! C̃^W_S = g(Σ_S h_k P_k / (1 + Σ_Sᶜ h_k P_k))
//! ```
//!
//! The region is every rate vector with `Σ_S R_k <= C^M_S - C̃^W_S` for all
//! nonempty `S`. `P` is allowable when it lies in the power box and
//! `phi_S(P) >= 0` for every `S`, which is exactly `C^M_S >= C̃^W_S`.

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::StandardChannel;
use crate::error::{Error, Result};
use crate::rate::RateUnit;
use crate::subset::Subset;
use crate::FEASIBILITY_TOL;

/// Tolerance used by [`contains`] and for deduplicating region vertices.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// Per-user transmit powers in standardized units.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PowerAllocation(Vec<f64>);

impl PowerAllocation {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        for (i, &v) in p.iter().enumerate() {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::field(
                    format!("power[{i}]"),
                    format!("must be finite and >= 0, got {v}"),
                ));
            }
        }
        Ok(Self(p))
    }

    pub fn zeros(users: usize) -> Self {
        Self(vec![0.0; users])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn check_against(&self, ch: &StandardChannel) -> Result<()> {
        if self.len() != ch.users() {
            return Err(Error::LengthMismatch {
                field: "power",
                got: self.len(),
                expected: ch.users(),
            });
        }
        Ok(())
    }
}

impl std::ops::Index<usize> for PowerAllocation {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubsetRates {
    pub cm: f64,
    pub cw: f64,
    pub cm_tilde: f64,
    pub cw_tilde: f64,
}

/// Received-power sums inside and outside a subset.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SubsetSums {
    pub p_in: f64,
    pub hp_in: f64,
    pub p_out: f64,
    pub hp_out: f64,
}

impl SubsetSums {
    pub(crate) fn new(mask: u32, p: &[f64], h: &[f64]) -> Self {
        let mut s = SubsetSums {
            p_in: 0.0,
            hp_in: 0.0,
            p_out: 0.0,
            hp_out: 0.0,
        };
        for (k, (&pk, &hk)) in p.iter().zip(h).enumerate() {
            if mask & (1 << k) != 0 {
                s.p_in += pk;
                s.hp_in += hk * pk;
            } else {
                s.p_out += pk;
                s.hp_out += hk * pk;
            }
        }
        s
    }

    #[inline]
    pub(crate) fn phi(&self) -> f64 {
        self.p_in - self.hp_in / (1.0 + self.hp_out)
    }

    #[inline]
    pub(crate) fn bound(&self, unit: RateUnit) -> f64 {
        unit.half_log1p(self.p_in) - unit.half_log1p(self.hp_in / (1.0 + self.hp_out))
    }
}

fn check_subset(s: Subset, ch: &StandardChannel) -> Result<()> {
    if s.is_empty() || s.mask() >> ch.users() != 0 {
        return Err(Error::InvalidSubset { users: ch.users() });
    }
    Ok(())
}

pub fn subset_rates(s: Subset, p: &PowerAllocation, ch: &StandardChannel) -> Result<SubsetRates> {
    check_subset(s, ch)?;
    p.check_against(ch)?;
    let sums = SubsetSums::new(s.mask(), p.as_slice(), ch.h());
    let unit = ch.rate_unit();
    Ok(SubsetRates {
        cm: unit.half_log1p(sums.p_in),
        cw: unit.half_log1p(sums.hp_in),
        cm_tilde: unit.half_log1p(sums.p_in / (1.0 + sums.p_out)),
        cw_tilde: unit.half_log1p(sums.hp_in / (1.0 + sums.hp_out)),
    })
}

/// `phi_S(P) = Σ_S P_k - Σ_S h_k P_k / (1 + Σ_Sᶜ h_k P_k)`.
///
/// Its sign matches the sign of `C^M_S - C̃^W_S`.
pub fn phi(s: Subset, p: &PowerAllocation, ch: &StandardChannel) -> Result<f64> {
    check_subset(s, ch)?;
    p.check_against(ch)?;
    Ok(SubsetSums::new(s.mask(), p.as_slice(), ch.h()).phi())
}

/// First constraint of the allowable power set that a power vector breaks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `P_k` exceeds `P_k,max`. `user` is the 1-based label.
    PowerBound { user: usize, power: f64, limit: f64 },
    /// `phi_S(P) < 0`.
    Subset { subset: Subset, phi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Feasibility {
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Tests membership in the allowable power set.
///
/// Power bounds are checked first in user order, then subsets in ascending
/// mask order; the first violation is returned as the witness.
pub fn is_feasible(p: &PowerAllocation, ch: &StandardChannel) -> Result<Feasibility> {
    p.check_against(ch)?;
    Ok(feasibility_unchecked(p.as_slice(), ch))
}

pub(crate) fn feasibility_unchecked(p: &[f64], ch: &StandardChannel) -> Feasibility {
    for (k, (&pk, &limit)) in p.iter().zip(ch.p_max()).enumerate() {
        if pk > limit {
            return Feasibility {
                feasible: false,
                witness: Some(Witness::PowerBound {
                    user: k + 1,
                    power: pk,
                    limit,
                }),
            };
        }
    }
    for s in Subset::all(ch.users()) {
        let phi = SubsetSums::new(s.mask(), p, ch.h()).phi();
        if phi < -FEASIBILITY_TOL {
            return Feasibility {
                feasible: false,
                witness: Some(Witness::Subset { subset: s, phi }),
            };
        }
    }
    Feasibility {
        feasible: true,
        witness: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Halfspace {
    pub subset: Subset,
    /// `C^M_S - C̃^W_S`.
    pub bound: f64,
}

/// Achievable region at a fixed power allocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateRegion {
    pub feasible: bool,
    pub halfspaces: Vec<Halfspace>,
    /// Extreme points, listed counter-clockwise from the origin. Only computed
    /// for one or two users; empty when the power allocation is not allowable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
    pub rate_unit: RateUnit,
    #[serde(skip)]
    users: usize,
}

impl RateRegion {
    pub fn users(&self) -> usize {
        self.users
    }

    /// Bound for a subset given by its mask.
    pub fn bound(&self, mask: u32) -> Option<f64> {
        // halfspaces are stored in ascending mask order starting at 1
        self.halfspaces
            .get((mask as usize).checked_sub(1)?)
            .map(|hs| hs.bound)
    }
}

pub fn build_region(p: &PowerAllocation, ch: &StandardChannel) -> Result<RateRegion> {
    p.check_against(ch)?;
    let unit = ch.rate_unit();
    let halfspaces: Vec<Halfspace> = Subset::all(ch.users())
        .map(|s| Halfspace {
            subset: s,
            bound: SubsetSums::new(s.mask(), p.as_slice(), ch.h()).bound(unit),
        })
        .collect();
    let feasible = feasibility_unchecked(p.as_slice(), ch).feasible;
    let bounds: Vec<f64> = halfspaces.iter().map(|hs| hs.bound).collect();
    let vertices = match ch.users() {
        1 => Some(segment_vertices(bounds[0])),
        2 => Some(polygon_vertices(bounds[0], bounds[1], bounds[2])),
        _ => None,
    };
    Ok(RateRegion {
        feasible,
        halfspaces,
        vertices,
        rate_unit: unit,
        users: ch.users(),
    })
}

fn segment_vertices(b1: f64) -> Vec<Vec<f64>> {
    if b1 < -MEMBERSHIP_TOL {
        return Vec::new();
    }
    let mut out = vec![vec![0.0]];
    if b1 > MEMBERSHIP_TOL {
        out.push(vec![b1]);
    }
    out
}

/// Vertices of `{R >= 0, R1 <= b1, R2 <= b2, R1 + R2 <= b12}`.
fn polygon_vertices(b1: f64, b2: f64, b12: f64) -> Vec<Vec<f64>> {
    if b1.min(b2).min(b12) < -MEMBERSHIP_TOL {
        return Vec::new();
    }
    let (b1, b2, b12) = (b1.max(0.0), b2.max(0.0), b12.max(0.0));
    // single-user bounds that the sum bound does not already cut
    let e1 = b1.min(b12);
    let e2 = b2.min(b12);
    let candidates: Vec<[f64; 2]> = if b12 >= e1 + e2 {
        vec![[0.0, 0.0], [e1, 0.0], [e1, e2], [0.0, e2]]
    } else {
        vec![
            [0.0, 0.0],
            [e1, 0.0],
            [e1, b12 - e1],
            [b12 - e2, e2],
            [0.0, e2],
        ]
    };
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(candidates.len());
    for v in candidates {
        let dup = out.iter().any(|u| {
            (u[0] - v[0]).abs() <= MEMBERSHIP_TOL && (u[1] - v[1]).abs() <= MEMBERSHIP_TOL
        });
        if !dup {
            out.push(v.to_vec());
        }
    }
    out
}

/// Whether a rate vector satisfies every halfspace and is componentwise
/// nonnegative, both to within `1e-12`.
pub fn contains(region: &RateRegion, rates: &[f64]) -> bool {
    if rates.len() != region.users {
        return false;
    }
    if rates.iter().any(|&r| !(r >= -MEMBERSHIP_TOL)) {
        return false;
    }
    region.halfspaces.iter().all(|hs| {
        let total: f64 = hs.subset.indices().map(|k| rates[k]).sum();
        total <= hs.bound + MEMBERSHIP_TOL
    })
}

/// Evenly spaced values `0, Δ, .., max` with duplicates removed, so a zero
/// cap yields a single point.
pub(crate) fn axis_grid(max: f64, steps: usize) -> Vec<f64> {
    let last = steps - 1;
    let mut out: Vec<f64> = Vec::with_capacity(steps);
    for i in 0..steps {
        let v = if i == last {
            max
        } else {
            max * (i as f64 / last as f64)
        };
        if out.last() != Some(&v) {
            out.push(v);
        }
    }
    out
}

/// Regions at every allowable point of a uniform two-user power grid.
///
/// Results come back ordered by ascending `(P1, P2)`.
pub fn union_sweep(
    ch: &StandardChannel,
    grid_steps: usize,
) -> Result<Vec<(PowerAllocation, RateRegion)>> {
    if ch.users() != 2 {
        return Err(Error::UserCount {
            expected: 2,
            got: ch.users(),
        });
    }
    if grid_steps < 2 {
        return Err(Error::field("grid_steps", "must be >= 2"));
    }
    let a1 = axis_grid(ch.p_max()[0], grid_steps);
    let a2 = axis_grid(ch.p_max()[1], grid_steps);
    let points: Vec<[f64; 2]> = a1
        .iter()
        .flat_map(|&p1| a2.iter().map(move |&p2| [p1, p2]))
        .collect();
    let regions: Vec<Option<(PowerAllocation, RateRegion)>> = points
        .par_iter()
        .map(|pt| {
            let p = PowerAllocation(pt.to_vec());
            let region = build_region(&p, ch).expect("grid point has channel length");
            region.feasible.then_some((p, region))
        })
        .collect();
    Ok(regions.into_iter().flatten().collect())
}
