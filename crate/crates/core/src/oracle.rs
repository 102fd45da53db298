//! Exhaustive grid search used to cross-check the closed-form optimizers.
//!
//! The sum-rate search only visits allowable power vectors; the jamming search
//! covers the whole power box, matching the constraint set each closed form
//! is derived for. Both reduce in parallel and break ties toward the
//! lexicographically smallest power vector, so results are reproducible
//! bit-for-bit.

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::StandardChannel;
use crate::error::{Error, Result};
use crate::jamming::{jam_objective, TwoUserChannel};
use crate::power::sum_rate_raw;
use crate::rate::RateUnit;
use crate::region::{axis_grid, feasibility_unchecked};

/// Upper bound on the number of grid points in one search.
pub const MAX_GRID_POINTS: f64 = 1e7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    /// Points per axis unless overridden by `axis_steps`.
    pub steps_per_axis: usize,
    /// `true` places points at both ends of each axis (`0` and the cap);
    /// `false` uses cell midpoints.
    pub include_corners: bool,
    /// Optional per-axis point counts.
    pub axis_steps: Option<Vec<usize>>,
}

impl GridSpec {
    pub fn new(steps_per_axis: usize) -> Self {
        Self {
            steps_per_axis,
            include_corners: true,
            axis_steps: None,
        }
    }

    pub fn per_axis(steps: Vec<usize>) -> Self {
        Self {
            steps_per_axis: steps.iter().copied().max().unwrap_or(2),
            include_corners: true,
            axis_steps: Some(steps),
        }
    }

    fn axes(&self, caps: &[f64]) -> Result<Vec<Vec<f64>>> {
        let steps: Vec<usize> = match &self.axis_steps {
            Some(s) if s.len() != caps.len() => {
                return Err(Error::LengthMismatch {
                    field: "axis_steps",
                    got: s.len(),
                    expected: caps.len(),
                })
            }
            Some(s) => s.clone(),
            None => vec![self.steps_per_axis; caps.len()],
        };
        let min_steps = if self.include_corners { 2 } else { 1 };
        if steps.iter().any(|&n| n < min_steps) {
            return Err(Error::field(
                "steps_per_axis",
                format!("every axis needs at least {min_steps} points"),
            ));
        }
        let points: f64 = steps.iter().map(|&n| n as f64).product();
        if points > MAX_GRID_POINTS {
            return Err(Error::GridTooLarge {
                points,
                limit: MAX_GRID_POINTS,
            });
        }
        Ok(caps
            .iter()
            .zip(&steps)
            .map(|(&cap, &n)| {
                if self.include_corners {
                    axis_grid(cap, n)
                } else {
                    (0..n)
                        .map(|i| cap * ((i as f64 + 0.5) / n as f64))
                        .collect()
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridOptimum {
    pub powers: Vec<f64>,
    pub rate: f64,
    /// Grid points that passed the constraint filter.
    pub evaluated: usize,
}

/// Decodes a flat index into per-axis indices, first axis most significant.
fn point_at(axes: &[Vec<f64>], mut flat: usize, out: &mut [f64]) {
    for (axis, slot) in axes.iter().zip(out.iter_mut()).rev() {
        *slot = axis[flat % axis.len()];
        flat /= axis.len();
    }
}

/// Best `(rate, flat index)` with ties going to the smaller index.
fn better(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

fn search<F>(axes: &[Vec<f64>], objective: F) -> Option<(f64, usize, usize)>
where
    F: Fn(&[f64]) -> Option<f64> + Sync,
{
    let total: usize = axes.iter().map(Vec::len).product();
    let dims = axes.len();
    let (best, count) = (0..total)
        .into_par_iter()
        .fold(
            || (None::<(f64, usize)>, 0usize, vec![0.0; dims]),
            |(best, count, mut buf), idx| {
                point_at(axes, idx, &mut buf);
                match objective(&buf) {
                    Some(v) => {
                        let best = Some(match best {
                            Some(b) => better(b, (v, idx)),
                            None => (v, idx),
                        });
                        (best, count + 1, buf)
                    }
                    None => (best, count, buf),
                }
            },
        )
        .map(|(best, count, _)| (best, count))
        .reduce(
            || (None, 0),
            |(a, ca), (b, cb)| {
                let best = match (a, b) {
                    (Some(a), Some(b)) => Some(better(a, b)),
                    (a, None) => a,
                    (None, b) => b,
                };
                (best, ca + cb)
            },
        );
    best.map(|(v, idx)| (v, idx, count))
}

/// Best allowable grid point for the sum secrecy rate.
pub fn grid_max_sum_rate(ch: &StandardChannel, spec: &GridSpec) -> Result<GridOptimum> {
    let axes = spec.axes(ch.p_max())?;
    let unit = ch.rate_unit();
    let (rate, idx, evaluated) = search(&axes, |p| {
        feasibility_unchecked(p, ch)
            .feasible
            .then(|| sum_rate_raw(p, ch.h(), unit))
    })
    .ok_or_else(|| Error::Precondition("no allowable grid point".into()))?;
    let mut powers = vec![0.0; axes.len()];
    point_at(&axes, idx, &mut powers);
    Ok(GridOptimum {
        powers,
        rate,
        evaluated,
    })
}

/// Best point of the jamming objective over the power box. Powers are in
/// (data user, jammer) order; the reported rate is clamped at zero.
pub fn grid_max_jamming(
    ch: &TwoUserChannel,
    spec: &GridSpec,
    unit: RateUnit,
) -> Result<GridOptimum> {
    let axes = spec.axes(&[ch.p1_max, ch.p2_max])?;
    let (rate, idx, evaluated) = search(&axes, |p| Some(jam_objective(p[0], p[1], ch, unit)))
        .expect("box grid is never empty");
    let mut powers = vec![0.0; 2];
    point_at(&axes, idx, &mut powers);
    Ok(GridOptimum {
        powers,
        rate: rate.max(0.0),
        evaluated,
    })
}
