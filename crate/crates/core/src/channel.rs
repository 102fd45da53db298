//! Raw and standard-form channel descriptions.
//!
//! In standard form the receiver sees every user with unit gain over unit
//! noise, and the eavesdropper sees user `k` with gain `h_k`. A raw channel
//! maps there by scaling each codeword amplitude by `sqrt(hM_k / σ²_M)`, which
//! leaves every receiver and eavesdropper SNR unchanged.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rate::RateUnit;
use crate::MAX_USERS;

/// Channel as measured: per-user gains to both receivers, both noise
/// variances and per-user transmit power limits.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelParams {
    pub gains_to_receiver: Vec<f64>,
    pub gains_to_eavesdropper: Vec<f64>,
    pub noise_var_receiver: f64,
    pub noise_var_eavesdropper: f64,
    pub power_limits: Vec<f64>,
    pub rate_unit: RateUnit,
}

impl ChannelParams {
    pub fn users(&self) -> usize {
        self.gains_to_receiver.len()
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.users();
        check_user_count(k)?;
        check_len("gains_to_eavesdropper", self.gains_to_eavesdropper.len(), k)?;
        check_len("power_limits", self.power_limits.len(), k)?;
        for (i, &v) in self.gains_to_receiver.iter().enumerate() {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::field(
                    format!("users[{i}].gain_receiver"),
                    format!("must be finite and > 0, got {v}"),
                ));
            }
        }
        check_nonneg("gain_eavesdropper", &self.gains_to_eavesdropper)?;
        check_nonneg("power_max", &self.power_limits)?;
        for (name, v) in [
            ("noise_var_receiver", self.noise_var_receiver),
            ("noise_var_eavesdropper", self.noise_var_eavesdropper),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::field(
                    name,
                    format!("must be finite and > 0, got {v}"),
                ));
            }
        }
        Ok(())
    }
}

/// Channel in standard form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StandardChannel {
    h: Vec<f64>,
    p_max: Vec<f64>,
    rate_unit: RateUnit,
}

impl StandardChannel {
    pub fn new(h: Vec<f64>, p_max: Vec<f64>, rate_unit: RateUnit) -> Result<Self> {
        check_user_count(h.len())?;
        check_len("p_max", p_max.len(), h.len())?;
        check_nonneg("gain_eavesdropper", &h)?;
        check_nonneg("power_max", &p_max)?;
        Ok(Self {
            h,
            p_max,
            rate_unit,
        })
    }

    #[inline]
    pub fn users(&self) -> usize {
        self.h.len()
    }

    /// Standardized eavesdropper gains.
    #[inline]
    pub fn h(&self) -> &[f64] {
        &self.h
    }

    /// Standardized power caps.
    #[inline]
    pub fn p_max(&self) -> &[f64] {
        &self.p_max
    }

    #[inline]
    pub fn rate_unit(&self) -> RateUnit {
        self.rate_unit
    }

    pub fn with_rate_unit(mut self, unit: RateUnit) -> Self {
        self.rate_unit = unit;
        self
    }

    /// Reorders users so that `new[i] = old[perm[i]]`.
    pub fn permuted(&self, perm: &Permutation) -> Self {
        Self {
            h: perm.gather(&self.h),
            p_max: perm.gather(&self.p_max),
            rate_unit: self.rate_unit,
        }
    }
}

/// Maps a raw channel to standard form.
pub fn standardize(raw: &ChannelParams) -> Result<StandardChannel> {
    raw.validate()?;
    let (nm, nw) = (raw.noise_var_receiver, raw.noise_var_eavesdropper);
    let h = raw
        .gains_to_eavesdropper
        .iter()
        .zip(&raw.gains_to_receiver)
        .map(|(&hw, &hm)| hw * nm / (hm * nw))
        .collect();
    let p_max = raw
        .power_limits
        .iter()
        .zip(&raw.gains_to_receiver)
        .map(|(&p, &hm)| hm * p / nm)
        .collect();
    StandardChannel::new(h, p_max, raw.rate_unit)
}

/// Reordering of users. Position `i` of the reordered channel holds original
/// user `order[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    order: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            order: (0..n).collect(),
        }
    }

    /// Original 0-based index held at each sorted position.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// 1-based original labels, the way users are named in reports.
    pub fn labels(&self) -> Vec<usize> {
        self.order.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// `out[i] = values[order[i]]`.
    pub fn gather<T: Copy>(&self, values: &[T]) -> Vec<T> {
        self.order.iter().map(|&i| values[i]).collect()
    }

    /// Inverse of [`gather`](Self::gather): puts sorted-order values back at
    /// their original positions.
    pub fn scatter<T: Copy + Default>(&self, values: &[T]) -> Vec<T> {
        let mut out = vec![T::default(); values.len()];
        for (pos, &orig) in self.order.iter().enumerate() {
            out[orig] = values[pos];
        }
        out
    }
}

/// Sorts users by nondecreasing eavesdropper gain. Ties keep their original
/// order.
pub fn sort_by_gain(ch: &StandardChannel) -> (StandardChannel, Permutation) {
    let mut order: Vec<usize> = (0..ch.users()).collect();
    order.sort_by(|&a, &b| ch.h[a].total_cmp(&ch.h[b]));
    let perm = Permutation { order };
    (ch.permuted(&perm), perm)
}

fn check_user_count(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::NoUsers);
    }
    if k > MAX_USERS {
        return Err(Error::TooManyUsers(k));
    }
    Ok(())
}

fn check_len(field: &'static str, got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(Error::LengthMismatch {
            field,
            got,
            expected,
        });
    }
    Ok(())
}

fn check_nonneg(field: &str, values: &[f64]) -> Result<()> {
    for (i, &v) in values.iter().enumerate() {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::field(
                format!("users[{i}].{field}"),
                format!("must be finite and >= 0, got {v}"),
            ));
        }
    }
    Ok(())
}
