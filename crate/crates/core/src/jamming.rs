//! Two-user collaborative secrecy.
//!
//! User 1 sends data and user 2 sends Gaussian noise. The secrecy rate is
//!
//! ```text
//! g(P1 / (1 + P2)) - g(h1 P1 / (1 + h2 P2)),   0 <= Pk <= Pk,max
//! ```
//!
//! With users labeled so that `h1 <= h2`, the noise hurts the eavesdropper
//! more than the receiver. Stationarity in `P2` is an upright parabola with
//! roots `p_lo <= p_hi`; the optimum jamming power is `p_hi` clipped to
//! `[0, P2,max]`.

use serde::{Serialize, Serializer};

use crate::channel::StandardChannel;
use crate::error::{Error, Result};
use crate::power::max_sum_rate;
use crate::rate::RateUnit;

/// Gains closer than this are treated as equal.
const GAIN_TOL: f64 = 1e-12;

/// Two-user channel with `h1 <= h2`; user 2 is the candidate jammer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoUserChannel {
    pub h1: f64,
    pub h2: f64,
    pub p1_max: f64,
    pub p2_max: f64,
    /// Original 0-based index of (user 1, user 2).
    #[serde(skip)]
    order: [usize; 2],
}

impl TwoUserChannel {
    /// Relabels the pair so that the first user has the smaller gain. Equal
    /// gains keep their order.
    pub fn new(h: [f64; 2], p_max: [f64; 2]) -> Result<Self> {
        for (name, vals) in [("gain_eavesdropper", h), ("power_max", p_max)] {
            for (i, v) in vals.into_iter().enumerate() {
                if !(v >= 0.0) || !v.is_finite() {
                    return Err(Error::field(
                        format!("users[{i}].{name}"),
                        format!("must be finite and >= 0, got {v}"),
                    ));
                }
            }
        }
        let order = if h[1] < h[0] { [1, 0] } else { [0, 1] };
        Ok(Self {
            h1: h[order[0]],
            h2: h[order[1]],
            p1_max: p_max[order[0]],
            p2_max: p_max[order[1]],
            order,
        })
    }

    pub fn from_standard(ch: &StandardChannel) -> Result<Self> {
        if ch.users() != 2 {
            return Err(Error::UserCount {
                expected: 2,
                got: ch.users(),
            });
        }
        Self::new([ch.h()[0], ch.h()[1]], [ch.p_max()[0], ch.p_max()[1]])
    }

    pub fn order(&self) -> [usize; 2] {
        self.order
    }

    /// Puts a (user 1, user 2) pair back in the caller's order.
    pub fn to_original(&self, pair: [f64; 2]) -> [f64; 2] {
        let mut out = [0.0; 2];
        out[self.order[0]] = pair[0];
        out[self.order[1]] = pair[1];
        out
    }

    pub fn case(&self) -> CaseTag {
        if self.h2 < 1.0 {
            CaseTag::NoJammer
        } else if self.h1 < 1.0 {
            CaseTag::A
        } else if self.h2 - self.h1 <= GAIN_TOL {
            CaseTag::Degenerate
        } else {
            CaseTag::B
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// User 2 stays silent.
    NoJam,
    /// User 2 jams at the stationary point `p_hi`.
    InteriorRoot,
    /// User 2 jams at its power cap.
    FullJam,
    /// Neither user transmits.
    AllSilent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    /// `h1 < 1 <= h2`.
    A,
    /// `1 <= h1 < h2`.
    B,
    /// `h1 == h2 >= 1`.
    Degenerate,
    /// Both gains below 1; the sum-rate optimum applies and nobody jams.
    NoJammer,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JammingSolution {
    /// Powers in the caller's user order.
    pub powers: [f64; 2],
    /// Power of the data user (smaller gain).
    pub p1: f64,
    /// Power of the jamming user (larger gain).
    pub p2: f64,
    /// Achieved rate, clamped at zero.
    pub secrecy_rate: f64,
    pub branch: Branch,
    pub case_tag: CaseTag,
    /// Original labels of (data user, jammer).
    #[serde(serialize_with = "one_based")]
    pub permutation: [usize; 2],
    pub rate_unit: RateUnit,
}

fn one_based<S: Serializer>(v: &[usize; 2], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|i| i + 1))
}

impl JammingSolution {
    fn new(
        ch: &TwoUserChannel,
        (p1, p2): (f64, f64),
        rate: f64,
        branch: Branch,
        case_tag: CaseTag,
        unit: RateUnit,
    ) -> Self {
        Self {
            powers: ch.to_original([p1, p2]),
            p1,
            p2,
            secrecy_rate: rate.max(0.0),
            branch,
            case_tag,
            permutation: ch.order,
            rate_unit: unit,
        }
    }
}

/// `g(p1/(1+p2)) - g(h1 p1/(1+h2 p2))`. Negative when the eavesdropper's
/// effective channel is the better one.
pub fn jam_objective(p1: f64, p2: f64, ch: &TwoUserChannel, unit: RateUnit) -> f64 {
    unit.half_log1p(p1 / (1.0 + p2)) - unit.half_log1p(ch.h1 * p1 / (1.0 + ch.h2 * p2))
}

/// Sign of the data user's stationarity condition at jamming power `p2`:
/// negative favors full power, positive favors silence.
pub fn psi1(p2: f64, ch: &TwoUserChannel) -> f64 {
    -(1.0 + ch.h2 * p2) * ((1.0 - ch.h1) + (ch.h2 - ch.h1) * p2)
}

/// Jammer's stationarity numerator, expanded as a polynomial in `p2`.
///
/// Equals `p1 h2 (h2 - h1) (p2 - p_hi)(p2 - p_lo)` whenever the roots exist.
pub fn psi2(p1: f64, p2: f64, ch: &TwoUserChannel) -> f64 {
    let (h1, h2) = (ch.h1, ch.h2);
    let quad = h2 * (h2 - h1) * p2 * p2
        - 2.0 * h2 * (h1 - 1.0) * p2
        - (h1 * h2 - 1.0)
        - h1 * (h2 - 1.0) * p1;
    p1 * quad
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JamRoots {
    /// Discriminant `h1 h2 [(h2 - 1) + (h2 - h1) p1] (h2 - 1)`.
    pub d: f64,
    pub p_lo: f64,
    pub p_hi: f64,
}

/// Roots of the jammer's stationarity parabola at data power `p1`.
pub fn jam_roots(p1: f64, ch: &TwoUserChannel) -> Result<JamRoots> {
    let (h1, h2) = (ch.h1, ch.h2);
    if !(h2 - h1 > 0.0) {
        return Err(Error::Precondition(format!(
            "roots need h2 > h1, got h1 = {h1}, h2 = {h2}"
        )));
    }
    if h2 < 1.0 {
        return Err(Error::Precondition(format!("roots need h2 >= 1, got {h2}")));
    }
    if !(p1 >= 0.0) {
        return Err(Error::field("p1", format!("must be >= 0, got {p1}")));
    }
    let d = h1 * h2 * ((h2 - 1.0) + (h2 - h1) * p1) * (h2 - 1.0);
    let sqrt_d = d.max(0.0).sqrt();
    let denom = h2 * (h2 - h1);
    let base = -h2 * (1.0 - h1);
    Ok(JamRoots {
        d,
        p_lo: (base - sqrt_d) / denom,
        p_hi: (base + sqrt_d) / denom,
    })
}

/// Data user at full power; jammer at `p_hi` clipped to its cap.
fn jam_at_root(ch: &TwoUserChannel, case_tag: CaseTag, unit: RateUnit) -> Result<JammingSolution> {
    let p1 = ch.p1_max;
    let roots = jam_roots(p1, ch)?;
    let (p2, branch) = if roots.p_hi <= 0.0 {
        (0.0, Branch::NoJam)
    } else if roots.p_hi <= ch.p2_max {
        (roots.p_hi, Branch::InteriorRoot)
    } else {
        (ch.p2_max, Branch::FullJam)
    };
    let rate = jam_objective(p1, p2, ch, unit);
    Ok(JammingSolution::new(
        ch,
        (p1, p2),
        rate,
        branch,
        case_tag,
        unit,
    ))
}

/// Data-user power cap at or below which jamming cannot help when
/// `h1 < 1 <= h2`: `p_hi <= 0` exactly when `P1,max <= (1 - h1 h2) / (h1 (h2 - 1))`.
///
/// Infinite when `h1 = 0` or `h2 = 1`; nonpositive when `h1 h2 >= 1`, in
/// which case any data power benefits from jamming.
pub fn case_a_threshold(ch: &TwoUserChannel) -> f64 {
    let (h1, h2) = (ch.h1, ch.h2);
    let denom = h1 * (h2 - 1.0);
    if denom == 0.0 {
        return f64::INFINITY;
    }
    (1.0 - h1 * h2) / denom
}

/// Closed-form optimum for `h1 < 1 <= h2`.
pub fn solve_case_a(ch: &TwoUserChannel, unit: RateUnit) -> Result<JammingSolution> {
    if !(ch.h1 < 1.0 && ch.h2 >= 1.0) {
        return Err(Error::Precondition(format!(
            "case A needs h1 < 1 <= h2, got h1 = {}, h2 = {}",
            ch.h1, ch.h2
        )));
    }
    if ch.p1_max == 0.0 {
        return Ok(JammingSolution::new(
            ch,
            (0.0, 0.0),
            0.0,
            Branch::NoJam,
            CaseTag::A,
            unit,
        ));
    }
    jam_at_root(ch, CaseTag::A, unit)
}

/// Jammer power below which the data user cannot reach positive secrecy when
/// `1 <= h1 < h2`.
pub fn case_b_threshold(ch: &TwoUserChannel) -> f64 {
    (ch.h1 - 1.0) / (ch.h2 - ch.h1)
}

/// Closed-form optimum for `1 <= h1 < h2`.
///
/// When the jammer is exactly at the threshold the data user's power is
/// arbitrary and the rate is zero; both users are reported silent.
pub fn solve_case_b(ch: &TwoUserChannel, unit: RateUnit) -> Result<JammingSolution> {
    if !(ch.h1 >= 1.0 && ch.h2 - ch.h1 > GAIN_TOL) {
        return Err(Error::Precondition(format!(
            "case B needs 1 <= h1 < h2, got h1 = {}, h2 = {}",
            ch.h1, ch.h2
        )));
    }
    if ch.p2_max <= case_b_threshold(ch) || ch.p1_max == 0.0 {
        return Ok(JammingSolution::new(
            ch,
            (0.0, 0.0),
            0.0,
            Branch::AllSilent,
            CaseTag::B,
            unit,
        ));
    }
    jam_at_root(ch, CaseTag::B, unit)
}

/// Picks the applicable regime and solves it.
pub fn solve_jamming(ch: &TwoUserChannel, unit: RateUnit) -> JammingSolution {
    match ch.case() {
        CaseTag::NoJammer => {
            let std = StandardChannel::new(vec![ch.h1, ch.h2], vec![ch.p1_max, ch.p2_max], unit)
                .expect("two validated users");
            let sol = max_sum_rate(&std);
            let p = sol.p_star.as_slice();
            JammingSolution::new(
                ch,
                (p[0], p[1]),
                sol.sum_rate,
                Branch::NoJam,
                CaseTag::NoJammer,
                unit,
            )
        }
        CaseTag::A => solve_case_a(ch, unit).expect("dispatched on case A"),
        CaseTag::B => solve_case_b(ch, unit).expect("dispatched on case B"),
        CaseTag::Degenerate => JammingSolution::new(
            ch,
            (0.0, 0.0),
            0.0,
            Branch::AllSilent,
            CaseTag::Degenerate,
            unit,
        ),
    }
}
