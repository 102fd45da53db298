use gmacwt::*;
use proptest::prelude::*;

fn standard(h: Vec<f64>, p_max: Vec<f64>) -> StandardChannel {
    StandardChannel::new(h, p_max, RateUnit::Bits).unwrap()
}

fn pa(p: &[f64]) -> PowerAllocation {
    PowerAllocation::new(p.to_vec()).unwrap()
}

/// Channel with `k` users plus a power vector inside its box.
fn channel_and_power(
    users: std::ops::RangeInclusive<usize>,
    h_max: f64,
) -> impl Strategy<Value = (StandardChannel, Vec<f64>)> {
    users.prop_flat_map(move |k| {
        (
            prop::collection::vec(0.0..h_max, k),
            prop::collection::vec(0.0..20.0f64, k),
            prop::collection::vec(0.0..=1.0f64, k),
        )
            .prop_map(|(h, p_max, frac)| {
                let p = p_max.iter().zip(&frac).map(|(m, f)| m * f).collect();
                (standard(h, p_max), p)
            })
    })
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn standardize_preserves_snr(
        users in prop::collection::vec((0.01..10.0f64, 0.0..10.0f64, 0.0..50.0f64), 1..6),
        nm in 0.01..10.0f64,
        nw in 0.01..10.0f64,
    ) {
        let raw = ChannelParams {
            gains_to_receiver: users.iter().map(|u| u.0).collect(),
            gains_to_eavesdropper: users.iter().map(|u| u.1).collect(),
            noise_var_receiver: nm,
            noise_var_eavesdropper: nw,
            power_limits: users.iter().map(|u| u.2).collect(),
            rate_unit: RateUnit::Bits,
        };
        let ch = standardize(&raw).unwrap();
        for (k, &(hm, hw, p)) in users.iter().enumerate() {
            prop_assert!(rel_close(hm * p / nm, ch.p_max()[k], 1e-12));
            prop_assert!(rel_close(hw * p / nw, ch.h()[k] * ch.p_max()[k], 1e-12));
        }
    }

    #[test]
    fn standardize_fixes_standard_channels(
        users in prop::collection::vec((0.0..5.0f64, 0.0..50.0f64), 1..6),
    ) {
        let raw = ChannelParams {
            gains_to_receiver: vec![1.0; users.len()],
            gains_to_eavesdropper: users.iter().map(|u| u.0).collect(),
            noise_var_receiver: 1.0,
            noise_var_eavesdropper: 1.0,
            power_limits: users.iter().map(|u| u.1).collect(),
            rate_unit: RateUnit::Bits,
        };
        let ch = standardize(&raw).unwrap();
        prop_assert_eq!(ch.h(), &raw.gains_to_eavesdropper[..]);
        prop_assert_eq!(ch.p_max(), &raw.power_limits[..]);
    }

    #[test]
    fn sort_then_restore((ch, _) in channel_and_power(1..=8, 2.0)) {
        let (sorted, perm) = sort_by_gain(&ch);
        prop_assert!(sorted.h().windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(perm.scatter(sorted.h()), ch.h().to_vec());
        prop_assert_eq!(perm.scatter(sorted.p_max()), ch.p_max().to_vec());
    }

    #[test]
    fn good_channels_only_need_the_box((ch, p) in channel_and_power(1..=6, 1.0)) {
        let f = is_feasible(&pa(&p), &ch).unwrap();
        prop_assert!(f.feasible, "{:?}", f.witness);
    }

    #[test]
    fn subset_rate_orderings((ch, p) in channel_and_power(1..=5, 2.0)) {
        let p = pa(&p);
        for s in Subset::all(ch.users()) {
            let r = subset_rates(s, &p, &ch).unwrap();
            prop_assert!(r.cm_tilde <= r.cm + 1e-15 && r.cw_tilde <= r.cw + 1e-15);
            prop_assert!(r.cm_tilde >= 0.0 && r.cw_tilde >= 0.0);
            let phi = phi(s, &p, &ch).unwrap();
            let diff = r.cm - r.cw_tilde;
            if phi.abs() > 1e-9 && diff.abs() > 1e-9 {
                prop_assert_eq!(phi > 0.0, diff > 0.0);
            }
        }
    }

    #[test]
    fn feasible_regions_have_nonnegative_bounds((ch, p) in channel_and_power(1..=5, 2.0)) {
        let r = build_region(&pa(&p), &ch).unwrap();
        prop_assert_eq!(r.halfspaces.len(), (1 << ch.users()) - 1);
        if r.feasible {
            // phi_S >= -1e-12 gives b_S >= -O(1e-12)
            prop_assert!(r.halfspaces.iter().all(|hs| hs.bound >= -1e-11));
            prop_assert!(contains(&r, &vec![0.0; ch.users()]));
        }
    }

    #[test]
    fn sum_bound_ignores_user_order(
        (ch, p) in channel_and_power(2..=5, 2.0),
        seed in any::<u64>(),
    ) {
        let k = ch.users();
        let mut order: Vec<usize> = (0..k).collect();
        // cheap deterministic shuffle
        let mut s = seed;
        for i in (1..k).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let h2: Vec<f64> = order.iter().map(|&i| ch.h()[i]).collect();
        let m2: Vec<f64> = order.iter().map(|&i| ch.p_max()[i]).collect();
        let p2: Vec<f64> = order.iter().map(|&i| p[i]).collect();
        let full = (1u32 << k) - 1;
        let a = build_region(&pa(&p), &ch).unwrap().bound(full).unwrap();
        let b = build_region(&pa(&p2), &standard(h2, m2)).unwrap().bound(full).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn degraded_sum_bound(
        h in 0.0..1.0f64,
        p in prop::collection::vec(0.0..20.0f64, 1..6),
    ) {
        let k = p.len();
        let ch = standard(vec![h; k], vec![20.0; k]);
        let r = build_region(&pa(&p), &ch).unwrap();
        let total: f64 = p.iter().sum();
        let expect = g(total, RateUnit::Bits).unwrap() - g(h * total, RateUnit::Bits).unwrap();
        prop_assert!((r.bound((1 << k) - 1).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn two_user_vertices_are_tight((ch, p) in channel_and_power(2..=2, 2.0)) {
        let r = build_region(&pa(&p), &ch).unwrap();
        prop_assume!(r.feasible);
        for v in r.vertices.as_ref().unwrap() {
            prop_assert!(contains(&r, v));
        }
        // push each point past every facet it lies on
        let b = [r.bound(1).unwrap(), r.bound(2).unwrap(), r.bound(3).unwrap()];
        let e = 1e-6;
        prop_assert!(!contains(&r, &[b[0].min(b[2]) + e, 0.0]));
        prop_assert!(!contains(&r, &[0.0, b[1].min(b[2]) + e]));
        prop_assert!(!contains(&r, &[-e, 0.0]));
        prop_assert!(!contains(&r, &[0.0, -e]));
        let half = b[2] / 2.0 + e;
        prop_assert!(!contains(&r, &[half, half]));
    }

    #[test]
    fn threshold_structure_holds((ch, _) in channel_and_power(1..=8, 2.0)) {
        let sol = max_sum_rate(&ch);
        let p = sol.p_star.as_slice();
        prop_assert!(is_feasible(&sol.p_star, &ch).unwrap().feasible);
        prop_assert!(sol.sum_rate >= 0.0);
        let rho = sol.rho_star;
        if sol.limiting_user >= 1 {
            prop_assert!(rho <= 1.0);
        }
        for (k, &pk) in p.iter().enumerate() {
            prop_assert!(pk == 0.0 || pk == ch.p_max()[k]);
            if ch.p_max()[k] == 0.0 {
                continue;
            }
            // users strictly on the threshold side they belong to
            if pk > 0.0 {
                prop_assert!(ch.h()[k] < rho + 1e-12 * rho);
            } else {
                prop_assert!(ch.h()[k] >= rho - 1e-12 * rho);
            }
        }
        // sign of d rho / d P_j = (h_j - rho) / (1 + Σ P) agrees
        let total: f64 = p.iter().sum();
        for (j, &pj) in p.iter().enumerate() {
            let slope = (ch.h()[j] - rho) / (1.0 + total);
            if pj > 0.0 {
                prop_assert!(slope <= 1e-12);
            }
        }
    }

    #[test]
    fn more_power_never_hurts((ch, _) in channel_and_power(1..=6, 2.0), bump in 0.0..10.0f64) {
        let sol = max_sum_rate(&ch);
        for &k in &sol.transmitting {
            let mut caps = ch.p_max().to_vec();
            caps[k] += bump;
            let bigger = max_sum_rate(&standard(ch.h().to_vec(), caps));
            prop_assert!(bigger.sum_rate >= sol.sum_rate - 1e-12);
        }
    }

    #[test]
    fn pruning_never_raises_rho((ch, p) in channel_and_power(1..=8, 2.0)) {
        let p = pa(&p);
        let q = prune_bad_users(&p, &ch).unwrap();
        prop_assert!(rho(&q, &ch).unwrap() <= rho(&p, &ch).unwrap() + 1e-12);
    }

    #[test]
    fn argmax_is_unit_free((ch, _) in channel_and_power(1..=8, 2.0)) {
        let bits = max_sum_rate(&ch);
        let nats = max_sum_rate(&ch.clone().with_rate_unit(RateUnit::Nats));
        prop_assert_eq!(&bits.p_star, &nats.p_star);
        prop_assert!((nats.sum_rate - bits.sum_rate * std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_grid((ch, _) in channel_and_power(2..=3, 2.0)) {
        let sol = max_sum_rate(&ch);
        let grid = grid_max_sum_rate(&ch, &GridSpec::new(11)).unwrap();
        prop_assert!((sol.sum_rate - grid.rate).abs() < 1e-9);
    }
}

fn case_a_channel() -> impl Strategy<Value = TwoUserChannel> {
    (0.0..1.0f64, 1.0..3.0f64, 0.01..20.0f64, 0.0..20.0f64)
        .prop_map(|(h1, h2, p1, p2)| TwoUserChannel::new([h1, h2], [p1, p2]).unwrap())
}

fn case_b_channel() -> impl Strategy<Value = TwoUserChannel> {
    (1.0..2.0f64, 0.01..1.5f64, 0.01..20.0f64, 0.0..20.0f64)
        .prop_map(|(h1, dh, p1, p2)| TwoUserChannel::new([h1, h1 + dh], [p1, p2]).unwrap())
}

/// Ratio inside the jamming Lagrangian; its `P2` derivative has `psi2` as
/// numerator.
fn lagrangian_ratio(p1: f64, p2: f64, c: &TwoUserChannel) -> f64 {
    -(1.0 + p1 + p2) * (1.0 + c.h2 * p2) / ((1.0 + p2) * (1.0 + c.h1 * p1 + c.h2 * p2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn jamming_never_hurts(c in case_a_channel()) {
        let s = solve_case_a(&c, RateUnit::Bits).unwrap();
        let base = jam_objective(c.p1_max, 0.0, &c, RateUnit::Bits);
        prop_assert!(s.secrecy_rate >= base - 1e-12);
        let root = jam_roots(c.p1_max, &c).unwrap().p_hi;
        if root > 1e-9 && c.p2_max > 1e-9 {
            prop_assert!(s.secrecy_rate > base);
        } else if root <= 0.0 {
            prop_assert_eq!(s.p2, 0.0);
            prop_assert!((s.secrecy_rate - base.max(0.0)).abs() < 1e-15);
        }
        if s.branch == Branch::InteriorRoot {
            prop_assert!((s.p2 - root).abs() < 1e-9);
        }
        prop_assert!(s.p1 <= c.p1_max && s.p2 <= c.p2_max);
    }

    #[test]
    fn case_a_threshold_zeroes_root(h1 in 0.05..0.95f64, h2 in 1.001..1.5f64) {
        prop_assume!(h1 * h2 < 1.0 - 1e-6);
        let probe = TwoUserChannel::new([h1, h2], [1.0, 10.0]).unwrap();
        let p1_max = case_a_threshold(&probe);
        let c = TwoUserChannel::new([h1, h2], [p1_max, 10.0]).unwrap();
        prop_assert!(jam_roots(p1_max, &c).unwrap().p_hi.abs() < 1e-9);
        let below = solve_case_a(&TwoUserChannel::new([h1, h2], [p1_max * 0.999, 10.0]).unwrap(), RateUnit::Bits).unwrap();
        prop_assert_eq!(below.branch, Branch::NoJam);
    }

    #[test]
    fn strong_jammer_always_helps(h1 in 0.01..1.0f64, h2 in 1.0..10.0f64, p1 in 1e-3..20.0f64) {
        prop_assume!(h1 * h2 >= 1.0);
        let c = TwoUserChannel::new([h1, h2], [p1, 10.0]).unwrap();
        prop_assert!(jam_roots(p1, &c).unwrap().p_hi > 0.0);
    }

    #[test]
    fn objective_is_unimodal_in_jamming_power(c in case_a_channel()) {
        let root = jam_roots(c.p1_max, &c).unwrap().p_hi;
        let step = 1e-3;
        let n = (c.p2_max / step).floor() as usize;
        let f = |p2: f64| jam_objective(c.p1_max, p2, &c, RateUnit::Bits);
        for i in 0..n {
            let (a, b) = (i as f64 * step, (i + 1) as f64 * step);
            let d = f(b) - f(a);
            if b <= root {
                prop_assert!(d >= -1e-13, "decrease before root at {}", a);
            } else if a >= root {
                prop_assert!(d <= 1e-13, "increase after root at {}", a);
            }
        }
    }

    #[test]
    fn psi2_matches_lagrangian_slope(
        c in prop_oneof![case_a_channel(), case_b_channel()],
        p2 in 1e-2..20.0f64,
    ) {
        prop_assume!(c.h2 - c.h1 > 1e-3);
        let p1 = c.p1_max;
        let eps = 1e-3 * (1.0 + p2);
        let f = |x: f64| lagrangian_ratio(p1, x, &c);
        // five-point stencil
        let fd = (8.0 * (f(p2 + eps) - f(p2 - eps)) - (f(p2 + 2.0 * eps) - f(p2 - 2.0 * eps)))
            / (12.0 * eps);
        let scale = (1.0 + p2).powi(2) * (1.0 + c.h1 * p1 + c.h2 * p2).powi(2);
        let expanded = psi2(p1, p2, &c);
        let r = jam_roots(p1, &c).unwrap();
        let factored = p1 * c.h2 * (c.h2 - c.h1) * (p2 - r.p_hi) * (p2 - r.p_lo);
        let mag = expanded.abs().max(1e-3 * p1);
        // rounding in the ratio, amplified by the difference quotient
        let noise = scale * 256.0 * f64::EPSILON * lagrangian_ratio(p1, p2, &c).abs() / eps;
        prop_assert!((fd * scale - expanded).abs() <= 1e-6 * mag.max(1.0) + noise,
            "fd {} vs psi2 {}", fd * scale, expanded);
        prop_assert!((factored - expanded).abs() <= 1e-9 * mag.max(1.0));
    }

    #[test]
    fn case_b_root_clears_threshold(c in case_b_channel()) {
        let t = (c.h1 - 1.0) / (c.h2 - c.h1);
        prop_assert!(jam_roots(c.p1_max, &c).unwrap().p_hi > t);
    }
}

#[test]
fn jamming_matches_grid_on_a_sample() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let (h1, h2) = if rng.gen_bool(0.5) {
            (rng.gen_range(0.0..1.0), rng.gen_range(1.0..3.0))
        } else {
            let h1 = rng.gen_range(1.0..2.0);
            (h1, h1 + rng.gen_range(0.01..1.5))
        };
        let c = TwoUserChannel::new(
            [h1, h2],
            [rng.gen_range(0.01..20.0), rng.gen_range(0.0..20.0)],
        )
        .unwrap();
        let s = solve_jamming(&c, RateUnit::Bits);
        let steps = (c.p2_max / 1e-3).ceil() as usize + 1;
        let o = grid_max_jamming(
            &c,
            &GridSpec::per_axis(vec![2, steps.max(2)]),
            RateUnit::Bits,
        )
        .unwrap();
        assert!(
            (s.secrecy_rate - o.rate).abs() <= 1e-5,
            "{c:?}: {s:?} vs {o:?}"
        );
        assert!(o.rate <= s.secrecy_rate + 1e-12);
    }
}
