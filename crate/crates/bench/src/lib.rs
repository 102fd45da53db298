//! Benchmark fixtures.

use gmacwt::{RateUnit, StandardChannel, TwoUserChannel};

/// `k` users with eavesdropper gains spread over `[0.05, 1.5)` and caps over `[1, 20)`.
pub fn spread_channel(k: usize) -> StandardChannel {
    let h = (0..k).map(|i| 0.05 + 1.45 * i as f64 / k as f64).collect();
    let p = (0..k)
        .map(|i| 1.0 + 19.0 * ((i * 7) % k) as f64 / k as f64)
        .collect();
    StandardChannel::new(h, p, RateUnit::Bits).unwrap()
}

pub fn case_a_pair() -> TwoUserChannel {
    TwoUserChannel::new([0.4, 1.4], [10.0, 10.0]).unwrap()
}

pub fn case_b_pair() -> TwoUserChannel {
    TwoUserChannel::new([1.2, 1.4], [10.0, 20.0]).unwrap()
}
