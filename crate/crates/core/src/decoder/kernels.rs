//! Scalar node updates shared by all decoder variants.
//!
//! The single-message functions take the messages on `N{m}\n` (or `M{n}\m`)
//! explicitly and are the reference definitions. The `*_batch` functions
//! compute every outgoing message of one node at once and must agree with the
//! reference functions exactly.

use crate::channel::LLR_MAX;

/// Clamp applied to the tanh product before `atanh`.
pub const TANH_EPS: f64 = 1e-12;

#[inline]
fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

#[inline]
fn saturate(x: f64) -> f64 {
    x.clamp(-LLR_MAX, LLR_MAX)
}

/// Tanh-rule check update. A single incoming message is forwarded unchanged;
/// an empty set (degree-1 check) yields `+LLR_MAX`.
pub fn check_update_spa(incoming: &[f64]) -> f64 {
    match incoming {
        [] => LLR_MAX,
        [a] => *a,
        _ => {
            let mut s = 1.0;
            let mut prod = 1.0;
            for &q in incoming {
                s *= sign(q);
                prod *= (0.5 * q.abs()).tanh();
            }
            s * 2.0 * prod.clamp(-1.0 + TANH_EPS, 1.0 - TANH_EPS).atanh()
        }
    }
}

/// Min-sum check update: product of signs times the smallest magnitude.
pub fn check_update_minsum(incoming: &[f64]) -> f64 {
    if incoming.is_empty() {
        return LLR_MAX;
    }
    let mut s = 1.0;
    let mut min = f64::INFINITY;
    for &q in incoming {
        s *= sign(q);
        min = min.min(q.abs());
    }
    s * min
}

/// Staircase scaling factor `1 - 2^-ceil(i / S)` for 1-based iteration `i`.
///
/// The factor is exactly 1 once the exponent passes 31.
pub fn svs_alpha(iteration: u32, step: u32) -> f64 {
    assert!(iteration >= 1 && step >= 1, "iteration and step are 1-based");
    let shifts = iteration.div_ceil(step);
    if shifts > 31 {
        1.0
    } else {
        1.0 - 1.0 / (1u64 << shifts) as f64
    }
}

#[inline]
pub fn apply_scaling(r: f64, alpha: f64) -> f64 {
    alpha * r
}

/// Variable-to-check message `y + Σ r` over `M{n}\m`, saturated.
pub fn variable_update(y: f64, incoming: &[f64]) -> f64 {
    saturate(y + incoming.iter().sum::<f64>())
}

/// A-posteriori LLR `y + Σ r` over all of `M{n}`, saturated.
pub fn posterior(y: f64, incoming: &[f64]) -> f64 {
    saturate(y + incoming.iter().sum::<f64>())
}

/// Bit 1 iff the LLR is negative.
#[inline]
pub fn hard_decision(llr: f64) -> u8 {
    u8::from(llr < 0.0)
}

/// All outgoing min-sum messages of one check via the two smallest magnitudes.
///
/// Ties for the minimum resolve to the lowest edge position, so a second
/// equal magnitude becomes the runner-up.
pub fn check_update_minsum_batch(q: &[f64], r: &mut [f64]) {
    debug_assert_eq!(q.len(), r.len());
    if q.len() == 1 {
        r[0] = LLR_MAX;
        return;
    }
    let mut min1 = f64::INFINITY;
    let mut min2 = f64::INFINITY;
    let mut argmin = 0;
    let mut total = 1.0;
    for (j, &x) in q.iter().enumerate() {
        total *= sign(x);
        let a = x.abs();
        if a < min1 {
            min2 = min1;
            min1 = a;
            argmin = j;
        } else if a < min2 {
            min2 = a;
        }
    }
    for (j, (out, &x)) in r.iter_mut().zip(q).enumerate() {
        let mag = if j == argmin { min2 } else { min1 };
        *out = total * sign(x) * mag;
    }
}

/// All outgoing tanh-rule messages of one check.
///
/// `scratch` holds the per-edge `tanh(|q|/2)` values. Exclusive products are
/// formed in the same order as [`check_update_spa`], so results are
/// bit-identical to the reference.
pub fn check_update_spa_batch(q: &[f64], r: &mut [f64], scratch: &mut Vec<f64>) {
    debug_assert_eq!(q.len(), r.len());
    match q.len() {
        1 => {
            r[0] = LLR_MAX;
            return;
        }
        2 => {
            r[0] = q[1];
            r[1] = q[0];
            return;
        }
        _ => {}
    }
    scratch.clear();
    scratch.extend(q.iter().map(|x| (0.5 * x.abs()).tanh()));
    let mut total = 1.0;
    for &x in q {
        total *= sign(x);
    }
    for (j, out) in r.iter_mut().enumerate() {
        let mut prod = 1.0;
        for (i, &t) in scratch.iter().enumerate() {
            if i != j {
                prod *= t;
            }
        }
        *out = total * sign(q[j]) * 2.0 * prod.clamp(-1.0 + TANH_EPS, 1.0 - TANH_EPS).atanh();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spa_examples() {
        assert_eq!(check_update_spa(&[1.7]), 1.7);
        assert_eq!(check_update_spa(&[-0.3]), -0.3);
        // 2·atanh(tanh(1)²)
        let t = 1f64.tanh();
        let expect = 2.0 * (t * t).atanh();
        assert!((expect - 1.325_002_747_357_864).abs() < 1e-12);
        assert!((check_update_spa(&[2.0, 2.0]) - expect).abs() < 1e-15);
        let r = check_update_spa(&[2.0, -3.0, 5.0]);
        assert!(r < 0.0 && r.abs() < 2.0, "{r}");
    }

    #[test]
    fn spa_saturates_without_overflow() {
        let r = check_update_spa(&[50.0, 50.0, -50.0]);
        assert!(r.is_finite() && r < 0.0);
        assert!((r + 2.0 * (1.0 - TANH_EPS).atanh()).abs() < 1e-9);
    }

    #[test]
    fn minsum_examples() {
        assert_eq!(check_update_minsum(&[2.0, -3.0, 5.0]), -2.0);
        assert_eq!(check_update_minsum(&[1.0, 1.0]), 1.0);
        assert_eq!(check_update_minsum(&[0.0, -4.0]), 0.0);
    }

    #[test]
    fn minsum_batch_examples() {
        let mut r = [0.0; 3];
        check_update_minsum_batch(&[2.0, -3.0, 5.0], &mut r);
        assert_eq!(r, [-3.0, 2.0, -2.0]);
        check_update_minsum_batch(&[1.0, 1.0, 1.0], &mut r);
        assert_eq!(r, [1.0, 1.0, 1.0]);
        check_update_minsum_batch(&[-1.0, 1.0, 1.0], &mut r);
        assert_eq!(r, [1.0, -1.0, -1.0]);
    }

    #[test]
    fn svs_schedule() {
        let seq: Vec<f64> = (1..=4).map(|i| svs_alpha(i, 1)).collect();
        assert_eq!(seq, vec![0.5, 0.75, 0.875, 0.9375]);
        assert_eq!(svs_alpha(7, 7), 0.5);
        assert_eq!(svs_alpha(8, 7), 0.75);
        assert_eq!(svs_alpha(1000, 7), 1.0);
        assert_eq!(svs_alpha(31, 1), 1.0 - 2f64.powi(-31));
        assert_eq!(svs_alpha(32, 1), 1.0);
    }

    #[test]
    fn scaling_and_node_sums() {
        assert_eq!(apply_scaling(-2.0, 0.9375), -1.875);
        assert_eq!(apply_scaling(3.3, 1.0), 3.3);
        assert_eq!(variable_update(1.0, &[0.5, -0.25]), 1.25);
        assert_eq!(variable_update(-0.7, &[]), -0.7);
        assert_eq!(variable_update(40.0, &[40.0, 40.0]), LLR_MAX);
        assert_eq!(posterior(1.0, &[-2.0]), -1.0);
        assert_eq!(posterior(0.25, &[]), 0.25);
    }

    #[test]
    fn hard_decisions() {
        assert_eq!(hard_decision(-0.1), 1);
        assert_eq!(hard_decision(0.1), 0);
        assert_eq!(hard_decision(0.0), 0);
        assert_eq!(hard_decision(-0.0), 0);
    }
}
