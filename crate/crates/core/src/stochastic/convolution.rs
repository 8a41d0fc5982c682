use std::cell::RefCell;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::algebra::AlgebraError;

use super::{DiscreteDistribution, StochasticError};

/// Default cap on the support length of a convolution result.
pub const DEFAULT_SUPPORT_CAP: usize = 1 << 20;

/// Below this many support points on the shorter operand the direct double
/// sum is used instead of the FFT.
pub const NAIVE_THRESHOLD: usize = 64;

const CLAMP_FLOOR: f64 = -1e-12;
const TRIM_BELOW: f64 = 1e-15;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn check_cap(a: &DiscreteDistribution, b: &DiscreteDistribution, cap: usize) -> Result<usize, StochasticError> {
    let len = a.len() + b.len() - 1;
    if len > cap {
        return Err(AlgebraError::ResourceOverflow { len, cap }.into());
    }
    Ok(len)
}

/// Distribution of the independent sum.
pub fn convolve(
    a: &DiscreteDistribution,
    b: &DiscreteDistribution,
    cap: usize,
) -> Result<DiscreteDistribution, StochasticError> {
    if a.len().min(b.len()) < NAIVE_THRESHOLD {
        naive_convolve(a, b, cap)
    } else {
        fft_convolve(a, b, cap)
    }
}

/// Direct `O(len_a · len_b)` convolution.
pub fn naive_convolve(
    a: &DiscreteDistribution,
    b: &DiscreteDistribution,
    cap: usize,
) -> Result<DiscreteDistribution, StochasticError> {
    let len = check_cap(a, b, cap)?;
    let offset = a.offset() + b.offset();
    if a.len() == 1 {
        return Ok(b.shifted(a.offset()));
    }
    if b.len() == 1 {
        return Ok(a.shifted(b.offset()));
    }
    let pa = a.probabilities();
    let pb = b.probabilities();
    let mut out = vec![0.0; len];
    for (i, x) in pa.iter().enumerate() {
        for (o, y) in out[i..].iter_mut().zip(&pb) {
            *o += x * y;
        }
    }
    Ok(finish(offset, out))
}

/// Convolution through a zero-padded power-of-two complex FFT. Both real
/// inputs are packed into one complex signal so a single forward transform
/// suffices.
pub fn fft_convolve(
    a: &DiscreteDistribution,
    b: &DiscreteDistribution,
    cap: usize,
) -> Result<DiscreteDistribution, StochasticError> {
    let len = check_cap(a, b, cap)?;
    let offset = a.offset() + b.offset();
    let n = len.next_power_of_two();
    let pa = a.probabilities();
    let pb = b.probabilities();
    let mut z = vec![Complex::new(0.0, 0.0); n];
    for (slot, p) in z.iter_mut().zip(&pa) {
        slot.re = *p;
    }
    for (slot, p) in z.iter_mut().zip(&pb) {
        slot.im = *p;
    }
    let (forward, inverse) = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        (p.plan_fft_forward(n), p.plan_fft_inverse(n))
    });
    forward.process(&mut z);
    // With Z = A + iB for real a, b: A_k B_k = (Z_k² − conj(Z_{−k})²) / 4i.
    let quarter_i_inv = Complex::new(0.0, -0.25);
    let mut prod = vec![Complex::new(0.0, 0.0); n];
    for k in 0..n {
        let zk = z[k];
        let zmk = z[(n - k) % n].conj();
        prod[k] = (zk * zk - zmk * zmk) * quarter_i_inv;
    }
    inverse.process(&mut prod);
    let scale = 1.0 / n as f64;
    let out: Vec<f64> = prod[..len].iter().map(|c| c.re * scale).collect();
    Ok(finish(offset, out))
}

/// Clamps round-off negatives, trims negligible ends and renormalizes.
fn finish(offset: i64, mut mass: Vec<f64>) -> DiscreteDistribution {
    for m in mass.iter_mut() {
        if *m < 0.0 {
            debug_assert!(*m >= CLAMP_FLOOR * 1e3, "large negative mass {m}");
            *m = 0.0;
        }
    }
    let first = mass.iter().position(|m| *m >= TRIM_BELOW).unwrap_or(0);
    let last = mass.iter().rposition(|m| *m >= TRIM_BELOW).unwrap_or(mass.len() - 1);
    let kept = &mass[first..=last];
    let total: f64 = kept.iter().sum();
    DiscreteDistribution::from_mass(offset + first as i64, kept, total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_dist(rng: &mut ChaCha8Rng, max_len: usize) -> DiscreteDistribution {
        let len = rng.gen_range(1..=max_len);
        let w: Vec<f64> = (0..len).map(|_| 1.0 - rng.gen::<f64>()).collect();
        let s: f64 = w.iter().sum();
        let p: Vec<f64> = w.iter().map(|x| x / s).collect();
        DiscreteDistribution::from_probabilities(rng.gen_range(-20..20), &p).unwrap()
    }

    fn max_abs_diff(a: &DiscreteDistribution, b: &DiscreteDistribution) -> f64 {
        let lo = a.support_min().min(b.support_min());
        let hi = a.support_max().max(b.support_max());
        (lo..=hi)
            .map(|t| (a.probability(t) - b.probability(t)).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn point_masses_shift() {
        let d = convolve(&DiscreteDistribution::point(1), &DiscreteDistribution::point(2), DEFAULT_SUPPORT_CAP).unwrap();
        assert_eq!(d, DiscreteDistribution::point(3));
        let u = DiscreteDistribution::uniform(0, 1);
        let s = naive_convolve(&u, &DiscreteDistribution::point(5), DEFAULT_SUPPORT_CAP).unwrap();
        assert_eq!(s.offset(), 5);
        assert_eq!(s.probabilities(), vec![0.5, 0.5]);
    }

    #[test]
    fn uniform_pair_matches_hand_sum() {
        let u = DiscreteDistribution::uniform(0, 1);
        let d = convolve(&u, &u, DEFAULT_SUPPORT_CAP).unwrap();
        assert_eq!(d.offset(), 0);
        let p = d.probabilities();
        assert_eq!(p.len(), 3);
        assert!((p[0] - 0.25).abs() < 1e-15);
        assert!((p[1] - 0.5).abs() < 1e-15);
        assert!((p[2] - 0.25).abs() < 1e-15);
        let f = fft_convolve(&u, &u, DEFAULT_SUPPORT_CAP).unwrap();
        assert!(max_abs_diff(&d, &f) < 1e-12);
    }

    #[test]
    fn neutral_element() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = random_dist(&mut rng, 30);
        assert_eq!(convolve(&d, &DiscreteDistribution::point(0), DEFAULT_SUPPORT_CAP).unwrap(), d);
    }

    #[test]
    fn cap_overflow_is_reported() {
        let u = DiscreteDistribution::uniform(0, 9);
        let err = convolve(&u, &u, 10).unwrap_err();
        assert!(matches!(err, StochasticError::Algebra(AlgebraError::ResourceOverflow { len: 19, cap: 10 })));
    }

    #[test]
    fn fft_agrees_with_naive_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let a = random_dist(&mut rng, 200);
            let b = random_dist(&mut rng, 200);
            let n = naive_convolve(&a, &b, DEFAULT_SUPPORT_CAP).unwrap();
            let f = fft_convolve(&a, &b, DEFAULT_SUPPORT_CAP).unwrap();
            assert!(max_abs_diff(&n, &f) <= 1e-9);
            let c = convolve(&a, &b, DEFAULT_SUPPORT_CAP).unwrap();
            assert!(max_abs_diff(&n, &c) <= 1e-9);
        }
    }
}
