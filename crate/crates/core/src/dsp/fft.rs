//! Iterative radix-2 decimation-in-time FFT.
//!
//! Forward transform is unnormalized, `X[k] = sum_n x[n] e^{-j2 pi k n / N}`; the inverse
//! carries the `1/N` factor so that `ifft(fft(x)) == x`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{check_fft_size, Result};

/// Precomputed twiddles and bit-reversal permutation for one transform size.
#[derive(Debug, Clone)]
pub struct FftPlan {
    n: usize,
    twiddles: Vec<Complex64>,
    bitrev: Vec<usize>,
}

impl FftPlan {
    pub fn new(n: usize) -> Result<Self> {
        check_fft_size(n)?;
        let bits = n.trailing_zeros();
        // Direct evaluation keeps every twiddle within one ulp; a recurrence drifts at N = 4096.
        let twiddles = (0..n / 2)
            .map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64))
            .collect();
        let bitrev = (0..n)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) })
            .collect();
        Ok(Self { n, twiddles, bitrev })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// In-place forward transform. Panics if `buf.len()` differs from the plan size.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.transform(buf, false);
    }

    /// In-place inverse transform, including the `1/N` normalization.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.transform(buf, true);
        let scale = 1.0 / self.n as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }

    fn transform(&self, buf: &mut [Complex64], inverse: bool) {
        assert_eq!(buf.len(), self.n, "buffer length does not match FFT plan");
        let n = self.n;
        for i in 0..n {
            let j = self.bitrev[i];
            if i < j {
                buf.swap(i, j);
            }
        }

        let mut half = 1;
        while half < n {
            let stride = n / (2 * half);
            for start in (0..n).step_by(2 * half) {
                for k in 0..half {
                    let mut w = self.twiddles[k * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
            }
            half *= 2;
        }
    }
}

/// Forward FFT of a slice, allocating a fresh plan.
pub fn fft_vec(samples: &[Complex64]) -> Result<Vec<Complex64>> {
    let plan = FftPlan::new(samples.len())?;
    let mut buf = samples.to_vec();
    plan.forward(&mut buf);
    Ok(buf)
}

/// Inverse FFT of a slice, allocating a fresh plan.
pub fn ifft_vec(samples: &[Complex64]) -> Result<Vec<Complex64>> {
    let plan = FftPlan::new(samples.len())?;
    let mut buf = samples.to_vec();
    plan.inverse(&mut buf);
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(t, &v)| v * Complex64::from_polar(1.0, -2.0 * PI * ((k * t) % n) as f64 / n as f64))
                    .sum()
            })
            .collect()
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(FftPlan::new(12).is_err());
        assert!(FftPlan::new(0).is_err());
        assert!(fft_vec(&[Complex64::new(1.0, 0.0); 6]).is_err());
    }

    #[test]
    fn size_one_and_two() {
        let x = vec![Complex64::new(2.0, -1.0)];
        assert_eq!(fft_vec(&x).unwrap(), x);
        let y = fft_vec(&[Complex64::new(1.0, 0.0), Complex64::new(3.0, 0.0)]).unwrap();
        assert_eq!(y, vec![Complex64::new(4.0, 0.0), Complex64::new(-2.0, 0.0)]);
    }

    #[test]
    fn matches_naive_dft_on_ramp() {
        let x: Vec<Complex64> = (0..32).map(|i| Complex64::new(i as f64, (i * i % 7) as f64)).collect();
        let fast = fft_vec(&x).unwrap();
        let slow = naive_dft(&x);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).norm() < 1e-10);
        }
    }
}
