use num_complex::Complex64;

use super::{ComplexSequence, Domain};
use crate::dsp::fft::FftPlan;
use crate::error::{Error, Result};

/// One nonzero entry of a sparse circular-convolution kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tap {
    pub offset: usize,
    pub gain: Complex64,
}

impl Tap {
    pub fn new(offset: usize, gain: Complex64) -> Self {
        Self { offset, gain }
    }
}

/// Expands a tap list into a dense length-`n` kernel. Coinciding offsets add.
pub fn densify(taps: &[Tap], n: usize) -> Result<Vec<Complex64>> {
    let mut dense = vec![Complex64::new(0.0, 0.0); n];
    for tap in taps {
        if tap.offset >= n {
            return Err(Error::Domain(format!("tap offset {} outside [0, {n})", tap.offset)));
        }
        dense[tap.offset] += tap.gain;
    }
    Ok(dense)
}

fn require_time(seq: &ComplexSequence, what: &str) -> Result<()> {
    if seq.domain() != Domain::Time {
        return Err(Error::Domain(format!("{what} must be a time-domain sequence")));
    }
    Ok(())
}

/// N-point circular convolution `out[n] = sum_m a[m] b[(n - m) mod N]`, evaluated through
/// the FFT.
pub fn circular_convolve(a: &ComplexSequence, b: &ComplexSequence) -> Result<ComplexSequence> {
    require_time(a, "first operand")?;
    require_time(b, "second operand")?;
    if a.len() != b.len() {
        return Err(Error::Size(format!("length mismatch: {} vs {}", a.len(), b.len())));
    }
    let plan = FftPlan::new(a.len())?;
    let mut fa = a.samples().to_vec();
    let mut fb = b.samples().to_vec();
    plan.forward(&mut fa);
    plan.forward(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    plan.inverse(&mut fa);
    ComplexSequence::new(fa, Domain::Time)
}

/// Circular convolution against a kernel given as a short tap list, in `O(N * taps)`.
pub fn sparse_circular_convolve(x: &ComplexSequence, taps: &[Tap]) -> Result<ComplexSequence> {
    require_time(x, "input")?;
    if taps.is_empty() {
        return Err(Error::Domain("tap list is empty".into()));
    }
    let n = x.len();
    if let Some(bad) = taps.iter().find(|t| t.offset >= n) {
        return Err(Error::Domain(format!("tap offset {} outside [0, {n})", bad.offset)));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    sparse_convolve_into(x.samples(), taps, &mut out);
    ComplexSequence::new(out, Domain::Time)
}

/// Slice kernel behind [`sparse_circular_convolve`]. Offsets must already be `< x.len()`.
pub fn sparse_convolve_into(x: &[Complex64], taps: &[Tap], out: &mut [Complex64]) {
    let n = x.len();
    debug_assert_eq!(out.len(), n);
    out.fill(Complex64::new(0.0, 0.0));
    for tap in taps {
        accumulate_shifted(x, tap.offset, tap.gain, out);
    }
}

/// `out[i] += gain * x[(i - shift) mod N]`, written as two contiguous runs.
#[inline]
pub(crate) fn accumulate_shifted(x: &[Complex64], shift: usize, gain: Complex64, out: &mut [Complex64]) {
    let n = x.len();
    let (head, tail) = x.split_at(n - shift);
    for (o, v) in out[shift..].iter_mut().zip(head) {
        *o += gain * v;
    }
    for (o, v) in out[..shift].iter_mut().zip(tail) {
        *o += gain * v;
    }
}
