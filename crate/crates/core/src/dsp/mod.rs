//! Signal-processing kernel: transforms, circular convolution, constellation mapping,
//! oversampling and PAPR measurement.

mod constellation;
mod convolve;
pub mod fft;

use std::ops::Index;

use num_complex::Complex64;

pub use constellation::{map_constellation, Constellation, Modulation};
pub use convolve::{circular_convolve, densify, sparse_circular_convolve, sparse_convolve_into, Tap};
pub(crate) use convolve::accumulate_shifted;
pub use fft::FftPlan;

use crate::error::{check_slm_size, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Time,
    Frequency,
}

/// Power-of-two block of finite complex samples (`N >= 8`) tagged with its domain.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSequence {
    samples: Vec<Complex64>,
    domain: Domain,
}

impl ComplexSequence {
    pub fn new(samples: Vec<Complex64>, domain: Domain) -> Result<Self> {
        check_slm_size(samples.len())?;
        if let Some(i) = samples.iter().position(|s| !s.re.is_finite() || !s.im.is_finite()) {
            return Err(Error::Domain(format!("sample {i} is not finite")));
        }
        Ok(Self { samples, domain })
    }

    pub fn time(samples: Vec<Complex64>) -> Result<Self> {
        Self::new(samples, Domain::Time)
    }

    pub fn frequency(samples: Vec<Complex64>) -> Result<Self> {
        Self::new(samples, Domain::Frequency)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn scaled(&self, alpha: Complex64) -> Self {
        Self {
            samples: self.samples.iter().map(|s| s * alpha).collect(),
            domain: self.domain,
        }
    }

    /// Right cyclic shift: `out[i] = self[(i - k) mod N]`.
    pub fn cyclic_shift(&self, k: usize) -> Self {
        let mut samples = self.samples.clone();
        samples.rotate_right(k % self.len());
        Self { samples, domain: self.domain }
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum()
    }

    /// Largest elementwise distance to `other`; `f64::INFINITY` on length mismatch.
    pub fn max_abs_diff(&self, other: &ComplexSequence) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for ComplexSequence {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.samples[i]
    }
}

/// Unnormalized forward DFT of a time-domain block.
pub fn fft(seq: &ComplexSequence) -> Result<ComplexSequence> {
    if seq.domain != Domain::Time {
        return Err(Error::Domain("fft expects a time-domain sequence".into()));
    }
    let samples = fft::fft_vec(&seq.samples)?;
    ComplexSequence::new(samples, Domain::Frequency)
}

/// Inverse DFT with the `1/N` factor.
pub fn ifft(seq: &ComplexSequence) -> Result<ComplexSequence> {
    if seq.domain != Domain::Frequency {
        return Err(Error::Domain("ifft expects a frequency-domain sequence".into()));
    }
    let samples = fft::ifft_vec(&seq.samples)?;
    ComplexSequence::new(samples, Domain::Time)
}

/// `10 log10(max |x|^2 / mean |x|^2)`.
pub fn papr_db(seq: &ComplexSequence) -> Result<f64> {
    if seq.domain != Domain::Time {
        return Err(Error::Domain("PAPR is measured on time-domain sequences".into()));
    }
    papr_db_samples(&seq.samples)
}

/// Slice form of [`papr_db`], used on the simulation hot path.
pub fn papr_db_samples(samples: &[Complex64]) -> Result<f64> {
    let (peak, total) = samples.iter().fold((0.0f64, 0.0f64), |(peak, total), s| {
        let p = s.norm_sqr();
        (peak.max(p), total + p)
    });
    if total <= 0.0 {
        return Err(Error::Domain("PAPR of an all-zero sequence is undefined".into()));
    }
    Ok(10.0 * (peak * samples.len() as f64 / total).log10())
}

pub const SUPPORTED_OVERSAMPLING: [usize; 4] = [1, 2, 4, 8];

pub(crate) fn check_oversampling(factor: usize) -> Result<()> {
    if !SUPPORTED_OVERSAMPLING.contains(&factor) {
        return Err(Error::Config(format!("oversampling factor {factor} not in {{1, 2, 4, 8}}")));
    }
    Ok(())
}

/// Zero-pads a spectrum to `L*N` bins in the middle of the band.
///
/// Bins `0..N/2` stay at the bottom and bins `N/2..N` move to the top, so bin `k >= N/2`
/// lands at `k + (L-1) N`. The result is scaled by `L` so that the inverse transform samples
/// the same waveform as the length-`N` inverse at the common instants `m = L n`.
pub fn oversample_spectrum(spectrum: &ComplexSequence, factor: usize) -> Result<ComplexSequence> {
    check_oversampling(factor)?;
    if spectrum.domain != Domain::Frequency {
        return Err(Error::Domain("oversampling pads a frequency-domain sequence".into()));
    }
    if factor == 1 {
        return Ok(spectrum.clone());
    }
    let mut out = vec![Complex64::new(0.0, 0.0); spectrum.len() * factor];
    oversample_into(&spectrum.samples, factor, &mut out);
    ComplexSequence::new(out, Domain::Frequency)
}

pub(crate) fn oversample_into(spectrum: &[Complex64], factor: usize, out: &mut [Complex64]) {
    let n = spectrum.len();
    debug_assert_eq!(out.len(), n * factor);
    let scale = factor as f64;
    out.fill(Complex64::new(0.0, 0.0));
    let half = n / 2;
    for k in 0..half {
        out[k] = spectrum[k] * scale;
    }
    let top = n * factor - n;
    for k in half..n {
        out[top + k] = spectrum[k] * scale;
    }
}
