//! Class III selected mapping.
//!
//! Four sparse base vectors `p_1..p_4` (four nonzero entries each, spaced `N/4` apart) are
//! cyclically shifted and rotated and summed into a conversion vector `p(u)`; circular
//! convolution of the single IFFT output `x` with `p(u)` yields alternative `u`. In the
//! frequency domain `FFT{p_v}` is `4` times the indicator of subcarriers `k = v-1 (mod 4)`, so
//! the same alternative is `IFFT{4 P(u) . X}` with the unit-magnitude phase sequence
//! `P(u)(k) = c_m exp(-j 2 pi k tau_m / N)`, `m - 1 = k mod 4`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;

use crate::dsp::{
    self, accumulate_shifted, sparse_circular_convolve, ComplexSequence, Domain, FftPlan, Tap,
};
use crate::error::{check_slm_size, Error, Result};

/// A fourth root of unity, stored as a count of quarter turns so products stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rotation {
    One,
    J,
    MinusOne,
    MinusJ,
}

impl Rotation {
    pub const ALL: [Rotation; 4] = [Rotation::One, Rotation::J, Rotation::MinusOne, Rotation::MinusJ];

    pub fn from_quarter_turns(k: i64) -> Self {
        Self::ALL[k.rem_euclid(4) as usize]
    }

    pub fn quarter_turns(self) -> i64 {
        match self {
            Rotation::One => 0,
            Rotation::J => 1,
            Rotation::MinusOne => 2,
            Rotation::MinusJ => 3,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        let (re, im) = self.gaussian();
        Complex64::new(re as f64, im as f64)
    }

    /// Exact value as a Gaussian integer `(re, im)`.
    pub fn gaussian(self) -> (i64, i64) {
        match self {
            Rotation::One => (1, 0),
            Rotation::J => (0, 1),
            Rotation::MinusOne => (-1, 0),
            Rotation::MinusJ => (0, -1),
        }
    }

    pub fn conj(self) -> Rotation {
        Self::from_quarter_turns(-self.quarter_turns())
    }
}

impl std::ops::Mul for Rotation {
    type Output = Rotation;

    // Quarter turns add under multiplication.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, other: Rotation) -> Rotation {
        Self::from_quarter_turns(self.quarter_turns() + other.quarter_turns())
    }
}

impl fmt::Display for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rotation::One => "1",
            Rotation::J => "j",
            Rotation::MinusOne => "-1",
            Rotation::MinusJ => "-j",
        })
    }
}

impl FromStr for Rotation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(Rotation::One),
            "j" => Ok(Rotation::J),
            "-1" => Ok(Rotation::MinusOne),
            "-j" => Ok(Rotation::MinusJ),
            other => Err(Error::Domain(format!("'{other}' is not one of 1, -1, j, -j"))),
        }
    }
}

/// Gains of `p_v` at offsets `0, N/4, 2N/4, 3N/4`: `p_v[q N/4] = j^{(v-1) q}`.
pub fn base_gain(component: usize, q: usize) -> Rotation {
    Rotation::from_quarter_turns((component * q) as i64)
}

/// Cyclic shifts `tau_1..tau_4` in `[0, N/4)` and rotations `c_1..c_4` of one alternative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ShiftRotationProfile {
    n: usize,
    tau: [usize; 4],
    c: [Rotation; 4],
}

impl ShiftRotationProfile {
    pub fn new(n: usize, tau: [usize; 4], c: [Rotation; 4]) -> Result<Self> {
        check_slm_size(n)?;
        let quarter = n / 4;
        if let Some((i, t)) = tau.iter().enumerate().find(|(_, &t)| t >= quarter) {
            return Err(Error::Domain(format!(
                "tau_{} = {t} outside [0, {quarter}) for N = {n}",
                i + 1
            )));
        }
        Ok(Self { n, tau, c })
    }

    /// All shifts zero, all rotations one: the conversion vector collapses to `4 delta`.
    pub fn identity(n: usize) -> Result<Self> {
        Self::new(n, [0; 4], [Rotation::One; 4])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> [usize; 4] {
        self.tau
    }

    pub fn rotations(&self) -> [Rotation; 4] {
        self.c
    }
}

/// `U` profiles over one FFT size, each with an integer label (`u` in the profile file).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileSet {
    n: usize,
    labels: Vec<usize>,
    profiles: Vec<ShiftRotationProfile>,
}

impl ProfileSet {
    /// Labels the profiles `1..=U`.
    pub fn new(n: usize, profiles: Vec<ShiftRotationProfile>) -> Result<Self> {
        let labels = (1..=profiles.len()).collect();
        Self::with_labels(n, labels, profiles)
    }

    /// Duplicate profiles are accepted so that degenerate sets can still be analysed; see
    /// [`ProfileSet::is_distinct`].
    pub fn with_labels(n: usize, labels: Vec<usize>, profiles: Vec<ShiftRotationProfile>) -> Result<Self> {
        check_slm_size(n)?;
        if profiles.is_empty() {
            return Err(Error::Domain("a profile set needs at least one profile".into()));
        }
        if labels.len() != profiles.len() {
            return Err(Error::Consistency(format!(
                "{} labels for {} profiles",
                labels.len(),
                profiles.len()
            )));
        }
        if let Some((label, p)) = labels.iter().zip(&profiles).find(|(_, p)| p.n != n) {
            return Err(Error::Consistency(format!(
                "profile {label} has N = {} but the set has N = {n}",
                p.n
            )));
        }
        Ok(Self { n, labels, profiles })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn profiles(&self) -> &[ShiftRotationProfile] {
        &self.profiles
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &ShiftRotationProfile)> {
        self.labels.iter().copied().zip(&self.profiles)
    }

    pub fn is_distinct(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.profiles.iter().all(|p| seen.insert(*p))
    }

    /// Puts the identity profile (label 0) in front, so the unmodified symbol is a candidate.
    pub fn with_identity_first(&self) -> Self {
        let mut labels = vec![0];
        labels.extend(&self.labels);
        let mut profiles = vec![ShiftRotationProfile::identity(self.n).expect("set N already validated")];
        profiles.extend(&self.profiles);
        Self { n: self.n, labels, profiles }
    }

    pub fn truncated(&self, len: usize) -> Self {
        Self {
            n: self.n,
            labels: self.labels[..len.min(self.len())].to_vec(),
            profiles: self.profiles[..len.min(self.len())].to_vec(),
        }
    }
}

/// The four time-domain base vectors `p_1..p_4`.
pub fn base_vectors(n: usize) -> Result<[ComplexSequence; 4]> {
    check_slm_size(n)?;
    let quarter = n / 4;
    let make = |component: usize| {
        let mut samples = vec![Complex64::new(0.0, 0.0); n];
        for q in 0..4 {
            samples[q * quarter] = base_gain(component, q).to_complex();
        }
        ComplexSequence::time(samples)
    };
    Ok([make(0)?, make(1)?, make(2)?, make(3)?])
}

/// Taps of `p(u) = sum_i c_i p_i<tau_i>`. Coinciding offsets are summed exactly and dropped
/// when they cancel; taps come back ordered by offset.
pub fn conversion_vector(profile: &ShiftRotationProfile) -> Vec<Tap> {
    conversion_vector_at(profile, 1)
}

/// Conversion vector for a signal oversampled by `factor`: every offset is scaled by the
/// factor, which realizes the same phase sequence on the `factor * N` grid.
pub fn conversion_vector_at(profile: &ShiftRotationProfile, factor: usize) -> Vec<Tap> {
    let quarter = profile.n / 4;
    let mut acc: BTreeMap<usize, (i64, i64)> = BTreeMap::new();
    for (component, (&tau, &c)) in profile.tau.iter().zip(&profile.c).enumerate() {
        for q in 0..4 {
            let offset = (tau + q * quarter) * factor;
            let (re, im) = (c * base_gain(component, q)).gaussian();
            let e = acc.entry(offset).or_insert((0, 0));
            e.0 += re;
            e.1 += im;
        }
    }
    acc.into_iter()
        .filter(|&(_, g)| g != (0, 0))
        .map(|(offset, (re, im))| Tap::new(offset, Complex64::new(re as f64, im as f64)))
        .collect()
}

/// Unit-magnitude phase sequence `P(u)`.
pub fn phase_sequence(profile: &ShiftRotationProfile) -> ComplexSequence {
    let n = profile.n;
    let samples = (0..n)
        .map(|k| {
            let m = k % 4;
            // Reduce k*tau mod N before scaling so the angle stays in [0, 2 pi).
            let angle = -2.0 * PI * ((k * profile.tau[m]) % n) as f64 / n as f64;
            profile.c[m].to_complex() * Complex64::from_polar(1.0, angle)
        })
        .collect();
    ComplexSequence::new(samples, Domain::Frequency).expect("profile N already validated")
}

fn check_len(len: usize, profile: &ShiftRotationProfile) -> Result<()> {
    if len != profile.n {
        return Err(Error::Size(format!(
            "sequence length {len} does not match profile N = {}",
            profile.n
        )));
    }
    Ok(())
}

/// Alternative signal by sparse circular convolution of the OFDM symbol with `p(u)`.
pub fn generate_alternative_time(x: &ComplexSequence, profile: &ShiftRotationProfile) -> Result<ComplexSequence> {
    check_len(x.len(), profile)?;
    sparse_circular_convolve(x, &conversion_vector(profile))
}

/// `4 P(u) . X`: the spectrum of alternative `u`.
pub fn alternative_spectrum(spectrum: &ComplexSequence, profile: &ShiftRotationProfile) -> Result<ComplexSequence> {
    if spectrum.domain() != Domain::Frequency {
        return Err(Error::Domain("expected a frequency-domain symbol".into()));
    }
    check_len(spectrum.len(), profile)?;
    let phase = phase_sequence(profile);
    let samples = spectrum
        .samples()
        .iter()
        .zip(phase.samples())
        .map(|(x, p)| 4.0 * p * x)
        .collect();
    ComplexSequence::new(samples, Domain::Frequency)
}

/// Reference path: `IFFT{4 P(u) . X}`.
pub fn generate_alternative_freq(spectrum: &ComplexSequence, profile: &ShiftRotationProfile) -> Result<ComplexSequence> {
    dsp::ifft(&alternative_spectrum(spectrum, profile)?)
}

/// Phase sequences for conventional SLM: the all-ones sequence followed by `U - 1` sequences
/// with i.i.d. entries drawn uniformly from `{1, -1, j, -j}`.
pub fn conventional_slm_phases<R: Rng + ?Sized>(n: usize, count: usize, rng: &mut R) -> Result<Vec<ComplexSequence>> {
    check_slm_size(n)?;
    if count == 0 {
        return Err(Error::Config("conventional SLM needs U >= 1".into()));
    }
    let mut out = Vec::with_capacity(count);
    out.push(ComplexSequence::frequency(vec![Complex64::new(1.0, 0.0); n])?);
    for _ in 1..count {
        let samples = (0..n)
            .map(|_| Rotation::from_quarter_turns(rng.gen_range(0..4)).to_complex())
            .collect();
        out.push(ComplexSequence::frequency(samples)?);
    }
    Ok(out)
}

/// The four partial signals `z_v = p_v (*) x` of one (possibly oversampled) OFDM symbol.
///
/// Each carries the subcarriers `k = v-1 (mod 4)` with gain 4, so any Class III alternative is
/// `sum_v c_v z_v<L tau_v>` and costs four shifted accumulations instead of a transform.
#[derive(Debug, Clone)]
pub struct PartitionBank {
    n: usize,
    factor: usize,
    parts: [Vec<Complex64>; 4],
}

impl PartitionBank {
    /// `time` is the OFDM symbol sampled on the `factor * n` grid.
    pub fn new(time: &[Complex64], n: usize, factor: usize) -> Result<Self> {
        check_slm_size(n)?;
        dsp::check_oversampling(factor)?;
        if time.len() != n * factor {
            return Err(Error::Size(format!(
                "expected {} samples for N = {n}, L = {factor}, got {}",
                n * factor,
                time.len()
            )));
        }
        let quarter = time.len() / 4;
        let make = |component: usize| {
            let mut out = vec![Complex64::new(0.0, 0.0); time.len()];
            for q in 0..4 {
                accumulate_shifted(time, q * quarter, base_gain(component, q).to_complex(), &mut out);
            }
            out
        };
        Ok(Self { n, factor, parts: [make(0), make(1), make(2), make(3)] })
    }

    /// Builds the bank from a frequency-domain symbol with one inverse transform.
    pub fn from_spectrum(spectrum: &ComplexSequence, factor: usize) -> Result<Self> {
        let padded = dsp::oversample_spectrum(spectrum, factor)?;
        let plan = FftPlan::new(padded.len())?;
        let mut time = padded.into_samples();
        plan.inverse(&mut time);
        Self::new(&time, spectrum.len(), factor)
    }

    pub fn len(&self) -> usize {
        self.n * self.factor
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn part(&self, component: usize) -> &[Complex64] {
        &self.parts[component]
    }

    /// Writes alternative `profile` into `out` (length `L N`).
    pub fn alternative_into(&self, profile: &ShiftRotationProfile, out: &mut [Complex64]) -> Result<()> {
        check_len(self.n, profile)?;
        if out.len() != self.len() {
            return Err(Error::Size(format!("output buffer has {} samples, expected {}", out.len(), self.len())));
        }
        out.fill(Complex64::new(0.0, 0.0));
        for (component, (&tau, &c)) in profile.tau.iter().zip(&profile.c).enumerate() {
            accumulate_shifted(&self.parts[component], tau * self.factor, c.to_complex(), out);
        }
        Ok(())
    }

    pub fn alternative(&self, profile: &ShiftRotationProfile) -> Result<ComplexSequence> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.len()];
        self.alternative_into(profile, &mut out)?;
        ComplexSequence::time(out)
    }

    /// Total energy of every alternative: the phase sequences have unit magnitude, so it is
    /// 16 times the energy of the symbol itself.
    pub fn alternative_energy(&self) -> f64 {
        // z_1 + .. + z_4 = 4 x, and the z_v occupy disjoint subcarriers.
        self.parts.iter().map(|z| z.iter().map(|v| v.norm_sqr()).sum::<f64>()).sum()
    }

    /// Peak power `max |x(u)|^2` of an alternative without materializing it.
    ///
    /// Returns `None` as soon as the running peak exceeds `abort_above`; pass
    /// `f64::INFINITY` to always get the peak.
    pub fn peak_power(&self, profile: &ShiftRotationProfile, abort_above: f64) -> Option<f64> {
        debug_assert_eq!(profile.n, self.n);
        let len = self.len();
        let shifts = profile.tau.map(|t| t * self.factor);
        let rot = profile.c;

        // Between consecutive shift values every component reads one contiguous run.
        let mut cuts = [0, shifts[0], shifts[1], shifts[2], shifts[3], len];
        cuts.sort_unstable();
        let mut peak = 0.0f64;
        for seg in cuts.windows(2) {
            let (start, end) = (seg[0], seg[1]);
            if start == end {
                continue;
            }
            let run = |v: usize| {
                let base = if start >= shifts[v] { start - shifts[v] } else { start + len - shifts[v] };
                &self.parts[v][base..base + (end - start)]
            };
            let (a, b, c, d) = (run(0), run(1), run(2), run(3));
            for chunk_start in (0..end - start).step_by(64) {
                let chunk_end = (chunk_start + 64).min(end - start);
                for i in chunk_start..chunk_end {
                    let s = rotate(a[i], rot[0]) + rotate(b[i], rot[1]) + rotate(c[i], rot[2]) + rotate(d[i], rot[3]);
                    peak = peak.max(s.norm_sqr());
                }
                if peak > abort_above {
                    return None;
                }
            }
        }
        Some(peak)
    }
}

#[inline(always)]
fn rotate(v: Complex64, r: Rotation) -> Complex64 {
    match r {
        Rotation::One => v,
        Rotation::J => Complex64::new(-v.im, v.re),
        Rotation::MinusOne => -v,
        Rotation::MinusJ => Complex64::new(v.im, -v.re),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rotation_algebra() {
        assert_eq!(Rotation::J * Rotation::J, Rotation::MinusOne);
        assert_eq!(Rotation::J.conj(), Rotation::MinusJ);
        for r in Rotation::ALL {
            assert_eq!(r.to_string().parse::<Rotation>().unwrap(), r);
            assert!((r.to_complex().norm() - 1.0).abs() < 1e-15);
        }
        assert!("i".parse::<Rotation>().is_err());
    }

    #[test]
    fn profile_validation() {
        assert!(ShiftRotationProfile::new(64, [0, 15, 3, 0], [Rotation::One; 4]).is_ok());
        assert!(matches!(
            ShiftRotationProfile::new(64, [0, 16, 3, 0], [Rotation::One; 4]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(ShiftRotationProfile::new(4, [0; 4], [Rotation::One; 4]), Err(Error::Size(_))));
        assert!(ShiftRotationProfile::new(48, [0; 4], [Rotation::One; 4]).is_err());
    }

    #[test]
    fn profile_set_checks() {
        let a = ShiftRotationProfile::identity(16).unwrap();
        let b = ShiftRotationProfile::identity(32).unwrap();
        assert!(matches!(ProfileSet::new(16, vec![a, b]), Err(Error::Consistency(_))));
        assert!(ProfileSet::new(16, vec![]).is_err());
        let dup = ProfileSet::new(16, vec![a, a]).unwrap();
        assert!(!dup.is_distinct());
        let with_id = ProfileSet::new(16, vec![ShiftRotationProfile::new(16, [0, 1, 2, 3], [Rotation::One; 4]).unwrap()])
            .unwrap()
            .with_identity_first();
        assert_eq!(with_id.labels(), &[0, 1]);
        assert!(with_id.is_distinct());
    }

    #[test]
    fn p2_at_n8() {
        let [_, p2, _, _] = base_vectors(8).unwrap();
        let want = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(0.0, -1.0), c(0.0, 0.0)];
        assert_eq!(p2.samples(), &want);
    }

    #[test]
    fn base_vectors_sum_to_scaled_delta() {
        let ps = base_vectors(32).unwrap();
        for i in 0..32 {
            let s: Complex64 = ps.iter().map(|p| p[i]).sum();
            let want = if i == 0 { c(4.0, 0.0) } else { c(0.0, 0.0) };
            assert_eq!(s, want);
        }
    }

    #[test]
    fn identity_conversion_vector_is_single_tap() {
        let taps = conversion_vector(&ShiftRotationProfile::identity(64).unwrap());
        assert_eq!(taps, vec![Tap::new(0, c(4.0, 0.0))]);
    }

    #[test]
    fn conversion_vector_with_partial_overlap() {
        // Densified oracle: sum of shifted, rotated base vectors written out by hand.
        let profile = ShiftRotationProfile::new(8, [0, 1, 0, 0], [Rotation::One; 4]).unwrap();
        let taps = conversion_vector(&profile);
        let expected = vec![
            Tap::new(0, c(3.0, 0.0)),
            Tap::new(1, c(1.0, 0.0)),
            Tap::new(2, c(0.0, -1.0)),
            Tap::new(3, c(0.0, 1.0)),
            Tap::new(4, c(1.0, 0.0)),
            Tap::new(5, c(-1.0, 0.0)),
            Tap::new(6, c(0.0, 1.0)),
            Tap::new(7, c(0.0, -1.0)),
        ];
        assert_eq!(taps, expected);
    }

    #[test]
    fn phase_sequence_direct_values() {
        let p = phase_sequence(&ShiftRotationProfile::identity(16).unwrap());
        assert!(p.samples().iter().all(|&v| v == c(1.0, 0.0)));

        let profile = ShiftRotationProfile::new(8, [0, 1, 0, 0], [Rotation::One; 4]).unwrap();
        let p = phase_sequence(&profile);
        assert!((p[1] - Complex64::from_polar(1.0, -PI / 4.0)).norm() < 1e-15);
        assert!((p[5] - Complex64::from_polar(1.0, -5.0 * PI / 4.0)).norm() < 1e-15);
        for k in [0, 2, 3, 4, 6, 7] {
            assert_eq!(p[k], c(1.0, 0.0));
        }
    }

    #[test]
    fn identity_alternative_is_four_x() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = ComplexSequence::time((0..32).map(|_| c(rng.gen(), rng.gen())).collect()).unwrap();
        let id = ShiftRotationProfile::identity(32).unwrap();
        let y = generate_alternative_time(&x, &id).unwrap();
        assert!(y.max_abs_diff(&x.scaled(c(4.0, 0.0))) < 1e-15);

        let spec = dsp::fft(&x).unwrap();
        let z = generate_alternative_freq(&spec, &id).unwrap();
        assert!(z.max_abs_diff(&x.scaled(c(4.0, 0.0))) < 1e-12);
    }

    #[test]
    fn size_mismatch_errors() {
        let x = ComplexSequence::time(vec![c(1.0, 0.0); 16]).unwrap();
        let p = ShiftRotationProfile::identity(32).unwrap();
        assert!(matches!(generate_alternative_time(&x, &p), Err(Error::Size(_))));
        let spec = dsp::fft(&x).unwrap();
        assert!(matches!(generate_alternative_freq(&spec, &p), Err(Error::Size(_))));
        assert!(PartitionBank::new(x.samples(), 16, 2).is_err());
    }

    #[test]
    fn conventional_phases() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let one = conventional_slm_phases(16, 1, &mut rng).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one[0].samples().iter().all(|&v| v == c(1.0, 0.0)));
        let many = conventional_slm_phases(16, 5, &mut rng).unwrap();
        assert!(many.iter().flat_map(|s| s.samples()).all(|v| (v.norm() - 1.0).abs() < 1e-15));
        assert!(conventional_slm_phases(16, 0, &mut rng).is_err());
    }
}
