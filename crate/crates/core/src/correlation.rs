//! Correlation between the sample powers of two Class III alternatives.
//!
//! For unit-magnitude phase sequences `P_i`, `P_j` the correlation coefficient is taken as
//!
//! ```text
//! rho_ij(tau) = |A(tau)|^2 / N^2,   A(tau) = sum_k P_i(k) conj(P_j(k)) exp(-j 2 pi k tau / N)
//! ```
//!
//! Splitting `k` by residue mod 4 writes `A` as four terms `c_v^(i) conj(c_v^(j)) Abar_v(tau)`.
//! Each `Abar_v` is a sum over `N/4` roots of unity: it vanishes unless `tau + d_v = 0 (mod N/4)`,
//! where `d_v = tau_v^(i) - tau_v^(j)`, and has magnitude `N/4` at the four positions where it
//! does not. Since `sum_tau rho = 1`, a pair whose four spike sets are disjoint spreads its mass
//! over 16 lags and minimizes the variance of `rho`.

use num_complex::Complex64;

use crate::class3::{phase_sequence, ProfileSet, Rotation, ShiftRotationProfile};
use crate::dsp::{ComplexSequence, FftPlan};
use crate::error::{Error, Result};

/// Values below this are reported as zero when counting spikes.
pub const SPIKE_FLOOR: f64 = 1e-9;

/// Per-component cyclic-shift differences `d_v = tau_v^(i) - tau_v^(j) mod N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ShiftDifference {
    n: usize,
    d: [usize; 4],
}

impl ShiftDifference {
    pub fn new(n: usize, d: [i64; 4]) -> Result<Self> {
        crate::error::check_slm_size(n)?;
        Ok(Self { n, d: d.map(|v| v.rem_euclid(n as i64) as usize) })
    }

    pub fn between(a: &ShiftRotationProfile, b: &ShiftRotationProfile) -> Result<Self> {
        check_same_n(a.n(), b.n())?;
        let (ta, tb) = (a.tau(), b.tau());
        Self::new(a.n(), std::array::from_fn(|v| ta[v] as i64 - tb[v] as i64))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> [usize; 4] {
        self.d
    }

    /// Differences reduced mod `N/4`, the quantity the spike positions depend on.
    pub fn reduced(&self) -> [usize; 4] {
        self.d.map(|v| v % (self.n / 4))
    }
}

fn check_same_n(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Size(format!("FFT sizes differ: {a} vs {b}")));
    }
    Ok(())
}

/// `rho(tau)` for every lag of one pair.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationProfile {
    pub rho: Vec<f64>,
    pub pair: (usize, usize),
}

impl CorrelationProfile {
    pub fn sum(&self) -> f64 {
        self.rho.iter().sum()
    }

    pub fn max(&self) -> f64 {
        self.rho.iter().copied().fold(0.0, f64::max)
    }

    pub fn spike_count(&self) -> usize {
        self.rho.iter().filter(|&&r| r > SPIKE_FLOOR).count()
    }

    /// Population variance over the `N` lags.
    pub fn variance(&self) -> f64 {
        let n = self.rho.len() as f64;
        let mean = self.sum() / n;
        self.rho.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / n
    }
}

/// `rho_ij(tau)` for a single lag, by direct summation.
pub fn correlation_coefficient(pi: &ComplexSequence, pj: &ComplexSequence, tau: usize) -> Result<f64> {
    check_same_n(pi.len(), pj.len())?;
    let n = pi.len();
    if tau >= n {
        return Err(Error::Domain(format!("lag {tau} outside [0, {n})")));
    }
    let inner: Complex64 = (0..n)
        .map(|k| {
            let angle = -2.0 * std::f64::consts::PI * ((k * tau) % n) as f64 / n as f64;
            pi[k] * pj[k].conj() * Complex64::from_polar(1.0, angle)
        })
        .sum();
    Ok(inner.norm_sqr() / (n * n) as f64)
}

/// `rho_ij(tau)` for all lags with one forward FFT of `P_i . conj(P_j)`.
pub fn correlation_profile(pi: &ComplexSequence, pj: &ComplexSequence) -> Result<Vec<f64>> {
    check_same_n(pi.len(), pj.len())?;
    let n = pi.len();
    let mut buf: Vec<Complex64> = pi.samples().iter().zip(pj.samples()).map(|(a, b)| a * b.conj()).collect();
    FftPlan::new(n)?.forward(&mut buf);
    let norm = (n * n) as f64;
    Ok(buf.iter().map(|v| v.norm_sqr() / norm).collect())
}

pub fn profile_pair_correlation(
    set: &ProfileSet,
    i: usize,
    j: usize,
) -> Result<CorrelationProfile> {
    let labels = set.labels();
    let profiles = set.profiles();
    let rho = correlation_profile(&phase_sequence(&profiles[i]), &phase_sequence(&profiles[j]))?;
    Ok(CorrelationProfile { rho, pair: (labels[i], labels[j]) })
}

/// `Abar_v(tau)` for component `v` in `1..=4`, evaluated in closed form from the
/// root-of-unity sum: `N/4 * exp(-j 2 pi (v-1) s / N)` when `s = tau + d = 0 (mod N/4)`,
/// exactly zero otherwise.
pub fn a_bar_component(component: usize, d: usize, tau: usize, n: usize) -> Result<Complex64> {
    if !(1..=4).contains(&component) {
        return Err(Error::Domain(format!("component index {component} not in 1..=4")));
    }
    crate::error::check_slm_size(n)?;
    let quarter = n / 4;
    let s = (tau + d) % n;
    if !s.is_multiple_of(quarter) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let m = (s / quarter) as i64;
    let phase = Rotation::from_quarter_turns(-((component as i64 - 1) * m));
    Ok(phase.to_complex() * quarter as f64)
}

/// `A(tau)` assembled from the four rotated `Abar` components.
pub fn a_tau(pi: &ShiftRotationProfile, pj: &ShiftRotationProfile, tau: usize) -> Result<Complex64> {
    let diff = ShiftDifference::between(pi, pj)?;
    let (ci, cj) = (pi.rotations(), pj.rotations());
    let mut total = Complex64::new(0.0, 0.0);
    for v in 0..4 {
        let rotation = (ci[v] * cj[v].conj()).to_complex();
        total += rotation * a_bar_component(v + 1, diff.d[v], tau % pi.n(), pi.n())?;
    }
    Ok(total)
}

/// The four nonzero lags of every `Abar_v` and the value there.
#[derive(Debug, Clone, PartialEq)]
pub struct SpikeTable {
    n: usize,
    diff: ShiftDifference,
    rows: [[(usize, Complex64); 4]; 4],
}

impl SpikeTable {
    /// Row `v` (0-based) lists lags `m N/4 - d_v mod N` for `m = 0..4`, in that order.
    pub fn rows(&self) -> &[[(usize, Complex64); 4]; 4] {
        &self.rows
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn positions(&self, component: usize) -> [usize; 4] {
        self.rows[component].map(|(tau, _)| tau)
    }

    /// Number of distinct lags over all 16 entries; 16 means no two components collide.
    pub fn distinct_positions(&self) -> usize {
        let mut all: Vec<usize> = self.rows.iter().flat_map(|r| r.iter().map(|&(t, _)| t)).collect();
        all.sort_unstable();
        all.dedup();
        all.len()
    }

    /// Component pairs `(v, w)` (1-based, `v < w`) whose spike lags coincide.
    pub fn shared_components(&self) -> Vec<(usize, usize)> {
        let red = self.diff.reduced();
        let mut out = Vec::new();
        for v in 0..4 {
            for w in v + 1..4 {
                if red[v] == red[w] {
                    out.push((v + 1, w + 1));
                }
            }
        }
        out
    }
}

pub fn spike_table(diff: &ShiftDifference) -> Result<SpikeTable> {
    let n = diff.n;
    let quarter = n / 4;
    let mut rows = [[(0usize, Complex64::new(0.0, 0.0)); 4]; 4];
    for (v, row) in rows.iter_mut().enumerate() {
        for (m, entry) in row.iter_mut().enumerate() {
            let tau = (m * quarter + n - diff.d[v]) % n;
            *entry = (tau, a_bar_component(v + 1, diff.d[v], tau, n)?);
        }
    }
    Ok(SpikeTable { n, diff: *diff, rows })
}

/// Correlation summary of one pair of profiles.
#[derive(Debug, Clone, PartialEq)]
pub struct PairStats {
    pub pair: (usize, usize),
    pub spikes: usize,
    pub max_rho: f64,
    pub variance: f64,
    /// `sum_tau rho - 1`.
    pub parseval_residual: f64,
}

/// Statistics for every pair `i < j` of the set, in lexicographic order.
pub fn pair_statistics(set: &ProfileSet) -> Result<Vec<PairStats>> {
    let phases: Vec<ComplexSequence> = set.profiles().iter().map(phase_sequence).collect();
    let labels = set.labels();
    let mut out = Vec::with_capacity(set.len() * set.len().saturating_sub(1) / 2);
    for i in 0..phases.len() {
        for j in i + 1..phases.len() {
            let profile = CorrelationProfile {
                rho: correlation_profile(&phases[i], &phases[j])?,
                pair: (labels[i], labels[j]),
            };
            out.push(PairStats {
                pair: profile.pair,
                spikes: profile.spike_count(),
                max_rho: profile.max(),
                variance: profile.variance(),
                parseval_residual: profile.sum() - 1.0,
            });
        }
    }
    Ok(out)
}

/// Mean over all `C(U, 2)` pairs of the variance of `rho_ij(tau)` over `tau`.
pub fn variance_of_correlation(set: &ProfileSet) -> Result<f64> {
    if set.len() < 2 {
        return Err(Error::Domain("variance of correlation needs at least two profiles".into()));
    }
    let stats = pair_statistics(set)?;
    Ok(stats.iter().map(|s| s.variance).sum::<f64>() / stats.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(n: usize) -> ComplexSequence {
        ComplexSequence::frequency(vec![Complex64::new(1.0, 0.0); n]).unwrap()
    }

    #[test]
    fn self_correlation_at_zero_lag() {
        let p = ones(64);
        assert!((correlation_coefficient(&p, &p, 0).unwrap() - 1.0).abs() < 1e-12);
        assert!(correlation_coefficient(&p, &p, 3).unwrap() < 1e-20);
        assert!(correlation_coefficient(&p, &p, 64).is_err());
        assert!(correlation_coefficient(&p, &ones(32), 0).is_err());
    }

    #[test]
    fn a_bar_bounds() {
        assert!(a_bar_component(0, 0, 0, 16).is_err());
        assert!(a_bar_component(5, 0, 0, 16).is_err());
        assert_eq!(a_bar_component(1, 3, 13, 16).unwrap(), Complex64::new(4.0, 0.0));
        assert_eq!(a_bar_component(1, 3, 12, 16).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn identical_profiles_give_a_equal_n() {
        let p = ShiftRotationProfile::new(32, [1, 2, 3, 4], [Rotation::J, Rotation::One, Rotation::MinusJ, Rotation::One]).unwrap();
        assert_eq!(a_tau(&p, &p, 0).unwrap(), Complex64::new(32.0, 0.0));
    }

    #[test]
    fn fully_shared_table() {
        let table = spike_table(&ShiftDifference::new(64, [0; 4]).unwrap()).unwrap();
        for v in 0..4 {
            assert_eq!(table.positions(v), [0, 16, 32, 48]);
        }
        assert_eq!(table.distinct_positions(), 4);
        assert_eq!(table.shared_components().len(), 6);
    }

    #[test]
    fn disjoint_table() {
        let table = spike_table(&ShiftDifference::new(64, [0, 1, 2, 3]).unwrap()).unwrap();
        assert_eq!(table.distinct_positions(), 16);
        assert!(table.shared_components().is_empty());
        for (_, value) in table.rows()[0] {
            assert_eq!(value, Complex64::new(16.0, 0.0));
        }
    }

    #[test]
    fn variance_needs_two() {
        let set = ProfileSet::new(16, vec![ShiftRotationProfile::identity(16).unwrap()]).unwrap();
        assert!(matches!(variance_of_correlation(&set), Err(Error::Domain(_))));
    }
}
