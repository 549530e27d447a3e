//! Seeded Monte Carlo estimation of PAPR CCDF curves.
//!
//! A trial draws one random OFDM symbol, builds the scheme's candidate signals and keeps the
//! smallest PAPR. Trials are independent: trial `t` reads only its own random stream, so the
//! collected PAPR samples (and every curve derived from them) are identical for any number
//! of worker threads.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::class3::{conventional_slm_phases, PartitionBank, ProfileSet};
use crate::dsp::{self, papr_db_samples, Constellation, FftPlan, Modulation};
use crate::error::{check_slm_size, Error, Result};
use crate::rng::{derive_seed, derive_substream};
use crate::selection::{ds_profiles, random_profiles, sel1_profiles, sel2_profiles};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Unmodified OFDM, one candidate.
    Plain,
    /// Conventional SLM: `U` phase sequences, one IFFT each.
    ConvSlm,
    /// Class III SLM with random shifts and rotations.
    C3Random,
    DsOpt,
    DsSel1,
    DsSel2,
}

impl Scheme {
    pub const ALL: [Scheme; 6] =
        [Scheme::Plain, Scheme::ConvSlm, Scheme::C3Random, Scheme::DsOpt, Scheme::DsSel1, Scheme::DsSel2];

    pub fn label(self) -> &'static str {
        match self {
            Scheme::Plain => "plain",
            Scheme::ConvSlm => "conv-slm",
            Scheme::C3Random => "c3-random",
            Scheme::DsOpt => "ds-opt",
            Scheme::DsSel1 => "ds-sel1",
            Scheme::DsSel2 => "ds-sel2",
        }
    }

    pub fn is_deterministic_selection(self) -> bool {
        matches!(self, Scheme::DsOpt | Scheme::DsSel1 | Scheme::DsSel2)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|scheme| scheme.label() == s)
            .ok_or_else(|| Error::Config(format!("unknown scheme '{s}'")))
    }
}

/// How the random streams of different schemes relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Seeding {
    /// Every scheme sees the same OFDM symbol in trial `t`.
    #[default]
    Paired,
    /// Symbol streams are derived from the scheme label as well.
    Independent,
}

/// When the random Class III profiles are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RandomDraw {
    /// One set per experiment seed.
    #[default]
    Fixed,
    /// A fresh set for every OFDM symbol.
    PerSymbol,
}

pub const DEFAULT_TRIALS: usize = 100_000;

/// Threshold grid `min, min + step, ..., max` (inclusive), rounded to 1e-9 dB so that the
/// printed values are stable.
pub fn gamma_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && step.is_finite()) || step <= 0.0 || max < min {
        return Err(Error::Config(format!("invalid gamma grid {min}..{max} step {step}")));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| ((min + i as f64 * step) * 1e9).round() / 1e9).collect())
}

pub fn default_gamma_grid() -> Vec<f64> {
    gamma_grid(5.0, 12.0, 0.1).expect("static grid")
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    pub n: usize,
    /// Number of candidate signals `U`.
    pub alternatives: usize,
    pub modulation: Modulation,
    pub scheme: Scheme,
    pub trials: usize,
    /// Master seed; per-scheme seeds are derived from it and the scheme label.
    pub seed: u64,
    pub oversample: usize,
    pub gamma_grid: Vec<f64>,
    pub seeding: Seeding,
    pub random_draw: RandomDraw,
    /// Prepend the identity profile to the deterministic sets.
    pub include_identity: bool,
}

impl SchemeConfig {
    pub fn new(scheme: Scheme, n: usize, alternatives: usize) -> Self {
        Self {
            n,
            alternatives,
            modulation: Modulation::Qam16,
            scheme,
            trials: DEFAULT_TRIALS,
            seed: 1,
            oversample: 1,
            gamma_grid: default_gamma_grid(),
            seeding: Seeding::Paired,
            random_draw: RandomDraw::Fixed,
            include_identity: false,
        }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_oversample(mut self, factor: usize) -> Self {
        self.oversample = factor;
        self
    }

    pub fn with_modulation(mut self, modulation: Modulation) -> Self {
        self.modulation = modulation;
        self
    }

    pub fn label(&self) -> &'static str {
        self.scheme.label()
    }

    pub fn validate(&self) -> Result<()> {
        check_slm_size(self.n)?;
        dsp::check_oversampling(self.oversample)?;
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.alternatives == 0 {
            return Err(Error::Config("U must be at least 1".into()));
        }
        if self.gamma_grid.windows(2).any(|w| w[0] >= w[1]) || self.gamma_grid.iter().any(|g| !g.is_finite()) {
            return Err(Error::Config("gamma grid must be finite and strictly ascending".into()));
        }
        if self.scheme.is_deterministic_selection() {
            let max = self.n / 8;
            if self.alternatives > max {
                return Err(Error::Capacity { n: self.n, requested: self.alternatives, max });
            }
        }
        Ok(())
    }

    fn symbol_seed(&self) -> u64 {
        match self.seeding {
            Seeding::Paired => derive_seed(self.seed, "symbols"),
            Seeding::Independent => derive_seed(self.seed, &format!("symbols/{}", self.label())),
        }
    }

    fn scheme_seed(&self) -> u64 {
        derive_seed(self.seed, self.label())
    }
}

enum Candidates {
    Plain,
    Phases(Vec<Vec<Complex64>>),
    Profiles(ProfileSet),
    RandomPerSymbol { seed: u64 },
}

/// A validated configuration with its candidate set built.
pub struct Simulator {
    cfg: SchemeConfig,
    constellation: Constellation,
    candidates: Candidates,
    plan: FftPlan,
}

/// Per-worker buffers.
pub struct Scratch {
    bits: Vec<bool>,
    spectrum: Vec<Complex64>,
    work: Vec<Complex64>,
    padded: Vec<Complex64>,
}

impl Simulator {
    pub fn new(cfg: SchemeConfig) -> Result<Self> {
        cfg.validate()?;
        let n = cfg.n;
        let u = cfg.alternatives;
        let mut setup = derive_substream(derive_seed(cfg.scheme_seed(), "setup"), 0);
        let candidates = match cfg.scheme {
            Scheme::Plain => Candidates::Plain,
            Scheme::ConvSlm => Candidates::Phases(
                conventional_slm_phases(n, u, &mut setup)?
                    .into_iter()
                    .map(|p| p.into_samples())
                    .collect(),
            ),
            Scheme::C3Random => match cfg.random_draw {
                RandomDraw::Fixed => Candidates::Profiles(random_profiles(n, u, &mut setup)?),
                RandomDraw::PerSymbol => Candidates::RandomPerSymbol { seed: derive_seed(cfg.scheme_seed(), "per-symbol") },
            },
            Scheme::DsOpt | Scheme::DsSel1 | Scheme::DsSel2 => {
                let set = match cfg.scheme {
                    Scheme::DsOpt => ds_profiles(n, u)?,
                    Scheme::DsSel1 => sel1_profiles(n, u)?,
                    _ => sel2_profiles(n, u)?,
                };
                Candidates::Profiles(if cfg.include_identity { set.with_identity_first() } else { set })
            }
        };
        let plan = FftPlan::new(n * cfg.oversample)?;
        Ok(Self { constellation: Constellation::new(cfg.modulation), candidates, plan, cfg })
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.cfg
    }

    /// Fixed profile set, when the scheme uses one.
    pub fn profiles(&self) -> Option<&ProfileSet> {
        match &self.candidates {
            Candidates::Profiles(set) => Some(set),
            _ => None,
        }
    }

    pub fn scratch(&self) -> Scratch {
        let n = self.cfg.n;
        let len = n * self.cfg.oversample;
        Scratch {
            bits: vec![false; n * self.constellation.bits_per_symbol()],
            spectrum: vec![Complex64::new(0.0, 0.0); n],
            work: vec![Complex64::new(0.0, 0.0); n],
            padded: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    /// The frequency-domain symbol of trial `t`.
    pub fn symbol(&self, trial: u64) -> Vec<Complex64> {
        let mut scratch = self.scratch();
        self.draw_symbol(trial, &mut scratch);
        scratch.spectrum
    }

    fn draw_symbol(&self, trial: u64, s: &mut Scratch) {
        let mut rng = derive_substream(self.cfg.symbol_seed(), trial);
        for chunk in s.bits.chunks_mut(64) {
            let word: u64 = rng.gen();
            for (i, b) in chunk.iter_mut().enumerate() {
                *b = (word >> i) & 1 == 1;
            }
        }
        let bps = self.constellation.bits_per_symbol();
        for (x, bits) in s.spectrum.iter_mut().zip(s.bits.chunks_exact(bps)) {
            let label = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
            *x = self.constellation.point(label);
        }
    }

    /// Selected (minimum) PAPR in dB for trial `t`.
    pub fn run_trial(&self, trial: u64, s: &mut Scratch) -> f64 {
        self.draw_symbol(trial, s);
        let spectrum = std::mem::take(&mut s.spectrum);
        let papr = self.select(&spectrum, trial, s);
        s.spectrum = spectrum;
        papr
    }

    /// Minimum PAPR over the candidates built from an arbitrary length-`N` spectrum.
    pub fn select(&self, spectrum: &[Complex64], trial: u64, s: &mut Scratch) -> f64 {
        let factor = self.cfg.oversample;
        match &self.candidates {
            Candidates::Plain => {
                dsp::oversample_into(spectrum, factor, &mut s.padded);
                self.plan.inverse(&mut s.padded);
                papr(&s.padded)
            }
            Candidates::Phases(phases) => phases
                .iter()
                .map(|phase| {
                    for ((w, x), p) in s.work.iter_mut().zip(spectrum).zip(phase) {
                        *w = x * p;
                    }
                    dsp::oversample_into(&s.work, factor, &mut s.padded);
                    self.plan.inverse(&mut s.padded);
                    papr(&s.padded)
                })
                .fold(f64::INFINITY, f64::min),
            Candidates::Profiles(set) => self.select_class3(spectrum, set, s),
            Candidates::RandomPerSymbol { seed } => {
                let mut rng = derive_substream(*seed, trial);
                let set = random_profiles(self.cfg.n, self.cfg.alternatives, &mut rng).expect("validated config");
                self.select_class3(spectrum, &set, s)
            }
        }
    }

    fn select_class3(&self, spectrum: &[Complex64], set: &ProfileSet, s: &mut Scratch) -> f64 {
        let factor = self.cfg.oversample;
        dsp::oversample_into(spectrum, factor, &mut s.padded);
        self.plan.inverse(&mut s.padded);
        let bank = PartitionBank::new(&s.padded, self.cfg.n, factor).expect("buffer sized from config");
        // All alternatives share one mean power, so the minimum PAPR belongs to the minimum peak.
        let mean = bank.alternative_energy() / bank.len() as f64;
        assert!(mean > 0.0, "OFDM symbols have nonzero energy");
        let mut best = f64::INFINITY;
        for profile in set.profiles() {
            if let Some(peak) = bank.peak_power(profile, best) {
                best = best.min(peak);
            }
        }
        10.0 * (best / mean).log10()
    }

    /// Selected PAPR of every trial, in trial order.
    pub fn simulate(&self) -> Vec<f64> {
        (0..self.cfg.trials as u64)
            .into_par_iter()
            .map_init(|| self.scratch(), |s, t| self.run_trial(t, s))
            .collect()
    }
}

fn papr(samples: &[Complex64]) -> f64 {
    papr_db_samples(samples).expect("OFDM symbols have nonzero energy")
}

/// Selected PAPR of one trial.
pub fn run_trial(cfg: &SchemeConfig, trial: u64) -> Result<f64> {
    let sim = Simulator::new(cfg.clone())?;
    let mut scratch = sim.scratch();
    Ok(sim.run_trial(trial, &mut scratch))
}

/// Selected PAPR samples of every trial, in trial order.
pub fn simulate_paprs(cfg: &SchemeConfig) -> Result<Vec<f64>> {
    Ok(Simulator::new(cfg.clone())?.simulate())
}

/// Smallest threshold `gamma` among the samples with at most `p * T` samples strictly above it.
pub fn papr_at_ccdf(samples: &[f64], p: f64) -> Option<f64> {
    if samples.is_empty() || !(0.0..1.0).contains(&p) {
        return None;
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let allowed = (p * sorted.len() as f64).floor() as usize;
    Some(sorted[sorted.len() - 1 - allowed.min(sorted.len() - 1)])
}

/// `1 - (1 - exp(-gamma))^N`: CCDF of the peak of `N` independent unit-power complex
/// Gaussian samples.
pub fn analytic_plain_ccdf(gamma_db: f64, n: usize) -> f64 {
    let gamma = 10f64.powf(gamma_db / 10.0);
    -((n as f64) * (-(-gamma).exp()).ln_1p()).exp_m1()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CcdfCurve {
    pub scheme: String,
    pub gamma_db: Vec<f64>,
    pub prob: Vec<f64>,
    pub exceed: Vec<usize>,
    pub trials: usize,
}

impl CcdfCurve {
    pub fn from_samples(label: &str, samples: &[f64], gamma_db: &[f64]) -> Self {
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let trials = sorted.len();
        let exceed: Vec<usize> = gamma_db
            .iter()
            .map(|&g| trials - sorted.partition_point(|&v| v <= g))
            .collect();
        let prob = exceed.iter().map(|&c| c as f64 / trials.max(1) as f64).collect();
        Self { scheme: label.to_string(), gamma_db: gamma_db.to_vec(), prob, exceed, trials }
    }

    /// Standard error of each estimate under the binomial model.
    pub fn standard_errors(&self) -> Vec<f64> {
        self.prob
            .iter()
            .map(|&p| (p * (1.0 - p) / self.trials as f64).sqrt())
            .collect()
    }

    /// `gamma_db,ccdf,trials,scheme`; probabilities to six significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("gamma_db,ccdf,trials,scheme\n");
        for (g, p) in self.gamma_db.iter().zip(&self.prob) {
            out.push_str(&format!("{g},{},{},{}\n", format_prob(*p), self.trials, self.scheme));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, "gamma_db,ccdf,trials,scheme")) => {}
            _ => return Err(Error::Parse { line: 1, message: "missing CCDF header".into() }),
        }
        let mut curve = CcdfCurve { scheme: String::new(), gamma_db: vec![], prob: vec![], exceed: vec![], trials: 0 };
        for (i, line) in lines {
            let fail = |m: &str| Error::Parse { line: i + 1, message: m.to_string() };
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 {
                return Err(fail("expected 4 fields"));
            }
            curve.gamma_db.push(f[0].parse().map_err(|_| fail("bad gamma"))?);
            let p: f64 = f[1].parse().map_err(|_| fail("bad probability"))?;
            curve.trials = f[2].parse().map_err(|_| fail("bad trial count"))?;
            curve.scheme = f[3].to_string();
            curve.exceed.push((p * curve.trials as f64).round() as usize);
            curve.prob.push(p);
        }
        Ok(curve)
    }

    /// Threshold where the curve crosses `p`, interpolating linearly in `log10(prob)`.
    pub fn papr_at(&self, p: f64) -> Option<f64> {
        let idx = self.prob.iter().position(|&q| q <= p)?;
        if idx == 0 {
            return Some(self.gamma_db[0]);
        }
        let (g0, g1) = (self.gamma_db[idx - 1], self.gamma_db[idx]);
        let (q0, q1) = (self.prob[idx - 1], self.prob[idx]);
        if q1 <= 0.0 {
            return Some(g1);
        }
        let t = (q0.log10() - p.log10()) / (q0.log10() - q1.log10());
        Some(g0 + t * (g1 - g0))
    }
}

fn format_prob(p: f64) -> String {
    if p == 0.0 {
        "0".to_string()
    } else {
        format!("{p:.5e}")
    }
}

/// CCDF curve of one configuration.
pub fn estimate_ccdf(cfg: &SchemeConfig) -> Result<CcdfCurve> {
    let samples = simulate_paprs(cfg)?;
    Ok(CcdfCurve::from_samples(cfg.label(), &samples, &cfg.gamma_grid))
}

/// One curve per configuration; all configurations must share a gamma grid.
pub fn run_experiment(cfgs: &[SchemeConfig]) -> Result<Vec<CcdfCurve>> {
    if let Some(first) = cfgs.first() {
        if cfgs.iter().any(|c| c.gamma_grid != first.gamma_grid) {
            return Err(Error::Config("all configurations in an experiment must share one gamma grid".into()));
        }
    }
    cfgs.iter().map(estimate_ccdf).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(scheme: Scheme) -> SchemeConfig {
        SchemeConfig::new(scheme, 64, 4).with_trials(200).with_seed(11)
    }

    #[test]
    fn scheme_labels_round_trip() {
        for s in Scheme::ALL {
            assert_eq!(s.label().parse::<Scheme>().unwrap(), s);
        }
        assert!("slm".parse::<Scheme>().is_err());
    }

    #[test]
    fn grid_construction() {
        let g = gamma_grid(5.0, 6.0, 0.1).unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[3], 5.3);
        assert_eq!(*g.last().unwrap(), 6.0);
        assert!(gamma_grid(5.0, 4.0, 0.1).is_err());
        assert!(gamma_grid(5.0, 6.0, 0.0).is_err());
        assert_eq!(default_gamma_grid().len(), 71);
    }

    #[test]
    fn validation() {
        assert!(matches!(
            SchemeConfig::new(Scheme::DsOpt, 64, 9).validate(),
            Err(Error::Capacity { n: 64, requested: 9, max: 8 })
        ));
        assert!(SchemeConfig::new(Scheme::C3Random, 64, 9).validate().is_ok());
        assert!(small(Scheme::Plain).with_trials(0).validate().is_err());
        assert!(small(Scheme::Plain).with_oversample(3).validate().is_err());
        let mut cfg = small(Scheme::Plain);
        cfg.gamma_grid = vec![5.0, 5.0];
        assert!(cfg.validate().is_err());
        assert!(run_trial(&SchemeConfig::new(Scheme::DsSel2, 64, 9), 0).is_err());
    }

    #[test]
    fn plain_trial_is_symbol_papr() {
        let cfg = small(Scheme::Plain);
        let sim = Simulator::new(cfg.clone()).unwrap();
        let x = dsp::ComplexSequence::frequency(sim.symbol(5)).unwrap();
        let direct = dsp::papr_db(&dsp::ifft(&x).unwrap()).unwrap();
        assert_eq!(run_trial(&cfg, 5).unwrap(), direct);
    }

    #[test]
    fn ds_selection_never_worse_than_first_alternative() {
        let cfg = SchemeConfig::new(Scheme::DsOpt, 256, 10).with_trials(50);
        let sim = Simulator::new(cfg.clone()).unwrap();
        let set = sim.profiles().unwrap().clone();
        let mut s = sim.scratch();
        for t in 0..50 {
            let best = sim.run_trial(t, &mut s);
            let x = dsp::ComplexSequence::frequency(sim.symbol(t)).unwrap();
            let first = crate::class3::generate_alternative_freq(&x, &set.profiles()[0]).unwrap();
            assert!(best <= dsp::papr_db(&first).unwrap() + 1e-12);
        }
    }

    #[test]
    fn curve_counts() {
        let samples = [1.0, 2.0, 3.0, 4.0];
        let c = CcdfCurve::from_samples("x", &samples, &[0.5, 2.0, 2.5, 4.0]);
        assert_eq!(c.exceed, vec![4, 2, 2, 0]);
        assert_eq!(c.prob, vec![1.0, 0.5, 0.5, 0.0]);
        assert_eq!(papr_at_ccdf(&samples, 0.25), Some(3.0));
        assert_eq!(papr_at_ccdf(&samples, 0.0), Some(4.0));
        assert_eq!(papr_at_ccdf(&[], 0.1), None);
    }

    #[test]
    fn csv_shape() {
        let c = CcdfCurve::from_samples("ds-opt", &[1.0, 2.0, 3.0], &[0.0, 1.5, 3.0]);
        assert_eq!(c.to_csv(), "gamma_db,ccdf,trials,scheme\n0,1.00000e0,3,ds-opt\n1.5,6.66667e-1,3,ds-opt\n3,0,3,ds-opt\n");
        let back = CcdfCurve::from_csv(&c.to_csv()).unwrap();
        assert_eq!(back.exceed, c.exceed);
        assert_eq!(back.trials, 3);
    }

    #[test]
    fn crossing_interpolation() {
        let c = CcdfCurve { scheme: "x".into(), gamma_db: vec![1.0, 2.0], prob: vec![1e-2, 1e-4], exceed: vec![], trials: 1 };
        assert!((c.papr_at(1e-3).unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(c.papr_at(1e-5), None);
    }

    #[test]
    fn analytic_baseline_limits() {
        assert!((analytic_plain_ccdf(-30.0, 256) - 1.0).abs() < 1e-12);
        assert!(analytic_plain_ccdf(20.0, 256) < 1e-40);
    }

    #[test]
    fn mismatched_grids_rejected() {
        let a = small(Scheme::Plain);
        let mut b = small(Scheme::DsOpt);
        b.gamma_grid = vec![6.0];
        assert!(matches!(run_experiment(&[a, b]), Err(Error::Config(_))));
        assert!(run_experiment(&[]).unwrap().is_empty());
    }
}
