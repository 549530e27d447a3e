//! Cyclic-shift selection for Class III SLM.
//!
//! The deterministic generator gives alternative `u` the shifts `(0, u, 2u, 3u) mod N/4` with
//! all rotations equal to one. For two alternatives `u1 < u2` with `delta = u2 - u1` the
//! shift differences are `(0, delta, 2 delta, 3 delta)` up to sign, and their pairwise
//! differences are multiples `k delta`, `k in {1, 2, 3}`. With `N` a power of two none of
//! these vanish mod `N/4` while `delta < N/8`, so up to `N/8` alternatives keep every pair's
//! 16 correlation spikes apart.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::class3::{ProfileSet, Rotation, ShiftRotationProfile};
use crate::error::{check_slm_size, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SelectionVariant {
    Opt,
    Sel1,
    Sel2,
    Random,
}

impl SelectionVariant {
    pub fn is_deterministic(self) -> bool {
        self != SelectionVariant::Random
    }
}

impl fmt::Display for SelectionVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelectionVariant::Opt => "opt",
            SelectionVariant::Sel1 => "sel1",
            SelectionVariant::Sel2 => "sel2",
            SelectionVariant::Random => "random",
        })
    }
}

impl FromStr for SelectionVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "opt" => Ok(SelectionVariant::Opt),
            "sel1" => Ok(SelectionVariant::Sel1),
            "sel2" => Ok(SelectionVariant::Sel2),
            "random" => Ok(SelectionVariant::Random),
            other => Err(Error::Config(format!("unknown variant '{other}'"))),
        }
    }
}

/// Largest `U` for which the deterministic shifts keep every pair optimal: `N/8`.
pub fn max_alternatives(n: usize) -> Result<usize> {
    check_slm_size(n)?;
    Ok(n / 8)
}

fn check_capacity(n: usize, count: usize) -> Result<()> {
    let max = max_alternatives(n)?;
    if count == 0 {
        return Err(Error::Config("U must be at least 1".into()));
    }
    if count > max {
        return Err(Error::Capacity { n, requested: count, max });
    }
    Ok(())
}

/// Builds profiles `u = 1..=U` from a shift rule, all rotations one.
fn build(n: usize, count: usize, shifts: impl Fn(usize) -> [usize; 4]) -> Result<ProfileSet> {
    check_capacity(n, count)?;
    let quarter = n / 4;
    let profiles = (1..=count)
        .map(|u| ShiftRotationProfile::new(n, shifts(u).map(|t| t % quarter), [Rotation::One; 4]))
        .collect::<Result<Vec<_>>>()?;
    ProfileSet::new(n, profiles)
}

/// Deterministic shifts `tau = (0, u, 2u, 3u) mod N/4` for `u = 1..=U`.
pub fn ds_profiles(n: usize, count: usize) -> Result<ProfileSet> {
    build(n, count, |u| [0, u, 2 * u, 3 * u])
}

/// Degraded variant with `tau_2` pinned to zero, so `d_1 = d_2` for every pair.
pub fn sel1_profiles(n: usize, count: usize) -> Result<ProfileSet> {
    build(n, count, |u| [0, 0, 2 * u, 3 * u])
}

/// Degraded variant with `tau_2 = tau_3 = 0`, so `d_1 = d_2 = d_3` for every pair.
pub fn sel2_profiles(n: usize, count: usize) -> Result<ProfileSet> {
    build(n, count, |u| [0, 0, 0, 3 * u])
}

/// I.i.d. uniform shifts in `[0, N/4)` and rotations in `{1, j, -1, -j}`.
pub fn random_profiles<R: Rng + ?Sized>(n: usize, count: usize, rng: &mut R) -> Result<ProfileSet> {
    check_slm_size(n)?;
    if count == 0 {
        return Err(Error::Config("U must be at least 1".into()));
    }
    let quarter = n / 4;
    let profiles = (0..count)
        .map(|_| {
            let tau = std::array::from_fn(|_| rng.gen_range(0..quarter));
            let c = std::array::from_fn(|_| Rotation::from_quarter_turns(rng.gen_range(0..4)));
            ShiftRotationProfile::new(n, tau, c)
        })
        .collect::<Result<Vec<_>>>()?;
    ProfileSet::new(n, profiles)
}

pub fn generate<R: Rng + ?Sized>(variant: SelectionVariant, n: usize, count: usize, rng: &mut R) -> Result<ProfileSet> {
    match variant {
        SelectionVariant::Opt => ds_profiles(n, count),
        SelectionVariant::Sel1 => sel1_profiles(n, count),
        SelectionVariant::Sel2 => sel2_profiles(n, count),
        SelectionVariant::Random => random_profiles(n, count, rng),
    }
}

/// Two components of one profile pair whose shift differences coincide mod `N/4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    /// Profile labels, first < second in set order.
    pub pair: (usize, usize),
    /// 1-based component indices, `v < w`.
    pub components: (usize, usize),
    /// `d_v mod N/4`.
    pub d_v: usize,
    pub d_w: usize,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pair=({},{}) components=({},{}) d_v={} d_w={} mod N/4",
            self.pair.0, self.pair.1, self.components.0, self.components.1, self.d_v, self.d_w
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalityReport {
    pub n: usize,
    pub pairs_checked: usize,
    pub violations: Vec<Violation>,
}

impl OptimalityReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    /// Distinct offending pairs, in order of first appearance.
    pub fn violating_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for v in &self.violations {
            if pairs.last() != Some(&v.pair) {
                pairs.push(v.pair);
            }
        }
        pairs
    }
}

/// Reduced shift differences of one pair, `(tau_v^(a) - tau_v^(b)) mod N/4`.
pub fn reduced_differences(a: &ShiftRotationProfile, b: &ShiftRotationProfile) -> [usize; 4] {
    let quarter = a.n() / 4;
    let (ta, tb) = (a.tau(), b.tau());
    std::array::from_fn(|v| (ta[v] + quarter - tb[v] % quarter) % quarter)
}

/// Checks that every pair has four pairwise-distinct shift differences mod `N/4`.
///
/// All six component pairs are compared, not just neighbours. A set with a single profile
/// has no pairs and passes vacuously.
pub fn check_optimal(set: &ProfileSet) -> OptimalityReport {
    let n = set.n();
    let entries: Vec<_> = set.iter().collect();
    let mut violations = Vec::new();
    let mut pairs_checked = 0;
    for (i, &(label_i, pi)) in entries.iter().enumerate() {
        for &(label_j, pj) in &entries[i + 1..] {
            pairs_checked += 1;
            let d = reduced_differences(pi, pj);
            for v in 0..4 {
                for w in v + 1..4 {
                    if d[v] == d[w] {
                        violations.push(Violation {
                            pair: (label_i, label_j),
                            components: (v + 1, w + 1),
                            d_v: d[v],
                            d_w: d[w],
                        });
                    }
                }
            }
        }
    }
    OptimalityReport { n, pairs_checked, violations }
}
