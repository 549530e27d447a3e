//! Gray-mapped QPSK and square 16-QAM with unit average energy.
//!
//! Bit convention, per axis: the first bit is the sign (`0` is positive). For 16-QAM the
//! second bit picks the amplitude (`0` is the inner level 1, `1` is the outer level 3), which
//! orders the four levels `-3, -1, 1, 3` as labels `11, 10, 00, 01`. A symbol's label is read
//! MSB first: in-phase bits, then quadrature bits. QPSK `00` is therefore `(1 + j)/sqrt 2`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::{ComplexSequence, Domain};
use crate::error::{check_slm_size, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Modulation {
    Qpsk,
    Qam16,
}

impl Modulation {
    pub fn bits_per_symbol(self) -> usize {
        match self {
            Modulation::Qpsk => 2,
            Modulation::Qam16 => 4,
        }
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Modulation::Qpsk => "qpsk",
            Modulation::Qam16 => "16qam",
        })
    }
}

impl FromStr for Modulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qpsk" => Ok(Modulation::Qpsk),
            "16qam" | "qam16" | "16-qam" => Ok(Modulation::Qam16),
            other => Err(Error::Config(format!("unknown modulation '{other}' (expected qpsk or 16qam)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    modulation: Modulation,
    points: Vec<Complex64>,
}

impl Constellation {
    pub fn new(modulation: Modulation) -> Self {
        let points = match modulation {
            Modulation::Qpsk => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                (0..4usize)
                    .map(|label| Complex64::new(sign(label >> 1) * s, sign(label & 1) * s))
                    .collect()
            }
            Modulation::Qam16 => {
                let s = 1.0 / 10f64.sqrt();
                (0..16usize)
                    .map(|label| Complex64::new(qam4_level(label >> 2) * s, qam4_level(label & 3) * s))
                    .collect()
            }
        };
        Self { modulation, points }
    }

    pub fn modulation(&self) -> Modulation {
        self.modulation
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.modulation.bits_per_symbol()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Point for an integer label in `[0, 2^bits_per_symbol)`.
    #[inline]
    pub fn point(&self, label: usize) -> Complex64 {
        self.points[label]
    }

    pub fn average_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.points.len() as f64
    }
}

fn sign(bit: usize) -> f64 {
    if bit & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Two Gray bits (sign, amplitude) to one of `-3, -1, 1, 3`.
fn qam4_level(bits: usize) -> f64 {
    let amplitude = if bits & 1 == 0 { 1.0 } else { 3.0 };
    sign(bits >> 1) * amplitude
}

/// Maps `N * bits_per_symbol` bits onto `N` subcarriers.
pub fn map_constellation(bits: &[bool], constellation: &Constellation) -> Result<ComplexSequence> {
    let bps = constellation.bits_per_symbol();
    if !bits.len().is_multiple_of(bps) {
        return Err(Error::Size(format!(
            "{} bits is not a multiple of {bps} bits per symbol",
            bits.len()
        )));
    }
    let n = bits.len() / bps;
    check_slm_size(n)?;
    let symbols = bits
        .chunks_exact(bps)
        .map(|chunk| {
            let label = chunk.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
            constellation.point(label)
        })
        .collect();
    ComplexSequence::new(symbols, Domain::Frequency)
}
