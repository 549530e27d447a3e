//! OFDM peak-to-average power ratio reduction with Class III selected mapping.
//!
//! * [`dsp`]: FFT, circular convolution, constellations, oversampling, PAPR.
//! * [`class3`]: base vectors, conversion vectors, phase sequences and the two equivalent
//!   ways of producing an alternative signal.
//! * [`correlation`]: sample-power correlation between alternatives and its spike structure.
//! * [`selection`]: deterministic cyclic shifts, degraded variants and the optimality check.
//! * [`harness`]: seeded Monte Carlo CCDF estimation.
//! * [`cli`]: the `slm-papr` command line.

pub mod class3;
pub mod cli;
pub mod correlation;
pub mod dsp;
mod error;
pub mod harness;
pub mod profile_file;
pub mod rng;
pub mod selection;

pub use class3::{ProfileSet, Rotation, ShiftRotationProfile};
pub use error::{Error, Result};
pub use harness::{CcdfCurve, Scheme, SchemeConfig};
