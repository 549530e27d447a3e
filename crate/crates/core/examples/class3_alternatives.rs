//! Builds Class III alternatives of one OFDM symbol from a single IFFT output.
//!
//! Each alternative is the symbol convolved with a sparse conversion vector. The same
//! signal comes out of the frequency-domain route (phase sequence times spectrum), which
//! is printed as a cross-check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slm_papr::class3::{conversion_vector, generate_alternative_freq, generate_alternative_time, phase_sequence};
use slm_papr::dsp::{self, map_constellation, papr_db, Constellation, Modulation};
use slm_papr::{Rotation, ShiftRotationProfile};

fn main() -> slm_papr::Result<()> {
    let n = 64;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let bits: Vec<bool> = (0..2 * n).map(|_| rng.gen()).collect();
    let spectrum = map_constellation(&bits, &Constellation::new(Modulation::Qpsk))?;
    let x = dsp::ifft(&spectrum)?;
    println!("original PAPR {:.2} dB", papr_db(&x)?);

    let profile = ShiftRotationProfile::new(n, [0, 3, 7, 12], [Rotation::One, Rotation::J, Rotation::MinusOne, Rotation::One])?;
    let taps = conversion_vector(&profile);
    println!("conversion vector has {} taps:", taps.len());
    for tap in &taps {
        println!("  offset {:2}  gain {:+.0}{:+.0}j", tap.offset, tap.gain.re, tap.gain.im);
    }
    let p = phase_sequence(&profile);
    println!("phase sequence P(0..8): {:?}", p.samples()[..8].iter().map(|v| format!("{:+.0}{:+.0}j", v.re, v.im)).collect::<Vec<_>>());

    let time = generate_alternative_time(&x, &profile)?;
    let freq = generate_alternative_freq(&spectrum, &profile)?;
    println!("alternative PAPR {:.2} dB, time vs frequency path {:.1e}", papr_db(&time)?, time.max_abs_diff(&freq));

    let best = (0..20)
        .map(|_| {
            let tau = std::array::from_fn(|_| rng.gen_range(0..n / 4));
            let c = std::array::from_fn(|_| Rotation::from_quarter_turns(rng.gen_range(0..4)));
            let alt = generate_alternative_time(&x, &ShiftRotationProfile::new(n, tau, c).unwrap()).unwrap();
            papr_db(&alt).unwrap()
        })
        .fold(f64::INFINITY, f64::min);
    println!("best of 20 random alternatives: {best:.2} dB");
    Ok(())
}
