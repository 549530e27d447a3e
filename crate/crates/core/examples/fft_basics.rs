//! Maps random 16-QAM bits onto 256 subcarriers, transforms to time and measures PAPR,
//! at the Nyquist rate and with 4x oversampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slm_papr::dsp::{self, map_constellation, oversample_spectrum, papr_db, Constellation, Modulation};

fn main() -> slm_papr::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let constellation = Constellation::new(Modulation::Qam16);
    println!("16-QAM average energy: {:.6}", constellation.average_energy());

    for block in 0..5 {
        let bits: Vec<bool> = (0..256 * constellation.bits_per_symbol()).map(|_| rng.gen()).collect();
        let spectrum = map_constellation(&bits, &constellation)?;
        let x = dsp::ifft(&spectrum)?;
        let back = dsp::fft(&x)?;
        let fine = dsp::ifft(&oversample_spectrum(&spectrum, 4)?)?;
        println!(
            "block {block}: PAPR {:.2} dB (L=4: {:.2} dB), round-trip error {:.1e}",
            papr_db(&x)?,
            papr_db(&fine)?,
            back.max_abs_diff(&spectrum)
        );
    }
    Ok(())
}
