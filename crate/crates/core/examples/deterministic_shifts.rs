//! Deterministic shift sets and the pairwise optimality check.

use slm_papr::selection::{check_optimal, ds_profiles, max_alternatives, random_profiles};
use slm_papr::{ProfileSet, Rotation, ShiftRotationProfile};

fn main() -> slm_papr::Result<()> {
    for n in [64, 256, 1024] {
        let max = max_alternatives(n)?;
        let report = check_optimal(&ds_profiles(n, max)?);
        println!("N={n:4}: U={max:3} deterministic shifts, {} pairs, optimal={}", report.pairs_checked, report.passes());
    }

    // One more profile than the capacity collides at the first and last labels.
    let n = 64;
    let q = n / 4;
    let over: Vec<_> = (1..=max_alternatives(n)? + 1)
        .map(|u| ShiftRotationProfile::new(n, [0, u % q, 2 * u % q, 3 * u % q], [Rotation::One; 4]))
        .collect::<slm_papr::Result<_>>()?;
    for v in check_optimal(&ProfileSet::new(n, over)?).violations {
        println!("  {v}");
    }
    if let Err(e) = ds_profiles(n, 9) {
        println!("ds_profiles(64, 9): {e}");
    }

    let mut rng = rand::thread_rng();
    let random = random_profiles(256, 10, &mut rng)?;
    let report = check_optimal(&random);
    println!("random N=256 U=10: {} of {} pairs violate", report.violating_pairs().len(), report.pairs_checked);
    Ok(())
}
