//! Correlation between two phase sequences concentrates in spikes whose lags are set by
//! the shift differences. Disjoint spikes give the smallest variance.

use slm_papr::class3::phase_sequence;
use slm_papr::correlation::{correlation_profile, spike_table, variance_of_correlation, ShiftDifference};
use slm_papr::selection::{ds_profiles, sel1_profiles, sel2_profiles};
use slm_papr::{Rotation, ShiftRotationProfile};

fn main() -> slm_papr::Result<()> {
    let n = 32;
    let table = spike_table(&ShiftDifference::new(n, [0, 1, 2, 3])?)?;
    println!("spike lags for d = (0, 1, 2, 3), N = {n}:");
    for (v, row) in table.rows().iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|(tau, a)| format!("{tau:2}:{:+.0}{:+.0}j", a.re, a.im)).collect();
        println!("  Abar_{} {}", v + 1, cells.join("  "));
    }
    println!("distinct lags: {}", table.distinct_positions());

    let a = ShiftRotationProfile::new(n, [0, 1, 2, 3], [Rotation::One; 4])?;
    let b = ShiftRotationProfile::new(n, [0, 0, 0, 0], [Rotation::One; 4])?;
    let rho = correlation_profile(&phase_sequence(&a), &phase_sequence(&b))?;
    let nonzero: Vec<String> = rho.iter().enumerate().filter(|(_, r)| **r > 1e-12).map(|(t, r)| format!("{t}:{r:.4}")).collect();
    println!("rho between the two profiles: {}", nonzero.join(" "));

    println!("variance of correlation, N=256 U=10:");
    for (name, set) in [("opt", ds_profiles(256, 10)?), ("sel1", sel1_profiles(256, 10)?), ("sel2", sel2_profiles(256, 10)?)] {
        println!("  {name:<5} {:.4e}", variance_of_correlation(&set)?);
    }
    Ok(())
}
