//! Small CCDF comparison of every scheme on shared symbols.
//!
//! Run with `--release`; pass a trial count as the first argument (default 20000).

use slm_papr::harness::{gamma_grid, run_experiment};
use slm_papr::{Scheme, SchemeConfig};

fn main() -> slm_papr::Result<()> {
    let trials = std::env::args().nth(1).map_or(Ok(20_000), |s| s.parse()).expect("trial count");
    let grid = gamma_grid(5.0, 12.0, 0.05)?;
    let cfgs: Vec<SchemeConfig> = Scheme::ALL
        .into_iter()
        .map(|scheme| {
            let u = if scheme == Scheme::Plain { 1 } else { 10 };
            let mut cfg = SchemeConfig::new(scheme, 256, u).with_trials(trials).with_seed(3);
            cfg.gamma_grid = grid.clone();
            cfg
        })
        .collect();
    let curves = run_experiment(&cfgs)?;
    println!("{:<10} {:>10} {:>10}", "scheme", "@1e-2 dB", "@1e-3 dB");
    for curve in &curves {
        let at = |p| curve.papr_at(p).map_or("-".to_string(), |g| format!("{g:.2}"));
        println!("{:<10} {:>10} {:>10}", curve.scheme, at(1e-2), at(1e-3));
    }
    print!("\n{}", curves[3].to_csv().lines().take(6).collect::<Vec<_>>().join("\n"));
    println!("\n...");
    Ok(())
}
