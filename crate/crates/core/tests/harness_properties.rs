use num_complex::Complex64;
use proptest::prelude::*;
use slm_papr::class3::generate_alternative_freq;
use slm_papr::dsp::{self, oversample_spectrum, papr_db, ComplexSequence, Modulation};
use slm_papr::harness::{
    estimate_ccdf, papr_at_ccdf, run_experiment, simulate_paprs, RandomDraw, Seeding, Simulator,
};
use slm_papr::{Scheme, SchemeConfig};

fn cfg(scheme: Scheme, n: usize, u: usize, trials: usize) -> SchemeConfig {
    SchemeConfig::new(scheme, n, u).with_trials(trials).with_seed(7)
}

#[test]
fn samples_do_not_depend_on_thread_count() {
    let c = cfg(Scheme::C3Random, 128, 8, 3000);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| simulate_paprs(&c).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
}

#[test]
fn class3_selection_matches_brute_force() {
    for factor in [1usize, 4] {
        for scheme in [Scheme::C3Random, Scheme::DsOpt, Scheme::DsSel2] {
            let c = cfg(scheme, 64, 8, 40).with_oversample(factor);
            let sim = Simulator::new(c.clone()).unwrap();
            let set = sim.profiles().unwrap().clone();
            let mut scratch = sim.scratch();
            for t in 0..40 {
                let x = ComplexSequence::frequency(sim.symbol(t)).unwrap();
                let brute = set
                    .profiles()
                    .iter()
                    .map(|p| {
                        let spec = dsp::fft(&generate_alternative_freq(&x, p).unwrap()).unwrap();
                        papr_db(&dsp::ifft(&oversample_spectrum(&spec, factor).unwrap()).unwrap()).unwrap()
                    })
                    .fold(f64::INFINITY, f64::min);
                assert!((sim.run_trial(t, &mut scratch) - brute).abs() < 1e-9, "{scheme} L={factor} t={t}");
            }
        }
    }
}

#[test]
fn conventional_slm_never_loses_to_plain() {
    let plain = simulate_paprs(&cfg(Scheme::Plain, 64, 1, 500)).unwrap();
    let conv = simulate_paprs(&cfg(Scheme::ConvSlm, 64, 6, 500)).unwrap();
    assert!(conv.iter().zip(&plain).all(|(c, p)| c <= p));
    assert_eq!(simulate_paprs(&cfg(Scheme::ConvSlm, 64, 1, 500)).unwrap(), plain);
}

#[test]
fn more_alternatives_never_hurt() {
    for scheme in [Scheme::ConvSlm, Scheme::C3Random, Scheme::DsOpt, Scheme::DsSel1] {
        let few = simulate_paprs(&cfg(scheme, 128, 4, 300)).unwrap();
        let many = simulate_paprs(&cfg(scheme, 128, 16, 300)).unwrap();
        assert!(many.iter().zip(&few).all(|(m, f)| m <= f), "{scheme}");
    }
}

#[test]
fn oversampling_never_lowers_the_selected_papr() {
    for scheme in [Scheme::Plain, Scheme::DsOpt, Scheme::C3Random] {
        let coarse = simulate_paprs(&cfg(scheme, 64, 8, 200)).unwrap();
        let fine = simulate_paprs(&cfg(scheme, 64, 8, 200).with_oversample(4)).unwrap();
        assert!(fine.iter().zip(&coarse).all(|(f, c)| *f >= c - 1e-9), "{scheme}");
    }
}

#[test]
fn paired_seeding_shares_symbols() {
    let a = Simulator::new(cfg(Scheme::Plain, 64, 1, 10)).unwrap();
    let b = Simulator::new(cfg(Scheme::DsOpt, 64, 8, 10)).unwrap();
    assert_eq!(a.symbol(3), b.symbol(3));
    assert_ne!(a.symbol(3), a.symbol(4));

    let mut ind = cfg(Scheme::DsOpt, 64, 8, 10);
    ind.seeding = Seeding::Independent;
    let mut ind_plain = cfg(Scheme::Plain, 64, 1, 10);
    ind_plain.seeding = Seeding::Independent;
    assert_ne!(Simulator::new(ind).unwrap().symbol(3), Simulator::new(ind_plain).unwrap().symbol(3));
}

#[test]
fn adding_a_scheme_leaves_the_others_alone() {
    let ds = cfg(Scheme::DsOpt, 64, 8, 400);
    let alone = run_experiment(std::slice::from_ref(&ds)).unwrap();
    let together = run_experiment(&[cfg(Scheme::Plain, 64, 1, 400), ds, cfg(Scheme::ConvSlm, 64, 8, 400)]).unwrap();
    assert_eq!(alone[0], together[1]);
}

#[test]
fn curves_are_monotone_and_bounded() {
    for scheme in [Scheme::Plain, Scheme::C3Random, Scheme::DsSel2] {
        let curve = estimate_ccdf(&cfg(scheme, 64, 8, 2000)).unwrap();
        assert!(curve.prob.windows(2).all(|w| w[1] <= w[0]));
        assert!(curve.prob.iter().all(|p| (0.0..=1.0).contains(p)));
        assert_eq!(curve.trials, 2000);
    }
}

#[test]
fn qpsk_symbols_have_unit_power_per_subcarrier() {
    let sim = Simulator::new(cfg(Scheme::Plain, 64, 1, 10).with_modulation(Modulation::Qpsk)).unwrap();
    for t in 0..10 {
        assert!(sim.symbol(t).iter().all(|x| (x.norm_sqr() - 1.0).abs() < 1e-12));
    }
}

#[test]
fn per_symbol_draw_is_reproducible_and_comparable() {
    let mut per = cfg(Scheme::C3Random, 128, 8, 20_000);
    per.random_draw = RandomDraw::PerSymbol;
    let a = simulate_paprs(&per).unwrap();
    assert_eq!(a, simulate_paprs(&per).unwrap());
    assert!(Simulator::new(per).unwrap().profiles().is_none());
    let fixed = simulate_paprs(&cfg(Scheme::C3Random, 128, 8, 20_000)).unwrap();
    assert_ne!(a, fixed);
    let (pa, pf) = (papr_at_ccdf(&a, 1e-2).unwrap(), papr_at_ccdf(&fixed, 1e-2).unwrap());
    assert!((pa - pf).abs() < 0.25, "{pa} vs {pf}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn selection_ignores_complex_scaling(trial in 0u64..1000, scheme_idx in 0usize..6, turns in 0u32..4) {
        let scheme = Scheme::ALL[scheme_idx];
        let u = if scheme == Scheme::Plain { 1 } else { 8 };
        let sim = Simulator::new(cfg(scheme, 64, u, 1)).unwrap();
        let mut s = sim.scratch();
        let x = sim.symbol(trial);
        // Powers of two and quarter turns are exact in floating point.
        let k = Complex64::new(2.0, 0.0) * Complex64::i().powu(turns);
        let scaled: Vec<Complex64> = x.iter().map(|v| v * k).collect();
        prop_assert_eq!(sim.select(&x, trial, &mut s), sim.select(&scaled, trial, &mut s));
    }
}
