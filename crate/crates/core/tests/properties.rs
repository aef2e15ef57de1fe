use anharmonic::cli::oracle_comparison;
use anharmonic::measures::measure_report;
use anharmonic::perturbation::{alpha_coefficients, perturbed_variances, scatter_sample};
use anharmonic::{GridOptions, PotentialSpec};
use proptest::prelude::*;

fn standard_set() -> Vec<PotentialSpec> {
    let mut v = Vec::new();
    for (depth, alpha) in [(1.0, 0.5), (1.0, 1.0), (2.0, 1.5)] {
        v.push(PotentialSpec::Morse { depth, alpha });
    }
    for (depth, alpha) in [(1.0, 1.0), (2.0, 0.5), (0.5, 1.5)] {
        v.push(PotentialSpec::ModifiedPoschlTeller { depth, alpha });
    }
    v.extend([0.5, 2.0, 8.0].map(|a| PotentialSpec::ModifiedIsotonic { a }));
    v.extend([-0.1, -0.4, -0.9].map(|p| PotentialSpec::FellowsSmith { p }));
    v
}

#[test]
fn analytic_and_fd_eta_ng_agree_on_standard_set() {
    for spec in standard_set() {
        let c = oracle_comparison(&spec, &GridOptions::default()).unwrap();
        assert!((c.eta_ng_analytic - c.eta_ng_fd).abs() <= 1e-4, "{spec}: {c:?}");
        let r = measure_report(&spec, &GridOptions::default()).unwrap();
        assert!((r.eta_ng - c.eta_ng_analytic).abs() <= 1e-12, "{spec}");
    }
}

#[test]
fn perturbative_ensemble_respects_uncertainty_bound() {
    for r in scatter_sample(2000, (-0.2, 0.2), (-0.25, 0.25), 1.0, 5).unwrap() {
        let (q, p) = perturbed_variances(&alpha_coefficients(r.eps3, r.eps4, 1.0).unwrap());
        assert!(q * p >= 0.25 - 1e-12, "{r:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn text_form_round_trips(depth in 0.1f64..5.0, frac in 0.01f64..0.99, a in 0.1f64..50.0, p in -0.99f64..0.0) {
        let alpha = frac * 2.0 * (2.0 * depth).sqrt();
        for spec in [
            PotentialSpec::Morse { depth, alpha },
            PotentialSpec::ModifiedPoschlTeller { depth, alpha },
            PotentialSpec::ModifiedIsotonic { a },
            PotentialSpec::FellowsSmith { p },
            PotentialSpec::PerturbedHarmonic { omega: depth, eps3: p / 4.0, eps4: frac / 4.0 },
        ] {
            let back: PotentialSpec = spec.to_string().parse().unwrap();
            prop_assert_eq!(back, spec);
        }
    }

    #[test]
    fn morse_measures_in_range(depth in 0.25f64..3.0, frac in 0.02f64..0.97) {
        let alpha = frac * 2.0 * (2.0 * depth).sqrt();
        let r = measure_report(&PotentialSpec::Morse { depth, alpha }, &GridOptions::default()).unwrap();
        let eb = r.eta_b.unwrap();
        prop_assert!((0.0..=1.0).contains(&eb));
        prop_assert!(r.eta_ng >= 0.0 && r.det_sigma >= 0.25 - 1e-6);
    }

    #[test]
    fn fellows_smith_measures_in_range(p in -0.98f64..0.0) {
        let r = measure_report(&PotentialSpec::FellowsSmith { p }, &GridOptions::default()).unwrap();
        prop_assert!(r.eta_ng >= 0.0 && r.det_sigma >= 0.25 - 1e-6);
        if let Some(eb) = r.eta_b {
            prop_assert!((0.0..=1.0).contains(&eb));
        }
    }
}
