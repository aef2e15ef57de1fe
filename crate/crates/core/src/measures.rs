//! Bures and non-Gaussianity measures of catalog ground states, plus the
//! Gaussian-state utilities they rest on.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{
    auto_grid, covariance_of, inner_product_on, overlap, sample_ground_state_on, CovarianceMatrix, Grid, GridOptions,
    SampledWavefunction,
};
use crate::perturbation::{alpha_coefficients, eta_b_perturbative, eta_ng_perturbative, perturbed_variances};
use crate::potentials::{ground_energy, ln_ground_state_amplitude, morse_n, reference_frequency, PotentialSpec};
use crate::specfun::{entropy_h, trigamma};

/// Lower bound on `det sigma` accepted for a physical state.
pub const HEISENBERG_TOLERANCE: f64 = 1e-6;
/// Fraction of the Morse bound-state limit `2 sqrt(2D)` above which a
/// proximity warning is attached.
pub const MORSE_EDGE_WARNING: f64 = 0.98;
/// Half-width of the reference-Gaussian overlap window, in standard deviations of `|psi|^2`.
const REFERENCE_WINDOW: f64 = 12.0;

/// How the covariance matrix in a report was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentsRoute {
    Quadrature,
    ClosedForm,
    Perturbative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridInfo {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl From<&Grid> for GridInfo {
    fn from(g: &Grid) -> Self {
        Self { x_min: g.x_min(), x_max: g.x_max(), n_points: g.n_points() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Grid used for the ground-state moments; `None` for closed forms.
    pub grid: Option<GridInfo>,
    /// `|1 - norm|` of the printed state on its grid, before renormalization.
    pub norm_defect: Option<f64>,
    pub moments: MomentsRoute,
    pub warnings: Vec<String>,
}

/// Both nonlinearity measures and the quantities they derive from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    /// Present exactly when `omega_r` is.
    pub eta_b: Option<f64>,
    /// `entropy_h(sqrt(det_sigma))`.
    pub eta_ng: f64,
    pub omega_r: Option<f64>,
    pub ground_energy: f64,
    pub det_sigma: f64,
    /// Squared overlap with the reference ground state.
    pub fidelity_to_reference: Option<f64>,
    pub diagnostics: Diagnostics,
}

/// Gaussian state given by its first and second moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianState {
    pub mean: (f64, f64),
    pub covariance: CovarianceMatrix,
}

/// `|<a|b>|^2` of two normalized states.
pub fn fidelity_pure(wf1: &SampledWavefunction, wf2: &SampledWavefunction) -> Result<f64> {
    let o = overlap(wf1, wf2)?;
    Ok(o * o)
}

/// `sqrt(2 (1 - sqrt F))` with `F` clamped to `[0, 1]`.
pub fn bures_distance(fidelity: f64) -> f64 {
    let f = if fidelity.is_nan() { 0.0 } else { fidelity.clamp(0.0, 1.0) };
    (2.0 * (1.0 - f.sqrt())).sqrt()
}

/// `eta_b` with default grid options; `None` without a reference frequency.
pub fn eta_bures(spec: &PotentialSpec) -> Result<Option<f64>> {
    Ok(measure_report(spec, &GridOptions::default())?.eta_b)
}

/// `eta_ng` with default grid options.
pub fn eta_ng(spec: &PotentialSpec) -> Result<f64> {
    Ok(measure_report(spec, &GridOptions::default())?.eta_ng)
}

/// Gaussian state sharing the moments of `cov`.
pub fn reference_gaussian(cov: &CovarianceMatrix) -> Result<GaussianState> {
    let det = cov.det();
    if det.is_nan() || det < 0.25 - HEISENBERG_TOLERANCE {
        return Err(Error::UnphysicalCovariance(det));
    }
    Ok(GaussianState { mean: (cov.mean_x, cov.mean_p), covariance: *cov })
}

/// Wigner density `exp(-d^T sigma^{-1} d / 2) / (2 pi sqrt(det sigma))`.
pub fn wigner_gaussian(g: &GaussianState, point: (f64, f64)) -> Result<f64> {
    let c = &g.covariance;
    let det = c.det();
    if det.is_nan() || det <= 0.0 {
        return Err(Error::SingularCovariance(det));
    }
    let (dx, dp) = (point.0 - g.mean.0, point.1 - g.mean.1);
    let quad = (c.var_p * dx * dx - 2.0 * c.cov_xp * dx * dp + c.var_x * dp * dp) / det;
    Ok((-0.5 * quad).exp() / (2.0 * std::f64::consts::PI * det.sqrt()))
}

fn ln_reference_amplitude(omega: f64, x: f64) -> f64 {
    0.25 * (omega / std::f64::consts::PI).ln() - 0.5 * omega * x * x
}

/// `|<reference|state>|` on `grid`, with the reference normalized in closed form.
fn reference_overlap(grid: &Grid, state: &[f64], omega_r: f64) -> f64 {
    let reference: Vec<f64> = grid.points().map(|x| ln_reference_amplitude(omega_r, x).exp()).collect();
    inner_product_on(grid, state, &reference).abs().min(1.0)
}

/// Every catalog ground state is centered on a potential minimum at `x = 0`.
fn eta_b_from_overlap(ov: f64) -> f64 {
    (1.0 - ov).max(0.0).sqrt()
}

fn perturbative_report(omega: f64, eps3: f64, eps4: f64) -> Result<MeasureReport> {
    let state = alpha_coefficients(eps3, eps4, omega)?;
    let (var_q, var_p) = perturbed_variances(&state);
    Ok(MeasureReport {
        eta_b: Some(eta_b_perturbative(&state)),
        eta_ng: eta_ng_perturbative(&state)?,
        omega_r: Some(omega),
        // first order: <0| eps4 x^4 |0> = 3 eps4 / (4 omega^2); the cubic term averages to zero
        ground_energy: 0.5 * omega + 0.75 * eps4 / (omega * omega),
        det_sigma: var_q * var_p,
        fidelity_to_reference: Some(1.0 / state.norm_n),
        diagnostics: Diagnostics {
            grid: None,
            norm_defect: None,
            moments: MomentsRoute::Perturbative,
            warnings: Vec::new(),
        },
    })
}

/// Closed-form Morse moments: `xi = (2N+1) e^{-alpha x}` makes `|psi|^2`
/// a Gamma(2N) density, so `var_x = trigamma(2N) / alpha^2` and
/// `var_p = alpha^2 N / 2`. The overlap with the reference is integrated on
/// a window covering the reference Gaussian, using the exact prefactor.
fn morse_closed_form(
    spec: &PotentialSpec,
    depth: f64,
    alpha: f64,
    omega_r: f64,
    options: &GridOptions,
) -> Result<(CovarianceMatrix, f64, Grid)> {
    let n = morse_n(depth, alpha);
    let var_x = trigamma(2.0 * n) / (alpha * alpha);
    let var_p = 0.5 * alpha * alpha * n;
    let ln_scaled = (2.0 * n + 1.0).ln();
    let mean_x = (ln_scaled - crate::specfun::digamma(2.0 * n)) / alpha;
    let cov = CovarianceMatrix { var_x, var_p, cov_xp: 0.0, mean_x, mean_p: 0.0 };
    let half = REFERENCE_WINDOW / omega_r.sqrt();
    let grid = Grid::new(-half, half, options.n_points)?;
    let state: Vec<f64> =
        grid.points().map(|x| ln_ground_state_amplitude(spec, x).map(f64::exp)).collect::<Result<_>>()?;
    let ov = reference_overlap(&grid, &state, omega_r);
    Ok((cov, ov, grid))
}

/// Evaluates both measures for `spec`.
///
/// Ground states are sampled on an automatically sized grid and
/// renormalized numerically. Morse states too wide for the grid limit
/// switch to closed-form moments.
pub fn measure_report(spec: &PotentialSpec, options: &GridOptions) -> Result<MeasureReport> {
    spec.validate()?;
    if let PotentialSpec::PerturbedHarmonic { omega, eps3, eps4 } = *spec {
        return perturbative_report(omega, eps3, eps4);
    }
    let omega_r = reference_frequency(spec)?;
    let energy = ground_energy(spec)?;
    let mut warnings = Vec::new();
    if let PotentialSpec::Morse { depth, alpha } = *spec {
        let edge = 2.0 * (2.0 * depth).sqrt();
        if alpha > MORSE_EDGE_WARNING * edge {
            warnings.push(format!(
                "alpha = {alpha} is within {:.0}% of the bound-state limit {edge:.6}",
                100.0 * (1.0 - MORSE_EDGE_WARNING)
            ));
        }
    }

    let (cov, ov, grid, norm_defect, route) = match auto_grid(spec, options) {
        Ok(grid) => {
            let wf = sample_ground_state_on(spec, grid, options.target_tail)?;
            let cov = covariance_of(&wf)?;
            let ov = omega_r.map(|w| reference_overlap(&grid, wf.amplitude(), w));
            (cov, ov, grid, Some(wf.norm_defect()), MomentsRoute::Quadrature)
        }
        Err(Error::GridExhausted { limit, .. }) if matches!(spec, PotentialSpec::Morse { .. }) => {
            let PotentialSpec::Morse { depth, alpha } = *spec else { unreachable!() };
            let w = omega_r.expect("Morse always has a reference frequency");
            let (cov, ov, grid) = morse_closed_form(spec, depth, alpha, w, options)?;
            warnings.push(format!("ground state extends past |x| = {limit}; using closed-form moments"));
            (cov, Some(ov), grid, None, MomentsRoute::ClosedForm)
        }
        Err(e) => return Err(e),
    };

    let det = cov.det();
    if det < 0.25 - HEISENBERG_TOLERANCE {
        return Err(Error::UnphysicalCovariance(det));
    }
    Ok(MeasureReport {
        eta_b: ov.map(eta_b_from_overlap),
        eta_ng: entropy_h(det.sqrt())?,
        omega_r,
        ground_energy: energy,
        det_sigma: det,
        fidelity_to_reference: ov.map(|o| o * o),
        diagnostics: Diagnostics { grid: Some(GridInfo::from(&grid)), norm_defect, moments: route, warnings },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{normalize, sample_ground_state};
    use crate::oracle::fd_ground_state;
    use crate::potentials::FS_P_PLUS;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn report(spec: PotentialSpec) -> MeasureReport {
        measure_report(&spec, &GridOptions::default()).unwrap()
    }

    fn gaussian(omega: f64, grid: Grid) -> SampledWavefunction {
        let wf = SampledWavefunction::from_fn(grid, 1e-6, |x| ln_reference_amplitude(omega, x).exp()).unwrap();
        normalize(&wf).unwrap()
    }

    #[test]
    fn fidelity_examples() {
        let grid = Grid::new(-12.0, 12.0, 2001).unwrap();
        let a = gaussian(1.0, grid);
        assert_relative_eq!(fidelity_pure(&a, &a).unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(fidelity_pure(&a, &gaussian(4.0, grid)).unwrap(), 0.8, epsilon = 1e-10);
        let odd = normalize(&SampledWavefunction::from_fn(grid, 1e-6, |x| x * (-0.5 * x * x).exp()).unwrap()).unwrap();
        assert!(fidelity_pure(&a, &odd).unwrap() < 1e-20);
    }

    #[test]
    fn bures_examples() {
        assert_eq!(bures_distance(1.0), 0.0);
        assert_relative_eq!(bures_distance(0.0), 2f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(bures_distance(0.25), 1.0, epsilon = 1e-15);
        assert_eq!(bures_distance(1.5), 0.0);
    }

    #[test]
    fn reduced_form_agrees_with_bures_distance() {
        for spec in [PotentialSpec::Morse { depth: 1.0, alpha: 1.0 }, PotentialSpec::ModifiedIsotonic { a: 2.0 }] {
            let r = report(spec);
            let via_db = bures_distance(r.fidelity_to_reference.unwrap()) / 2f64.sqrt();
            assert_relative_eq!(r.eta_b.unwrap(), via_db, epsilon = 1e-12);
        }
    }

    #[test]
    fn harmonic_null() {
        for omega in [0.1, 1.0, 3.0, 10.0] {
            let r = report(PotentialSpec::Harmonic { omega });
            assert!(r.eta_b.unwrap() <= 1e-6 && r.eta_ng <= 1e-6, "{omega}: {r:?}");
            assert_relative_eq!(r.det_sigma, 0.25, epsilon = 1e-9);
            assert_eq!(r.omega_r, Some(omega));
            assert_relative_eq!(r.ground_energy, 0.5 * omega, epsilon = 1e-15);
        }
    }

    #[test]
    fn displaced_gaussian_is_gaussian() {
        let grid = Grid::new(-15.0, 20.0, 4001).unwrap();
        let wf = normalize(&SampledWavefunction::from_fn(grid, 1e-8, |x| (-0.7 * (x - 2.5f64).powi(2)).exp()).unwrap())
            .unwrap();
        let cov = covariance_of(&wf).unwrap();
        assert!(entropy_h(cov.det().sqrt()).unwrap() <= 1e-6);
    }

    #[test]
    fn report_examples() {
        let r = report(PotentialSpec::ModifiedIsotonic { a: 1.0 });
        assert_relative_eq!(r.ground_energy, -3.5, epsilon = 1e-15);
        assert_relative_eq!(r.omega_r.unwrap(), 37f64.sqrt(), epsilon = 1e-15);
        assert!(r.eta_b.unwrap() > 0.0 && r.eta_ng > 0.0);

        let r = report(PotentialSpec::FellowsSmith { p: -0.9 });
        assert!(r.eta_b.is_none() && r.omega_r.is_none() && r.fidelity_to_reference.is_none());
        assert!(r.eta_ng > 0.0);
        assert_eq!(eta_bures(&PotentialSpec::FellowsSmith { p: -0.6 }).unwrap(), None);

        let r = report(PotentialSpec::ModifiedPoschlTeller { depth: 1.0, alpha: 1.0 });
        assert_relative_eq!(r.eta_ng, entropy_h(PI / 6.0).unwrap(), epsilon = 1e-7);
        assert_relative_eq!(r.eta_ng, 0.112_289_301_1, epsilon = 1e-7);

        assert!(eta_ng(&PotentialSpec::Morse { depth: 1.0, alpha: 2.8 }).unwrap() > 1.0);
        // high-precision quadrature oracle values
        for (alpha, expected) in [(0.01, 0.032_720_038_683), (0.1, 0.104_601_909_868), (1.0, 0.371_172_862_973)] {
            let eb = eta_bures(&PotentialSpec::Morse { depth: 1.0, alpha }).unwrap().unwrap();
            assert_relative_eq!(eb, expected, epsilon = 1e-7);
        }
        assert!(eta_ng(&PotentialSpec::Morse { depth: 1.0, alpha: 0.01 }).unwrap() <= 0.01);
        assert!(measure_report(&PotentialSpec::Morse { depth: 1.0, alpha: 3.0 }, &GridOptions::default()).is_err());
    }

    #[test]
    fn report_is_internally_consistent() {
        for spec in [
            PotentialSpec::Morse { depth: 2.0, alpha: 1.5 },
            PotentialSpec::ModifiedPoschlTeller { depth: 0.5, alpha: 1.5 },
            PotentialSpec::ModifiedIsotonic { a: 8.0 },
            PotentialSpec::FellowsSmith { p: -0.1 },
            PotentialSpec::FellowsSmith { p: -0.95 },
            PotentialSpec::PerturbedHarmonic { omega: 1.0, eps3: 0.1, eps4: 0.2 },
        ] {
            let r = report(spec);
            assert_eq!(r.eta_b.is_some(), r.omega_r.is_some());
            assert!((r.eta_ng - entropy_h(r.det_sigma.sqrt()).unwrap()).abs() <= 1e-12);
            assert!(r.det_sigma >= 0.25 - 1e-6);
            if let Some(eb) = r.eta_b {
                assert!((0.0..=1.0).contains(&eb));
            }
            assert_eq!(r, report(spec), "deterministic");
        }
    }

    #[test]
    fn perturbed_report_uses_closed_forms() {
        let r = report(PotentialSpec::PerturbedHarmonic { omega: 1.0, eps3: 0.0, eps4: 0.25 });
        assert_relative_eq!(r.eta_b.unwrap(), 0.182_769_4, epsilon = 1e-7);
        assert_relative_eq!(r.ground_energy, 0.5 + 0.1875, epsilon = 1e-15);
        assert_eq!(r.diagnostics.moments, MomentsRoute::Perturbative);
        assert!(measure_report(
            &PotentialSpec::PerturbedHarmonic { omega: 1.0, eps3: 0.7, eps4: 0.0 },
            &GridOptions::default()
        )
        .is_err());
    }

    #[test]
    fn morse_closed_form_matches_quadrature() {
        for (depth, alpha) in [(1.0, 1.0), (2.0, 0.7), (0.5, 1.2)] {
            let spec = PotentialSpec::Morse { depth, alpha };
            let q = report(spec);
            assert_eq!(q.diagnostics.moments, MomentsRoute::Quadrature);
            let w = q.omega_r.unwrap();
            let (cov, ov, _) = morse_closed_form(&spec, depth, alpha, w, &GridOptions::default()).unwrap();
            assert_relative_eq!(cov.det(), q.det_sigma, max_relative = 1e-7);
            assert_relative_eq!(eta_b_from_overlap(ov), q.eta_b.unwrap(), epsilon = 1e-8);
            let wf = sample_ground_state(&spec, &GridOptions::default()).unwrap();
            assert_relative_eq!(cov.mean_x, covariance_of(&wf).unwrap().mean_x, epsilon = 1e-8);
        }
    }

    #[test]
    fn morse_measures_vanish_at_small_alpha() {
        let eb = |alpha| eta_bures(&PotentialSpec::Morse { depth: 1.0, alpha }).unwrap().unwrap();
        let ng = |alpha| eta_ng(&PotentialSpec::Morse { depth: 1.0, alpha }).unwrap();
        let excess = |alpha| report(PotentialSpec::Morse { depth: 1.0, alpha }).det_sigma - 0.25;
        // eta_b ~ sqrt(alpha) and det - 1/4 ~ alpha
        for alpha in [1e-3, 1e-2] {
            assert_relative_eq!(eb(alpha) / eb(alpha / 4.0), 2.0, max_relative = 2e-2);
            assert_relative_eq!(excess(alpha) / excess(alpha / 4.0), 4.0, max_relative = 2e-2);
            assert!(ng(alpha / 4.0) < ng(alpha));
        }
        assert!(eb(1e-4) < 4e-3 && ng(1e-4) < 1e-4);
    }

    #[test]
    fn morse_edge_falls_back_and_warns() {
        let edge = 2.0 * 2f64.sqrt();
        let r = report(PotentialSpec::Morse { depth: 1.0, alpha: 0.99 * edge });
        assert_eq!(r.diagnostics.moments, MomentsRoute::ClosedForm);
        assert!(r.diagnostics.warnings.iter().any(|w| w.contains("bound-state limit")));
        assert!(r.eta_ng >= 1.0);
        assert!(r.eta_b.unwrap() < 1.0);
        assert!(report(PotentialSpec::Morse { depth: 1.0, alpha: 0.5 }).diagnostics.warnings.is_empty());
    }

    #[test]
    fn analytic_and_fd_states_give_the_same_measures() {
        for spec in [
            PotentialSpec::Morse { depth: 1.0, alpha: 0.5 },
            PotentialSpec::ModifiedPoschlTeller { depth: 2.0, alpha: 0.5 },
            PotentialSpec::ModifiedIsotonic { a: 2.0 },
            PotentialSpec::FellowsSmith { p: -0.4 },
        ] {
            let r = report(spec);
            let grid = auto_grid(&spec, &GridOptions::default()).unwrap();
            let fd = fd_ground_state(&spec, &grid).unwrap();
            let cov = covariance_of(&fd.wavefunction).unwrap();
            assert!((entropy_h(cov.det().sqrt()).unwrap() - r.eta_ng).abs() <= 1e-4, "{spec:?}");
        }
    }

    fn increasing(v: &[f64]) -> bool {
        v.windows(2).all(|w| w[1] > w[0])
    }

    #[test]
    fn morse_and_mpt_trends() {
        for depth in [0.5f64, 1.0, 3.0] {
            let edge = 2.0 * (2.0 * depth).sqrt();
            for make in [
                |d, a| PotentialSpec::Morse { depth: d, alpha: a },
                |d, a| PotentialSpec::ModifiedPoschlTeller { depth: d, alpha: a },
            ] {
                let rs: Vec<_> = (1..=20).map(|k| report(make(depth, edge * k as f64 / 21.0))).collect();
                assert!(increasing(&rs.iter().map(|r| r.eta_ng).collect::<Vec<_>>()), "{depth}");
                assert!(increasing(&rs.iter().map(|r| r.eta_b.unwrap()).collect::<Vec<_>>()), "{depth}");
            }
        }
        for alpha in [0.3, 1.0, 1.9] {
            for make in [
                |d, a| PotentialSpec::Morse { depth: d, alpha: a },
                |d, a| PotentialSpec::ModifiedPoschlTeller { depth: d, alpha: a },
            ] {
                let rs: Vec<_> = [3.0, 1.0, 0.5].iter().map(|&d| report(make(d, alpha))).collect();
                assert!(increasing(&rs.iter().map(|r| r.eta_ng).collect::<Vec<_>>()));
                assert!(increasing(&rs.iter().map(|r| r.eta_b.unwrap()).collect::<Vec<_>>()));
            }
        }
    }

    #[test]
    fn mio_shape() {
        let rs: Vec<_> = (0..40)
            .map(|k| report(PotentialSpec::ModifiedIsotonic { a: 0.2 * 250f64.powf(k as f64 / 39.0) }))
            .collect();
        assert!(increasing(&rs.iter().map(|r| r.eta_b.unwrap()).collect::<Vec<_>>()));
        let ng: Vec<f64> = rs.iter().map(|r| r.eta_ng).collect();
        let signs: Vec<bool> = ng.windows(2).map(|w| w[1] > w[0]).collect();
        assert_eq!(signs.windows(2).filter(|s| s[0] != s[1]).count(), 1);
        assert!(signs[0] && !signs[signs.len() - 1]);
    }

    #[test]
    fn fellows_smith_trend() {
        let ps: Vec<f64> = (0..30).map(|k| -0.98 + 0.98 * k as f64 / 29.0).collect();
        let rs: Vec<_> = ps.iter().map(|&p| report(PotentialSpec::FellowsSmith { p })).collect();
        assert!(rs.windows(2).all(|w| w[1].eta_ng < w[0].eta_ng));
        for (p, r) in ps.iter().zip(&rs) {
            assert_eq!(r.eta_b.is_some(), *p >= FS_P_PLUS, "{p}");
        }
    }

    #[test]
    fn gaussian_utilities() {
        let vac = reference_gaussian(&CovarianceMatrix::vacuum(1.0)).unwrap();
        assert_eq!(vac.mean, (0.0, 0.0));
        assert_relative_eq!(wigner_gaussian(&vac, (0.0, 0.0)).unwrap(), 1.0 / PI, epsilon = 1e-15);
        assert_relative_eq!(wigner_gaussian(&vac, (1.0, 0.0)).unwrap(), (-1.0f64).exp() / PI, epsilon = 1e-15);
        let sech = CovarianceMatrix { var_x: PI * PI / 12.0, var_p: 1.0 / 3.0, cov_xp: 0.0, mean_x: 0.0, mean_p: 0.0 };
        let g = reference_gaussian(&sech).unwrap();
        assert_eq!(g.covariance, sech);
        assert_relative_eq!(wigner_gaussian(&g, (0.0, 0.0)).unwrap(), 1.0 / (2.0 * PI * sech.det().sqrt()));
        let bad = CovarianceMatrix { var_x: 0.4, var_p: 0.4, ..sech };
        assert!(matches!(reference_gaussian(&bad), Err(Error::UnphysicalCovariance(_))));
        let singular = GaussianState { mean: (0.0, 0.0), covariance: CovarianceMatrix { var_p: 0.0, ..sech } };
        assert!(matches!(wigner_gaussian(&singular, (0.0, 0.0)), Err(Error::SingularCovariance(_))));
    }

    #[test]
    fn wigner_integrates_to_one() {
        let cov = CovarianceMatrix { var_x: 0.8, var_p: 0.5, cov_xp: 0.3, mean_x: 0.4, mean_p: -0.2 };
        let g = reference_gaussian(&cov).unwrap();
        let (n, l) = (301, 8.0);
        let h = 2.0 * l / (n - 1) as f64;
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                total += wigner_gaussian(&g, (-l + i as f64 * h, -l + j as f64 * h)).unwrap();
            }
        }
        assert!((total * h * h - 1.0).abs() < 1e-3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn measures_are_in_range(alpha in 0.05f64..2.7, depth in 0.5f64..3.0, a in 0.2f64..50.0) {
            let specs = [
                PotentialSpec::ModifiedPoschlTeller { depth, alpha },
                PotentialSpec::ModifiedIsotonic { a },
            ];
            for spec in specs {
                let r = report(spec);
                prop_assert!(r.det_sigma >= 0.25 - 1e-6);
                prop_assert!(r.eta_ng >= 0.0);
                let eb = r.eta_b.unwrap();
                prop_assert!((0.0..=1.0).contains(&eb));
            }
        }

        #[test]
        fn bures_is_decreasing(f1 in 0.0f64..1.0, f2 in 0.0f64..1.0) {
            prop_assume!(f1 < f2);
            prop_assert!(bures_distance(f1) > bures_distance(f2));
        }
    }
}
