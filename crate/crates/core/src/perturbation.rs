//! Closed-form measures for a harmonic oscillator perturbed by
//! `eps3 x^3 + eps4 x^4`, keeping the ground state to first order as
//! `N^{-1/2} (|0> + alpha1 |1> + alpha2 |2>)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::potentials::DEFAULT_PERTURBATIVE_GUARD;
use crate::specfun::entropy_h;

/// First-order perturbed ground state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerturbativeState {
    pub alpha1: f64,
    pub alpha2: f64,
    /// `1 + alpha1^2 + alpha2^2`
    pub norm_n: f64,
    pub omega: f64,
}

impl PerturbativeState {
    pub fn new(alpha1: f64, alpha2: f64, omega: f64) -> Self {
        Self { alpha1, alpha2, norm_n: 1.0 + alpha1 * alpha1 + alpha2 * alpha2, omega }
    }
}

fn check_guard(name: &'static str, value: f64, guard: f64) -> Result<()> {
    if !value.is_finite() || value.abs() > guard {
        return Err(Error::PerturbativeGuard { name, value: value.abs(), limit: guard });
    }
    Ok(())
}

/// `alpha1 = -3 eps3 / (2 omega)^{3/2}`, `alpha2 = -(eps4/2)(3/sqrt 2)/omega^2`.
///
/// The energy denominators are taken as the level index `k`, which matches
/// the level spacing only at `omega = 1`; other frequencies use the same
/// expressions unchanged.
pub fn alpha_coefficients(eps3: f64, eps4: f64, omega: f64) -> Result<PerturbativeState> {
    alpha_coefficients_with_guard(eps3, eps4, omega, DEFAULT_PERTURBATIVE_GUARD)
}

pub fn alpha_coefficients_with_guard(eps3: f64, eps4: f64, omega: f64, guard: f64) -> Result<PerturbativeState> {
    check_guard("eps3", eps3, guard)?;
    check_guard("eps4", eps4, guard)?;
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidSpec(format!("omega must be positive, got {omega}")));
    }
    let alpha1 = -3.0 * eps3 / (2.0 * omega).powf(1.5);
    let alpha2 = -0.5 * eps4 * 3.0 / std::f64::consts::SQRT_2 / (omega * omega);
    Ok(PerturbativeState::new(alpha1, alpha2, omega))
}

/// Position and momentum variances of the perturbed state, in units where
/// the unperturbed vacuum has both equal to 1/2.
pub fn perturbed_variances(state: &PerturbativeState) -> (f64, f64) {
    let (a1, a2, n) = (state.alpha1, state.alpha2, state.norm_n);
    let s2 = std::f64::consts::SQRT_2;
    let var_q = (3.0 * a1.powi(4) - 6.0 * s2 * a1 * a1 * a2 + (1.0 + a2 * a2) * (1.0 + 2.0 * s2 * a2 + 5.0 * a2 * a2))
        / (2.0 * n * n);
    let var_p = 1.5 - (1.0 + s2 * a2 - a2 * a2) / n;
    (var_q, var_p)
}

/// `sqrt(1 - N^{-1/2})`.
pub fn eta_b_perturbative(state: &PerturbativeState) -> f64 {
    let n = state.norm_n;
    let excess = state.alpha1 * state.alpha1 + state.alpha2 * state.alpha2;
    // 1 - N^{-1/2} without cancellation
    (excess / n / (1.0 + n.sqrt().recip())).sqrt()
}

/// `h(sqrt(var_q var_p))`.
pub fn eta_ng_perturbative(state: &PerturbativeState) -> Result<f64> {
    let (var_q, var_p) = perturbed_variances(state);
    entropy_h((var_q * var_p).sqrt())
}

/// Two readings of the `eta_ng(eta_b)` curve for even perturbations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub eta_b: f64,
    /// `h(sqrt(1 + 24 eta_b^2 (eta_b^2 - 2)) / 2)`; `None` where the argument
    /// of `h` drops below 1/2, i.e. for every `eta_b > 0`.
    pub printed: Option<f64>,
    /// `h(sqrt(1 + 24 [eta_b^2 (eta_b^2 - 2)]^2) / 2)`, which follows from the
    /// variance formulas with `alpha1 = 0`.
    pub corrected: f64,
}

pub fn parametric_curve(eta_b: f64) -> Result<CurvePoint> {
    if !(0.0..1.0).contains(&eta_b) {
        return Err(Error::InvalidSpec(format!("eta_b must lie in [0, 1), got {eta_b}")));
    }
    let t = eta_b * eta_b * (eta_b * eta_b - 2.0);
    let printed_arg = 0.5 * (1.0 + 24.0 * t).sqrt();
    // no clamping here: any shortfall below 1/2 means the formula is not evaluable
    let printed = if printed_arg >= 0.5 { entropy_h(printed_arg).ok() } else { None };
    let corrected = entropy_h(0.5 * (1.0 + 24.0 * t * t).sqrt())?;
    Ok(CurvePoint { eta_b, printed, corrected })
}

/// One sample of the perturbative ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatterRecord {
    pub eps3: f64,
    pub eps4: f64,
    pub eta_b: f64,
    pub eta_ng: f64,
}

impl ScatterRecord {
    pub fn from_eps(eps3: f64, eps4: f64, omega: f64) -> Result<Self> {
        let state = alpha_coefficients(eps3, eps4, omega)?;
        Ok(Self { eps3, eps4, eta_b: eta_b_perturbative(&state), eta_ng: eta_ng_perturbative(&state)? })
    }
}

fn check_range(name: &'static str, (lo, hi): (f64, f64)) -> Result<()> {
    if lo.is_nan() || hi.is_nan() || lo > hi {
        return Err(Error::InvalidSpec(format!("{name} range [{lo}, {hi}] is empty")));
    }
    check_guard(name, lo, DEFAULT_PERTURBATIVE_GUARD)?;
    check_guard(name, hi, DEFAULT_PERTURBATIVE_GUARD)
}

/// `n` records with `eps3`, `eps4` drawn uniformly and independently from
/// the given closed ranges. The ChaCha8 stream seeded with `seed` makes the
/// output reproducible.
pub fn scatter_sample(
    n: usize,
    eps3_range: (f64, f64),
    eps4_range: (f64, f64),
    omega: f64,
    seed: u64,
) -> Result<Vec<ScatterRecord>> {
    check_range("eps3", eps3_range)?;
    check_range("eps4", eps4_range)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let eps3 = rng.gen_range(eps3_range.0..=eps3_range.1);
            let eps4 = rng.gen_range(eps4_range.0..=eps4_range.1);
            ScatterRecord::from_eps(eps3, eps4, omega)
        })
        .collect()
}
