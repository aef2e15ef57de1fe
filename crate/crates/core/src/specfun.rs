//! Scalar special functions: Gamma, Kummer's confluent hypergeometric
//! function and the Gaussian-state entropy `h`.

use crate::error::{Error, Result};

/// Value of a special function, with its natural logarithm when the value is
/// too large to be used directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluationResult {
    pub value: f64,
    /// `ln(value)`, populated whenever `value > 1e100` (including overflow to
    /// infinity).
    pub log_scaled: Option<f64>,
}

impl EvaluationResult {
    /// Natural log of the value, if the value is strictly positive.
    pub fn ln(&self) -> Option<f64> {
        match self.log_scaled {
            Some(l) => Some(l),
            None if self.value > 0.0 => Some(self.value.ln()),
            None => None,
        }
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
/// Largest argument with a finite `Gamma`.
const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

fn lanczos_sum(x: f64) -> f64 {
    // x is the shifted argument (Gamma(x + 1) form)
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    acc
}

/// `Gamma(x)` for real `x` that is not a non-positive integer.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !x.is_finite() || is_nonpositive_integer(x) {
        return Err(Error::GammaPole(x));
    }
    if x > GAMMA_MAX_ARG {
        return Err(Error::GammaOverflow(x));
    }
    if x == x.floor() && x <= 21.0 {
        // exact for small integers
        let mut f = 1.0;
        let mut k = 2.0;
        while k < x {
            f *= k;
            k += 1.0;
        }
        return Ok(f);
    }
    if x < 0.5 {
        let s = (std::f64::consts::PI * x).sin();
        return Ok(std::f64::consts::PI / (s * gamma_fn(1.0 - x)?));
    }
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    // split the power so t^(xm + 1/2) cannot overflow before Gamma does
    let half = t.powf(0.5 * (xm + 0.5));
    let value = (2.0 * std::f64::consts::PI).sqrt() * half * (half * (-t).exp()) * lanczos_sum(xm);
    if value.is_infinite() {
        return Err(Error::GammaOverflow(x));
    }
    Ok(value)
}

/// `ln |Gamma(x)|`, valid far beyond the range where `Gamma` itself is finite.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || is_nonpositive_integer(x) {
        return Err(Error::GammaPole(x));
    }
    if x < 0.5 {
        let s = (std::f64::consts::PI * x).sin().abs();
        return Ok(std::f64::consts::PI.ln() - s.ln() - ln_gamma(1.0 - x)?);
    }
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    Ok(LN_SQRT_2PI + (xm + 0.5) * t.ln() - t + lanczos_sum(xm).ln())
}

/// Digamma function `psi(x) = d/dx ln Gamma(x)` for `x > 0`.
pub fn digamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut acc = 0.0;
    let mut z = x;
    while z < 12.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    let tail = inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))));
    acc + z.ln() - 0.5 / z - tail
}

/// Trigamma function `psi_1(x) = d^2/dx^2 ln Gamma(x)` for `x > 0`.
pub fn trigamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut acc = 0.0;
    let mut z = x;
    while z < 12.0 {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    // asymptotic series with Bernoulli coefficients
    let tail =
        inv2 * (1.0 / 6.0 + inv2 * (-1.0 / 30.0 + inv2 * (1.0 / 42.0 + inv2 * (-1.0 / 30.0 + inv2 * 5.0 / 66.0))));
    acc + inv + 0.5 * inv2 + inv * tail
}

const RESCALE: f64 = 1e200;
const KUMMER_MAX_TERMS: usize = 2_000_000;
/// Loss of precision tolerated in a series with cancelling terms.
const KUMMER_CANCELLATION_LIMIT: f64 = 1e-11;

/// Scaled series sum: the function value is `sum * exp(log_offset)`.
struct ScaledSum {
    sum: f64,
    log_offset: f64,
}

fn kummer_series(a: f64, b: f64, z: f64) -> Result<ScaledSum> {
    let mut sum = 1.0_f64;
    let mut comp = 0.0_f64;
    let mut term = 1.0_f64;
    let mut log_offset = 0.0;
    let mut largest = 1.0_f64;
    let mut converged = false;
    for n in 0..KUMMER_MAX_TERMS {
        let nf = n as f64;
        let ratio = (a + nf) * z / ((b + nf) * (nf + 1.0));
        term *= ratio;
        if term == 0.0 {
            converged = true;
            break;
        }
        // Kahan-Babuska compensated accumulation
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        largest = largest.max(term.abs());
        if sum.abs() > RESCALE {
            sum /= RESCALE;
            comp /= RESCALE;
            term /= RESCALE;
            largest /= RESCALE;
            log_offset += RESCALE.ln();
        }
        let next_ratio = ((a + nf + 1.0) * z / ((b + nf + 1.0) * (nf + 2.0))).abs();
        if next_ratio < 0.5 && term.abs() <= f64::EPSILON * 0.25 * (sum + comp).abs() {
            converged = true;
            break;
        }
    }
    let total = sum + comp;
    if !converged || !total.is_finite() {
        return Err(Error::KummerNonConvergence { a, b, z });
    }
    if total == 0.0 || largest / total.abs() * f64::EPSILON > KUMMER_CANCELLATION_LIMIT {
        return Err(Error::KummerNonConvergence { a, b, z });
    }
    Ok(ScaledSum { sum: total, log_offset })
}

/// Kummer's confluent hypergeometric function `1F1(a; b; z)`.
///
/// Positive arguments are summed term by term with compensated, rescaled
/// accumulation, so the result stays representable in log form even when
/// the value itself overflows. Negative arguments go through Kummer's
/// transformation `1F1(a; b; z) = e^z 1F1(b - a; b; -z)`.
pub fn kummer_phi(a: f64, b: f64, z: f64) -> Result<EvaluationResult> {
    if !b.is_finite() || is_nonpositive_integer(b) {
        return Err(Error::KummerPole(b));
    }
    if !a.is_finite() || !z.is_finite() {
        return Err(Error::KummerNonConvergence { a, b, z });
    }
    if z == 0.0 {
        return Ok(EvaluationResult { value: 1.0, log_scaled: None });
    }
    let (series, extra_log) = if z > 0.0 { (kummer_series(a, b, z)?, 0.0) } else { (kummer_series(b - a, b, -z)?, z) };
    let log_offset = series.log_offset + extra_log;
    let sign = series.sum.signum();
    let log_abs = series.sum.abs().ln() + log_offset;
    let value = if log_offset == 0.0 { series.sum } else { sign * log_abs.exp() };
    let log_scaled = (sign > 0.0 && log_abs > 100.0 * std::f64::consts::LN_10).then_some(log_abs);
    Ok(EvaluationResult { value, log_scaled })
}

/// `ln 1F1(a; b; z)`; fails if the function is not strictly positive.
pub fn ln_kummer_phi(a: f64, b: f64, z: f64) -> Result<f64> {
    kummer_phi(a, b, z)?.ln().ok_or(Error::KummerNonConvergence { a, b, z })
}

/// Inputs this far below 1/2 are treated as rounding noise and clamped.
pub const ENTROPY_CLAMP: f64 = 1e-9;

/// Entropy of a single-mode Gaussian state with symplectic eigenvalue `x`:
/// `h(x) = (x + 1/2) ln(x + 1/2) - (x - 1/2) ln(x - 1/2)`.
pub fn entropy_h(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.5 - ENTROPY_CLAMP {
        return Err(Error::EntropyDomain(x));
    }
    let excess = (x - 0.5).max(0.0);
    let plus = (1.0 + excess) * excess.ln_1p();
    let minus = if excess > 0.0 { excess * excess.ln() } else { 0.0 };
    Ok(plus - minus)
}
