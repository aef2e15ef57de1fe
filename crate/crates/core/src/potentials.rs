//! Oscillator potentials with exactly known ground states.
//!
//! Every catalog entry exposes the potential, the ground-state amplitude,
//! the ground energy and, when one exists, the frequency of the harmonic
//! oscillator that matches the potential near its minimum. The coordinate
//! origin is always the potential minimum used for that reference.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{ln_gamma, ln_kummer_phi};

/// Default bound on `|eps3|` and `|eps4|` for perturbed harmonic oscillators.
pub const DEFAULT_PERTURBATIVE_GUARD: f64 = 0.5;

/// Upper boundary of the Fellows-Smith double-well region, `-1/2 + sqrt(2)/4`.
pub const FS_P_PLUS: f64 = -0.5 + std::f64::consts::SQRT_2 / 4.0;
/// Lower boundary of the Fellows-Smith double-well region, `-1/2 - sqrt(2)/4`.
pub const FS_P_MINUS: f64 = -0.5 - std::f64::consts::SQRT_2 / 4.0;

const LN_PI: f64 = 1.144_729_885_849_400_2;

/// An oscillator potential and its parameters (`hbar = m = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialSpec {
    /// `omega^2 x^2 / 2`
    Harmonic { omega: f64 },
    /// `D (e^{-2 alpha x} - 2 e^{-alpha x})`
    Morse { depth: f64, alpha: f64 },
    /// `-D / cosh^2(alpha x)`
    ModifiedPoschlTeller { depth: f64, alpha: f64 },
    /// `(x^2 + 4 (a + 2)(a x^2 - 1) / (a (a x^2 + 1)^2)) / 2`
    ModifiedIsotonic { a: f64 },
    /// Supersymmetric partner family of the harmonic oscillator, `p in (-1, 0]`.
    FellowsSmith { p: f64 },
    /// `omega^2 x^2 / 2 + eps3 x^3 + eps4 x^4`, treated perturbatively.
    PerturbedHarmonic { omega: f64, eps3: f64, eps4: f64 },
}

/// Well topology of the Fellows-Smith potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WellStructure {
    SingleWell,
    DoubleWell,
    TripleWell,
}

fn positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("{name} must be positive and finite, got {value}")))
    }
}

impl PotentialSpec {
    /// Short name used in the text form (`morse`, `mpt`, ...).
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Harmonic { .. } => "harmonic",
            Self::Morse { .. } => "morse",
            Self::ModifiedPoschlTeller { .. } => "mpt",
            Self::ModifiedIsotonic { .. } => "mio",
            Self::FellowsSmith { .. } => "fs",
            Self::PerturbedHarmonic { .. } => "pert",
        }
    }

    /// Checks parameter signs and finiteness only. The Morse bound-state
    /// constraint is not enforced here.
    pub fn validate_shape(&self) -> Result<()> {
        match *self {
            Self::Harmonic { omega } => positive("omega", omega),
            Self::Morse { depth, alpha } | Self::ModifiedPoschlTeller { depth, alpha } => {
                positive("D", depth)?;
                positive("alpha", alpha)
            }
            Self::ModifiedIsotonic { a } => positive("a", a),
            Self::FellowsSmith { p } => {
                if p.is_finite() && p > -1.0 && p <= 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidSpec(format!("Fellows-Smith p must lie in (-1, 0], got {p}")))
                }
            }
            Self::PerturbedHarmonic { omega, eps3, eps4 } => {
                positive("omega", omega)?;
                if eps3.is_finite() && eps4.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidSpec("eps3 and eps4 must be finite".into()))
                }
            }
        }
    }

    /// Full validation with the default perturbative guard.
    pub fn validate(&self) -> Result<()> {
        self.validate_with_guard(DEFAULT_PERTURBATIVE_GUARD)
    }

    pub fn validate_with_guard(&self, guard: f64) -> Result<()> {
        self.validate_shape()?;
        match *self {
            Self::Morse { depth, alpha } => {
                let limit = 2.0 * (2.0 * depth).sqrt();
                if alpha >= limit {
                    return Err(Error::InvalidSpec(format!(
                        "Morse bound-state constraint alpha < 2*sqrt(2D) = {limit} violated (alpha = {alpha}); no bound state exists"
                    )));
                }
                Ok(())
            }
            Self::PerturbedHarmonic { eps3, eps4, .. } => {
                if eps3.abs() > guard {
                    return Err(Error::PerturbativeGuard { name: "eps3", value: eps3.abs(), limit: guard });
                }
                if eps4.abs() > guard {
                    return Err(Error::PerturbativeGuard { name: "eps4", value: eps4.abs(), limit: guard });
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Names of the parameters accepted by [`PotentialSpec::with_parameter`].
    pub fn parameter_names(&self) -> &'static [&'static str] {
        match self {
            Self::Harmonic { .. } => &["omega"],
            Self::Morse { .. } | Self::ModifiedPoschlTeller { .. } => &["D", "alpha"],
            Self::ModifiedIsotonic { .. } => &["a"],
            Self::FellowsSmith { .. } => &["p"],
            Self::PerturbedHarmonic { .. } => &["omega", "eps3", "eps4"],
        }
    }

    /// Copy of `self` with one named parameter replaced.
    pub fn with_parameter(&self, name: &str, value: f64) -> Result<Self> {
        let mut out = *self;
        let slot: Option<&mut f64> = match (&mut out, name) {
            (Self::Harmonic { omega }, "omega") => Some(omega),
            (Self::Morse { depth, .. }, "D") | (Self::ModifiedPoschlTeller { depth, .. }, "D") => Some(depth),
            (Self::Morse { alpha, .. }, "alpha") | (Self::ModifiedPoschlTeller { alpha, .. }, "alpha") => Some(alpha),
            (Self::ModifiedIsotonic { a }, "a") => Some(a),
            (Self::FellowsSmith { p }, "p") => Some(p),
            (Self::PerturbedHarmonic { omega, .. }, "omega") => Some(omega),
            (Self::PerturbedHarmonic { eps3, .. }, "eps3") => Some(eps3),
            (Self::PerturbedHarmonic { eps4, .. }, "eps4") => Some(eps4),
            _ => None,
        };
        match slot {
            Some(v) => {
                *v = value;
                Ok(out)
            }
            None => Err(Error::InvalidSpec(format!(
                "'{name}' is not a parameter of {} (expected one of {:?})",
                self.kind(),
                self.parameter_names()
            ))),
        }
    }

    /// Whether `V(-x) = V(x)`.
    pub fn is_even(&self) -> bool {
        match *self {
            Self::Morse { .. } => false,
            Self::PerturbedHarmonic { eps3, .. } => eps3 == 0.0,
            _ => true,
        }
    }
}

impl fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Harmonic { omega } => write!(f, "harmonic:omega={omega}"),
            Self::Morse { depth, alpha } => write!(f, "morse:D={depth},alpha={alpha}"),
            Self::ModifiedPoschlTeller { depth, alpha } => write!(f, "mpt:D={depth},alpha={alpha}"),
            Self::ModifiedIsotonic { a } => write!(f, "mio:a={a}"),
            Self::FellowsSmith { p } => write!(f, "fs:p={p}"),
            Self::PerturbedHarmonic { omega, eps3, eps4 } => {
                write!(f, "pert:omega={omega},eps3={eps3},eps4={eps4}")
            }
        }
    }
}

impl FromStr for PotentialSpec {
    type Err = Error;

    /// Parses `kind:key=value,...`, e.g. `morse:D=1,alpha=1` or `fs:p=-0.4`.
    /// The result is shape-checked but not fully validated, so that specs
    /// violating the Morse bound-state constraint can still reach the
    /// oracle.
    fn from_str(input: &str) -> Result<Self> {
        let parse_err = |reason: String| Error::Parse { input: input.to_string(), reason };
        let (kind, params) = input.trim().split_once(':').unwrap_or((input.trim(), ""));
        let base = match kind.to_ascii_lowercase().as_str() {
            "harmonic" => Self::Harmonic { omega: 1.0 },
            "morse" => Self::Morse { depth: f64::NAN, alpha: f64::NAN },
            "mpt" => Self::ModifiedPoschlTeller { depth: f64::NAN, alpha: f64::NAN },
            "mio" => Self::ModifiedIsotonic { a: f64::NAN },
            "fs" => Self::FellowsSmith { p: f64::NAN },
            "pert" => Self::PerturbedHarmonic { omega: 1.0, eps3: 0.0, eps4: 0.0 },
            other => return Err(parse_err(format!("unknown potential kind '{other}'"))),
        };
        let mut spec = base;
        for pair in params.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) =
                pair.split_once('=').ok_or_else(|| parse_err(format!("expected key=value, got '{pair}'")))?;
            let value: f64 =
                value.trim().parse().map_err(|_| parse_err(format!("'{}' is not a number", value.trim())))?;
            let key = match key.trim() {
                "d" | "D" | "depth" => "D",
                other => other,
            };
            spec = spec.with_parameter(key, value).map_err(|e| parse_err(e.to_string()))?;
        }
        spec.validate_shape().map_err(|e| match e {
            Error::InvalidSpec(reason) if reason.contains("NaN") => {
                parse_err(format!("missing parameter (expected {:?})", base.parameter_names()))
            }
            other => parse_err(other.to_string()),
        })?;
        Ok(spec)
    }
}

/// `N = sqrt(2D)/alpha - 1/2`; the Morse well supports `n < N`.
pub fn morse_n(depth: f64, alpha: f64) -> f64 {
    (2.0 * depth).sqrt() / alpha - 0.5
}

/// `s = (sqrt(1 + 8D/alpha^2) - 1) / 2` of the modified Pöschl-Teller well.
pub fn mpt_s(depth: f64, alpha: f64) -> f64 {
    0.5 * ((1.0 + 8.0 * depth / (alpha * alpha)).sqrt() - 1.0)
}

/// Number of Morse bound states, `ceil(N)` for `N > 0` and 0 otherwise.
pub fn morse_bound_state_count(depth: f64, alpha: f64) -> usize {
    let n = morse_n(depth, alpha);
    if n > 0.0 {
        n.ceil() as usize
    } else {
        0
    }
}

pub fn fellows_smith_well_structure(p: f64) -> Result<WellStructure> {
    PotentialSpec::FellowsSmith { p }.validate_shape()?;
    Ok(if p >= FS_P_PLUS {
        WellStructure::SingleWell
    } else if p >= FS_P_MINUS {
        WellStructure::DoubleWell
    } else {
        WellStructure::TripleWell
    })
}

fn ln_cosh(y: f64) -> f64 {
    let y = y.abs();
    y + (-2.0 * y).exp().ln_1p() - std::f64::consts::LN_2
}

/// `ln Phi((3+p)/2, 3/2; x^2) - ln Phi((1+p)/2, 1/2; x^2)`.
fn fellows_smith_ratio(p: f64, x: f64) -> Result<f64> {
    let z = x * x;
    let num = ln_kummer_phi(0.5 * (3.0 + p), 1.5, z)?;
    let den = ln_kummer_phi(0.5 * (1.0 + p), 0.5, z)?;
    Ok((num - den).exp())
}

/// `V(x)` for a validated spec.
pub fn evaluate_potential(spec: &PotentialSpec, x: f64) -> Result<f64> {
    spec.validate()?;
    potential_unchecked(spec, x)
}

/// `V(x)` after shape checks only; used by the oracle, which also probes
/// parameters outside the bound-state region.
pub(crate) fn potential_unchecked(spec: &PotentialSpec, x: f64) -> Result<f64> {
    Ok(match *spec {
        PotentialSpec::Harmonic { omega } => 0.5 * omega * omega * x * x,
        PotentialSpec::Morse { depth, alpha } => {
            let e = (-alpha * x).exp();
            depth * (e * e - 2.0 * e)
        }
        PotentialSpec::ModifiedPoschlTeller { depth, alpha } => {
            let sech = 1.0 / (alpha * x).cosh();
            -depth * sech * sech
        }
        PotentialSpec::ModifiedIsotonic { a } => {
            let u = a * x * x;
            debug_assert!(u + 1.0 > 0.0);
            0.5 * (x * x + 4.0 * (a + 2.0) * (u - 1.0) / (a * (u + 1.0) * (u + 1.0)))
        }
        PotentialSpec::FellowsSmith { p } => {
            let r = fellows_smith_ratio(p, x)?;
            -2.0 * p + 0.5 * x * x + 4.0 * (1.0 + p) * x * x * ((1.0 + p) * r * r - r)
        }
        PotentialSpec::PerturbedHarmonic { omega, eps3, eps4 } => {
            let x2 = x * x;
            0.5 * omega * omega * x2 + eps3 * x2 * x + eps4 * x2 * x2
        }
    })
}

/// Log of the printed normalization prefactor of each analytic ground state.
fn ln_prefactor(spec: &PotentialSpec) -> Result<f64> {
    Ok(match *spec {
        PotentialSpec::Harmonic { omega } => 0.25 * (omega.ln() - LN_PI),
        PotentialSpec::Morse { depth, alpha } => {
            let n = morse_n(depth, alpha);
            0.5 * std::f64::consts::LN_2
                + n * (2.0 * n + 1.0).ln()
                + 0.5 * ((n * alpha).ln() - ln_gamma(2.0 * n + 1.0)?)
        }
        PotentialSpec::ModifiedPoschlTeller { depth, alpha } => {
            let s = mpt_s(depth, alpha);
            -0.25 * LN_PI + 0.5 * (alpha.ln() + ln_gamma(0.5 + s)? - ln_gamma(s)?)
        }
        PotentialSpec::ModifiedIsotonic { a } => -0.25 * LN_PI - 0.5 * ln_kummer_phi(4.0 / a, 0.5 + 4.0 / a, 1.0 / a)?,
        PotentialSpec::FellowsSmith { p } => {
            -0.25 * LN_PI + 0.5 * (p * std::f64::consts::LN_2 - ln_gamma(1.0 + p)?) + ln_gamma(1.0 + 0.5 * p)?
        }
        PotentialSpec::PerturbedHarmonic { .. } => return Err(perturbed_unsupported()),
    })
}

fn perturbed_unsupported() -> Error {
    Error::Unsupported("perturbed harmonic oscillators (use the perturbation module)".into())
}

/// Natural log of the ground-state amplitude, including the printed prefactor.
pub fn ln_ground_state_amplitude(spec: &PotentialSpec, x: f64) -> Result<f64> {
    spec.validate()?;
    let shape = match *spec {
        PotentialSpec::Harmonic { omega } => -0.5 * omega * x * x,
        PotentialSpec::Morse { depth, alpha } => {
            let n = morse_n(depth, alpha);
            -alpha * n * x - (n + 0.5) * (-alpha * x).exp()
        }
        PotentialSpec::ModifiedPoschlTeller { depth, alpha } => -mpt_s(depth, alpha) * ln_cosh(alpha * x),
        PotentialSpec::ModifiedIsotonic { a } => -0.5 * x * x - 2.0 / a * (1.0 / a + x * x).ln(),
        PotentialSpec::FellowsSmith { p } => 0.5 * x * x - ln_kummer_phi(0.5 * (1.0 + p), 0.5, x * x)?,
        PotentialSpec::PerturbedHarmonic { .. } => return Err(perturbed_unsupported()),
    };
    Ok(ln_prefactor(spec)? + shape)
}

/// Ground-state amplitude as printed, normalization prefactor included.
/// Callers that need a normalized state renormalize numerically.
pub fn ground_state_amplitude(spec: &PotentialSpec, x: f64) -> Result<f64> {
    Ok(ln_ground_state_amplitude(spec, x)?.exp())
}

/// Frequency of the harmonic oscillator matching the potential at its
/// minimum, or `None` where no meaningful reference exists (Fellows-Smith
/// below `p+`).
pub fn reference_frequency(spec: &PotentialSpec) -> Result<Option<f64>> {
    spec.validate()?;
    Ok(match *spec {
        PotentialSpec::Harmonic { omega } | PotentialSpec::PerturbedHarmonic { omega, .. } => Some(omega),
        PotentialSpec::Morse { depth, alpha } | PotentialSpec::ModifiedPoschlTeller { depth, alpha } => {
            Some((2.0 * depth).sqrt() * alpha)
        }
        PotentialSpec::ModifiedIsotonic { a } => Some((25.0 + 12.0 * a).sqrt()),
        PotentialSpec::FellowsSmith { p } => {
            let w2 = 1.0 + 8.0 * p * (1.0 + p);
            (p >= FS_P_PLUS && w2 > 0.0).then(|| w2.sqrt())
        }
    })
}

/// Analytic ground-state energy. Morse uses `-alpha^2 N^2 / 2`.
pub fn ground_energy(spec: &PotentialSpec) -> Result<f64> {
    spec.validate()?;
    Ok(match *spec {
        PotentialSpec::Harmonic { omega } => 0.5 * omega,
        PotentialSpec::Morse { depth, alpha } => {
            let n = morse_n(depth, alpha);
            -0.5 * alpha * alpha * n * n
        }
        PotentialSpec::ModifiedPoschlTeller { depth, alpha } => {
            let s = mpt_s(depth, alpha);
            -0.5 * alpha * alpha * s * s
        }
        PotentialSpec::ModifiedIsotonic { a } => 0.5 - 4.0 / a,
        PotentialSpec::FellowsSmith { p } => 0.5 - p,
        PotentialSpec::PerturbedHarmonic { .. } => return Err(perturbed_unsupported()),
    })
}

/// Location of the largest ground-state amplitude, or a point near it.
pub(crate) fn amplitude_center(spec: &PotentialSpec) -> f64 {
    match *spec {
        PotentialSpec::Morse { depth, alpha } => {
            let n = morse_n(depth, alpha);
            ((n + 0.5) / n).ln() / alpha
        }
        _ => 0.0,
    }
}

/// Natural length scale of the ground state, used to seed grid growth.
pub(crate) fn length_scale(spec: &PotentialSpec) -> f64 {
    match reference_frequency(spec) {
        Ok(Some(w)) if w > 0.0 => 1.0 / w.sqrt(),
        _ => 1.0,
    }
}
