//! Independent reference solvers.
//!
//! [`fd_ground_state`] discretizes `-1/2 d^2/dx^2 + V(x)` with the three-point
//! Laplacian and Dirichlet ends, locates the lowest eigenvalue of the
//! resulting symmetric tridiagonal matrix by Sturm-sequence bisection and
//! refines the eigenvector by inverse iteration. [`fock_covariance`]
//! evaluates phase-space moments of a state given on a truncated number
//! basis using ladder-operator algebra.

use crate::error::{Error, Result};
use crate::numerics::{normalize, CovarianceMatrix, Grid, SampledWavefunction};
use crate::potentials::{potential_unchecked, PotentialSpec};

/// Interior FD samples next to the boundary must be below this fraction of the peak.
pub const FD_TAIL: f64 = 1e-6;
pub const DEFAULT_FOCK_DIMENSION: usize = 16;
pub const MIN_FOCK_DIMENSION: usize = 8;

const RESIDUAL_LIMIT: f64 = 1e-8;
const MAX_BISECTIONS: usize = 200;
const MAX_INVERSE_ITERATIONS: usize = 50;

/// Symmetric tridiagonal matrix with a constant off-diagonal.
#[derive(Debug, Clone)]
struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
}

impl Tridiagonal {
    fn hamiltonian(spec: &PotentialSpec, grid: &Grid) -> Result<Self> {
        let h = grid.spacing();
        let kinetic = 1.0 / (h * h);
        let diag = (1..grid.n_points() - 1)
            .map(|i| potential_unchecked(spec, grid.x(i)).map(|v| kinetic + v))
            .collect::<Result<Vec<_>>>()?;
        if diag.iter().any(|d| d.is_nan()) {
            return Err(Error::Convergence("potential is NaN on the grid".into()));
        }
        Ok(Self { diag, off: -0.5 * kinetic })
    }

    /// Number of eigenvalues strictly below `lambda`.
    fn sturm_count(&self, lambda: f64) -> usize {
        let guard = f64::MIN_POSITIVE.sqrt();
        let off2 = self.off * self.off;
        let mut count = 0;
        let mut q = 1.0;
        for (i, d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - lambda } else { (d - lambda) - off2 / q };
            if q.is_infinite() {
                // infinite diagonal entries (overflowing potential walls) pin q
                q = f64::MAX;
            }
            if q < 0.0 {
                count += 1;
            }
            if q.abs() < guard {
                q = if q < 0.0 { -guard } else { guard };
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let r = 2.0 * self.off.abs();
        let lo = self.diag.iter().cloned().fold(f64::INFINITY, f64::min) - r;
        let hi = self.diag.iter().cloned().filter(|d| d.is_finite()).fold(f64::NEG_INFINITY, f64::max) + r;
        (lo, hi)
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = v.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.off * v[i - 1];
                }
                if i + 1 < n {
                    s += self.off * v[i + 1];
                }
                if s.is_nan() {
                    0.0
                } else {
                    s
                }
            })
            .collect()
    }

    /// Solves `(T - shift) y = b` by LDL^T elimination; `T - shift` must be
    /// positive definite.
    fn solve_shifted(&self, shift: f64, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut d = vec![0.0; n];
        let mut y = vec![0.0; n];
        d[0] = self.diag[0] - shift;
        y[0] = b[0];
        for i in 1..n {
            let l = self.off / d[i - 1];
            d[i] = (self.diag[i] - shift) - l * self.off;
            y[i] = b[i] - l * y[i - 1];
        }
        let mut x = vec![0.0; n];
        x[n - 1] = y[n - 1] / d[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = (y[i] - self.off * x[i + 1]) / d[i];
        }
        x
    }

    /// Lowest eigenvalue bracket `[lo, hi]` with `count(lo) = 0`, `count(hi) >= 1`.
    fn lowest_eigenvalue(&self) -> Result<(f64, f64)> {
        let (mut lo, mut hi) = self.gershgorin();
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::Convergence("non-finite Gershgorin bounds".into()));
        }
        lo -= 1.0;
        hi += 1.0;
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) >= 1 {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1.0) {
                break;
            }
        }
        Ok((lo, hi))
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Lowest eigenpair of the finite-difference Hamiltonian.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub energy: f64,
    /// Sign fixed so the largest-magnitude sample is positive; normalized.
    pub wavefunction: SampledWavefunction,
    /// `||H phi - E phi||`, relative to `||H||_inf ||phi||`.
    pub residual: f64,
    pub iterations: usize,
}

/// Ground state of `[-1/2 d^2/dx^2 + V(x)] phi = E phi` on `grid`.
pub fn fd_ground_state(spec: &PotentialSpec, grid: &Grid) -> Result<EigenResult> {
    spec.validate_shape()?;
    let t = Tridiagonal::hamiltonian(spec, grid)?;
    let (lo, hi) = t.lowest_eigenvalue()?;
    let scale = lo.abs().max(1.0);
    let shift = lo - 1e-9 * scale;

    let m = t.diag.len();
    let mut v = vec![1.0 / (m as f64).sqrt(); m];
    let mut iterations = 0;
    for _ in 0..MAX_INVERSE_ITERATIONS {
        iterations += 1;
        let mut y = t.solve_shifted(shift, &v);
        let n = norm2(&y);
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::Convergence("inverse iteration produced a non-finite vector".into()));
        }
        let sign = if y.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
        y.iter_mut().for_each(|a| *a *= sign / n);
        let change = norm2(&y.iter().zip(&v).map(|(a, b)| a - b).collect::<Vec<_>>());
        v = y;
        if change < 1e-12 {
            break;
        }
    }

    let hv = t.apply(&v);
    let energy = v.iter().zip(&hv).map(|(a, b)| a * b).sum::<f64>();
    let matrix_norm = t.diag.iter().filter(|d| d.is_finite()).fold(0.0_f64, |m, d| m.max(d.abs())) + 2.0 * t.off.abs();
    let residual = norm2(&hv.iter().zip(&v).map(|(a, b)| a - energy * b).collect::<Vec<_>>()) / matrix_norm;
    if residual > RESIDUAL_LIMIT || energy < lo - 1e-6 * scale || energy > hi + 1e-6 * scale {
        return Err(Error::Convergence(format!("residual {residual:e} after {iterations} inverse iterations")));
    }

    let peak_index = (0..m).max_by(|&i, &j| v[i].abs().total_cmp(&v[j].abs())).unwrap_or(0);
    let sign = v[peak_index].signum();
    let peak = v[peak_index].abs();
    let edge = v[0].abs().max(v[m - 1].abs());
    if edge > FD_TAIL * peak {
        return Err(Error::TailCondition { ratio: edge / peak });
    }
    let mut amplitude = Vec::with_capacity(m + 2);
    amplitude.push(0.0);
    amplitude.extend(v.iter().map(|a| a * sign));
    amplitude.push(0.0);
    let wavefunction = normalize(&SampledWavefunction::new(*grid, amplitude, FD_TAIL)?)?;
    Ok(EigenResult { energy, wavefunction, residual, iterations })
}

/// Bound states below zero energy for potentials that vanish at `+inf`.
/// The count is repeated on successively refined grids until two agree.
pub fn count_negative_eigenvalues(spec: &PotentialSpec, grid: &Grid) -> Result<usize> {
    spec.validate_shape()?;
    if !matches!(spec, PotentialSpec::Morse { .. } | PotentialSpec::ModifiedPoschlTeller { .. }) {
        return Err(Error::Unsupported(format!("bound-state counting for {}", spec.kind())));
    }
    let mut g = *grid;
    let mut previous = Tridiagonal::hamiltonian(spec, &g)?.sturm_count(0.0);
    for _ in 0..4 {
        g = g.refined();
        let count = Tridiagonal::hamiltonian(spec, &g)?.sturm_count(0.0);
        if count == previous {
            return Ok(count);
        }
        previous = count;
    }
    Err(Error::Convergence("bound-state count did not stabilize under grid refinement".into()))
}

/// Real state on the harmonic number basis `|0>, ..., |d-1>` at frequency `omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    coefficients: Vec<f64>,
    omega: f64,
}

impl FockState {
    /// Normalizes `coefficients` and pads them to `dimension`.
    pub fn new(coefficients: &[f64], omega: f64, dimension: usize) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidSpec(format!("omega must be positive, got {omega}")));
        }
        if dimension < MIN_FOCK_DIMENSION || coefficients.len() > dimension {
            return Err(Error::InvalidSpec(format!(
                "Fock dimension {dimension} must be at least {MIN_FOCK_DIMENSION} and hold {} coefficients",
                coefficients.len()
            )));
        }
        let norm = norm2(coefficients);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::ZeroNorm);
        }
        let mut c = vec![0.0; dimension];
        for (dst, src) in c.iter_mut().zip(coefficients) {
            *dst = src / norm;
        }
        Ok(Self { coefficients: c, omega })
    }

    /// `N^{-1/2} (|0> + alpha1 |1> + alpha2 |2>)`.
    pub fn three_term(alpha1: f64, alpha2: f64, omega: f64) -> Result<Self> {
        Self::new(&[1.0, alpha1, alpha2], omega, DEFAULT_FOCK_DIMENSION)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn dimension(&self) -> usize {
        self.coefficients.len()
    }

    /// `<self|other>`; both states must share the basis.
    pub fn inner(&self, other: &FockState) -> f64 {
        self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a * b).sum()
    }
}

fn lower(c: &[f64]) -> Vec<f64> {
    let d = c.len();
    (0..d).map(|n| if n + 1 < d { ((n + 1) as f64).sqrt() * c[n + 1] } else { 0.0 }).collect()
}

fn raise(c: &[f64]) -> Vec<f64> {
    (0..c.len()).map(|n| if n > 0 { (n as f64).sqrt() * c[n - 1] } else { 0.0 }).collect()
}

/// Covariance matrix of a real number-basis state, with
/// `x = (a + a^dag)/sqrt(2 omega)` and `p = i sqrt(omega/2) (a^dag - a)`.
pub fn fock_covariance(state: &FockState) -> Result<CovarianceMatrix> {
    let c = &state.coefficients;
    let d = c.len();
    let top = c[d - 1] * c[d - 1] + c[d - 2] * c[d - 2];
    if top.sqrt() > 1e-10 {
        return Err(Error::FockTruncation(top.sqrt()));
    }
    let (down, up) = (lower(c), raise(c));
    let xs = (2.0 * state.omega).sqrt().recip();
    let ps = (0.5 * state.omega).sqrt();
    let x_c: Vec<f64> = down.iter().zip(&up).map(|(a, b)| xs * (a + b)).collect();
    // p|c> = i * p_c
    let p_c: Vec<f64> = up.iter().zip(&down).map(|(u, a)| ps * (u - a)).collect();
    let mean_x = c.iter().zip(&x_c).map(|(a, b)| a * b).sum::<f64>();
    let x2 = x_c.iter().map(|v| v * v).sum::<f64>();
    let p2 = p_c.iter().map(|v| v * v).sum::<f64>();
    // <p> = i <c|p_c> and <{x,p}>/2 = Re(i <x_c|p_c>) are both imaginary
    // multiples of real numbers for real states, hence zero.
    Ok(CovarianceMatrix { var_x: x2 - mean_x * mean_x, var_p: p2, cov_xp: 0.0, mean_x, mean_p: 0.0 })
}
