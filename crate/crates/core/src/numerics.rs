//! Uniform grids, composite-Simpson quadrature and the phase-space moments
//! of real wavefunctions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potentials::{amplitude_center, length_scale, ln_ground_state_amplitude, PotentialSpec};

pub const DEFAULT_GRID_POINTS: usize = 4097;
pub const DEFAULT_TARGET_TAIL: f64 = 1e-8;
pub const MIN_GRID_POINTS: usize = 128;
/// Auto-grown grids never extend past `|x| = GRID_LIMIT`.
pub const GRID_LIMIT: f64 = 200.0;
/// A normalized state integrates to one within this tolerance.
pub const NORM_TOLERANCE: f64 = 1e-8;

const GROWTH_FACTOR: f64 = 1.25;
const PROBE_POINTS: usize = 2049;
const MAX_RESAMPLE_POINTS: usize = (1 << 21) + 1;

/// Uniform grid `x_i = x_min + i * spacing`, `i = 0..n_points`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::InvalidGrid(format!("need x_min < x_max, got [{x_min}, {x_max}]")));
        }
        if n_points < MIN_GRID_POINTS {
            return Err(Error::InvalidGrid(format!("need at least {MIN_GRID_POINTS} points, got {n_points}")));
        }
        Ok(Self { x_min, x_max, n_points })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.x(i))
    }

    /// Same extent, spacing halved.
    pub fn refined(&self) -> Self {
        Self { n_points: 2 * self.n_points - 1, ..*self }
    }
}

/// Grid sizing used when sampling analytic states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridOptions {
    pub n_points: usize,
    pub target_tail: f64,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self { n_points: DEFAULT_GRID_POINTS, target_tail: DEFAULT_TARGET_TAIL }
    }
}

/// A real wavefunction tabulated on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWavefunction {
    grid: Grid,
    amplitude: Vec<f64>,
    normalized: bool,
    norm_defect: f64,
}

impl SampledWavefunction {
    /// Wraps raw samples, rejecting grids whose end values exceed
    /// `tail * max|amplitude|`.
    pub fn new(grid: Grid, amplitude: Vec<f64>, tail: f64) -> Result<Self> {
        if amplitude.len() != grid.n_points() {
            return Err(Error::InvalidGrid(format!(
                "{} samples for a grid of {} points",
                amplitude.len(),
                grid.n_points()
            )));
        }
        if amplitude.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidGrid("non-finite amplitude sample".into()));
        }
        let peak = amplitude.iter().fold(0.0_f64, |m, a| m.max(a.abs()));
        if peak > 0.0 {
            let ends = amplitude[0].abs().max(amplitude[amplitude.len() - 1].abs());
            if ends > tail * peak {
                return Err(Error::TailCondition { ratio: ends / peak });
            }
        }
        Ok(Self { grid, amplitude, normalized: false, norm_defect: f64::NAN })
    }

    /// Samples `f` on `grid`.
    pub fn from_fn(grid: Grid, tail: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.points().map(f).collect(), tail)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn amplitude(&self) -> &[f64] {
        &self.amplitude
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// `|1 - norm|` of the samples before normalization (NaN if never normalized).
    pub fn norm_defect(&self) -> f64 {
        self.norm_defect
    }

    pub fn norm(&self) -> f64 {
        simpson(&self.amplitude.iter().map(|a| a * a).collect::<Vec<_>>(), self.grid.spacing())
    }

    fn require_normalized(&self) -> Result<()> {
        if self.normalized {
            Ok(())
        } else {
            Err(Error::NotNormalized)
        }
    }
}

/// Composite Simpson rule for uniformly spaced samples. An even sample
/// count closes with the 3/8 rule on the last three intervals.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    match n {
        0 | 1 => return 0.0,
        2 => return 0.5 * h * (values[0] + values[1]),
        3 => return h / 3.0 * (values[0] + 4.0 * values[1] + values[2]),
        _ => {}
    }
    let (simpson_end, tail) = if n % 2 == 1 {
        (n, 0.0)
    } else {
        let k = n - 4;
        let t = 3.0 * h / 8.0 * (values[k] + 3.0 * values[k + 1] + 3.0 * values[k + 2] + values[k + 3]);
        (n - 3, t)
    };
    let interior = &values[1..simpson_end - 1];
    let odd: f64 = interior.iter().step_by(2).sum();
    let even: f64 = interior.iter().skip(1).step_by(2).sum();
    h / 3.0 * (values[0] + 4.0 * odd + 2.0 * even + values[simpson_end - 1]) + tail
}

/// Derivative of uniformly spaced samples: fourth-order centered stencil in
/// the interior, second order next to the ends.
pub fn derivative(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    if n < 5 {
        for i in 1..n.saturating_sub(1) {
            out[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
        }
        return out;
    }
    out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    out[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
    out[1] = (values[2] - values[0]) / (2.0 * h);
    out[n - 2] = (values[n - 1] - values[n - 3]) / (2.0 * h);
    for i in 2..n - 2 {
        out[i] = (values[i - 2] - 8.0 * values[i - 1] + 8.0 * values[i + 1] - values[i + 2]) / (12.0 * h);
    }
    out
}

fn max_ln_amplitude(spec: &PotentialSpec, lo: f64, hi: f64) -> Result<f64> {
    let mut peak = f64::NEG_INFINITY;
    for i in 0..PROBE_POINTS {
        let x = lo + (hi - lo) * i as f64 / (PROBE_POINTS - 1) as f64;
        peak = peak.max(ln_ground_state_amplitude(spec, x)?);
    }
    Ok(peak)
}

/// Grows an interval around the ground state until the analytic amplitude
/// at both ends is below `target_tail` times its peak.
pub fn auto_grid(spec: &PotentialSpec, options: &GridOptions) -> Result<Grid> {
    spec.validate()?;
    let target = options.target_tail;
    if !(target > 0.0 && target <= 1e-4) {
        return Err(Error::InvalidGrid(format!("target tail must lie in (0, 1e-4], got {target}")));
    }
    let ln_target = target.ln();
    let center = amplitude_center(spec);
    let seed = 2.0 * length_scale(spec);
    let symmetric = spec.is_even();
    let (mut left, mut right) = (seed, seed);
    let exhausted = || Error::GridExhausted { limit: GRID_LIMIT, target_tail: target };
    loop {
        let (lo, hi) = (center - left, center + right);
        let peak = max_ln_amplitude(spec, lo, hi)?;
        let left_ok = ln_ground_state_amplitude(spec, lo)? - peak <= ln_target;
        let right_ok = ln_ground_state_amplitude(spec, hi)? - peak <= ln_target;
        if left_ok && right_ok {
            return Grid::new(lo, hi, options.n_points);
        }
        let grow = |offset: f64, at_limit: f64| {
            if offset >= at_limit {
                Err(exhausted())
            } else {
                Ok((offset * GROWTH_FACTOR).min(at_limit))
            }
        };
        if !left_ok {
            left = grow(left, GRID_LIMIT + center)?;
        }
        if !right_ok {
            right = grow(right, GRID_LIMIT - center)?;
        }
        if symmetric {
            let m = left.max(right);
            left = m;
            right = m;
        }
    }
}

/// Normalized analytic ground state of `spec` on an automatically sized grid.
pub fn sample_ground_state(spec: &PotentialSpec, options: &GridOptions) -> Result<SampledWavefunction> {
    let grid = auto_grid(spec, options)?;
    sample_ground_state_on(spec, grid, options.target_tail)
}

/// Normalized analytic ground state of `spec` on a given grid.
pub fn sample_ground_state_on(spec: &PotentialSpec, grid: Grid, tail: f64) -> Result<SampledWavefunction> {
    let ln: Vec<f64> = grid.points().map(|x| ln_ground_state_amplitude(spec, x)).collect::<Result<_>>()?;
    // factor out the peak so large or tiny printed prefactors cannot overflow
    let peak = ln.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let amplitude = ln.iter().map(|l| (l - peak).exp()).collect();
    let wf = SampledWavefunction::new(grid, amplitude, tail)?;
    let mut out = normalize(&wf)?;
    out.norm_defect = (1.0 - (2.0 * peak).exp() * wf.norm()).abs();
    Ok(out)
}

/// Rescales so the composite-Simpson norm is one.
pub fn normalize(wf: &SampledWavefunction) -> Result<SampledWavefunction> {
    let norm = wf.norm();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::ZeroNorm);
    }
    let scale = 1.0 / norm.sqrt();
    Ok(SampledWavefunction {
        grid: wf.grid,
        amplitude: wf.amplitude.iter().map(|a| a * scale).collect(),
        normalized: true,
        norm_defect: (1.0 - norm).abs(),
    })
}

/// Symmetrized second moments and means of `(x, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovarianceMatrix {
    pub var_x: f64,
    pub var_p: f64,
    pub cov_xp: f64,
    pub mean_x: f64,
    pub mean_p: f64,
}

impl CovarianceMatrix {
    /// Covariance of the harmonic vacuum at frequency `omega`.
    pub fn vacuum(omega: f64) -> Self {
        Self { var_x: 0.5 / omega, var_p: 0.5 * omega, cov_xp: 0.0, mean_x: 0.0, mean_p: 0.0 }
    }

    pub fn det(&self) -> f64 {
        self.var_x * self.var_p - self.cov_xp * self.cov_xp
    }
}

/// Moments of a real, normalized wavefunction. For real states `<p> = 0`
/// and the symmetrized `x p` moment vanishes identically, so both are set
/// to zero rather than integrated.
pub fn covariance_of(wf: &SampledWavefunction) -> Result<CovarianceMatrix> {
    wf.require_normalized()?;
    let h = wf.grid.spacing();
    let xs: Vec<f64> = wf.grid.points().collect();
    let density: Vec<f64> = wf.amplitude.iter().map(|a| a * a).collect();
    let mean_x = simpson(&xs.iter().zip(&density).map(|(x, d)| x * d).collect::<Vec<_>>(), h);
    let var_x = simpson(&xs.iter().zip(&density).map(|(x, d)| (x - mean_x) * (x - mean_x) * d).collect::<Vec<_>>(), h);
    let slope = derivative(&wf.amplitude, h);
    let var_p = simpson(&slope.iter().map(|d| d * d).collect::<Vec<_>>(), h);
    Ok(CovarianceMatrix { var_x, var_p, cov_xp: 0.0, mean_x, mean_p: 0.0 })
}

/// `integral a(x) b(x) dx` for two sample vectors on the same grid.
pub(crate) fn inner_product_on(grid: &Grid, a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    simpson(&a.iter().zip(b).map(|(u, v)| u * v).collect::<Vec<_>>(), grid.spacing())
}

/// Four-point Lagrange interpolation; zero outside the grid.
fn interpolate(wf: &SampledWavefunction, x: f64) -> f64 {
    let g = wf.grid;
    if x < g.x_min || x > g.x_max {
        return 0.0;
    }
    let n = g.n_points;
    let t = (x - g.x_min) / g.spacing();
    let i = (t.floor() as usize).min(n - 2);
    let s = t - i as f64;
    let start = i.saturating_sub(1).min(n - 4);
    let y = &wf.amplitude[start..start + 4];
    let u = s + (i - start) as f64;
    // nodes at 0, 1, 2, 3
    let l0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
    let l1 = u * (u - 2.0) * (u - 3.0) / 2.0;
    let l2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
    let l3 = u * (u - 1.0) * (u - 2.0) / 6.0;
    l0 * y[0] + l1 * y[1] + l2 * y[2] + l3 * y[3]
}

/// `<wf1|wf2>` for real normalized states. States on different grids are
/// resampled onto a common grid spanning both, at twice the finer density.
pub fn overlap(wf1: &SampledWavefunction, wf2: &SampledWavefunction) -> Result<f64> {
    wf1.require_normalized()?;
    wf2.require_normalized()?;
    if wf1.grid == wf2.grid {
        return Ok(inner_product_on(&wf1.grid, &wf1.amplitude, &wf2.amplitude));
    }
    let (g1, g2) = (wf1.grid, wf2.grid);
    if g1.x_max <= g2.x_min || g2.x_max <= g1.x_min {
        return Err(Error::IncompatibleDomain);
    }
    let lo = g1.x_min.min(g2.x_min);
    let hi = g1.x_max.max(g2.x_max);
    let h = 0.5 * g1.spacing().min(g2.spacing());
    let mut n = ((hi - lo) / h).ceil() as usize + 1;
    n += 1 - n % 2;
    let n = n.clamp(MIN_GRID_POINTS + 1, MAX_RESAMPLE_POINTS);
    let common = Grid::new(lo, hi, n)?;
    let a: Vec<f64> = common.points().map(|x| interpolate(wf1, x)).collect();
    let b: Vec<f64> = common.points().map(|x| interpolate(wf2, x)).collect();
    Ok(inner_product_on(&common, &a, &b))
}
