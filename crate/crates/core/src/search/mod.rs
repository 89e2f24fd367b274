//! Numerical search for the exact-NLS angles with the best success
//! probability.
//!
//! [`sweep`] scans a rectangular grid of `(σ, θ)` and keeps the grid-local
//! minimizers of `residual − λ·success`. [`refine`] takes one of them to a
//! zero of the residual with a box-constrained simplex, then tries to walk
//! toward higher success while staying on `residual ≈ 0`. [`certify`] runs
//! both over a fine grid and checks that nothing beats the closed-form
//! success.

mod simplex;

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};
use crate::nls::{closed_form_coefficients, nls_residual, optimal_params, NlsParams};

use simplex::{minimize, Bounds, SimplexOptions};

/// Weight of the success term in the sweep objective.
pub const SUCCESS_PENALTY: f64 = 1e-3;
/// Residual below which a refined point counts as an exact NLS gate when
/// certifying.
pub const CERTIFY_RESIDUAL: f64 = 1e-6;
/// Allowed excess success over the closed form when certifying.
pub const CERTIFY_SLACK: f64 = 1e-9;

// Penalty weight on the residual during the success-increasing walk.
const WALK_PENALTY: f64 = 1e4;
const X_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleRange {
    pub min: f64,
    pub max: f64,
}

impl AngleRange {
    pub const fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    pub fn degrees(min: f64, max: f64) -> Self {
        Self::new(min.to_radians(), max.to_radians())
    }

    fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) || self.min > self.max {
            return Err(Error::EmptyRange {
                min: self.min,
                max: self.max,
            });
        }
        Ok(())
    }

    fn grid(&self, step: f64) -> Vec<f64> {
        let n = ((self.max - self.min) / step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.min + i as f64 * step).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub sigma_range: AngleRange,
    pub theta_range: AngleRange,
    /// Grid spacing in radians.
    pub grid_step: f64,
    /// Residual below which refinement counts as converged.
    pub refine_tolerance: f64,
    /// Simplex iteration budget per refinement stage.
    pub max_iterations: usize,
}

impl Default for SearchConfig {
    /// The canonical domain `σ ∈ [0, π]`, `θ ∈ [0, π/2]` on a 1° grid.
    fn default() -> Self {
        Self {
            sigma_range: AngleRange::new(0.0, PI),
            theta_range: AngleRange::new(0.0, FRAC_PI_2),
            grid_step: 1f64.to_radians(),
            refine_tolerance: 1e-20,
            max_iterations: 5_000,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        self.sigma_range.validate()?;
        self.theta_range.validate()?;
        if !(self.grid_step.is_finite() && self.grid_step > 0.0) {
            return Err(Error::InvalidConfig("grid step must be positive"));
        }
        if !(self.refine_tolerance.is_finite() && self.refine_tolerance > 0.0) {
            return Err(Error::InvalidConfig("refine tolerance must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max iterations must be positive"));
        }
        Ok(())
    }

    fn bounds(&self) -> Bounds<2> {
        Bounds {
            lower: [self.sigma_range.min, self.theta_range.min],
            upper: [self.sigma_range.max, self.theta_range.max],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub params: NlsParams,
    pub residual: f64,
    /// `|c0|²`
    pub success: f64,
    pub converged: bool,
    /// Simplex iterations spent; zero for grid points.
    pub iterations: usize,
}

impl Candidate {
    pub fn evaluate(params: NlsParams) -> Self {
        let (residual, success) = residual_and_success(params.sigma, params.theta);
        Self {
            params,
            residual,
            success,
            converged: false,
            iterations: 0,
        }
    }

    pub fn objective(&self) -> f64 {
        self.residual - SUCCESS_PENALTY * self.success
    }
}

fn residual_and_success(sigma: f64, theta: f64) -> (f64, f64) {
    let c = closed_form_coefficients(NlsParams { sigma, theta }).map(|x| x.into());
    (nls_residual(&c), c[0].norm_sqr())
}

fn lexicographic(a: &NlsParams, b: &NlsParams) -> Ordering {
    a.sigma
        .total_cmp(&b.sigma)
        .then_with(|| a.theta.total_cmp(&b.theta))
}

fn sweep_order(a: &Candidate, b: &Candidate) -> Ordering {
    a.objective()
        .total_cmp(&b.objective())
        .then_with(|| a.residual.total_cmp(&b.residual))
        .then_with(|| b.success.total_cmp(&a.success))
        .then_with(|| lexicographic(&a.params, &b.params))
}

/// Grid-local minimizers of `residual − λ·success`, best first.
pub fn sweep(cfg: &SearchConfig) -> Result<Vec<Candidate>> {
    cfg.validate()?;
    let sigmas = cfg.sigma_range.grid(cfg.grid_step);
    let thetas = cfg.theta_range.grid(cfg.grid_step);
    let (ns, nt) = (sigmas.len(), thetas.len());
    let grid: Vec<Candidate> = sigmas
        .iter()
        .flat_map(|&s| {
            thetas
                .iter()
                .map(move |&t| Candidate::evaluate(NlsParams { sigma: s, theta: t }))
        })
        .collect();
    let at = |i: usize, j: usize| &grid[i * nt + j];

    let mut minima = Vec::new();
    for i in 0..ns {
        for j in 0..nt {
            let here = at(i, j);
            let f = here.objective();
            let mut is_min = true;
            'neighbours: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (ni, nj) = (i as i64 + di, j as i64 + dj);
                    if ni < 0 || nj < 0 || ni >= ns as i64 || nj >= nt as i64 {
                        continue;
                    }
                    let g = at(ni as usize, nj as usize).objective();
                    // plateaus: only the lexicographically first point survives
                    if g < f || (g == f && (ni, nj) < (i as i64, j as i64)) {
                        is_min = false;
                        break 'neighbours;
                    }
                }
            }
            if is_min {
                minima.push(*here);
            }
        }
    }
    minima.sort_by(sweep_order);
    Ok(minima)
}

fn run_simplex(
    f: impl Fn([f64; 2]) -> f64,
    start: [f64; 2],
    step: f64,
    cfg: &SearchConfig,
) -> ([f64; 2], f64, usize) {
    let bounds = cfg.bounds();
    let r = minimize(
        f,
        start,
        &bounds,
        SimplexOptions {
            initial_step: step,
            x_tolerance: X_TOLERANCE,
            max_iterations: cfg.max_iterations,
        },
    );
    (r.x, r.value, r.iterations)
}

// Residual descent, then restarts from the best point with shrinking
// initial simplices; a restart is kept only if it lowers the residual.
fn descend_residual(start: [f64; 2], cfg: &SearchConfig) -> ([f64; 2], usize) {
    let residual = |[s, t]: [f64; 2]| residual_and_success(s, t).0;
    let (mut x, mut best, mut iterations) = run_simplex(residual, start, cfg.grid_step, cfg);
    for restart_step in [1e-3, 1e-5, 1e-7] {
        let (y, value, n) = run_simplex(residual, x, restart_step, cfg);
        iterations += n;
        if value < best {
            x = y;
            best = value;
        }
    }
    (x, iterations)
}

fn finish(x: [f64; 2], iterations: usize, cfg: &SearchConfig) -> Candidate {
    let mut c = Candidate::evaluate(NlsParams {
        sigma: x[0],
        theta: x[1],
    });
    c.converged = c.residual <= cfg.refine_tolerance;
    c.iterations = iterations;
    c
}

/// Drives `start` onto a zero of the residual, then walks toward higher
/// success along it. Returns the best point found; `converged` is false if
/// the residual never fell to `cfg.refine_tolerance`.
pub fn refine(start: &Candidate, cfg: &SearchConfig) -> Result<Candidate> {
    cfg.validate()?;
    let p = start.params;
    if !(p.sigma.is_finite() && p.theta.is_finite()) {
        return Err(Error::NonFinite(if p.sigma.is_finite() {
            p.theta
        } else {
            p.sigma
        }));
    }

    let (x, iterations) = descend_residual([p.sigma, p.theta], cfg);
    let on_manifold = finish(x, iterations, cfg);
    if !on_manifold.converged {
        return Ok(on_manifold);
    }

    let walk = |[s, t]: [f64; 2]| {
        let (r, success) = residual_and_success(s, t);
        WALK_PENALTY * r - success
    };
    let (y, _, walked) = run_simplex(walk, x, 1e-3, cfg);
    let (z, polished) = descend_residual(y, cfg);
    let moved = finish(z, iterations + walked + polished, cfg);
    if moved.converged && moved.success > on_manifold.success + CERTIFY_SLACK {
        Ok(moved)
    } else {
        Ok(Candidate {
            iterations: moved.iterations,
            ..on_manifold
        })
    }
}

/// Maps angles into `σ ∈ [0, π]`, `θ ∈ [0, π/2]`.
///
/// Uses 2π periodicity of both angles, evenness in θ and in σ, and
/// `(σ, θ) -> (π − σ, π − θ)`, which negates all three coefficients. The
/// last one changes the gate only by a global sign, so residual and success
/// are unchanged but the coefficients may flip sign together.
pub fn canonicalize(p: NlsParams) -> NlsParams {
    let mut theta = p.theta.rem_euclid(TAU);
    if theta > PI {
        theta = TAU - theta;
    }
    let mut sigma = p.sigma;
    if theta > FRAC_PI_2 {
        theta = PI - theta;
        sigma = PI - sigma;
    }
    sigma = sigma.rem_euclid(TAU);
    if sigma > PI {
        sigma = TAU - sigma;
    }
    NlsParams { sigma, theta }
}

/// The refined candidate that best answers the search: highest success
/// among converged candidates, otherwise lowest residual.
pub fn best_candidate(refined: &[Candidate]) -> Option<Candidate> {
    let converged = refined.iter().filter(|c| c.converged).max_by(|a, b| {
        a.success
            .total_cmp(&b.success)
            .then_with(|| b.residual.total_cmp(&a.residual))
            .then_with(|| lexicographic(&b.params, &a.params))
    });
    converged
        .or_else(|| {
            refined.iter().min_by(|a, b| {
                a.residual
                    .total_cmp(&b.residual)
                    .then_with(|| lexicographic(&a.params, &b.params))
            })
        })
        .copied()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub grid_candidates: Vec<Candidate>,
    pub refined: Vec<Candidate>,
    pub best: Candidate,
}

/// Sweep, refine every grid minimizer, pick the best.
pub fn optimize(cfg: &SearchConfig) -> Result<SearchOutcome> {
    let grid_candidates = sweep(cfg)?;
    let refined = grid_candidates
        .iter()
        .map(|c| refine(c, cfg))
        .collect::<Result<Vec<_>>>()?;
    let best = best_candidate(&refined).expect("a non-empty grid has at least one local minimizer");
    Ok(SearchOutcome {
        grid_candidates,
        refined,
        best,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certification {
    pub grid_step: f64,
    pub candidates: usize,
    /// Refined candidates with residual at most [`CERTIFY_RESIDUAL`].
    pub exact_points: Vec<Candidate>,
    pub max_success: f64,
    /// `A² + CERTIFY_SLACK`
    pub bound: f64,
    pub passed: bool,
}

/// Checks on a grid of spacing `step` over the canonical domain that no
/// exact-NLS point beats the closed-form success.
pub fn certify(step: f64) -> Result<Certification> {
    let cfg = SearchConfig {
        grid_step: step,
        ..SearchConfig::default()
    };
    let outcome = optimize(&cfg)?;
    let exact_points: Vec<Candidate> = outcome
        .refined
        .iter()
        .filter(|c| c.residual <= CERTIFY_RESIDUAL)
        .copied()
        .collect();
    let max_success = exact_points.iter().map(|c| c.success).fold(0.0, f64::max);
    let bound = optimal_params().success + CERTIFY_SLACK;
    Ok(Certification {
        grid_step: step,
        candidates: outcome.refined.len(),
        passed: !exact_points.is_empty() && max_success <= bound,
        exact_points,
        max_success,
        bound,
    })
}
