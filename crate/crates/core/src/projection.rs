//! Projection of a post-gradient bundle onto the cross-learning constraint
//! set `C = {‖h_i − g‖ ≤ ε, i = 1..N}` and onto its averaged relaxation
//! `R = {Σ_i ‖h_i − g‖² ≤ N ε²}`.
//!
//! The exact projection minimises
//! `Σ_i ‖h_i − h̄_i‖² + ‖g − ḡ‖²` over `C`. At the optimum every `h_i` lies on
//! the segment between `h̄_i` and `g`, `h_i = ζ_i h̄_i + (1 − ζ_i) g` with
//! `ζ_i = 1 / (1 + μ_i)`, and `g − ḡ = Σ_i (h̄_i − h_i)`. For a fixed `g` the
//! best multiplier of each constraint is explicit,
//! `μ_i = max(0, ‖h̄_i − g‖/ε − 1)`. Eliminating the `h_i` leaves the convex
//! function `‖g − ḡ‖² + Σ_i (‖h̄_i − g‖ − ε)_+²` of `g` alone, which the
//! solver minimises with damped Newton steps. Every iterate stays in the
//! span of `{ḡ, h̄_1, …, h̄_N}`, so after one pass over the Gram matrix the
//! sweeps run on an `(N+1) × (N+1)` matrix of inner products.

use alloc::vec;
use alloc::vec::Vec;

use crate::bundle::PolicyBundle;
use crate::error::{Error, Result};
use crate::kernel::GramMatrix;
use crate::linalg::{eigen_range, lu_solve, Matrix};

/// Ridge added to the Gram matrix when the span Gram fails the PSD check.
pub const GRAM_RIDGE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Stationarity tolerance, relative to `max(1, largest input norm)`.
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_sweeps: 10_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult {
    pub bundle: PolicyBundle,
    /// `μ_i ≥ 0`; infinite when `ε = 0` forces `h_i = g`.
    pub multipliers: Vec<f64>,
    /// `ζ_i = 1 / (1 + μ_i) ∈ [0, 1]`.
    pub mixing: Vec<f64>,
    pub active_set: Vec<bool>,
    pub iterations: usize,
    /// Stationarity residual `‖(g − ḡ) − Σ_i (h̄_i − h_i)‖`, divided by
    /// `max(1, largest input norm)`.
    pub kkt_residual: f64,
}

/// Inner products among `{ḡ, h̄_1, …, h̄_N}`.
struct SpanGram {
    g: Matrix,
}

impl SpanGram {
    fn build(funcs: &[&Matrix], gram: &GramMatrix) -> Result<Self> {
        let n = funcs.len();
        let applied: Vec<Matrix> = funcs.iter().map(|w| gram.apply(w)).collect();
        let mut g = Matrix::zeros(n, n);
        for a in 0..n {
            for b in 0..=a {
                let v: f64 = funcs[a].as_slice().iter().zip(applied[b].as_slice()).map(|(x, y)| x * y).sum();
                g[(a, b)] = v;
                g[(b, a)] = v;
            }
        }
        let (lo, hi) = eigen_range(&g);
        if lo >= -1e-9 * hi.abs().max(1.0) {
            return Ok(Self { g });
        }
        // Guard against round-off in near-singular Gram matrices.
        for a in 0..n {
            for b in 0..n {
                let w: f64 = funcs[a].as_slice().iter().zip(funcs[b].as_slice()).map(|(x, y)| x * y).sum();
                g[(a, b)] += GRAM_RIDGE * w;
            }
        }
        let (lo, hi) = eigen_range(&g);
        if lo < -1e-9 * hi.abs().max(1.0) {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: lo });
        }
        Ok(Self { g })
    }

    fn quad(&self, v: &[f64]) -> f64 {
        let n = v.len();
        let mut s = 0.0;
        for a in 0..n {
            if v[a] == 0.0 {
                continue;
            }
            for b in 0..n {
                s += v[a] * self.g[(a, b)] * v[b];
            }
        }
        s.max(0.0)
    }

    fn norm(&self, v: &[f64]) -> f64 {
        libm::sqrt(self.quad(v))
    }
}

fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = 1.0;
    e
}

fn diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn combine(coeffs: &[f64], funcs: &[&Matrix]) -> Matrix {
    let mut out = Matrix::zeros(funcs[0].rows(), funcs[0].cols());
    for (c, w) in coeffs.iter().zip(funcs) {
        if *c != 0.0 {
            out.axpy(*c, w);
        }
    }
    out
}

fn validate(bundle: &PolicyBundle, gram: &GramMatrix, eps: f64) -> Result<()> {
    if gram.order() != bundle.order() {
        return Err(Error::DictionaryMismatch);
    }
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::InvalidArgument("epsilon must be a nonnegative number".into()));
    }
    Ok(())
}

/// Exact projection of `(h̄_1, …, h̄_N, ḡ)` onto `C`.
pub fn project_exact(
    bundle_bar: &PolicyBundle,
    eps: f64,
    gram: &GramMatrix,
    opts: SolverOptions,
) -> Result<ProjectionResult> {
    validate(bundle_bar, gram, eps)?;
    let central = bundle_bar.central.as_ref().ok_or(Error::MissingCentralPolicy)?;
    let n = bundle_bar.n_tasks();
    let mut funcs: Vec<&Matrix> = Vec::with_capacity(n + 1);
    funcs.push(central);
    funcs.extend(bundle_bar.tasks.iter());
    let span = SpanGram::build(&funcs, gram)?;
    let dim = n + 1;
    let e0 = unit(dim, 0);
    let scale = (0..dim).map(|a| libm::sqrt(span.g[(a, a)].max(0.0))).fold(1.0_f64, f64::max);

    let dist = |beta: &[f64], i: usize| -> f64 {
        let mut v = unit(dim, i + 1);
        v.iter_mut().zip(beta).for_each(|(x, b)| *x -= b);
        span.norm(&v)
    };

    let mut out = bundle_bar.clone();
    out.epsilon = eps;
    let input_dists: Vec<f64> = (0..n).map(|i| dist(&e0, i)).collect();
    if input_dists.iter().all(|d| *d <= eps) {
        return Ok(ProjectionResult {
            bundle: out,
            multipliers: vec![0.0; n],
            mixing: vec![1.0; n],
            active_set: input_dists.iter().map(|d| near(*d, eps)).collect(),
            iterations: 0,
            kkt_residual: 0.0,
        });
    }

    if eps == 0.0 {
        let beta = vec![1.0 / dim as f64; dim];
        let c = combine(&beta, &funcs);
        let mut multipliers = Vec::with_capacity(n);
        let mut mixing = Vec::with_capacity(n);
        for i in 0..n {
            let moved = dist(&beta, i) > 0.0;
            multipliers.push(if moved { f64::INFINITY } else { 0.0 });
            mixing.push(if moved { 0.0 } else { 1.0 });
            out.tasks[i] = c.clone();
        }
        out.central = Some(c);
        return Ok(ProjectionResult {
            bundle: out,
            multipliers,
            mixing,
            active_set: vec![true; n],
            iterations: 1,
            kkt_residual: 0.0,
        });
    }

    // θ_i = μ_i / (1 + μ_i) = 1 − ζ_i
    let thetas = |beta: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let d = dist(beta, i);
                if d > eps {
                    1.0 - eps / d
                } else {
                    0.0
                }
            })
            .collect()
    };
    let objective = |beta: &[f64]| -> f64 {
        let mut v = span.quad(&diff(beta, &e0));
        for i in 0..n {
            let excess = (dist(beta, i) - eps).max(0.0);
            v += excess * excess;
        }
        v
    };
    let residual = |beta: &[f64], theta: &[f64]| -> f64 {
        // (g − ḡ) − Σ θ_i (h̄_i − g)
        let mut r = diff(beta, &e0);
        for i in 0..n {
            for a in 0..dim {
                let hi = if a == i + 1 { 1.0 } else { 0.0 };
                r[a] -= theta[i] * (hi - beta[a]);
            }
        }
        span.norm(&r)
    };

    let dot_g = |u: &[f64], v: &[f64]| -> f64 {
        let mut s = 0.0;
        for a in 0..dim {
            for b in 0..dim {
                s += u[a] * span.g[(a, b)] * v[b];
            }
        }
        s
    };

    let mut beta = e0.clone();
    let mut theta = thetas(&beta);
    let mut res = residual(&beta, &theta);
    let mut phi = objective(&beta);
    let mut sweeps = 0;
    // Newton converges quadratically, so aim well below the tolerance.
    let target = (1e-6 * opts.tol).max(1e-15) * scale;
    while res > target {
        if sweeps >= opts.max_sweeps {
            if res <= opts.tol * scale {
                break;
            }
            return Err(Error::NoConvergence { iterations: sweeps, residual: res / scale });
        }
        sweeps += 1;
        // half gradient r = (g − ḡ) − Σ θ_i (h̄_i − g), Newton system
        // ((1 + Σθ) I + Σ (ε/d_i) n_i n_iᵀ G) δ = −r with n_i = (g − h̄_i)/d_i
        let mut r = diff(&beta, &e0);
        let mut hess = Matrix::identity(dim);
        hess.scale(1.0 + theta.iter().sum::<f64>());
        for i in 0..n {
            for a in 0..dim {
                let hi = if a == i + 1 { 1.0 } else { 0.0 };
                r[a] -= theta[i] * (hi - beta[a]);
            }
            if theta[i] > 0.0 {
                let d = dist(&beta, i);
                let mut nv = beta.clone();
                nv[i + 1] -= 1.0;
                nv.iter_mut().for_each(|x| *x /= d);
                let ng: Vec<f64> = (0..dim).map(|b| (0..dim).map(|a| nv[a] * span.g[(a, b)]).sum()).collect();
                let w = eps / d;
                for a in 0..dim {
                    for b in 0..dim {
                        hess[(a, b)] += w * nv[a] * ng[b];
                    }
                }
            }
        }
        let neg_r: Vec<f64> = r.iter().map(|x| -x).collect();
        let dir = lu_solve(&hess, &neg_r).unwrap_or(neg_r);
        let slope = 2.0 * dot_g(&r, &dir);
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand: Vec<f64> = beta.iter().zip(&dir).map(|(b, d)| b + step * d).collect();
            let phi_c = objective(&cand);
            // Near the minimiser Φ stops resolving progress in floating
            // point, so a full step that halves the residual is also taken.
            let halves = step == 1.0 && residual(&cand, &thetas(&cand)) < 0.5 * res;
            if phi_c <= phi + 1e-4 * step * slope.min(0.0) || (step < 1e-3 && phi_c < phi) || halves {
                accepted = cand != beta;
                beta = cand;
                phi = phi_c;
                break;
            }
            step *= 0.5;
        }
        theta = thetas(&beta);
        res = residual(&beta, &theta);
        if !accepted {
            // no decrease representable in floating point: at the minimiser
            break;
        }
    }
    if res > opts.tol * scale {
        return Err(Error::NoConvergence { iterations: sweeps, residual: res / scale });
    }

    let c = combine(&beta, &funcs);
    let mut multipliers = Vec::with_capacity(n);
    let mut mixing = Vec::with_capacity(n);
    let mut active_set = Vec::with_capacity(n);
    for i in 0..n {
        let zeta = 1.0 - theta[i];
        let mut h = bundle_bar.tasks[i].clone();
        if theta[i] > 0.0 {
            // h_i = g + ζ_i (h̄_i − g)
            h = bundle_bar.tasks[i].sub(&c);
            h.scale(zeta);
            h.axpy(1.0, &c);
        }
        let d_out = zeta * dist(&beta, i);
        multipliers.push(if zeta > 0.0 { theta[i] / zeta } else { f64::INFINITY });
        mixing.push(zeta);
        active_set.push(theta[i] > 0.0 || near(d_out, eps));
        out.tasks[i] = h;
    }
    out.central = Some(c);
    Ok(ProjectionResult {
        bundle: out,
        multipliers,
        mixing,
        active_set,
        iterations: sweeps,
        kkt_residual: res / scale,
    })
}

fn near(d: f64, eps: f64) -> bool {
    (d - eps).abs() <= 1e-8 * eps.max(1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxedProjection {
    pub bundle: PolicyBundle,
    /// Shrink factor toward the mean; `1` when the constraint is inactive.
    pub psi: f64,
}

/// Closed-form projection onto the averaged constraint
/// `Σ_i ‖h_i − g‖² ≤ N ε²` with cost `Σ_i ‖h_i − h̄_i‖²`.
///
/// The input central policy is ignored. The output centre is the task mean
/// and `h_i = (1 − ψ) g + ψ h̄_i` with
/// `ψ = min{1, N ε / (Σ_{i<j} ‖h̄_i − h̄_j‖²)^{1/2}}`.
pub fn project_relaxed(bundle_bar: &PolicyBundle, eps: f64, gram: &GramMatrix) -> Result<RelaxedProjection> {
    validate(bundle_bar, gram, eps)?;
    let n = bundle_bar.n_tasks();
    if n == 0 {
        return Err(Error::InvalidArgument("relaxed projection needs at least one task".into()));
    }
    let mut mean = Matrix::zeros(bundle_bar.order(), bundle_bar.spec.action_dim());
    for w in &bundle_bar.tasks {
        mean.axpy(1.0 / n as f64, w);
    }
    let offsets: Vec<Matrix> = bundle_bar.tasks.iter().map(|w| w.sub(&mean)).collect();
    // Σ_{i<j} ‖h̄_i − h̄_j‖² = N Σ_i ‖h̄_i − mean‖²
    let spread: f64 = n as f64 * offsets.iter().map(|o| gram.norm_sq(o)).sum::<f64>();
    let psi = if spread > 0.0 { (n as f64 * eps / libm::sqrt(spread)).min(1.0) } else { 1.0 };
    let mut out = bundle_bar.clone();
    out.epsilon = eps;
    if psi < 1.0 {
        for (h, off) in out.tasks.iter_mut().zip(&offsets) {
            *h = mean.clone();
            h.axpy(psi, off);
        }
    }
    out.central = Some(mean);
    Ok(RelaxedProjection { bundle: out, psi })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionComparison {
    /// `‖ḡ − g'‖`, the hypothesis quantity.
    pub input_center_gap: f64,
    pub hypothesis_holds: bool,
    /// `‖g − g'‖` between the exact and relaxed centres.
    pub center_gap: f64,
    /// `‖h_i − h'_i‖` per task.
    pub task_gaps: Vec<f64>,
    pub center_bound_holds: bool,
    /// `ε (2 + √N)`, the envelope implied by both readings of the per-task bound.
    pub task_bound: f64,
    pub task_bound_holds: bool,
    /// `ε (2 + √(N y_i / Σ y))` with `y_i = ‖h̄_i − g'‖`.
    pub task_bounds_linear: Vec<f64>,
    /// `ε (2 + √(N y_i² / Σ y²))`.
    pub task_bounds_squared: Vec<f64>,
}

const COMPARE_TOL: f64 = 1e-8;

/// Runs both projections on the same input and measures how far apart they land.
pub fn compare_projections(
    bundle_bar: &PolicyBundle,
    eps: f64,
    gram: &GramMatrix,
    opts: SolverOptions,
) -> Result<ProjectionComparison> {
    let exact = project_exact(bundle_bar, eps, gram, opts)?;
    let relaxed = project_relaxed(bundle_bar, eps, gram)?;
    let g_bar = bundle_bar.central.as_ref().ok_or(Error::MissingCentralPolicy)?;
    let g = exact.bundle.central.as_ref().expect("exact projection sets the centre");
    let g_rel = relaxed.bundle.central.as_ref().expect("relaxed projection sets the centre");
    let n = bundle_bar.n_tasks();

    let input_center_gap = gram.distance(g_bar, g_rel);
    let center_gap = gram.distance(g, g_rel);
    let task_gaps: Vec<f64> = (0..n)
        .map(|i| gram.distance(&exact.bundle.tasks[i], &relaxed.bundle.tasks[i]))
        .collect();
    let task_bound = eps * (2.0 + libm::sqrt(n as f64));

    let y: Vec<f64> = bundle_bar.tasks.iter().map(|h| gram.distance(h, g_rel)).collect();
    let y_sum: f64 = y.iter().sum();
    let y2_sum: f64 = y.iter().map(|v| v * v).sum();
    let ratio = |num: f64, den: f64| if den > 0.0 { num / den } else { 0.0 };
    let task_bounds_linear = y
        .iter()
        .map(|yi| eps * (2.0 + libm::sqrt(n as f64 * ratio(*yi, y_sum))))
        .collect();
    let task_bounds_squared = y
        .iter()
        .map(|yi| eps * (2.0 + libm::sqrt(n as f64 * ratio(yi * yi, y2_sum))))
        .collect();

    Ok(ProjectionComparison {
        input_center_gap,
        hypothesis_holds: input_center_gap <= eps,
        center_gap,
        center_bound_holds: center_gap <= eps + COMPARE_TOL,
        task_bound_holds: task_gaps.iter().all(|d| *d <= task_bound + COMPARE_TOL),
        task_gaps,
        task_bound,
        task_bounds_linear,
        task_bounds_squared,
    })
}

/// `max_{h ∈ B(g, ε)} ⟨d, h − h_i⟩ = ⟨d, g − h_i⟩ + ε ‖d‖` over a shared dictionary.
pub fn ball_support(direction: &Matrix, center: &Matrix, eps: f64, anchor: &Matrix, gram: &GramMatrix) -> f64 {
    let offset = center.sub(anchor);
    gram.weights_inner(direction, &offset) + eps * libm::sqrt(gram.norm_sq(direction))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{Dictionary, KernelSpec};

    fn scalar_bundle(tasks: &[f64], central: f64) -> (PolicyBundle, GramMatrix) {
        let spec = KernelSpec::new(vec![1.0], vec![], 1).unwrap();
        let dict = Dictionary::from_flat(1, vec![0.0]).unwrap();
        let gram = GramMatrix::compute(&spec, &dict);
        let tasks = tasks.iter().map(|t| Matrix::from_vec(1, 1, vec![*t])).collect();
        let b = PolicyBundle::from_parts(spec, dict, tasks, Some(Matrix::from_vec(1, 1, vec![central])), 0.0)
            .unwrap();
        (b, gram)
    }

    fn val(m: &Matrix) -> f64 {
        m[(0, 0)]
    }

    #[test]
    fn feasible_input_is_fixed() {
        let (b, k) = scalar_bundle(&[1.5, 2.5], 2.0);
        let r = project_exact(&b, 1.0, &k, SolverOptions::default()).unwrap();
        assert_eq!(r.bundle.tasks, b.tasks);
        assert_eq!(r.bundle.central, b.central);
        assert_eq!(r.multipliers, vec![0.0, 0.0]);
    }

    #[test]
    fn symmetric_pair_lands_on_the_ball() {
        let (b, k) = scalar_bundle(&[0.0, 4.0], 2.0);
        let r = project_exact(&b, 1.0, &k, SolverOptions::default()).unwrap();
        assert!((val(r.bundle.central.as_ref().unwrap()) - 2.0).abs() < 1e-12);
        assert!((val(&r.bundle.tasks[0]) - 1.0).abs() < 1e-12);
        assert!((val(&r.bundle.tasks[1]) - 3.0).abs() < 1e-12);
        assert!(r.active_set.iter().all(|a| *a));
        // ζ = ε / ‖h̄ − g‖ = 1/2, μ = 1
        for (z, m) in r.mixing.iter().zip(&r.multipliers) {
            assert!((z - 0.5).abs() < 1e-12);
            assert!((m - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_radius_is_consensus_average() {
        let (b, k) = scalar_bundle(&[0.0, 4.0, 1.0], 3.0);
        let r = project_exact(&b, 0.0, &k, SolverOptions::default()).unwrap();
        let want = (3.0 + 0.0 + 4.0 + 1.0) / 4.0;
        assert!((val(r.bundle.central.as_ref().unwrap()) - want).abs() < 1e-12);
        for h in &r.bundle.tasks {
            assert!((val(h) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn missing_central_is_an_error() {
        let (mut b, k) = scalar_bundle(&[0.0, 4.0], 2.0);
        b.central = None;
        assert_eq!(project_exact(&b, 1.0, &k, SolverOptions::default()), Err(Error::MissingCentralPolicy));
    }

    #[test]
    fn sweep_cap_reports_non_convergence() {
        let (b, k) = scalar_bundle(&[0.0, 4.0, 9.0], -3.0);
        let err = project_exact(&b, 0.5, &k, SolverOptions { tol: 1e-14, max_sweeps: 1 }).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { iterations: 1, .. }));
    }

    #[test]
    fn relaxed_identical_tasks() {
        let (b, k) = scalar_bundle(&[1.5, 1.5, 1.5], 0.0);
        let r = project_relaxed(&b, 0.1, &k).unwrap();
        assert_eq!(r.psi, 1.0);
        assert_eq!(r.bundle.tasks, b.tasks);
        assert!((val(r.bundle.central.as_ref().unwrap()) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn relaxed_inactive_for_large_radius() {
        let (b, k) = scalar_bundle(&[0.0, 4.0], 100.0);
        let r = project_relaxed(&b, 10.0, &k).unwrap();
        assert_eq!(r.psi, 1.0);
        assert_eq!(r.bundle.tasks, b.tasks);
    }

    #[test]
    fn relaxed_pair_uses_full_budget() {
        // Σ_{i<j}‖h̄_i − h̄_j‖² = 16, ψ = 2·1/4 = 1/2, h = {1, 3}, Σ‖h_i − g‖² = 2 = Nε².
        let (b, k) = scalar_bundle(&[0.0, 4.0], 7.0);
        let r = project_relaxed(&b, 1.0, &k).unwrap();
        assert!((r.psi - 0.5).abs() < 1e-15);
        assert!((val(r.bundle.central.as_ref().unwrap()) - 2.0).abs() < 1e-15);
        assert!((val(&r.bundle.tasks[0]) - 1.0).abs() < 1e-15);
        assert!((val(&r.bundle.tasks[1]) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn relaxed_zero_radius_is_mean() {
        let (b, k) = scalar_bundle(&[0.0, 4.0, 2.0], 7.0);
        let r = project_relaxed(&b, 0.0, &k).unwrap();
        assert_eq!(r.psi, 0.0);
        for h in &r.bundle.tasks {
            assert!((val(h) - 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn comparison_on_feasible_input_is_zero() {
        let (b, k) = scalar_bundle(&[1.8, 2.2], 2.0);
        let c = compare_projections(&b, 1.0, &k, SolverOptions::default()).unwrap();
        assert!(c.center_gap.abs() < 1e-15);
        assert!(c.task_gaps.iter().all(|d| d.abs() < 1e-15));
        assert!(c.hypothesis_holds && c.center_bound_holds && c.task_bound_holds);
    }

    #[test]
    fn ball_support_identities() {
        let (b, k) = scalar_bundle(&[1.0], 3.0);
        let zero = Matrix::zeros(1, 1);
        let g = b.central.clone().unwrap();
        assert_eq!(ball_support(&zero, &g, 0.5, &b.tasks[0], &k), 0.0);
        let d = Matrix::from_vec(1, 1, vec![-2.0]);
        assert!((ball_support(&d, &g, 0.5, &g, &k) - 1.0).abs() < 1e-15);
        // ⟨d, g − h⟩ + ε‖d‖ = −2·2 + 0.5·2
        assert!((ball_support(&d, &g, 0.5, &b.tasks[0], &k) + 3.0).abs() < 1e-15);
    }
}
