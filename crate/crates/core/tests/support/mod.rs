//! Random instances and independent reference solvers shared by the
//! integration tests. The solvers here work in the primal with plain
//! projected gradient steps and never call the library's solvers.

#![allow(dead_code)]

use crosslearn_core::{Dictionary, GramMatrix, KernelSpec, Matrix, PolicyBundle};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unif(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1 = 1.0 - unif(rng);
    let u2 = unif(rng);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn below(rng: &mut ChaCha8Rng, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

pub struct Instance {
    pub bundle: PolicyBundle,
    pub gram: GramMatrix,
    pub eps: f64,
}

fn random_weights(rng: &mut ChaCha8Rng, m: usize, p: usize, scale: f64) -> Matrix {
    Matrix::from_vec(m, p, (0..m * p).map(|_| scale * normal(rng)).collect())
}

/// Random bundle with `N ≤ 4`, `M ≤ 6`, `p ≤ 2` over random 2-D knots.
/// Task weights share a common component so some constraints end up inactive.
pub fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
    let n = 2 + below(rng, 3);
    let m = 1 + below(rng, 6);
    let p = 1 + below(rng, 2);
    random_instance_with(rng, n, m, p)
}

pub fn random_instance_with(rng: &mut ChaCha8Rng, n: usize, m: usize, p: usize) -> Instance {
    let spec = KernelSpec::new(vec![0.7, 1.3], vec![], p).unwrap();
    let mut dict = Dictionary::new(2);
    while dict.len() < m {
        let knot = [3.0 * unif(rng) - 1.5, 3.0 * unif(rng) - 1.5];
        if dict.find(&knot).is_none() {
            dict.push(&knot).unwrap();
        }
    }
    let gram = GramMatrix::compute(&spec, &dict);
    let base = random_weights(rng, m, p, 1.0);
    let spread = 0.2 + 1.5 * unif(rng);
    let tasks: Vec<Matrix> = (0..n)
        .map(|_| {
            let mut w = base.clone();
            w.axpy(spread, &random_weights(rng, m, p, 1.0));
            w
        })
        .collect();
    let mut central = base.clone();
    central.axpy(0.5, &random_weights(rng, m, p, 1.0));
    let eps = 0.05 + 1.2 * unif(rng);
    let bundle = PolicyBundle::from_parts(spec, dict, tasks, Some(central), eps).unwrap();
    Instance { bundle, gram, eps }
}

pub fn sq(gram: &GramMatrix, a: &Matrix, b: &Matrix) -> f64 {
    gram.norm_sq(&a.sub(b))
}

/// `Σ_i ‖h_i − h̄_i‖² + ‖g − ḡ‖²`.
pub fn exact_objective(bar: &PolicyBundle, tasks: &[Matrix], central: &Matrix, gram: &GramMatrix) -> f64 {
    let mut v = sq(gram, central, bar.central.as_ref().unwrap());
    for (h, hb) in tasks.iter().zip(&bar.tasks) {
        v += sq(gram, h, hb);
    }
    v
}

/// `Σ_i ‖h_i − h̄_i‖²`.
pub fn relaxed_objective(bar: &PolicyBundle, tasks: &[Matrix], gram: &GramMatrix) -> f64 {
    tasks.iter().zip(&bar.tasks).map(|(h, hb)| sq(gram, h, hb)).sum()
}

fn shrink_to_ball(u: &mut Matrix, radius: f64, gram: &GramMatrix) {
    let norm = gram.norm_sq(u).sqrt();
    if norm > radius {
        u.scale(radius / norm);
    }
}

pub struct OracleSolution {
    pub tasks: Vec<Matrix>,
    pub central: Matrix,
    pub objective: f64,
}

/// Projected gradient on `(g, u_i = h_i − g)`, where the constraint set is a
/// product of balls `‖u_i‖ ≤ ε`. Steps use the RKHS metric, so the gradient
/// with respect to coefficients is the residual itself.
pub fn exact_oracle(bar: &PolicyBundle, eps: f64, gram: &GramMatrix, iters: usize) -> OracleSolution {
    let n = bar.tasks.len();
    let g_bar = bar.central.as_ref().unwrap();
    let mut g = g_bar.clone();
    let mut u: Vec<Matrix> = bar.tasks.iter().map(|h| h.sub(g_bar)).collect();
    for ui in &mut u {
        shrink_to_ball(ui, eps, gram);
    }
    let step = 0.5 / (n as f64 + 2.0);
    for _ in 0..iters {
        let resid: Vec<Matrix> = (0..n)
            .map(|i| {
                let mut r = g.clone();
                r.axpy(1.0, &u[i]);
                r.sub(&bar.tasks[i])
            })
            .collect();
        let mut grad_g = g.sub(g_bar);
        for r in &resid {
            grad_g.axpy(1.0, r);
        }
        g.axpy(-2.0 * step, &grad_g);
        for i in 0..n {
            u[i].axpy(-2.0 * step, &resid[i]);
            shrink_to_ball(&mut u[i], eps, gram);
        }
    }
    let tasks: Vec<Matrix> = u
        .iter()
        .map(|ui| {
            let mut h = g.clone();
            h.axpy(1.0, ui);
            h
        })
        .collect();
    let objective = exact_objective(bar, &tasks, &g, gram);
    OracleSolution { tasks, central: g, objective }
}

/// Projected gradient on `(g, u_i)` for the averaged constraint
/// `Σ_i ‖u_i‖² ≤ N ε²`, a single ball in the product space.
pub fn relaxed_oracle(bar: &PolicyBundle, eps: f64, gram: &GramMatrix, iters: usize) -> OracleSolution {
    let n = bar.tasks.len();
    let radius_sq = n as f64 * eps * eps;
    let mut g = bar.tasks[0].clone();
    let mut u: Vec<Matrix> = bar.tasks.iter().map(|h| h.sub(&g)).collect();
    let project = |u: &mut Vec<Matrix>| {
        let total: f64 = u.iter().map(|x| gram.norm_sq(x)).sum();
        if total > radius_sq {
            let s = (radius_sq / total).sqrt();
            u.iter_mut().for_each(|x| x.scale(s));
        }
    };
    project(&mut u);
    let step = 0.5 / (n as f64 + 1.0);
    for _ in 0..iters {
        let resid: Vec<Matrix> = (0..n)
            .map(|i| {
                let mut r = g.clone();
                r.axpy(1.0, &u[i]);
                r.sub(&bar.tasks[i])
            })
            .collect();
        let mut grad_g = Matrix::zeros(g.rows(), g.cols());
        for r in &resid {
            grad_g.axpy(1.0, r);
        }
        g.axpy(-2.0 * step, &grad_g);
        for i in 0..n {
            u[i].axpy(-2.0 * step, &resid[i]);
        }
        project(&mut u);
    }
    let tasks: Vec<Matrix> = u
        .iter()
        .map(|ui| {
            let mut h = g.clone();
            h.axpy(1.0, ui);
            h
        })
        .collect();
    let objective = relaxed_objective(bar, &tasks, gram);
    OracleSolution { tasks, central: g, objective }
}

/// Random point of `C`: a centre near `ḡ` and task offsets inside the ball.
pub fn random_feasible(rng: &mut ChaCha8Rng, bar: &PolicyBundle, eps: f64, gram: &GramMatrix, near: &OracleSolution) -> (Vec<Matrix>, Matrix) {
    let m = bar.order();
    let p = bar.spec.action_dim();
    let mut g = near.central.clone();
    g.axpy(0.3 * unif(rng), &random_weights(rng, m, p, 1.0));
    let tasks = near
        .tasks
        .iter()
        .map(|h| {
            let mut u = h.sub(&near.central);
            u.axpy(0.3 * unif(rng), &random_weights(rng, m, p, 1.0));
            shrink_to_ball(&mut u, eps, gram);
            let mut out = g.clone();
            out.axpy(1.0, &u);
            out
        })
        .collect();
    (tasks, g)
}

/// Least squares over the remaining knots by gradient descent on the
/// reduced coefficients, started from zero.
pub fn removal_error_oracle(j: usize, w: &Matrix, gram: &GramMatrix, iters: usize) -> f64 {
    let m = gram.order();
    let keep: Vec<usize> = (0..m).filter(|&k| k != j).collect();
    let p = w.cols();
    let mut v = Matrix::zeros(m, p);
    let k = gram.matrix();
    let lmax: f64 = (0..m).map(|a| (0..m).map(|b| k[(a, b)].abs()).sum::<f64>()).fold(0.0, f64::max);
    let step = 1.0 / lmax.max(1.0);
    for _ in 0..iters {
        // gradient of ‖v − w‖²_K with respect to v restricted to `keep`
        let grad = gram.apply(&v.sub(w));
        for &a in &keep {
            for d in 0..p {
                v[(a, d)] -= step * grad[(a, d)];
            }
        }
    }
    sq(gram, &v, w)
}

/// Solves the symmetric positive definite system `a x = b` (columns of `b`)
/// by Gauss–Jordan elimination.
pub fn spd_solve(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.rows();
    let mut m = a.clone();
    let mut x = b.clone();
    for c in 0..n {
        let piv = m[(c, c)];
        for k in 0..n {
            m[(c, k)] /= piv;
        }
        for k in 0..x.cols() {
            x[(c, k)] /= piv;
        }
        for r in 0..n {
            if r == c {
                continue;
            }
            let f = m[(r, c)];
            for k in 0..n {
                m[(r, k)] -= f * m[(c, k)];
            }
            for k in 0..x.cols() {
                x[(r, k)] -= f * x[(c, k)];
            }
        }
    }
    x
}

/// `‖f − P_S f‖²` for the expansion `w` over the full dictionary, where
/// `P_S` projects onto the span of the knots in `keep`.
pub fn residual_outside(keep: &[usize], w: &Matrix, gram: &GramMatrix) -> (f64, Matrix) {
    let k = gram.matrix();
    let kss = k.select(keep);
    let rhs = gram.apply(w).select_rows(keep);
    let v = if keep.is_empty() { Matrix::zeros(0, w.cols()) } else { spd_solve(&kss, &rhs) };
    let mut diff = w.clone();
    for (r, &row) in keep.iter().enumerate() {
        for d in 0..w.cols() {
            diff[(row, d)] -= v[(r, d)];
        }
    }
    (gram.norm_sq(&diff), v)
}

/// Reference greedy pruning by direct least squares at every step.
pub fn reference_prune(weights: &[&Matrix], beta: f64, gram: &GramMatrix) -> Vec<usize> {
    let mut alive: Vec<usize> = (0..gram.order()).collect();
    let mut removed = Vec::new();
    loop {
        let mut best: Option<(usize, f64)> = None;
        for pos in 0..alive.len() {
            let keep: Vec<usize> = alive.iter().cloned().filter(|&a| a != alive[pos]).collect();
            let cost = weights.iter().map(|w| residual_outside(&keep, w, gram).0).fold(0.0, f64::max);
            if best.map_or(true, |(_, c)| cost < c) {
                best = Some((pos, cost));
            }
        }
        match best {
            Some((pos, cost)) if cost.sqrt() <= beta => {
                removed.push(alive.remove(pos));
            }
            _ => return removed,
        }
    }
}

use crosslearn_core::gradient::{Environment, Transition};

/// Single state, one action dimension, reward `scale · (offset − a²)`.
pub struct QuadraticEnv {
    pub scale: f64,
    pub offset: f64,
}

impl Environment for QuadraticEnv {
    fn state_dim(&self) -> usize {
        1
    }
    fn action_dim(&self) -> usize {
        1
    }
    fn reset<R: RngCore + ?Sized>(&mut self, _rng: &mut R) {}
    fn observation(&self) -> Vec<f64> {
        vec![0.0]
    }
    fn step(&mut self, a: &[f64]) -> Transition {
        Transition { reward: self.scale * (self.offset - a[0] * a[0]), absorbing: false }
    }
    fn is_absorbing(&self) -> bool {
        false
    }
}

/// Single state with a constant reward.
pub struct ConstantEnv(pub f64);

impl Environment for ConstantEnv {
    fn state_dim(&self) -> usize {
        1
    }
    fn action_dim(&self) -> usize {
        1
    }
    fn reset<R: RngCore + ?Sized>(&mut self, _rng: &mut R) {}
    fn observation(&self) -> Vec<f64> {
        vec![0.0]
    }
    fn step(&mut self, _a: &[f64]) -> Transition {
        Transition { reward: self.0, absorbing: false }
    }
    fn is_absorbing(&self) -> bool {
        false
    }
}

pub fn constant_policy(c: f64) -> crosslearn_core::KernelPolicy {
    let spec = KernelSpec::new(vec![1.0], vec![], 1).unwrap();
    let dict = Dictionary::from_flat(1, vec![0.0]).unwrap();
    crosslearn_core::KernelPolicy::new(spec, dict, Matrix::from_vec(1, 1, vec![c])).unwrap()
}

/// Pearson statistic of `draws` against `Geom(γ)` with bins `0..bins` and
/// one tail bin. Degrees of freedom: `bins`.
pub fn geometric_chi_square(draws: &[usize], gamma: f64, bins: usize) -> f64 {
    let n = draws.len() as f64;
    let mut counts = vec![0.0; bins + 1];
    for &d in draws {
        counts[d.min(bins)] += 1.0;
    }
    let mut stat = 0.0;
    for (k, c) in counts.iter().enumerate() {
        let p = if k < bins { (1.0 - gamma) * gamma.powi(k as i32) } else { gamma.powi(bins as i32) };
        let e = n * p;
        stat += (c - e) * (c - e) / e;
    }
    stat
}

/// 99th percentile of the chi-square law with 20 degrees of freedom.
pub const CHI2_20DF_99: f64 = 37.566;

/// Discounted return of `policy` on the quadratic environment with the
/// noise supplied by `normals`, truncated after `len` steps.
pub fn quadratic_return(c: f64, sd: f64, gamma: f64, normals: &[f64]) -> f64 {
    let mut disc = 1.0;
    let mut total = 0.0;
    for z in normals {
        let a = c + sd * z;
        total -= disc * a * a;
        disc *= gamma;
    }
    total
}
