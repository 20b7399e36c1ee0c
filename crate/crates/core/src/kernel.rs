//! Gaussian kernel algebra: evaluation, dictionaries, kernel-expansion
//! policies, Gram matrices and RKHS inner products.
//!
//! The scalar kernel is the anisotropic Gaussian
//! `κ(s, s') = exp(−½ Σ_d Δ_d² / ℓ_d)`, where `ℓ_d` are per-dimension
//! variances and `Δ_d` is wrapped to `(−π, π]` on angular dimensions. The
//! matrix-valued kernel is `κ(s, s')·I_p`, so every output channel shares one
//! scalar Gram matrix and it is never materialised per channel.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{dot, eigen_range, Matrix};

/// Knots closer than this (Euclidean) are treated as the same knot.
pub const DEDUP_TOLERANCE: f64 = 1e-9;

/// Wraps an angle to `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    if x > -PI && x <= PI {
        return x;
    }
    let mut r = x - two_pi * libm::floor((x + PI) / two_pi);
    if r <= -PI {
        r += two_pi;
    }
    if r > PI {
        r -= two_pi;
    }
    r
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    action_dim: usize,
    length_scales: Vec<f64>,
    angular_dims: Vec<usize>,
    angular_mask: Vec<bool>,
}

impl KernelSpec {
    pub fn new(length_scales: Vec<f64>, angular_dims: Vec<usize>, action_dim: usize) -> Result<Self> {
        if length_scales.is_empty() {
            return Err(Error::InvalidArgument("state dimension must be positive".into()));
        }
        if action_dim == 0 {
            return Err(Error::InvalidArgument("action dimension must be positive".into()));
        }
        if let Some(l) = length_scales.iter().find(|l| !(**l > 0.0) || !l.is_finite()) {
            return Err(Error::InvalidArgument(alloc::format!("length scale {l} is not positive")));
        }
        let q = length_scales.len();
        let mut angular_mask = vec![false; q];
        for &d in &angular_dims {
            if d >= q {
                return Err(Error::InvalidArgument(alloc::format!(
                    "angular dimension {d} out of range for state dimension {q}"
                )));
            }
            angular_mask[d] = true;
        }
        let mut angular_dims = angular_dims;
        angular_dims.sort_unstable();
        angular_dims.dedup();
        Ok(Self { action_dim, length_scales, angular_dims, angular_mask })
    }

    pub fn state_dim(&self) -> usize {
        self.length_scales.len()
    }

    pub fn action_dim(&self) -> usize {
        self.action_dim
    }

    pub fn length_scales(&self) -> &[f64] {
        &self.length_scales
    }

    pub fn angular_dims(&self) -> &[usize] {
        &self.angular_dims
    }

    fn check_state(&self, s: &[f64]) -> Result<()> {
        if s.len() != self.state_dim() {
            return Err(Error::DimensionMismatch { expected: self.state_dim(), got: s.len() });
        }
        Ok(())
    }

    /// Kernel value without dimension checks.
    #[inline]
    pub fn eval_unchecked(&self, a: &[f64], b: &[f64]) -> f64 {
        let mut acc = 0.0;
        for d in 0..self.length_scales.len() {
            let mut delta = a[d] - b[d];
            if self.angular_mask[d] {
                delta = wrap_angle(delta);
            }
            acc += delta * delta / self.length_scales[d];
        }
        libm::exp(-0.5 * acc)
    }

    pub fn eval(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        self.check_state(a)?;
        self.check_state(b)?;
        Ok(self.eval_unchecked(a, b))
    }
}

pub fn kernel_eval(spec: &KernelSpec, s: &[f64], s_prime: &[f64]) -> Result<f64> {
    spec.eval(s, s_prime)
}

/// Ordered list of knots, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dictionary {
    dim: usize,
    data: Vec<f64>,
}

impl Dictionary {
    pub fn new(dim: usize) -> Self {
        Self { dim, data: Vec::new() }
    }

    pub fn from_knots(dim: usize, knots: &[&[f64]]) -> Result<Self> {
        let mut d = Self::new(dim);
        for k in knots {
            d.push(k)?;
        }
        Ok(d)
    }

    pub fn from_flat(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 || data.len() % dim != 0 {
            return Err(Error::DimensionMismatch { expected: dim, got: data.len() });
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.data.len() / self.dim
        }
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn knot(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn knots(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim.max(1))
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn push(&mut self, knot: &[f64]) -> Result<usize> {
        if knot.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: knot.len() });
        }
        self.data.extend_from_slice(knot);
        Ok(self.len() - 1)
    }

    /// Index of a stored knot within [`DEDUP_TOLERANCE`] of `knot`.
    pub fn find(&self, knot: &[f64]) -> Option<usize> {
        let tol2 = DEDUP_TOLERANCE * DEDUP_TOLERANCE;
        self.knots().position(|k| {
            k.iter().zip(knot).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() <= tol2
        })
    }

    pub fn retain_indices(&mut self, keep: &[usize]) {
        let mut data = Vec::with_capacity(keep.len() * self.dim);
        for &i in keep {
            data.extend_from_slice(self.knot(i));
        }
        self.data = data;
    }
}

/// Anything that maps a state to a mean action.
pub trait Policy {
    fn state_dim(&self) -> usize;
    fn action_dim(&self) -> usize;
    /// Writes the mean action at `s` into `out` (length `action_dim`).
    fn eval_into(&self, s: &[f64], out: &mut [f64]);
}

/// Borrowed kernel expansion: spec, dictionary and an `M × p` weight matrix.
#[derive(Debug, Clone, Copy)]
pub struct PolicyView<'a> {
    pub spec: &'a KernelSpec,
    pub dict: &'a Dictionary,
    pub weights: &'a Matrix,
}

impl Policy for PolicyView<'_> {
    fn state_dim(&self) -> usize {
        self.spec.state_dim()
    }

    fn action_dim(&self) -> usize {
        self.spec.action_dim()
    }

    fn eval_into(&self, s: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (m, knot) in self.dict.knots().enumerate() {
            let w = self.weights.row(m);
            if w.iter().all(|x| *x == 0.0) {
                continue;
            }
            let k = self.spec.eval_unchecked(knot, s);
            for (o, wi) in out.iter_mut().zip(w) {
                *o += k * wi;
            }
        }
    }
}

/// Owned kernel-expansion policy `h(·) = Σ_m κ(s_m, ·) w_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelPolicy {
    pub spec: KernelSpec,
    pub dict: Dictionary,
    pub weights: Matrix,
}

impl KernelPolicy {
    pub fn new(spec: KernelSpec, dict: Dictionary, weights: Matrix) -> Result<Self> {
        if dict.dim() != spec.state_dim() {
            return Err(Error::DimensionMismatch { expected: spec.state_dim(), got: dict.dim() });
        }
        if weights.rows() != dict.len() {
            return Err(Error::DimensionMismatch { expected: dict.len(), got: weights.rows() });
        }
        if weights.cols() != spec.action_dim() {
            return Err(Error::DimensionMismatch { expected: spec.action_dim(), got: weights.cols() });
        }
        Ok(Self { spec, dict, weights })
    }

    /// The zero function (empty dictionary).
    pub fn zero(spec: KernelSpec) -> Self {
        let dict = Dictionary::new(spec.state_dim());
        let weights = Matrix::zeros(0, spec.action_dim());
        Self { spec, dict, weights }
    }

    pub fn view(&self) -> PolicyView<'_> {
        PolicyView { spec: &self.spec, dict: &self.dict, weights: &self.weights }
    }
}

impl Policy for KernelPolicy {
    fn state_dim(&self) -> usize {
        self.spec.state_dim()
    }

    fn action_dim(&self) -> usize {
        self.spec.action_dim()
    }

    fn eval_into(&self, s: &[f64], out: &mut [f64]) {
        self.view().eval_into(s, out)
    }
}

/// Evaluates the mean action of `policy` at `s`.
pub fn policy_eval<P: Policy + ?Sized>(policy: &P, s: &[f64]) -> Result<Vec<f64>> {
    if s.len() != policy.state_dim() {
        return Err(Error::DimensionMismatch { expected: policy.state_dim(), got: s.len() });
    }
    let mut out = vec![0.0; policy.action_dim()];
    policy.eval_into(s, &mut out);
    Ok(out)
}

/// Symmetric matrix of base-kernel values over a dictionary.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    entries: Matrix,
}

impl GramMatrix {
    pub fn compute(spec: &KernelSpec, dict: &Dictionary) -> Self {
        let m = dict.len();
        let mut entries = Matrix::zeros(m, m);
        for i in 0..m {
            entries[(i, i)] = 1.0;
            for j in 0..i {
                let k = spec.eval_unchecked(dict.knot(i), dict.knot(j));
                entries[(i, j)] = k;
                entries[(j, i)] = k;
            }
        }
        Self { entries }
    }

    /// Wraps a precomputed matrix (used by tests and file loaders).
    pub fn from_matrix(entries: Matrix) -> Result<Self> {
        if entries.rows() != entries.cols() {
            return Err(Error::DimensionMismatch { expected: entries.rows(), got: entries.cols() });
        }
        Ok(Self { entries })
    }

    pub fn order(&self) -> usize {
        self.entries.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.entries
    }

    /// Appends the row and column of the last knot of `dict`, which must hold
    /// exactly one knot more than the matrix.
    pub fn push_last(&mut self, spec: &KernelSpec, dict: &Dictionary) {
        let m = self.order();
        debug_assert_eq!(dict.len(), m + 1);
        let new = dict.knot(m);
        let mut entries = Matrix::zeros(m + 1, m + 1);
        for i in 0..m {
            entries.row_mut(i)[..m].copy_from_slice(self.entries.row(i));
            let k = spec.eval_unchecked(dict.knot(i), new);
            entries[(i, m)] = k;
            entries[(m, i)] = k;
        }
        entries[(m, m)] = 1.0;
        self.entries = entries;
    }

    pub fn retain_indices(&mut self, keep: &[usize]) {
        self.entries = self.entries.select(keep);
    }

    /// Checks symmetry (to 1e−12) and positive semidefiniteness
    /// (smallest eigenvalue ≥ −1e−9 · largest).
    pub fn check(&self) -> Result<()> {
        let m = self.order();
        for i in 0..m {
            for j in 0..i {
                if (self.entries[(i, j)] - self.entries[(j, i)]).abs() > 1e-12 {
                    return Err(Error::InvalidArgument("gram matrix is not symmetric".into()));
                }
            }
        }
        if m == 0 {
            return Ok(());
        }
        let (lo, hi) = eigen_range(&self.entries);
        if lo < -1e-9 * hi.abs().max(1.0) {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: lo });
        }
        Ok(())
    }

    /// `Σ_d a[:,d]ᵀ K b[:,d]` for weight matrices over this dictionary.
    pub fn weights_inner(&self, a: &Matrix, b: &Matrix) -> f64 {
        let m = self.order();
        debug_assert_eq!(a.rows(), m);
        debug_assert_eq!(b.rows(), m);
        let mut total = 0.0;
        for i in 0..m {
            let ai = a.row(i);
            if ai.iter().all(|x| *x == 0.0) {
                continue;
            }
            let krow = self.entries.row(i);
            for (j, kij) in krow.iter().enumerate() {
                total += kij * dot(ai, b.row(j));
            }
        }
        total
    }

    /// Squared RKHS norm of the expansion with weights `a`, clamped at zero.
    pub fn norm_sq(&self, a: &Matrix) -> f64 {
        self.weights_inner(a, a).max(0.0)
    }

    /// RKHS distance between two expansions over this dictionary.
    pub fn distance(&self, a: &Matrix, b: &Matrix) -> f64 {
        libm::sqrt(self.norm_sq(&a.sub(b)))
    }

    /// `K · a` (each column of `a` multiplied by the Gram matrix).
    pub fn apply(&self, a: &Matrix) -> Matrix {
        self.entries.matmul(a)
    }
}

pub fn gram(spec: &KernelSpec, dict: &Dictionary) -> GramMatrix {
    GramMatrix::compute(spec, dict)
}

fn check_shared(f: &KernelPolicy, g: &KernelPolicy, gram: &GramMatrix) -> Result<()> {
    if f.dict != g.dict || f.spec != g.spec {
        return Err(Error::DictionaryMismatch);
    }
    if gram.order() != f.dict.len() {
        return Err(Error::DictionaryMismatch);
    }
    if f.weights.cols() != g.weights.cols() {
        return Err(Error::DimensionMismatch { expected: f.weights.cols(), got: g.weights.cols() });
    }
    Ok(())
}

/// RKHS inner product of two policies over a shared dictionary.
pub fn inner_product(f: &KernelPolicy, g: &KernelPolicy, gram: &GramMatrix) -> Result<f64> {
    check_shared(f, g, gram)?;
    Ok(gram.weights_inner(&f.weights, &g.weights))
}

/// RKHS distance `‖f − g‖` over a shared dictionary.
pub fn rkhs_distance(f: &KernelPolicy, g: &KernelPolicy, gram: &GramMatrix) -> Result<f64> {
    check_shared(f, g, gram)?;
    Ok(gram.distance(&f.weights, &g.weights))
}

/// RKHS inner product of two expansions with arbitrary dictionaries, using
/// direct kernel evaluations between the two knot sets.
pub fn cross_inner_product(f: PolicyView<'_>, g: PolicyView<'_>) -> f64 {
    let mut total = 0.0;
    for (m, a) in f.dict.knots().enumerate() {
        let wf = f.weights.row(m);
        if wf.iter().all(|x| *x == 0.0) {
            continue;
        }
        for (n, b) in g.dict.knots().enumerate() {
            total += f.spec.eval_unchecked(a, b) * dot(wf, g.weights.row(n));
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use libm::exp;

    fn spec1() -> KernelSpec {
        KernelSpec::new(vec![1.0], vec![], 1).unwrap()
    }

    fn policy1(knots: &[f64], weights: &[f64]) -> KernelPolicy {
        let spec = spec1();
        let dict = Dictionary::from_flat(1, knots.to_vec()).unwrap();
        let w = Matrix::from_vec(weights.len(), 1, weights.to_vec());
        KernelPolicy::new(spec, dict, w).unwrap()
    }

    #[test]
    fn kernel_self_is_one() {
        let spec = KernelSpec::new(vec![1.0, 0.3, 2.0], vec![1], 2).unwrap();
        let s = [0.4, -2.0, 7.0];
        assert_eq!(spec.eval(&s, &s).unwrap(), 1.0);
    }

    #[test]
    fn kernel_unit_distance() {
        let k = kernel_eval(&spec1(), &[0.0], &[1.0]).unwrap();
        assert!((k - exp(-0.5)).abs() < 1e-15);
        assert!((k - 0.6065306597126334).abs() < 1e-15);
    }

    #[test]
    fn kernel_rejects_wrong_dimension() {
        assert_eq!(
            kernel_eval(&spec1(), &[0.0, 1.0], &[1.0]),
            Err(Error::DimensionMismatch { expected: 1, got: 2 })
        );
    }

    #[test]
    fn spec_validation() {
        assert!(KernelSpec::new(vec![1.0, 0.0], vec![], 1).is_err());
        assert!(KernelSpec::new(vec![1.0, 1.0], vec![2], 1).is_err());
        assert!(KernelSpec::new(vec![1.0], vec![], 0).is_err());
    }

    #[test]
    fn angular_wrap_is_periodic() {
        let spec = KernelSpec::new(vec![1.0, 0.5], vec![1], 1).unwrap();
        for phi in [-3.0, -1.0, 0.2, 2.9, 3.14] {
            let a = spec.eval(&[0.1, phi], &[0.3, 0.7]).unwrap();
            let b = spec.eval(&[0.1, phi + 2.0 * PI], &[0.3, 0.7]).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert!((wrap_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(0.5 + 4.0 * PI) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_policy_is_zero() {
        let p = KernelPolicy::zero(KernelSpec::new(vec![1.0, 1.0], vec![], 2).unwrap());
        assert_eq!(policy_eval(&p, &[3.0, 4.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn single_knot_reproduces_weight() {
        let p = policy1(&[0.7], &[2.5]);
        assert_eq!(policy_eval(&p, &[0.7]).unwrap(), vec![2.5]);
    }

    #[test]
    fn two_knots_cancel_at_midpoint() {
        let p = policy1(&[0.0, 2.0], &[1.0, -1.0]);
        assert!(policy_eval(&p, &[1.0]).unwrap()[0].abs() < 1e-15);
    }

    #[test]
    fn gram_examples() {
        let spec = spec1();
        assert_eq!(gram(&spec, &Dictionary::new(1)).order(), 0);
        let g = gram(&spec, &Dictionary::from_flat(1, vec![0.0, 2.0]).unwrap());
        assert_eq!(g.matrix()[(0, 0)], 1.0);
        assert_eq!(g.matrix()[(1, 1)], 1.0);
        assert!((g.matrix()[(0, 1)] - exp(-2.0)).abs() < 1e-15);
        assert_eq!(g.matrix()[(0, 1)], g.matrix()[(1, 0)]);
        g.check().unwrap();
    }

    #[test]
    fn incremental_gram_matches_full() {
        let spec = KernelSpec::new(vec![1.0, 0.6], vec![1], 1).unwrap();
        let mut dict = Dictionary::new(2);
        let mut g = gram(&spec, &dict);
        for k in [[0.0, 0.1], [1.0, 3.0], [0.5, -3.0], [2.0, 0.0]] {
            dict.push(&k).unwrap();
            g.push_last(&spec, &dict);
        }
        assert_eq!(g, gram(&spec, &dict));
        g.retain_indices(&[0, 2, 3]);
        dict.retain_indices(&[0, 2, 3]);
        assert_eq!(g, gram(&spec, &dict));
    }

    #[test]
    fn inner_product_examples() {
        let spec = spec1();
        let dict = Dictionary::from_flat(1, vec![0.0]).unwrap();
        let k = gram(&spec, &dict);
        let a = policy1(&[0.0], &[3.0]);
        let b = policy1(&[0.0], &[1.0]);
        let z = policy1(&[0.0], &[0.0]);
        assert_eq!(inner_product(&a, &b, &k).unwrap(), 3.0);
        assert_eq!(inner_product(&a, &z, &k).unwrap(), 0.0);
        assert!(inner_product(&a, &a, &k).unwrap() >= 0.0);
        assert_eq!(rkhs_distance(&a, &b, &k).unwrap(), 2.0);
        assert_eq!(rkhs_distance(&a, &a, &k).unwrap(), 0.0);
    }

    #[test]
    fn inner_product_requires_shared_dictionary() {
        let a = policy1(&[0.0], &[1.0]);
        let b = policy1(&[1.0], &[1.0]);
        let k = gram(&a.spec, &a.dict);
        assert_eq!(inner_product(&a, &b, &k), Err(Error::DictionaryMismatch));
    }

    #[test]
    fn cross_inner_matches_shared() {
        let a = policy1(&[0.0, 1.0], &[1.0, -2.0]);
        let b = policy1(&[0.0, 1.0], &[0.5, 0.25]);
        let k = gram(&a.spec, &a.dict);
        let shared = inner_product(&a, &b, &k).unwrap();
        assert!((cross_inner_product(a.view(), b.view()) - shared).abs() < 1e-14);
    }
}
