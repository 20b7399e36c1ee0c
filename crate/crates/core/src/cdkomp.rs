//! Common-dictionary kernel orthogonal matching pursuit.
//!
//! Knots are removed greedily from the shared dictionary. The cost of a
//! candidate knot is the largest squared RKHS distance, over every policy
//! (the central one included), between the pre-prune policy and its best
//! approximation on the dictionary that would remain. Costs are always
//! measured against the pre-prune policies, so the total change of each
//! policy in one call stays within the budget `β`.
//!
//! The greedy loop keeps `B = K_SS⁻¹` for the surviving set `S` and the
//! coefficients `A_i` of each original policy projected onto `span(S)`.
//! Dropping knot `j` from `S` adds `‖A_i[j]‖² / B_jj` to the squared error of
//! policy `i`, and both `B` and `A_i` downdate in `O(|S|²)` and `O(|S| p)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::bundle::PolicyBundle;
use crate::error::{Error, Result};
use crate::kernel::GramMatrix;
use crate::linalg::{dot, pinv_sym, spd_inverse_guarded, Matrix};

/// Relative eigenvalue cut-off of the pseudo-inverse in [`removal_error`].
pub const PINV_TOLERANCE: f64 = 1e-10;

/// Slack allowed on the direct post-prune budget check.
const BUDGET_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PruneReport {
    /// Removed positions in the pre-prune dictionary, in removal order.
    pub removed_knots: Vec<usize>,
    /// `‖h_i − h_i^pruned‖` for each task, then the central policy if present.
    pub per_policy_bias: Vec<f64>,
    pub final_order: usize,
    /// Set when removals beyond the budget were needed to meet the order cap.
    pub cap_forced: bool,
}

impl PruneReport {
    pub fn max_bias(&self) -> f64 {
        self.per_policy_bias.iter().cloned().fold(0.0, f64::max)
    }
}

/// Squared distance between a policy and its best approximation without
/// knot `j`, and the reduced weights `K_{-j,-j}^† K_{-j,:} w` achieving it.
pub fn removal_error(j: usize, weights: &Matrix, gram: &GramMatrix) -> Result<(f64, Matrix)> {
    let m = gram.order();
    if weights.rows() != m {
        return Err(Error::DimensionMismatch { expected: m, got: weights.rows() });
    }
    if j >= m {
        return Err(Error::InvalidArgument("knot index out of range".into()));
    }
    let keep: Vec<usize> = (0..m).filter(|&k| k != j).collect();
    let p = weights.cols();
    let k = gram.matrix();
    let reduced_inv = pinv_sym(&k.select(&keep), PINV_TOLERANCE);
    let kw = gram.apply(weights).select_rows(&keep);
    let best = reduced_inv.matmul(&kw);
    let mut diff = weights.clone();
    for (r, &row) in keep.iter().enumerate() {
        for d in 0..p {
            diff[(row, d)] -= best[(r, d)];
        }
    }
    Ok((gram.norm_sq(&diff), best))
}

/// Inverse of the dictionary Gram matrix, maintained across appends and
/// removals. A small ridge is added when the Gram matrix is numerically
/// singular.
#[derive(Debug, Clone, PartialEq)]
pub struct GramInverse {
    inv: Matrix,
    ridge: f64,
}

impl GramInverse {
    pub fn compute(gram: &GramMatrix) -> Result<Self> {
        let (inv, ridge) = spd_inverse_guarded(gram.matrix())
            .ok_or(Error::NotPositiveSemidefinite { min_eigenvalue: f64::NAN })?;
        Ok(Self { inv, ridge })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.inv
    }

    pub fn order(&self) -> usize {
        self.inv.rows()
    }

    pub fn ridge(&self) -> f64 {
        self.ridge
    }

    /// Block update after `gram` grew by one knot (the last row/column).
    pub fn push_last(&mut self, gram: &GramMatrix) -> Result<()> {
        let m = self.order();
        debug_assert_eq!(gram.order(), m + 1);
        let k = gram.matrix();
        let col: Vec<f64> = (0..m).map(|i| k[(i, m)]).collect();
        let bk: Vec<f64> = (0..m).map(|i| dot(self.inv.row(i), &col)).collect();
        let s = k[(m, m)] + self.ridge - dot(&col, &bk);
        if !(s > 1e-10) {
            *self = Self::compute(gram)?;
            return Ok(());
        }
        let mut inv = Matrix::zeros(m + 1, m + 1);
        for i in 0..m {
            let f = bk[i] / s;
            let out = inv.row_mut(i);
            for ((o, b), x) in out[..m].iter_mut().zip(&bk).zip(self.inv.row(i)) {
                *o = x + f * b;
            }
            out[m] = -f;
            inv[(m, i)] = -f;
        }
        inv[(m, m)] = 1.0 / s;
        self.inv = inv;
        Ok(())
    }

    /// Schur-complement downdate after removing position `j`.
    pub fn remove(&mut self, j: usize) {
        let m = self.order();
        let bjj = self.inv[(j, j)];
        let keep: Vec<usize> = (0..m).filter(|&k| k != j).collect();
        let col: Vec<f64> = keep.iter().map(|&k| self.inv[(k, j)]).collect();
        let mut inv = self.inv.select(&keep);
        for (a, &ca) in col.iter().enumerate() {
            let f = ca / bjj;
            for (x, cb) in inv.row_mut(a).iter_mut().zip(&col) {
                *x -= f * cb;
            }
        }
        self.inv = inv;
    }
}

/// Result of one pruning call.
#[derive(Debug, Clone, PartialEq)]
pub struct PruneOutcome {
    pub bundle: PolicyBundle,
    pub gram: GramMatrix,
    pub inverse: GramInverse,
    pub report: PruneReport,
}

/// Greedy state over the surviving set.
struct Greedy<'a> {
    originals: Vec<&'a Matrix>,
    alive: Vec<usize>,
    inverse: GramInverse,
    coeffs: Vec<Matrix>,
    base: Vec<f64>,
    removed: Vec<usize>,
}

impl<'a> Greedy<'a> {
    fn new(originals: Vec<&'a Matrix>, inverse: GramInverse) -> Self {
        let m = inverse.order();
        let coeffs = originals.iter().map(|w| (*w).clone()).collect();
        let base = vec![0.0; originals.len()];
        Self { originals, alive: (0..m).collect(), inverse, coeffs, base, removed: Vec::new() }
    }

    /// Cheapest position in `alive` and its cost, ties to the lowest index.
    fn cheapest(&self) -> Option<(usize, f64)> {
        let b = self.inverse.matrix();
        let mut best: Option<(usize, f64)> = None;
        for pos in 0..self.alive.len() {
            let bjj = b[(pos, pos)];
            let mut cost = 0.0_f64;
            for (a, base) in self.coeffs.iter().zip(&self.base) {
                let row = a.row(pos);
                let inc = if bjj > 0.0 { row.iter().map(|x| x * x).sum::<f64>() / bjj } else { f64::INFINITY };
                let inc = if row.iter().all(|x| *x == 0.0) { 0.0 } else { inc };
                cost = cost.max(base + inc);
            }
            if best.map_or(true, |(_, c)| cost < c) {
                best = Some((pos, cost));
            }
        }
        best
    }

    fn remove(&mut self, pos: usize) {
        let b = self.inverse.matrix();
        let bjj = b[(pos, pos)];
        let n = self.alive.len();
        let keep: Vec<usize> = (0..n).filter(|&k| k != pos).collect();
        let col: Vec<f64> = (0..n).map(|k| b[(k, pos)]).collect();
        for (a, base) in self.coeffs.iter_mut().zip(self.base.iter_mut()) {
            let rowj: Vec<f64> = a.row(pos).to_vec();
            if rowj.iter().all(|x| *x == 0.0) {
                *a = a.select_rows(&keep);
                continue;
            }
            *base += rowj.iter().map(|x| x * x).sum::<f64>() / bjj;
            for k in 0..n {
                if k == pos {
                    continue;
                }
                let f = col[k] / bjj;
                for (x, y) in a.row_mut(k).iter_mut().zip(&rowj) {
                    *x -= f * y;
                }
            }
            *a = a.select_rows(&keep);
        }
        self.inverse.remove(pos);
        self.removed.push(self.alive[pos]);
        self.alive.remove(pos);
    }

    /// Direct `‖original_i − approximation_i‖` against the full Gram matrix.
    fn biases(&self, gram: &GramMatrix) -> Vec<f64> {
        self.originals
            .iter()
            .zip(&self.coeffs)
            .map(|(w, a)| {
                let mut diff = (*w).clone();
                for (r, &row) in self.alive.iter().enumerate() {
                    for d in 0..diff.cols() {
                        diff[(row, d)] -= a[(r, d)];
                    }
                }
                libm::sqrt(gram.norm_sq(&diff))
            })
            .collect()
    }
}

/// Prunes the shared dictionary of `bundle`, computing `K⁻¹` from scratch.
pub fn prune(bundle: &PolicyBundle, beta: f64, order_cap: usize, gram: &GramMatrix) -> Result<PruneOutcome> {
    let inverse = GramInverse::compute(gram)?;
    prune_with_inverse(bundle, beta, order_cap, gram, &inverse)
}

/// Like [`prune`], reusing a maintained inverse of `gram`.
pub fn prune_with_inverse(
    bundle: &PolicyBundle,
    beta: f64,
    order_cap: usize,
    gram: &GramMatrix,
    inverse: &GramInverse,
) -> Result<PruneOutcome> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::InvalidArgument("compression budget must be a nonnegative number".into()));
    }
    if gram.order() != bundle.order() || inverse.order() != bundle.order() {
        return Err(Error::DictionaryMismatch);
    }
    let originals: Vec<&Matrix> = bundle.all_weights().collect();
    let budget_sq = beta * beta;

    let mut greedy = Greedy::new(originals.clone(), inverse.clone());
    while let Some((pos, cost)) = greedy.cheapest() {
        if cost > budget_sq {
            break;
        }
        greedy.remove(pos);
    }
    // The downdates run on a possibly ill-conditioned inverse; confirm the
    // budget directly and drop trailing removals until it holds.
    let mut biases = greedy.biases(gram);
    if biases.iter().any(|b| *b > beta + BUDGET_SLACK) {
        let order: Vec<usize> = greedy.removed.clone();
        let fresh = GramInverse::compute(gram)?;
        let mut k = order.len();
        loop {
            k -= 1;
            let mut replay = Greedy::new(originals.clone(), fresh.clone());
            for &knot in &order[..k] {
                let pos = replay.alive.iter().position(|&a| a == knot).expect("knot still alive");
                replay.remove(pos);
            }
            biases = replay.biases(gram);
            if k == 0 || biases.iter().all(|b| *b <= beta + BUDGET_SLACK) {
                greedy = replay;
                break;
            }
        }
    }

    let mut cap_forced = false;
    while greedy.alive.len() > order_cap {
        let (pos, _) = greedy.cheapest().expect("nonempty dictionary");
        greedy.remove(pos);
        cap_forced = true;
    }
    if cap_forced {
        biases = greedy.biases(gram);
    }

    let mut out = bundle.clone();
    out.dict.retain_indices(&greedy.alive);
    for (w, a) in out.all_weights_mut().zip(&greedy.coeffs) {
        *w = a.clone();
    }
    let mut pruned_gram = gram.clone();
    pruned_gram.retain_indices(&greedy.alive);
    let final_order = greedy.alive.len();
    Ok(PruneOutcome {
        bundle: out,
        gram: pruned_gram,
        inverse: greedy.inverse,
        report: PruneReport { removed_knots: greedy.removed, per_policy_bias: biases, final_order, cap_forced },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{Dictionary, KernelSpec};

    fn line_gram(xs: &[f64]) -> (KernelSpec, Dictionary, GramMatrix) {
        let spec = KernelSpec::new(vec![1.0], vec![], 1).unwrap();
        let dict = Dictionary::from_flat(1, xs.to_vec()).unwrap();
        let gram = GramMatrix::compute(&spec, &dict);
        (spec, dict, gram)
    }

    #[test]
    fn two_knot_removal_error() {
        // knots 0 and 2 with unit length scale: κ = e^{-2}
        let (_, _, gram) = line_gram(&[0.0, 2.0]);
        let w = Matrix::from_vec(2, 1, vec![1.0, 0.0]);
        let (err, best) = removal_error(0, &w, &gram).unwrap();
        let e2 = (-2.0f64).exp();
        assert!((best[(0, 0)] - e2).abs() < 1e-12);
        assert!((err - (1.0 - (-4.0f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn single_knot_removal_is_full_norm() {
        let (_, _, gram) = line_gram(&[0.3]);
        let w = Matrix::from_vec(1, 1, vec![-1.7]);
        let (err, best) = removal_error(0, &w, &gram).unwrap();
        assert_eq!(best.rows(), 0);
        assert!((err - 1.7 * 1.7).abs() < 1e-12);
    }

    #[test]
    fn unused_knot_costs_nothing() {
        let (_, _, gram) = line_gram(&[0.0, 1.0, 2.5]);
        let w = Matrix::from_vec(3, 1, vec![1.0, 0.0, -0.5]);
        let (err, _) = removal_error(1, &w, &gram).unwrap();
        assert!(err <= 1e-10);
    }

    #[test]
    fn inverse_updates_match_fresh() {
        let spec = KernelSpec::new(vec![0.5], vec![], 1).unwrap();
        let mut dict = Dictionary::from_flat(1, vec![0.0, 0.7]).unwrap();
        let mut gram = GramMatrix::compute(&spec, &dict);
        let mut inv = GramInverse::compute(&gram).unwrap();
        for x in [1.9, -0.4, 3.0] {
            dict.push(&[x]).unwrap();
            gram.push_last(&spec, &dict);
            inv.push_last(&gram).unwrap();
        }
        inv.remove(1);
        gram.retain_indices(&[0, 2, 3, 4]);
        let fresh = GramInverse::compute(&gram).unwrap();
        assert!(inv.matrix().sub(fresh.matrix()).max_abs() < 1e-10);
    }

    #[test]
    fn duplicate_knot_is_pruned() {
        let (spec, dict, gram) = line_gram(&[0.0, 1e-6]);
        let w = Matrix::from_vec(2, 1, vec![0.8, 0.0]);
        let bundle = PolicyBundle::from_parts(spec, dict, vec![w], None, 0.0).unwrap();
        let out = prune(&bundle, 1e-5, 400, &gram).unwrap();
        assert_eq!(out.report.final_order, 1);
        assert!(out.report.max_bias() <= 1e-6);
        assert!(!out.report.cap_forced);
    }

    #[test]
    fn cap_forces_removals() {
        let (spec, dict, gram) = line_gram(&[0.0, 3.0, 6.0]);
        let w = Matrix::from_vec(3, 1, vec![1.0, 2.0, -1.0]);
        let bundle = PolicyBundle::from_parts(spec, dict, vec![w], None, 0.0).unwrap();
        let out = prune(&bundle, 0.01, 2, &gram).unwrap();
        assert_eq!(out.report.final_order, 2);
        assert!(out.report.cap_forced);
        // the smallest weight is dropped first
        assert_eq!(out.report.removed_knots, vec![0]);
        assert!(out.report.max_bias() > 0.01);
    }

    #[test]
    fn zero_budget_keeps_used_knots() {
        let (spec, dict, gram) = line_gram(&[0.0, 1.5, 3.0]);
        let w = Matrix::from_vec(3, 1, vec![1.0, 0.0, 2.0]);
        let bundle = PolicyBundle::from_parts(spec, dict, vec![w], None, 0.0).unwrap();
        let out = prune(&bundle, 0.0, 400, &gram).unwrap();
        assert_eq!(out.report.removed_knots, vec![1]);
        assert_eq!(out.report.max_bias(), 0.0);
    }
}
