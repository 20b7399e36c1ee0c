//! Task policies plus an optional central policy over one shared dictionary.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::kernel::{Dictionary, GramMatrix, KernelPolicy, KernelSpec, PolicyView};
use crate::linalg::Matrix;

/// `N` task policies and (in coupled modes) a central policy `g`, all
/// expanded over the same dictionary. Weight matrices are `M × p`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyBundle {
    pub spec: KernelSpec,
    pub dict: Dictionary,
    pub tasks: Vec<Matrix>,
    pub central: Option<Matrix>,
    pub epsilon: f64,
}

impl PolicyBundle {
    /// All-zero bundle with an empty dictionary.
    pub fn zero(spec: KernelSpec, n_tasks: usize, with_central: bool, epsilon: f64) -> Self {
        let p = spec.action_dim();
        let dict = Dictionary::new(spec.state_dim());
        let tasks = (0..n_tasks).map(|_| Matrix::zeros(0, p)).collect();
        let central = with_central.then(|| Matrix::zeros(0, p));
        Self { spec, dict, tasks, central, epsilon }
    }

    pub fn from_parts(
        spec: KernelSpec,
        dict: Dictionary,
        tasks: Vec<Matrix>,
        central: Option<Matrix>,
        epsilon: f64,
    ) -> Result<Self> {
        if dict.dim() != spec.state_dim() {
            return Err(Error::DimensionMismatch { expected: spec.state_dim(), got: dict.dim() });
        }
        if !(epsilon >= 0.0) {
            return Err(Error::InvalidArgument("epsilon must be nonnegative".into()));
        }
        for w in tasks.iter().chain(central.iter()) {
            if w.rows() != dict.len() {
                return Err(Error::DimensionMismatch { expected: dict.len(), got: w.rows() });
            }
            if w.cols() != spec.action_dim() {
                return Err(Error::DimensionMismatch { expected: spec.action_dim(), got: w.cols() });
            }
        }
        Ok(Self { spec, dict, tasks, central, epsilon })
    }

    pub fn n_tasks(&self) -> usize {
        self.tasks.len()
    }

    /// Dictionary size (model order).
    pub fn order(&self) -> usize {
        self.dict.len()
    }

    pub fn task_view(&self, i: usize) -> PolicyView<'_> {
        PolicyView { spec: &self.spec, dict: &self.dict, weights: &self.tasks[i] }
    }

    pub fn central_view(&self) -> Option<PolicyView<'_>> {
        self.central.as_ref().map(|w| PolicyView { spec: &self.spec, dict: &self.dict, weights: w })
    }

    pub fn task_policy(&self, i: usize) -> KernelPolicy {
        KernelPolicy { spec: self.spec.clone(), dict: self.dict.clone(), weights: self.tasks[i].clone() }
    }

    pub fn central_policy(&self) -> Option<KernelPolicy> {
        self.central.as_ref().map(|w| KernelPolicy {
            spec: self.spec.clone(),
            dict: self.dict.clone(),
            weights: w.clone(),
        })
    }

    /// Task weights followed by the central weights, if any.
    pub fn all_weights(&self) -> impl Iterator<Item = &Matrix> {
        self.tasks.iter().chain(self.central.iter())
    }

    pub fn all_weights_mut(&mut self) -> impl Iterator<Item = &mut Matrix> {
        self.tasks.iter_mut().chain(self.central.iter_mut())
    }

    pub fn is_finite(&self) -> bool {
        self.all_weights().all(Matrix::is_finite)
    }

    /// Inserts `knot` into the shared dictionary, padding every weight matrix
    /// with a zero row. A knot within the dedup tolerance of a stored one is
    /// not stored again. Returns the knot's index and whether it was appended.
    pub fn insert_knot(&mut self, knot: &[f64]) -> Result<(usize, bool)> {
        if knot.len() != self.spec.state_dim() {
            return Err(Error::DimensionMismatch { expected: self.spec.state_dim(), got: knot.len() });
        }
        if let Some(i) = self.dict.find(knot) {
            return Ok((i, false));
        }
        let idx = self.dict.push(knot)?;
        for w in self.all_weights_mut() {
            w.push_zero_row();
        }
        Ok((idx, true))
    }

    pub fn retain_indices(&mut self, keep: &[usize]) {
        self.dict.retain_indices(keep);
        for w in self.all_weights_mut() {
            *w = w.select_rows(keep);
        }
    }

    /// `‖h_i − g‖` for every task, or `None` without a central policy.
    pub fn distances_to_center(&self, gram: &GramMatrix) -> Option<Vec<f64>> {
        let c = self.central.as_ref()?;
        Some(self.tasks.iter().map(|a| gram.distance(a, c)).collect())
    }
}

/// Pads `bundle` with the knots each policy contributes. Every policy gets a
/// zero weight row for every new knot, so evaluations are unchanged; the
/// returned index lists give each contributed knot's position in the merged
/// dictionary. Duplicate knots (within the dedup tolerance) are stored once.
pub fn merge_dictionaries(
    bundle: &PolicyBundle,
    new_knots: &[Vec<Vec<f64>>],
) -> Result<(PolicyBundle, Vec<Vec<usize>>)> {
    let mut merged = bundle.clone();
    let mut positions = Vec::with_capacity(new_knots.len());
    for knots in new_knots {
        let mut idx = Vec::with_capacity(knots.len());
        for k in knots {
            idx.push(merged.insert_knot(k)?.0);
        }
        positions.push(idx);
    }
    Ok((merged, positions))
}
