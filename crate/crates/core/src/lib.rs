//! Multi-task reinforcement learning with kernel-expansion policies.
//!
//! Policies are finite weighted sums of Gaussian kernels living in a
//! reproducing kernel Hilbert space. A bundle of per-task policies is coupled
//! to a central policy through the proximity constraint `‖h_i − g‖ ≤ ε`, which
//! is enforced after every stochastic policy-gradient step by projection
//! ([`projection`]). The shared dictionary is kept small by
//! common-dictionary kernel orthogonal matching pursuit ([`cdkomp`]).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, CSV output,
//! threading and the command-line driver live in the `crosslearn` crate.

#![no_std]

extern crate alloc;

pub mod bundle;
pub mod cdkomp;
pub mod error;
pub mod gradient;
pub mod kernel;
pub mod linalg;
pub mod nav;
pub mod projection;
pub mod rng;
pub mod trainer;

pub use bundle::{merge_dictionaries, PolicyBundle};
pub use error::{Error, Result};
pub use kernel::{Dictionary, GramMatrix, KernelPolicy, KernelSpec, Policy, PolicyView};
pub use linalg::Matrix;
