//! Vertex-minor classification laboratory.
//!
//! The crate bundles everything needed to compare a classical spectral
//! classifier against a simulated Gaussian boson sampler (GBS) on the
//! vertex-minor decision problem for small graphs:
//!
//! * [`graph`]: bitset graphs, local complementation, canonical forms,
//!   Laplacian spectra and LC-equivalence.
//! * [`oracle`]: the exact brute-force vertex-minor oracle and labeled
//!   dataset generation.
//! * [`gbs`]: graph encoding, Takagi decomposition, hafnians, exact pattern
//!   probabilities, chain-rule sampling, loss and interferometer compilation.
//! * [`baselines`]: graphlet, shortest-path and Weisfeiler-Lehman kernels with
//!   a dual SVM over precomputed Gram matrices.
//! * [`pipeline`]: feature vectors, the linear SVM, repeated-trial calculus and
//!   the two end-to-end classifiers.
//! * [`experiment`]: evaluation sweeps and the runtime model.

pub mod baselines;
pub mod error;
pub mod experiment;
pub mod gbs;
pub mod graph;
pub mod oracle;
pub mod pipeline;
pub mod rng;

pub use error::{Error, Result};
pub use gbs::{GaussianState, GbsProgram, LossBudget, PhotonPattern};
pub use graph::{CanonicalForm, Graph, Spectrum};
pub use oracle::{Dataset, LabeledPair};
pub use pipeline::{FeatureVector, Label, LinearSvmModel, TrialPlan};
