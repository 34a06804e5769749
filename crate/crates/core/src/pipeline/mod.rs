//! Feature construction, linear SVM, repeated trials and the two
//! end-to-end classifiers (LC-randomized spectral and sample-based).

mod classify;
mod features;
mod linear_svm;
mod trials;

pub use crate::oracle::Label;
pub use classify::{
    classical_votes, config_digest, gbs_training_set, quantum_classify, quantum_votes,
    randomized_classical_classify, spectral_training_set, train_gbs_model, train_spectral_model,
    QuantumConfig, DEFAULT_SAMPLES_PER_PAIR,
};
pub use features::{gbs_feature, spectral_feature, FeatureKind, FeatureVector};
pub use linear_svm::{
    train_linear_svm, train_linear_svm_traced, LinearSvmModel, TrainingTrace, DEFAULT_C,
    DUAL_TOLERANCE, MAX_EPOCHS,
};
pub use trials::{k_of_delta, majority_vote, p_error, trials_needed, TrialPlan, LN_SQRT_PI};
