//! Classical graph-similarity baselines: graphlet, shortest-path and
//! Weisfeiler–Lehman kernels with a precomputed-kernel SVM.

mod gram;
mod graphlet;
mod shortest_path;
mod svm;
mod wl;

pub use gram::{
    check_psd, graph_gram, pair_gram, pair_similarities, GramMatrix, KernelKind, PairGram,
    PairRepresentation, PSD_TOLERANCE,
};
pub use graphlet::{
    graphlet_feature, graphlet_kernel, GraphletCatalog, GRAPHLET_COUNT, GRAPHLET_SIZES,
};
pub use shortest_path::{distance_matrix, distance_sum, shortest_path_kernel};
pub use svm::{
    predict_kernel, train_kernel_svm, train_kernel_svm_traced, KernelSvmModel, SmoTrace,
    SMO_MAX_ITERATIONS, SMO_TOLERANCE,
};
pub use wl::{wl_histograms, wl_kernel, WlHistograms, DEFAULT_WL_ITERATIONS};
