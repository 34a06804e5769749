//! Classical simulation of a Gaussian boson sampler.
//!
//! Covariances use the doubled `2N×2N` convention in which the vacuum is
//! `I/2` and `Q = sigma + I/2`.

mod clements;
mod encoding;
mod hafnian;
mod loss;
mod probability;
mod program;
mod sampler;
mod state;
mod takagi;
mod timing;

pub use clements::{compile_clements, ClementsMesh, MziSetting};
pub use encoding::{
    db_to_r, encode_graph, r_to_db, scale_constant, squeezing_params, EncodingParams,
};
pub use hafnian::{hafnian, hafnian_exact, hafnian_repeated};
pub use loss::{apply_loss, total_transmissivity, LossBudget, VacuumConvention};
pub use probability::{pattern_probability, PatternDistribution};
pub use program::GbsProgram;
pub use sampler::{
    sample, write_patterns_csv, GbsSampler, Sample, DEFAULT_CUTOFF, TRUNCATION_THRESHOLD,
};
pub use state::{GaussianState, PhotonPattern};
pub use takagi::{max_takagi_value, takagi, Complex64, Takagi};
pub use timing::{optical_latency, OpticalParams};
