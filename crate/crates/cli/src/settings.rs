//! Flags shared by every subcommand. A JSON config file uses the same
//! kebab-case keys; flags given on the command line win.

use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use vmgbs::baselines::PairRepresentation;
use vmgbs::experiment::HardwareProfile;
use vmgbs::gbs::LossBudget;
use vmgbs::pipeline::QuantumConfig;

use crate::UsageError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Spectral,
    Gbs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairRep {
    Similarity,
    Product,
}

impl From<PairRep> for PairRepresentation {
    fn from(r: PairRep) -> Self {
        match r {
            PairRep::Similarity => PairRepresentation::Similarity,
            PairRep::Product => PairRepresentation::Product,
        }
    }
}

macro_rules! settings {
    ($($(#[$meta:meta])* $name:ident : $ty:ty,)*) => {
        #[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
        #[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
        pub struct Settings {
            /// JSON file with defaults for any of these flags.
            #[arg(long)]
            #[serde(skip)]
            pub config: Option<PathBuf>,
            $($(#[$meta])* #[arg(long)] pub $name: Option<$ty>,)*
        }

        impl Settings {
            /// Fills every unset field from `other`.
            fn or(self, other: Settings) -> Settings {
                Settings { config: self.config, $($name: self.$name.or(other.$name),)* }
            }
        }
    };
}

settings! {
    /// Root seed of every random stream.
    seed: u64,
    /// Parent graph size.
    parent: usize,
    /// Child graph size (default: parent - 1, at least 6).
    child: usize,
    /// Number of vertex-minor pairs.
    pos: usize,
    /// Number of non-vertex-minor pairs.
    neg: usize,
    /// Trials per classification (odd); the cap for sweeps and runtime studies.
    trials: usize,
    /// Target accuracy.
    target: f64,
    /// Maximum squeezing in dB.
    squeeze_db: f64,
    /// Coupling efficiency.
    eta_c: f64,
    /// Detector efficiency.
    eta_d: f64,
    /// On-chip propagation loss.
    loss_db_per_cm: f64,
    /// Total loss in dB; overrides the loss budget when set.
    loss_db: f64,
    /// Squeezed-pulse repetition rate.
    rep_rate_hz: f64,
    /// Photon-number cutoff per mode.
    cutoff: usize,
    /// Output directory.
    out: PathBuf,
    /// Dataset file (JSON lines).
    dataset: PathBuf,
    /// Model file (JSON).
    model: PathBuf,
    /// Feature family of the trained model.
    #[arg(value_enum)]
    kind: ModelKind,
    /// SVM penalty.
    c: f64,
    /// Fraction of a dataset used for training; evaluation uses the rest.
    train_fraction: f64,
    /// Samples drawn per training pair for the sample-based model.
    samples_per_pair: usize,
    /// Held-out pairs evaluated per study.
    eval_pairs: usize,
    /// Squeezing values of the sweep grid.
    #[arg(value_delimiter = ',')]
    squeeze_grid: Vec<f64>,
    /// Total-loss values of the sweep grid.
    #[arg(value_delimiter = ',')]
    loss_grid: Vec<f64>,
    /// Parent sizes of the runtime or baseline study.
    #[arg(value_delimiter = ',')]
    sizes: Vec<usize>,
    /// Odd trial counts at which to report accuracy.
    #[arg(value_delimiter = ',')]
    curve: Vec<usize>,
    /// Number of consecutive seeds in the baseline study.
    repeats: u64,
    /// How kernel baselines represent a pair.
    #[arg(value_enum)]
    pair_kernel: PairRep,
    /// Weisfeiler-Lehman iterations.
    wl_iterations: usize,
    /// Configured prediction time instead of a measured one.
    t_svm_s: f64,
    /// Configured Takagi time instead of a measured one.
    t_takagi_s: f64,
    /// Verify only this many pairs, chosen with the seed.
    sample: usize,
}

fn missing(flag: &str) -> anyhow::Error {
    UsageError(format!("--{flag} is required")).into()
}

impl Settings {
    /// Flags merged over the config file, if any.
    pub fn resolve(self) -> anyhow::Result<Settings> {
        match self.config.clone() {
            None => Ok(self),
            Some(path) => {
                let text = std::fs::read_to_string(&path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                let file: Settings = serde_json::from_str(&text)
                    .map_err(|e| UsageError(format!("config {}: {e}", path.display())))?;
                Ok(self.or(file))
            }
        }
    }

    pub fn require_seed(&self) -> anyhow::Result<u64> {
        self.seed.ok_or_else(|| missing("seed"))
    }

    pub fn require_parent(&self) -> anyhow::Result<usize> {
        self.parent.ok_or_else(|| missing("parent"))
    }

    pub fn require_dataset(&self) -> anyhow::Result<&Path> {
        self.dataset.as_deref().ok_or_else(|| missing("dataset"))
    }

    pub fn require_model(&self) -> anyhow::Result<&Path> {
        self.model.as_deref().ok_or_else(|| missing("model"))
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn budget(&self) -> LossBudget {
        let d = LossBudget::default();
        LossBudget {
            eta_c: self.eta_c.unwrap_or(d.eta_c),
            eta_d: self.eta_d.unwrap_or(d.eta_d),
            loss_db_per_cm: self.loss_db_per_cm.unwrap_or(d.loss_db_per_cm),
            ..d
        }
    }

    pub fn quantum(&self) -> anyhow::Result<QuantumConfig> {
        let d = QuantumConfig::default();
        let q = QuantumConfig {
            squeeze_db: self.squeeze_db.unwrap_or(d.squeeze_db),
            budget: self.budget(),
            eta: self.loss_db.map(|l| 10f64.powf(-l / 10.0)),
            cutoff: self.cutoff.unwrap_or(d.cutoff),
            ..d
        };
        q.budget.validate().map_err(|e| UsageError(e.to_string()))?;
        if q.squeeze_db < 0.0 || q.cutoff == 0 {
            return Err(UsageError(
                "--squeeze-db must be non-negative and --cutoff positive".into(),
            )
            .into());
        }
        Ok(q)
    }

    pub fn profile(&self) -> HardwareProfile {
        let d = HardwareProfile::default();
        HardwareProfile {
            rep_rate_hz: self.rep_rate_hz.unwrap_or(d.rep_rate_hz),
            squeeze_db: self.squeeze_db.unwrap_or(d.squeeze_db),
            budget: self.budget(),
            t_svm_s: self.t_svm_s.unwrap_or(0.0),
            t_takagi_s: self.t_takagi_s.unwrap_or(0.0),
            ..d
        }
    }

    /// Odd trial count, defaulting to `default`.
    pub fn odd_trials(&self, default: usize) -> anyhow::Result<usize> {
        let n = self.trials.unwrap_or(default);
        if n.is_multiple_of(2) {
            return Err(UsageError(format!("--trials must be odd, got {n}")).into());
        }
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let flags = Settings {
            seed: Some(3),
            ..Default::default()
        };
        let file: Settings =
            serde_json::from_str(r#"{"seed": 9, "parent": 7, "squeeze-grid": [1.0, 2.0]}"#)
                .unwrap();
        let s = flags.or(file);
        assert_eq!((s.seed, s.parent), (Some(3), Some(7)));
        assert_eq!(s.squeeze_grid, Some(vec![1.0, 2.0]));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<Settings>(r#"{"sead": 1}"#).is_err());
    }

    #[test]
    fn loss_override() {
        let s = Settings {
            loss_db: Some(10.0),
            ..Default::default()
        };
        assert!((s.quantum().unwrap().eta(6) - 0.1).abs() < 1e-12);
        assert!(Settings {
            eta_c: Some(1.5),
            ..Default::default()
        }
        .quantum()
        .is_err());
    }
}
