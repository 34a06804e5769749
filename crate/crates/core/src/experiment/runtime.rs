//! Wall-clock model of the photonic classifier against measured classical
//! run times.

use std::io::Write;
use std::time::Instant;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::gbs::{takagi, LossBudget, OpticalParams};
use crate::graph::Graph;
use crate::oracle::LabeledPair;
use crate::pipeline::{
    quantum_classify, randomized_classical_classify, LinearSvmModel, QuantumConfig,
};
use crate::rng;
use crate::{Error, Result};

/// Device and host parameters entering the quantum run time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HardwareProfile {
    pub rep_rate_hz: f64,
    pub squeeze_db: f64,
    pub budget: LossBudget,
    pub optical: OpticalParams,
    /// One linear-SVM prediction.
    pub t_svm_s: f64,
    /// One Takagi decomposition of the adjacency matrix.
    pub t_takagi_s: f64,
}

impl Default for HardwareProfile {
    fn default() -> Self {
        HardwareProfile {
            rep_rate_hz: 1e7,
            squeeze_db: 5.0,
            budget: LossBudget::default(),
            optical: OpticalParams::default(),
            t_svm_s: 0.0,
            t_takagi_s: 0.0,
        }
    }
}

impl HardwareProfile {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rep_rate_hz", self.rep_rate_hz),
            ("squeeze_db", self.squeeze_db),
            ("refractive_index", self.optical.refractive_index),
            ("beamsplitter_length_m", self.optical.beamsplitter_length_m),
            ("speed_of_light", self.optical.speed_of_light),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::arg(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [("t_svm_s", self.t_svm_s), ("t_takagi_s", self.t_takagi_s)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::arg(format!("{name} must be non-negative, got {v}")));
            }
        }
        self.budget.validate()
    }

    /// Pulse period `1/R`.
    pub fn t_r(&self) -> f64 {
        1.0 / self.rep_rate_hz
    }

    /// Fills `t_svm_s` and `t_takagi_s` by timing this host at `n_modes`.
    pub fn with_measured_overheads(mut self, n_modes: usize) -> Result<Self> {
        self.t_takagi_s = measure_takagi_seconds(n_modes, 200)?;
        self.t_svm_s = measure_svm_seconds(2 * n_modes, 10_000);
        Ok(self)
    }
}

/// `t_AT + (n − 1)·t_r + t_o + t_SVM` seconds.
pub fn quantum_wallclock(profile: &HardwareProfile, n_modes: usize, n_trials: usize) -> f64 {
    profile.t_takagi_s
        + n_trials.saturating_sub(1) as f64 * profile.t_r()
        + profile.optical.latency(n_modes)
        + profile.t_svm_s
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Median over `reps` runs of one Takagi decomposition of a random graph.
pub fn measure_takagi_seconds(n_modes: usize, reps: usize) -> Result<f64> {
    let mut r = rng::seeded(n_modes as u64);
    let a = Graph::random(n_modes, 0.5, &mut r)?.adjacency_matrix();
    let mut times = Vec::with_capacity(reps.max(1));
    for _ in 0..reps.max(1) {
        let t = Instant::now();
        std::hint::black_box(takagi(std::hint::black_box(&a))?);
        times.push(t.elapsed().as_secs_f64());
    }
    Ok(median(times))
}

/// Mean time of one linear decision over a `dim`-vector.
pub fn measure_svm_seconds(dim: usize, reps: usize) -> f64 {
    let w: Vec<f64> = (0..dim).map(|i| 0.1 * i as f64).collect();
    let x: Vec<f64> = (0..dim).map(|i| 1.0 - 0.05 * i as f64).collect();
    let reps = reps.max(1);
    let t = Instant::now();
    let mut acc = 0.0;
    for _ in 0..reps {
        acc += std::hint::black_box(&w)
            .iter()
            .zip(std::hint::black_box(&x))
            .map(|(a, b)| a * b)
            .sum::<f64>();
    }
    std::hint::black_box(acc);
    t.elapsed().as_secs_f64() / reps as f64
}

/// Symbolic operation counts of the three run-time models.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingCosts {
    /// `N³ · n_c`
    pub classical: f64,
    /// `N⁴ · 2^{N/2} · n_q`
    pub simulated_gbs: f64,
    /// `N² + n_q`
    pub quantum_gbs: f64,
}

pub fn scaling_model(n: usize, n_c: usize, n_q: usize) -> ScalingCosts {
    let nf = n as f64;
    ScalingCosts {
        classical: nf.powi(3) * n_c as f64,
        simulated_gbs: nf.powi(4) * 2f64.powf(nf / 2.0) * n_q as f64,
        quantum_gbs: nf * nf + n_q as f64,
    }
}

/// Runs `once` for every pair, `runs` times (at least 5); returns the median
/// per-pair seconds. Runs on the calling thread.
fn median_per_pair<F>(pairs: &[LabeledPair], runs: usize, mut once: F) -> Result<f64>
where
    F: FnMut(usize, &LabeledPair) -> Result<()>,
{
    if pairs.is_empty() {
        return Err(Error::InvalidDataset("no pairs to time".into()));
    }
    let mut times = Vec::new();
    for _ in 0..runs.max(5) {
        let t = Instant::now();
        for (i, p) in pairs.iter().enumerate() {
            once(i, p)?;
        }
        times.push(t.elapsed().as_secs_f64() / pairs.len() as f64);
    }
    Ok(median(times))
}

/// Measured seconds per randomized classical classification with
/// `n_trials` trials.
pub fn classical_wallclock(
    pairs: &[LabeledPair],
    model: &LinearSvmModel,
    n_trials: usize,
    seed: u64,
    runs: usize,
) -> Result<f64> {
    let mut r = rng::seeded(seed);
    median_per_pair(pairs, runs, |_, p| {
        std::hint::black_box(randomized_classical_classify(
            &p.parent, &p.child, model, n_trials, &mut r,
        )?);
        Ok(())
    })
}

/// Measured seconds per classification when the sampler itself is simulated
/// on this host.
pub fn simulated_gbs_wallclock(
    pairs: &[LabeledPair],
    model: &LinearSvmModel,
    n_trials: usize,
    config: &QuantumConfig,
    seed: u64,
    runs: usize,
) -> Result<f64> {
    let mut r = rng::seeded(seed);
    median_per_pair(pairs, runs, |_, p| {
        let mut trial_rng = rng::seeded(r.random());
        std::hint::black_box(quantum_classify(
            &p.parent,
            &p.child,
            model,
            n_trials,
            config,
            &mut trial_rng,
        )?);
        Ok(())
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuntimeRow {
    pub n: usize,
    pub n_c: usize,
    pub n_q: usize,
    /// Measured classical time.
    pub t_c_s: f64,
    /// Modeled photonic time.
    pub t_qgbs_s: f64,
    /// Measured time with a simulated sampler.
    pub t_cgbs_s: f64,
    pub speedup: f64,
    pub costs: ScalingCosts,
}

impl RuntimeRow {
    pub fn new(n: usize, n_c: usize, n_q: usize, t_c_s: f64, t_qgbs_s: f64, t_cgbs_s: f64) -> Self {
        RuntimeRow {
            n,
            n_c,
            n_q,
            t_c_s,
            t_qgbs_s,
            t_cgbs_s,
            speedup: t_c_s / t_qgbs_s,
            costs: scaling_model(n, n_c, n_q),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuntimeReport {
    /// Machine on which the classical times were measured.
    pub host: String,
    pub profile: HardwareProfile,
    pub rows: Vec<RuntimeRow>,
}

pub const RUNTIME_CSV_HEADER: &str =
    "n,n_c,n_q,t_c_s,t_qgbs_s,t_cgbs_s,speedup,cost_classical,cost_simulated_gbs,cost_quantum_gbs";

/// `os-arch, k threads`
pub fn host_label() -> String {
    let threads = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    format!(
        "{}-{}, {threads} threads",
        std::env::consts::OS,
        std::env::consts::ARCH
    )
}

impl RuntimeReport {
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{RUNTIME_CSV_HEADER}")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                r.n,
                r.n_c,
                r.n_q,
                r.t_c_s,
                r.t_qgbs_s,
                r.t_cgbs_s,
                r.speedup,
                r.costs.classical,
                r.costs.simulated_gbs,
                r.costs.quantum_gbs
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gbs::optical_latency;

    fn bare() -> HardwareProfile {
        HardwareProfile::default()
    }

    #[test]
    fn repetition_dominates_long_runs() {
        let t = quantum_wallclock(&bare(), 12, 101);
        assert!((t - 1.0e-5).abs() < 1e-9, "{t}");
        let fast = HardwareProfile {
            rep_rate_hz: 2e7,
            ..bare()
        };
        let ratio = quantum_wallclock(&bare(), 12, 10_001) / quantum_wallclock(&fast, 12, 10_001);
        assert!((ratio - 2.0).abs() < 1e-6);
    }

    #[test]
    fn single_trial_has_no_repetition_wait() {
        let p = HardwareProfile {
            t_svm_s: 2e-8,
            t_takagi_s: 3e-6,
            ..bare()
        };
        let t = quantum_wallclock(&p, 8, 1);
        assert_eq!(t, 3e-6 + optical_latency(8) + 2e-8);
    }

    #[test]
    fn scaling_ratio_at_twelve() {
        let c = scaling_model(12, 5, 5);
        assert!((c.simulated_gbs / c.classical - 768.0).abs() < 1e-9);
        assert_eq!(c.quantum_gbs, 149.0);
    }

    #[test]
    fn profile_checks() {
        assert!(bare().validate().is_ok());
        assert!(HardwareProfile {
            rep_rate_hz: 0.0,
            ..bare()
        }
        .validate()
        .is_err());
        assert!(HardwareProfile {
            t_svm_s: -1.0,
            ..bare()
        }
        .validate()
        .is_err());
        let m = bare().with_measured_overheads(6).unwrap();
        assert!(m.t_takagi_s > 0.0 && m.t_svm_s > 0.0);
    }

    #[test]
    fn speedup_is_the_quotient() {
        let r = RuntimeRow::new(8, 11, 3, 1.7e-3, 2.3e-6, 4e-4);
        assert_eq!(r.speedup, 1.7e-3 / 2.3e-6);
        let report = RuntimeReport {
            host: host_label(),
            profile: bare(),
            rows: vec![r],
        };
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(RUNTIME_CSV_HEADER));
        let cells: Vec<f64> = lines
            .next()
            .unwrap()
            .split(',')
            .map(|c| c.parse().unwrap())
            .collect();
        assert_eq!(cells[6], cells[3] / cells[4]);
    }
}
