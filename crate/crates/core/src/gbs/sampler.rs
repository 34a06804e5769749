//! Exact chain-rule sampling of photon patterns.
//!
//! Mode `k` is drawn from `p(n_1..n_k) / p(n_1..n_{k-1})`, both prefix
//! probabilities coming from the marginal state on the first `k` modes. The
//! conditional is truncated to `[0, cutoff]` and renormalized.

use std::io::Write;

use rand::Rng as _;
use rayon::prelude::*;

use super::probability::PatternDistribution;
use super::state::{GaussianState, PhotonPattern};
use crate::rng::{self, Rng};
use crate::{Error, Result};

pub const DEFAULT_CUTOFF: usize = 5;

/// Conditional mass below which a draw is reported as truncated.
pub const TRUNCATION_THRESHOLD: f64 = 0.999;

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub pattern: PhotonPattern,
    /// Smallest conditional mass captured by `[0, cutoff]` over all modes.
    pub captured_mass: f64,
}

impl Sample {
    pub fn truncated(&self) -> bool {
        self.captured_mass < TRUNCATION_THRESHOLD
    }
}

#[derive(Clone, Debug)]
pub struct GbsSampler {
    cutoff: usize,
    /// Marginal distributions of modes `0..=k`.
    prefixes: Vec<PatternDistribution>,
}

impl GbsSampler {
    pub fn new(state: &GaussianState, cutoff: usize) -> Result<Self> {
        if cutoff == 0 {
            return Err(Error::arg("cutoff must be at least 1"));
        }
        state.validate()?;
        let prefixes = (1..=state.modes())
            .map(|k| {
                let modes: Vec<usize> = (0..k).collect();
                PatternDistribution::new(&state.reduced(&modes)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GbsSampler { cutoff, prefixes })
    }

    pub fn modes(&self) -> usize {
        self.prefixes.len()
    }

    pub fn sample(&self, rng: &mut Rng) -> Sample {
        loop {
            if let Some(s) = self.try_sample(rng) {
                return s;
            }
        }
    }

    /// `None` when rounding led into a prefix whose conditional carries no
    /// mass; such prefixes have zero probability, so redrawing is exact.
    fn try_sample(&self, rng: &mut Rng) -> Option<Sample> {
        let mut counts = Vec::with_capacity(self.modes());
        let mut prev = 1.0;
        let mut captured_mass = 1.0f64;
        for dist in &self.prefixes {
            let u: f64 = rng.random();
            let mut joint = Vec::with_capacity(self.cutoff + 1);
            let mut cum = 0.0;
            let mut chosen = None;
            counts.push(0);
            for c in 0..=self.cutoff {
                *counts.last_mut().expect("pushed") = c;
                let p = dist.probability_unchecked(&counts);
                joint.push(p);
                cum += p / prev;
                if chosen.is_none() && cum > u {
                    chosen = Some(c);
                }
                if chosen.is_some() && cum >= TRUNCATION_THRESHOLD {
                    break;
                }
            }
            captured_mass = captured_mass.min(cum);
            let pick = chosen.unwrap_or_else(|| {
                // u fell in the truncated tail: redraw within the window
                let target = rng.random::<f64>() * cum * prev;
                let mut acc = 0.0;
                joint
                    .iter()
                    .position(|&p| {
                        acc += p;
                        acc > target
                    })
                    .unwrap_or(joint.len() - 1)
            });
            *counts.last_mut().expect("pushed") = pick;
            prev = joint[pick];
            if prev <= 0.0 {
                return None;
            }
        }
        if captured_mass < TRUNCATION_THRESHOLD {
            log::warn!(
                "photon-number cutoff {} captured only {:.5} of the conditional mass",
                self.cutoff,
                captured_mass
            );
        }
        Some(Sample {
            pattern: PhotonPattern::new(counts),
            captured_mass,
        })
    }

    /// `count` samples drawn in parallel; sample `i` uses the stream
    /// `(seed, i)`, so the output does not depend on the thread count.
    pub fn sample_many(&self, count: usize, seed: u64) -> Vec<Sample> {
        (0..count)
            .into_par_iter()
            .map(|i| self.sample(&mut rng::stream(seed, i as u64)))
            .collect()
    }
}

pub fn sample(state: &GaussianState, cutoff: usize, rng: &mut Rng) -> Result<PhotonPattern> {
    Ok(GbsSampler::new(state, cutoff)?.sample(rng).pattern)
}

/// One pattern per row, header `mode_0,...,mode_{N-1}`.
pub fn write_patterns_csv<W: Write>(mut w: W, patterns: &[PhotonPattern]) -> Result<()> {
    let modes = patterns.first().map_or(0, PhotonPattern::modes);
    let header: Vec<String> = (0..modes).map(|i| format!("mode_{i}")).collect();
    writeln!(w, "{}", header.join(","))?;
    for p in patterns {
        let row: Vec<String> = p.counts.iter().map(usize::to_string).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;
    use crate::gbs::encoding::{encode_graph, EncodingParams};
    use crate::gbs::loss::{apply_loss, VacuumConvention};
    use crate::graph::Graph;

    fn encoded(g: &Graph) -> (GaussianState, EncodingParams) {
        let a = g.adjacency_matrix();
        let p = EncodingParams::from_db_or_vacuum(&a, 5.0).unwrap();
        (encode_graph(&a, &p).unwrap(), p)
    }

    #[test]
    fn edgeless_samples_are_empty() {
        let (s, _) = encoded(&Graph::empty(4).unwrap());
        let sampler = GbsSampler::new(&s, 3).unwrap();
        for smp in sampler.sample_many(200, 1) {
            assert_eq!(smp.pattern, PhotonPattern::zeros(4));
            assert!(!smp.truncated());
        }
    }

    #[test]
    fn seeds_fix_the_stream() {
        let (s, _) = encoded(&Graph::cycle(4).unwrap());
        let sampler = GbsSampler::new(&s, 5).unwrap();
        assert_eq!(sampler.sample_many(100, 9), sampler.sample_many(100, 9));
        assert_ne!(sampler.sample_many(100, 9), sampler.sample_many(100, 10));
    }

    #[test]
    fn edge_ratio_matches_probability() {
        let (s, p) = encoded(&Graph::complete(2).unwrap());
        let sampler = GbsSampler::new(&s, 5).unwrap();
        let n = 100_000;
        let samples = sampler.sample_many(n, 2);
        let n00 = samples
            .iter()
            .filter(|x| x.pattern.counts == [0, 0])
            .count() as f64;
        let n11 = samples
            .iter()
            .filter(|x| x.pattern.counts == [1, 1])
            .count() as f64;
        let ratio = n11 / n00;
        let c2 = p.c * p.c;
        // delta-method standard error of a ratio of multinomial counts
        let se = ratio * (1.0 / n11 + 1.0 / n00).sqrt();
        assert!((ratio - c2).abs() < 3.0 * se, "{ratio} vs {c2} (se {se})");
    }

    #[test]
    fn empirical_distribution_is_close_in_total_variation() {
        let (s, _) = encoded(&Graph::path(3).unwrap());
        let lossy = apply_loss(&s, 0.7, VacuumConvention::HalfIdentity).unwrap();
        for state in [s, lossy] {
            let sampler = GbsSampler::new(&state, 5).unwrap();
            let dist = PatternDistribution::new(&state).unwrap();
            let n = 100_000;
            let mut freq: HashMap<Vec<usize>, f64> = HashMap::new();
            for smp in sampler.sample_many(n, 4) {
                *freq.entry(smp.pattern.counts).or_default() += 1.0 / n as f64;
            }
            let mut tv = 0.0;
            for a in 0..=5 {
                for b in 0..=5 {
                    for c in 0..=5 {
                        let p = dist.probability_unchecked(&[a, b, c]);
                        let q = freq.get(&vec![a, b, c]).copied().unwrap_or(0.0);
                        tv += (p - q).abs();
                    }
                }
            }
            assert!(tv / 2.0 < 0.01, "tv {}", tv / 2.0);
        }
    }

    #[test]
    fn heavy_squeezing_reports_truncation() {
        let a = Graph::complete(2).unwrap().adjacency_matrix();
        let p = EncodingParams::from_db(&a, 15.0).unwrap();
        let s = encode_graph(&a, &p).unwrap();
        let sampler = GbsSampler::new(&s, 1).unwrap();
        let out = sampler.sample_many(50, 3);
        assert!(out.iter().any(Sample::truncated));
        assert!(out.iter().all(|x| x.pattern.counts.iter().all(|&c| c <= 1)));
    }

    #[test]
    fn zero_cutoff_is_rejected() {
        let (s, _) = encoded(&Graph::path(2).unwrap());
        assert!(GbsSampler::new(&s, 0).is_err());
    }

    #[test]
    fn csv_stream() {
        let mut buf = Vec::new();
        write_patterns_csv(&mut buf, &[vec![1, 0].into(), vec![2, 2].into()]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "mode_0,mode_1\n1,0\n2,2\n");
    }
}
