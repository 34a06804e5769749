use serde::{Deserialize, Serialize};

use crate::gbs::PhotonPattern;
use crate::graph::{laplacian_spectrum, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureKind {
    Spectral,
    GbsSample,
}

/// Two per-graph segments, each zero-padded at its tail to the larger size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub kind: FeatureKind,
    pub parent_n: usize,
    pub child_n: usize,
}

impl FeatureVector {
    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

fn concat_padded(a: &[f64], b: &[f64]) -> Vec<f64> {
    let width = a.len().max(b.len());
    let mut out = vec![0.0; 2 * width];
    out[..a.len()].copy_from_slice(a);
    out[width..width + b.len()].copy_from_slice(b);
    out
}

/// Ascending Laplacian spectra of both graphs.
pub fn spectral_feature(g1: &Graph, g2: &Graph) -> FeatureVector {
    spectral_feature_from(
        &laplacian_spectrum(g1).values,
        &laplacian_spectrum(g2).values,
    )
}

pub(crate) fn spectral_feature_from(s1: &[f64], s2: &[f64]) -> FeatureVector {
    FeatureVector {
        values: concat_padded(s1, s2),
        kind: FeatureKind::Spectral,
        parent_n: s1.len(),
        child_n: s2.len(),
    }
}

/// Photon counts of one sample from each graph.
pub fn gbs_feature(s1: &PhotonPattern, s2: &PhotonPattern) -> FeatureVector {
    let a: Vec<f64> = s1.counts.iter().map(|&c| c as f64).collect();
    let b: Vec<f64> = s2.counts.iter().map(|&c| c as f64).collect();
    FeatureVector {
        values: concat_padded(&a, &b),
        kind: FeatureKind::GbsSample,
        parent_n: a.len(),
        child_n: b.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9)
    }

    #[test]
    fn triangle_and_edge() {
        let f = spectral_feature(&Graph::complete(3).unwrap(), &Graph::complete(2).unwrap());
        assert!(close(&f.values, &[0.0, 3.0, 3.0, 0.0, 2.0, 0.0]));
        assert_eq!((f.parent_n, f.child_n), (3, 2));
    }

    #[test]
    fn equal_sizes_need_no_padding() {
        let f = spectral_feature(&Graph::path(4).unwrap(), &Graph::cycle(4).unwrap());
        assert_eq!(f.dim(), 8);
    }

    #[test]
    fn spectral_feature_ignores_labels() {
        let mut r = crate::rng::seeded(1);
        let a = Graph::random(8, 0.5, &mut r).unwrap();
        let b = Graph::random(6, 0.5, &mut r).unwrap();
        let f = spectral_feature(&a, &b);
        let g = spectral_feature(&a.random_relabel(&mut r), &b.random_relabel(&mut r));
        assert!(close(&f.values, &g.values));
    }

    #[test]
    fn sample_concatenation() {
        let f = gbs_feature(&vec![1, 0, 2].into(), &vec![0, 1].into());
        assert_eq!(f.values, vec![1.0, 0.0, 2.0, 0.0, 1.0, 0.0]);
        let z = gbs_feature(&PhotonPattern::zeros(4), &PhotonPattern::zeros(4));
        assert_eq!(z.values, vec![0.0; 8]);
        let w = gbs_feature(&PhotonPattern::zeros(2), &PhotonPattern::zeros(5));
        assert_eq!(w.dim(), 10);
    }
}
