//! Weisfeiler–Lehman subtree kernel for unlabeled graphs.

use std::collections::HashMap;

use crate::graph::Graph;

pub const DEFAULT_WL_ITERATIONS: usize = 3;

/// Label histograms of one graph, one sparse map per round `0..=h`.
#[derive(Clone, Debug, PartialEq)]
pub struct WlHistograms {
    pub rounds: Vec<HashMap<u32, u32>>,
}

impl WlHistograms {
    pub fn dot(&self, other: &WlHistograms) -> f64 {
        self.rounds
            .iter()
            .zip(&other.rounds)
            .map(|(a, b)| {
                let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
                small
                    .iter()
                    .map(|(k, &x)| x as f64 * large.get(k).copied().unwrap_or(0) as f64)
                    .sum::<f64>()
            })
            .sum()
    }
}

/// Relabels all graphs jointly through one dictionary per round, so equal
/// codes mean equal rooted subtree patterns across the whole collection.
pub fn wl_histograms(graphs: &[Graph], h: usize) -> Vec<WlHistograms> {
    let mut labels: Vec<Vec<u32>> = graphs.iter().map(|g| vec![0; g.n()]).collect();
    let mut out: Vec<WlHistograms> = labels
        .iter()
        .map(|l| WlHistograms {
            rounds: vec![histogram(l)],
        })
        .collect();
    for _ in 0..h {
        let mut dict: HashMap<(u32, Vec<u32>), u32> = HashMap::new();
        for (g, l) in graphs.iter().zip(labels.iter_mut()) {
            let next: Vec<u32> = (0..g.n())
                .map(|v| {
                    let mut neigh: Vec<u32> = (0..g.n())
                        .filter(|&u| g.has_edge(u, v))
                        .map(|u| l[u])
                        .collect();
                    neigh.sort_unstable();
                    let fresh = dict.len() as u32;
                    *dict.entry((l[v], neigh)).or_insert(fresh)
                })
                .collect();
            *l = next;
        }
        for (hist, l) in out.iter_mut().zip(&labels) {
            hist.rounds.push(histogram(l));
        }
    }
    out
}

fn histogram(labels: &[u32]) -> HashMap<u32, u32> {
    let mut m = HashMap::new();
    for &l in labels {
        *m.entry(l).or_insert(0) += 1;
    }
    m
}

pub fn wl_kernel(g1: &Graph, g2: &Graph, h: usize) -> f64 {
    let hs = wl_histograms(&[*g1, *g2], h);
    hs[0].dot(&hs[1])
}
