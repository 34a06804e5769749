//! Exact census of connected induced subgraphs on 3, 4 and 5 vertices.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::graph::{canonical_form, CanonicalForm, Graph};

pub const GRAPHLET_SIZES: [usize; 3] = [3, 4, 5];
pub const GRAPHLET_COUNT: usize = 29;

/// The 29 connected graphs on 3 to 5 vertices, ordered by size, then edge
/// count, then canonical code.
pub struct GraphletCatalog {
    members: Vec<Graph>,
    /// `by_size[k - 3][labeled adjacency bits]` is the member index of that
    /// labeled k-vertex graph, or `u8::MAX` when it is disconnected.
    by_size: [Vec<u8>; 3],
}

impl GraphletCatalog {
    pub fn get() -> &'static GraphletCatalog {
        static CATALOG: OnceLock<GraphletCatalog> = OnceLock::new();
        CATALOG.get_or_init(GraphletCatalog::build)
    }

    fn build() -> Self {
        let mut members: Vec<(usize, usize, CanonicalForm, Graph)> = Vec::new();
        let mut labeled: Vec<Vec<Option<CanonicalForm>>> = Vec::new();
        for &k in &GRAPHLET_SIZES {
            let pairs = pairs(k);
            let mut table = Vec::with_capacity(1 << pairs.len());
            for bits in 0u32..(1 << pairs.len()) {
                let g = from_bits(k, &pairs, bits);
                if !g.is_connected() {
                    table.push(None);
                    continue;
                }
                let form = canonical_form(&g);
                if !members.iter().any(|m| m.2 == form) {
                    members.push((k, g.edge_count(), form, form.to_graph()));
                }
                table.push(Some(form));
            }
            labeled.push(table);
        }
        members.sort_by_key(|m| (m.0, m.1, m.2));
        let index: HashMap<CanonicalForm, u8> = members
            .iter()
            .enumerate()
            .map(|(i, m)| (m.2, i as u8))
            .collect();
        let by_size = [0, 1, 2].map(|s| {
            labeled[s]
                .iter()
                .map(|f| f.map_or(u8::MAX, |f| index[&f]))
                .collect()
        });
        GraphletCatalog {
            members: members.into_iter().map(|m| m.3).collect(),
            by_size,
        }
    }

    pub fn members(&self) -> &[Graph] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Raw counts `f_{k,m}` of induced copies of each member.
    pub fn census(&self, g: &Graph) -> [u64; GRAPHLET_COUNT] {
        let mut counts = [0u64; GRAPHLET_COUNT];
        let n = g.n();
        for &k in &GRAPHLET_SIZES {
            if k > n {
                break;
            }
            let pairs = pairs(k);
            let table = &self.by_size[k - 3];
            for_each_subset(n, k, &mut |verts| {
                let mut bits = 0u32;
                for (b, &(i, j)) in pairs.iter().enumerate() {
                    if g.has_edge(verts[i], verts[j]) {
                        bits |= 1 << b;
                    }
                }
                let m = table[bits as usize];
                if m != u8::MAX {
                    counts[m as usize] += 1;
                }
            });
        }
        counts
    }
}

fn pairs(k: usize) -> Vec<(usize, usize)> {
    (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .collect()
}

fn from_bits(k: usize, pairs: &[(usize, usize)], bits: u32) -> Graph {
    let edges: Vec<(usize, usize)> = pairs
        .iter()
        .enumerate()
        .filter(|(b, _)| bits >> b & 1 == 1)
        .map(|(_, &e)| e)
        .collect();
    Graph::from_edges(k, &edges).expect("small graphs are valid")
}

fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for v in start..=n - (k - cur.len()) {
            cur.push(v);
            rec(v + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f);
}

/// Graphlet counts divided by their total; the zero vector when `g` has no
/// connected induced subgraph on 3 to 5 vertices.
pub fn graphlet_feature(g: &Graph) -> Vec<f64> {
    let counts = GraphletCatalog::get().census(g);
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return vec![0.0; GRAPHLET_COUNT];
    }
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}

pub fn graphlet_kernel(g1: &Graph, g2: &Graph) -> f64 {
    dot(&graphlet_feature(g1), &graphlet_feature(g2))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
