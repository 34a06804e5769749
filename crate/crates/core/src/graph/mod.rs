//! Simple undirected graphs on at most [`MAX_VERTICES`] vertices.
//!
//! Adjacency is stored as one bitset row per vertex, so a local
//! complementation is a handful of masked XORs.

mod canon;
mod io;
mod lc;
mod spectrum;

pub use canon::{are_isomorphic, canonical_form, canonical_labeling, CanonicalForm};
pub use io::GraphJson;
pub use lc::{
    are_lc_equivalent, are_lc_equivalent_with_budget, cut_rank, cut_rank_profile, lc_orbit,
    CutRankProfile, DEFAULT_ORBIT_BUDGET,
};
pub use spectrum::{laplacian_spectrum, Spectrum};

use std::fmt;

use rand::Rng;

use crate::{Error, Result};

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: u8,
    rows: [u16; MAX_VERTICES],
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::arg(format!(
                "graphs are limited to {MAX_VERTICES} vertices, got {n}"
            )));
        }
        Ok(Graph {
            n: n as u8,
            rows: [0; MAX_VERTICES],
        })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Self::empty(n)?;
        let full = low_mask(n);
        for v in 0..n {
            g.rows[v] = full & !(1 << v);
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        if n >= 3 {
            edges.push((n - 1, 0));
        }
        Self::from_edges(n, &edges)
    }

    /// Star with centre 0 and `n - 1` leaves.
    pub fn star(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
        Self::from_edges(n, &edges)
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::arg(format!("edge {u}-{v} out of range for n={n}")));
            }
            if u == v {
                return Err(Error::arg(format!("self-loop at vertex {u}")));
            }
            if g.has_edge(u, v) {
                return Err(Error::arg(format!("duplicate edge {u}-{v}")));
            }
            g.toggle_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from bitset rows. Rows must be symmetric with an empty
    /// diagonal.
    pub fn from_rows(rows: &[u16]) -> Result<Self> {
        let n = rows.len();
        let mut g = Self::empty(n)?;
        let full = low_mask(n);
        for (v, &r) in rows.iter().enumerate() {
            if r & !full != 0 || r & (1 << v) != 0 {
                return Err(Error::arg(format!("row {v} has invalid bits")));
            }
            g.rows[v] = r;
        }
        for u in 0..n {
            for v in 0..n {
                if g.has_edge(u, v) != g.has_edge(v, u) {
                    return Err(Error::arg("adjacency rows are not symmetric"));
                }
            }
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Neighbourhood of `v` as a bitmask.
    #[inline]
    pub fn neighbors(&self, v: usize) -> u16 {
        self.rows[v]
    }

    #[inline]
    pub fn rows(&self) -> &[u16] {
        &self.rows[..self.n()]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.rows()
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            let upper = self.rows[u] & !low_mask(u + 1);
            bits(upper).map(move |v| (u, v))
        })
    }

    pub(crate) fn toggle_edge(&mut self, u: usize, v: usize) {
        self.rows[u] ^= 1 << v;
        self.rows[v] ^= 1 << u;
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            Err(Error::arg(format!(
                "vertex {v} out of range for n={}",
                self.n
            )))
        } else {
            Ok(())
        }
    }

    /// Local complementation at `v`: toggles every edge between two distinct
    /// neighbours of `v`.
    pub fn local_complement(&self, v: usize) -> Result<Self> {
        self.check_vertex(v)?;
        Ok(self.local_complement_unchecked(v))
    }

    #[inline]
    pub(crate) fn local_complement_unchecked(&self, v: usize) -> Self {
        let mut g = *self;
        let nv = self.rows[v];
        let mut rest = nv;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            g.rows[u] ^= nv & !(1 << u);
        }
        g
    }

    /// Pivot on the edge `uv`, i.e. `τ_u τ_v τ_u`.
    pub(crate) fn pivot_unchecked(&self, u: usize, v: usize) -> Self {
        self.local_complement_unchecked(u)
            .local_complement_unchecked(v)
            .local_complement_unchecked(u)
    }

    /// Removes `v` and its incident edges. Remaining vertices keep their
    /// relative order.
    pub fn delete_vertex(&self, v: usize) -> Result<Self> {
        self.check_vertex(v)?;
        Ok(self.delete_vertex_unchecked(v))
    }

    pub(crate) fn delete_vertex_unchecked(&self, v: usize) -> Self {
        let n = self.n();
        let mut g = Graph {
            n: (n - 1) as u8,
            rows: [0; MAX_VERTICES],
        };
        let mut k = 0;
        for u in 0..n {
            if u == v {
                continue;
            }
            g.rows[k] = squeeze_bit(self.rows[u], v);
            k += 1;
        }
        g
    }

    /// Subgraph induced by the vertices in `mask`, relabeled in ascending
    /// order.
    pub fn induced(&self, mask: u16) -> Self {
        let mask = mask & low_mask(self.n());
        let verts: Vec<usize> = bits(mask).collect();
        let mut g = Graph {
            n: verts.len() as u8,
            rows: [0; MAX_VERTICES],
        };
        for (i, &u) in verts.iter().enumerate() {
            g.rows[i] = compress(self.rows[u] & mask, mask);
        }
        g
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        if perm.len() != n {
            return Err(Error::arg("permutation length does not match vertex count"));
        }
        let mut seen = 0u32;
        for &p in perm {
            if p >= n || seen >> p & 1 == 1 {
                return Err(Error::arg("not a permutation"));
            }
            seen |= 1 << p;
        }
        let mut g = Graph {
            n: self.n,
            rows: [0; MAX_VERTICES],
        };
        for (u, v) in self.edges() {
            g.toggle_edge(perm[u], perm[v]);
        }
        Ok(g)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n <= 1 {
            return true;
        }
        self.component_of(0) == low_mask(n)
    }

    /// Vertex mask of the connected component containing `v`.
    pub fn component_of(&self, v: usize) -> u16 {
        let mut seen = 1u16 << v;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for u in bits(frontier) {
                next |= self.rows[u];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen
    }

    /// Vertex masks of all connected components, ordered by smallest member.
    pub fn components(&self) -> Vec<u16> {
        let mut left = low_mask(self.n());
        let mut out = Vec::new();
        while left != 0 {
            let c = self.component_of(left.trailing_zeros() as usize);
            out.push(c);
            left &= !c;
        }
        out
    }

    /// Dense 0/1 adjacency matrix.
    pub fn adjacency_matrix(&self) -> nalgebra::DMatrix<f64> {
        let n = self.n();
        nalgebra::DMatrix::from_fn(n, n, |i, j| if self.has_edge(i, j) { 1.0 } else { 0.0 })
    }

    /// Erdős–Rényi sample: each of the `n(n-1)/2` pairs is an edge
    /// independently with probability `p`.
    pub fn random<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::arg(format!("edge probability {p} outside [0, 1]")));
        }
        let mut g = Self::empty(n)?;
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    g.toggle_edge(u, v);
                }
            }
        }
        Ok(g)
    }

    /// Applies `length` local complementations at uniformly random vertices.
    pub fn random_lc_walk<R: Rng + ?Sized>(&self, length: usize, rng: &mut R) -> Self {
        let n = self.n();
        let mut g = *self;
        if n == 0 {
            return g;
        }
        for _ in 0..length {
            g = g.local_complement_unchecked(rng.random_range(0..n));
        }
        g
    }

    /// Uniformly random relabeling.
    pub fn random_relabel<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..self.n()).collect();
        perm.shuffle(rng);
        self.permute(&perm)
            .expect("shuffled identity is a permutation")
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({self})")
    }
}

/// Text form `n;u-v,u-v,...`.
impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.n)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{u}-{v}")?;
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn low_mask(n: usize) -> u16 {
    if n >= 16 {
        u16::MAX
    } else {
        (1u16 << n) - 1
    }
}

/// Iterates over the set bit positions of `mask`, lowest first.
#[inline]
pub(crate) fn bits(mut mask: u16) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

/// Drops bit `v` and shifts the higher bits down by one.
#[inline]
fn squeeze_bit(row: u16, v: usize) -> u16 {
    let low = row & low_mask(v);
    let high = if v + 1 >= 16 {
        0
    } else {
        (row >> (v + 1)) << v
    };
    low | high
}

/// Packs the bits of `row` selected by `mask` into the low bits.
#[inline]
fn compress(row: u16, mask: u16) -> u16 {
    let mut out = 0;
    for (i, b) in bits(mask).enumerate() {
        out |= (row >> b & 1) << i;
    }
    out
}
