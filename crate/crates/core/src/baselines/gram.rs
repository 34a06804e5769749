use std::io::{BufRead, Write};

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::graphlet::{dot, graphlet_feature};
use super::shortest_path::distance_sum;
use super::wl::{wl_histograms, WlHistograms};
use crate::graph::Graph;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    Graphlet,
    ShortestPath,
    Wl,
}

impl KernelKind {
    pub const ALL: [KernelKind; 3] = [
        KernelKind::Graphlet,
        KernelKind::ShortestPath,
        KernelKind::Wl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelKind::Graphlet => "graphlet",
            KernelKind::ShortestPath => "shortest-path",
            KernelKind::Wl => "wl",
        }
    }
}

impl std::str::FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        KernelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown kernel {s:?}")))
    }
}

/// Symmetric positive semidefinite kernel matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    pub k: DMatrix<f64>,
    pub kind: KernelKind,
}

/// Eigenvalue tolerance for the PSD check, relative to the largest diagonal
/// entry.
pub const PSD_TOLERANCE: f64 = 1e-8;

impl GramMatrix {
    pub fn new(k: DMatrix<f64>, kind: KernelKind) -> Result<Self> {
        check_psd(&k)?;
        Ok(GramMatrix { k, kind })
    }

    pub fn len(&self) -> usize {
        self.k.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.k.nrows() == 0
    }

    /// CSV cache: a `# kind=...,n=...` header row, then one matrix row per
    /// line.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# kind={},n={}", self.kind.name(), self.len())?;
        for row in self.k.row_iter() {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:e}")).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty Gram file".into()))??;
        let mut kind = None;
        let mut n = None;
        for field in header.trim_start_matches('#').trim().split(',') {
            match field.split_once('=') {
                Some(("kind", v)) => kind = Some(v.parse::<KernelKind>()?),
                Some(("n", v)) => n = v.parse::<usize>().ok(),
                _ => {}
            }
        }
        let (kind, n) = kind
            .zip(n)
            .ok_or_else(|| Error::Parse("Gram header needs kind and n".into()))?;
        let mut data = Vec::with_capacity(n * n);
        for line in lines.take(n) {
            for cell in line?.split(',') {
                data.push(
                    cell.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad Gram entry {cell:?}: {e}")))?,
                );
            }
        }
        if data.len() != n * n {
            return Err(Error::Parse(format!(
                "expected {} Gram entries, got {}",
                n * n,
                data.len()
            )));
        }
        GramMatrix::new(DMatrix::from_row_slice(n, n, &data), kind)
    }
}

/// Symmetric and all eigenvalues at least `−PSD_TOLERANCE · scale`.
pub fn check_psd(k: &DMatrix<f64>) -> Result<()> {
    let n = k.nrows();
    if k.ncols() != n {
        return Err(Error::InvalidKernel("Gram matrix is not square".into()));
    }
    let scale = k.diagonal().amax().max(1e-300);
    for i in 0..n {
        for j in 0..i {
            if (k[(i, j)] - k[(j, i)]).abs() > 1e-12 * scale {
                return Err(Error::InvalidKernel("Gram matrix is not symmetric".into()));
            }
        }
    }
    if n == 0 {
        return Ok(());
    }
    // K + tol·I is positive definite exactly when λ_min(K) > −tol
    let shifted = k + DMatrix::identity(n, n) * (PSD_TOLERANCE * scale);
    if shifted.cholesky().is_none() {
        return Err(Error::InvalidKernel(
            "Gram matrix has an eigenvalue below the PSD tolerance".into(),
        ));
    }
    Ok(())
}

/// Per-graph data from which the graph kernel is a cheap product.
enum Features {
    Vectors(Vec<Vec<f64>>),
    Scalars(Vec<f64>),
    Histograms(Vec<WlHistograms>),
}

impl Features {
    fn compute(kind: KernelKind, graphs: &[Graph], wl_iterations: usize) -> Self {
        match kind {
            KernelKind::Graphlet => {
                Features::Vectors(graphs.par_iter().map(graphlet_feature).collect())
            }
            KernelKind::ShortestPath => {
                Features::Scalars(graphs.par_iter().map(distance_sum).collect())
            }
            KernelKind::Wl => Features::Histograms(wl_histograms(graphs, wl_iterations)),
        }
    }

    fn kernel(&self, i: usize, j: usize) -> f64 {
        match self {
            Features::Vectors(v) => dot(&v[i], &v[j]),
            Features::Scalars(s) => s[i] * s[j],
            Features::Histograms(h) => h[i].dot(&h[j]),
        }
    }
}

/// Graph kernel between every graph of `rows` and every graph of `cols`.
pub fn graph_gram(
    kind: KernelKind,
    rows: &[Graph],
    cols: &[Graph],
    wl_iterations: usize,
) -> DMatrix<f64> {
    let all: Vec<Graph> = rows.iter().chain(cols).copied().collect();
    let f = Features::compute(kind, &all, wl_iterations);
    let r = rows.len();
    let cells: Vec<f64> = (0..r)
        .into_par_iter()
        .flat_map_iter(|i| (0..cols.len()).map(move |j| (i, j)).collect::<Vec<_>>())
        .map(|(i, j)| f.kernel(i, r + j))
        .collect();
    DMatrix::from_row_slice(r, cols.len(), &cells)
}

/// How a `(parent, child)` pair enters the kernel SVM.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairRepresentation {
    /// The pair is the scalar `k(parent, child)`; the pair kernel is the
    /// product of two such scalars.
    #[default]
    Similarity,
    /// Product of the graph kernel on parents and the graph kernel on
    /// children. Products of PSD kernels are PSD.
    Product,
}

impl PairRepresentation {
    pub const ALL: [PairRepresentation; 2] =
        [PairRepresentation::Similarity, PairRepresentation::Product];

    pub fn name(self) -> &'static str {
        match self {
            PairRepresentation::Similarity => "similarity",
            PairRepresentation::Product => "product",
        }
    }
}

impl std::str::FromStr for PairRepresentation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PairRepresentation::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown pair representation {s:?}")))
    }
}

/// Pair kernels, both blocks divided by the mean diagonal of the training
/// block.
#[derive(Clone, Debug)]
pub struct PairGram {
    pub train: GramMatrix,
    /// `test × train` cross kernel.
    pub test: DMatrix<f64>,
}

/// `(train + test) × train` kernel of the graph kernel on one side of each
/// pair.
fn side_gram(
    kind: KernelKind,
    train: &[(Graph, Graph)],
    test: &[(Graph, Graph)],
    wl_iterations: usize,
    pick: fn(&(Graph, Graph)) -> Graph,
) -> DMatrix<f64> {
    let all: Vec<Graph> = train.iter().chain(test).map(pick).collect();
    let f = Features::compute(kind, &all, wl_iterations);
    let n = train.len();
    let cells: Vec<f64> = (0..all.len())
        .into_par_iter()
        .flat_map_iter(|i| (0..n).map(move |j| (i, j)).collect::<Vec<_>>())
        .map(|(i, j)| f.kernel(i, j))
        .collect();
    DMatrix::from_row_slice(all.len(), n, &cells)
}

/// `k(parent, child)` for every pair, train first.
pub fn pair_similarities(
    kind: KernelKind,
    pairs: &[(Graph, Graph)],
    wl_iterations: usize,
) -> Vec<f64> {
    let all: Vec<Graph> = pairs.iter().flat_map(|(a, b)| [*a, *b]).collect();
    let f = Features::compute(kind, &all, wl_iterations);
    (0..pairs.len())
        .into_par_iter()
        .map(|i| f.kernel(2 * i, 2 * i + 1))
        .collect()
}

pub fn pair_gram(
    kind: KernelKind,
    train: &[(Graph, Graph)],
    test: &[(Graph, Graph)],
    wl_iterations: usize,
    representation: PairRepresentation,
) -> Result<PairGram> {
    let n = train.len();
    let mut full = match representation {
        PairRepresentation::Product => side_gram(kind, train, test, wl_iterations, |p| p.0)
            .component_mul(&side_gram(kind, train, test, wl_iterations, |p| p.1)),
        PairRepresentation::Similarity => {
            let all: Vec<(Graph, Graph)> = train.iter().chain(test).copied().collect();
            let s = pair_similarities(kind, &all, wl_iterations);
            DMatrix::from_fn(all.len(), n, |i, j| s[i] * s[j])
        }
    };
    let mean_diag = if n == 0 {
        1.0
    } else {
        (0..n).map(|i| full[(i, i)]).sum::<f64>() / n as f64
    };
    if mean_diag > 0.0 {
        full /= mean_diag;
    }
    let train_k = full.rows(0, n).into_owned();
    let sym = (&train_k + train_k.transpose()) * 0.5;
    Ok(PairGram {
        train: GramMatrix::new(sym, kind)?,
        test: full.rows(n, test.len()).into_owned(),
    })
}
