use crate::graph::Graph;

/// All-pairs hop distances by Floyd–Warshall; `None` marks unreachable pairs.
pub fn distance_matrix(g: &Graph) -> Vec<Vec<Option<u32>>> {
    let n = g.n();
    let mut d = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(0);
        for (j, cell) in row.iter_mut().enumerate() {
            if g.has_edge(i, j) {
                *cell = Some(1);
            }
        }
    }
    for k in 0..n {
        let via = d[k].clone();
        for row in d.iter_mut() {
            let Some(ik) = row[k] else { continue };
            for (cell, kj) in row.iter_mut().zip(&via) {
                if let Some(kj) = *kj {
                    if cell.is_none_or(|ij| ik + kj < ij) {
                        *cell = Some(ik + kj);
                    }
                }
            }
        }
    }
    d
}

/// Sum of finite distances over ordered vertex pairs. Unreachable pairs and
/// the zero self-distances contribute nothing.
pub fn distance_sum(g: &Graph) -> f64 {
    distance_matrix(g)
        .iter()
        .flatten()
        .map(|d| d.unwrap_or(0) as f64)
        .sum()
}

/// Linear base kernel on distances summed over all pairs of vertex pairs,
/// which factorizes into the product of the two distance sums.
pub fn shortest_path_kernel(g1: &Graph, g2: &Graph) -> f64 {
    distance_sum(g1) * distance_sum(g2)
}
