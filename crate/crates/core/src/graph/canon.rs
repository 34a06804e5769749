//! Canonical labeling by partition refinement and individualization.
//!
//! The canonical form is the lexicographically smallest upper-triangle
//! adjacency string over all leaves of the search tree. Automorphisms found
//! at leaves prune sibling subtrees, which keeps highly symmetric graphs
//! (edgeless, complete, cycles) polynomial.

use super::Graph;

/// Isomorphism-class fingerprint: vertex count plus the minimal adjacency
/// string (at most 120 bits for 16 vertices).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: u8,
    pub code: u128,
}

impl CanonicalForm {
    /// Rebuilds the canonical representative.
    pub fn to_graph(&self) -> Graph {
        let n = self.n as usize;
        let mut g = Graph::empty(n).expect("canonical forms are bounded");
        let total = n * n.saturating_sub(1) / 2;
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.code >> (total - 1 - k) & 1 == 1 {
                    g.toggle_edge(i, j);
                }
                k += 1;
            }
        }
        g
    }
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    canonical_labeling(g).0
}

/// Returns the canonical form together with the vertex order realizing it:
/// vertex `order[i]` of `g` becomes vertex `i` of the canonical graph.
pub fn canonical_labeling(g: &Graph) -> (CanonicalForm, Vec<usize>) {
    let n = g.n();
    if n <= 1 {
        return (
            CanonicalForm {
                n: n as u8,
                code: 0,
            },
            (0..n).collect(),
        );
    }
    let mut search = Search {
        g,
        first: None,
        best: None,
        generators: Vec::new(),
    };
    let root = refine(g, vec![(0..n).collect()]);
    let mut path = Vec::new();
    search.dfs(root, &mut path);
    let best = search.best.expect("search visits at least one leaf");
    (
        CanonicalForm {
            n: n as u8,
            code: best.code,
        },
        best.order,
    )
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut da: Vec<usize> = (0..a.n()).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..b.n()).map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    da == db && canonical_form(a) == canonical_form(b)
}

type Cells = Vec<Vec<usize>>;

struct Leaf {
    order: Vec<usize>,
    code: u128,
    path: Vec<usize>,
}

struct Search<'a> {
    g: &'a Graph,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Returns `Some(level)` to abandon the search up to the ancestor at
    /// depth `level`.
    fn dfs(&mut self, cells: Cells, path: &mut Vec<usize>) -> Option<usize> {
        let target = match cells.iter().position(|c| c.len() > 1) {
            Some(t) => t,
            None => return self.leaf(&cells, path),
        };
        let depth = path.len();
        let on_first_path = match &self.first {
            None => true,
            Some(f) => f.path.len() > depth && f.path[..depth] == path[..],
        };
        let cell = cells[target].clone();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if on_first_path && !explored.is_empty() && self.equivalent(v, &explored, path) {
                continue;
            }
            let child = refine(self.g, individualize(&cells, target, v));
            path.push(v);
            let jump = self.dfs(child, path);
            path.pop();
            explored.push(v);
            if let Some(level) = jump {
                if level < depth {
                    return Some(level);
                }
            }
        }
        None
    }

    fn leaf(&mut self, cells: &Cells, path: &[usize]) -> Option<usize> {
        let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
        let code = adjacency_code(self.g, &order);
        let leaf = Leaf {
            order,
            code,
            path: path.to_vec(),
        };
        let Some(first) = &self.first else {
            self.first = Some(Leaf {
                order: leaf.order.clone(),
                code,
                path: leaf.path.clone(),
            });
            self.best = Some(leaf);
            return None;
        };
        if code == first.code {
            let gen = mapping(&first.order, &leaf.order);
            let level = common_prefix(&first.path, path);
            self.generators.push(gen);
            return Some(level);
        }
        let best = self.best.as_ref().expect("best is set with first");
        if code == best.code {
            let gen = mapping(&best.order, &leaf.order);
            let level = common_prefix(&best.path, path);
            self.generators.push(gen);
            return Some(level);
        }
        if code < best.code {
            self.best = Some(leaf);
        }
        None
    }

    /// Whether `v` lies in the orbit of an explored vertex under the group
    /// generated by automorphisms that fix `path` pointwise.
    fn equivalent(&self, v: usize, explored: &[usize], path: &[usize]) -> bool {
        let n = self.g.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut any = false;
        for gen in &self.generators {
            if path.iter().any(|&p| gen[p] != p) {
                continue;
            }
            any = true;
            for (x, &y) in gen.iter().enumerate() {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        if !any {
            return false;
        }
        let rv = find(&mut parent, v);
        explored.iter().any(|&e| find(&mut parent, e) == rv)
    }
}

fn mapping(from: &[usize], to: &[usize]) -> Vec<usize> {
    let mut gen = vec![0; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        gen[a] = b;
    }
    gen
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn adjacency_code(g: &Graph, order: &[usize]) -> u128 {
    let n = order.len();
    let mut code = 0u128;
    for i in 0..n {
        let row = g.neighbors(order[i]);
        for &w in &order[i + 1..] {
            code = code << 1 | (row >> w & 1) as u128;
        }
    }
    code
}

fn individualize(cells: &Cells, target: usize, v: usize) -> Cells {
    let mut out = Vec::with_capacity(cells.len() + 1);
    out.extend_from_slice(&cells[..target]);
    out.push(vec![v]);
    out.push(cells[target].iter().copied().filter(|&u| u != v).collect());
    out.extend_from_slice(&cells[target + 1..]);
    out
}

/// Splits cells by neighbour counts into other cells until the ordered
/// partition is equitable. The result depends only on the graph structure
/// and the input cell order, never on vertex labels.
fn refine(g: &Graph, mut cells: Cells) -> Cells {
    loop {
        let mut changed = false;
        let mut s = 0;
        while s < cells.len() {
            let splitter: u16 = cells[s].iter().fold(0, |m, &v| m | 1 << v);
            let mut next = Vec::with_capacity(cells.len());
            for cell in cells {
                if cell.len() == 1 {
                    next.push(cell);
                    continue;
                }
                let mut keyed: Vec<(u32, usize)> = cell
                    .iter()
                    .map(|&v| ((g.neighbors(v) & splitter).count_ones(), v))
                    .collect();
                keyed.sort_unstable();
                if keyed[0].0 == keyed[keyed.len() - 1].0 {
                    next.push(cell);
                    continue;
                }
                changed = true;
                let mut group = vec![keyed[0].1];
                for w in keyed.windows(2) {
                    if w[1].0 != w[0].0 {
                        next.push(std::mem::take(&mut group));
                    }
                    group.push(w[1].1);
                }
                next.push(group);
            }
            cells = next;
            s += 1;
        }
        if !changed {
            return cells;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use rand::seq::SliceRandom;

    fn brute_force_form(g: &Graph) -> u128 {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best = u128::MAX;
        permutations(&mut perm, 0, &mut |p| {
            best = best.min(adjacency_code(g, p));
        });
        best
    }

    fn permutations(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permutations(p, k + 1, f);
            p.swap(k, i);
        }
    }

    #[test]
    fn agrees_with_brute_force_isomorphism_classes() {
        let mut r = rng::seeded(11);
        for n in 1..=7 {
            let graphs: Vec<Graph> = (0..25)
                .map(|i| Graph::random(n, [0.3, 0.5, 0.7][i % 3], &mut r).unwrap())
                .collect();
            let brute: Vec<u128> = graphs.iter().map(brute_force_form).collect();
            let forms: Vec<CanonicalForm> = graphs.iter().map(canonical_form).collect();
            for i in 0..graphs.len() {
                for j in 0..graphs.len() {
                    assert_eq!(forms[i] == forms[j], brute[i] == brute[j]);
                }
            }
        }
    }

    #[test]
    fn canonical_order_reproduces_code() {
        let mut r = rng::seeded(5);
        for _ in 0..50 {
            let g = Graph::random(10, 0.4, &mut r).unwrap();
            let (form, order) = canonical_labeling(&g);
            assert_eq!(adjacency_code(&g, &order), form.code);
            let mut perm = vec![0; g.n()];
            for (i, &v) in order.iter().enumerate() {
                perm[v] = i;
            }
            assert_eq!(g.permute(&perm).unwrap(), form.to_graph());
        }
    }

    #[test]
    fn invariant_under_relabeling() {
        let mut r = rng::seeded(9);
        for n in [8, 10, 12] {
            for _ in 0..20 {
                let g = Graph::random(n, 0.5, &mut r).unwrap();
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(&mut r);
                let h = g.permute(&perm).unwrap();
                assert_eq!(canonical_form(&g), canonical_form(&h));
                assert!(are_isomorphic(&g, &h));
            }
        }
    }

    #[test]
    fn symmetric_graphs_finish() {
        for n in [12, 16] {
            let e = Graph::empty(n).unwrap();
            assert_eq!(canonical_form(&e).code, 0);
            let k = Graph::complete(n).unwrap();
            assert_eq!(
                canonical_form(&k).code.count_ones() as usize,
                n * (n - 1) / 2
            );
            let c = Graph::cycle(n).unwrap();
            let (form, _) = canonical_labeling(&c);
            assert_eq!(form.to_graph().edge_count(), n);
        }
    }

    #[test]
    fn triangle_is_not_path() {
        let k3 = Graph::complete(3).unwrap();
        let p3 = Graph::path(3).unwrap();
        assert!(!are_isomorphic(&k3, &p3));
    }
}
