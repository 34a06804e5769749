//! Local-complementation orbits and cut-rank invariants.

use std::collections::{HashSet, VecDeque};

use super::{low_mask, Graph};
use crate::{Error, Result};

/// Default cap on the number of distinct graphs visited by an orbit search.
pub const DEFAULT_ORBIT_BUDGET: usize = 1_000_000;

/// All labeled graphs reachable from `g` by local complementations, in BFS
/// order starting with `g` itself.
pub fn lc_orbit(g: &Graph, budget: usize) -> Result<Vec<Graph>> {
    let mut seen = HashSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(*g);
    order.push(*g);
    queue.push_back(*g);
    while let Some(h) = queue.pop_front() {
        for v in 0..h.n() {
            let next = h.local_complement_unchecked(v);
            if seen.insert(next) {
                if seen.len() > budget {
                    return Err(Error::ResourceExhausted(format!(
                        "LC orbit exceeds budget of {budget} graphs"
                    )));
                }
                order.push(next);
                queue.push_back(next);
            }
        }
    }
    Ok(order)
}

/// Whether some sequence of local complementations turns `a` into `b`
/// (same labeling).
pub fn are_lc_equivalent(a: &Graph, b: &Graph) -> Result<bool> {
    are_lc_equivalent_with_budget(a, b, DEFAULT_ORBIT_BUDGET)
}

pub fn are_lc_equivalent_with_budget(a: &Graph, b: &Graph, budget: usize) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::arg(format!(
            "LC-equivalence needs equal vertex counts, got {} and {}",
            a.n(),
            b.n()
        )));
    }
    if a == b {
        return Ok(true);
    }
    // The cut-rank function is invariant under local complementation.
    let n = a.n();
    for s in 1..(1u32 << n) - 1 {
        if cut_rank(a, s as u16) != cut_rank(b, s as u16) {
            return Ok(false);
        }
    }
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(*a);
    queue.push_back(*a);
    while let Some(h) = queue.pop_front() {
        for v in 0..n {
            let next = h.local_complement_unchecked(v);
            if next == *b {
                return Ok(true);
            }
            if seen.insert(next) {
                if seen.len() > budget {
                    return Err(Error::ResourceExhausted(format!(
                        "LC orbit exceeds budget of {budget} graphs"
                    )));
                }
                queue.push_back(next);
            }
        }
    }
    Ok(false)
}

/// GF(2) rank of the adjacency block between `set` and its complement.
pub fn cut_rank(g: &Graph, set: u16) -> u32 {
    let rest = low_mask(g.n()) & !set;
    let mut basis = [0u16; 16];
    let mut rank = 0;
    let mut s = set & low_mask(g.n());
    while s != 0 {
        let v = s.trailing_zeros() as usize;
        s &= s - 1;
        let mut row = g.neighbors(v) & rest;
        for b in &basis[..rank] {
            row = row.min(row ^ b);
        }
        if row != 0 {
            basis[rank] = row;
            rank += 1;
            // keep the basis sorted by leading bit, descending
            basis[..rank].sort_unstable_by(|x, y| y.cmp(x));
        }
    }
    rank as u32
}

/// Histogram of cut-ranks by subset size. Invariant under both local
/// complementation and relabeling, so unequal profiles rule out
/// LC-equivalence up to isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CutRankProfile {
    n: u8,
    counts: Vec<u32>,
}

pub fn cut_rank_profile(g: &Graph) -> CutRankProfile {
    let n = g.n();
    let width = n / 2 + 1;
    let mut counts = vec![0u32; (n + 1) * width];
    for s in 0..(1u32 << n) {
        let size = s.count_ones() as usize;
        let r = cut_rank(g, s as u16) as usize;
        counts[size * width + r] += 1;
    }
    CutRankProfile { n: n as u8, counts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn lc_involution_and_orbit_membership() {
        let mut r = rng::seeded(2);
        for _ in 0..100 {
            let g = Graph::random(8, 0.5, &mut r).unwrap();
            for v in 0..8 {
                let h = g.local_complement(v).unwrap();
                assert_eq!(h.local_complement(v).unwrap(), g);
                assert!(are_lc_equivalent(&g, &h).unwrap());
            }
        }
    }

    #[test]
    fn path_and_triangle_are_equivalent() {
        let p3 = Graph::path(3).unwrap();
        let k3 = Graph::complete(3).unwrap();
        assert!(are_lc_equivalent(&p3, &k3).unwrap());
    }

    #[test]
    fn edgeless_is_alone_in_its_orbit() {
        let e2 = Graph::empty(2).unwrap();
        let k2 = Graph::complete(2).unwrap();
        assert!(!are_lc_equivalent(&e2, &k2).unwrap());
        assert_eq!(lc_orbit(&e2, 10).unwrap(), vec![e2]);
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let a = Graph::empty(3).unwrap();
        let b = Graph::empty(4).unwrap();
        assert!(matches!(
            are_lc_equivalent(&a, &b),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn complete_graph_orbit_is_stars_plus_itself() {
        let k5 = Graph::complete(5).unwrap();
        assert_eq!(lc_orbit(&k5, 1000).unwrap().len(), 6);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let g = Graph::cycle(8).unwrap();
        assert!(matches!(lc_orbit(&g, 3), Err(Error::ResourceExhausted(_))));
    }

    #[test]
    fn cut_rank_is_lc_invariant() {
        let mut r = rng::seeded(4);
        for _ in 0..30 {
            let g = Graph::random(9, 0.5, &mut r).unwrap();
            let h = g.random_lc_walk(7, &mut r);
            for s in 0..(1u16 << 9) {
                assert_eq!(cut_rank(&g, s), cut_rank(&h, s));
            }
            assert_eq!(
                cut_rank_profile(&g),
                cut_rank_profile(&h.random_relabel(&mut r))
            );
        }
    }

    #[test]
    fn cut_rank_of_star_leaf() {
        let s = Graph::star(5).unwrap();
        assert_eq!(cut_rank(&s, 0b00010), 1);
        assert_eq!(cut_rank(&s, 0b00110), 1);
        assert_eq!(cut_rank(&s, 0), 0);
        let e = Graph::empty(4).unwrap();
        assert_eq!(cut_rank(&e, 0b0011), 0);
    }
}
