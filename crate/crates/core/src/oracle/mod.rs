//! Exact vertex-minor decision by exhaustive search, and labeled datasets.
//!
//! Three enumeration strategies are available:
//!
//! * [`Enumeration::PaperFaithful`] applies local complementations for every
//!   vertex subset in ascending vertex order (`2^N` graphs) and then tries
//!   every deletion set.
//! * [`Enumeration::OrbitBfs`] walks the whole labeled LC orbit of the parent
//!   before trying every deletion set. Exact but bounded by the orbit budget.
//! * [`Enumeration::OrbitComplete`] (default) is exact without walking the
//!   orbit: a vertex-minor avoiding `v` is LC-equivalent to a vertex-minor of
//!   one of `G \ v`, `G*v \ v` or `G∧vw \ v` for any neighbour `w`, so every
//!   deletion needs only three branches.
//!
//! The final comparison with the child is either plain isomorphism or
//! LC-equivalence up to isomorphism.

mod dataset;

pub use dataset::{
    generate_dataset, make_negative_pair, make_positive_pair, positive_from, verify_dataset,
    Dataset, GenerationConfig, LabeledPair, Provenance, EDGE_PROBABILITY, MIN_CHILD,
};

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::graph::{
    canonical_form, cut_rank_profile, lc_orbit, CanonicalForm, CutRankProfile, Graph,
    DEFAULT_ORBIT_BUDGET,
};
use crate::{Error, Result};

/// Class of a graph pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    NotVertexMinor,
    VertexMinor,
}

impl Label {
    /// `+1` for vertex-minor, `-1` otherwise.
    pub fn sign(self) -> f64 {
        match self {
            Label::VertexMinor => 1.0,
            Label::NotVertexMinor => -1.0,
        }
    }

    pub fn from_sign(x: f64) -> Self {
        if x >= 0.0 {
            Label::VertexMinor
        } else {
            Label::NotVertexMinor
        }
    }

    pub fn from_bool(is_minor: bool) -> Self {
        if is_minor {
            Label::VertexMinor
        } else {
            Label::NotVertexMinor
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Label::VertexMinor => 1,
            Label::NotVertexMinor => 0,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::VertexMinor => "vertex-minor",
            Label::NotVertexMinor => "not-vertex-minor",
        })
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.as_u8())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match u8::deserialize(d)? {
            0 => Ok(Label::NotVertexMinor),
            1 => Ok(Label::VertexMinor),
            x => Err(serde::de::Error::custom(format!(
                "label must be 0 or 1, got {x}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Enumeration {
    PaperFaithful,
    OrbitBfs,
    OrbitComplete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FinalCheck {
    Isomorphism,
    LcEquivalence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub enumeration: Enumeration,
    pub final_check: FinalCheck,
    /// Largest parent accepted.
    pub max_parent: usize,
    /// Cap on labeled graphs visited by any orbit walk.
    pub orbit_budget: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            enumeration: Enumeration::OrbitComplete,
            final_check: FinalCheck::LcEquivalence,
            max_parent: 12,
            orbit_budget: DEFAULT_ORBIT_BUDGET,
        }
    }
}

impl OracleConfig {
    pub fn with(enumeration: Enumeration, final_check: FinalCheck) -> Self {
        OracleConfig {
            enumeration,
            final_check,
            ..Default::default()
        }
    }
}

/// Decides whether `child` can be obtained from `parent` by local
/// complementations and vertex deletions (up to relabeling).
pub fn is_vertex_minor(parent: &Graph, child: &Graph, config: &OracleConfig) -> Result<bool> {
    let (n, m) = (parent.n(), child.n());
    if m == 0 || m > n {
        return Err(Error::arg(format!(
            "need parent.n >= child.n >= 1, got {n} and {m}"
        )));
    }
    if n > config.max_parent {
        return Err(Error::arg(format!(
            "parent has {n} vertices, oracle cap is {}",
            config.max_parent
        )));
    }
    let mut matcher = ChildMatcher::new(child, config.final_check, config.orbit_budget);
    match config.enumeration {
        Enumeration::PaperFaithful => paper_faithful(parent, m, &mut matcher),
        Enumeration::OrbitBfs => {
            for h in lc_orbit(parent, config.orbit_budget)? {
                if any_deletion_set(&h, m, &mut matcher)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Enumeration::OrbitComplete => {
            let mut seen = HashSet::new();
            reduce(*parent, n, n - m, &mut matcher, &mut seen)
        }
    }
}

/// Operation-count model `N · 2^(2N) · 2^(-N')` of the subset-enumeration
/// search.
pub fn bruteforce_cost(n_parent: usize, n_child: usize) -> f64 {
    n_parent as f64 * 2f64.powi(2 * n_parent as i32) * 2f64.powi(-(n_child as i32))
}

fn paper_faithful(parent: &Graph, m: usize, matcher: &mut ChildMatcher) -> Result<bool> {
    let n = parent.n();
    for subset in 0u32..(1 << n) {
        let mut h = *parent;
        for v in 0..n {
            if subset >> v & 1 == 1 {
                h = h.local_complement_unchecked(v);
            }
        }
        if any_deletion_set(&h, m, matcher)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn any_deletion_set(h: &Graph, m: usize, matcher: &mut ChildMatcher) -> Result<bool> {
    let n = h.n();
    for keep in 0u32..(1 << n) {
        if keep.count_ones() as usize == m && matcher.matches(&h.induced(keep as u16))? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Deletes `left` more vertices, each below `limit`, branching three ways per
/// deletion. Deleting from the highest index down keeps the indices of the
/// remaining candidates stable.
fn reduce(
    g: Graph,
    limit: usize,
    left: usize,
    matcher: &mut ChildMatcher,
    seen: &mut HashSet<(Graph, u8, u8)>,
) -> Result<bool> {
    if left == 0 {
        return matcher.matches(&g);
    }
    if !seen.insert((g, limit as u8, left as u8)) {
        return Ok(false);
    }
    for v in (left - 1..limit).rev() {
        let plain = g.delete_vertex_unchecked(v);
        if reduce(plain, v, left - 1, matcher, seen)? {
            return Ok(true);
        }
        let nv = g.neighbors(v);
        if nv == 0 {
            continue;
        }
        let local = g.local_complement_unchecked(v).delete_vertex_unchecked(v);
        if reduce(local, v, left - 1, matcher, seen)? {
            return Ok(true);
        }
        let w = nv.trailing_zeros() as usize;
        let pivot = g.pivot_unchecked(v, w).delete_vertex_unchecked(v);
        if reduce(pivot, v, left - 1, matcher, seen)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Final comparison against the child, memoized per labeled candidate.
pub(crate) struct ChildMatcher {
    child: Graph,
    check: FinalCheck,
    budget: usize,
    canon: CanonicalForm,
    profile: Option<CutRankProfile>,
    class: Option<HashSet<CanonicalForm>>,
    cache: HashMap<Graph, bool>,
}

impl ChildMatcher {
    pub(crate) fn new(child: &Graph, check: FinalCheck, budget: usize) -> Self {
        ChildMatcher {
            child: *child,
            check,
            budget,
            canon: canonical_form(child),
            profile: None,
            class: None,
            cache: HashMap::new(),
        }
    }

    pub(crate) fn matches(&mut self, candidate: &Graph) -> Result<bool> {
        if let Some(&hit) = self.cache.get(candidate) {
            return Ok(hit);
        }
        let hit = match self.check {
            FinalCheck::Isomorphism => {
                candidate.edge_count() == self.child.edge_count()
                    && canonical_form(candidate) == self.canon
            }
            FinalCheck::LcEquivalence => self.lc_equivalent_up_to_iso(candidate)?,
        };
        self.cache.insert(*candidate, hit);
        Ok(hit)
    }

    fn lc_equivalent_up_to_iso(&mut self, candidate: &Graph) -> Result<bool> {
        let profile = self
            .profile
            .get_or_insert_with(|| cut_rank_profile(&self.child));
        if cut_rank_profile(candidate) != *profile {
            return Ok(false);
        }
        if self.class.is_none() {
            let orbit = lc_orbit(&self.child, self.budget)?;
            self.class = Some(orbit.iter().map(canonical_form).collect());
        }
        let class = self.class.as_ref().expect("class computed above");
        Ok(class.contains(&canonical_form(candidate)))
    }
}
