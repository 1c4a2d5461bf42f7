//! Universal quasi-threshold graphs `Q_t`, their complements, class
//! recognizers and the constructive embedding of a quasi-threshold graph
//! into some `Q_t`.
//!
//! `Q_1 = K_1` and `Q_t = (K_1 ∗ Q_{t-1}) ⊎ Q_{t-1}`, numbered apex first,
//! then the copy joined to the apex, then the free copy. `Q_t` has
//! `2^t - 1` vertices, so only `t <= 6` fits in a [`Graph`]; larger indices
//! are handled through [`universal_adjacent`], which answers adjacency
//! queries on the implicit graph.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet, MAX_VERTICES};

/// Index `t >= 1` of a universal graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QtIndex(usize);

impl QtIndex {
    pub fn new(t: usize) -> Result<Self> {
        if t == 0 {
            Err(Error::InvalidArgument("universal graph index must be at least 1".into()))
        } else {
            Ok(QtIndex(t))
        }
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// `2^t - 1`.
    pub fn vertex_count(self) -> u128 {
        (1u128 << self.0) - 1
    }
}

/// Largest `t` with `Q_t` small enough to materialize.
pub const MAX_MATERIALIZED_T: usize = 6;

pub fn gen_q(t: usize) -> Result<Graph> {
    let t = QtIndex::new(t)?;
    if t.vertex_count() > MAX_VERTICES as u128 {
        return Err(Error::TooManyVertices { n: t.vertex_count() as usize, max: MAX_VERTICES });
    }
    let k1 = Graph::complete(1)?;
    let mut q = k1.clone();
    for _ in 1..t.get() {
        q = k1.join(&q)?.disjoint_union(&q)?;
    }
    Ok(q)
}

/// `Q̄_1 = K_1`, `Q̄_s = (K_1 ⊎ Q̄_{s-1}) ∗ Q̄_{s-1}`; equal to the
/// complement of [`gen_q`] under the same numbering.
pub fn gen_coq(s: usize) -> Result<Graph> {
    let s = QtIndex::new(s)?;
    if s.vertex_count() > MAX_VERTICES as u128 {
        return Err(Error::TooManyVertices { n: s.vertex_count() as usize, max: MAX_VERTICES });
    }
    let k1 = Graph::complete(1)?;
    let mut q = k1.clone();
    for _ in 1..s.get() {
        q = k1.disjoint_union(&q)?.join(&q)?;
    }
    Ok(q)
}

/// Adjacency in the implicit `Q_t` on vertices `0..2^t - 1`.
pub fn universal_adjacent(t: QtIndex, u: u128, v: u128) -> bool {
    let (mut a, mut b) = (u.min(v), u.max(v));
    let mut t = t.get();
    debug_assert!(b < QtIndex(t).vertex_count());
    loop {
        if a == b || t == 1 {
            return false;
        }
        let half = (1u128 << (t - 1)) - 1;
        if a == 0 {
            return b <= half;
        }
        if b <= half {
            (a, b) = (a - 1, b - 1);
        } else if a > half {
            (a, b) = (a - 1 - half, b - 1 - half);
        } else {
            return false;
        }
        t -= 1;
    }
}

/// An induced `P_4` or `C_4`, as found by [`qt_violation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Consecutive along the path or cycle.
    pub vertices: [usize; 4],
    pub pattern: &'static str,
}

fn scan_quadruples(g: &Graph, want_c4: bool) -> Option<Violation> {
    for b in 0..g.n() {
        let nb = g.neighbors(b);
        for c in nb {
            let nc = g.neighbors(c);
            let closed_c = nc.union(VertexSet::singleton(c));
            let closed_b = nb.union(VertexSet::singleton(b));
            for a in nb.difference(closed_c) {
                for d in nc.difference(closed_b) {
                    if a == d {
                        continue;
                    }
                    if !g.adjacent(a, d) {
                        return Some(Violation { vertices: [a, b, c, d], pattern: "P4" });
                    }
                    if want_c4 {
                        return Some(Violation { vertices: [a, b, c, d], pattern: "C4" });
                    }
                }
            }
        }
    }
    None
}

/// First induced `P_4` or `C_4` of `g`, by direct scan.
pub fn qt_violation(g: &Graph) -> Option<Violation> {
    scan_quadruples(g, true)
}

/// `{P_4, C_4}`-free.
pub fn is_quasi_threshold(g: &Graph) -> bool {
    qt_violation(g).is_none()
}

/// `P_4`-free.
pub fn is_cograph(g: &Graph) -> bool {
    scan_quadruples(g, false).is_none()
}

pub fn is_co_quasi_threshold(g: &Graph) -> bool {
    is_quasi_threshold(&g.complement())
}

/// How a quasi-threshold graph is assembled from single vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QtTree {
    Leaf(usize),
    /// Disjoint union of the connected components.
    Union(Vec<QtTree>),
    /// A vertex joined to everything in the subtree.
    Apex(usize, Box<QtTree>),
}

/// Construction-based recognizer: split into components, or peel off a
/// universal vertex. Returns `None` when neither applies somewhere, which
/// happens exactly for graphs that are not quasi-threshold.
pub fn qt_decompose(g: &Graph) -> Option<QtTree> {
    if g.n() == 0 {
        return None;
    }
    decompose_within(g, g.vertices())
}

fn decompose_within(g: &Graph, s: VertexSet) -> Option<QtTree> {
    if s.len() == 1 {
        return Some(QtTree::Leaf(s.first().unwrap()));
    }
    let first = s.first().unwrap();
    let comp = g.component_of(first, s);
    if comp != s {
        let mut parts = Vec::new();
        let mut left = s;
        while let Some(v) = left.first() {
            let c = g.component_of(v, left);
            parts.push(decompose_within(g, c)?);
            left = left.difference(c);
        }
        return Some(QtTree::Union(parts));
    }
    let apex = s.iter().find(|&v| s.difference(VertexSet::singleton(v)).is_subset(g.neighbors(v)))?;
    let rest = decompose_within(g, s.difference(VertexSet::singleton(apex)))?;
    Some(QtTree::Apex(apex, Box::new(rest)))
}

/// Embedding of a quasi-threshold graph into the implicit `Q_t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniversalEmbedding {
    pub t: QtIndex,
    /// `map[v]` is the image of `v` in `Q_t`.
    pub map: Vec<u128>,
}

impl UniversalEmbedding {
    /// Adjacency and non-adjacency are preserved and the map is injective.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let size = self.t.vertex_count();
        if self.map.len() != g.n() || self.map.iter().any(|&x| x >= size) {
            return false;
        }
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                if self.map[u] == self.map[v]
                    || g.adjacent(u, v) != universal_adjacent(self.t, self.map[u], self.map[v])
                {
                    return false;
                }
            }
        }
        true
    }
}

/// A rooted component: its apex and the forest hanging below it.
struct Rooted<'a> {
    apex: usize,
    below: Vec<&'a QtTree>,
    /// Index needed by `below`.
    need: usize,
}

fn forest(tree: &QtTree) -> Vec<&QtTree> {
    match tree {
        QtTree::Union(parts) => parts.iter().collect(),
        other => vec![other],
    }
}

/// Components of a forest ordered by the index their lower forest needs,
/// largest first, ties by apex id.
fn rooted_components<'a>(forest: &[&'a QtTree]) -> Vec<Rooted<'a>> {
    let mut out: Vec<Rooted<'a>> = forest
        .iter()
        .map(|c| {
            let (apex, below) = match c {
                QtTree::Leaf(v) => (*v, Vec::new()),
                QtTree::Apex(v, rest) => (*v, self::forest(rest)),
                QtTree::Union(_) => unreachable!("components are connected"),
            };
            let need = forest_index(&below);
            Rooted { apex, below, need }
        })
        .collect();
    out.sort_by_key(|r| (std::cmp::Reverse(r.need), r.apex));
    out
}

/// Index of `Q_t` used for a forest: the first component takes the apex and
/// the joined copy, the remaining components go into the free copy.
fn forest_index(forest: &[&QtTree]) -> usize {
    rooted_components(forest).iter().rev().fold(0, |rest, r| 1 + r.need.max(rest))
}

/// Places a forest into the copy of `Q_t` whose apex has id `base`.
fn place(forest: &[&QtTree], t: usize, base: u128, map: &mut [u128]) {
    let comps = rooted_components(forest);
    let mut base = base;
    let mut t = t;
    for r in comps {
        let half = (1u128 << (t - 1)) - 1;
        map[r.apex] = base;
        place(&r.below, t - 1, base + 1, map);
        base += 1 + half;
        t -= 1;
    }
}

/// Embeds a quasi-threshold graph into `Q_t` following its construction.
/// One component `K_1 ∗ G'` takes the apex with `G'` in the joined copy of
/// `Q_{t-1}`; the other components go into the free copy. The resulting `t`
/// is at most `g.n()` but not necessarily minimal.
pub fn universal_embed(g: &Graph) -> Result<UniversalEmbedding> {
    if g.n() == 0 {
        return Err(Error::TooFewVertices { n: 0, min: 1 });
    }
    if let Some(v) = qt_violation(g) {
        return Err(Error::NotQuasiThreshold { witness: v.vertices, pattern: v.pattern });
    }
    let tree = qt_decompose(g).expect("scan and construction recognizers agree");
    let top = forest(&tree);
    let t = forest_index(&top);
    let mut map = vec![0u128; g.n()];
    place(&top, t, 0, &mut map);
    Ok(UniversalEmbedding { t: QtIndex(t), map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::Embedding;

    fn all_graphs(n: usize) -> Vec<Graph> {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        (0u64..1 << pairs.len())
            .map(|bits| {
                let e: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &e)| e).collect();
                Graph::from_edges(n, &e).unwrap()
            })
            .collect()
    }

    #[test]
    fn generator_examples() {
        assert_eq!(gen_q(1).unwrap(), Graph::complete(1).unwrap());
        let q2 = gen_q(2).unwrap();
        assert_eq!(q2.n(), 3);
        assert_eq!(q2.edges(), vec![(0, 1)]);
        let coq2 = gen_coq(2).unwrap();
        // P_3 with centre 2
        assert_eq!(coq2.edges(), vec![(0, 2), (1, 2)]);
        assert!(gen_q(0).is_err());
        assert!(gen_q(7).is_err());
    }

    #[test]
    fn sizes_and_complements() {
        for t in 1..=MAX_MATERIALIZED_T {
            let q = gen_q(t).unwrap();
            assert_eq!(q.n(), (1 << t) - 1);
            assert_eq!(gen_coq(t).unwrap(), q.complement());
            assert!(is_quasi_threshold(&q));
            assert!(is_co_quasi_threshold(&gen_coq(t).unwrap()));
            let idx = QtIndex::new(t).unwrap();
            for u in 0..q.n() {
                for v in 0..q.n() {
                    assert_eq!(q.adjacent(u, v), universal_adjacent(idx, u as u128, v as u128));
                }
            }
        }
    }

    #[test]
    fn two_copies_of_previous() {
        for t in 2..=5 {
            let q = gen_q(t).unwrap();
            let prev = gen_q(t - 1).unwrap();
            let half = prev.n();
            let left = Embedding::new((1..=half).collect());
            let right = Embedding::new((half + 1..=2 * half).collect());
            assert!(left.is_valid(&prev, &q));
            assert!(right.is_valid(&prev, &q));
        }
    }

    #[test]
    fn recognizer_examples() {
        let c4 = Graph::cycle(4).unwrap();
        let p4 = Graph::path(4).unwrap();
        assert!(!is_quasi_threshold(&c4));
        assert!(is_cograph(&c4));
        assert!(!is_cograph(&p4));
        assert_eq!(qt_violation(&c4).unwrap().pattern, "C4");
        assert_eq!(qt_violation(&p4).unwrap().pattern, "P4");
    }

    #[test]
    fn recognizers_agree_up_to_six() {
        for n in 1..=6 {
            for g in all_graphs(n) {
                assert_eq!(is_quasi_threshold(&g), qt_decompose(&g).is_some(), "{g:?}");
            }
        }
    }

    #[test]
    fn embed_examples() {
        let k1 = Graph::complete(1).unwrap();
        let e = universal_embed(&k1).unwrap();
        assert_eq!((e.t.get(), e.map.clone()), (1, vec![0]));

        let p3 = Graph::from_edges(3, &[(0, 1), (0, 2)]).unwrap();
        let e = universal_embed(&p3).unwrap();
        assert!(e.t.get() <= 3);
        assert!(e.is_valid_for(&p3));
        let as_embedding = Embedding::new(e.map.iter().map(|&x| x as usize).collect());
        assert!(as_embedding.is_valid(&p3, &gen_q(e.t.get()).unwrap()));

        let q3 = gen_q(3).unwrap();
        let e = universal_embed(&q3).unwrap();
        assert_eq!(e.t.get(), 3);
        assert_eq!(e.map, (0..7).collect::<Vec<u128>>());

        let k8 = Graph::complete(8).unwrap();
        let e = universal_embed(&k8).unwrap();
        assert_eq!(e.t.get(), 8);
        assert!(e.is_valid_for(&k8));

        assert!(matches!(
            universal_embed(&Graph::path(4).unwrap()),
            Err(Error::NotQuasiThreshold { pattern: "P4", .. })
        ));
    }

    #[test]
    fn every_qt_graph_up_to_six_embeds() {
        for n in 1..=6 {
            for g in all_graphs(n).into_iter().filter(is_quasi_threshold) {
                let e = universal_embed(&g).unwrap();
                assert!(e.is_valid_for(&g));
                assert!(e.t.get() <= n);
            }
        }
    }
}
