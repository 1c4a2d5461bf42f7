//! Exact linear clique-width for small graphs.
//!
//! # Search space
//!
//! A partial expression is summarised by the set `P` of inserted vertices.
//! Two normalisations make this sufficient:
//!
//! * every edge between two inserted vertices can be created as soon as both
//!   exist (a join never adds a wrong edge, and later joins are idempotent),
//! * two label classes whose members see the same not-yet-inserted vertices
//!   can always be merged by a relabel.
//!
//! After both, the label classes of `P` are exactly the groups of vertices
//! with equal neighbourhood into `U = V \ P`, so the number of live labels is
//! determined by `P`. Inserting `v` either costs one fresh label, or reuses
//! the label of a group `C` that `v` will stay indistinguishable from: `C`
//! must be non-adjacent to `v`, have `v`'s remaining neighbourhood, and be
//! complete to every group `v` must be joined to.
//!
//! `lcw(G) <= k` iff some insertion order keeps every step within `k` labels.
//! The normalisations are an optimisation argument, not a definition, so
//! [`naive_lcw`] searches raw labeled states instead and the two are checked
//! against each other on every graph with at most five vertices.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::expr::{verify, Label, LcwExpression, LcwStep};
use crate::graph::{Graph, VertexSet};

/// Default upper bound on the label budget tried by [`exact_lcw`].
pub const DEFAULT_BUDGET_CAP: usize = 12;

/// Largest graph accepted by [`naive_lcw`].
pub const NAIVE_LIMIT: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactLcw {
    pub k: usize,
    pub witness: LcwExpression,
    /// Insertion order of the witness; lexicographically smallest among all
    /// orders that achieve `k`.
    pub order: Vec<usize>,
}

#[derive(Clone, Copy, Debug)]
struct Group {
    key: u64,
    members: u64,
}

struct Search<'a> {
    g: &'a Graph,
    all: u64,
}

impl<'a> Search<'a> {
    fn groups(&self, placed: u64) -> Vec<Group> {
        let unplaced = self.all & !placed;
        let mut out: Vec<Group> = Vec::new();
        for v in VertexSet(placed) {
            let key = self.g.rows()[v] & unplaced;
            match out.iter_mut().find(|gr| gr.key == key) {
                Some(gr) => gr.members |= 1u64 << v,
                None => out.push(Group { key, members: 1u64 << v }),
            }
        }
        out
    }

    /// Index of a group `v` can join without a fresh label.
    fn reusable_group(&self, groups: &[Group], placed: u64, v: usize) -> Option<usize> {
        let rest = self.all & !placed & !(1u64 << v);
        let want = self.g.rows()[v] & rest;
        let bit = 1u64 << v;
        groups.iter().position(|c| {
            c.key == want
                && groups.iter().filter(|d| d.key & bit != 0).all(|d| {
                    VertexSet(c.members).iter().all(|u| self.g.rows()[u] & d.members == d.members)
                })
        })
    }

    fn step_cost(&self, groups: &[Group], placed: u64, v: usize) -> usize {
        if self.reusable_group(groups, placed, v).is_some() {
            groups.len().max(1)
        } else {
            groups.len() + 1
        }
    }

    fn dfs(&self, placed: u64, k: usize, dead: &mut HashSet<u64>, order: &mut Vec<usize>) -> bool {
        if placed == self.all {
            return true;
        }
        if dead.contains(&placed) {
            return false;
        }
        let groups = self.groups(placed);
        for v in VertexSet(self.all & !placed) {
            if self.step_cost(&groups, placed, v) <= k {
                order.push(v);
                if self.dfs(placed | 1u64 << v, k, dead, order) {
                    return true;
                }
                order.pop();
            }
        }
        dead.insert(placed);
        false
    }

    /// Replays an insertion order into a concrete expression on labels `1..=k`.
    fn witness(&self, order: &[usize], k: usize) -> LcwExpression {
        let mut steps = Vec::new();
        let mut classes: Vec<(u64, Label)> = Vec::new();
        let mut placed = 0u64;
        for &v in order {
            let groups: Vec<Group> = classes
                .iter()
                .map(|&(members, _)| Group {
                    key: self.g.rows()[members.trailing_zeros() as usize] & self.all & !placed,
                    members,
                })
                .collect();
            let bit = 1u64 << v;
            let label = match self.reusable_group(&groups, placed, v) {
                Some(c) => {
                    classes[c].0 |= bit;
                    classes[c].1
                }
                None => {
                    let f = (1..)
                        .find(|l| classes.iter().all(|&(_, used)| used != *l))
                        .expect("labels are unbounded");
                    classes.push((bit, f));
                    f
                }
            };
            steps.push(LcwStep::Insert { vertex: v, label });
            for (gr, &(_, l)) in groups.iter().zip(&classes) {
                if gr.key & bit != 0 {
                    steps.push(LcwStep::JoinLabels(label, l));
                }
            }
            placed |= bit;
            // merge classes that the remaining vertices no longer tell apart
            let rest = self.all & !placed;
            let mut merged: Vec<(u64, u64, Label)> = Vec::new();
            for &(members, l) in &classes {
                let key = self.g.rows()[members.trailing_zeros() as usize] & rest;
                match merged.iter_mut().find(|m| m.0 == key) {
                    Some(m) => {
                        let (keep, drop) = (m.2.min(l), m.2.max(l));
                        steps.push(LcwStep::Relabel { from: drop, to: keep });
                        m.1 |= members;
                        m.2 = keep;
                    }
                    None => merged.push((key, members, l)),
                }
            }
            classes = merged.into_iter().map(|(_, m, l)| (m, l)).collect();
        }
        let expr = LcwExpression::new(steps);
        debug_assert!(expr.width() <= k);
        expr
    }
}

/// Minimum width of an expression for `g`, with a witness, trying budgets
/// `1, 2, .., budget_cap` in turn.
pub fn exact_lcw(g: &Graph, budget_cap: usize) -> Result<ExactLcw> {
    if g.n() == 0 {
        return Err(Error::TooFewVertices { n: 0, min: 1 });
    }
    if budget_cap == 0 {
        return Err(Error::InvalidArgument("budget cap must be at least 1".into()));
    }
    let search = Search { g, all: g.vertices().0 };
    for k in 1..=budget_cap.min(g.n()) {
        let mut dead = HashSet::new();
        let mut order = Vec::with_capacity(g.n());
        if search.dfs(0, k, &mut dead, &mut order) {
            let witness = search.witness(&order, k);
            debug_assert!(verify(&witness, g).unwrap_or(false));
            debug_assert_eq!(witness.width(), k);
            return Ok(ExactLcw { k, witness, order });
        }
    }
    Err(Error::BudgetExceeded { cap: budget_cap })
}

/// Ground-truth linear clique-width by breadth-first search over raw labeled
/// states, for graphs with at most [`NAIVE_LIMIT`] vertices.
///
/// A state is the label of every vertex (or "not inserted") plus the set of
/// edges created so far. All insertions, joins and relabels are tried, with
/// three prunings that do not depend on the analysis behind [`exact_lcw`]:
///
/// * a join that would create a non-edge of `g` is dropped, since edges are
///   never removed,
/// * steps that leave the state unchanged are dropped,
/// * states that differ only by a renaming of labels are identified.
pub fn naive_lcw(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n == 0 {
        return Err(Error::TooFewVertices { n: 0, min: 1 });
    }
    if n > NAIVE_LIMIT {
        return Err(Error::SizeLimit { n, limit: NAIVE_LIMIT, what: "naive_lcw" });
    }
    let pair_index = |u: usize, v: usize| -> usize {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        b * (b - 1) / 2 + a
    };
    let mut target_edges = 0u32;
    for (u, v) in g.edges() {
        target_edges |= 1 << pair_index(u, v);
    }
    for k in 1..=n {
        let start = NaiveState { labels: [0; NAIVE_LIMIT], edges: 0 };
        let mut seen = HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            if s.edges == target_edges && s.labels[..n].iter().all(|&l| l != 0) {
                return Ok(k);
            }
            let mut push = |t: NaiveState| {
                let t = t.canonical(n);
                if seen.insert(t) {
                    queue.push_back(t);
                }
            };
            let used = s.labels[..n].iter().copied().max().unwrap_or(0) as usize;
            for v in 0..n {
                if s.labels[v] == 0 {
                    for l in 1..=k as u8 {
                        let mut t = s;
                        t.labels[v] = l;
                        push(t);
                    }
                }
            }
            for i in 1..=used as u8 {
                for j in 1..=used as u8 {
                    if i == j {
                        continue;
                    }
                    if i < j {
                        let mut added = 0u32;
                        for u in 0..n {
                            for v in 0..n {
                                if s.labels[u] == i && s.labels[v] == j {
                                    added |= 1 << pair_index(u, v);
                                }
                            }
                        }
                        if added & !target_edges == 0 && added & !s.edges != 0 {
                            push(NaiveState { edges: s.edges | added, ..s });
                        }
                    }
                    if s.labels[..n].contains(&i) && s.labels[..n].contains(&j) {
                        let mut t = s;
                        for l in &mut t.labels[..n] {
                            if *l == i {
                                *l = j;
                            }
                        }
                        push(t);
                    }
                }
            }
        }
    }
    unreachable!("n labels always suffice")
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct NaiveState {
    labels: [u8; NAIVE_LIMIT],
    edges: u32,
}

impl NaiveState {
    /// Renames labels in order of first occurrence.
    fn canonical(mut self, n: usize) -> Self {
        let mut rename = [0u8; NAIVE_LIMIT + 1];
        let mut next = 1;
        for l in &mut self.labels[..n] {
            if *l != 0 {
                if rename[*l as usize] == 0 {
                    rename[*l as usize] = next;
                    next += 1;
                }
                *l = rename[*l as usize];
            }
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexSet;
    use crate::qt::gen_q;
    use rand::seq::SliceRandom;
    use rand::Rng;

    fn lcw(g: &Graph) -> usize {
        exact_lcw(g, DEFAULT_BUDGET_CAP).unwrap().k
    }

    #[test]
    fn small_values() {
        assert_eq!(lcw(&Graph::complete(1).unwrap()), 1);
        assert_eq!(lcw(&Graph::path(3).unwrap()), 2);
        assert_eq!(lcw(&Graph::path(4).unwrap()), 3);
        assert_eq!(lcw(&Graph::cycle(4).unwrap()), 2);
        assert_eq!(lcw(&Graph::from_edges(3, &[(0, 1)]).unwrap()), 2);
        assert_eq!(naive_lcw(&Graph::empty(3).unwrap()).unwrap(), 1);
        assert_eq!(naive_lcw(&Graph::complete(2).unwrap()).unwrap(), 2);
        assert_eq!(naive_lcw(&Graph::path(4).unwrap()).unwrap(), 3);
        assert_eq!(naive_lcw(&Graph::cycle(4).unwrap()).unwrap(), 2);
    }

    #[test]
    fn witnesses_verify_and_match_width() {
        for g in [
            Graph::path(6).unwrap(),
            Graph::cycle(7).unwrap(),
            Graph::complete(5).unwrap(),
            gen_q(3).unwrap(),
        ] {
            let r = exact_lcw(&g, DEFAULT_BUDGET_CAP).unwrap();
            assert!(verify(&r.witness, &g).unwrap());
            assert_eq!(r.witness.width(), r.k);
            assert_eq!(r.witness.insertion_order(), r.order);
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(exact_lcw(&Graph::empty(0).unwrap(), 3), Err(Error::TooFewVertices { .. })));
        assert!(matches!(
            exact_lcw(&Graph::path(4).unwrap(), 2),
            Err(Error::BudgetExceeded { cap: 2 })
        ));
        assert!(matches!(naive_lcw(&Graph::empty(6).unwrap()), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn agrees_with_naive_on_all_labeled_graphs_up_to_four() {
        for n in 1..=4 {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            for bits in 0u32..1 << pairs.len() {
                let edges: Vec<_> =
                    pairs.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &e)| e).collect();
                let g = Graph::from_edges(n, &edges).unwrap();
                assert_eq!(lcw(&g), naive_lcw(&g).unwrap(), "{g:?}");
            }
        }
    }

    #[test]
    fn invariant_under_relabeling() {
        let mut rng = crate::corpus::seeded_rng(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..=9);
            let g = crate::corpus::random_graph(&mut rng, n, 0.5);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            assert_eq!(lcw(&g), lcw(&g.permuted(&perm).unwrap()));
        }
    }

    #[test]
    fn hereditary() {
        let mut rng = crate::corpus::seeded_rng(4);
        for _ in 0..200 {
            let n = rng.gen_range(2..=9);
            let g = crate::corpus::random_graph(&mut rng, n, 0.5);
            let s = VertexSet(rng.gen::<u64>() & g.vertices().0);
            if s.is_empty() {
                continue;
            }
            assert!(lcw(&g.induced_subgraph(s).unwrap()) <= lcw(&g));
        }
    }
}
