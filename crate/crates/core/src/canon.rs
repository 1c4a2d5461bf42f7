//! Canonical labelling for small graphs and isomorphism-class enumeration.
//!
//! Equitable refinement followed by individualisation of the first
//! non-singleton cell; the leaf with the smallest adjacency rows wins.
//! Branches on twins of an already tried vertex are skipped, since swapping
//! twins is an automorphism.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

type Partition = Vec<Vec<usize>>;

fn refine(g: &Graph, mut cells: Partition) -> Partition {
    loop {
        let masks: Vec<VertexSet> = cells.iter().map(|c| VertexSet::from_vertices(c.iter().copied())).collect();
        let mut next = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<usize>, usize)> = cell
                .iter()
                .map(|&v| (masks.iter().map(|&m| g.neighbors(v).intersection(m).len()).collect(), v))
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|&(_, v)| v).collect());
                    start = i;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn twins(g: &Graph, u: usize, v: usize) -> bool {
    let pair = VertexSet::from_vertices([u, v]);
    g.neighbors(u).difference(pair) == g.neighbors(v).difference(pair)
}

struct Search<'a> {
    g: &'a Graph,
    best: Option<(Vec<u64>, Vec<usize>)>,
}

impl Search<'_> {
    fn run(&mut self, cells: Partition) {
        let cells = refine(self.g, cells);
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
            let rows = self.g.permuted(&order).expect("order is a permutation").rows().to_vec();
            if self.best.as_ref().is_none_or(|(b, _)| rows < *b) {
                self.best = Some((rows, order));
            }
            return;
        };
        let cell = cells[target].clone();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cell {
            if tried.iter().any(|&u| twins(self.g, u, v)) {
                continue;
            }
            tried.push(v);
            let mut next = cells.clone();
            let rest: Vec<usize> = cell.iter().copied().filter(|&u| u != v).collect();
            next.splice(target..=target, [vec![v], rest]);
            self.run(next);
        }
    }
}

/// Canonical relabelling of `g`: returns the canonical graph and `order`
/// with canonical vertex `i` being original vertex `order[i]`. Isomorphic
/// graphs get identical canonical graphs.
pub fn canonical_form(g: &Graph) -> (Graph, Vec<usize>) {
    if g.n() == 0 {
        return (g.clone(), Vec::new());
    }
    let mut s = Search { g, best: None };
    s.run(vec![(0..g.n()).collect()]);
    let (_, order) = s.best.expect("at least one leaf");
    (g.permuted(&order).expect("order is a permutation"), order)
}

pub fn canonical_graph(g: &Graph) -> Graph {
    canonical_form(g).0
}

/// Largest `n` accepted by [`iso_classes`].
pub const ISO_CLASS_LIMIT: usize = 10;

/// One canonical representative per isomorphism class on `n` vertices,
/// generated by adding a vertex with every neighbourhood to each class on
/// `n - 1` vertices. Sorted by adjacency rows.
pub fn iso_classes(n: usize) -> Result<Vec<Graph>> {
    if n > ISO_CLASS_LIMIT {
        return Err(Error::SizeLimit { n, limit: ISO_CLASS_LIMIT, what: "isomorphism class enumeration" });
    }
    let mut level = vec![Graph::empty(0)?];
    for k in 1..=n {
        level = extend(&level, k)?;
    }
    Ok(level)
}

/// All classes on `0..=n` vertices, indexed by vertex count.
pub fn iso_classes_up_to(n: usize) -> Result<Vec<Vec<Graph>>> {
    if n > ISO_CLASS_LIMIT {
        return Err(Error::SizeLimit { n, limit: ISO_CLASS_LIMIT, what: "isomorphism class enumeration" });
    }
    let mut out = vec![vec![Graph::empty(0)?]];
    for k in 1..=n {
        let next = extend(&out[k - 1], k)?;
        out.push(next);
    }
    Ok(out)
}

fn extend(prev: &[Graph], k: usize) -> Result<Vec<Graph>> {
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut out = Vec::new();
    for base in prev {
        for mask in 0u64..1 << (k - 1) {
            let mut rows = base.rows().to_vec();
            for (v, row) in rows.iter_mut().enumerate() {
                *row |= (mask >> v & 1) << (k - 1);
            }
            rows.push(mask);
            let g = canonical_graph(&Graph::from_rows(rows)?);
            if seen.insert(g.rows().to_vec()) {
                out.push(g);
            }
        }
    }
    out.sort_by(|a, b| a.rows().cmp(b.rows()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{all_labeled_graphs, random_graph, seeded_rng};
    use rand::seq::SliceRandom;
    use rand::Rng;

    #[test]
    fn class_counts() {
        let counts: Vec<usize> = iso_classes_up_to(7).unwrap().iter().map(Vec::len).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34, 156, 1044]);
    }

    #[test]
    fn canonical_is_invariant() {
        let mut rng = seeded_rng(5);
        for _ in 0..500 {
            let n = rng.gen_range(1..=14);
            let p = rng.gen_range(0.0..1.0);
            let g = random_graph(&mut rng, n, p);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let h = g.permuted(&perm).unwrap();
            let (cg, order) = canonical_form(&g);
            assert_eq!(cg, canonical_graph(&h));
            assert_eq!(g.permuted(&order).unwrap(), cg);
        }
    }

    #[test]
    fn separates_classes() {
        // labeled graphs on 5 vertices fall into exactly 34 canonical forms
        let forms: HashSet<Vec<u64>> = all_labeled_graphs(5).map(|g| canonical_graph(&g).rows().to_vec()).collect();
        assert_eq!(forms.len(), 34);
    }

    #[test]
    fn vertex_transitive_graphs() {
        let c = Graph::cycle(10).unwrap();
        let mut rev: Vec<usize> = (0..10).rev().collect();
        rev.rotate_left(3);
        assert_eq!(canonical_graph(&c), canonical_graph(&c.permuted(&rev).unwrap()));
        assert_eq!(canonical_graph(&Graph::complete(12).unwrap()), Graph::complete(12).unwrap());
    }
}
