//! Modules and the first stage of modular decomposition.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::io::to_graph6;

/// Every vertex outside `m` sees all of `m` or none of it.
pub fn is_module(g: &Graph, m: VertexSet) -> bool {
    g.vertices().difference(m).iter().all(|v| {
        let seen = g.neighbors(v).intersection(m);
        seen.is_empty() || seen == m
    })
}

/// Smallest module containing `s`: keep absorbing vertices that split it.
pub fn module_closure(g: &Graph, s: VertexSet) -> VertexSet {
    let mut m = s;
    loop {
        let splitters: VertexSet = g
            .vertices()
            .difference(m)
            .iter()
            .filter(|&v| {
                let seen = g.neighbors(v).intersection(m);
                !seen.is_empty() && seen != m
            })
            .collect();
        if splitters.is_empty() {
            return m;
        }
        m = m.union(splitters);
    }
}

fn check_min_two(g: &Graph) -> Result<()> {
    if g.n() < 2 {
        Err(Error::TooFewVertices { n: g.n(), min: 2 })
    } else {
        Ok(())
    }
}

/// Only trivial modules. `K_2` and `K̄_2` count as prime.
pub fn is_prime(g: &Graph) -> Result<bool> {
    check_min_two(g)?;
    let all = g.vertices();
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if module_closure(g, VertexSet::from_vertices([u, v])) != all {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Size limit of [`brute_force_modules`].
pub const BRUTE_FORCE_LIMIT: usize = 15;

/// All modules, by checking every subset.
pub fn brute_force_modules(g: &Graph) -> Result<Vec<VertexSet>> {
    if g.n() > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeLimit { n: g.n(), limit: BRUTE_FORCE_LIMIT, what: "brute-force module enumeration" });
    }
    Ok((0u64..1 << g.n()).map(VertexSet).filter(|&m| is_module(g, m)).collect())
}

fn overlaps(a: VertexSet, b: VertexSet) -> bool {
    !a.intersection(b).is_empty() && !a.is_subset(b) && !b.is_subset(a)
}

/// Maximal proper strong modules from the full module list, sorted by
/// smallest member. A module is strong when it overlaps no other module.
pub fn brute_force_maximal_strong_modules(g: &Graph) -> Result<Vec<VertexSet>> {
    check_min_two(g)?;
    let all = brute_force_modules(g)?;
    let strong: Vec<VertexSet> = all
        .iter()
        .copied()
        .filter(|&m| !m.is_empty() && m != g.vertices())
        .filter(|&m| all.iter().all(|&o| !overlaps(m, o)))
        .collect();
    let mut maximal: Vec<VertexSet> = strong
        .iter()
        .copied()
        .filter(|&m| strong.iter().all(|&o| o == m || !m.is_subset(o)))
        .collect();
    maximal.sort_by_key(|m| m.first());
    Ok(maximal)
}

/// Maximal proper modules of a graph that is connected and co-connected.
/// These are pairwise disjoint; the one containing `v` is the union of all
/// proper pair closures through `v`.
fn maximal_proper_modules(g: &Graph) -> Vec<VertexSet> {
    let all = g.vertices();
    let mut left = all;
    let mut out = Vec::new();
    while let Some(v) = left.first() {
        let mut m = VertexSet::singleton(v);
        for u in all.iter().filter(|&u| u != v) {
            let c = module_closure(g, VertexSet::from_vertices([u, v]));
            if c != all {
                m = m.union(c);
            }
        }
        out.push(m);
        left = left.difference(m);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SkeletonKind {
    Complete,
    AntiComplete,
    Prime,
}

/// One stage of modular decomposition: `g = skeleton[g[modules[0]], ..]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonDecomposition {
    pub kind: SkeletonKind,
    pub skeleton: Graph,
    /// Partition of the host vertices, ordered by smallest member.
    pub modules: Vec<VertexSet>,
    /// Host vertex to skeleton vertex.
    pub block_of: Vec<usize>,
}

/// Components if disconnected, co-components if the complement is
/// disconnected, otherwise the maximal proper strong modules over a prime
/// skeleton on at least four vertices.
pub fn decompose_one_stage(g: &Graph) -> Result<SkeletonDecomposition> {
    check_min_two(g)?;
    let (kind, mut modules) = if !g.is_connected() {
        (SkeletonKind::AntiComplete, g.components())
    } else if !g.is_co_connected_within(g.vertices()) {
        (SkeletonKind::Complete, g.co_components())
    } else {
        (SkeletonKind::Prime, maximal_proper_modules(g))
    };
    modules.sort_by_key(|m| m.first());
    let reps: VertexSet = modules.iter().map(|m| m.first().unwrap()).collect();
    let skeleton = g.induced_subgraph(reps)?;
    let mut block_of = vec![0; g.n()];
    for (b, m) in modules.iter().enumerate() {
        for v in *m {
            block_of[v] = b;
        }
    }
    debug_assert!(kind != SkeletonKind::Prime || skeleton.n() >= 4);
    Ok(SkeletonDecomposition { kind, skeleton, modules, block_of })
}

impl SkeletonDecomposition {
    /// Induced subgraphs on the modules, in module order.
    pub fn parts(&self, g: &Graph) -> Result<Vec<Graph>> {
        self.modules.iter().map(|&m| g.induced_subgraph(m)).collect()
    }

    /// Inflates the skeleton with `parts` and renumbers the result back onto
    /// the host ids, so `reconstruct(&parts(g)) == g`.
    pub fn reconstruct(&self, parts: &[Graph]) -> Result<Graph> {
        let inflated = self.skeleton.inflation(parts)?.graph;
        let order: Vec<usize> = self.modules.iter().flat_map(|m| m.iter()).collect();
        if order.len() != inflated.n() {
            return Err(Error::InvalidArgument("part sizes do not match the modules".into()));
        }
        // inflated vertex i is host vertex order[i]
        let mut back = vec![0; order.len()];
        for (i, &v) in order.iter().enumerate() {
            back[v] = i;
        }
        inflated.permuted(&back)
    }

    pub fn to_serial(&self) -> DecompositionJson {
        DecompositionJson {
            kind: self.kind,
            skeleton: to_graph6(&self.skeleton),
            modules: self.modules.iter().map(|m| m.to_vec()).collect(),
        }
    }
}

/// JSON shape of a [`SkeletonDecomposition`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub kind: SkeletonKind,
    pub skeleton: String,
    pub modules: Vec<Vec<usize>>,
}
