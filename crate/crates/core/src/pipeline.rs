//! Decomposition-driven expression building and the per-graph check of the
//! bound `lcw(G) < (m + 2)(t + s)`.
//!
//! [`build_expression`] decomposes, recurses into the modules, and combines
//! the parts with [`compose_flat`] for complete and anti-complete skeletons
//! or [`compose_prime`] for prime ones, taking the skeleton expression from
//! a [`PrimeOracle`]. Every recursion node is recorded in an audit trail.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, iso_classes_up_to};
use crate::compose::{compose_flat, compose_prime, FlatKind};
use crate::decomp::{decompose_one_stage, is_prime, SkeletonKind};
use crate::embed::{coqt_avoidance_index, induced_embed, qt_avoidance_index};
use crate::error::{Error, Result};
use crate::exact::{exact_lcw, DEFAULT_BUDGET_CAP};
use crate::expr::{verify, LcwExpression, LcwStep};
use crate::graph::{Graph, VertexSet};
use crate::io::to_graph6;
use crate::qt::{gen_coq, gen_q};

/// Supplies expressions for prime skeletons.
pub trait PrimeOracle: Sync {
    /// An expression that verifies against `g`.
    fn expression(&self, g: &Graph) -> Result<LcwExpression>;
}

/// Exact solver behind a cache keyed by the graph6 of the canonical form.
/// Cached witnesses are stored for the canonical graph and mapped back to
/// the caller's numbering, then verified before being returned.
pub struct ExactOracle {
    budget_cap: usize,
    cache: Mutex<HashMap<String, LcwExpression>>,
    log: Option<Mutex<File>>,
}

impl Default for ExactOracle {
    fn default() -> Self {
        ExactOracle::new(DEFAULT_BUDGET_CAP)
    }
}

impl ExactOracle {
    pub fn new(budget_cap: usize) -> Self {
        ExactOracle { budget_cap, cache: Mutex::new(HashMap::new()), log: None }
    }

    /// Loads `path` (one `graph6<TAB>steps` entry per line, steps separated
    /// by `;`) if it exists, and appends every new result to it.
    pub fn with_cache_file(budget_cap: usize, path: &Path) -> Result<Self> {
        let mut cache = HashMap::new();
        if path.exists() {
            for (i, line) in BufReader::new(File::open(path)?).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let (key, steps) = line
                    .split_once('\t')
                    .ok_or_else(|| Error::Parse(format!("cache line {}: missing tab", i + 1)))?;
                cache.insert(key.to_string(), LcwExpression::from_text(&steps.replace(';', "\n"))?);
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(ExactOracle { budget_cap, cache: Mutex::new(cache), log: Some(Mutex::new(file)) })
    }

    pub fn cached_entries(&self) -> usize {
        self.cache.lock().unwrap().len()
    }

    /// Exact linear clique-width through the cache.
    pub fn lcw(&self, g: &Graph) -> Result<usize> {
        Ok(self.expression(g)?.width())
    }

    fn canonical_witness(&self, key: &str, canonical: &Graph) -> Result<LcwExpression> {
        if let Some(e) = self.cache.lock().unwrap().get(key) {
            return Ok(e.clone());
        }
        let e = exact_lcw(canonical, self.budget_cap)?.witness;
        if let Some(log) = &self.log {
            let steps: Vec<String> = e.steps.iter().map(LcwStep::to_string).collect();
            writeln!(log.lock().unwrap(), "{key}\t{}", steps.join(";"))?;
        }
        self.cache.lock().unwrap().insert(key.to_string(), e.clone());
        Ok(e)
    }
}

impl PrimeOracle for ExactOracle {
    fn expression(&self, g: &Graph) -> Result<LcwExpression> {
        let (canonical, order) = canonical_form(g);
        let key = to_graph6(&canonical);
        let e = self.canonical_witness(&key, &canonical)?.map_vertices(|i| order[i]);
        if verify(&e, g)? {
            return Ok(e);
        }
        // a stale or foreign cache entry; solve directly
        Ok(exact_lcw(g, self.budget_cap)?.witness)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeKind {
    Leaf,
    Complete,
    AntiComplete,
    Prime,
}

/// One recursion node of [`build_expression`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditNode {
    pub depth: usize,
    pub kind: NodeKind,
    /// Host vertices of this node.
    pub vertices: Vec<usize>,
    /// Host vertices of each module, in skeleton order.
    pub modules: Vec<Vec<usize>>,
    pub part_widths: Vec<usize>,
    /// Oracle expression width, prime nodes only.
    pub skeleton_width: Option<usize>,
    /// Part built first, prime nodes only.
    pub x: Option<usize>,
    /// `1 + max` part width for flat nodes,
    /// `max(w_x, w_H + 1 + max_{v != x} w_v)` for prime nodes.
    pub bound: usize,
    pub width: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildResult {
    pub expression: LcwExpression,
    pub width: usize,
    /// Nodes in post-order.
    pub audit: Vec<AuditNode>,
}

/// The bound of the flat composition.
pub fn flat_bound(part_widths: &[usize]) -> usize {
    1 + part_widths.iter().copied().max().unwrap_or(0)
}

/// The bound of the prime composition with part `x` built first.
pub fn prime_bound(skeleton_width: usize, part_widths: &[usize], x: usize) -> usize {
    let others = part_widths.iter().enumerate().filter(|&(i, _)| i != x).map(|(_, &w)| w).max().unwrap_or(0);
    part_widths[x].max(skeleton_width + 1 + others)
}

/// Builds a verifying expression for `g` by recursive decomposition.
pub fn build_expression(g: &Graph, oracle: &dyn PrimeOracle) -> Result<BuildResult> {
    if g.n() == 0 {
        return Err(Error::TooFewVertices { n: 0, min: 1 });
    }
    let ids: Vec<usize> = (0..g.n()).collect();
    let mut audit = Vec::new();
    let expression = build_node(g, &ids, 0, oracle, &mut audit)?;
    debug_assert!(verify(&expression, g).unwrap_or(false));
    Ok(BuildResult { width: expression.width(), expression, audit })
}

fn build_node(
    g: &Graph,
    ids: &[usize],
    depth: usize,
    oracle: &dyn PrimeOracle,
    audit: &mut Vec<AuditNode>,
) -> Result<LcwExpression> {
    if g.n() == 1 {
        audit.push(AuditNode {
            depth,
            kind: NodeKind::Leaf,
            vertices: ids.to_vec(),
            modules: Vec::new(),
            part_widths: Vec::new(),
            skeleton_width: None,
            x: None,
            bound: 1,
            width: 1,
        });
        return Ok(LcwExpression::new(vec![LcwStep::Insert { vertex: 0, label: 1 }]));
    }
    let d = decompose_one_stage(g)?;
    let parts = d.parts(g)?;
    let mut exprs = Vec::with_capacity(parts.len());
    for (part, module) in parts.iter().zip(&d.modules) {
        let sub_ids: Vec<usize> = module.iter().map(|v| ids[v]).collect();
        exprs.push(build_node(part, &sub_ids, depth + 1, oracle, audit)?);
    }
    let part_widths: Vec<usize> = exprs.iter().map(LcwExpression::width).collect();
    let (kind, composed, skeleton_width, x, bound) = match d.kind {
        SkeletonKind::Complete | SkeletonKind::AntiComplete => {
            let (flat, node) = if d.kind == SkeletonKind::Complete {
                (FlatKind::Complete, NodeKind::Complete)
            } else {
                (FlatKind::AntiComplete, NodeKind::AntiComplete)
            };
            (node, compose_flat(flat, &exprs)?, None, None, flat_bound(&part_widths))
        }
        SkeletonKind::Prime => {
            let eh = oracle.expression(&d.skeleton).map_err(|e| Error::Oracle {
                graph6: to_graph6(&d.skeleton),
                skeleton: Box::new(d.skeleton.clone()),
                source: Box::new(e),
            })?;
            let x = widest(&part_widths);
            let bound = prime_bound(eh.width(), &part_widths, x);
            // with singleton parts the skeleton expression is already one for g
            let composed = if parts.iter().all(|p| p.n() == 1) { eh.clone() } else { compose_prime(&eh, &exprs, x)? };
            (NodeKind::Prime, composed, Some(eh.width()), Some(x), bound)
        }
    };
    // composition numbers vertices block by block in module order
    let order: Vec<usize> = d.modules.iter().flat_map(|m| m.iter()).collect();
    let expr = composed.map_vertices(|i| order[i]);
    audit.push(AuditNode {
        depth,
        kind,
        vertices: ids.to_vec(),
        modules: d.modules.iter().map(|m| m.iter().map(|v| ids[v]).collect()).collect(),
        part_widths,
        skeleton_width,
        x,
        bound,
        width: expr.width(),
    });
    Ok(expr)
}

/// First index of maximum width.
fn widest(widths: &[usize]) -> usize {
    widths.iter().enumerate().max_by_key(|&(i, &w)| (w, std::cmp::Reverse(i))).map(|(i, _)| i).unwrap()
}

/// Largest graph accepted by [`prime_profile`].
pub const PROFILE_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeProfile {
    /// Largest exact linear clique-width of a prime induced subgraph; 0 when
    /// there is none (a single vertex).
    pub m: usize,
    pub witness: Option<Graph>,
    pub witness_vertices: VertexSet,
}

/// Maximum exact linear clique-width over prime induced subgraphs with at
/// most `size_cap` vertices. Only `K_2` and `K̄_2` are prime on two
/// vertices and no graph on three is, so larger candidates are restricted
/// to vertex sets inducing a connected, co-connected graph.
pub fn prime_profile(g: &Graph, size_cap: usize, oracle: &ExactOracle) -> Result<PrimeProfile> {
    if g.n() > PROFILE_LIMIT {
        return Err(Error::SizeLimit { n: g.n(), limit: PROFILE_LIMIT, what: "prime profile" });
    }
    let mut best = PrimeProfile { m: 0, witness: None, witness_vertices: VertexSet::EMPTY };
    if g.n() >= 2 && size_cap >= 2 {
        let nonedge = (0..g.n()).flat_map(|u| (u + 1..g.n()).map(move |v| (u, v))).find(|&(u, v)| !g.adjacent(u, v));
        if let Some((u, v)) = nonedge {
            best = PrimeProfile { m: 1, witness: Some(Graph::empty(2)?), witness_vertices: VertexSet::from_vertices([u, v]) };
        }
        if let Some(&(u, v)) = g.edges().first() {
            best = PrimeProfile { m: 2, witness: Some(Graph::complete(2)?), witness_vertices: VertexSet::from_vertices([u, v]) };
        }
    }
    let cap = size_cap.min(g.n());
    let mut by_size: Vec<Vec<u64>> = vec![Vec::new(); cap + 1];
    for mask in 0u64..1 << g.n() {
        let k = mask.count_ones() as usize;
        if (4..=cap).contains(&k) {
            by_size[k].push(mask);
        }
    }
    for masks in by_size.iter().skip(4) {
        for &mask in masks {
            let s = VertexSet(mask);
            if !g.is_connected_within(s) || !g.is_co_connected_within(s) {
                continue;
            }
            let h = g.induced_subgraph(s)?;
            if !is_prime(&h)? {
                continue;
            }
            let w = oracle.lcw(&h)?;
            if w > best.m {
                best = PrimeProfile { m: w, witness: Some(h), witness_vertices: s };
            }
        }
    }
    Ok(best)
}

/// Exact linear clique-width is computed up to this many vertices;
/// larger graphs report the builder width as an upper bound.
pub const THEOREM_EXACT_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub graph6: String,
    pub n: usize,
    pub m: usize,
    /// Largest prime induced subgraph size considered for `m`.
    pub profile_cap: usize,
    /// The prime induced subgraph attaining `m`, as graph6.
    pub prime_witness: Option<String>,
    /// Smallest `t` with `Q_t` not induced in the graph.
    pub t: usize,
    /// Smallest `s` with `Q̄_s` not induced in the graph.
    pub s: usize,
    pub bound: usize,
    pub lcw_value: usize,
    /// False when `lcw_value` is only the builder's upper bound.
    pub lcw_exact: bool,
    pub holds: bool,
}

/// Computes `m`, the avoidance indices `t` and `s`, and compares the linear
/// clique-width against `(m + 2)(t + s)`. The graph excludes `Q_t` and
/// `Q̄_s` by definition of the indices, so with an exact value the
/// comparison must come out strict.
pub fn theorem_check(g: &Graph, oracle: &ExactOracle) -> Result<TheoremReport> {
    theorem_check_capped(g, g.n(), oracle)
}

/// [`theorem_check`] with `m` taken over prime induced subgraphs of at most
/// `size_cap` vertices; below `g.n()` this can only lower `m`.
pub fn theorem_check_capped(g: &Graph, size_cap: usize, oracle: &ExactOracle) -> Result<TheoremReport> {
    if g.n() == 0 {
        return Err(Error::TooFewVertices { n: 0, min: 1 });
    }
    let profile = prime_profile(g, size_cap, oracle)?;
    let t = qt_avoidance_index(g);
    let s = coqt_avoidance_index(g);
    let bound = (profile.m + 2) * (t + s);
    let exact = if g.n() <= THEOREM_EXACT_LIMIT {
        match oracle.lcw(g) {
            Ok(k) => Some(k),
            Err(Error::BudgetExceeded { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let (lcw_value, lcw_exact) = match exact {
        Some(k) => (k, true),
        None => (build_expression(g, oracle)?.width, false),
    };
    Ok(TheoremReport {
        graph6: to_graph6(g),
        n: g.n(),
        m: profile.m,
        profile_cap: size_cap.min(g.n()),
        prime_witness: profile.witness.as_ref().map(to_graph6),
        t,
        s,
        bound,
        lcw_value,
        lcw_exact,
        holds: lcw_value < bound,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerateReport {
    pub max_n: usize,
    pub q2_free_graphs: usize,
    pub q2_free_max_lcw: usize,
    pub p3_free_graphs: usize,
    pub p3_free_max_lcw: usize,
    /// graph6 strings of graphs breaking either fact.
    pub violations: Vec<String>,
}

impl DegenerateReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Non-adjacency, read as a relation including equality, is transitive.
fn is_complete_multipartite(g: &Graph) -> bool {
    is_union_of_cliques(&g.complement())
}

fn is_union_of_cliques(g: &Graph) -> bool {
    (0..g.n()).all(|v| {
        let closed = g.neighbors(v).union(VertexSet::singleton(v));
        g.neighbors(v).iter().all(|u| g.neighbors(u).union(VertexSet::singleton(u)) == closed)
    })
}

/// Over one representative of every graph on `1..=max_n` vertices: graphs
/// without an induced `Q_2` are complete multipartite of linear clique-width
/// at most 2, and graphs without an induced `Q̄_2 = P_3` are disjoint unions
/// of cliques of linear clique-width at most 3.
pub fn degenerate_facts_check(max_n: usize, oracle: &ExactOracle) -> Result<DegenerateReport> {
    let q2 = gen_q(2)?;
    let p3 = gen_coq(2)?;
    let mut report = DegenerateReport { max_n, ..Default::default() };
    for classes in iso_classes_up_to(max_n)?.iter().skip(1) {
        for g in classes {
            if induced_embed(&q2, g).is_none() {
                report.q2_free_graphs += 1;
                let k = oracle.lcw(g)?;
                report.q2_free_max_lcw = report.q2_free_max_lcw.max(k);
                if !is_complete_multipartite(g) || k > 2 {
                    report.violations.push(to_graph6(g));
                }
            }
            if induced_embed(&p3, g).is_none() {
                report.p3_free_graphs += 1;
                let k = oracle.lcw(g)?;
                report.p3_free_max_lcw = report.p3_free_max_lcw.max(k);
                if !is_union_of_cliques(g) || k > 3 {
                    report.violations.push(to_graph6(g));
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{random_substitution_graph, seeded_rng};
    use crate::qt::gen_q;

    fn oracle() -> ExactOracle {
        ExactOracle::default()
    }

    #[test]
    fn builder_examples() {
        let o = oracle();
        let e5 = Graph::empty(5).unwrap();
        let b = build_expression(&e5, &o).unwrap();
        assert_eq!(b.width, 1);
        assert!(verify(&b.expression, &e5).unwrap());

        let p4 = Graph::path(4).unwrap();
        let b = build_expression(&p4, &o).unwrap();
        assert_eq!(b.width, 3);
        assert_eq!(b.audit.last().unwrap().kind, NodeKind::Prime);

        let q3 = gen_q(3).unwrap();
        let b = build_expression(&q3, &o).unwrap();
        assert!(verify(&b.expression, &q3).unwrap());
        let k = exact_lcw(&q3, 12).unwrap().k;
        assert!(b.width >= k);
        let sub = q3.induced_subgraph(VertexSet::from_vertices([0, 1, 2, 3])).unwrap();
        assert!(b.width <= 1 + build_expression(&sub, &o).unwrap().width);
    }

    #[test]
    fn audits_follow_formulas() {
        let o = oracle();
        let mut rng = seeded_rng(21);
        for n in 1..=16 {
            let g = random_substitution_graph(&mut rng, n, 6);
            let b = build_expression(&g, &o).unwrap();
            assert!(verify(&b.expression, &g).unwrap());
            for node in &b.audit {
                let expected = match node.kind {
                    NodeKind::Leaf => 1,
                    NodeKind::Complete | NodeKind::AntiComplete => flat_bound(&node.part_widths),
                    NodeKind::Prime => prime_bound(node.skeleton_width.unwrap(), &node.part_widths, node.x.unwrap()),
                };
                assert_eq!(node.bound, expected);
                assert!(node.width <= node.bound);
            }
            assert_eq!(b.audit.last().unwrap().vertices.len(), n);
        }
    }

    #[test]
    fn oracle_maps_cached_witnesses() {
        let o = oracle();
        let p4 = Graph::path(4).unwrap();
        let relabeled = p4.permuted(&[2, 0, 3, 1]).unwrap();
        assert!(verify(&o.expression(&p4).unwrap(), &p4).unwrap());
        assert!(verify(&o.expression(&relabeled).unwrap(), &relabeled).unwrap());
        assert_eq!(o.cached_entries(), 1);
    }

    #[test]
    fn cache_file_round_trip() {
        let dir = std::env::temp_dir().join(format!("lcw-oracle-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cache.tsv");
        let _ = std::fs::remove_file(&path);
        let c5 = Graph::cycle(5).unwrap();
        {
            let o = ExactOracle::with_cache_file(12, &path).unwrap();
            // both solvers give 4 for the 5-cycle
            assert_eq!(o.lcw(&c5).unwrap(), 4);
        }
        let o = ExactOracle::with_cache_file(12, &path).unwrap();
        assert_eq!(o.cached_entries(), 1);
        assert!(verify(&o.expression(&c5).unwrap(), &c5).unwrap());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn profile_examples() {
        let o = oracle();
        let p = prime_profile(&Graph::path(4).unwrap(), 4, &o).unwrap();
        assert_eq!(p.m, 3);
        assert_eq!(p.witness.unwrap(), Graph::path(4).unwrap());
        let p = prime_profile(&Graph::complete(5).unwrap(), 5, &o).unwrap();
        assert_eq!((p.m, p.witness.unwrap()), (2, Graph::complete(2).unwrap()));
        let p = prime_profile(&Graph::empty(3).unwrap(), 3, &o).unwrap();
        assert_eq!((p.m, p.witness.unwrap()), (1, Graph::empty(2).unwrap()));
        assert_eq!(prime_profile(&Graph::cycle(4).unwrap(), 4, &o).unwrap().m, 2);
    }

    #[test]
    fn theorem_examples() {
        let o = oracle();
        let r = theorem_check(&Graph::path(4).unwrap(), &o).unwrap();
        assert_eq!((r.m, r.t, r.s, r.bound, r.lcw_value), (3, 3, 3, 30, 3));
        assert!(r.holds && r.lcw_exact);
        let r = theorem_check(&Graph::cycle(4).unwrap(), &o).unwrap();
        assert_eq!((r.m, r.t, r.s, r.bound, r.lcw_value), (2, 2, 3, 20, 2));
        assert!(r.holds);
        let r = theorem_check(&gen_q(4).unwrap(), &o).unwrap();
        assert!(r.holds && r.lcw_exact);
        assert_eq!(r.t, 5);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"holds\":true"));
    }

    #[test]
    fn degenerate_facts_small() {
        let r = degenerate_facts_check(5, &oracle()).unwrap();
        assert!(r.holds(), "{:?}", r.violations);
        assert!(r.q2_free_graphs > 0 && r.p3_free_graphs > 0);
        assert!(r.q2_free_max_lcw <= 2 && r.p3_free_max_lcw <= 3);
    }
}
