//! Induced-subgraph embeddings and the `Q_t` / `Q̄_s` avoidance indices.

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexSet};
use crate::io::to_graph6;
use crate::qt::{gen_coq, gen_q};

/// Injective map from pattern vertices to host vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Embedding {
    pub map: Vec<usize>,
}

impl Embedding {
    pub fn new(map: Vec<usize>) -> Self {
        Embedding { map }
    }

    /// Injective, in range, and preserving both adjacency and non-adjacency.
    pub fn is_valid(&self, pattern: &Graph, host: &Graph) -> bool {
        if self.map.len() != pattern.n() || self.map.iter().any(|&x| x >= host.n()) {
            return false;
        }
        let image = VertexSet::from_vertices(self.map.iter().copied());
        if image.len() != self.map.len() {
            return false;
        }
        (0..pattern.n()).all(|u| {
            (u + 1..pattern.n()).all(|v| pattern.adjacent(u, v) == host.adjacent(self.map[u], self.map[v]))
        })
    }
}

/// Pattern vertices in branching order: most already-ordered neighbours
/// first, then highest degree, then smallest id.
fn branching_order(pattern: &Graph) -> Vec<usize> {
    let mut order = Vec::with_capacity(pattern.n());
    let mut placed = VertexSet::EMPTY;
    while order.len() < pattern.n() {
        let v = pattern
            .vertices()
            .difference(placed)
            .iter()
            .max_by_key(|&v| {
                (pattern.neighbors(v).intersection(placed).len(), pattern.degree(v), std::cmp::Reverse(v))
            })
            .unwrap();
        order.push(v);
        placed.insert(v);
    }
    order
}

struct Matcher<'a> {
    pattern: &'a Graph,
    host: &'a Graph,
    order: Vec<usize>,
    map: Vec<usize>,
    used: VertexSet,
}

impl Matcher<'_> {
    fn search(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let p = self.order[depth];
        let all = self.host.vertices();
        let mut cand = all.difference(self.used);
        for &q in &self.order[..depth] {
            let h = self.map[q];
            let nh = self.host.neighbors(h);
            cand = if self.pattern.adjacent(p, q) {
                cand.intersection(nh)
            } else {
                cand.difference(nh)
            };
        }
        let deg = self.pattern.degree(p);
        let non_deg = self.pattern.n() - 1 - deg;
        for c in cand {
            let hd = self.host.degree(c);
            if hd < deg || self.host.n() - 1 - hd < non_deg {
                continue;
            }
            self.map[p] = c;
            self.used.insert(c);
            if self.search(depth + 1) {
                return true;
            }
            self.used.remove(c);
        }
        false
    }
}

/// Finds an induced copy of `pattern` in `host` by backtracking, or `None`.
/// Candidates are tried in ascending host order, so the witness is
/// deterministic.
pub fn induced_embed(pattern: &Graph, host: &Graph) -> Option<Embedding> {
    if pattern.n() > host.n() {
        return None;
    }
    let mut m = Matcher {
        pattern,
        host,
        order: branching_order(pattern),
        map: vec![usize::MAX; pattern.n()],
        used: VertexSet::EMPTY,
    };
    m.search(0).then(|| Embedding::new(m.map))
}

fn avoidance_index(g: &Graph, generate: fn(usize) -> crate::Result<Graph>) -> usize {
    let mut t = 1;
    loop {
        if (1usize << t) - 1 > g.n() {
            return t;
        }
        let pattern = generate(t).expect("pattern fits whenever it fits in the host");
        if induced_embed(&pattern, g).is_none() {
            return t;
        }
        t += 1;
    }
}

/// Smallest `t` such that `Q_t` is not an induced subgraph of `g`.
pub fn qt_avoidance_index(g: &Graph) -> usize {
    avoidance_index(g, gen_q)
}

/// Smallest `s` such that `Q̄_s` is not an induced subgraph of `g`.
pub fn coqt_avoidance_index(g: &Graph) -> usize {
    avoidance_index(g, gen_coq)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObstructionTag {
    Qt(usize),
    CoQt(usize),
}

/// A copy of `Q_t` or `Q̄_s` inside a host.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    pub tag: ObstructionTag,
    pub embedding: Embedding,
}

impl Obstruction {
    pub fn pattern(&self) -> Graph {
        match self.tag {
            ObstructionTag::Qt(t) => gen_q(t),
            ObstructionTag::CoQt(s) => gen_coq(s),
        }
        .expect("obstruction indices are materializable")
    }

    /// Searches `host` for the given tagged pattern.
    pub fn find(tag: ObstructionTag, host: &Graph) -> crate::Result<Option<Obstruction>> {
        let pattern = match tag {
            ObstructionTag::Qt(t) => gen_q(t)?,
            ObstructionTag::CoQt(s) => gen_coq(s)?,
        };
        Ok(induced_embed(&pattern, host).map(|embedding| Obstruction { tag, embedding }))
    }
}

/// Serializable form of an embedding together with both graphs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingWitness {
    pub pattern: String,
    pub host: String,
    pub map: Vec<usize>,
}

impl EmbeddingWitness {
    pub fn new(pattern: &Graph, host: &Graph, emb: &Embedding) -> Self {
        EmbeddingWitness { pattern: to_graph6(pattern), host: to_graph6(host), map: emb.map.clone() }
    }
}
