//! Seeded random graphs and expressions, and exhaustive enumerations.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomp::is_prime;
use crate::expr::{Label, LcwExpression, LcwStep};
use crate::graph::Graph;

pub type CorpusRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `G(n, p)`.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n).expect("n within the vertex limit");
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// A well-formed expression on `1..=max_vertices` vertices using labels
/// `1..=max_label`, inserting vertices in random order with random joins and
/// relabels in between.
pub fn random_expression<R: Rng>(rng: &mut R, max_vertices: usize, max_label: Label) -> LcwExpression {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let max_label = max_label.max(1);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut steps = Vec::new();
    for v in order {
        steps.push(LcwStep::Insert { vertex: v, label: rng.gen_range(1..=max_label) });
        if max_label < 2 {
            continue;
        }
        for _ in 0..rng.gen_range(0..=2) {
            let a = rng.gen_range(1..=max_label);
            let mut b = rng.gen_range(1..max_label);
            if b >= a {
                b += 1;
            }
            steps.push(if rng.gen_bool(0.6) { LcwStep::JoinLabels(a, b) } else { LcwStep::Relabel { from: a, to: b } });
        }
    }
    LcwExpression::new(steps)
}

/// Every labelled graph on `n` vertices (`2^(n(n-1)/2)` of them).
pub fn all_labeled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
    assert!(pairs.len() < 40, "too many labelled graphs to enumerate");
    (0u64..1 << pairs.len()).map(move |bits| {
        let mut g = Graph::empty(n).unwrap();
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if bits >> i & 1 == 1 {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    })
}

/// A random prime graph on `n >= 4` vertices, by rejection sampling.
pub fn random_prime<R: Rng>(rng: &mut R, n: usize) -> Graph {
    loop {
        let p = rng.gen_range(0.25..0.75);
        let g = random_graph(rng, n, p);
        if is_prime(&g).unwrap_or(false) {
            return g;
        }
    }
}

/// A random graph on exactly `n` vertices assembled by unions, joins and
/// substitutions into prime skeletons of at most `max_prime` vertices. All
/// prime induced pieces stay small, so exact solvers handle every skeleton
/// met during decomposition.
pub fn random_substitution_graph<R: Rng>(rng: &mut R, n: usize, max_prime: usize) -> Graph {
    assert!(n >= 1);
    if n == 1 {
        return Graph::complete(1).unwrap();
    }
    let use_prime = n >= 4 && max_prime >= 4 && rng.gen_bool(0.4);
    let k = if use_prime { rng.gen_range(4..=max_prime.min(n)) } else { rng.gen_range(2..=n.min(4)) };
    let sizes = random_composition(rng, n, k);
    let parts: Vec<Graph> = sizes.iter().map(|&s| random_substitution_graph(rng, s, max_prime)).collect();
    let skeleton = if use_prime {
        random_prime(rng, k)
    } else if rng.gen_bool(0.5) {
        Graph::complete(k).unwrap()
    } else {
        Graph::empty(k).unwrap()
    };
    let g = skeleton.inflation(&parts).unwrap().graph;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    g.permuted(&perm).unwrap()
}

/// `n` split into `k` positive parts uniformly at random.
fn random_composition<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(k - 1).collect();
    cuts.sort_unstable();
    cuts.push(n);
    let mut prev = 0;
    cuts.into_iter()
        .map(|c| {
            let s = c - prev;
            prev = c;
            s
        })
        .collect()
}
