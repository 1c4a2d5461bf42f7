//! Builder width against (m+2)(t+s) on graphs excluding `Q_3` and `Q̄_3`,
//! assembled from small primes. `m` is read off the decomposition: every
//! prime induced subgraph sits inside one prime skeleton, so the profile of
//! the skeletons gives `m` for the whole graph.

use lcw_core::corpus::{random_substitution_graph, seeded_rng};
use lcw_core::embed::{coqt_avoidance_index, qt_avoidance_index};
use lcw_core::pipeline::{build_expression, prime_profile, ExactOracle, NodeKind};
use lcw_core::{Graph, VertexSet};
use rand::Rng;

/// `m` from the prime skeletons of the build, plus the two-vertex primes.
fn m_from_construction(g: &Graph, oracle: &ExactOracle) -> usize {
    let b = build_expression(g, oracle).unwrap();
    let mut m = if g.edge_count() > 0 {
        2
    } else if g.n() >= 2 {
        1
    } else {
        0
    };
    for node in b.audit.iter().filter(|n| n.kind == NodeKind::Prime) {
        let reps: VertexSet = node.modules.iter().map(|module| module[0]).collect();
        let skeleton = g.induced_subgraph(reps).unwrap();
        m = m.max(prime_profile(&skeleton, skeleton.n(), oracle).unwrap().m);
    }
    m
}

#[test]
fn construction_m_matches_profile() {
    let oracle = ExactOracle::default();
    let mut rng = seeded_rng(31);
    for _ in 0..300 {
        let n = rng.gen_range(1..=12);
        let g = random_substitution_graph(&mut rng, n, 6);
        assert_eq!(m_from_construction(&g, &oracle), prime_profile(&g, n, &oracle).unwrap().m);
    }
}

#[test]
fn builder_width_within_bound_on_q3_free_graphs() {
    let oracle = ExactOracle::default();
    let mut rng = seeded_rng(32);
    let mut kept = 0;
    let mut worst = 0.0f64;
    let mut over = Vec::new();
    for _ in 0..3000 {
        let n = rng.gen_range(4..=20);
        let g = random_substitution_graph(&mut rng, n, 6);
        let (t, s) = (qt_avoidance_index(&g), coqt_avoidance_index(&g));
        if t > 3 || s > 3 {
            continue;
        }
        kept += 1;
        let m = m_from_construction(&g, &oracle);
        let bound = (m + 2) * (t + s);
        let width = build_expression(&g, &oracle).unwrap().width;
        worst = worst.max(width as f64 / bound as f64);
        if width >= bound {
            over.push(lcw_core::io::to_graph6(&g));
        }
    }
    println!("builder bound: {kept} graphs excluding Q_3 and co-Q_3, max width/bound {worst:.3}, {} at or over", over.len());
    assert!(kept >= 100, "too few graphs kept: {kept}");
    assert!(over.is_empty(), "builder width reached (m+2)(t+s) on {over:?}");
}
