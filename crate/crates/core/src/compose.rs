//! Building expressions for inflations out of expressions for the skeleton
//! and for the parts.
//!
//! All results use the vertex numbering of [`Graph::inflation`]: the block of
//! skeleton vertex `v` occupies a contiguous id range, blocks in skeleton
//! order.
//!
//! [`Graph::inflation`]: crate::graph::Graph::inflation

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{evaluate, Label, LcwExpression, LcwStep};

/// Skeleton shape for [`compose_flat`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FlatKind {
    Complete,
    AntiComplete,
}

/// Validates the parts and returns the vertex offset of every block.
fn part_offsets(parts: &[LcwExpression]) -> Result<Vec<usize>> {
    let mut offsets = Vec::with_capacity(parts.len());
    let mut acc = 0;
    for (i, p) in parts.iter().enumerate() {
        let n = evaluate(p)?.graph.n();
        if n == 0 {
            return Err(Error::EmptyPart(i));
        }
        offsets.push(acc);
        acc += n;
    }
    Ok(offsets)
}

/// Maps the labels of `part` onto `base + 1 ..= base + width(part)`.
fn pool_map(part: &LcwExpression, base: Label) -> HashMap<Label, Label> {
    part.labels().into_iter().zip(base + 1..).collect()
}

/// Appends the steps of `part` with shifted vertex ids and remapped labels.
fn emit_part(
    out: &mut Vec<LcwStep>,
    part: &LcwExpression,
    offset: usize,
    labels: &HashMap<Label, Label>,
) {
    let shifted = part.map_vertices(|v| v + offset).map_labels(|l| labels[&l]);
    out.extend(shifted.steps);
}

fn sorted_values(map: &HashMap<Label, Label>) -> Vec<Label> {
    let mut v: Vec<Label> = map.values().copied().collect();
    v.sort_unstable();
    v
}

/// Follows the skeleton expression and replaces every insertion of skeleton
/// vertex `v` with a full construction of `parts[v]` on a shared label pool,
/// after which the whole block is relabeled to `v`'s label.
///
/// Width is at most `width(skeleton) + max width(parts)`.
pub fn compose_inflation(skeleton: &LcwExpression, parts: &[LcwExpression]) -> Result<LcwExpression> {
    let h = evaluate(skeleton)?.graph;
    if h.n() != parts.len() {
        return Err(Error::PartCountMismatch { expected: h.n(), found: parts.len() });
    }
    let offsets = part_offsets(parts)?;
    let skeleton = skeleton.compact_labels();
    let base = skeleton.width() as Label;
    let mut out = Vec::new();
    for &step in &skeleton.steps {
        match step {
            LcwStep::Insert { vertex, label } => {
                let pool = pool_map(&parts[vertex], base);
                emit_part(&mut out, &parts[vertex], offsets[vertex], &pool);
                for p in sorted_values(&pool) {
                    out.push(LcwStep::Relabel { from: p, to: label });
                }
            }
            other => out.push(other),
        }
    }
    Ok(LcwExpression::new(out))
}

/// Expression for the join (`Complete`) or disjoint union (`AntiComplete`)
/// of the parts, in order, using one reserved label `1` as an accumulator.
///
/// For `Complete`, once a part is finished each of its labels is joined to
/// the accumulator and then everything is moved into it. For
/// `AntiComplete` the part is only moved. In the anti-complete case a label
/// that a part never joins or relabels is written straight into the
/// accumulator, so parts made of isolated vertices need no relabel at all.
///
/// Width is at most `1 + max width(parts)`.
pub fn compose_flat(kind: FlatKind, parts: &[LcwExpression]) -> Result<LcwExpression> {
    if parts.is_empty() {
        return Err(Error::InvalidArgument("compose_flat needs at least one part".into()));
    }
    const SINK: Label = 1;
    let offsets = part_offsets(parts)?;
    let mut out = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        let mut map = pool_map(part, SINK);
        if kind == FlatKind::AntiComplete {
            for l in crate::expr::sink_labels(part) {
                map.insert(l, SINK);
            }
        }
        emit_part(&mut out, part, offsets[i], &map);
        let mut pool = sorted_values(&map);
        pool.dedup();
        pool.retain(|&p| p != SINK);
        if kind == FlatKind::Complete && i > 0 {
            for &p in &pool {
                out.push(LcwStep::JoinLabels(p, SINK));
            }
        }
        for &p in &pool {
            out.push(LcwStep::Relabel { from: p, to: SINK });
        }
    }
    Ok(LcwExpression::new(out))
}

/// Rewrites `expr` so that it starts by inserting `v` with a fresh label
/// which `v` keeps to the end.
///
/// The original steps are replayed while tracking the label `v` would hold;
/// relabels skip `v`, and every join touching that label is repeated with
/// the fresh label. Width grows by at most one.
pub fn reorder_front(expr: &LcwExpression, v: usize) -> Result<LcwExpression> {
    evaluate(expr)?;
    if !expr.insertion_order().contains(&v) {
        return Err(Error::VertexNotInserted(v));
    }
    let fresh = expr.max_label() + 1;
    let mut out = vec![LcwStep::Insert { vertex: v, label: fresh }];
    let mut would_be: Option<Label> = None;
    for &step in &expr.steps {
        match step {
            LcwStep::Insert { vertex, label } if vertex == v => would_be = Some(label),
            LcwStep::JoinLabels(i, j) => {
                out.push(step);
                if would_be == Some(i) {
                    out.push(LcwStep::JoinLabels(fresh, j));
                } else if would_be == Some(j) {
                    out.push(LcwStep::JoinLabels(fresh, i));
                }
            }
            LcwStep::Relabel { from, to } => {
                out.push(step);
                if would_be == Some(from) {
                    would_be = Some(to);
                }
            }
            other => out.push(other),
        }
    }
    Ok(LcwExpression::new(out))
}

/// Inflation expression that builds the widest part first.
///
/// The skeleton expression is reordered to insert `x` first. Part `x` is
/// built on its own labels and collapsed into `x`'s label; the remaining
/// parts follow the reordered skeleton on a shared pool, reusing the labels
/// part `x` released. Width is at most
/// `max(width(parts[x]), width(skeleton) + 1 + max_{v != x} width(parts[v]))`.
pub fn compose_prime(skeleton: &LcwExpression, parts: &[LcwExpression], x: usize) -> Result<LcwExpression> {
    let h = evaluate(skeleton)?.graph;
    if h.n() != parts.len() {
        return Err(Error::PartCountMismatch { expected: h.n(), found: parts.len() });
    }
    if x >= parts.len() {
        return Err(Error::VertexNotInserted(x));
    }
    let widths: Vec<usize> = parts.iter().map(LcwExpression::width).collect();
    let (widest, &w_max) = widths
        .iter()
        .enumerate()
        .max_by_key(|&(i, w)| (*w, std::cmp::Reverse(i)))
        .expect("skeleton has at least one vertex");
    if widths[x] < w_max {
        return Err(Error::NotWidestPart { x, width_x: widths[x], widest, width_widest: w_max });
    }
    let offsets = part_offsets(parts)?;

    // Reordered skeleton: x's private label becomes 1, the rest 2..=w_H+1.
    let reordered = reorder_front(skeleton, x)?;
    let private = reordered.max_label();
    let mut skel_map: HashMap<Label, Label> = HashMap::from([(private, 1)]);
    for (l, new) in skeleton.labels().into_iter().zip(2..) {
        skel_map.insert(l, new);
    }
    let reordered = reordered.map_labels(|l| skel_map[&l]);
    let base = skeleton.width() as Label + 1;

    let mut out = Vec::new();
    let first = pool_map(&parts[x], 0);
    emit_part(&mut out, &parts[x], offsets[x], &first);
    for p in sorted_values(&first) {
        if p != 1 {
            out.push(LcwStep::Relabel { from: p, to: 1 });
        }
    }
    for &step in &reordered.steps[1..] {
        match step {
            LcwStep::Insert { vertex, label } => {
                let pool = pool_map(&parts[vertex], base);
                emit_part(&mut out, &parts[vertex], offsets[vertex], &pool);
                for p in sorted_values(&pool) {
                    out.push(LcwStep::Relabel { from: p, to: label });
                }
            }
            other => out.push(other),
        }
    }
    Ok(LcwExpression::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{random_expression, seeded_rng};
    use crate::exact::exact_lcw;
    use crate::expr::{sink_labels, verify};
    use crate::graph::Graph;
    use rand::Rng;

    fn witness(g: &Graph) -> LcwExpression {
        exact_lcw(g, 12).unwrap().witness
    }

    fn k(n: usize) -> Graph {
        Graph::complete(n).unwrap()
    }

    fn ek(n: usize) -> Graph {
        Graph::empty(n).unwrap()
    }

    #[test]
    fn inflation_examples() {
        let e = compose_inflation(&witness(&k(2)), &[witness(&k(2)), witness(&k(2))]).unwrap();
        assert!(verify(&e, &k(4)).unwrap());
        assert!(e.width() <= 4);

        let p5 = Graph::path(5).unwrap();
        let e = compose_inflation(&witness(&k(1)), &[witness(&p5)]).unwrap();
        assert!(verify(&e, &p5).unwrap());
        assert!(e.width() <= 1 + witness(&p5).width());

        let p4 = Graph::path(4).unwrap();
        let parts_g = [k(2), k(1), ek(1), Graph::cycle(4).unwrap()];
        let parts: Vec<_> = parts_g.iter().map(witness).collect();
        assert_eq!(parts.iter().map(LcwExpression::width).collect::<Vec<_>>(), vec![2, 1, 1, 2]);
        let eh = witness(&p4);
        assert_eq!(eh.width(), 3);
        let e = compose_inflation(&eh, &parts).unwrap();
        assert!(e.width() <= 5);
        assert!(verify(&e, &p4.inflation(&parts_g).unwrap().graph).unwrap());
    }

    #[test]
    fn inflation_errors() {
        let eh = witness(&k(2));
        assert!(matches!(
            compose_inflation(&eh, &[witness(&k(1))]),
            Err(Error::PartCountMismatch { expected: 2, found: 1 })
        ));
        assert!(matches!(
            compose_inflation(&eh, &[witness(&k(1)), LcwExpression::default()]),
            Err(Error::EmptyPart(1))
        ));
    }

    #[test]
    fn flat_examples() {
        let e = compose_flat(FlatKind::AntiComplete, &[witness(&k(2)), witness(&k(1))]).unwrap();
        assert!(verify(&e, &k(2).disjoint_union(&k(1)).unwrap()).unwrap());
        assert!(e.width() <= 3);

        let k1 = witness(&k(1));
        let e = compose_flat(FlatKind::Complete, &[k1.clone(), k1.clone(), k1.clone()]).unwrap();
        assert!(verify(&e, &k(3)).unwrap());
        assert!(e.width() <= 2);

        let e = compose_flat(FlatKind::Complete, &[witness(&ek(2)), witness(&ek(2))]).unwrap();
        let c4_labeled = ek(2).join(&ek(2)).unwrap();
        assert!(verify(&e, &c4_labeled).unwrap());
        assert!(e.width() <= 2);
        assert_eq!(exact_lcw(&Graph::cycle(4).unwrap(), 12).unwrap().k, 2);

        assert!(compose_flat(FlatKind::Complete, &[]).is_err());
    }

    #[test]
    fn flat_anticomplete_keeps_reserved_sink() {
        let k1 = witness(&k(1));
        let e = compose_flat(FlatKind::AntiComplete, &[k1.clone(), k1]).unwrap();
        assert!(verify(&e, &ek(2)).unwrap());
        assert!(sink_labels(&e).contains(&1));
    }

    #[test]
    fn reorder_examples() {
        let p3 = Graph::path(3).unwrap();
        let e = witness(&p3);
        assert_eq!(e.width(), 2);
        let last = *e.insertion_order().last().unwrap();
        let r = reorder_front(&e, last).unwrap();
        assert_eq!(r.steps[0], LcwStep::Insert { vertex: last, label: e.max_label() + 1 });
        assert!(verify(&r, &p3).unwrap());
        assert!(r.width() <= 3);

        let first = e.insertion_order()[0];
        let r = reorder_front(&e, first).unwrap();
        assert!(verify(&r, &p3).unwrap());
        assert!(r.width() <= e.width() + 1);

        assert!(matches!(reorder_front(&e, 9), Err(Error::VertexNotInserted(9))));
    }

    #[test]
    fn reorder_random_contract() {
        let mut rng = seeded_rng(11);
        for _ in 0..500 {
            let e = random_expression(&mut rng, 8, 4);
            let g = evaluate(&e).unwrap().graph;
            let v = rng.gen_range(0..g.n());
            let r = reorder_front(&e, v).unwrap();
            assert!(verify(&r, &g).unwrap());
            assert!(r.width() <= e.width() + 1);
            assert!(matches!(r.steps[0], LcwStep::Insert { vertex, .. } if vertex == v));
        }
    }

    #[test]
    fn prime_examples() {
        let p4 = Graph::path(4).unwrap();
        let eh = witness(&p4);
        let k1 = witness(&k(1));
        let e = compose_prime(&eh, &vec![k1.clone(); 4], 0).unwrap();
        assert!(verify(&e, &p4).unwrap());
        assert!(e.width() <= 5);

        // a width-7 part dominates: no growth beyond it
        let big = LcwExpression::new(
            (0..7u32)
                .map(|i| LcwStep::Insert { vertex: i as usize, label: i + 1 })
                .collect(),
        );
        assert_eq!(big.width(), 7);
        let k2 = witness(&k(2));
        let parts = vec![k2.clone(), big.clone(), k2.clone(), k2.clone()];
        let e = compose_prime(&eh, &parts, 1).unwrap();
        assert!(e.width() <= 7);
        let target = p4
            .inflation(&[k(2), ek(7), k(2), k(2)])
            .unwrap()
            .graph;
        assert!(verify(&e, &target).unwrap());

        let e = compose_prime(&witness(&k(2)), &[big.clone(), k1.clone()], 0).unwrap();
        let bound = big.width().max(2 + 1 + 1);
        assert!(e.width() <= bound);
        assert!(verify(&e, &k(2).inflation(&[ek(7), k(1)]).unwrap().graph).unwrap());

        assert!(matches!(
            compose_prime(&witness(&k(2)), &[k1, big], 0),
            Err(Error::NotWidestPart { x: 0, widest: 1, .. })
        ));
    }

    #[test]
    fn random_compositions_respect_bounds() {
        let mut rng = seeded_rng(5);
        for _ in 0..300 {
            let nh = rng.gen_range(1..=4);
            let eh = random_expression(&mut rng, nh, 3);
            let h = evaluate(&eh).unwrap().graph;
            let parts: Vec<_> =
                (0..h.n())
                    .map(|_| {
                        let np = rng.gen_range(1..=4);
                        random_expression(&mut rng, np, 3)
                    })
                    .collect();
            let part_graphs: Vec<_> = parts.iter().map(|p| evaluate(p).unwrap().graph).collect();
            let target = h.inflation(&part_graphs).unwrap().graph;
            let widths: Vec<_> = parts.iter().map(LcwExpression::width).collect();
            let w_max = *widths.iter().max().unwrap();

            let e = compose_inflation(&eh, &parts).unwrap();
            assert!(verify(&e, &target).unwrap());
            assert!(e.width() <= eh.width() + w_max);

            let x = widths.iter().position(|&w| w == w_max).unwrap();
            let rest = widths.iter().enumerate().filter(|&(i, _)| i != x).map(|(_, &w)| w).max().unwrap_or(0);
            let e = compose_prime(&eh, &parts, x).unwrap();
            assert!(verify(&e, &target).unwrap());
            assert!(e.width() <= w_max.max(eh.width() + 1 + rest));
        }
    }
}
