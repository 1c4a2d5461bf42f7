//! Linear clique-width expressions.
//!
//! An expression is a flat sequence of three kinds of steps over a single
//! labeled graph: insert a fresh vertex with a label, add every edge between
//! two label classes, and move every vertex of one label to another. Its
//! width is the number of distinct labels mentioned anywhere.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet, MAX_VERTICES};

/// Labels are positive integers without an upper bound.
pub type Label = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LcwStep {
    Insert { vertex: usize, label: Label },
    JoinLabels(Label, Label),
    Relabel { from: Label, to: Label },
}

impl LcwStep {
    pub fn labels(&self) -> [Option<Label>; 2] {
        match *self {
            LcwStep::Insert { label, .. } => [Some(label), None],
            LcwStep::JoinLabels(i, j) => [Some(i), Some(j)],
            LcwStep::Relabel { from, to } => [Some(from), Some(to)],
        }
    }
}

impl fmt::Display for LcwStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            LcwStep::Insert { vertex, label } => write!(f, "I {vertex} {label}"),
            LcwStep::JoinLabels(i, j) => write!(f, "J {i} {j}"),
            LcwStep::Relabel { from, to } => write!(f, "R {from} {to}"),
        }
    }
}

impl FromStr for LcwStep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut tok = s.split_whitespace();
        let (Some(op), Some(a), Some(b), None) = (tok.next(), tok.next(), tok.next(), tok.next())
        else {
            return Err(Error::Parse(format!("expected `<op> <a> <b>`, got {s:?}")));
        };
        let num = |t: &str| -> Result<u64> {
            t.parse().map_err(|_| Error::Parse(format!("bad number {t:?} in {s:?}")))
        };
        let (a, b) = (num(a)?, num(b)?);
        let label = |x: u64| -> Result<Label> {
            Label::try_from(x).map_err(|_| Error::Parse(format!("label {x} too large")))
        };
        match op {
            "I" => Ok(LcwStep::Insert { vertex: a as usize, label: label(b)? }),
            "J" => Ok(LcwStep::JoinLabels(label(a)?, label(b)?)),
            "R" => Ok(LcwStep::Relabel { from: label(a)?, to: label(b)? }),
            _ => Err(Error::Parse(format!("unknown step kind {op:?}"))),
        }
    }
}

// JSON form of a step: `["I", vertex, label]`, `["J", i, j]` or `["R", from, to]`.
impl Serialize for LcwStep {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (op, a, b) = match *self {
            LcwStep::Insert { vertex, label } => ("I", vertex as u64, label as u64),
            LcwStep::JoinLabels(i, j) => ("J", i as u64, j as u64),
            LcwStep::Relabel { from, to } => ("R", from as u64, to as u64),
        };
        (op, a, b).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LcwStep {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (op, a, b) = <(String, u64, u64)>::deserialize(d)?;
        format!("{op} {a} {b}").parse().map_err(de::Error::custom)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LcwExpression {
    pub steps: Vec<LcwStep>,
}

impl LcwExpression {
    pub fn new(steps: Vec<LcwStep>) -> Self {
        LcwExpression { steps }
    }

    /// Distinct labels mentioned anywhere, ascending.
    pub fn labels(&self) -> BTreeSet<Label> {
        self.steps.iter().flat_map(|s| s.labels()).flatten().collect()
    }

    pub fn width(&self) -> usize {
        self.labels().len()
    }

    pub fn max_label(&self) -> Label {
        self.labels().last().copied().unwrap_or(0)
    }

    /// Inserted vertex ids in insertion order.
    pub fn insertion_order(&self) -> Vec<usize> {
        self.steps
            .iter()
            .filter_map(|s| match *s {
                LcwStep::Insert { vertex, .. } => Some(vertex),
                _ => None,
            })
            .collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.insertion_order().len()
    }

    /// Renames vertex ids through `map` (old id -> new id).
    pub fn map_vertices(&self, map: impl Fn(usize) -> usize) -> LcwExpression {
        let steps = self
            .steps
            .iter()
            .map(|s| match *s {
                LcwStep::Insert { vertex, label } => LcwStep::Insert { vertex: map(vertex), label },
                other => other,
            })
            .collect();
        LcwExpression { steps }
    }

    /// Renames labels through `map`. The map must be injective on the labels
    /// in use, otherwise the meaning of the expression changes.
    pub fn map_labels(&self, map: impl Fn(Label) -> Label) -> LcwExpression {
        let steps = self
            .steps
            .iter()
            .map(|s| match *s {
                LcwStep::Insert { vertex, label } => LcwStep::Insert { vertex, label: map(label) },
                LcwStep::JoinLabels(i, j) => LcwStep::JoinLabels(map(i), map(j)),
                LcwStep::Relabel { from, to } => LcwStep::Relabel { from: map(from), to: map(to) },
            })
            .collect();
        LcwExpression { steps }
    }

    /// Renumbers labels to `1..=width` in ascending order of the old values.
    pub fn compact_labels(&self) -> LcwExpression {
        let table: HashMap<Label, Label> =
            self.labels().into_iter().zip(1..).collect();
        self.map_labels(|l| table[&l])
    }

    /// Line-oriented text form, one step per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the text form; blank lines and `#` comments are skipped.
    pub fn from_text(s: &str) -> Result<Self> {
        let steps = s
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(str::parse)
            .collect::<Result<_>>()?;
        Ok(LcwExpression { steps })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("steps always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Accepts either the JSON array form or the text form.
    pub fn parse_any(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('[') {
            Self::from_json(s)
        } else {
            Self::from_text(s)
        }
    }
}

impl FromIterator<LcwStep> for LcwExpression {
    fn from_iter<I: IntoIterator<Item = LcwStep>>(iter: I) -> Self {
        LcwExpression { steps: iter.into_iter().collect() }
    }
}

impl fmt::Display for LcwExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// The graph produced by an expression together with the final label of
/// every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub labels: Vec<Label>,
}

/// Runs the expression.
///
/// Joins are idempotent on existing edges and relabels of an absent label
/// are no-ops.
pub fn evaluate(expr: &LcwExpression) -> Result<LabeledGraph> {
    let mut classes: BTreeMap<Label, u64> = BTreeMap::new();
    let mut rows = vec![0u64; MAX_VERTICES];
    let mut inserted = VertexSet::EMPTY;
    for (step, s) in expr.steps.iter().enumerate() {
        if s.labels().iter().flatten().any(|&l| l == 0) {
            return Err(Error::ZeroLabel { step });
        }
        match *s {
            LcwStep::Insert { vertex, label } => {
                if vertex >= MAX_VERTICES {
                    return Err(Error::TooManyVertices { n: vertex + 1, max: MAX_VERTICES });
                }
                if inserted.contains(vertex) {
                    return Err(Error::DuplicateVertex(vertex));
                }
                inserted.insert(vertex);
                *classes.entry(label).or_default() |= 1u64 << vertex;
            }
            LcwStep::JoinLabels(i, j) => {
                if i == j {
                    return Err(Error::EqualLabels { step, label: i });
                }
                let a = classes.get(&i).copied().unwrap_or(0);
                let b = classes.get(&j).copied().unwrap_or(0);
                for v in VertexSet(a) {
                    rows[v] |= b;
                }
                for v in VertexSet(b) {
                    rows[v] |= a;
                }
            }
            LcwStep::Relabel { from, to } => {
                if from == to {
                    return Err(Error::EqualLabels { step, label: from });
                }
                if let Some(moved) = classes.remove(&from) {
                    *classes.entry(to).or_default() |= moved;
                }
            }
        }
    }
    let n = inserted.len();
    if let Some(missing) = VertexSet::full(n).difference(inserted).first() {
        return Err(Error::NonContiguousVertices { expected: n, missing });
    }
    rows.truncate(n);
    let mut labels = vec![0; n];
    for (&l, &members) in &classes {
        for v in VertexSet(members) {
            labels[v] = l;
        }
    }
    Ok(LabeledGraph { graph: Graph::from_rows(rows)?, labels })
}

/// Whether `expr` evaluates to exactly `target` (same ids, same edges).
pub fn verify(expr: &LcwExpression, target: &Graph) -> Result<bool> {
    Ok(evaluate(expr)?.graph == *target)
}

/// Labels never used by a join and never on either side of a relabel.
pub fn sink_labels(expr: &LcwExpression) -> BTreeSet<Label> {
    let mut active = BTreeSet::new();
    for s in &expr.steps {
        match *s {
            LcwStep::Insert { .. } => {}
            LcwStep::JoinLabels(i, j) | LcwStep::Relabel { from: i, to: j } => {
                active.insert(i);
                active.insert(j);
            }
        }
    }
    expr.labels().difference(&active).copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use proptest::prelude::*;
    use LcwStep::*;

    fn k2_expr() -> LcwExpression {
        LcwExpression::new(vec![
            Insert { vertex: 0, label: 1 },
            Insert { vertex: 1, label: 2 },
            JoinLabels(1, 2),
        ])
    }

    /// Edge set by replaying the steps naively over an explicit label vector.
    fn brute_edges(expr: &LcwExpression) -> BTreeSet<(usize, usize)> {
        let mut label: BTreeMap<usize, Label> = BTreeMap::new();
        let mut edges = BTreeSet::new();
        for s in &expr.steps {
            match *s {
                Insert { vertex, label: l } => {
                    label.insert(vertex, l);
                }
                JoinLabels(i, j) => {
                    for (&u, &lu) in &label {
                        for (&v, &lv) in &label {
                            if u < v && ((lu == i && lv == j) || (lu == j && lv == i)) {
                                edges.insert((u, v));
                            }
                        }
                    }
                }
                Relabel { from, to } => {
                    for l in label.values_mut() {
                        if *l == from {
                            *l = to;
                        }
                    }
                }
            }
        }
        edges
    }

    #[test]
    fn evaluate_examples() {
        let lg = evaluate(&k2_expr()).unwrap();
        assert_eq!(lg.graph, Graph::complete(2).unwrap());
        assert_eq!(lg.labels, vec![1, 2]);

        let star = LcwExpression::new(vec![
            Insert { vertex: 0, label: 1 },
            Insert { vertex: 1, label: 1 },
            Insert { vertex: 2, label: 2 },
            JoinLabels(1, 2),
        ]);
        let lg = evaluate(&star).unwrap();
        assert_eq!(lg.graph.edges(), vec![(0, 2), (1, 2)]);
        assert_eq!(star.width(), 2);

        let q2 = LcwExpression::new(vec![
            Insert { vertex: 0, label: 1 },
            Insert { vertex: 1, label: 2 },
            JoinLabels(1, 2),
            Relabel { from: 2, to: 1 },
            Insert { vertex: 2, label: 2 },
        ]);
        let lg = evaluate(&q2).unwrap();
        assert_eq!(lg.graph.edges(), vec![(0, 1)]);
        assert_eq!(brute_edges(&q2).into_iter().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(lg.labels, vec![1, 1, 2]);
        assert_eq!(q2.width(), 2);
    }

    #[test]
    fn evaluate_errors() {
        let dup = LcwExpression::new(vec![Insert { vertex: 0, label: 1 }, Insert { vertex: 0, label: 2 }]);
        assert!(matches!(evaluate(&dup), Err(Error::DuplicateVertex(0))));
        let eq = LcwExpression::new(vec![Insert { vertex: 0, label: 1 }, JoinLabels(1, 1)]);
        assert!(matches!(evaluate(&eq), Err(Error::EqualLabels { step: 1, label: 1 })));
        let eq = LcwExpression::new(vec![Relabel { from: 3, to: 3 }]);
        assert!(matches!(evaluate(&eq), Err(Error::EqualLabels { .. })));
        let gap = LcwExpression::new(vec![Insert { vertex: 1, label: 1 }]);
        assert!(matches!(evaluate(&gap), Err(Error::NonContiguousVertices { expected: 1, missing: 0 })));
        let zero = LcwExpression::new(vec![Insert { vertex: 0, label: 0 }]);
        assert!(matches!(evaluate(&zero), Err(Error::ZeroLabel { step: 0 })));
    }

    #[test]
    fn join_is_idempotent_and_absent_relabel_is_noop() {
        let mut e = k2_expr();
        e.steps.push(JoinLabels(2, 1));
        e.steps.push(Relabel { from: 7, to: 1 });
        assert!(verify(&e, &Graph::complete(2).unwrap()).unwrap());
    }

    #[test]
    fn verify_examples() {
        assert!(verify(&k2_expr(), &Graph::complete(2).unwrap()).unwrap());
        assert!(!verify(&k2_expr(), &Graph::empty(2).unwrap()).unwrap());
    }

    #[test]
    fn sink_label_examples() {
        assert!(sink_labels(&k2_expr()).is_empty());
        let two = LcwExpression::new(vec![Insert { vertex: 0, label: 1 }, Insert { vertex: 1, label: 1 }]);
        assert_eq!(sink_labels(&two), BTreeSet::from([1]));
    }

    #[test]
    fn text_and_json_forms() {
        let e = k2_expr();
        assert_eq!(e.to_text(), "I 0 1\nI 1 2\nJ 1 2\n");
        assert_eq!(e.to_json(), r#"[["I",0,1],["I",1,2],["J",1,2]]"#);
        assert_eq!(LcwExpression::parse_any(&e.to_json()).unwrap(), e);
        assert_eq!(LcwExpression::parse_any("# k2\nI 0 1\nI 1 2\n\nJ 1 2 # edge\n").unwrap(), e);
        assert!(LcwExpression::from_text("X 1 2").is_err());
        assert!(LcwExpression::from_text("I 1").is_err());
        assert!(LcwExpression::from_json(r#"[["Q",0,1]]"#).is_err());
    }

    #[test]
    fn random_expressions_verify_against_themselves() {
        let mut rng = crate::corpus::seeded_rng(7);
        for _ in 0..1000 {
            let e = crate::corpus::random_expression(&mut rng, 9, 4);
            let lg = evaluate(&e).unwrap();
            assert!(verify(&e, &lg.graph).unwrap());
            assert_eq!(lg.graph.edges().into_iter().collect::<BTreeSet<_>>(), brute_edges(&e));
        }
    }

    proptest! {
        #[test]
        fn text_round_trip(seed in any::<u64>()) {
            let mut rng = crate::corpus::seeded_rng(seed);
            let e = crate::corpus::random_expression(&mut rng, 8, 5);
            prop_assert_eq!(LcwExpression::from_text(&e.to_text()).unwrap(), e.clone());
            prop_assert_eq!(LcwExpression::from_json(&e.to_json()).unwrap(), e);
        }
    }
}
