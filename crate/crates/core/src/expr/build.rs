//! Expression constructions: the bridge from classic clique-width terms,
//! the five-colour grid schedule, localisation to balls, and the
//! grid-like family with bounded parameterised width.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use super::{CwExpression, ExprError, HcwExpression, Label, Node, NodeId};
use crate::graph::LoopGraph;

/// Rewrites every colour `i` to the label `(i, v0)` over the one-vertex
/// looped graph.
pub fn cw_expression_bridge(classic: &CwExpression) -> HcwExpression {
    let mut k1 = LoopGraph::new(1);
    k1.add_loop(0);
    let nodes = classic
        .nodes()
        .iter()
        .map(|n| match *n {
            Node::Create(c) => Node::Create(Label {
                colour: c,
                pvertex: 0,
            }),
            Node::Union(a, b) => Node::Union(a, b),
            Node::AddEdges { i, j, child } => Node::AddEdges { i, j, child },
            Node::Recolor { i, j, child } => Node::Recolor { i, j, child },
        })
        .collect();
    HcwExpression::from_nodes(classic.ell, k1, nodes)
}

/// Builds a copy of the path `0..len` with colours alternating `lo, lo+1`
/// along it, using colour 5 for the vertex being attached.
fn grid_column(e: &mut HcwExpression, len: usize, lo: usize) -> NodeId {
    let colour = |k: usize| if k % 2 == 0 { lo } else { lo + 1 };
    let mut cur = e.create(lo, 0);
    for k in 1..len {
        let x = e.create(5, k);
        cur = e.union(cur, x);
        cur = e.add_edges(colour(k - 1), 5, cur);
        cur = e.recolor(5, colour(k), cur);
    }
    cur
}

/// A five-colour expression over the reflexive path on `b` vertices valued
/// the `a × b` grid; vertex `(i, j)` (copy `i` of the path, position `j`)
/// gets id `i * b + j`.  Copies alternate between colours {1,2} and {3,4};
/// the copy two steps back is retired to colour 5 before a new one joins.
pub fn grid_expression(a: usize, b: usize) -> (HcwExpression, LoopGraph) {
    assert!(a >= 1 && b >= 1, "grid dimensions must be positive");
    let p = LoopGraph::path(b).reflexive_closure();
    let mut e = HcwExpression::new(5, p.clone());
    let mut main = grid_column(&mut e, b, 1);
    for i in 1..a {
        let lo = if i % 2 == 0 { 1 } else { 3 };
        let prev = if lo == 1 { 3 } else { 1 };
        if i >= 2 {
            main = e.recolor(lo, 5, main);
            if b >= 2 {
                main = e.recolor(lo + 1, 5, main);
            }
        }
        let col = grid_column(&mut e, b, lo);
        main = e.union(main, col);
        main = e.add_edges(prev, lo, main);
        if b >= 2 {
            main = e.add_edges(prev + 1, lo + 1, main);
        }
    }
    (e, p)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LocalizeError {
    #[error("vertex {x} not in the value ({n} vertices)")]
    Absent { x: usize, n: usize },
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Classic expression for the ball around a vertex, plus the ball itself
/// (ascending; vertex `i` of the value is `vertices[i]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Localized {
    pub expr: CwExpression,
    pub vertices: Vec<usize>,
}

/// Restricts the expression to the closed `r`-ball of `x` and replaces each
/// label `(i, v)` by its own colour.
pub fn localize(expr: &HcwExpression, x: usize, r: usize) -> Result<Localized, LocalizeError> {
    let value = expr.evaluate()?;
    let n = value.graph.vertex_count();
    if x >= n {
        return Err(LocalizeError::Absent { x, n });
    }
    let dist = value.graph.distances(x);
    let inside: Vec<bool> = dist.iter().map(|&d| d <= r).collect();
    let leaf = super::leaf_order(expr.nodes());

    let mut colour_of: BTreeMap<Label, usize> = BTreeMap::new();
    let mut intern = |l: Label| {
        let next = colour_of.len() + 1;
        *colour_of.entry(l).or_insert(next)
    };
    let mut out: Vec<Node<usize>> = Vec::new();
    let mut kept: Vec<Option<(NodeId, BTreeSet<Label>)>> = vec![None; expr.nodes().len()];
    let h = &expr.param;
    for (id, node) in expr.nodes().iter().enumerate() {
        kept[id] = match *node {
            Node::Create(l) => inside[leaf[id]].then(|| {
                out.push(Node::Create(intern(l)));
                (out.len() - 1, BTreeSet::from([l]))
            }),
            Node::Union(a, b) => match (kept[a].take(), kept[b].take()) {
                (Some((na, mut la)), Some((nb, lb))) => {
                    out.push(Node::Union(na, nb));
                    la.extend(lb);
                    Some((out.len() - 1, la))
                }
                (one, None) | (None, one) => one,
            },
            Node::AddEdges { i, j, child } => kept[child].take().map(|(mut cur, labels)| {
                for a in labels.iter().filter(|l| l.colour == i) {
                    for b in labels.iter().filter(|l| l.colour == j) {
                        if h.has_edge(a.pvertex, b.pvertex) {
                            out.push(Node::AddEdges {
                                i: intern(*a),
                                j: intern(*b),
                                child: cur,
                            });
                            cur = out.len() - 1;
                        }
                    }
                }
                (cur, labels)
            }),
            Node::Recolor { i, j, child } => kept[child].take().map(|(mut cur, labels)| {
                let mut next = BTreeSet::new();
                for l in labels {
                    if l.colour == i {
                        let to = Label {
                            colour: j,
                            pvertex: l.pvertex,
                        };
                        out.push(Node::Recolor {
                            i: intern(l),
                            j: intern(to),
                            child: cur,
                        });
                        cur = out.len() - 1;
                        next.insert(to);
                    } else {
                        next.insert(l);
                    }
                }
                (cur, next)
            }),
        };
    }
    let ell = colour_of.len().max(1);
    let vertices = (0..n).filter(|&v| inside[v]).collect();
    Ok(Localized {
        expr: CwExpression::from_nodes(ell, out),
        vertices,
    })
}

/// Condition `C(i, j)` describing which pairs of the two rows are *not*
/// adjacent in the parameter graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HighCwCondition {
    Less,
    Equal,
    NotEqual,
}

impl HighCwCondition {
    pub fn holds(self, i: usize, j: usize) -> bool {
        match self {
            HighCwCondition::Less => i < j,
            HighCwCondition::Equal => i == j,
            HighCwCondition::NotEqual => i != j,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HighCwViolation {
    Disconnected,
    WrongSize {
        a: usize,
        b: usize,
        k: usize,
    },
    VertexOutOfRange {
        v: usize,
    },
    Repeated {
        v: usize,
    },
    Overlap,
    /// `{u_i, u'_j}` is an edge exactly when the condition holds.
    Pattern {
        i: usize,
        j: usize,
        adjacent: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HighCwFamily {
    pub expr: HcwExpression,
    /// Built directly from the column/row description, for comparison.
    pub graph: LoopGraph,
}

/// `k` loopless copies of `h1` side by side, copy `a` joined to copy `a+1`
/// between `B` and `A` exactly where `h1` joins them.  Five colours suffice
/// for any `k`.  Indices `i, j` in the returned violations are 1-based.
pub fn highcw_family(
    h1: &LoopGraph,
    a_set: &[usize],
    b_set: &[usize],
    cond: HighCwCondition,
    k: usize,
) -> Result<HighCwFamily, Vec<HighCwViolation>> {
    let n1 = h1.vertex_count();
    let mut bad = Vec::new();
    if n1 == 0 || !h1.is_connected() {
        bad.push(HighCwViolation::Disconnected);
    }
    if a_set.len() != k || b_set.len() != k {
        bad.push(HighCwViolation::WrongSize {
            a: a_set.len(),
            b: b_set.len(),
            k,
        });
    }
    for set in [a_set, b_set] {
        let mut seen = BTreeSet::new();
        for &v in set {
            if v >= n1 {
                bad.push(HighCwViolation::VertexOutOfRange { v });
            } else if !seen.insert(v) {
                bad.push(HighCwViolation::Repeated { v });
            }
        }
    }
    let same = a_set == b_set;
    if !same && a_set.iter().any(|v| b_set.contains(v)) {
        bad.push(HighCwViolation::Overlap);
    }
    if !bad.is_empty() {
        return Err(bad);
    }
    for i in 0..k {
        for j in 0..k {
            let adjacent = h1.has_edge(a_set[i], b_set[j]);
            if adjacent == cond.holds(i, j) {
                bad.push(HighCwViolation::Pattern {
                    i: i + 1,
                    j: j + 1,
                    adjacent,
                });
            }
        }
    }
    if !bad.is_empty() {
        return Err(bad);
    }

    let mut e = HcwExpression::new(5, h1.clone());
    // Colours 1..=5 stand for 0..=4 in the usual presentation.
    let column = |e: &mut HcwExpression, a_colour: usize, b_colour: usize, temp: usize| {
        let final_colour = |v: usize| {
            if b_set.contains(&v) {
                b_colour
            } else if a_set.contains(&v) {
                a_colour
            } else {
                1
            }
        };
        let mut present = BTreeSet::new();
        let mut cur = e.create(final_colour(0), 0);
        present.insert(final_colour(0));
        for v in 1..n1 {
            let x = e.create(temp, v);
            cur = e.union(cur, x);
            for &c in &present {
                cur = e.add_edges(temp, c, cur);
            }
            let c = final_colour(v);
            cur = e.recolor(temp, c, cur);
            present.insert(c);
        }
        cur
    };
    let (first_a, later_a, later_b) = if same { (3, 4, 4) } else { (2, 4, 5) };
    let mut main = column(&mut e, first_a, 3, 4);
    for _ in 1..k {
        let col = column(&mut e, later_a, later_b, 2);
        main = e.union(main, col);
        main = e.add_edges(3, 4, main);
        if same {
            main = e.recolor(3, 2, main);
            main = e.recolor(4, 3, main);
        } else {
            main = e.recolor(3, 2, main);
            main = e.recolor(4, 2, main);
            main = e.recolor(5, 3, main);
        }
    }
    debug_assert_eq!(e.root(), Some(main));

    let mut graph = LoopGraph::new(k * n1);
    for col in 0..k {
        for (u, v) in h1.edges() {
            graph.add_edge(col * n1 + u, col * n1 + v);
        }
        if col + 1 < k {
            for &u in a_set {
                for &w in b_set {
                    if h1.has_edge(u, w) {
                        graph.add_edge(col * n1 + w, (col + 1) * n1 + u);
                    }
                }
            }
        }
    }
    Ok(HighCwFamily { expr: e, graph })
}
