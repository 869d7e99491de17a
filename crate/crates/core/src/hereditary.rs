//! Passing between classic expressions of a factor `M` and parameterised
//! expressions of products `H' ⊠ M`, in both directions.

use alloc::vec;
use alloc::vec::Vec;

use crate::embedding::ProductEmbedding;
use crate::expr::{CwExpression, ExprError, HcwExpression, Label, Node};
use crate::graph::{LoopGraph, ProductVertex};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HereditaryError {
    #[error("factor expression uses {ell} colours, at least 2 are needed")]
    TooFewColours { ell: usize },
    #[error("factor graph must be loop-free (loop at {v})")]
    LoopInFactor { v: usize },
    #[error("factor graph has no vertices")]
    EmptyFactor,
    #[error("parameter graph is not reflexive (vertex {v} has no loop)")]
    NotReflexive { v: usize },
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Replaces every vertex of `M` by a copy of `hprime`.  The value is
/// `M ⊠ hprime` with vertex `(y, v)` at id `y * |V(hprime)| + v`, where `y`
/// is the vertex of `M` produced by the `y`-th leaf of `mexpr`.
pub fn expression_from_factor(
    mexpr: &CwExpression,
    hprime: &LoopGraph,
) -> Result<HcwExpression, HereditaryError> {
    if mexpr.ell < 2 {
        return Err(HereditaryError::TooFewColours { ell: mexpr.ell });
    }
    if let Some(v) = hprime.loops().next() {
        return Err(HereditaryError::LoopInFactor { v });
    }
    let n = hprime.vertex_count();
    if n == 0 {
        return Err(HereditaryError::EmptyFactor);
    }
    if let Some(d) = mexpr.validate().into_iter().next() {
        return Err(ExprError::Invalid(d).into());
    }
    let mut e = HcwExpression::new(mexpr.ell, hprime.reflexive_closure());
    let mut map = vec![0; mexpr.nodes().len()];
    for (id, node) in mexpr.nodes().iter().enumerate() {
        map[id] = match *node {
            Node::Create(colour) => {
                let mut cur = e.create(1, 0);
                for v in 1..n {
                    let x = e.create(2, v);
                    cur = e.union(cur, x);
                    cur = e.add_edges(1, 2, cur);
                    cur = e.recolor(2, 1, cur);
                }
                if colour != 1 {
                    cur = e.recolor(1, colour, cur);
                }
                cur
            }
            Node::Union(a, b) => e.union(map[a], map[b]),
            Node::AddEdges { i, j, child } => e.add_edges(i, j, map[child]),
            Node::Recolor { i, j, child } => e.recolor(i, j, map[child]),
        };
    }
    Ok(e)
}

/// `g` embedded into `hprime ⊠ m` by `x ↦ (pvertex(x), x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorCertificate {
    pub g: LoopGraph,
    pub hprime: LoopGraph,
    pub m: LoopGraph,
    pub embedding: ProductEmbedding,
    /// Colour budget of the expression, also a clique-width witness for `m`.
    pub ell: usize,
}

/// Forgets parameter vertices: `m` is the value of the same term read as a
/// classic expression, so `V(m) = V(g)` and `g ⊆ m`.
pub fn factor_from_expression(expr: &HcwExpression) -> Result<FactorCertificate, HereditaryError> {
    if let Some(v) = (0..expr.param.vertex_count()).find(|&v| !expr.param.has_loop(v)) {
        return Err(HereditaryError::NotReflexive { v });
    }
    let value = expr.evaluate()?;
    let mut k1 = LoopGraph::new(1);
    k1.add_loop(0);
    let classic_nodes = expr
        .nodes()
        .iter()
        .map(|n| match *n {
            Node::Create(l) => Node::Create(Label {
                colour: l.colour,
                pvertex: 0,
            }),
            other => other,
        })
        .collect();
    let m = HcwExpression::from_nodes(expr.ell, k1, classic_nodes)
        .evaluate()?
        .graph;
    let hprime = expr.param.strip_loops();
    let image: Vec<ProductVertex> = value
        .labels
        .iter()
        .enumerate()
        .map(|(x, l)| ProductVertex::new(l.pvertex, x))
        .collect();
    Ok(FactorCertificate {
        g: value.graph,
        embedding: ProductEmbedding::new(hprime.clone(), m.clone(), image),
        hprime,
        m,
        ell: expr.ell,
    })
}

/// Classic expression for the path `0 - 1 - ... - (n-1)`: two colours up to
/// three vertices, three colours beyond.
pub fn path_cw_expression(n: usize) -> CwExpression {
    if n <= 3 {
        let mut e = CwExpression::new(2);
        if n == 0 {
            return e;
        }
        if n == 1 {
            e.create(1);
            return e;
        }
        let a = e.create(2);
        let b = e.create(1);
        let mut cur = e.union(a, b);
        if n == 3 {
            let c = e.create(2);
            cur = e.union(cur, c);
        }
        e.add_edges(1, 2, cur);
        return e;
    }
    let mut e = CwExpression::new(3);
    let mut cur = e.create(1);
    for _ in 1..n {
        let x = e.create(2);
        cur = e.union(cur, x);
        cur = e.add_edges(1, 2, cur);
        cur = e.recolor(1, 3, cur);
        cur = e.recolor(2, 1, cur);
    }
    e
}
