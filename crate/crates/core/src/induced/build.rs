use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use super::bounds::{bound_report, BoundReport};
use super::{ColourInterner, ColourScheme, FullColour, InducedError, ProductSubgraph};
use crate::embedding::ProductEmbedding;
use crate::expr::{leaf_order, HcwExpression, Node, NodeId};
use crate::graph::{LoopGraph, ProductVertex};
use crate::treedecomp::TreeDecomposition;

/// An expression over the reflexive closure of `Q` valued `g`: expression
/// vertex `i` is member `vertex_of[i]`, with parameter vertex its
/// `Q`-coordinate.  `colours[c - 1]` is the colour interned as `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuiltExpression {
    pub expr: HcwExpression,
    pub vertex_of: Vec<usize>,
    pub colours: Vec<FullColour>,
}

impl BuiltExpression {
    /// Number of distinct initial colours (those with a square colour).
    pub fn initial_colour_count(&self) -> usize {
        self.colours.iter().filter(|c| c.alpha.is_some()).count()
    }
}

struct Builder {
    e: HcwExpression,
    ids: ColourInterner,
    leaf_member: BTreeMap<NodeId, usize>,
}

impl Builder {
    fn add_edges(&mut self, cur: NodeId, a: &FullColour, b: &FullColour) -> NodeId {
        let (i, j) = (self.ids.id(a), self.ids.id(b));
        self.e.add_edges(i, j, cur)
    }

    fn recolor(&mut self, cur: NodeId, from: &FullColour, to: &FullColour) -> NodeId {
        let (i, j) = (self.ids.id(from), self.ids.id(to));
        self.e.recolor(i, j, cur)
    }
}

pub fn build_expression(
    inst: &ProductSubgraph,
    td: &TreeDecomposition,
) -> Result<BuiltExpression, InducedError> {
    Ok(expression_from_scheme(&ColourScheme::greedy(inst, td)?))
}

pub fn build_expression_with(
    inst: &ProductSubgraph,
    td: &TreeDecomposition,
    s: &[usize],
) -> Result<BuiltExpression, InducedError> {
    Ok(expression_from_scheme(&ColourScheme::new(
        inst,
        td,
        s.to_vec(),
    )?))
}

/// Bottom-up over the decomposition: union the children, then for each
/// vertex `m` whose topmost bag is here add its members with initial
/// colours, wire them by colour pairs, and retire them to running colours;
/// finally forget the labels of the departing vertices.
pub(crate) fn expression_from_scheme(sc: &ColourScheme<'_>) -> BuiltExpression {
    let inst = sc.inst;
    let td = sc.td;
    let mut b = Builder {
        e: HcwExpression::new(0, inst.q.reflexive_closure()),
        ids: ColourInterner::default(),
        leaf_member: BTreeMap::new(),
    };
    let mut done: Vec<Option<(NodeId, BTreeSet<FullColour>)>> = vec![None; td.node_count()];
    for t in td.post_order() {
        let mut cur: Option<NodeId> = None;
        let mut running: BTreeSet<FullColour> = BTreeSet::new();
        for &c in td.children(t) {
            if let Some((node, colours)) = done[c].take() {
                cur = Some(match cur {
                    Some(prev) => b.e.union(prev, node),
                    None => node,
                });
                running.extend(colours);
            }
        }
        let batch: Vec<usize> = sc.batch(t).collect();
        for &m in &batch {
            let members = &sc.by_m[m];
            if members.is_empty() {
                continue;
            }
            let mut fresh = BTreeSet::new();
            for &x in members {
                let c = sc.initial_colour(x);
                let leaf = b.e.create(b.ids.id(&c), inst.members[x].a);
                b.leaf_member.insert(leaf, x);
                cur = Some(match cur {
                    Some(prev) => b.e.union(prev, leaf),
                    None => leaf,
                });
                fresh.insert(c);
            }
            let mut node = cur.expect("batch is non-empty");
            let j = sc.ctx.p[m];
            // Earlier vertices to the new batch.
            for r in &running {
                for f in &fresh {
                    if r.base.has(j, f.alpha.unwrap()) {
                        node = b.add_edges(node, r, f);
                    }
                }
            }
            // Inside the batch.
            let fresh_list: Vec<&FullColour> = fresh.iter().collect();
            for (i, f) in fresh_list.iter().enumerate() {
                for g in &fresh_list[i + 1..] {
                    if f.base.has(j, g.alpha.unwrap()) || g.base.has(j, f.alpha.unwrap()) {
                        node = b.add_edges(node, f, g);
                    }
                }
            }
            for f in fresh {
                let r = FullColour {
                    alpha: None,
                    base: f.base.clone(),
                };
                node = b.recolor(node, &f, &r);
                running.insert(r);
            }
            cur = Some(node);
        }
        if td.parent(t).is_some() {
            if let Some(mut node) = cur {
                for &m in &batch {
                    let j = sc.ctx.p[m];
                    let mut next = BTreeSet::new();
                    for r in running {
                        if r.base.support(j).is_empty() {
                            next.insert(r);
                        } else {
                            let to = FullColour {
                                alpha: None,
                                base: r.base.cleared(j),
                            };
                            node = b.recolor(node, &r, &to);
                            next.insert(to);
                        }
                    }
                    running = next;
                }
                cur = Some(node);
            }
        }
        done[t] = cur.map(|node| (node, running));
    }
    let leaf = leaf_order(b.e.nodes());
    let mut vertex_of = vec![0; b.leaf_member.len()];
    for (&node, &x) in &b.leaf_member {
        vertex_of[leaf[node]] = x;
    }
    let mut expr = b.e;
    expr.ell = b.ids.len().max(1);
    debug_assert!(expr
        .nodes()
        .iter()
        .all(|n| !matches!(n, Node::AddEdges { i, j, .. } | Node::Recolor { i, j, .. } if i == j)));
    BuiltExpression {
        expr,
        vertex_of,
        colours: b.ids.into_colours(),
    }
}

/// `G ⊆ᵢ Q ⊠ M₂` with `V(M₂) = V(M) × Γ'`, where `Γ'` is the set of
/// initial colours that actually occur.  Vertex `(m, γ)` has id
/// `m * |Γ'| + γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedFactorCertificate {
    pub m2: LoopGraph,
    pub td2: TreeDecomposition,
    pub embedding: ProductEmbedding,
    pub gammas: Vec<FullColour>,
}

impl InducedFactorCertificate {
    pub fn width(&self) -> usize {
        self.td2.width()
    }
}

pub fn build_induced_factor(
    inst: &ProductSubgraph,
    td: &TreeDecomposition,
) -> Result<InducedFactorCertificate, InducedError> {
    Ok(factor_from_scheme(&ColourScheme::greedy(inst, td)?))
}

pub fn build_induced_factor_with(
    inst: &ProductSubgraph,
    td: &TreeDecomposition,
    s: &[usize],
) -> Result<InducedFactorCertificate, InducedError> {
    Ok(factor_from_scheme(&ColourScheme::new(
        inst,
        td,
        s.to_vec(),
    )?))
}

/// Edges of `M₂`: for `m = m'` or `mm' ∈ E(M)` with `m` added no later than
/// `m'`, `(m, γ)(m', γ')` is an edge iff `γ` has `b_{p(m')}(α') = 1`, where
/// `α'` is the square colour of `γ'`.  For `m = m'` both readings are
/// tried.
pub(crate) fn factor_from_scheme(sc: &ColourScheme<'_>) -> InducedFactorCertificate {
    let inst = sc.inst;
    let initial: Vec<FullColour> = (0..inst.members.len())
        .map(|x| sc.initial_colour(x))
        .collect();
    let gammas: Vec<FullColour> = initial
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let ng = gammas.len();
    let nm = inst.m.vertex_count();
    let mut m2 = LoopGraph::new(nm * ng);
    let fires = |g: &FullColour, h: &FullColour, j: usize| g.base.has(j, h.alpha.unwrap());
    for m in 0..nm {
        let j = sc.ctx.p[m];
        for a in 0..ng {
            for b in a + 1..ng {
                if fires(&gammas[a], &gammas[b], j) || fires(&gammas[b], &gammas[a], j) {
                    m2.add_edge(m * ng + a, m * ng + b);
                }
            }
        }
    }
    for (u, v) in inst.m.edges() {
        let (lo, hi) = if sc.rank[u] <= sc.rank[v] {
            (u, v)
        } else {
            (v, u)
        };
        let j = sc.ctx.p[hi];
        for a in 0..ng {
            for b in 0..ng {
                if fires(&gammas[a], &gammas[b], j) {
                    m2.add_edge(lo * ng + a, hi * ng + b);
                }
            }
        }
    }
    let bags = sc
        .td
        .bags()
        .iter()
        .map(|bag| {
            bag.iter()
                .flat_map(|&m| (0..ng).map(move |g| m * ng + g))
                .collect()
        })
        .collect();
    let td2 = sc.td.with_bags(nm * ng, bags);
    let image = inst
        .members
        .iter()
        .zip(&initial)
        .map(|(pv, c)| ProductVertex::new(pv.a, pv.b * ng + gammas.binary_search(c).unwrap()))
        .collect();
    let embedding = ProductEmbedding::new(inst.q.clone(), m2.clone(), image);
    InducedFactorCertificate {
        m2,
        td2,
        embedding,
        gammas,
    }
}

/// `s(v) = 1 + (position of v along the path) mod 3`.
pub fn path_colouring(q: &LoopGraph) -> Result<Vec<usize>, InducedError> {
    let order = q.path_order().ok_or(InducedError::NotAPath)?;
    let mut s = vec![0; q.vertex_count()];
    for (i, &v) in order.iter().enumerate() {
        s[v] = 1 + i % 3;
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCase {
    pub expression: BuiltExpression,
    pub factor: InducedFactorCertificate,
    pub bounds: BoundReport,
}

/// Both constructions for a path left factor with the three-colouring of
/// its square; bounds use `d = 3` and the width of `td`.
pub fn path_case(inst: &ProductSubgraph, td: &TreeDecomposition) -> Result<PathCase, InducedError> {
    let s = path_colouring(&inst.q)?;
    let sc = ColourScheme::new(inst, td, s)?;
    let bounds = bound_report(inst.q.max_degree().max(2), sc.ctx.k, Some(3));
    Ok(PathCase {
        expression: expression_from_scheme(&sc),
        factor: factor_from_scheme(&sc),
        bounds,
    })
}
