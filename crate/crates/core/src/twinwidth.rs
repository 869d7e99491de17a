//! Contraction sequences: replay with red-edge bookkeeping, synthesis from
//! expressions over a reflexive path, and the embedding of 3-subdivisions
//! into products of two stars.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::embedding::ProductEmbedding;
use crate::expr::{ExprError, HcwExpression, Label, Node};
use crate::graph::{product_adjacent, LoopGraph, ProductVertex};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TwError {
    #[error("step {step} refers to vertex {v}, which is not alive")]
    DeadVertex { step: usize, v: usize },
    #[error("step {step} merges vertex {v} with itself")]
    SelfMerge { step: usize, v: usize },
    #[error("graph has a loop at {v}")]
    LoopInGraph { v: usize },
    #[error("parameter graph is not a reflexive path")]
    NotAPath,
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Merges over a graph on `n` vertices; step `i` merges two live vertices
/// into the new vertex `n + i`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ContractionSequence {
    pub n: usize,
    pub steps: Vec<(usize, usize)>,
}

impl ContractionSequence {
    pub fn new(n: usize) -> Self {
        ContractionSequence {
            n,
            steps: Vec::new(),
        }
    }

    /// Records a merge and returns the id of the merged vertex.
    pub fn merge(&mut self, u: usize, v: usize) -> usize {
        self.steps.push((u, v));
        self.n + self.steps.len() - 1
    }

    pub fn new_id(&self, step: usize) -> usize {
        self.n + step
    }

    pub fn is_complete(&self) -> bool {
        self.steps.len() + 1 >= self.n.max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReplayReport {
    pub max_red: usize,
    /// Trigraph index where `max_red` first occurs: 0 is the input graph,
    /// `i` the trigraph after step `i`.
    pub at: usize,
    /// Live vertices after the last step.
    pub remaining: usize,
}

/// Replays `seq` on `g`; merged vertices are red-adjacent to everything in
/// the symmetric difference of the two neighbourhoods and to every red
/// neighbour of either.
pub fn verify_contraction_sequence(
    g: &LoopGraph,
    seq: &ContractionSequence,
) -> Result<ReplayReport, TwError> {
    if let Some(v) = g.loops().next() {
        return Err(TwError::LoopInGraph { v });
    }
    let n = g.vertex_count();
    let total = n + seq.steps.len();
    // adjacency: neighbour -> red?
    let mut adj: Vec<BTreeMap<usize, bool>> = vec![BTreeMap::new(); total];
    for v in 0..n {
        adj[v] = g.neighbours(v).iter().map(|&w| (w, false)).collect();
    }
    let mut alive = vec![false; total];
    alive[..n].fill(true);
    let mut red = vec![0usize; total];
    let mut report = ReplayReport {
        max_red: 0,
        at: 0,
        remaining: n,
    };
    for (step, &(u, v)) in seq.steps.iter().enumerate() {
        for x in [u, v] {
            if x >= total || !alive[x] {
                return Err(TwError::DeadVertex { step, v: x });
            }
        }
        if u == v {
            return Err(TwError::SelfMerge { step, v: u });
        }
        let new = n + step;
        let au = core::mem::take(&mut adj[u]);
        let av = core::mem::take(&mut adj[v]);
        let mut merged = BTreeMap::new();
        for (&w, &r) in au.iter().chain(av.iter()) {
            if w == u || w == v {
                continue;
            }
            let both = au.contains_key(&w) && av.contains_key(&w);
            let is_red = r || !both || merged.get(&w).copied().unwrap_or(false);
            merged.insert(w, is_red);
        }
        for &w in au.keys().chain(av.keys()) {
            if w == u || w == v {
                continue;
            }
            if let Some(r) = adj[w].remove(&u) {
                red[w] -= r as usize;
            }
            if let Some(r) = adj[w].remove(&v) {
                red[w] -= r as usize;
            }
        }
        let mut touched = Vec::with_capacity(merged.len() + 1);
        for (&w, &r) in &merged {
            adj[w].insert(new, r);
            red[w] += r as usize;
            touched.push(w);
        }
        red[new] = merged.values().filter(|&&r| r).count();
        touched.push(new);
        adj[new] = merged;
        alive[u] = false;
        alive[v] = false;
        alive[new] = true;
        report.remaining -= 1;
        let here = touched.iter().map(|&w| red[w]).max().unwrap_or(0);
        if here > report.max_red {
            report.max_red = here;
            report.at = step + 1;
        }
    }
    Ok(report)
}

/// Red degree guaranteed for sequences from an `ell`-colour expression over a
/// reflexive path: `5ell - 2`.
pub fn red_degree_bound(ell: usize) -> usize {
    (5 * ell).saturating_sub(2)
}

/// Contracts same-label classes bottom-up along `expr`: at a union the two
/// children's classes are merged per path vertex, then per colour; at a
/// recolouring the two classes meet per path vertex; at the root the
/// remaining classes are merged per path vertex and then along the path.
/// Vertex ids are those of the expression's value.
pub fn contraction_from_path_expression(
    expr: &HcwExpression,
) -> Result<ContractionSequence, TwError> {
    let path = &expr.param;
    if !path.is_reflexive() {
        return Err(TwError::NotAPath);
    }
    let order = path.strip_loops().path_order().ok_or(TwError::NotAPath)?;
    if let Some(d) = expr
        .validate()
        .into_iter()
        .find(|d| d.severity == crate::expr::Severity::Error)
    {
        return Err(ExprError::Invalid(d).into());
    }
    let mut pos = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let nodes = expr.nodes();
    let leaf = crate::expr::leaf_order(nodes);
    let n = expr.vertex_count();
    let mut seq = ContractionSequence::new(n);
    // Classes keyed by (path position, colour).
    type Classes = BTreeMap<(usize, usize), usize>;
    let mut state: Vec<Option<Classes>> = vec![None; nodes.len()];
    for (id, node) in nodes.iter().enumerate() {
        let classes = match *node {
            Node::Create(Label { colour, pvertex }) => {
                BTreeMap::from([((pos[pvertex], colour), leaf[id])])
            }
            Node::Union(a, b) => {
                let mut left = state[a].take().expect("child before parent");
                for (key, x) in state[b].take().expect("child before parent") {
                    let merged = match left.get(&key) {
                        Some(&y) => seq.merge(y, x),
                        None => x,
                    };
                    left.insert(key, merged);
                }
                left
            }
            Node::AddEdges { child, .. } => state[child].take().expect("child before parent"),
            Node::Recolor { i, j, child } => {
                let mut cl = state[child].take().expect("child before parent");
                let moving: Vec<(usize, usize)> =
                    cl.keys().copied().filter(|&(_, c)| c == i).collect();
                for key in moving {
                    let x = cl.remove(&key).unwrap();
                    let target = (key.0, j);
                    let merged = match cl.get(&target) {
                        Some(&y) => seq.merge(y, x),
                        None => x,
                    };
                    cl.insert(target, merged);
                }
                cl
            }
        };
        state[id] = Some(classes);
    }
    if let Some(root) = state.last_mut().and_then(Option::take) {
        let mut per_vertex: BTreeMap<usize, usize> = BTreeMap::new();
        for ((p, _), x) in root {
            let merged = match per_vertex.get(&p) {
                Some(&y) => seq.merge(y, x),
                None => x,
            };
            per_vertex.insert(p, merged);
        }
        let mut acc: Option<usize> = None;
        for (_, x) in per_vertex {
            acc = Some(match acc {
                Some(y) => seq.merge(y, x),
                None => x,
            });
        }
    }
    Ok(seq)
}

/// Parts of the 3-subdivision of `g` placed in `S_n ⊠ S_n`.  Image index
/// `i` is vertex `i` of `subdivide(g, 3)`: the original vertices (`A1`),
/// then per edge `uv` (`u < v`) the vertices next to `u`, in the middle
/// (`A2`) and next to `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarSubdivision {
    pub n: usize,
    pub subdivision: LoopGraph,
    pub embedding: ProductEmbedding,
    pub a1: Vec<usize>,
    pub a2: Vec<usize>,
    pub b: Vec<usize>,
}

/// Star `S_n` has centre `0` and leaves `1..=n`; vertex `u` goes to
/// `[l_u, c]`, edge `e_k = uv` to `[c, l_k]` with `[l_u, l_k]`, `[l_v, l_k]`
/// on either side.
pub fn star_subdivision_embedding(g: &LoopGraph) -> Result<StarSubdivision, TwError> {
    if let Some(v) = g.loops().next() {
        return Err(TwError::LoopInGraph { v });
    }
    let nv = g.vertex_count();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let n = nv.max(edges.len());
    let star = LoopGraph::star(n);
    let leaf = |i: usize| i + 1;
    let mut image: Vec<ProductVertex> = (0..nv).map(|u| ProductVertex::new(leaf(u), 0)).collect();
    let a1 = (0..nv).collect();
    let mut a2 = Vec::new();
    let mut b = Vec::new();
    for (k, &(u, v)) in edges.iter().enumerate() {
        b.push(image.len());
        image.push(ProductVertex::new(leaf(u), leaf(k)));
        a2.push(image.len());
        image.push(ProductVertex::new(0, leaf(k)));
        b.push(image.len());
        image.push(ProductVertex::new(leaf(v), leaf(k)));
    }
    Ok(StarSubdivision {
        n,
        subdivision: g.subdivide(3),
        embedding: ProductEmbedding::new(star.clone(), star, image),
        a1,
        a2,
        b,
    })
}

/// Outcome of scanning a [`StarSubdivision`] against the product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StarScan {
    pub b_independent: bool,
    pub a2_two_into_b: bool,
    pub b_one_into_a1: bool,
    /// Every `A`–`B` pair is adjacent in the product iff it is in the
    /// subdivision.
    pub bipartite_part_matches: bool,
    /// Product edges inside `A`, which the subdivision lacks.
    pub a_edges: usize,
}

impl StarScan {
    pub fn is_ok(&self) -> bool {
        self.b_independent
            && self.a2_two_into_b
            && self.b_one_into_a1
            && self.bipartite_part_matches
    }
}

pub fn scan_star_subdivision(s: &StarSubdivision) -> StarScan {
    let emb = &s.embedding;
    let adj =
        |x: usize, y: usize| product_adjacent(&emb.left, &emb.right, emb.image[x], emb.image[y]);
    let b_independent =
        s.b.iter()
            .all(|&x| s.b.iter().all(|&y| x == y || !adj(x, y)));
    let a2_two_into_b =
        s.a2.iter()
            .all(|&x| s.b.iter().filter(|&&y| adj(x, y)).count() == 2);
    let b_one_into_a1 =
        s.b.iter()
            .all(|&y| s.a1.iter().filter(|&&x| adj(x, y)).count() == 1);
    let a: Vec<usize> = s.a1.iter().chain(&s.a2).copied().collect();
    let bipartite_part_matches = a.iter().all(|&x| {
        s.b.iter()
            .all(|&y| adj(x, y) == s.subdivision.has_edge(x, y))
    });
    let mut a_edges = 0;
    for (i, &x) in a.iter().enumerate() {
        a_edges += a[i + 1..].iter().filter(|&&y| adj(x, y)).count();
    }
    StarScan {
        b_independent,
        a2_two_into_b,
        b_one_into_a1,
        bipartite_part_matches,
        a_edges,
    }
}
