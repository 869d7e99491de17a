//! Seeded fixture generators.  The seed alone fixes the output.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hcw_core::expr::{CwExpression, HcwExpression, NodeId};
use hcw_core::graph::{product_adjacent, LoopGraph, ProductVertex};
use hcw_core::induced::ProductSubgraph;
use hcw_core::planar::{grow_triangulation, EmbeddedGraph};
use hcw_core::treedecomp::TreeDecomposition;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random triangulation on `n >= 3` vertices: repeated face insertions
/// followed by `4n` random flips.
pub fn random_triangulation(seed: u64, n: usize) -> EmbeddedGraph {
    let mut r = rng(seed);
    grow_triangulation(n.max(3), 4 * n, &mut |k| r.gen_range(0..k))
}

pub fn random_graph(r: &mut impl Rng, n: usize, p: f64) -> LoopGraph {
    let mut g = LoopGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// A random spanning tree plus independent edges with probability `p`.
pub fn random_connected_graph(r: &mut impl Rng, n: usize, p: f64) -> LoopGraph {
    let mut g = random_graph(r, n, p);
    for v in 1..n {
        let u = r.gen_range(0..v);
        g.add_edge(u, v);
    }
    g
}

/// Random graph of tree-width at most `k` with a witness decomposition:
/// a random `k`-tree with 30% of its edges removed.
pub fn partial_ktree(r: &mut impl Rng, n: usize, k: usize) -> (LoopGraph, TreeDecomposition) {
    let start = (k + 1).min(n);
    let mut g = LoopGraph::complete(start);
    let mut bags = vec![(0..start).collect::<Vec<_>>()];
    let mut edges = Vec::new();
    for v in start..n {
        g.add_vertex();
        let c = r.gen_range(0..bags.len());
        let mut base = bags[c].clone();
        if base.len() > k {
            base.remove(r.gen_range(0..base.len()));
        }
        for &u in &base {
            g.add_edge(u, v);
        }
        base.push(v);
        bags.push(base);
        edges.push((c, bags.len() - 1));
    }
    for (u, v) in g.edges().collect::<Vec<_>>() {
        if r.gen_bool(0.3) {
            g.remove_edge(u, v);
        }
    }
    let td = TreeDecomposition::new(n, bags, &edges).expect("k-tree bags form a tree");
    (g, td)
}

/// Product members kept with probability `keep`, product edges between
/// them with probability `dense`.
pub fn random_product_subgraph(
    r: &mut impl Rng,
    q: &LoopGraph,
    m: &LoopGraph,
    keep: f64,
    dense: f64,
) -> ProductSubgraph {
    let mut members = Vec::new();
    for a in 0..q.vertex_count() {
        for b in 0..m.vertex_count() {
            if r.gen_bool(keep) {
                members.push(ProductVertex::new(a, b));
            }
        }
    }
    let mut g = LoopGraph::new(members.len());
    for x in 0..members.len() {
        for y in x + 1..members.len() {
            if product_adjacent(q, m, members[x], members[y]) && r.gen_bool(dense) {
                g.add_edge(x, y);
            }
        }
    }
    ProductSubgraph::new(q.clone(), m.clone(), members, g)
        .expect("members are distinct product vertices")
}

/// Shape of a random expression: `leaf` builds a leaf, `join` a union, and
/// `op(add, i, j, child)` an edge or recolour step.
fn random_tree(
    r: &mut impl Rng,
    ell: usize,
    n: usize,
    leaf: &mut dyn FnMut(&mut dyn rand::RngCore) -> NodeId,
    join: &mut dyn FnMut(NodeId, NodeId) -> NodeId,
    op: &mut dyn FnMut(bool, usize, usize, NodeId) -> NodeId,
) -> NodeId {
    let mut node = if n == 1 {
        leaf(r)
    } else {
        let left = r.gen_range(1..n);
        let a = random_tree(r, ell, left, leaf, join, op);
        let b = random_tree(r, ell, n - left, leaf, join, op);
        join(a, b)
    };
    if ell >= 2 {
        for _ in 0..r.gen_range(0..3) {
            let i = r.gen_range(1..=ell);
            let mut j = r.gen_range(1..=ell);
            while j == i {
                j = r.gen_range(1..=ell);
            }
            node = op(r.gen_bool(0.7), i, j, node);
        }
    }
    node
}

/// Classic expression with `n` leaves over colours `1..=ell`.
pub fn random_cw_expression(r: &mut impl Rng, ell: usize, n: usize) -> CwExpression {
    use std::cell::RefCell;
    let e = RefCell::new(CwExpression::new(ell));
    random_tree(
        r,
        ell,
        n.max(1),
        &mut |r| {
            let c = r.gen_range(1..=ell);
            e.borrow_mut().create(c)
        },
        &mut |a, b| e.borrow_mut().union(a, b),
        &mut |add, i, j, c| {
            if add {
                e.borrow_mut().add_edges(i, j, c)
            } else {
                e.borrow_mut().recolor(i, j, c)
            }
        },
    );
    e.into_inner()
}

/// Expression with `n` leaves whose parameter vertices are uniform in
/// `param`.
pub fn random_hcw_expression(
    r: &mut impl Rng,
    param: &LoopGraph,
    ell: usize,
    n: usize,
) -> HcwExpression {
    use std::cell::RefCell;
    let np = param.vertex_count();
    let e = RefCell::new(HcwExpression::new(ell, param.clone()));
    random_tree(
        r,
        ell,
        n.max(1),
        &mut |r| {
            let c = r.gen_range(1..=ell);
            let v = r.gen_range(0..np);
            e.borrow_mut().create(c, v)
        },
        &mut |a, b| e.borrow_mut().union(a, b),
        &mut |add, i, j, c| {
            if add {
                e.borrow_mut().add_edges(i, j, c)
            } else {
                e.borrow_mut().recolor(i, j, c)
            }
        },
    );
    e.into_inner()
}

/// Reflexive path on `n` vertices.
pub fn reflexive_path(n: usize) -> LoopGraph {
    LoopGraph::path(n).reflexive_closure()
}
