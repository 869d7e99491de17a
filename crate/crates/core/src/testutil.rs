//! Random fixtures shared by unit tests.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::expr::{CwExpression, HcwExpression, NodeId};
use crate::graph::LoopGraph;
use crate::treedecomp::TreeDecomposition;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> LoopGraph {
    let mut g = LoopGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

pub fn random_connected_graph(rng: &mut impl Rng, n: usize, p: f64) -> LoopGraph {
    let mut g = random_graph(rng, n, p);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        g.add_edge(u, v);
    }
    g
}

/// Random sequence of colour operations wrapping `node`.
fn decorate<F, G>(
    rng: &mut impl Rng,
    ell: usize,
    mut node: NodeId,
    add: &mut F,
    rec: &mut G,
) -> NodeId
where
    F: FnMut(usize, usize, NodeId) -> NodeId,
    G: FnMut(usize, usize, NodeId) -> NodeId,
{
    if ell < 2 {
        return node;
    }
    for _ in 0..rng.gen_range(0..3) {
        let i = rng.gen_range(1..=ell);
        let mut j = rng.gen_range(1..=ell);
        while j == i {
            j = rng.gen_range(1..=ell);
        }
        node = if rng.gen_bool(0.7) {
            add(i, j, node)
        } else {
            rec(i, j, node)
        };
    }
    node
}

pub fn random_cw_expression(rng: &mut impl Rng, ell: usize, n: usize) -> CwExpression {
    use core::cell::RefCell;
    let e = RefCell::new(CwExpression::new(ell));
    fn go(rng: &mut impl Rng, e: &RefCell<CwExpression>, ell: usize, n: usize) -> NodeId {
        let node = if n == 1 {
            let c = rng.gen_range(1..=ell);
            e.borrow_mut().create(c)
        } else {
            let left = rng.gen_range(1..n);
            let a = go(rng, e, ell, left);
            let b = go(rng, e, ell, n - left);
            e.borrow_mut().union(a, b)
        };
        decorate(
            rng,
            ell,
            node,
            &mut |i, j, c| e.borrow_mut().add_edges(i, j, c),
            &mut |i, j, c| e.borrow_mut().recolor(i, j, c),
        )
    }
    go(rng, &e, ell, n);
    e.into_inner()
}

pub fn random_hcw_expression(
    rng: &mut impl Rng,
    param: &LoopGraph,
    ell: usize,
    n: usize,
) -> HcwExpression {
    use core::cell::RefCell;
    let e = RefCell::new(HcwExpression::new(ell, param.clone()));
    let np = param.vertex_count();
    fn go(
        rng: &mut impl Rng,
        e: &RefCell<HcwExpression>,
        ell: usize,
        np: usize,
        n: usize,
    ) -> NodeId {
        let node = if n == 1 {
            let c = rng.gen_range(1..=ell);
            let v = rng.gen_range(0..np);
            e.borrow_mut().create(c, v)
        } else {
            let left = rng.gen_range(1..n);
            let a = go(rng, e, ell, np, left);
            let b = go(rng, e, ell, np, n - left);
            e.borrow_mut().union(a, b)
        };
        decorate(
            rng,
            ell,
            node,
            &mut |i, j, c| e.borrow_mut().add_edges(i, j, c),
            &mut |i, j, c| e.borrow_mut().recolor(i, j, c),
        )
    }
    go(rng, &e, ell, np, n);
    e.into_inner()
}

/// Random graph of tree-width at most `k` with a witness decomposition.
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
    let td = TreeDecomposition::new(n, bags, &edges).unwrap();
    (g, td)
}
