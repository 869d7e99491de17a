//! Rooted tree decompositions, the derived sets used by the product
//! constructions, and an exact tree-width oracle for small graphs.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::LoopGraph;

pub const DEFAULT_TW_CAP: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TdError {
    #[error("tree edge mentions node {node}, only {nodes} nodes")]
    NodeOutOfRange { node: usize, nodes: usize },
    #[error("decomposition tree is not a tree (node {node} unreachable or revisited)")]
    NotATree { node: usize },
    #[error("decomposition has no nodes")]
    Empty,
    #[error("bag of node {node} has {size} vertices, declared width allows {allowed}")]
    BagTooLarge {
        node: usize,
        size: usize,
        allowed: usize,
    },
    #[error("vertex {v} appears in no bag")]
    Uncovered { v: usize },
    #[error("graph has {n} vertices, exact tree-width is capped at {cap}")]
    CapExceeded { n: usize, cap: usize },
}

/// Tree rooted at node 0 with one bag per node.  Bags are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    /// Number of vertices of the decomposed graph.
    pub n: usize,
    bags: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl TreeDecomposition {
    /// `edges` are tree edges in either orientation; the tree is rooted at
    /// node 0.
    pub fn new(
        n: usize,
        mut bags: Vec<Vec<usize>>,
        edges: &[(usize, usize)],
    ) -> Result<Self, TdError> {
        let nodes = bags.len();
        if nodes == 0 {
            return Err(TdError::Empty);
        }
        let mut adj = vec![Vec::new(); nodes];
        for &(a, b) in edges {
            for x in [a, b] {
                if x >= nodes {
                    return Err(TdError::NodeOutOfRange { node: x, nodes });
                }
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        if edges.len() != nodes - 1 {
            return Err(TdError::NotATree { node: 0 });
        }
        let mut parent = vec![None; nodes];
        let mut children = vec![Vec::new(); nodes];
        let mut seen = vec![false; nodes];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(t) = queue.pop_front() {
            adj[t].sort_unstable();
            for &c in &adj[t] {
                if Some(c) == parent[t] {
                    continue;
                }
                if seen[c] {
                    return Err(TdError::NotATree { node: c });
                }
                seen[c] = true;
                parent[c] = Some(t);
                children[t].push(c);
                queue.push_back(c);
            }
        }
        if let Some(node) = seen.iter().position(|&s| !s) {
            return Err(TdError::NotATree { node });
        }
        for b in &mut bags {
            b.sort_unstable();
            b.dedup();
        }
        Ok(TreeDecomposition {
            n,
            bags,
            parent,
            children,
        })
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn bag(&self, t: usize) -> &[usize] {
        &self.bags[t]
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn parent(&self, t: usize) -> Option<usize> {
        self.parent[t]
    }

    pub fn children(&self, t: usize) -> &[usize] {
        &self.children[t]
    }

    /// Tree edges as `(parent, child)`.
    pub fn tree_edges(&self) -> Vec<(usize, usize)> {
        (0..self.node_count())
            .filter_map(|t| self.parent[t].map(|p| (p, t)))
            .collect()
    }

    pub fn max_bag(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn width(&self) -> usize {
        self.max_bag().saturating_sub(1)
    }

    /// Nodes with every child before its parent.
    pub fn post_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.node_count());
        let mut stack = vec![(0usize, false)];
        while let Some((t, done)) = stack.pop() {
            if done {
                order.push(t);
            } else {
                stack.push((t, true));
                for &c in self.children[t].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        order
    }

    /// Nodes with every parent before its children.
    pub fn pre_order(&self) -> Vec<usize> {
        let mut order = self.post_order();
        order.reverse();
        order
    }

    /// Same tree, bags replaced.
    pub fn with_bags(&self, n: usize, bags: Vec<Vec<usize>>) -> TreeDecomposition {
        assert_eq!(bags.len(), self.node_count());
        let mut td = self.clone();
        td.n = n;
        td.bags = bags;
        for b in &mut td.bags {
            b.sort_unstable();
            b.dedup();
        }
        td
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TdVerdict {
    Accept {
        width: usize,
    },
    VertexOutOfRange {
        node: usize,
        v: usize,
    },
    /// Axiom (i).
    Uncovered {
        v: usize,
    },
    /// Axiom (ii): the nodes holding `v` are not connected.
    Disconnected {
        v: usize,
    },
    /// Axiom (iii).
    EdgeNotCovered {
        u: usize,
        v: usize,
    },
}

impl TdVerdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, TdVerdict::Accept { .. })
    }
}

impl fmt::Display for TdVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TdVerdict::Accept { width } => write!(f, "ACCEPT width {width}"),
            TdVerdict::VertexOutOfRange { node, v } => {
                write!(f, "REJECT bag {node} holds vertex {v} outside the graph")
            }
            TdVerdict::Uncovered { v } => write!(f, "REJECT axiom (i): vertex {v} in no bag"),
            TdVerdict::Disconnected { v } => {
                write!(f, "REJECT axiom (ii): bags holding {v} are not connected")
            }
            TdVerdict::EdgeNotCovered { u, v } => {
                write!(f, "REJECT axiom (iii): edge {u}-{v} in no bag")
            }
        }
    }
}

/// Checks the three axioms in order and reports the first violation.
pub fn validate_decomposition(g: &LoopGraph, td: &TreeDecomposition) -> TdVerdict {
    let n = g.vertex_count();
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (t, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v >= n {
                return TdVerdict::VertexOutOfRange { node: t, v };
            }
            holders[v].push(t);
        }
    }
    if let Some(v) = (0..n).find(|&v| holders[v].is_empty()) {
        return TdVerdict::Uncovered { v };
    }
    // Nodes holding v are connected iff exactly one of them has a parent
    // outside the set.
    let mut contains = vec![false; td.node_count()];
    for v in 0..n {
        for &t in &holders[v] {
            contains[t] = true;
        }
        let tops = holders[v]
            .iter()
            .filter(|&&t| td.parent[t].is_none_or(|p| !contains[p]))
            .count();
        for &t in &holders[v] {
            contains[t] = false;
        }
        if tops != 1 {
            return TdVerdict::Disconnected { v };
        }
    }
    for (u, v) in g.edges() {
        let (a, b) = (&holders[u], &holders[v]);
        let (mut i, mut j) = (0, 0);
        let mut shared = false;
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => {
                    shared = true;
                    break;
                }
            }
        }
        if !shared {
            return TdVerdict::EdgeNotCovered { u, v };
        }
    }
    TdVerdict::Accept { width: td.width() }
}

/// Splits nodes with more than two children into chains of copies of their
/// bag.  New nodes are appended after the existing ones.
pub fn binarize(td: &TreeDecomposition) -> TreeDecomposition {
    let mut bags = td.bags.clone();
    let mut edges = Vec::new();
    for t in 0..td.node_count() {
        let ch = &td.children[t];
        if ch.len() <= 2 {
            edges.extend(ch.iter().map(|&c| (t, c)));
            continue;
        }
        let mut cur = t;
        for (i, &c) in ch.iter().enumerate() {
            edges.push((cur, c));
            if i + 2 == ch.len() {
                edges.push((cur, ch[i + 1]));
                break;
            }
            bags.push(td.bags[t].clone());
            let copy = bags.len() - 1;
            edges.push((cur, copy));
            cur = copy;
        }
    }
    TreeDecomposition::new(td.n, bags, &edges).expect("binarized tree is a tree")
}

/// Sets derived from a rooted decomposition: `xplus[t]` is the union of the
/// bags at and below `t`, `y[t]` the part of it that does not occur in the
/// parent bag, and `p` labels vertices injectively on every bag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionContext {
    pub xplus: Vec<Vec<usize>>,
    pub y: Vec<Vec<usize>>,
    pub p: Vec<usize>,
    /// Topmost node holding each vertex.
    pub top: Vec<usize>,
    pub k: usize,
}

pub fn derive_context(td: &TreeDecomposition) -> Result<DecompositionContext, TdError> {
    derive_context_with_width(td, td.width())
}

pub fn derive_context_with_width(
    td: &TreeDecomposition,
    k: usize,
) -> Result<DecompositionContext, TdError> {
    for (node, b) in td.bags.iter().enumerate() {
        if b.len() > k + 1 {
            return Err(TdError::BagTooLarge {
                node,
                size: b.len(),
                allowed: k + 1,
            });
        }
    }
    let nodes = td.node_count();
    let mut xplus: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for t in td.post_order() {
        let mut set = td.bags[t].clone();
        for &c in &td.children[t] {
            set.extend_from_slice(&xplus[c]);
        }
        set.sort_unstable();
        set.dedup();
        xplus[t] = set;
    }
    let y: Vec<Vec<usize>> = (0..nodes)
        .map(|t| match td.parent[t] {
            None => xplus[t].clone(),
            Some(p) => xplus[t]
                .iter()
                .copied()
                .filter(|v| td.bags[p].binary_search(v).is_err())
                .collect(),
        })
        .collect();
    let mut p = vec![usize::MAX; td.n];
    let mut top = vec![usize::MAX; td.n];
    for t in td.pre_order() {
        let bag = &td.bags[t];
        let mut used: Vec<usize> = bag
            .iter()
            .filter(|&&v| v < td.n && p[v] != usize::MAX)
            .map(|&v| p[v])
            .collect();
        used.sort_unstable();
        for &v in bag {
            if v >= td.n || p[v] != usize::MAX {
                continue;
            }
            let label = (0..=k)
                .find(|l| used.binary_search(l).is_err())
                .expect("bag within width");
            p[v] = label;
            top[v] = t;
            let pos = used.binary_search(&label).unwrap_err();
            used.insert(pos, label);
        }
    }
    if let Some(v) = (0..td.n).find(|&v| p[v] == usize::MAX) {
        return Err(TdError::Uncovered { v });
    }
    Ok(DecompositionContext {
        xplus,
        y,
        p,
        top,
        k,
    })
}

/// Exact tree-width with the default size cap.
pub fn exact_treewidth(g: &LoopGraph) -> Result<(usize, TreeDecomposition), TdError> {
    exact_treewidth_capped(g, DEFAULT_TW_CAP)
}

/// Dynamic programme over vertex subsets: the cost of eliminating `v` after
/// the set `S` is the number of vertices outside `S ∪ {v}` reachable from
/// `v` through `S`.  Returns the width and a witness decomposition built
/// from an optimal elimination order.
pub fn exact_treewidth_capped(
    g: &LoopGraph,
    cap: usize,
) -> Result<(usize, TreeDecomposition), TdError> {
    let n = g.vertex_count();
    if n > cap || n > 30 {
        return Err(TdError::CapExceeded { n, cap });
    }
    if n == 0 {
        return Ok((0, TreeDecomposition::new(0, vec![Vec::new()], &[]).unwrap()));
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbours(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let reach = |s: u32, v: usize| -> u32 {
        // Vertices outside s ∪ {v} adjacent to the component of v in s ∪ {v}.
        let mut comp = 1u32 << v;
        let mut frontier = comp;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let w = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= adj[w] & s;
            }
            next &= !comp;
            comp |= next;
            frontier = next;
        }
        let mut out = 0;
        let mut c = comp;
        while c != 0 {
            let w = c.trailing_zeros() as usize;
            c &= c - 1;
            out |= adj[w];
        }
        out & !comp & !s
    };
    let size = 1usize << n;
    let mut tw = vec![u8::MAX; size];
    let mut choice = vec![0u8; size];
    tw[0] = 0;
    for s in 1..size as u32 {
        let mut best = u8::MAX;
        let mut bv = 0;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = s & !(1 << v);
            let q = reach(rest, v).count_ones() as u8;
            let cost = tw[rest as usize].max(q);
            if cost < best {
                best = cost;
                bv = v as u8;
            }
        }
        tw[s as usize] = best;
        choice[s as usize] = bv;
    }
    let width = tw[full as usize] as usize;
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = choice[s as usize] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    let td = elimination_decomposition(g, &order);
    debug_assert_eq!(td.width(), width);
    Ok((width, td))
}

/// Decomposition from an elimination order; node 0 holds the last vertex.
pub fn elimination_decomposition(g: &LoopGraph, order: &[usize]) -> TreeDecomposition {
    let n = g.vertex_count();
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut higher: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            g.neighbours(v)
                .iter()
                .copied()
                .filter(|&w| pos[w] > pos[v])
                .collect()
        })
        .collect();
    let node = |v: usize| n - 1 - pos[v];
    let mut bags = vec![Vec::new(); n];
    let mut edges = Vec::new();
    for &v in order {
        let mut nb = core::mem::take(&mut higher[v]);
        nb.sort_unstable();
        nb.dedup();
        let mut bag = nb.clone();
        bag.push(v);
        bags[node(v)] = bag;
        if let Some(&first) = nb.iter().min_by_key(|&&w| pos[w]) {
            edges.push((node(first), node(v)));
            for &w in &nb {
                if w != first {
                    higher[first].push(w);
                }
            }
        } else if node(v) != 0 {
            edges.push((0, node(v)));
        }
    }
    TreeDecomposition::new(n, bags, &edges).expect("elimination tree is a tree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{partial_ktree, random_connected_graph, random_graph, rng};
    use rand::Rng;

    fn p3_td() -> TreeDecomposition {
        TreeDecomposition::new(3, vec![vec![0, 1], vec![1, 2]], &[(0, 1)]).unwrap()
    }

    #[test]
    fn path_decomposition_accepts() {
        assert_eq!(
            validate_decomposition(&LoopGraph::path(3), &p3_td()),
            TdVerdict::Accept { width: 1 }
        );
    }

    #[test]
    fn missing_edge_rejects_axiom_three() {
        let mut g = LoopGraph::path(3);
        g.add_edge(0, 2);
        assert_eq!(
            validate_decomposition(&g, &p3_td()),
            TdVerdict::EdgeNotCovered { u: 0, v: 2 }
        );
    }

    #[test]
    fn axioms_one_and_two() {
        let td = TreeDecomposition::new(3, vec![vec![0, 1], vec![1]], &[(0, 1)]).unwrap();
        assert_eq!(
            validate_decomposition(&LoopGraph::path(3), &td),
            TdVerdict::Uncovered { v: 2 }
        );
        let td =
            TreeDecomposition::new(3, vec![vec![0], vec![1, 2], vec![0, 1]], &[(0, 1), (1, 2)])
                .unwrap();
        assert_eq!(
            validate_decomposition(&LoopGraph::path(3), &td),
            TdVerdict::Disconnected { v: 0 }
        );
        assert!(TreeDecomposition::new(2, vec![vec![0], vec![1]], &[]).is_err());
        assert!(
            TreeDecomposition::new(2, vec![vec![0], vec![1], vec![0]], &[(0, 1), (1, 0)]).is_err()
        );
    }

    /// Direct evaluation of the axioms, node set by node set.
    fn axioms_hold(g: &LoopGraph, td: &TreeDecomposition) -> bool {
        let n = g.vertex_count();
        let cover = (0..n).all(|v| td.bags().iter().any(|b| b.contains(&v)));
        let edges = g
            .edges()
            .all(|(u, v)| td.bags().iter().any(|b| b.contains(&u) && b.contains(&v)));
        let connected = (0..n).all(|v| {
            let nodes: Vec<usize> = (0..td.node_count())
                .filter(|&t| td.bag(t).contains(&v))
                .collect();
            if nodes.is_empty() {
                return true;
            }
            let mut seen = vec![nodes[0]];
            let mut i = 0;
            while i < seen.len() {
                let t = seen[i];
                i += 1;
                let mut nbrs: Vec<usize> = td.children(t).to_vec();
                nbrs.extend(td.parent(t));
                for s in nbrs {
                    if td.bag(s).contains(&v) && !seen.contains(&s) {
                        seen.push(s);
                    }
                }
            }
            seen.len() == nodes.len()
        });
        cover && edges && connected
    }

    fn random_td(r: &mut impl Rng, n: usize, nodes: usize) -> TreeDecomposition {
        let edges: Vec<_> = (1..nodes).map(|t| (r.gen_range(0..t), t)).collect();
        let bags = (0..nodes)
            .map(|_| (0..n).filter(|_| r.gen_bool(0.5)).collect())
            .collect();
        TreeDecomposition::new(n, bags, &edges).unwrap()
    }

    #[test]
    fn verdict_agrees_with_direct_axioms_on_k4() {
        let mut r = rng(3);
        let k4 = LoopGraph::complete(4);
        let mut accepted = 0;
        for _ in 0..500 {
            let nodes = r.gen_range(1..5);
            let td = random_td(&mut r, 4, nodes);
            let ok = validate_decomposition(&k4, &td).is_accept();
            assert_eq!(ok, axioms_hold(&k4, &td));
            accepted += ok as usize;
        }
        assert!(accepted > 0);
    }

    #[test]
    fn binarize_star() {
        let bags = vec![vec![0, 1], vec![1, 2], vec![1, 3], vec![1, 4], vec![1, 5]];
        let td = TreeDecomposition::new(6, bags, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let star = LoopGraph::star(5).induced_subgraph(&[1, 0, 2, 3, 4, 5]);
        assert!(validate_decomposition(&star, &td).is_accept());
        let b = binarize(&td);
        assert!(validate_decomposition(&star, &b).is_accept());
        assert_eq!(b.width(), td.width());
        assert!((0..b.node_count()).all(|t| b.children(t).len() <= 2));
        assert_eq!(b.node_count(), 7);
        assert_eq!(binarize(&p3_td()), p3_td());
    }

    /// Random partial k-tree on `n` vertices with its natural decomposition.
    #[test]
    fn binarize_keeps_width_on_random() {
        let mut r = rng(5);
        for _ in 0..30 {
            let n = r.gen_range(3..12);
            let (g, td) = partial_ktree(&mut r, n, 2);
            assert!(validate_decomposition(&g, &td).is_accept());
            let b = binarize(&td);
            assert!(validate_decomposition(&g, &b).is_accept());
            assert_eq!(b.width(), td.width());
        }
    }

    #[test]
    fn context_on_path_decomposition() {
        let td = TreeDecomposition::new(
            4,
            vec![vec![0, 1], vec![1, 2], vec![2, 3]],
            &[(0, 1), (1, 2)],
        )
        .unwrap();
        let ctx = derive_context(&td).unwrap();
        assert_eq!(ctx.y[2], vec![3]);
        assert_eq!(ctx.y[1], vec![2, 3]);
        assert_eq!(ctx.y[0], vec![0, 1, 2, 3]);
        assert_eq!(ctx.xplus[1], vec![1, 2, 3]);
        assert_eq!(ctx.p, vec![0, 1, 0, 1]);
        let single = TreeDecomposition::new(3, vec![vec![0, 1, 2]], &[]).unwrap();
        let ctx = derive_context(&single).unwrap();
        assert_eq!(ctx.y[0], vec![0, 1, 2]);
        assert_eq!(ctx.p, vec![0, 1, 2]);
        assert_eq!(
            derive_context_with_width(&single, 1),
            Err(TdError::BagTooLarge {
                node: 0,
                size: 3,
                allowed: 2
            })
        );
    }

    #[test]
    fn context_invariants_on_random_partial_two_trees() {
        let mut r = rng(8);
        for _ in 0..50 {
            let n = r.gen_range(2..14);
            let (g, td) = partial_ktree(&mut r, n, 2);
            let td = binarize(&td);
            let ctx = derive_context(&td).unwrap();
            for t in 0..td.node_count() {
                let bag = td.bag(t);
                let mut labels: Vec<usize> = bag.iter().map(|&v| ctx.p[v]).collect();
                labels.sort_unstable();
                labels.dedup();
                assert_eq!(labels.len(), bag.len(), "p injective on bag {t}");
                // Neighbours of Y_t outside Y_t sit in X_t \ Y_t.
                for &m in &ctx.y[t] {
                    for &w in g.neighbours(m) {
                        if ctx.y[t].binary_search(&w).is_err() {
                            assert!(bag.contains(&w));
                        }
                    }
                }
                // Children's Y sets are disjoint and their union is the
                // subtree minus the bag's part shared with the parent.
                let ch = td.children(t);
                if ch.len() == 2 {
                    let (a, b) = (&ctx.y[ch[0]], &ctx.y[ch[1]]);
                    assert!(a.iter().all(|v| b.binary_search(v).is_err()));
                }
                let mut below: Vec<usize> = bag
                    .iter()
                    .copied()
                    .filter(|v| ctx.y[t].binary_search(v).is_ok())
                    .collect();
                for &c in ch {
                    below.extend_from_slice(&ctx.y[c]);
                }
                below.sort_unstable();
                below.dedup();
                assert_eq!(below, ctx.y[t]);
            }
            assert!((0..n).all(|v| td.bag(ctx.top[v]).contains(&v)));
        }
    }

    /// Tree-width by trying every elimination order.
    fn treewidth_by_orders(g: &LoopGraph) -> usize {
        let n = g.vertex_count();
        let adj: Vec<u32> = (0..n)
            .map(|v| g.neighbours(v).iter().fold(0u32, |m, &w| m | 1 << w))
            .collect();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best = usize::MAX;
        fn permute(k: usize, perm: &mut Vec<usize>, adj: &[u32], best: &mut usize) {
            if k == perm.len() {
                let mut a = adj.to_vec();
                let mut alive = (1u32 << perm.len()) - 1;
                let mut w = 0;
                for &v in perm.iter() {
                    alive &= !(1 << v);
                    let nb = a[v] & alive;
                    w = w.max(nb.count_ones() as usize);
                    let mut bits = nb;
                    while bits != 0 {
                        let x = bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        a[x] |= nb & !(1 << x);
                    }
                }
                *best = (*best).min(w);
                return;
            }
            for i in k..perm.len() {
                perm.swap(k, i);
                permute(k + 1, perm, adj, best);
                perm.swap(k, i);
            }
        }
        permute(0, &mut perm, &adj, &mut best);
        best
    }

    #[test]
    fn exact_treewidth_examples() {
        let tree = LoopGraph::from_edges(6, &[(0, 1), (0, 2), (2, 3), (2, 4), (4, 5)]).unwrap();
        assert_eq!(exact_treewidth(&tree).unwrap().0, 1);
        assert_eq!(exact_treewidth(&LoopGraph::complete(5)).unwrap().0, 4);
        let (w, td) = exact_treewidth(&LoopGraph::grid(3, 3)).unwrap();
        assert_eq!(w, 3);
        assert_eq!(
            validate_decomposition(&LoopGraph::grid(3, 3), &td),
            TdVerdict::Accept { width: 3 }
        );
        assert_eq!(exact_treewidth(&LoopGraph::new(3)).unwrap().0, 0);
        assert_eq!(exact_treewidth(&LoopGraph::new(0)).unwrap().0, 0);
        assert_eq!(
            exact_treewidth(&LoopGraph::cycle(15)),
            Err(TdError::CapExceeded { n: 15, cap: 14 })
        );
        assert_eq!(
            exact_treewidth_capped(&LoopGraph::cycle(15), 16).unwrap().0,
            2
        );
    }

    #[test]
    fn exact_treewidth_matches_orders_and_witness() {
        let mut r = rng(21);
        for _ in 0..150 {
            let n = r.gen_range(1..8);
            let g = if r.gen_bool(0.5) {
                random_connected_graph(&mut r, n, 0.3)
            } else {
                random_graph(&mut r, n, 0.5)
            };
            let (w, td) = exact_treewidth(&g).unwrap();
            assert_eq!(w, treewidth_by_orders(&g));
            assert_eq!(
                validate_decomposition(&g, &td),
                TdVerdict::Accept { width: w }
            );
        }
    }
}
