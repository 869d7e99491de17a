//! Simple undirected graphs that may carry a loop on any vertex.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("vertex {v} out of range (graph has {n} vertices)")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("edge {v}-{v} is a loop; loops are declared separately")]
    LoopAsEdge { v: usize },
    #[error("factor graphs of a strong product must be loop-free (loop at {v})")]
    LoopInFactor { v: usize },
    #[error("graph is disconnected: vertex {v} unreachable from {root}")]
    Disconnected { root: usize, v: usize },
}

/// Vertex `[a, b]` of a strong product `A ⊠ B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductVertex {
    pub a: usize,
    pub b: usize,
}

impl ProductVertex {
    pub fn new(a: usize, b: usize) -> Self {
        ProductVertex { a, b }
    }
}

/// Adjacency lists are kept sorted and never contain the vertex itself;
/// loops live in a separate flag vector.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoopGraph {
    adj: Vec<Vec<usize>>,
    loops: Vec<bool>,
    edges: usize,
}

impl LoopGraph {
    pub fn new(n: usize) -> Self {
        LoopGraph {
            adj: vec![Vec::new(); n],
            loops: vec![false; n],
            edges: 0,
        }
    }

    /// Bulk constructor; duplicate edges are ignored.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { v: w, n });
                }
            }
            if u == v {
                return Err(GraphError::LoopAsEdge { v });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut count = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            count += list.len();
        }
        Ok(LoopGraph {
            adj,
            loops: vec![false; n],
            edges: count / 2,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Number of non-loop edges.
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn loop_count(&self) -> usize {
        self.loops.iter().filter(|&&l| l).count()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.loops.push(false);
        self.adj.len() - 1
    }

    fn check(&self, v: usize) -> Result<(), GraphError> {
        if v < self.adj.len() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                v,
                n: self.adj.len(),
            })
        }
    }

    /// Returns whether the edge was new.
    pub fn try_add_edge(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(GraphError::LoopAsEdge { v });
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(i) => {
                self.adj[u].insert(i, v);
                let j = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(j, u);
                self.edges += 1;
                Ok(true)
            }
        }
    }

    /// Panics on out-of-range vertices or `u == v`.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        self.try_add_edge(u, v).expect("invalid edge")
    }

    pub fn try_add_loop(&mut self, v: usize) -> Result<(), GraphError> {
        self.check(v)?;
        self.loops[v] = true;
        Ok(())
    }

    pub fn add_loop(&mut self, v: usize) {
        self.try_add_loop(v).expect("invalid loop")
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.adj.len() || v >= self.adj.len() || u == v {
            return false;
        }
        match self.adj[u].binary_search(&v) {
            Ok(i) => {
                self.adj[u].remove(i);
                let j = self.adj[v].binary_search(&u).unwrap();
                self.adj[v].remove(j);
                self.edges -= 1;
                true
            }
            Err(_) => false,
        }
    }

    /// `has_edge(v, v)` reports the loop flag.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.adj.len() || v >= self.adj.len() {
            return false;
        }
        if u == v {
            return self.loops[u];
        }
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.loops[v]
    }

    /// Neighbours other than `v` itself, ascending.
    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Maximum degree ignoring loops.
    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_reflexive(&self) -> bool {
        self.loops.iter().all(|&l| l)
    }

    pub fn has_any_loop(&self) -> bool {
        self.loops.iter().any(|&l| l)
    }

    /// Non-loop edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn loops(&self) -> impl Iterator<Item = usize> + '_ {
        self.loops
            .iter()
            .enumerate()
            .filter(|(_, &l)| l)
            .map(|(v, _)| v)
    }

    pub fn reflexive_closure(&self) -> LoopGraph {
        let mut g = self.clone();
        g.loops.iter_mut().for_each(|l| *l = true);
        g
    }

    pub fn strip_loops(&self) -> LoopGraph {
        let mut g = self.clone();
        g.loops.iter_mut().for_each(|l| *l = false);
        g
    }

    /// Subgraph induced by `vertices` (kept in the given order); vertex `i`
    /// of the result is `vertices[i]`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> LoopGraph {
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        let mut g = LoopGraph::from_edges(vertices.len(), &edges).expect("induced edges valid");
        for (i, &v) in vertices.iter().enumerate() {
            g.loops[i] = self.loops[v];
        }
        g
    }

    /// Connected components, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Breadth-first distances from `s`; `usize::MAX` when unreachable.
    pub fn distances(&self, s: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Same vertex set, edges between vertices at distance one or two.
    pub fn square(&self) -> LoopGraph {
        let n = self.vertex_count();
        let mut edges = Vec::new();
        for v in 0..n {
            for &w in &self.adj[v] {
                if w > v {
                    edges.push((v, w));
                }
                for &x in &self.adj[w] {
                    if x > v {
                        edges.push((v, x));
                    }
                }
            }
        }
        let mut g = LoopGraph::from_edges(n, &edges).expect("square edges valid");
        g.loops.clone_from(&self.loops);
        g
    }

    /// Replaces every edge by a path with `k` internal vertices.  New
    /// vertices are appended per edge in `edges()` order, listed from the
    /// smaller endpoint to the larger.
    pub fn subdivide(&self, k: usize) -> LoopGraph {
        let n = self.vertex_count();
        let mut out = LoopGraph::new(n + k * self.edge_count());
        let mut next = n;
        for (u, v) in self.edges() {
            let mut prev = u;
            for _ in 0..k {
                out.add_edge(prev, next);
                prev = next;
                next += 1;
            }
            out.add_edge(prev, v);
        }
        out
    }

    pub fn path(n: usize) -> LoopGraph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        LoopGraph::from_edges(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> LoopGraph {
        assert!(n >= 3, "cycles need at least three vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        LoopGraph::from_edges(n, &edges).unwrap()
    }

    pub fn complete(n: usize) -> LoopGraph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        LoopGraph::from_edges(n, &edges).unwrap()
    }

    /// Star with centre 0 and leaves `1..=leaves`.
    pub fn star(leaves: usize) -> LoopGraph {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        LoopGraph::from_edges(leaves + 1, &edges).unwrap()
    }

    /// `rows × cols` grid, vertex `(i, j)` has id `i * cols + j`.
    pub fn grid(rows: usize, cols: usize) -> LoopGraph {
        let mut edges = Vec::new();
        for i in 0..rows {
            for j in 0..cols {
                let v = i * cols + j;
                if j + 1 < cols {
                    edges.push((v, v + 1));
                }
                if i + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        LoopGraph::from_edges(rows * cols, &edges).unwrap()
    }

    /// Vertex order of a path graph from its smaller endpoint, or `None`
    /// when the loop-free part is not a path.
    pub fn path_order(&self) -> Option<Vec<usize>> {
        let n = self.vertex_count();
        if n == 0 {
            return Some(Vec::new());
        }
        if self.edge_count() + 1 != n || self.adj.iter().any(|l| l.len() > 2) {
            return None;
        }
        let start = (0..n).find(|&v| self.adj[v].len() <= 1)?;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = self.adj[cur].iter().find(|&&w| w != prev) {
            order.push(next);
            prev = cur;
            cur = next;
        }
        (order.len() == n).then_some(order)
    }
}

/// Strong product `a ⊠ b`; `[x, y]` gets id `x * |V(b)| + y`.
pub fn strong_product(a: &LoopGraph, b: &LoopGraph) -> Result<LoopGraph, GraphError> {
    for g in [a, b] {
        if let Some(v) = g.loops().next() {
            return Err(GraphError::LoopInFactor { v });
        }
    }
    let nb = b.vertex_count();
    let id = |x: usize, y: usize| x * nb + y;
    let mut edges = Vec::new();
    for x in 0..a.vertex_count() {
        for y in 0..nb {
            for &y2 in b.neighbours(y) {
                if y2 > y {
                    edges.push((id(x, y), id(x, y2)));
                }
            }
            for &x2 in a.neighbours(x) {
                if x2 < x {
                    continue;
                }
                edges.push((id(x, y), id(x2, y)));
                for &y2 in b.neighbours(y) {
                    edges.push((id(x, y), id(x2, y2)));
                }
            }
        }
    }
    LoopGraph::from_edges(a.vertex_count() * nb, &edges)
}

/// Adjacency in `a ⊠ b` computed on the fly; loops on the factors are
/// ignored.
pub fn product_adjacent(a: &LoopGraph, b: &LoopGraph, p: ProductVertex, q: ProductVertex) -> bool {
    if p == q {
        return false;
    }
    let ea = p.a == q.a || (p.a != q.a && a.has_edge(p.a, q.a));
    let eb = p.b == q.b || (p.b != q.b && b.has_edge(p.b, q.b));
    ea && eb
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfsTree {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub level: Vec<usize>,
    /// Vertices in visiting order.
    pub order: Vec<usize>,
}

impl BfsTree {
    pub fn depth(&self) -> usize {
        self.level.iter().copied().max().unwrap_or(0)
    }
}

/// Breadth-first spanning tree; neighbours are explored in ascending order.
pub fn bfs_tree(g: &LoopGraph, root: usize) -> Result<BfsTree, GraphError> {
    let n = g.vertex_count();
    if root >= n {
        return Err(GraphError::VertexOutOfRange { v: root, n });
    }
    let mut parent = vec![None; n];
    let mut level = vec![usize::MAX; n];
    level[root] = 0;
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for &w in g.neighbours(v) {
            if level[w] == usize::MAX {
                level[w] = level[v] + 1;
                parent[w] = Some(v);
                order.push(w);
            }
        }
    }
    if let Some(v) = (0..n).find(|&v| level[v] == usize::MAX) {
        return Err(GraphError::Disconnected { root, v });
    }
    Ok(BfsTree {
        root,
        parent,
        level,
        order,
    })
}

/// Greedy proper colouring of the square of `g` in breadth-first order
/// (components are started at their least vertex).  Colours are `1..=d`.
pub fn greedy_square_coloring(g: &LoopGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let sq = g.square();
    let mut colour = vec![0usize; n];
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let start = order.len();
        order.push(s);
        let mut i = start;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for &w in g.neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    let mut used = Vec::new();
    for &v in &order {
        used.clear();
        used.extend(
            sq.neighbours(v)
                .iter()
                .map(|&w| colour[w])
                .filter(|&c| c > 0),
        );
        used.sort_unstable();
        used.dedup();
        let mut c = 1;
        for &u in &used {
            if u == c {
                c += 1;
            } else if u > c {
                break;
            }
        }
        colour[v] = c;
    }
    colour
}

/// Whether `colour` is a proper colouring of the square of `g`.
pub fn is_square_coloring(g: &LoopGraph, colour: &[usize]) -> bool {
    let sq = g.square();
    colour.len() == g.vertex_count() && sq.edges().all(|(u, v)| colour[u] != colour[v])
}
