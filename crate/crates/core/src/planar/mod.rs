//! Planar graphs as induced subgraphs of `P ⊠ M` with `M` of tree-width at
//! most 39: embedded graphs, triangulation, the recursive decomposition
//! into vertical paths and its verifier.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::LoopGraph;

mod structure;
#[cfg(test)]
mod tests;
mod verify;

pub use structure::{
    build_planar_structure, decompose_cycle, CycleFrame, Decomposition, FrameRecord, PlanarBuild,
    PlanarState,
};
pub use verify::{
    verify_nice_structure, NiceProductStructure, NiceVerdict, NiceViolation, SLOTS, THICKNESS,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlanarError {
    #[error("embedded graph needs at least 3 vertices, got {n}")]
    TooSmall { n: usize },
    #[error("rotation at {v} does not list exactly its neighbours")]
    RotationMismatch { v: usize },
    #[error("rotation lists {got} vertices, graph has {n}")]
    RotationLength { got: usize, n: usize },
    #[error("graph has a loop at {v}")]
    Loop { v: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("rotation system is not planar: {n} - {m} + {f} != 2")]
    Euler { n: usize, m: usize, f: usize },
    #[error("outer vertices {0:?} are not consecutive on a face")]
    OuterNotFace([usize; 3]),
    #[error("frame around {cycle_start} has {arcs} boundary runs, at most 6 are allowed")]
    TooManyArcs { cycle_start: usize, arcs: usize },
    #[error("no valid split of the frame around {cycle_start} ({interior} inner vertices)")]
    NoDecomposition { cycle_start: usize, interior: usize },
    #[error("interior of the frame around {cycle_start} is disconnected without a chord")]
    DisconnectedInterior { cycle_start: usize },
}

/// A connected simple plane graph: `rotation[v]` lists the neighbours of `v`
/// in counter-clockwise order, and `outer` holds three consecutive
/// vertices of the outer face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedGraph {
    pub graph: LoopGraph,
    pub rotation: Vec<Vec<usize>>,
    pub outer: [usize; 3],
}

impl EmbeddedGraph {
    pub fn new(
        graph: LoopGraph,
        rotation: Vec<Vec<usize>>,
        outer: [usize; 3],
    ) -> Result<Self, PlanarError> {
        let eg = EmbeddedGraph {
            graph,
            rotation,
            outer,
        };
        eg.check()?;
        Ok(eg)
    }

    /// Builds the graph from the rotation lists themselves.
    pub fn from_rotation(
        rotation: Vec<Vec<usize>>,
        outer: [usize; 3],
    ) -> Result<Self, PlanarError> {
        let n = rotation.len();
        let mut g = LoopGraph::new(n);
        for (v, list) in rotation.iter().enumerate() {
            for &w in list {
                if w >= n {
                    return Err(PlanarError::RotationMismatch { v });
                }
                if w == v {
                    return Err(PlanarError::Loop { v });
                }
                g.add_edge(v, w);
            }
        }
        Self::new(g, rotation, outer)
    }

    fn check(&self) -> Result<(), PlanarError> {
        let n = self.graph.vertex_count();
        if n < 3 {
            return Err(PlanarError::TooSmall { n });
        }
        if self.rotation.len() != n {
            return Err(PlanarError::RotationLength {
                got: self.rotation.len(),
                n,
            });
        }
        if let Some(v) = self.graph.loops().next() {
            return Err(PlanarError::Loop { v });
        }
        for v in 0..n {
            let mut r = self.rotation[v].clone();
            r.sort_unstable();
            if r != self.graph.neighbours(v) {
                return Err(PlanarError::RotationMismatch { v });
            }
        }
        if !self.graph.is_connected() {
            return Err(PlanarError::Disconnected);
        }
        let f = self.faces().len();
        let m = self.graph.edge_count();
        if n + f != m + 2 {
            return Err(PlanarError::Euler { n, m, f });
        }
        let [a, b, c] = self.outer;
        let ok = |x: usize, y: usize, z: usize| {
            x < n && y < n && z < n && self.graph.has_edge(x, y) && self.face_next(x, y) == (y, z)
        };
        if !ok(a, b, c) && !ok(c, b, a) {
            return Err(PlanarError::OuterNotFace(self.outer));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    fn index(&self, v: usize, w: usize) -> usize {
        self.rotation[v]
            .iter()
            .position(|&x| x == w)
            .expect("neighbour in rotation")
    }

    /// Counter-clockwise predecessor of `w` around `v`.
    pub fn pred(&self, v: usize, w: usize) -> usize {
        let r = &self.rotation[v];
        r[(self.index(v, w) + r.len() - 1) % r.len()]
    }

    /// Counter-clockwise successor of `w` around `v`.
    pub fn succ(&self, v: usize, w: usize) -> usize {
        let r = &self.rotation[v];
        r[(self.index(v, w) + 1) % r.len()]
    }

    /// The edge after `u → v` on the face to its left.
    pub fn face_next(&self, u: usize, v: usize) -> (usize, usize) {
        (v, self.pred(v, u))
    }

    /// Every face as the cyclic vertex sequence of its boundary walk.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen: Vec<Vec<bool>> = (0..n)
            .map(|v| vec![false; self.rotation[v].len()])
            .collect();
        let mut faces = Vec::new();
        for u in 0..n {
            for i in 0..self.rotation[u].len() {
                if seen[u][i] {
                    continue;
                }
                let mut walk = Vec::new();
                let (mut a, mut b) = (u, self.rotation[u][i]);
                loop {
                    let idx = self.index(a, b);
                    if seen[a][idx] {
                        break;
                    }
                    seen[a][idx] = true;
                    walk.push(a);
                    (a, b) = self.face_next(a, b);
                }
                faces.push(walk);
            }
        }
        faces
    }

    pub fn is_triangulation(&self) -> bool {
        self.faces().iter().all(|f| f.len() == 3)
    }

    /// The outer triangle ordered so that the rest of the graph lies to its
    /// left.
    pub fn inner_oriented_outer(&self) -> [usize; 3] {
        let [a, b, c] = self.outer;
        if self.face_next(a, b) == (b, c) {
            [a, c, b]
        } else {
            [a, b, c]
        }
    }

    /// A triangle whose outer face is left of `0 → 2 → 1`.
    pub fn triangle() -> Self {
        let rotation = vec![vec![1, 2], vec![2, 0], vec![0, 1]];
        EmbeddedGraph::from_rotation(rotation, [0, 2, 1]).expect("triangle is planar")
    }

    /// Puts a new vertex inside the triangular face left of `a → b`.
    pub fn insert_in_face(&mut self, a: usize, b: usize) -> usize {
        let (_, c) = self.face_next(a, b);
        let x = self.graph.add_vertex();
        self.rotation.push(vec![a, b, c]);
        // The face corner at `v` ends at the vertex preceding `v` on the face.
        for (v, prev) in [(a, c), (b, a), (c, b)] {
            let i = self.index(v, prev);
            self.rotation[v].insert(i, x);
            self.graph.add_edge(v, x);
        }
        x
    }

    /// Replaces edge `uv` by the other diagonal of its two triangles, unless
    /// that diagonal exists, an endpoint would drop below degree 3, or `uv`
    /// lies on the outer face.
    pub fn flip(&mut self, u: usize, v: usize) -> bool {
        if !self.graph.has_edge(u, v) {
            return false;
        }
        let (_, w) = self.face_next(u, v);
        let (_, z) = self.face_next(v, u);
        let outer = self.outer;
        let on_outer = outer.contains(&u) && outer.contains(&v);
        if w == z
            || on_outer
            || self.graph.has_edge(w, z)
            || self.graph.degree(u) <= 3
            || self.graph.degree(v) <= 3
        {
            return false;
        }
        if self.face_next(v, w) != (w, u) || self.face_next(u, z) != (z, v) {
            return false;
        }
        let iu = self.index(u, v);
        self.rotation[u].remove(iu);
        let iv = self.index(v, u);
        self.rotation[v].remove(iv);
        self.graph.remove_edge(u, v);
        // At w the face corner runs from u to v; at z from v to u.
        let iw = self.index(w, v);
        self.rotation[w].insert(iw, z);
        let iz = self.index(z, u);
        self.rotation[z].insert(iz, w);
        self.graph.add_edge(w, z);
        true
    }
}

/// Adds vertices inside every face longer than a triangle: one apex joined
/// to the boundary when the boundary is a cycle, otherwise a ring of new
/// vertices along the walk plus an apex, so no edge between original
/// vertices is ever added.  Original vertices keep their ids.
pub fn triangulate(eg: &EmbeddedGraph) -> EmbeddedGraph {
    let mut rotation = eg.rotation.clone();
    let mut g = eg.graph.clone();
    let n0 = eg.vertex_count();
    // Insertions before neighbour `x` in the rotation of `v`, keyed (v, x).
    let mut pending: alloc::collections::BTreeMap<(usize, usize), Vec<usize>> = Default::default();
    let mut extra: Vec<Vec<usize>> = Vec::new();
    let new_vertex = |g: &mut LoopGraph, extra: &mut Vec<Vec<usize>>| {
        extra.push(Vec::new());
        g.add_vertex()
    };
    for face in eg.faces() {
        let k = face.len();
        if k <= 3 {
            continue;
        }
        let mut distinct = face.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() == k {
            let apex = new_vertex(&mut g, &mut extra);
            for i in 0..k {
                let (wi, wi1) = (face[i], face[(i + 1) % k]);
                pending.entry((wi1, wi)).or_default().push(apex);
                g.add_edge(wi1, apex);
            }
            extra[apex - n0] = face.clone();
        } else {
            let ring: Vec<usize> = (0..k).map(|_| new_vertex(&mut g, &mut extra)).collect();
            let apex = new_vertex(&mut g, &mut extra);
            for i in 0..k {
                let (wi, wi1) = (face[i], face[(i + 1) % k]);
                let (ri, ri1, rprev) = (ring[i], ring[(i + 1) % k], ring[(i + k - 1) % k]);
                // At w_{i+1}, ahead of w_i: r_{i+1} then r_i.
                let slot = pending.entry((wi1, wi)).or_default();
                slot.push(ri1);
                slot.push(ri);
                g.add_edge(wi1, ri1);
                g.add_edge(wi1, ri);
                g.add_edge(ri, ri1);
                g.add_edge(ri, apex);
                extra[ri - n0] = vec![wi, wi1, ri1, apex, rprev];
            }
            extra[apex - n0] = ring.clone();
        }
    }
    for (v, list) in rotation.iter_mut().enumerate() {
        let mut out = Vec::with_capacity(list.len());
        for &x in list.iter() {
            if let Some(ins) = pending.get(&(v, x)) {
                out.extend_from_slice(ins);
            }
            out.push(x);
        }
        *list = out;
    }
    rotation.extend(extra);
    let [a, b, c] = eg.outer;
    let (x, y) = if eg.face_next(a, b) == (b, c) {
        (a, b)
    } else {
        (c, b)
    };
    let mut out = EmbeddedGraph {
        graph: g,
        rotation,
        outer: [x, y, 0],
    };
    out.outer[2] = out.face_next(x, y).1;
    out
}

/// Grows a triangulation on `n ≥ 3` vertices: each new vertex goes into an
/// inner face, then `flips` random edges are flipped where allowed.
/// `pick(k)` must return an index below `k`.
pub fn grow_triangulation(
    n: usize,
    flips: usize,
    pick: &mut dyn FnMut(usize) -> usize,
) -> EmbeddedGraph {
    let mut eg = EmbeddedGraph::triangle();
    // Inner faces, each as the directed edge it lies left of.
    let mut faces = vec![(0usize, 1usize)];
    while eg.vertex_count() < n.max(3) {
        let i = pick(faces.len());
        let (a, b) = faces[i];
        let (_, c) = eg.face_next(a, b);
        eg.insert_in_face(a, b);
        faces.push((b, c));
        faces.push((c, a));
    }
    for _ in 0..flips {
        let edges: Vec<(usize, usize)> = eg.graph.edges().collect();
        let (u, v) = edges[pick(edges.len())];
        eg.flip(u, v);
    }
    eg
}
