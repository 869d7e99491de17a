use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use super::verify::{NiceProductStructure, SLOTS, THICKNESS};
use super::{triangulate, EmbeddedGraph, PlanarError};
use crate::embedding::ProductEmbedding;
use crate::graph::{bfs_tree, BfsTree, LoopGraph, ProductVertex};
use crate::treedecomp::TreeDecomposition;

const NONE: usize = usize::MAX;
const MAX_RUNS: usize = 6;
/// Give up on a frame after this many rejected candidates.
const ATTEMPT_CAP: usize = 50_000;

/// A cycle of a triangulation, ordered so that the region it bounds lies to
/// its left, and the vertices strictly inside that region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleFrame {
    pub cycle: Vec<usize>,
    pub interior: Vec<usize>,
}

/// The paths chosen so far over a triangulation and its BFS tree.
#[derive(Debug, Clone)]
pub struct PlanarState<'a> {
    pub eg: &'a EmbeddedGraph,
    pub bfs: BfsTree,
    /// Path id of each vertex, `usize::MAX` while unassigned.
    pub path_of: Vec<usize>,
    /// Each path from its top (smallest level) down.
    pub paths: Vec<Vec<usize>>,
}

impl<'a> PlanarState<'a> {
    /// Starts with the three outer vertices as single-vertex paths, the
    /// tree rooted at the first of them.
    pub fn new(eg: &'a EmbeddedGraph) -> Self {
        let n = eg.vertex_count();
        let bfs = bfs_tree(&eg.graph, eg.outer[0]).expect("embedded graphs are connected");
        let mut st = PlanarState {
            eg,
            bfs,
            path_of: vec![NONE; n],
            paths: Vec::new(),
        };
        for v in eg.outer {
            st.push_path(vec![v]);
        }
        st
    }

    fn push_path(&mut self, p: Vec<usize>) -> usize {
        let id = self.paths.len();
        for &v in &p {
            self.path_of[v] = id;
        }
        self.paths.push(p);
        id
    }

    pub fn root_frame(&self) -> CycleFrame {
        let cycle = self.eg.inner_oriented_outer().to_vec();
        let interior = (0..self.eg.vertex_count())
            .filter(|v| !cycle.contains(v))
            .collect();
        CycleFrame { cycle, interior }
    }
}

/// One step of the recursion: up to three new vertical paths inside the
/// frame, the frames left over, and where each of them hangs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// The new paths in creation order, each listed top-down; any may be
    /// empty.
    pub new_paths: [Vec<usize>; 3],
    pub children: Vec<CycleFrame>,
    /// Child `i` meets the third new path and hangs under the second bag.
    pub child_in_second: Vec<bool>,
    /// Existing path left out of the second bag.
    pub dropped: Option<usize>,
    /// The frame was split along a chord; no paths were added.
    pub chord: bool,
}

struct FrameCtx<'s, 'a> {
    st: &'s PlanarState<'a>,
    frame: &'s CycleFrame,
    inside: Vec<bool>,
    on_cycle: Vec<usize>,
    /// Distinct existing paths on the cycle.
    boundary_paths: Vec<usize>,
}

impl<'s, 'a> FrameCtx<'s, 'a> {
    fn new(st: &'s PlanarState<'a>, frame: &'s CycleFrame) -> Self {
        let n = st.eg.vertex_count();
        let mut inside = vec![false; n];
        for &v in &frame.interior {
            inside[v] = true;
        }
        let mut on_cycle = vec![NONE; n];
        for (i, &v) in frame.cycle.iter().enumerate() {
            on_cycle[v] = i;
        }
        let boundary_paths: BTreeSet<usize> = frame.cycle.iter().map(|&v| st.path_of[v]).collect();
        FrameCtx {
            st,
            frame,
            inside,
            on_cycle,
            boundary_paths: boundary_paths.into_iter().collect(),
        }
    }

    fn g(&self) -> &LoopGraph {
        &self.st.eg.graph
    }

    /// First chord inside the cycle, by position of its first end.
    fn chord(&self) -> Option<(usize, usize)> {
        let c = &self.frame.cycle;
        let k = c.len();
        let eg = self.st.eg;
        for i in 0..k {
            let (v, next, prev) = (c[i], c[(i + 1) % k], c[(i + k - 1) % k]);
            let mut x = eg.succ(v, next);
            while x != prev {
                if self.on_cycle[x] != NONE {
                    return Some((i, self.on_cycle[x]));
                }
                x = eg.succ(v, x);
            }
        }
        None
    }

    fn split_at_chord(&self, i: usize, j: usize) -> Decomposition {
        let c = &self.frame.cycle;
        let k = c.len();
        let arc = |from: usize, to: usize| {
            let mut out = vec![c[from]];
            let mut p = from;
            while p != to {
                p = (p + 1) % k;
                out.push(c[p]);
            }
            out
        };
        let strictly_between = |p: usize| p != i && p != j && (p + k - i) % k < (j + k - i) % k;
        let (mut int0, mut int1) = (Vec::new(), Vec::new());
        for comp in self.components(&|_| false) {
            let first_side = comp.iter().any(|&u| {
                self.g()
                    .neighbours(u)
                    .iter()
                    .any(|&y| self.on_cycle[y] != NONE && strictly_between(self.on_cycle[y]))
            });
            if first_side {
                int0.extend(comp);
            } else {
                int1.extend(comp);
            }
        }
        let mut children = Vec::new();
        for (cycle, mut interior) in [(arc(i, j), int0), (arc(j, i), int1)] {
            if !interior.is_empty() {
                interior.sort_unstable();
                children.push(CycleFrame { cycle, interior });
            }
        }
        let n = children.len();
        Decomposition {
            new_paths: [Vec::new(), Vec::new(), Vec::new()],
            children,
            child_in_second: vec![false; n],
            dropped: None,
            chord: true,
        }
    }

    /// Components of the interior minus the vertices marked by `removed`.
    fn components(&self, removed: &dyn Fn(usize) -> bool) -> Vec<Vec<usize>> {
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        let mut out = Vec::new();
        for &s in &self.frame.interior {
            if removed(s) || seen.contains(&s) {
                continue;
            }
            seen.insert(s);
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in self.g().neighbours(v) {
                    if self.inside[w] && !removed(w) && seen.insert(w) {
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// The boundary of the face holding component `comp`, oriented with the
    /// component on its left, if it is a simple cycle.
    fn boundary(&self, comp: &[usize], in_comp: &dyn Fn(usize) -> bool) -> Option<Vec<usize>> {
        let eg = self.st.eg;
        let mut next: BTreeMap<usize, usize> = BTreeMap::new();
        let mut heads: BTreeSet<usize> = BTreeSet::new();
        for &c in comp {
            for &b in &eg.rotation[c] {
                let a = eg.pred(c, b);
                if in_comp(a) || in_comp(b) {
                    continue;
                }
                if next.insert(a, b).is_some() || !heads.insert(b) {
                    return None;
                }
            }
        }
        let start = *next.keys().next()?;
        let mut cycle = vec![start];
        let mut v = next[&start];
        while v != start {
            cycle.push(v);
            v = *next.get(&v)?;
            if cycle.len() > next.len() {
                return None;
            }
        }
        (cycle.len() == next.len() && cycle.len() >= 3).then_some(cycle)
    }

    /// Checks a candidate triple of new paths and, if it works, returns the
    /// resulting step.
    fn evaluate(&self, cand: [Vec<usize>; 3]) -> Option<Decomposition> {
        let g = self.g();
        let level = &self.st.bfs.level;
        if cand.iter().all(Vec::is_empty) {
            return None;
        }
        let base_id = self.st.paths.len();
        let mut label: BTreeMap<usize, usize> = BTreeMap::new();
        let mut ids = [NONE; 3];
        let mut next_id = base_id;
        for (slot, p) in cand.iter().enumerate() {
            if p.is_empty() {
                continue;
            }
            ids[slot] = next_id;
            for (i, &v) in p.iter().enumerate() {
                if !self.inside[v] || label.insert(v, next_id).is_some() {
                    return None;
                }
                if i > 0 && (!g.has_edge(p[i - 1], v) || level[v] != level[p[i - 1]] + 1) {
                    return None;
                }
            }
            // Inner vertices see nothing on the cycle or on earlier new paths.
            for &v in p.iter().take(p.len().saturating_sub(1)).skip(1) {
                for &y in g.neighbours(v) {
                    if self.on_cycle[y] != NONE || label.get(&y).is_some_and(|&l| l < next_id) {
                        return None;
                    }
                }
            }
            next_id += 1;
        }
        let lab = |v: usize| label.get(&v).copied().unwrap_or(self.st.path_of[v]);
        let comps = self.components(&|v| label.contains_key(&v));
        let mut children = Vec::with_capacity(comps.len());
        let mut child_paths = Vec::with_capacity(comps.len());
        for comp in comps {
            let cycle = {
                let set: BTreeSet<usize> = comp.iter().copied().collect();
                self.boundary(&comp, &|v| set.contains(&v))?
            };
            let k = cycle.len();
            let runs = (0..k)
                .filter(|&i| lab(cycle[i]) != lab(cycle[(i + k - 1) % k]))
                .count()
                .max(1);
            let distinct: BTreeSet<usize> = cycle.iter().map(|&v| lab(v)).collect();
            if runs > MAX_RUNS || distinct.len() != runs {
                return None;
            }
            child_paths.push(distinct);
            children.push(CycleFrame {
                cycle,
                interior: comp,
            });
        }
        let q0: BTreeSet<usize> = self.boundary_paths.iter().copied().collect();
        let mut z1 = q0.clone();
        z1.extend(ids[..2].iter().copied().filter(|&i| i != NONE));
        if z1.len() > THICKNESS {
            return None;
        }
        let mut dropped = None;
        let mut z2 = BTreeSet::new();
        if ids[2] != NONE {
            let q9 = &cand[2];
            let touches = |h: usize| {
                q9.iter()
                    .any(|&v| g.neighbours(v).iter().any(|&y| self.st.path_of[y] == h))
            };
            dropped = q0.iter().copied().find(|&h| {
                !touches(h)
                    && !child_paths
                        .iter()
                        .any(|cp| cp.contains(&ids[2]) && cp.contains(&h))
            });
            z2 = z1.clone();
            z2.insert(ids[2]);
            if let Some(h) = dropped {
                z2.remove(&h);
            }
            if z2.len() > THICKNESS {
                return None;
            }
        }
        let mut child_in_second = Vec::with_capacity(children.len());
        for cp in &child_paths {
            if cp.is_subset(&z1) {
                child_in_second.push(false);
            } else if ids[2] != NONE && cp.is_subset(&z2) {
                child_in_second.push(true);
            } else {
                return None;
            }
        }
        Some(Decomposition {
            new_paths: cand,
            children,
            child_in_second,
            dropped,
            chord: false,
        })
    }
}

/// Per-frame data for choosing paths: boundary arcs, colours and the
/// vertical paths `R[u]` climbing to the first vertex that sees the cycle.
struct Colouring {
    arcs: Vec<Vec<usize>>,
    colour: Vec<usize>,
    /// Top vertex of `R[u]`.
    top: Vec<usize>,
    /// The cycle vertex that extends `R[u]` to `R⁺[u]`, stored at the top.
    anchor: Vec<usize>,
    adjacent: Vec<Vec<bool>>,
}

impl Colouring {
    fn new(cx: &FrameCtx<'_, '_>) -> Result<Self, PlanarError> {
        let st = cx.st;
        let g = cx.g();
        let n = st.eg.vertex_count();
        let c = &cx.frame.cycle;
        let k = c.len();
        let lab = |i: usize| st.path_of[c[i % k]];
        let start = (0..k).find(|&i| lab(i) != lab(i + k - 1)).unwrap_or(0);
        let mut arcs: Vec<Vec<usize>> = Vec::new();
        for i in start..start + k {
            if i == start || lab(i) != lab(i - 1) {
                arcs.push(Vec::new());
            }
            arcs.last_mut().unwrap().push(c[i % k]);
        }
        if arcs.len() > MAX_RUNS {
            return Err(PlanarError::TooManyArcs {
                cycle_start: c[0],
                arcs: arcs.len(),
            });
        }
        while arcs.len() < 3 {
            let i = (0..arcs.len())
                .max_by_key(|&i| (arcs[i].len(), usize::MAX - i))
                .unwrap();
            let half = arcs[i].len() / 2;
            let tail = arcs[i].split_off(half);
            arcs.insert(i + 1, tail);
        }
        let mut colour = vec![NONE; n];
        for (i, a) in arcs.iter().enumerate() {
            for &v in a {
                colour[v] = i;
            }
        }
        let mut interior = cx.frame.interior.clone();
        interior.sort_by_key(|&v| st.bfs.level[v]);
        let mut top = vec![NONE; n];
        let mut anchor = vec![NONE; n];
        for &u in &interior {
            let seen: Vec<usize> = g
                .neighbours(u)
                .iter()
                .copied()
                .filter(|&y| cx.on_cycle[y] != NONE)
                .collect();
            if seen.is_empty() {
                let p = st.bfs.parent[u].expect("interior vertices are not the root");
                if !cx.inside[p] || top[p] == NONE {
                    return Err(PlanarError::NoDecomposition {
                        cycle_start: c[0],
                        interior: interior.len(),
                    });
                }
                top[u] = top[p];
                colour[u] = colour[top[p]];
            } else {
                top[u] = u;
                let i = seen.iter().map(|&y| colour[y]).min().unwrap();
                colour[u] = i;
                let par = st.bfs.parent[u];
                anchor[u] = match par {
                    Some(p) if seen.contains(&p) && colour[p] == i => p,
                    _ => *arcs[i].iter().find(|y| seen.contains(y)).unwrap(),
                };
            }
        }
        let m = arcs.len();
        let mut adjacent = vec![vec![false; m]; m];
        for i in 0..m {
            adjacent[i][(i + 1) % m] = true;
            adjacent[(i + 1) % m][i] = true;
        }
        for &u in &cx.frame.interior {
            for &y in g.neighbours(u) {
                if (cx.inside[y] || cx.on_cycle[y] != NONE) && colour[u] != colour[y] {
                    adjacent[colour[u]][colour[y]] = true;
                    adjacent[colour[y]][colour[u]] = true;
                }
            }
        }
        Ok(Colouring {
            arcs,
            colour,
            top,
            anchor,
            adjacent,
        })
    }

    /// `R[u]` bottom-up; empty on the cycle.
    fn r(&self, st: &PlanarState<'_>, u: usize) -> Vec<usize> {
        if self.top[u] == NONE {
            return Vec::new();
        }
        let mut out = vec![u];
        let mut v = u;
        while v != self.top[u] {
            v = st.bfs.parent[v].unwrap();
            out.push(v);
        }
        out
    }

    /// `R⁺[u]` bottom-up, ending on the cycle.
    fn r_plus(&self, st: &PlanarState<'_>, u: usize) -> Vec<usize> {
        let mut out = self.r(st, u);
        match out.last() {
            Some(&t) => out.push(self.anchor[t]),
            None => out.push(u),
        }
        out
    }

    fn r_plus_len(&self, st: &PlanarState<'_>, u: usize) -> usize {
        if self.top[u] == NONE {
            1
        } else {
            st.bfs.level[u] - st.bfs.level[self.top[u]] + 2
        }
    }
}

fn top_down(mut p: Vec<usize>) -> Vec<usize> {
    p.reverse();
    p
}

fn cyc_dist(a: usize, b: usize, m: usize) -> usize {
    let d = (a + m - b) % m;
    d.min(m - d)
}

/// One recursion step on `frame`: split along a chord when there is one,
/// otherwise add up to three vertical paths inside so that every leftover
/// region meets at most six paths, each along one arc, and the frame's
/// paths plus the new ones fit two bags of at most eight paths.
pub fn decompose_cycle(
    st: &PlanarState<'_>,
    frame: &CycleFrame,
) -> Result<Decomposition, PlanarError> {
    let cx = FrameCtx::new(st, frame);
    if let Some((i, j)) = cx.chord() {
        return Ok(cx.split_at_chord(i, j));
    }
    if cx.components(&|_| false).len() > 1 {
        return Err(PlanarError::DisconnectedInterior {
            cycle_start: frame.cycle[0],
        });
    }
    let col = Colouring::new(&cx)?;
    let g = cx.g();
    let m = col.arcs.len();
    let mut attempts = 0usize;
    let mut attempt = |cand: [Vec<usize>; 3]| -> Option<Decomposition> {
        attempts += 1;
        if attempts > ATTEMPT_CAP {
            return None;
        }
        cx.evaluate(cand)
    };
    let no_luck = || PlanarError::NoDecomposition {
        cycle_start: frame.cycle[0],
        interior: frame.interior.len(),
    };

    // Pairs of classes joined by an edge, each with its cheapest edges first.
    let pair_candidates = |x7: usize, x8: usize| {
        let mut edges: Vec<(usize, usize, usize)> = Vec::new();
        for &u in &frame.interior {
            for &v in g.neighbours(u) {
                for (a, b) in [(u, v), (v, u)] {
                    if col.colour[a] == x7
                        && col.colour[b] == x8
                        && (cx.inside[b] || cx.on_cycle[b] != NONE)
                    {
                        edges.push((col.r_plus_len(st, a) + col.r_plus_len(st, b), a, b));
                    }
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        edges
    };
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for x7 in 0..m {
        for x8 in 0..m {
            if x7 != x8 && col.adjacent[x7][x8] && (m == 3 || cyc_dist(x7, x8, m) > 1) {
                pairs.push((x7, x8));
            }
        }
    }

    if m == 6 {
        if let Some(d) = six_arcs(st, &cx, &col, &mut attempt) {
            return Ok(d);
        }
    }
    for &(x7, x8) in &pairs {
        for (_, u7, u8) in pair_candidates(x7, x8) {
            let cand = [top_down(col.r(st, u7)), top_down(col.r(st, u8)), Vec::new()];
            if let Some(d) = attempt(cand) {
                return Ok(d);
            }
        }
    }
    // Last resort: a single path from any inner vertex.
    let mut singles = frame.interior.clone();
    singles.sort_by_key(|&u| core::cmp::Reverse(st.bfs.level[u]));
    for u in singles {
        if let Some(d) = attempt([top_down(col.r(st, u)), Vec::new(), Vec::new()]) {
            return Ok(d);
        }
    }
    Err(no_luck())
}

/// The six-arc case: a facial triangle of the coloured triangulation whose
/// classes form an inner triangle of the contracted hexagon, grown into
/// three paths meeting near it.
fn six_arcs(
    st: &PlanarState<'_>,
    cx: &FrameCtx<'_, '_>,
    col: &Colouring,
    attempt: &mut dyn FnMut([Vec<usize>; 3]) -> Option<Decomposition>,
) -> Option<Decomposition> {
    let g = cx.g();
    let m = 6;
    let adj = &col.adjacent;
    let mut orders: Vec<[usize; 3]> = Vec::new();
    for x in 0..m {
        for y in x + 1..m {
            for z in y + 1..m {
                if !(adj[x][y] && adj[y][z] && adj[x][z]) {
                    continue;
                }
                let hull = [(x, y), (y, z), (x, z)]
                    .iter()
                    .filter(|(a, b)| cyc_dist(*a, *b, m) == 1)
                    .count();
                if hull > 1 {
                    continue;
                }
                for [a, b, c] in [
                    [x, y, z],
                    [x, z, y],
                    [y, x, z],
                    [y, z, x],
                    [z, x, y],
                    [z, y, x],
                ] {
                    let ok = cyc_dist(a, b, m) != 1
                        && cyc_dist(a, c, m) != 1
                        && matches!(cyc_dist(b, c, m), 1 | 2)
                        && cyc_dist(a, c, m) == 2
                        && matches!(cyc_dist(a, b, m), 2 | 3);
                    if ok {
                        orders.push([a, b, c]);
                    }
                }
            }
        }
    }
    let faces: Vec<[usize; 3]> = st
        .eg
        .faces()
        .into_iter()
        .filter(|f| {
            f.len() == 3
                && f.iter().any(|&v| cx.inside[v])
                && f.iter().all(|&v| cx.inside[v] || cx.on_cycle[v] != NONE)
        })
        .map(|f| [f[0], f[1], f[2]])
        .collect();
    for [x7, x8, x9] in orders {
        for f in &faces {
            let find = |x: usize| f.iter().copied().find(|&v| col.colour[v] == x);
            let (Some(p7), Some(p8), Some(p9)) = (find(x7), find(x8), find(x9)) else {
                continue;
            };
            let rp7 = col.r_plus(st, p7);
            let r7 = col.r(st, p7);
            let rp8 = col.r_plus(st, p8);
            let rp9 = col.r_plus(st, p9);
            let Some(&u8) = rp8
                .iter()
                .rev()
                .find(|&&v| g.neighbours(v).iter().any(|y| rp7.contains(y)))
            else {
                continue;
            };
            let r8 = col.r(st, u8);
            let mut pool: Vec<usize> = r7.clone();
            pool.extend(&r8);
            if pool.is_empty() {
                continue;
            }
            let Some(&u9) = rp9
                .iter()
                .rev()
                .find(|&&v| g.neighbours(v).iter().any(|y| pool.contains(y)))
            else {
                continue;
            };
            let pos7 = |v: usize| rp7.iter().position(|&x| x == v);
            for v8 in rp7.iter().copied().filter(|&v| g.has_edge(u8, v)) {
                for v9 in pool.iter().copied().filter(|&v| g.has_edge(u9, v)) {
                    let u7 = match (pos7(v9), pos7(v8)) {
                        (Some(a), Some(b)) if a < b => v9,
                        _ => v8,
                    };
                    let cand = [
                        top_down(col.r(st, u7)),
                        top_down(r8.clone()),
                        top_down(col.r(st, u9)),
                    ];
                    if let Some(d) = attempt(cand) {
                        return Some(d);
                    }
                }
            }
        }
    }
    None
}

/// Where a frame was handled: the paths on its boundary and the node of the
/// decomposition whose bag holds them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameRecord {
    pub paths: Vec<usize>,
    pub node: usize,
    pub interior: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarBuild {
    pub structure: NiceProductStructure,
    /// Embedding of the triangulated graph.
    pub embedding: ProductEmbedding,
    pub triangulated: EmbeddedGraph,
    /// Number of vertices of the input; they keep their ids.
    pub original: usize,
    pub frames: Vec<FrameRecord>,
}

impl PlanarBuild {
    /// The embedding restricted to the input vertices.
    pub fn original_embedding(&self) -> ProductEmbedding {
        self.embedding.truncate(self.original)
    }

    /// Largest number of paths in one bag.
    pub fn thickness(&self) -> usize {
        self.structure.td.max_bag() / SLOTS
    }
}

/// Slots along a path listed top-down: 1 and 5 at the ends, `2 + level mod 3`
/// inside.
fn slots_of(path: &[usize], level: &[usize]) -> Vec<usize> {
    let k = path.len();
    path.iter()
        .enumerate()
        .map(|(i, &v)| {
            if i == 0 {
                1
            } else if i + 1 == k {
                5
            } else {
                2 + level[v] % 3
            }
        })
        .collect()
}

/// Triangulates if needed, partitions the triangulation into vertical paths
/// frame by frame, and assembles `M` (five vertices per path), its tree
/// decomposition and the embedding `v ↦ (level(v), (path(v), slot(v)))`.
pub fn build_planar_structure(eg: &EmbeddedGraph) -> Result<PlanarBuild, PlanarError> {
    let original = eg.vertex_count();
    let tri = if eg.is_triangulation() {
        eg.clone()
    } else {
        triangulate(eg)
    };
    let mut st = PlanarState::new(&tri);
    let mut bags: Vec<Vec<usize>> = vec![vec![0, 1, 2]];
    let mut tree: Vec<(usize, usize)> = Vec::new();
    let mut frames = Vec::new();
    let mut stack = vec![(st.root_frame(), 0usize)];
    while let Some((frame, node)) = stack.pop() {
        if frame.interior.is_empty() {
            continue;
        }
        let on: BTreeSet<usize> = frame.cycle.iter().map(|&v| st.path_of[v]).collect();
        frames.push(FrameRecord {
            paths: on.iter().copied().collect(),
            node,
            interior: frame.interior.len(),
        });
        let d = decompose_cycle(&st, &frame)?;
        if d.chord {
            stack.extend(d.children.into_iter().map(|c| (c, node)));
            continue;
        }
        let mut ids = [NONE; 3];
        for (slot, p) in d.new_paths.iter().enumerate() {
            if !p.is_empty() {
                ids[slot] = st.push_path(p.clone());
            }
        }
        let mut z1: BTreeSet<usize> = on.clone();
        z1.extend(ids[..2].iter().copied().filter(|&i| i != NONE));
        let n1 = bags.len();
        bags.push(z1.iter().copied().collect());
        tree.push((node, n1));
        let mut n2 = n1;
        if ids[2] != NONE {
            let mut z2 = z1.clone();
            z2.insert(ids[2]);
            if let Some(h) = d.dropped {
                z2.remove(&h);
            }
            n2 = bags.len();
            bags.push(z2.into_iter().collect());
            tree.push((n1, n2));
        }
        for (c, second) in d.children.into_iter().zip(d.child_in_second) {
            stack.push((c, if second { n2 } else { n1 }));
        }
    }
    debug_assert!(st.path_of.iter().all(|&p| p != NONE));
    let level = st.bfs.level.clone();
    let n = tri.vertex_count();
    let mut slot = vec![(0, 0); n];
    for (id, p) in st.paths.iter().enumerate() {
        for (&v, s) in p.iter().zip(slots_of(p, &level)) {
            slot[v] = (id, s);
        }
    }
    let at = |(p, s): (usize, usize)| p * SLOTS + s - 1;
    let np = st.paths.len();
    let mut m = LoopGraph::new(np * SLOTS);
    for (id, p) in st.paths.iter().enumerate() {
        for a in 0..SLOTS {
            for b in a + 1..SLOTS {
                m.add_edge(id * SLOTS + a, id * SLOTS + b);
            }
        }
        let ends: &[usize] = if p.len() == 1 {
            &p[..1]
        } else {
            &[p[0], p[p.len() - 1]]
        };
        for &e in ends {
            for &y in tri.graph.neighbours(e) {
                if st.path_of[y] < id {
                    m.add_edge(at(slot[e]), at(slot[y]));
                }
            }
        }
    }
    let slot_bags = bags
        .iter()
        .map(|b| {
            b.iter()
                .flat_map(|&p| (0..SLOTS).map(move |s| p * SLOTS + s))
                .collect()
        })
        .collect();
    let td = TreeDecomposition::new(np * SLOTS, slot_bags, &tree).expect("frames form a tree");
    let p_len = st.bfs.depth() + 1;
    let image = (0..n)
        .map(|v| ProductVertex::new(level[v], at(slot[v])))
        .collect();
    let embedding = ProductEmbedding::new(LoopGraph::path(p_len), m.clone(), image);
    let structure = NiceProductStructure {
        p_len,
        m,
        slot,
        td,
        paths: st.paths,
        root: st.bfs.root,
        level,
    };
    Ok(PlanarBuild {
        structure,
        embedding,
        triangulated: tri,
        original,
        frames,
    })
}
