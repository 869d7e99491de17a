use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::embedding::{check_induced_embedding, EmbeddingVerdict, ProductEmbedding};
use crate::graph::{LoopGraph, ProductVertex};
use crate::treedecomp::{validate_decomposition, TdVerdict, TreeDecomposition};

/// Vertices of `M` per path.
pub const SLOTS: usize = 5;
/// Most paths allowed in one bag; `8 · 5 - 1 = 39` bounds the width.
pub const THICKNESS: usize = 8;

/// A partition of a graph into vertical paths of a BFS tree with a slot in
/// `1..=5` per vertex, the factor `M` on `paths × slots` (vertex
/// `path * 5 + slot - 1`) and a tree decomposition of `M` whose bags are
/// unions of whole paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceProductStructure {
    pub p_len: usize,
    pub m: LoopGraph,
    /// `(path, slot)` per vertex.
    pub slot: Vec<(usize, usize)>,
    pub td: TreeDecomposition,
    /// Each path top-down.
    pub paths: Vec<Vec<usize>>,
    pub root: usize,
    pub level: Vec<usize>,
}

impl NiceProductStructure {
    pub fn embedding(&self) -> ProductEmbedding {
        let image = self
            .level
            .iter()
            .zip(&self.slot)
            .map(|(&l, &(p, s))| ProductVertex::new(l, p * SLOTS + s - 1))
            .collect();
        ProductEmbedding::new(LoopGraph::path(self.p_len), self.m.clone(), image)
    }

    /// Paths in the largest bag.
    pub fn thickness(&self) -> usize {
        self.td.max_bag().div_ceil(SLOTS)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NiceViolation {
    /// Vector lengths disagree with the graph or the path count.
    Shape,
    /// `level` is not the BFS distance from the root.
    Level {
        v: usize,
    },
    /// Vertex in no path or in two.
    Partition {
        v: usize,
    },
    /// Consecutive path vertices not adjacent one level apart.
    NotVertical {
        path: usize,
        i: usize,
    },
    /// Slot disagrees with the path or the slot rule.
    Slot {
        v: usize,
    },
    /// Two of three consecutive vertices share a slot.
    SlotRepeat {
        path: usize,
        i: usize,
    },
    /// A path's five slots do not form a clique.
    NotClique {
        path: usize,
    },
    /// An edge of `M` between two paths avoids both end slots.
    InnerSlotEdge {
        a: usize,
        b: usize,
    },
    Decomposition(TdVerdict),
    /// A bag holds part of a path's slots.
    NotAligned {
        node: usize,
    },
    TooThick {
        node: usize,
        paths: usize,
    },
    Embedding(EmbeddingVerdict),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NiceVerdict {
    Accept { thickness: usize, width: usize },
    Reject(NiceViolation),
}

impl NiceVerdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, NiceVerdict::Accept { .. })
    }
}

impl fmt::Display for NiceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use NiceViolation::*;
        let v = match self {
            NiceVerdict::Accept { thickness, width } => {
                return write!(f, "ACCEPT thickness {thickness} width {width}");
            }
            NiceVerdict::Reject(v) => v,
        };
        match *v {
            Shape => write!(f, "REJECT structure sizes disagree with the graph"),
            Level { v } => write!(f, "REJECT level of {v} is not its BFS depth"),
            Partition { v } => write!(f, "REJECT vertex {v} is not on exactly one path"),
            NotVertical { path, i } => {
                write!(f, "REJECT path {path} is not vertical at position {i}")
            }
            Slot { v } => write!(f, "REJECT slot of {v} breaks the slot rule"),
            SlotRepeat { path, i } => {
                write!(f, "REJECT path {path} repeats a slot near position {i}")
            }
            NotClique { path } => write!(f, "REJECT slots of path {path} are not a clique"),
            InnerSlotEdge { a, b } => write!(f, "REJECT factor edge {a}-{b} joins two inner slots"),
            Decomposition(td) => write!(f, "{td}"),
            NotAligned { node } => write!(f, "REJECT bag {node} splits a path"),
            TooThick { node, paths } => write!(f, "REJECT bag {node} holds {paths} paths"),
            Embedding(e) => write!(f, "{e}"),
        }
    }
}

fn expected_slot(i: usize, len: usize, level: usize) -> usize {
    if i == 0 {
        1
    } else if i + 1 == len {
        5
    } else {
        2 + level % 3
    }
}

/// Checks the path partition, slots, factor, decomposition and the induced
/// embedding it defines, reporting the first violation.
pub fn verify_nice_structure(g: &LoopGraph, s: &NiceProductStructure) -> NiceVerdict {
    use NiceViolation::*;
    let reject = NiceVerdict::Reject;
    let n = g.vertex_count();
    let np = s.paths.len();
    if s.slot.len() != n || s.level.len() != n || s.m.vertex_count() != np * SLOTS || s.root >= n {
        return reject(Shape);
    }
    let dist = g.distances(s.root);
    if let Some(v) = (0..n).find(|&v| dist[v] != s.level[v]) {
        return reject(Level { v });
    }
    if s.level.iter().any(|&l| l >= s.p_len) {
        return reject(Shape);
    }
    let mut owner = vec![usize::MAX; n];
    for (id, p) in s.paths.iter().enumerate() {
        for (i, &v) in p.iter().enumerate() {
            if v >= n || owner[v] != usize::MAX {
                return reject(Partition {
                    v: v.min(n.saturating_sub(1)),
                });
            }
            owner[v] = id;
            if i > 0 && (!g.has_edge(p[i - 1], v) || s.level[v] != s.level[p[i - 1]] + 1) {
                return reject(NotVertical { path: id, i });
            }
            if s.slot[v] != (id, expected_slot(i, p.len(), s.level[v])) {
                return reject(Slot { v });
            }
            if i >= 1 {
                let a = s.slot[p[i - 1]].1;
                let b = s.slot[v].1;
                let c = if i >= 2 {
                    Some(s.slot[p[i - 2]].1)
                } else {
                    None
                };
                if a == b || c == Some(a) || c == Some(b) {
                    return reject(SlotRepeat { path: id, i });
                }
            }
        }
        if p.is_empty() {
            return reject(Shape);
        }
    }
    if let Some(v) = (0..n).find(|&v| owner[v] == usize::MAX) {
        return reject(Partition { v });
    }
    for id in 0..np {
        for a in 0..SLOTS {
            for b in a + 1..SLOTS {
                if !s.m.has_edge(id * SLOTS + a, id * SLOTS + b) {
                    return reject(NotClique { path: id });
                }
            }
        }
    }
    let is_end = |x: usize| matches!(x % SLOTS, 0 | 4);
    if let Some((a, b)) =
        s.m.edges()
            .find(|&(a, b)| a / SLOTS != b / SLOTS && !is_end(a) && !is_end(b))
    {
        return reject(InnerSlotEdge { a, b });
    }
    let td = validate_decomposition(&s.m, &s.td);
    if !td.is_accept() {
        return reject(Decomposition(td));
    }
    let mut thickness = 0;
    for (node, bag) in s.td.bags().iter().enumerate() {
        let mut per_path = vec![0usize; np];
        for &x in bag {
            per_path[x / SLOTS] += 1;
        }
        if per_path.iter().any(|&c| c != 0 && c != SLOTS) {
            return reject(NotAligned { node });
        }
        let paths = per_path.iter().filter(|&&c| c == SLOTS).count();
        if paths > THICKNESS {
            return reject(TooThick { node, paths });
        }
        thickness = thickness.max(paths);
    }
    let e = check_induced_embedding(g, &s.embedding());
    if !e.is_accept() {
        return reject(Embedding(e));
    }
    NiceVerdict::Accept {
        thickness,
        width: s.td.width(),
    }
}
