//! Canonical forms by individualisation and refinement, with automorphism
//! pruning.  Meant for small graphs (a few dozen vertices).

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::LoopGraph;

/// Adjacency matrix (loops on the diagonal) under a canonical labelling.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub n: usize,
    bits: Vec<u64>,
}

pub fn are_isomorphic(g: &LoopGraph, h: &LoopGraph) -> bool {
    g.vertex_count() == h.vertex_count()
        && g.edge_count() == h.edge_count()
        && g.loop_count() == h.loop_count()
        && canonical_form(g) == canonical_form(h)
}

pub fn canonical_form(g: &LoopGraph) -> CanonicalForm {
    canonical_labelling(g).0
}

/// Returns the form and the labelling (`label[v]` is the canonical position
/// of `v`).
pub fn canonical_labelling(g: &LoopGraph) -> (CanonicalForm, Vec<usize>) {
    let n = g.vertex_count();
    if n == 0 {
        return (
            CanonicalForm {
                n,
                bits: Vec::new(),
            },
            Vec::new(),
        );
    }
    let mut initial: Vec<Vec<usize>> = Vec::new();
    let plain: Vec<usize> = (0..n).filter(|&v| !g.has_loop(v)).collect();
    let looped: Vec<usize> = (0..n).filter(|&v| g.has_loop(v)).collect();
    for cell in [plain, looped] {
        if !cell.is_empty() {
            initial.push(cell);
        }
    }
    let mut search = Search {
        g,
        n,
        first: None,
        best: None,
        autos: Vec::new(),
    };
    let root = refine(g, initial);
    search.descend(root, &mut Vec::new());
    let (form, label, _) = search.best.expect("search reaches a leaf");
    (form, label)
}

type Partition = Vec<Vec<usize>>;

/// Splits cells by neighbour counts into every cell until stable.  Sub-cells
/// are ordered by count, so the result does not depend on vertex names.
fn refine(g: &LoopGraph, mut cells: Partition) -> Partition {
    let n = g.vertex_count();
    let mut cell_of = vec![0usize; n];
    let mut count = vec![0usize; n];
    loop {
        for (i, c) in cells.iter().enumerate() {
            for &v in c {
                cell_of[v] = i;
            }
        }
        let mut split = false;
        for s in 0..cells.len() {
            count.iter_mut().for_each(|c| *c = 0);
            for &v in &cells[s] {
                for &w in g.neighbours(v) {
                    count[w] += 1;
                }
            }
            let mut next: Partition = Vec::with_capacity(cells.len());
            for c in &cells {
                if c.len() == 1 {
                    next.push(c.clone());
                    continue;
                }
                let mut keyed: Vec<(usize, usize)> = c.iter().map(|&v| (count[v], v)).collect();
                keyed.sort_unstable();
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        next.push(keyed[start..i].iter().map(|&(_, v)| v).collect());
                        start = i;
                    }
                }
            }
            if next.len() != cells.len() {
                cells = next;
                split = true;
                break;
            }
        }
        if !split {
            return cells;
        }
    }
}

fn individualise(cells: &Partition, target: usize, v: usize) -> Partition {
    let mut out = Vec::with_capacity(cells.len() + 1);
    for (i, c) in cells.iter().enumerate() {
        if i == target {
            out.push(vec![v]);
            out.push(c.iter().copied().filter(|&w| w != v).collect());
        } else {
            out.push(c.clone());
        }
    }
    out
}

struct Search<'a> {
    g: &'a LoopGraph,
    n: usize,
    first: Option<(CanonicalForm, Vec<usize>, Vec<usize>)>,
    best: Option<(CanonicalForm, Vec<usize>, Vec<usize>)>,
    autos: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn form(&self, label: &[usize]) -> CanonicalForm {
        let n = self.n;
        let words = (n * n).div_ceil(64);
        let mut bits = vec![0u64; words];
        let mut set = |i: usize, j: usize| {
            let k = i * n + j;
            bits[k / 64] |= 1 << (k % 64);
        };
        for v in 0..n {
            if self.g.has_loop(v) {
                set(label[v], label[v]);
            }
            for &w in self.g.neighbours(v) {
                set(label[v], label[w]);
            }
        }
        CanonicalForm { n, bits }
    }

    /// Returns the depth to jump back to once an automorphism shows the rest
    /// of a subtree to be redundant.
    fn descend(&mut self, cells: Partition, path: &mut Vec<usize>) -> Option<usize> {
        let depth = path.len();
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            return self.leaf(&cells, path);
        };
        let mut children = cells[target].clone();
        children.sort_unstable();
        let mut explored: Vec<usize> = Vec::new();
        for v in children {
            if !explored.is_empty() && self.same_orbit(path, &explored, v) {
                continue;
            }
            explored.push(v);
            let child = refine(self.g, individualise(&cells, target, v));
            path.push(v);
            let jump = self.descend(child, path);
            path.pop();
            if let Some(level) = jump {
                if level < depth {
                    return Some(level);
                }
            }
        }
        None
    }

    fn leaf(&mut self, cells: &Partition, path: &[usize]) -> Option<usize> {
        let mut label = vec![0usize; self.n];
        for (i, c) in cells.iter().enumerate() {
            label[c[0]] = i;
        }
        let form = self.form(&label);
        let Some((first_form, first_label, first_path)) = &self.first else {
            self.first = Some((form.clone(), label.clone(), path.to_vec()));
            self.best = Some((form, label, path.to_vec()));
            return None;
        };
        if *first_form == form {
            let auto = compose_auto(first_label, &label);
            let level = common_prefix(first_path, path);
            self.autos.push(auto);
            return Some(level);
        }
        let (best_form, best_label, best_path) = self.best.as_ref().unwrap();
        if *best_form == form {
            let auto = compose_auto(best_label, &label);
            let level = common_prefix(best_path, path);
            self.autos.push(auto);
            return Some(level);
        }
        if form < *best_form {
            self.best = Some((form, label, path.to_vec()));
        }
        None
    }

    /// Orbit test under the automorphisms found so far that fix `path`.
    fn same_orbit(&self, path: &[usize], explored: &[usize], v: usize) -> bool {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut any = false;
        for a in &self.autos {
            if path.iter().any(|&p| a[p] != p) {
                continue;
            }
            any = true;
            for x in 0..self.n {
                let (r1, r2) = (find(&mut parent, x), find(&mut parent, a[x]));
                if r1 != r2 {
                    parent[r1] = r2;
                }
            }
        }
        if !any {
            return false;
        }
        let rv = find(&mut parent, v);
        explored.iter().any(|&e| find(&mut parent, e) == rv)
    }
}

/// Automorphism sending the vertex labelled `i` by `from` to the vertex
/// labelled `i` by `to`.
fn compose_auto(from: &[usize], to: &[usize]) -> Vec<usize> {
    let n = from.len();
    let mut inv_to = vec![0usize; n];
    for (v, &l) in to.iter().enumerate() {
        inv_to[l] = v;
    }
    (0..n).map(|v| inv_to[from[v]]).collect()
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}
