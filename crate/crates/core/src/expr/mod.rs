//! (H,ℓ)-expressions: labels carry a colour and a fixed parameter vertex of
//! H, and `AddEdges(i, j)` only joins labels whose parameter vertices are
//! adjacent (or equal and looped) in H.
//!
//! Terms are stored as an arena in which every child precedes its parent;
//! the last node is the root.  This is exactly the postfix order of the
//! text format.

mod build;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::LoopGraph;

pub use build::{
    cw_expression_bridge, grid_expression, highcw_family, localize, HighCwCondition, HighCwFamily,
    HighCwViolation, LocalizeError,
};

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub colour: usize,
    pub pvertex: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node<L> {
    Create(L),
    Union(NodeId, NodeId),
    AddEdges { i: usize, j: usize, child: NodeId },
    Recolor { i: usize, j: usize, child: NodeId },
}

impl<L> Node<L> {
    fn children(&self) -> ([NodeId; 2], usize) {
        match *self {
            Node::Create(_) => ([0, 0], 0),
            Node::Union(a, b) => ([a, b], 2),
            Node::AddEdges { child, .. } | Node::Recolor { child, .. } => ([child, 0], 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    /// A child index that does not precede its parent.
    BadChild {
        child: NodeId,
    },
    SharedChild {
        child: NodeId,
    },
    Detached,
    ColourOutOfBudget {
        colour: usize,
        ell: usize,
    },
    AddEdgesSameColour {
        colour: usize,
    },
    RecolorSameColour {
        colour: usize,
    },
    PvertexOutOfRange {
        pvertex: usize,
        n: usize,
    },
    /// Parameter vertices from several components of H: the value can never
    /// be connected.
    MixedComponents,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub node: NodeId,
    /// Child positions from the root (0 = left/only child, 1 = right).
    pub path: Vec<u8>,
    pub severity: Severity,
    pub kind: DiagnosticKind,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut path = String::from("root");
        for step in &self.path {
            path.push(if *step == 0 { 'L' } else { 'R' });
        }
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev} at node {} ({path}): ", self.node)?;
        match self.kind {
            DiagnosticKind::BadChild { child } => {
                write!(f, "child {child} does not precede its parent")
            }
            DiagnosticKind::SharedChild { child } => write!(f, "node {child} used twice"),
            DiagnosticKind::Detached => write!(f, "node not reachable from the root"),
            DiagnosticKind::ColourOutOfBudget { colour, ell } => {
                write!(f, "colour {colour} outside budget 1..={ell}")
            }
            DiagnosticKind::AddEdgesSameColour { colour } => write!(f, "addedges i=j ({colour})"),
            DiagnosticKind::RecolorSameColour { colour } => write!(f, "recolour i=j ({colour})"),
            DiagnosticKind::PvertexOutOfRange { pvertex, n } => {
                write!(f, "parameter vertex {pvertex} outside 0..{n}")
            }
            DiagnosticKind::MixedComponents => {
                write!(f, "parameter vertices span several components of H")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("invalid expression: {0}")]
    Invalid(Diagnostic),
}

/// Structural checks shared by both expression kinds.  `label_check` is
/// called on every `Create` payload.
fn check_tree<L>(
    nodes: &[Node<L>],
    ell: usize,
    mut label_check: impl FnMut(&L) -> Option<DiagnosticKind>,
) -> Vec<Diagnostic> {
    let n = nodes.len();
    let mut out = Vec::new();
    let mut parent: Vec<Option<(NodeId, u8)>> = vec![None; n];
    let mut raw = Vec::new();
    for (id, node) in nodes.iter().enumerate() {
        let (ch, k) = node.children();
        for (slot, &c) in ch[..k].iter().enumerate() {
            if c >= id {
                raw.push((id, DiagnosticKind::BadChild { child: c }));
            } else if parent[c].is_some() {
                raw.push((id, DiagnosticKind::SharedChild { child: c }));
            } else {
                parent[c] = Some((id, slot as u8));
            }
        }
        let colour_check = |c: usize| {
            (c == 0 || c > ell).then_some(DiagnosticKind::ColourOutOfBudget { colour: c, ell })
        };
        match node {
            Node::Create(l) => {
                if let Some(kind) = label_check(l) {
                    raw.push((id, kind));
                }
            }
            Node::Union(..) => {}
            Node::AddEdges { i, j, .. } | Node::Recolor { i, j, .. } => {
                for c in [*i, *j] {
                    if let Some(kind) = colour_check(c) {
                        raw.push((id, kind));
                    }
                }
                if i == j {
                    raw.push((
                        id,
                        if matches!(node, Node::AddEdges { .. }) {
                            DiagnosticKind::AddEdgesSameColour { colour: *i }
                        } else {
                            DiagnosticKind::RecolorSameColour { colour: *i }
                        },
                    ));
                }
            }
        }
    }
    for id in 0..n.saturating_sub(1) {
        if parent[id].is_none() {
            raw.push((id, DiagnosticKind::Detached));
        }
    }
    for (node, kind) in raw {
        let mut path = Vec::new();
        let mut cur = node;
        let mut steps = 0;
        while let Some((p, slot)) = parent[cur] {
            path.push(slot);
            cur = p;
            steps += 1;
            if steps > n {
                break;
            }
        }
        if cur != n - 1 {
            path.clear();
        }
        path.reverse();
        out.push(Diagnostic {
            node,
            path,
            severity: Severity::Error,
            kind,
        });
    }
    out
}

/// Leaf positions in left-to-right order: `leaf_index[id]` for `Create` nodes.
pub(crate) fn leaf_order<L>(nodes: &[Node<L>]) -> Vec<usize> {
    let mut index = vec![usize::MAX; nodes.len()];
    if nodes.is_empty() {
        return index;
    }
    let mut next = 0;
    let mut stack = vec![nodes.len() - 1];
    while let Some(id) = stack.pop() {
        let (ch, k) = nodes[id].children();
        if k == 0 {
            index[id] = next;
            next += 1;
        }
        for &c in ch[..k].iter().rev() {
            stack.push(c);
        }
    }
    index
}

/// Generic arena builder used by both expression kinds.
macro_rules! arena_builders {
    ($label:ty) => {
        pub fn union(&mut self, left: NodeId, right: NodeId) -> NodeId {
            self.push(Node::Union(left, right))
        }

        pub fn add_edges(&mut self, i: usize, j: usize, child: NodeId) -> NodeId {
            self.push(Node::AddEdges { i, j, child })
        }

        pub fn recolor(&mut self, i: usize, j: usize, child: NodeId) -> NodeId {
            self.push(Node::Recolor { i, j, child })
        }

        pub fn push(&mut self, node: Node<$label>) -> NodeId {
            self.nodes.push(node);
            self.nodes.len() - 1
        }

        pub fn nodes(&self) -> &[Node<$label>] {
            &self.nodes
        }

        pub fn root(&self) -> Option<NodeId> {
            self.nodes.len().checked_sub(1)
        }

        pub fn is_empty(&self) -> bool {
            self.nodes.is_empty()
        }

        /// Largest colour mentioned anywhere.
        pub fn expression_ell(&self) -> usize {
            self.nodes
                .iter()
                .map(|n| match n {
                    Node::Create(l) => Self::colour_of(l),
                    Node::Union(..) => 0,
                    Node::AddEdges { i, j, .. } | Node::Recolor { i, j, .. } => (*i).max(*j),
                })
                .max()
                .unwrap_or(0)
        }

        /// Joins `parts` with left-deep unions; `None` when empty.
        pub fn union_all(&mut self, parts: &[NodeId]) -> Option<NodeId> {
            let (&first, rest) = parts.split_first()?;
            Some(rest.iter().fold(first, |acc, &p| self.union(acc, p)))
        }
    };
}

/// An (H,ℓ)-expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HcwExpression {
    pub ell: usize,
    pub param: LoopGraph,
    nodes: Vec<Node<Label>>,
}

/// The value of an expression together with its final labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    pub graph: LoopGraph,
    pub labels: Vec<Label>,
}

impl HcwExpression {
    pub fn new(ell: usize, param: LoopGraph) -> Self {
        HcwExpression {
            ell,
            param,
            nodes: Vec::new(),
        }
    }

    pub fn from_nodes(ell: usize, param: LoopGraph, nodes: Vec<Node<Label>>) -> Self {
        HcwExpression { ell, param, nodes }
    }

    pub fn create(&mut self, colour: usize, pvertex: usize) -> NodeId {
        self.push(Node::Create(Label { colour, pvertex }))
    }

    fn colour_of(l: &Label) -> usize {
        l.colour
    }

    arena_builders!(Label);

    pub fn vertex_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Create(_)))
            .count()
    }

    /// All diagnostics, errors first in node order, then warnings.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let ell = self.ell;
        let np = self.param.vertex_count();
        let mut out = check_tree(&self.nodes, ell, |l: &Label| {
            if l.colour == 0 || l.colour > ell {
                Some(DiagnosticKind::ColourOutOfBudget {
                    colour: l.colour,
                    ell,
                })
            } else if l.pvertex >= np {
                Some(DiagnosticKind::PvertexOutOfRange {
                    pvertex: l.pvertex,
                    n: np,
                })
            } else {
                None
            }
        });
        if out.is_empty() && !self.nodes.is_empty() {
            let comps = self.param.components();
            let mut comp_of = vec![0; np];
            for (i, c) in comps.iter().enumerate() {
                for &v in c {
                    comp_of[v] = i;
                }
            }
            let mut seen = None;
            for node in &self.nodes {
                if let Node::Create(l) = node {
                    let c = comp_of[l.pvertex];
                    if *seen.get_or_insert(c) != c {
                        out.push(Diagnostic {
                            node: self.nodes.len() - 1,
                            path: Vec::new(),
                            severity: Severity::Warning,
                            kind: DiagnosticKind::MixedComponents,
                        });
                        break;
                    }
                }
            }
        }
        out
    }

    fn first_error(&self) -> Result<(), ExprError> {
        match self
            .validate()
            .into_iter()
            .find(|d| d.severity == Severity::Error)
        {
            Some(d) => Err(ExprError::Invalid(d)),
            None => Ok(()),
        }
    }

    /// Value of the expression.  Vertex ids follow the left-to-right order of
    /// the `Create` leaves.
    pub fn evaluate(&self) -> Result<LabeledGraph, ExprError> {
        self.first_error()?;
        let leaf = leaf_order(&self.nodes);
        type Buckets = BTreeMap<usize, BTreeMap<usize, Vec<usize>>>;
        let mut frames: Vec<Option<Buckets>> = vec![None; self.nodes.len()];
        let mut edges = Vec::new();
        for (id, node) in self.nodes.iter().enumerate() {
            let frame = match *node {
                Node::Create(l) => {
                    let mut b = Buckets::new();
                    b.entry(l.colour)
                        .or_default()
                        .insert(l.pvertex, vec![leaf[id]]);
                    b
                }
                Node::Union(a, b) => {
                    let (mut big, mut small) =
                        (frames[a].take().unwrap(), frames[b].take().unwrap());
                    if bucket_size(&big) < bucket_size(&small) {
                        core::mem::swap(&mut big, &mut small);
                    }
                    for (c, by_p) in small {
                        let target = big.entry(c).or_default();
                        for (p, vs) in by_p {
                            target.entry(p).or_default().extend(vs);
                        }
                    }
                    big
                }
                Node::AddEdges { i, j, child } => {
                    let f = frames[child].take().unwrap();
                    if let (Some(a), Some(b)) = (f.get(&i), f.get(&j)) {
                        for (&v, xs) in a {
                            let looped = self.param.has_loop(v).then_some(&v);
                            for w in self.param.neighbours(v).iter().chain(looped) {
                                if let Some(ys) = b.get(w) {
                                    for &x in xs {
                                        edges.extend(ys.iter().map(|&y| (x, y)));
                                    }
                                }
                            }
                        }
                    }
                    f
                }
                Node::Recolor { i, j, child } => {
                    let mut f = frames[child].take().unwrap();
                    if let Some(moved) = f.remove(&i) {
                        let target = f.entry(j).or_default();
                        for (p, vs) in moved {
                            target.entry(p).or_default().extend(vs);
                        }
                    }
                    f
                }
            };
            frames[id] = Some(frame);
        }
        let n = self.vertex_count();
        let mut labels = vec![
            Label {
                colour: 0,
                pvertex: 0
            };
            n
        ];
        if let Some(root) = frames.last_mut().and_then(Option::take) {
            for (colour, by_p) in root {
                for (pvertex, vs) in by_p {
                    for v in vs {
                        labels[v] = Label { colour, pvertex };
                    }
                }
            }
        }
        let graph = LoopGraph::from_edges(n, &edges).expect("evaluation yields simple edges");
        Ok(LabeledGraph { graph, labels })
    }
}

fn bucket_size(b: &BTreeMap<usize, BTreeMap<usize, Vec<usize>>>) -> usize {
    b.values().flat_map(|m| m.values()).map(Vec::len).sum()
}

/// A traditional clique-width expression (labels are bare colours).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CwExpression {
    pub ell: usize,
    nodes: Vec<Node<usize>>,
}

impl CwExpression {
    pub fn new(ell: usize) -> Self {
        CwExpression {
            ell,
            nodes: Vec::new(),
        }
    }

    pub fn from_nodes(ell: usize, nodes: Vec<Node<usize>>) -> Self {
        CwExpression { ell, nodes }
    }

    pub fn create(&mut self, colour: usize) -> NodeId {
        self.push(Node::Create(colour))
    }

    fn colour_of(c: &usize) -> usize {
        *c
    }

    arena_builders!(usize);

    pub fn validate(&self) -> Vec<Diagnostic> {
        let ell = self.ell;
        check_tree(&self.nodes, ell, |&c: &usize| {
            (c == 0 || c > ell).then_some(DiagnosticKind::ColourOutOfBudget { colour: c, ell })
        })
    }

    /// Direct evaluation scanning all vertex pairs per `AddEdges`; kept
    /// deliberately naive so it can serve as an independent reference.
    pub fn evaluate(&self) -> Result<(LoopGraph, Vec<usize>), ExprError> {
        if let Some(d) = self.validate().into_iter().next() {
            return Err(ExprError::Invalid(d));
        }
        let leaf = leaf_order(&self.nodes);
        let mut frames: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.nodes.len()];
        let mut edges = Vec::new();
        for (id, node) in self.nodes.iter().enumerate() {
            frames[id] = match *node {
                Node::Create(c) => vec![(leaf[id], c)],
                Node::Union(a, b) => {
                    let mut f = core::mem::take(&mut frames[a]);
                    f.append(&mut frames[b]);
                    f
                }
                Node::AddEdges { i, j, child } => {
                    let f = core::mem::take(&mut frames[child]);
                    for &(x, cx) in &f {
                        for &(y, cy) in &f {
                            if cx == i && cy == j {
                                edges.push((x, y));
                            }
                        }
                    }
                    f
                }
                Node::Recolor { i, j, child } => {
                    let mut f = core::mem::take(&mut frames[child]);
                    for (_, c) in &mut f {
                        if *c == i {
                            *c = j;
                        }
                    }
                    f
                }
            };
        }
        let n = leaf.iter().filter(|&&l| l != usize::MAX).count();
        let mut colours = vec![0; n];
        if let Some(root) = frames.last() {
            for &(v, c) in root {
                colours[v] = c;
            }
        }
        let g = LoopGraph::from_edges(n, &edges).expect("evaluation yields simple edges");
        Ok((g, colours))
    }
}
