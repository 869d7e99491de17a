//! Turning a subgraph of `Q ⊠ M` (with `M` of bounded tree-width) into an
//! induced one: a parameterised expression over the reflexive closure of `Q`
//! whose colours record neighbourhoods towards the current bag, and a
//! bounded tree-width factor `M₂` with `G ⊆ᵢ Q ⊠ M₂`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{greedy_square_coloring, product_adjacent, LoopGraph, ProductVertex};
use crate::treedecomp::{
    derive_context, validate_decomposition, DecompositionContext, TdError, TdVerdict,
    TreeDecomposition,
};

mod bounds;
mod build;

pub use bounds::{bound_report, BoundReport};
pub use build::{
    build_expression, build_expression_with, build_induced_factor, build_induced_factor_with,
    path_case, path_colouring, BuiltExpression, InducedFactorCertificate, PathCase,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InducedError {
    #[error("factor {which} has a loop at {v}")]
    LoopInFactor { which: char, v: usize },
    #[error("member {x} lies outside V(Q) x V(M)")]
    MemberOutOfRange { x: usize },
    #[error("members {x} and {y} are the same product vertex")]
    DuplicateMember { x: usize, y: usize },
    #[error("graph has {graph} vertices but {members} members were declared")]
    VertexCountMismatch { members: usize, graph: usize },
    #[error("edge {x}-{y} is not an edge of the product")]
    NotInProduct { x: usize, y: usize },
    #[error("graph has a loop at {v}")]
    LoopInGraph { v: usize },
    #[error("decomposition of M rejected: {0}")]
    Decomposition(TdVerdict),
    #[error(transparent)]
    Td(#[from] TdError),
    #[error("colouring has {got} entries, Q has {n} vertices")]
    ColouringLength { got: usize, n: usize },
    #[error("colouring is not proper on the square of Q ({u} and {v} clash)")]
    ImproperColouring { u: usize, v: usize },
    #[error("left factor is not a path")]
    NotAPath,
    #[error("member {x} does not lie below node {t}")]
    NotBelow { x: usize, t: usize },
}

/// A graph `g` whose vertex `x` is the product vertex `members[x]` of
/// `Q ⊠ M` (`a` in `Q`, `b` in `M`), with every edge a product edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSubgraph {
    pub q: LoopGraph,
    pub m: LoopGraph,
    pub members: Vec<ProductVertex>,
    pub g: LoopGraph,
}

impl ProductSubgraph {
    pub fn new(
        q: LoopGraph,
        m: LoopGraph,
        members: Vec<ProductVertex>,
        g: LoopGraph,
    ) -> Result<Self, InducedError> {
        if let Some(v) = q.loops().next() {
            return Err(InducedError::LoopInFactor { which: 'Q', v });
        }
        if let Some(v) = m.loops().next() {
            return Err(InducedError::LoopInFactor { which: 'M', v });
        }
        if let Some(v) = g.loops().next() {
            return Err(InducedError::LoopInGraph { v });
        }
        if members.len() != g.vertex_count() {
            return Err(InducedError::VertexCountMismatch {
                members: members.len(),
                graph: g.vertex_count(),
            });
        }
        let mut seen = BTreeMap::new();
        for (x, pv) in members.iter().enumerate() {
            if pv.a >= q.vertex_count() || pv.b >= m.vertex_count() {
                return Err(InducedError::MemberOutOfRange { x });
            }
            if let Some(&y) = seen.get(pv) {
                return Err(InducedError::DuplicateMember { x: y, y: x });
            }
            seen.insert(*pv, x);
        }
        if let Some((x, y)) = g
            .edges()
            .find(|&(x, y)| !product_adjacent(&q, &m, members[x], members[y]))
        {
            return Err(InducedError::NotInProduct { x, y });
        }
        Ok(ProductSubgraph { q, m, members, g })
    }

    /// The full product restricted to `members`, i.e. the induced subgraph.
    pub fn induced_edges(&self) -> LoopGraph {
        let n = self.members.len();
        let mut g = LoopGraph::new(n);
        for x in 0..n {
            for y in x + 1..n {
                if product_adjacent(&self.q, &self.m, self.members[x], self.members[y]) {
                    g.add_edge(x, y);
                }
            }
        }
        g
    }
}

/// `k + 1` sparse 0/1 functions on the square-colour set, each stored as
/// its sorted support.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BaseColour(pub Vec<Vec<usize>>);

impl BaseColour {
    pub fn zero(k: usize) -> Self {
        BaseColour(vec![Vec::new(); k + 1])
    }

    pub fn has(&self, j: usize, alpha: usize) -> bool {
        self.0[j].binary_search(&alpha).is_ok()
    }

    pub fn support(&self, j: usize) -> &[usize] {
        &self.0[j]
    }

    pub fn cleared(&self, j: usize) -> Self {
        let mut c = self.clone();
        c.0[j].clear();
        c
    }

    pub fn max_support(&self) -> usize {
        self.0.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// `alpha = None` is the running colour, `Some(s(q))` the initial one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FullColour {
    pub alpha: Option<usize>,
    pub base: BaseColour,
}

/// Hands out dense colour ids `1..` to colours in order of first use.
#[derive(Debug, Clone, Default)]
pub struct ColourInterner {
    ids: BTreeMap<FullColour, usize>,
    colours: Vec<FullColour>,
}

impl ColourInterner {
    pub fn id(&mut self, c: &FullColour) -> usize {
        if let Some(&id) = self.ids.get(c) {
            return id;
        }
        self.colours.push(c.clone());
        let id = self.colours.len();
        self.ids.insert(c.clone(), id);
        id
    }

    pub fn len(&self) -> usize {
        self.colours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colours.is_empty()
    }

    pub fn colour(&self, id: usize) -> &FullColour {
        &self.colours[id - 1]
    }

    pub fn into_colours(self) -> Vec<FullColour> {
        self.colours
    }
}

/// Everything the constructions share: the instance, the decomposition of
/// `M` with its derived sets, and the square colouring `s` of `Q`.
#[derive(Debug, Clone)]
pub struct ColourScheme<'a> {
    pub inst: &'a ProductSubgraph,
    pub td: &'a TreeDecomposition,
    pub ctx: DecompositionContext,
    pub s: Vec<usize>,
    /// Members over each vertex of `M`, ascending by `Q`-coordinate.
    pub by_m: Vec<Vec<usize>>,
    /// Vertices of `M` in the order their batches are added.
    pub order: Vec<usize>,
    pub rank: Vec<usize>,
}

impl<'a> ColourScheme<'a> {
    pub fn new(
        inst: &'a ProductSubgraph,
        td: &'a TreeDecomposition,
        s: Vec<usize>,
    ) -> Result<Self, InducedError> {
        let verdict = validate_decomposition(&inst.m, td);
        if !verdict.is_accept() {
            return Err(InducedError::Decomposition(verdict));
        }
        let nq = inst.q.vertex_count();
        if s.len() != nq {
            return Err(InducedError::ColouringLength {
                got: s.len(),
                n: nq,
            });
        }
        if let Some((u, v)) = inst.q.square().edges().find(|&(u, v)| s[u] == s[v]) {
            return Err(InducedError::ImproperColouring { u, v });
        }
        let ctx = derive_context(td)?;
        let nm = inst.m.vertex_count();
        let mut by_m = vec![Vec::new(); nm];
        for (x, pv) in inst.members.iter().enumerate() {
            by_m[pv.b].push(x);
        }
        for list in &mut by_m {
            list.sort_by_key(|&x| inst.members[x].a);
        }
        let mut order = Vec::with_capacity(nm);
        for t in td.post_order() {
            order.extend(td.bag(t).iter().copied().filter(|&m| ctx.top[m] == t));
        }
        let mut rank = vec![0; nm];
        for (i, &m) in order.iter().enumerate() {
            rank[m] = i;
        }
        Ok(ColourScheme {
            inst,
            td,
            ctx,
            s,
            by_m,
            order,
            rank,
        })
    }

    /// Uses the greedy square colouring of `Q`.
    pub fn greedy(
        inst: &'a ProductSubgraph,
        td: &'a TreeDecomposition,
    ) -> Result<Self, InducedError> {
        Self::new(inst, td, greedy_square_coloring(&inst.q))
    }

    /// Vertices of `M` whose topmost bag is `t`, ascending.
    pub fn batch(&self, t: usize) -> impl Iterator<Item = usize> + '_ {
        self.td
            .bag(t)
            .iter()
            .copied()
            .filter(move |&m| self.ctx.top[m] == t)
    }

    pub fn colour_count(&self) -> usize {
        self.s.iter().copied().max().unwrap_or(0)
    }

    /// `b_j(α) = 1` iff `x` has a neighbour `[q', m']` with `m'` in the bag
    /// of `t`, `p(m') = j` and `s(q') = α`.
    pub fn base_colour(&self, x: usize, t: usize) -> Result<BaseColour, InducedError> {
        let m = self.inst.members[x].b;
        if self.ctx.y[t].binary_search(&m).is_err() {
            return Err(InducedError::NotBelow { x, t });
        }
        let bag = self.td.bag(t);
        let mut b = BaseColour::zero(self.ctx.k);
        for &y in self.inst.g.neighbours(x) {
            let pv = self.inst.members[y];
            if bag.binary_search(&pv.b).is_ok() {
                b.0[self.ctx.p[pv.b]].push(self.s[pv.a]);
            }
        }
        for list in &mut b.0 {
            list.sort_unstable();
            list.dedup();
        }
        Ok(b)
    }

    pub fn initial_colour(&self, x: usize) -> FullColour {
        let pv = self.inst.members[x];
        let base = self
            .base_colour(x, self.ctx.top[pv.b])
            .expect("topmost node lies above its vertex");
        FullColour {
            alpha: Some(self.s[pv.a]),
            base,
        }
    }

    /// Checks that adjacency is decided by colours: for `x` below `t` and
    /// `x'` over a vertex whose topmost bag is `t`, `xx'` is an edge iff
    /// `qq'` is an edge of the reflexive closure of `Q` and
    /// `b_{p(m')}(s(q')) = 1`.  Returns the first failing `(t, x, x')`.
    pub fn edge_rule_violation(&self) -> Option<(usize, usize, usize)> {
        let inst = self.inst;
        for t in 0..self.td.node_count() {
            let below: Vec<usize> = self.ctx.y[t]
                .iter()
                .flat_map(|&m| self.by_m[m].iter().copied())
                .collect();
            let fresh: Vec<usize> = self
                .batch(t)
                .flat_map(|m| self.by_m[m].iter().copied())
                .collect();
            for &x in &below {
                let b = self.base_colour(x, t).ok()?;
                let q = inst.members[x].a;
                for &y in &fresh {
                    if x == y {
                        continue;
                    }
                    let pv = inst.members[y];
                    let q_adj = q == pv.a || inst.q.has_edge(q, pv.a);
                    let predicted = q_adj && b.has(self.ctx.p[pv.b], self.s[pv.a]);
                    if predicted != inst.g.has_edge(x, y) {
                        return Some((t, x, y));
                    }
                }
            }
        }
        None
    }
}
