//! Line-based text formats.  Every format ignores blank lines and anything
//! after `#`.

use std::fmt::Write as _;

use hcw_core::expr::{HcwExpression, Label, Node, NodeId};
use hcw_core::graph::{GraphError, LoopGraph, ProductVertex};
use hcw_core::induced::{InducedError, ProductSubgraph};
use hcw_core::planar::{EmbeddedGraph, PlanarError};
use hcw_core::treedecomp::{TdError, TreeDecomposition};
use hcw_core::twinwidth::ContractionSequence;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing header `{0}`")]
    MissingHeader(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Td(#[from] TdError),
    #[error(transparent)]
    Planar(#[from] PlanarError),
    #[error(transparent)]
    Induced(#[from] InducedError),
}

fn err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-empty lines with comments stripped, as `(line number, tokens)`.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn num(line: usize, tok: Option<&&str>) -> Result<usize, FormatError> {
    let t = tok.ok_or_else(|| err(line, "missing number"))?;
    t.parse()
        .map_err(|_| err(line, format!("`{t}` is not a number")))
}

fn nums(line: usize, toks: &[&str]) -> Result<Vec<usize>, FormatError> {
    toks.iter().map(|t| num(line, Some(t))).collect()
}

fn arity(line: usize, toks: &[&str], k: usize) -> Result<(), FormatError> {
    if toks.len() == k + 1 {
        Ok(())
    } else {
        Err(err(line, format!("`{}` takes {k} arguments", toks[0])))
    }
}

// ---- graphs -------------------------------------------------------------

pub fn parse_graph(text: &str) -> Result<LoopGraph, FormatError> {
    let mut g: Option<LoopGraph> = None;
    for (line, t) in records(text) {
        match t[0] {
            "graph" => {
                arity(line, &t, 1)?;
                if g.is_some() {
                    return Err(err(line, "second `graph` header"));
                }
                g = Some(LoopGraph::new(num(line, t.get(1))?));
            }
            "e" | "l" => {
                let g = g.as_mut().ok_or(FormatError::MissingHeader("graph <n>"))?;
                if t[0] == "e" {
                    arity(line, &t, 2)?;
                    g.try_add_edge(num(line, t.get(1))?, num(line, t.get(2))?)
                        .map_err(|e| err(line, e.to_string()))?;
                } else {
                    arity(line, &t, 1)?;
                    g.try_add_loop(num(line, t.get(1))?)
                        .map_err(|e| err(line, e.to_string()))?;
                }
            }
            "rot" | "outer" => {}
            other => return Err(err(line, format!("unknown record `{other}`"))),
        }
    }
    g.ok_or(FormatError::MissingHeader("graph <n>"))
}

pub fn write_graph(g: &LoopGraph) -> String {
    let mut s = format!("graph {}\n", g.vertex_count());
    for v in g.loops() {
        let _ = writeln!(s, "l {v}");
    }
    for (u, v) in g.edges() {
        let _ = writeln!(s, "e {u} {v}");
    }
    s
}

// ---- expressions --------------------------------------------------------

/// Header fields of an expression file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprHeader {
    pub ell: usize,
    pub param: String,
}

pub fn parse_expr_header(text: &str) -> Result<ExprHeader, FormatError> {
    let (line, t) = records(text)
        .next()
        .ok_or(FormatError::MissingHeader("expr ell=<l> param=<file>"))?;
    if t[0] != "expr" {
        return Err(FormatError::MissingHeader("expr ell=<l> param=<file>"));
    }
    let (mut ell, mut param) = (None, None);
    for kv in &t[1..] {
        match kv.split_once('=') {
            Some(("ell", v)) => {
                ell = Some(v.parse().map_err(|_| err(line, format!("bad ell `{v}`")))?)
            }
            Some(("param", v)) => param = Some(v.to_string()),
            _ => return Err(err(line, format!("unknown header field `{kv}`"))),
        }
    }
    match (ell, param) {
        (Some(ell), Some(param)) => Ok(ExprHeader { ell, param }),
        _ => Err(err(line, "header needs ell= and param=")),
    }
}

/// Parses the postfix body; `param` is the already loaded parameter graph.
pub fn parse_expr(text: &str, param: LoopGraph) -> Result<HcwExpression, FormatError> {
    let header = parse_expr_header(text)?;
    let mut e = HcwExpression::new(header.ell, param);
    let mut stack: Vec<NodeId> = Vec::new();
    let mut last = 0;
    for (line, t) in records(text).skip(1) {
        last = line;
        let pop = |stack: &mut Vec<NodeId>| stack.pop().ok_or_else(|| err(line, "stack underflow"));
        let node = match t[0] {
            "create" => {
                arity(line, &t, 2)?;
                e.create(num(line, t.get(1))?, num(line, t.get(2))?)
            }
            "union" => {
                arity(line, &t, 0)?;
                let b = pop(&mut stack)?;
                let a = pop(&mut stack)?;
                e.union(a, b)
            }
            "addedges" | "recolor" => {
                arity(line, &t, 2)?;
                let (i, j) = (num(line, t.get(1))?, num(line, t.get(2))?);
                let c = pop(&mut stack)?;
                if t[0] == "addedges" {
                    e.add_edges(i, j, c)
                } else {
                    e.recolor(i, j, c)
                }
            }
            other => return Err(err(line, format!("unknown operation `{other}`"))),
        };
        stack.push(node);
    }
    if stack.len() != 1 {
        return Err(err(
            last,
            format!("expression leaves {} terms on the stack", stack.len()),
        ));
    }
    Ok(e)
}

/// Nodes reachable from the root in postfix order.
fn postfix(nodes: &[Node<Label>], root: NodeId) -> Vec<NodeId> {
    let mut out = Vec::new();
    let mut stack = vec![(root, false)];
    while let Some((id, done)) = stack.pop() {
        if done {
            out.push(id);
            continue;
        }
        stack.push((id, true));
        match nodes[id] {
            Node::Create(_) => {}
            Node::Union(a, b) => {
                stack.push((b, false));
                stack.push((a, false));
            }
            Node::AddEdges { child, .. } | Node::Recolor { child, .. } => {
                stack.push((child, false))
            }
        }
    }
    out
}

pub fn write_expr(e: &HcwExpression, param_ref: &str) -> String {
    let mut s = format!("expr ell={} param={param_ref}\n", e.ell);
    let Some(root) = e.root() else { return s };
    for id in postfix(e.nodes(), root) {
        let _ = match e.nodes()[id] {
            Node::Create(l) => writeln!(s, "create {} {}", l.colour, l.pvertex),
            Node::Union(..) => writeln!(s, "union"),
            Node::AddEdges { i, j, .. } => writeln!(s, "addedges {i} {j}"),
            Node::Recolor { i, j, .. } => writeln!(s, "recolor {i} {j}"),
        };
    }
    s
}

// ---- vertex maps --------------------------------------------------------

/// Lines `map <i> <x>`: expression vertex `i` is input vertex `x`.
pub fn parse_vmap(text: &str) -> Result<Vec<usize>, FormatError> {
    let mut map: Vec<Option<usize>> = Vec::new();
    for (line, t) in records(text) {
        if t[0] != "map" {
            return Err(err(line, format!("unknown record `{}`", t[0])));
        }
        arity(line, &t, 2)?;
        let (i, x) = (num(line, t.get(1))?, num(line, t.get(2))?);
        if i >= map.len() {
            map.resize(i + 1, None);
        }
        if map[i].replace(x).is_some() {
            return Err(err(line, format!("vertex {i} mapped twice")));
        }
    }
    map.into_iter()
        .enumerate()
        .map(|(i, x)| x.ok_or_else(|| err(0, format!("vertex {i} unmapped"))))
        .collect()
}

pub fn write_vmap(map: &[usize]) -> String {
    let mut s = String::new();
    for (i, x) in map.iter().enumerate() {
        let _ = writeln!(s, "map {i} {x}");
    }
    s
}

// ---- tree decompositions ------------------------------------------------

pub fn parse_td(text: &str) -> Result<TreeDecomposition, FormatError> {
    let mut it = records(text);
    let (line, t) = it
        .next()
        .ok_or(FormatError::MissingHeader("td <nodes> <width+1> <n>"))?;
    if t[0] != "td" {
        return Err(FormatError::MissingHeader("td <nodes> <width+1> <n>"));
    }
    arity(line, &t, 3)?;
    let h = nums(line, &t[1..])?;
    let (nodes, size, n) = (h[0], h[1], h[2]);
    let mut bags: Vec<Option<Vec<usize>>> = vec![None; nodes];
    let mut edges = Vec::new();
    for (line, t) in it {
        match t[0] {
            "b" => {
                let v = nums(line, &t[1..])?;
                let node = *v.first().ok_or_else(|| err(line, "bag without node"))?;
                if node >= nodes || bags[node].is_some() {
                    return Err(err(line, format!("bad or repeated bag node {node}")));
                }
                let bag = v[1..].to_vec();
                if bag.iter().any(|&x| x >= n) {
                    return Err(err(line, "bag vertex outside the graph"));
                }
                if bag.len() > size {
                    return Err(TdError::BagTooLarge {
                        node,
                        size: bag.len(),
                        allowed: size,
                    }
                    .into());
                }
                bags[node] = Some(bag);
            }
            "t" => {
                arity(line, &t, 2)?;
                edges.push((num(line, t.get(1))?, num(line, t.get(2))?));
            }
            other => return Err(err(line, format!("unknown record `{other}`"))),
        }
    }
    let bags = bags.into_iter().map(Option::unwrap_or_default).collect();
    Ok(TreeDecomposition::new(n, bags, &edges)?)
}

pub fn write_td(td: &TreeDecomposition) -> String {
    let mut s = format!("td {} {} {}\n", td.node_count(), td.max_bag(), td.n);
    for (t, bag) in td.bags().iter().enumerate() {
        let _ = write!(s, "b {t}");
        for v in bag {
            let _ = write!(s, " {v}");
        }
        s.push('\n');
    }
    for (p, c) in td.tree_edges() {
        let _ = writeln!(s, "t {p} {c}");
    }
    s
}

// ---- embeddings ---------------------------------------------------------

pub fn parse_emb(text: &str) -> Result<Vec<ProductVertex>, FormatError> {
    let mut image: Vec<Option<ProductVertex>> = Vec::new();
    for (line, t) in records(text) {
        if t[0] != "emb" {
            return Err(err(line, format!("unknown record `{}`", t[0])));
        }
        arity(line, &t, 3)?;
        let v = nums(line, &t[1..])?;
        if v[0] >= image.len() {
            image.resize(v[0] + 1, None);
        }
        if image[v[0]]
            .replace(ProductVertex::new(v[1], v[2]))
            .is_some()
        {
            return Err(err(line, format!("vertex {} mapped twice", v[0])));
        }
    }
    image
        .into_iter()
        .enumerate()
        .map(|(x, p)| p.ok_or_else(|| err(0, format!("vertex {x} has no image"))))
        .collect()
}

pub fn write_emb(image: &[ProductVertex]) -> String {
    let mut s = String::new();
    for (x, p) in image.iter().enumerate() {
        let _ = writeln!(s, "emb {x} {} {}", p.a, p.b);
    }
    s
}

// ---- product subgraphs --------------------------------------------------

pub fn parse_psub(text: &str) -> Result<ProductSubgraph, FormatError> {
    let mut it = records(text);
    let (line, t) = it
        .next()
        .ok_or(FormatError::MissingHeader("psub <nq> <nm>"))?;
    if t[0] != "psub" {
        return Err(FormatError::MissingHeader("psub <nq> <nm>"));
    }
    arity(line, &t, 2)?;
    let mut q = LoopGraph::new(num(line, t.get(1))?);
    let mut m = LoopGraph::new(num(line, t.get(2))?);
    let mut members = Vec::new();
    let mut edges = Vec::new();
    for (line, t) in it {
        arity(line, &t, 2)?;
        let (a, b) = (num(line, t.get(1))?, num(line, t.get(2))?);
        let bad = |e: GraphError| err(line, e.to_string());
        match t[0] {
            "q" => {
                q.try_add_edge(a, b).map_err(bad)?;
            }
            "m" => {
                m.try_add_edge(a, b).map_err(bad)?;
            }
            "v" => members.push(ProductVertex::new(a, b)),
            "e" => edges.push((a, b)),
            other => return Err(err(line, format!("unknown record `{other}`"))),
        }
    }
    let g = LoopGraph::from_edges(members.len(), &edges)?;
    Ok(ProductSubgraph::new(q, m, members, g)?)
}

pub fn write_psub(p: &ProductSubgraph) -> String {
    let mut s = format!("psub {} {}\n", p.q.vertex_count(), p.m.vertex_count());
    for (u, v) in p.q.edges() {
        let _ = writeln!(s, "q {u} {v}");
    }
    for (u, v) in p.m.edges() {
        let _ = writeln!(s, "m {u} {v}");
    }
    for pv in &p.members {
        let _ = writeln!(s, "v {} {}", pv.a, pv.b);
    }
    for (x, y) in p.g.edges() {
        let _ = writeln!(s, "e {x} {y}");
    }
    s
}

// ---- embedded graphs ----------------------------------------------------

pub fn parse_eg(text: &str) -> Result<EmbeddedGraph, FormatError> {
    let g = parse_graph(text)?;
    let n = g.vertex_count();
    let mut rotation: Vec<Option<Vec<usize>>> = vec![None; n];
    let mut outer = None;
    for (line, t) in records(text) {
        match t[0] {
            "rot" => {
                let v = nums(line, &t[1..])?;
                let x = *v.first().ok_or_else(|| err(line, "rot without vertex"))?;
                if x >= n || rotation[x].replace(v[1..].to_vec()).is_some() {
                    return Err(err(line, format!("bad or repeated rotation for {x}")));
                }
            }
            "outer" => {
                arity(line, &t, 3)?;
                let v = nums(line, &t[1..])?;
                outer = Some([v[0], v[1], v[2]]);
            }
            _ => {}
        }
    }
    let rotation = rotation
        .into_iter()
        .map(Option::unwrap_or_default)
        .collect();
    let outer = outer.ok_or(FormatError::MissingHeader("outer <v1> <v2> <v3>"))?;
    Ok(EmbeddedGraph::new(g, rotation, outer)?)
}

pub fn write_eg(eg: &EmbeddedGraph) -> String {
    let mut s = write_graph(&eg.graph);
    for (v, r) in eg.rotation.iter().enumerate() {
        let _ = write!(s, "rot {v}");
        for w in r {
            let _ = write!(s, " {w}");
        }
        s.push('\n');
    }
    let [a, b, c] = eg.outer;
    let _ = writeln!(s, "outer {a} {b} {c}");
    s
}

// ---- slot maps ----------------------------------------------------------

pub fn parse_slots(text: &str, n: usize) -> Result<Vec<(usize, usize)>, FormatError> {
    let mut slot: Vec<Option<(usize, usize)>> = vec![None; n];
    for (line, t) in records(text) {
        if t[0] != "slot" {
            return Err(err(line, format!("unknown record `{}`", t[0])));
        }
        arity(line, &t, 3)?;
        let v = nums(line, &t[1..])?;
        if v[0] >= n || slot[v[0]].replace((v[1], v[2])).is_some() {
            return Err(err(line, format!("bad or repeated slot for {}", v[0])));
        }
        if !(1..=5).contains(&v[2]) {
            return Err(err(line, format!("slot {} outside 1..=5", v[2])));
        }
    }
    slot.into_iter()
        .enumerate()
        .map(|(v, s)| s.ok_or_else(|| err(0, format!("vertex {v} has no slot"))))
        .collect()
}

pub fn write_slots(slot: &[(usize, usize)]) -> String {
    let mut s = String::new();
    for (v, (p, j)) in slot.iter().enumerate() {
        let _ = writeln!(s, "slot {v} {p} {j}");
    }
    s
}

// ---- contraction sequences ----------------------------------------------

/// Lines `c <u> <v> -> <new>`; `new` must be `n + step`.
pub fn parse_seq(text: &str, n: usize) -> Result<ContractionSequence, FormatError> {
    let mut seq = ContractionSequence::new(n);
    for (line, t) in records(text) {
        if t[0] != "c" || t.len() != 5 || t[3] != "->" {
            return Err(err(line, "expected `c <u> <v> -> <new>`"));
        }
        let (u, v, new) = (
            num(line, t.get(1))?,
            num(line, t.get(2))?,
            num(line, t.get(4))?,
        );
        let expect = seq.merge(u, v);
        if new != expect {
            return Err(err(
                line,
                format!("merged vertex is {expect}, file says {new}"),
            ));
        }
    }
    Ok(seq)
}

pub fn write_seq(seq: &ContractionSequence) -> String {
    let mut s = String::new();
    for (i, &(u, v)) in seq.steps.iter().enumerate() {
        let _ = writeln!(s, "c {u} {v} -> {}", seq.new_id(i));
    }
    s
}
