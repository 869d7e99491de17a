//! Subcommands.  Verifiers print `ACCEPT ...` or `REJECT <witness>`; every
//! command maps to exit code 0 (success), 1 (reject) or 2 (input error).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use hcw_core::embedding::{check_induced_embedding, ProductEmbedding};
use hcw_core::expr::{grid_expression, HcwExpression};
use hcw_core::graph::LoopGraph;
use hcw_core::induced::{
    bound_report, build_expression, build_induced_factor, path_case, BoundReport, BuiltExpression,
};
use hcw_core::planar::{
    build_planar_structure, verify_nice_structure, NiceProductStructure, PlanarBuild,
};
use hcw_core::treedecomp::{exact_treewidth_capped, validate_decomposition, DEFAULT_TW_CAP};
use hcw_core::twinwidth::{
    contraction_from_path_expression, red_degree_bound, scan_star_subdivision,
    star_subdivision_embedding, verify_contraction_sequence,
};

use crate::dot::to_dot;
use crate::formats::*;
use crate::gen::random_triangulation;

#[derive(Debug, Parser)]
#[command(
    name = "hcw",
    version,
    about = "Product-structure certificates: build, verify, export"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Dot,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an expression file to a graph.
    Eval {
        expr: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Five-colour expression of the a x b grid; also writes `<output>.param.graph`.
    GridExpr {
        a: usize,
        b: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Expression and induced factor certificate for a subgraph of Q x M.
    FromProduct {
        psub: PathBuf,
        td: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Colour count of the square of Q, for the refined bounds.
        #[arg(long)]
        refined_d: Option<usize>,
    },
    /// As `from-product` for a path Q, with the three-colouring of its square.
    PathCase {
        psub: PathBuf,
        td: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Product structure of embedded planar graphs.
    PlanarBuild {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Check that a map is an induced embedding into left x right.
    VerifyEmbedding {
        graph: PathBuf,
        left: PathBuf,
        right: PathBuf,
        emb: PathBuf,
    },
    /// Check a tree decomposition.
    VerifyTd { graph: PathBuf, td: PathBuf },
    /// Check a planar product structure written by `planar-build`.
    VerifyNice {
        eg: PathBuf,
        m: PathBuf,
        td: PathBuf,
        slots: PathBuf,
    },
    /// Replay a contraction sequence and report the largest red degree.
    VerifyContractions {
        graph: PathBuf,
        seq: PathBuf,
        /// Reject when the red degree exceeds this.
        #[arg(long)]
        max: Option<usize>,
    },
    /// Contraction sequence of an expression over a reflexive path.
    TwwFromExpr {
        expr: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Exact tree-width of a small graph.
    TwExact {
        graph: PathBuf,
        #[arg(long, env = "HCW_TW_CAP", default_value_t = DEFAULT_TW_CAP)]
        cap: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Embed the 3-subdivision of a graph into the square of a star.
    StarSubdiv {
        graph: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Export a graph (or the graph part of an embedded graph).
    ExportDot {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = ExportFormat::Dot)]
        format: ExportFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Seeded random planar triangulation.
    GenPlanar {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Accept,
    Reject,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Accept => 0,
            Outcome::Reject => 1,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn parsed<T>(path: &Path, f: impl FnOnce(&str) -> Result<T, FormatError>) -> Result<T> {
    f(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write(p, text),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn verdict(out: &mut dyn Write, accept: bool, line: impl std::fmt::Display) -> Result<Outcome> {
    writeln!(out, "{line}")?;
    Ok(if accept {
        Outcome::Accept
    } else {
        Outcome::Reject
    })
}

/// Expression file with its parameter graph resolved next to it.
pub fn load_expr(path: &Path) -> Result<HcwExpression> {
    let text = read(path)?;
    let header = parse_expr_header(&text).with_context(|| format!("parsing {}", path.display()))?;
    let param_path = path.parent().unwrap_or(Path::new(".")).join(&header.param);
    let param = parsed(&param_path, parse_graph)?;
    parse_expr(&text, param).with_context(|| format!("parsing {}", path.display()))
}

fn report_bounds(out: &mut dyn Write, b: &BoundReport) -> Result<()> {
    writeln!(
        out,
        "bound delta {} k {} colours {} width {}",
        b.delta, b.k, b.colours, b.width
    )?;
    if let (Some(d), Some(c), Some(w)) = (b.d, &b.refined_colours, &b.refined_width) {
        writeln!(out, "refined d {d} colours {c} width {w}")?;
    }
    Ok(())
}

/// Writes `expr.expr`, `param.graph`, `vertices.map`, `g.graph`, `q.graph`,
/// `m2.graph`, `td2.td` and `emb.emb`.
fn write_product_outputs(
    dir: &Path,
    built: &BuiltExpression,
    g: &LoopGraph,
    q: &LoopGraph,
    emb: &ProductEmbedding,
    td2: &hcw_core::treedecomp::TreeDecomposition,
) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    write(
        &dir.join("expr.expr"),
        &write_expr(&built.expr, "param.graph"),
    )?;
    write(&dir.join("param.graph"), &write_graph(&built.expr.param))?;
    write(&dir.join("vertices.map"), &write_vmap(&built.vertex_of))?;
    write(&dir.join("g.graph"), &write_graph(g))?;
    write(&dir.join("q.graph"), &write_graph(q))?;
    write(&dir.join("m2.graph"), &write_graph(&emb.right))?;
    write(&dir.join("td2.td"), &write_td(td2))?;
    write(&dir.join("emb.emb"), &write_emb(&emb.image))
}

fn planar_outputs(dir: &Path, b: &PlanarBuild) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let s = &b.structure;
    write(&dir.join("tri.eg"), &write_eg(&b.triangulated))?;
    write(
        &dir.join("graph.graph"),
        &write_graph(
            &b.triangulated
                .graph
                .induced_subgraph(&(0..b.original).collect::<Vec<_>>()),
        ),
    )?;
    write(
        &dir.join("p.graph"),
        &write_graph(&LoopGraph::path(s.p_len)),
    )?;
    write(&dir.join("m.graph"), &write_graph(&s.m))?;
    write(&dir.join("td.td"), &write_td(&s.td))?;
    write(&dir.join("slots.slots"), &write_slots(&s.slot))?;
    write(
        &dir.join("emb.emb"),
        &write_emb(&b.original_embedding().image),
    )
}

/// Rebuilds the structure from a slot map: root `outer[0]`, BFS levels, and
/// paths listed top-down by level.
pub fn structure_from_slots(
    g: &LoopGraph,
    root: usize,
    m: LoopGraph,
    td: hcw_core::treedecomp::TreeDecomposition,
    slot: Vec<(usize, usize)>,
) -> NiceProductStructure {
    let level = g.distances(root);
    let np = slot.iter().map(|&(p, _)| p + 1).max().unwrap_or(0);
    let mut paths = vec![Vec::new(); np];
    for (v, &(p, _)) in slot.iter().enumerate() {
        paths[p].push(v);
    }
    for p in &mut paths {
        p.sort_by_key(|&v| (level[v], v));
    }
    let p_len = level
        .iter()
        .filter(|&&l| l != usize::MAX)
        .max()
        .map_or(0, |l| l + 1);
    NiceProductStructure {
        p_len,
        m,
        slot,
        td,
        paths,
        root,
        level,
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<Outcome> {
    match cli.command {
        Command::Eval { expr, output } => {
            let e = load_expr(&expr)?;
            let value = e
                .evaluate()
                .with_context(|| format!("evaluating {}", expr.display()))?;
            emit(out, output.as_deref(), &write_graph(&value.graph))?;
            Ok(Outcome::Accept)
        }
        Command::GridExpr { a, b, output } => {
            let (e, _) = grid_expression(a, b);
            let name = output
                .file_name()
                .context("output needs a file name")?
                .to_string_lossy()
                .into_owned();
            let param_name = format!("{name}.param.graph");
            write(&output.with_file_name(&param_name), &write_graph(&e.param))?;
            write(&output, &write_expr(&e, &param_name))?;
            Ok(Outcome::Accept)
        }
        Command::FromProduct {
            psub,
            td,
            output,
            refined_d,
        } => {
            let inst = parsed(&psub, parse_psub)?;
            let td = parsed(&td, parse_td)?;
            let built = build_expression(&inst, &td)?;
            let cert = build_induced_factor(&inst, &td)?;
            write_product_outputs(
                &output,
                &built,
                &inst.g,
                &inst.q,
                &cert.embedding,
                &cert.td2,
            )?;
            let bounds = bound_report(inst.q.max_degree().max(2), td.width(), refined_d);
            writeln!(
                out,
                "ell {} factor vertices {} width {} colours {}",
                built.expr.ell,
                cert.m2.vertex_count(),
                cert.width(),
                cert.gammas.len()
            )?;
            report_bounds(out, &bounds)?;
            Ok(Outcome::Accept)
        }
        Command::PathCase { psub, td, output } => {
            let inst = parsed(&psub, parse_psub)?;
            let td = parsed(&td, parse_td)?;
            let pc = path_case(&inst, &td)?;
            let cert = &pc.factor;
            write_product_outputs(
                &output,
                &pc.expression,
                &inst.g,
                &inst.q,
                &cert.embedding,
                &cert.td2,
            )?;
            writeln!(
                out,
                "ell {} factor vertices {} width {} colours {}",
                pc.expression.expr.ell,
                cert.m2.vertex_count(),
                cert.width(),
                cert.gammas.len()
            )?;
            report_bounds(out, &pc.bounds)?;
            Ok(Outcome::Accept)
        }
        Command::PlanarBuild {
            inputs,
            output,
            jobs,
        } => {
            let results = planar_build_all(&inputs, jobs.max(1));
            for (path, res) in inputs.iter().zip(results) {
                let b = res.with_context(|| format!("building {}", path.display()))?;
                let dir = if inputs.len() == 1 {
                    output.clone()
                } else {
                    output.join(path.file_stem().context("input needs a file name")?)
                };
                planar_outputs(&dir, &b)?;
                let s = &b.structure;
                writeln!(
                    out,
                    "{}: vertices {} paths {} thickness {} max bag {} width {}",
                    path.display(),
                    b.original,
                    s.paths.len(),
                    b.thickness(),
                    s.td.max_bag(),
                    s.td.width()
                )?;
            }
            Ok(Outcome::Accept)
        }
        Command::VerifyEmbedding {
            graph,
            left,
            right,
            emb,
        } => {
            let g = parsed(&graph, parse_graph)?;
            let e = ProductEmbedding::new(
                parsed(&left, parse_graph)?,
                parsed(&right, parse_graph)?,
                parsed(&emb, parse_emb)?,
            );
            let v = check_induced_embedding(&g, &e);
            verdict(out, v.is_accept(), v)
        }
        Command::VerifyTd { graph, td } => {
            let g = parsed(&graph, parse_graph)?;
            let td = parsed(&td, parse_td)?;
            if td.n != g.vertex_count() {
                bail!(
                    "decomposition is for {} vertices, graph has {}",
                    td.n,
                    g.vertex_count()
                );
            }
            let v = validate_decomposition(&g, &td);
            verdict(out, v.is_accept(), v)
        }
        Command::VerifyNice { eg, m, td, slots } => {
            let eg = parsed(&eg, parse_eg)?;
            let m = parsed(&m, parse_graph)?;
            let td = parsed(&td, parse_td)?;
            let n = eg.vertex_count();
            let slot = parsed(&slots, |t| parse_slots(t, n))?;
            let s = structure_from_slots(&eg.graph, eg.outer[0], m, td, slot);
            let v = verify_nice_structure(&eg.graph, &s);
            verdict(out, v.is_accept(), v)
        }
        Command::VerifyContractions { graph, seq, max } => {
            let g = parsed(&graph, parse_graph)?;
            let seq = parsed(&seq, |t| parse_seq(t, g.vertex_count()))?;
            let r = verify_contraction_sequence(&g, &seq)?;
            writeln!(out, "maxred {} at step {}", r.max_red, r.at)?;
            if r.remaining > 1 {
                writeln!(out, "partial sequence: {} vertices remain", r.remaining)?;
            }
            match max {
                Some(d) if r.max_red > d => verdict(
                    out,
                    false,
                    format!("REJECT red degree {} exceeds {d}", r.max_red),
                ),
                _ => Ok(Outcome::Accept),
            }
        }
        Command::TwwFromExpr { expr, output } => {
            let e = load_expr(&expr)?;
            let seq = contraction_from_path_expression(&e)?;
            let g = e.evaluate()?.graph;
            let r = verify_contraction_sequence(&g, &seq)?;
            write(&output, &write_seq(&seq))?;
            let ell = e.expression_ell();
            let bound = red_degree_bound(ell);
            writeln!(out, "maxred {} at step {}", r.max_red, r.at)?;
            verdict(
                out,
                r.max_red <= bound,
                format_args!("bound 5*{ell}-2 = {bound}"),
            )
        }
        Command::TwExact { graph, cap, output } => {
            let g = parsed(&graph, parse_graph)?;
            let (k, td) = exact_treewidth_capped(&g, cap)?;
            writeln!(out, "treewidth {k}")?;
            if let Some(p) = output {
                write(&p, &write_td(&td))?;
            }
            Ok(Outcome::Accept)
        }
        Command::StarSubdiv { graph, output } => {
            let g = parsed(&graph, parse_graph)?;
            let s = star_subdivision_embedding(&g)?;
            fs::create_dir_all(&output)
                .with_context(|| format!("creating {}", output.display()))?;
            write(
                &output.join("subdivision.graph"),
                &write_graph(&s.subdivision),
            )?;
            write(&output.join("star.graph"), &write_graph(&s.embedding.left))?;
            write(&output.join("emb.emb"), &write_emb(&s.embedding.image))?;
            let scan = scan_star_subdivision(&s);
            writeln!(
                out,
                "n {} b-independent {} a2-two-into-b {} b-one-into-a1 {} bipartite-match {} a-edges {}",
                s.n,
                scan.b_independent,
                scan.a2_two_into_b,
                scan.b_one_into_a1,
                scan.bipartite_part_matches,
                scan.a_edges
            )?;
            verdict(
                out,
                scan.is_ok(),
                if scan.is_ok() {
                    "ACCEPT"
                } else {
                    "REJECT structural scan failed"
                },
            )
        }
        Command::ExportDot {
            graph,
            format,
            output,
        } => {
            let g = parsed(&graph, parse_graph)?;
            let text = match format {
                ExportFormat::Dot => {
                    let name = graph
                        .file_stem()
                        .map_or("g".into(), |s| s.to_string_lossy().into_owned());
                    to_dot(&g, &name, None)
                }
                ExportFormat::Text => write_graph(&g),
            };
            emit(out, output.as_deref(), &text)?;
            Ok(Outcome::Accept)
        }
        Command::GenPlanar { seed, n, output } => {
            if n < 3 {
                bail!("a triangulation needs at least 3 vertices");
            }
            emit(
                out,
                output.as_deref(),
                &write_eg(&random_triangulation(seed, n)),
            )?;
            Ok(Outcome::Accept)
        }
    }
}

/// Builds each input on up to `jobs` threads; results keep input order.
fn planar_build_all(inputs: &[PathBuf], jobs: usize) -> Vec<Result<PlanarBuild>> {
    let one = |p: &PathBuf| -> Result<PlanarBuild> {
        let eg = parsed(p, parse_eg)?;
        Ok(build_planar_structure(&eg)?)
    };
    if jobs <= 1 || inputs.len() <= 1 {
        return inputs.iter().map(one).collect();
    }
    let chunk = inputs.len().div_ceil(jobs);
    std::thread::scope(|s| {
        let handles: Vec<_> = inputs
            .chunks(chunk)
            .map(|c| s.spawn(move || c.iter().map(one).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("build thread panicked"))
            .collect()
    })
}
