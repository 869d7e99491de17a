//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! fails.  Every check is exact; the only tolerances are the time budgets.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;

use hcw::cli::structure_from_slots;
use hcw::formats::{
    parse_eg, parse_graph, parse_slots, parse_td, write_eg, write_graph, write_slots, write_td,
};
use hcw::gen::{
    partial_ktree, random_connected_graph, random_cw_expression, random_graph,
    random_hcw_expression, random_product_subgraph, random_triangulation, reflexive_path, rng,
};
use hcw_core::canon::are_isomorphic;
use hcw_core::embedding::{check_induced_embedding, ProductEmbedding};
use hcw_core::expr::grid_expression;
use hcw_core::graph::{strong_product, LoopGraph, ProductVertex};
use hcw_core::hereditary::{expression_from_factor, factor_from_expression};
use hcw_core::induced::{
    bound_report, build_expression, build_induced_factor, path_case, ProductSubgraph,
};
use hcw_core::planar::{
    build_planar_structure, verify_nice_structure, NiceVerdict, SLOTS, THICKNESS,
};
use hcw_core::treedecomp::{exact_treewidth, validate_decomposition, TreeDecomposition};
use hcw_core::twinwidth::{
    contraction_from_path_expression, red_degree_bound, scan_star_subdivision,
    star_subdivision_embedding, verify_contraction_sequence,
};

const PLANAR_INSTANCES: u64 = 200;
const PLANAR_MIN_N: usize = 20;
const PLANAR_MAX_N: usize = 200;
const MAX_BAG: usize = 40;
const MAX_WIDTH: usize = 39;
const PLANAR_BUDGET: Duration = Duration::from_secs(60);
const PRODUCT_INSTANCES: usize = 100;
const PRODUCT_BUDGET: Duration = Duration::from_secs(120);
const FACTOR_MAX_N: usize = 8;
const FACTOR_TW: usize = 2;
const ROUND_TRIPS: usize = 50;
const GRID_MAX: usize = 12;
const RANDOM_PATH_EXPRS: usize = 50;
const TW_SAMPLES: usize = 1000;
const TW_MAX_N: usize = 7;
const EMBED_PAIRS: usize = 200;
const HOST_MAX: usize = 7;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t <= budget, || format!("took {t:.1?}, budget {budget:?}"))?;
    Ok(t)
}

// ---- 1 ------------------------------------------------------------------

fn planar_bound() -> Outcome {
    let start = Instant::now();
    let (mut worst_bag, mut worst_thick) = (0, 0);
    for seed in 0..PLANAR_INSTANCES {
        let n = PLANAR_MIN_N + (seed as usize * 37) % (PLANAR_MAX_N - PLANAR_MIN_N + 1);
        let eg = random_triangulation(seed, n);
        let eg = parse_eg(&write_eg(&eg)).map_err(|e| e.to_string())?;
        let b = build_planar_structure(&eg).map_err(|e| format!("seed {seed}: {e}"))?;
        let s = &b.structure;
        // Reload the certificate as the verifier command would.
        let tri = parse_eg(&write_eg(&b.triangulated)).map_err(|e| e.to_string())?;
        let m = parse_graph(&write_graph(&s.m)).map_err(|e| e.to_string())?;
        let td = parse_td(&write_td(&s.td)).map_err(|e| e.to_string())?;
        let slot =
            parse_slots(&write_slots(&s.slot), tri.vertex_count()).map_err(|e| e.to_string())?;
        let rebuilt = structure_from_slots(&tri.graph, tri.outer[0], m, td, slot);
        let v = verify_nice_structure(&tri.graph, &rebuilt);
        let NiceVerdict::Accept { thickness, width } = v else {
            return Err(format!("seed {seed} n {n}: {v}"));
        };
        let bag = rebuilt.td.max_bag();
        ensure(
            bag <= MAX_BAG && width <= MAX_WIDTH && thickness <= THICKNESS,
            || format!("seed {seed}: bag {bag} width {width} thickness {thickness}"),
        )?;
        let emb = b.original_embedding();
        let ev = check_induced_embedding(&eg.graph, &emb);
        ensure(ev.is_accept(), || format!("seed {seed}: embedding {ev}"))?;
        worst_bag = worst_bag.max(bag);
        worst_thick = worst_thick.max(thickness);
    }
    let t = within(start, PLANAR_BUDGET)?;
    Ok(format!(
        "{PLANAR_INSTANCES} triangulations, max bag {worst_bag} (<= {MAX_BAG}), thickness {worst_thick} (<= {THICKNESS}), slots {SLOTS}, {t:.1?}"
    ))
}

// ---- 2, 3 ---------------------------------------------------------------

fn left_factors() -> Vec<(String, LoopGraph)> {
    let mut v: Vec<(String, LoopGraph)> = (2..=6)
        .map(|n| (format!("P{n}"), LoopGraph::path(n)))
        .collect();
    v.extend((3..=6).map(|n| (format!("C{n}"), LoopGraph::cycle(n))));
    v.push(("grid3x3".into(), LoopGraph::grid(3, 3)));
    v
}

struct Instance {
    name: String,
    inst: ProductSubgraph,
    td: TreeDecomposition,
    is_path: bool,
}

fn product_instances() -> Result<Vec<Instance>, String> {
    let mut r = rng(2024);
    let lefts = left_factors();
    let mut out = Vec::new();
    for i in 0..PRODUCT_INSTANCES {
        let (name, q) = &lefts[i % lefts.len()];
        let n = r.gen_range(1..=FACTOR_MAX_N);
        let (m, td) = partial_ktree(&mut r, n, FACTOR_TW);
        let (tw, _) = exact_treewidth(&m).map_err(|e| e.to_string())?;
        ensure(tw <= FACTOR_TW, || {
            format!("instance {i}: factor tree-width {tw}")
        })?;
        ensure(q.max_degree() <= 4, || format!("{name} has degree above 4"))?;
        let inst = random_product_subgraph(&mut r, q, &m, 0.7, 0.6);
        out.push(Instance {
            name: format!("{i}:{name}"),
            inst,
            td,
            is_path: name.starts_with('P'),
        });
    }
    Ok(out)
}

fn relabelled(g: &LoopGraph, vertex_of: &[usize]) -> LoopGraph {
    let edges: Vec<(usize, usize)> = g
        .edges()
        .map(|(a, b)| (vertex_of[a], vertex_of[b]))
        .collect();
    LoopGraph::from_edges(g.vertex_count(), &edges).expect("relabelling keeps ids in range")
}

fn expression_exactness() -> Outcome {
    let start = Instant::now();
    let instances = product_instances()?;
    let mut edges = 0;
    let mut max_ell = 0;
    for x in &instances {
        let built = build_expression(&x.inst, &x.td).map_err(|e| format!("{}: {e}", x.name))?;
        let value = built
            .expr
            .evaluate()
            .map_err(|e| format!("{}: {e}", x.name))?;
        ensure(
            relabelled(&value.graph, &built.vertex_of) == x.inst.g,
            || format!("{}: value differs", x.name),
        )?;
        let q_ok = value
            .labels
            .iter()
            .enumerate()
            .all(|(i, l)| l.pvertex == x.inst.members[built.vertex_of[i]].a);
        ensure(q_ok, || {
            format!("{}: parameter vertex differs from Q coordinate", x.name)
        })?;
        edges += x.inst.g.edge_count();
        max_ell = max_ell.max(built.expr.ell);
    }
    let t = within(start, PRODUCT_BUDGET)?;
    Ok(format!(
        "{} instances, {edges} edges reproduced exactly, max colours {max_ell}, {t:.1?}",
        instances.len()
    ))
}

/// `(k+1)(Δ²+1)·Δ^(2(Δ+1)(k+1)) - 1`.
fn general_width_bound(delta: u128, k: u32) -> u128 {
    (k as u128 + 1) * (delta * delta + 1) * delta.pow(2 * (delta as u32 + 1) * (k + 1)) - 1
}

fn factor_certificates() -> Outcome {
    let start = Instant::now();
    let instances = product_instances()?;
    let (mut max_width, mut max_gammas, mut paths) = (0, 0, 0);
    for x in &instances {
        let cert = build_induced_factor(&x.inst, &x.td).map_err(|e| format!("{}: {e}", x.name))?;
        let v = check_induced_embedding(&x.inst.g, &cert.embedding);
        ensure(v.is_accept(), || format!("{}: {v}", x.name))?;
        let tv = validate_decomposition(&cert.m2, &cert.td2);
        ensure(tv.is_accept(), || format!("{}: {tv}", x.name))?;
        let delta = x.inst.q.max_degree().max(2);
        let k = x.td.width();
        let bound = general_width_bound(delta as u128, k as u32);
        ensure(cert.width() as u128 <= bound, || {
            format!("{}: width {} > {bound}", x.name, cert.width())
        })?;
        let report = bound_report(delta, k, None);
        ensure(report.width.to_string() == (bound + 1).to_string(), || {
            format!(
                "{}: reported width bound {} != {}",
                x.name,
                report.width,
                bound + 1
            )
        })?;
        max_width = max_width.max(cert.width());
        max_gammas = max_gammas.max(cert.gammas.len());
        if x.is_path {
            paths += 1;
            let pc = path_case(&x.inst, &x.td).map_err(|e| format!("{}: {e}", x.name))?;
            let ell_bound = 1u128 << (3 * k + 5);
            let w_bound = 3 * (k as u128 + 1) * 8u128.pow(k as u32 + 1) - 1;
            ensure(pc.expression.expr.ell as u128 <= ell_bound, || {
                format!(
                    "{}: path ell {} > {ell_bound}",
                    x.name, pc.expression.expr.ell
                )
            })?;
            ensure(pc.factor.width() as u128 <= w_bound, || {
                format!("{}: path width {} > {w_bound}", x.name, pc.factor.width())
            })?;
            let v = check_induced_embedding(&x.inst.g, &pc.factor.embedding);
            ensure(v.is_accept(), || {
                format!("{}: path certificate {v}", x.name)
            })?;
            ensure(
                pc.bounds.refined_colours.as_ref().map(|c| c.to_string())
                    == Some(ell_bound.to_string()),
                || format!("{}: refined colour bound disagrees", x.name),
            )?;
        }
    }
    within(start, PRODUCT_BUDGET)?;
    Ok(format!(
        "{} certificates accepted, max width {max_width} (interned colours {max_gammas}), {paths} path instances within refined bounds",
        instances.len()
    ))
}

// ---- 4 ------------------------------------------------------------------

/// Sends vertex `y * nh + v` of `M ⊠ H'` to `v * nm + y`, the id in `H' ⊠ M`.
fn swap_factors(g: &LoopGraph, nm: usize, nh: usize) -> LoopGraph {
    relabelled(
        g,
        &(0..nm * nh)
            .map(|x| (x % nh) * nm + x / nh)
            .collect::<Vec<_>>(),
    )
}

fn hereditary_round_trip() -> Outcome {
    let mut r = rng(77);
    for round in 0..ROUND_TRIPS {
        let ell = r.gen_range(2..=4);
        let nm = r.gen_range(1..=20);
        let m_expr = random_cw_expression(&mut r, ell, nm);
        let (m, _) = m_expr.evaluate().map_err(|e| e.to_string())?;
        let nh = 2 + round % 4;
        let h = LoopGraph::path(nh);
        let e = expression_from_factor(&m_expr, &h).map_err(|e| format!("round {round}: {e}"))?;
        let value = e.evaluate().map_err(|e| e.to_string())?.graph;
        let expected = strong_product(&h, &m).map_err(|e| e.to_string())?;
        ensure(swap_factors(&value, nm, nh) == expected, || {
            format!("round {round}: value is not H' x M")
        })?;
        ensure(are_isomorphic(&value, &expected), || {
            format!("round {round}: canonical forms differ")
        })?;
        let p = reflexive_path(r.gen_range(1..=6));
        let size = r.gen_range(1..=20);
        let he = random_hcw_expression(&mut r, &p, ell, size);
        let cert = factor_from_expression(&he).map_err(|e| format!("round {round}: {e}"))?;
        let v = check_induced_embedding(&cert.g, &cert.embedding);
        ensure(v.is_accept(), || format!("round {round}: certificate {v}"))?;
    }
    Ok(format!(
        "{ROUND_TRIPS} round trips, products equal by explicit relabelling and canonical form"
    ))
}

// ---- 5 ------------------------------------------------------------------

fn contraction_bound() -> Outcome {
    let mut worst_grid = 0;
    for a in 1..=GRID_MAX {
        for b in 1..=GRID_MAX {
            let (e, _) = grid_expression(a, b);
            let g = e.evaluate().map_err(|e| e.to_string())?.graph;
            ensure(g == LoopGraph::grid(a, b), || {
                format!("grid {a}x{b}: expression value differs")
            })?;
            let seq = contraction_from_path_expression(&e).map_err(|e| e.to_string())?;
            let rep = verify_contraction_sequence(&g, &seq).map_err(|e| e.to_string())?;
            let bound = red_degree_bound(e.expression_ell());
            ensure(
                rep.max_red <= bound && rep.max_red <= 23 && rep.remaining == 1,
                || {
                    format!(
                        "grid {a}x{b}: red degree {} bound {bound}, {} left",
                        rep.max_red, rep.remaining
                    )
                },
            )?;
            worst_grid = worst_grid.max(rep.max_red);
        }
    }
    let mut r = rng(55);
    let mut worst_slack = i64::MIN;
    for i in 0..RANDOM_PATH_EXPRS {
        let ell = r.gen_range(1..=5);
        let p = reflexive_path(r.gen_range(1..=8));
        let size = r.gen_range(1..=40);
        let e = random_hcw_expression(&mut r, &p, ell, size);
        let seq = contraction_from_path_expression(&e).map_err(|e| e.to_string())?;
        let g = e.evaluate().map_err(|e| e.to_string())?.graph;
        let rep = verify_contraction_sequence(&g, &seq).map_err(|e| e.to_string())?;
        let bound = red_degree_bound(e.expression_ell());
        ensure(rep.max_red <= bound, || {
            format!("expression {i}: red degree {} > {bound}", rep.max_red)
        })?;
        worst_slack = worst_slack.max(rep.max_red as i64 - bound as i64);
    }
    Ok(format!(
        "{} grids (max red degree {worst_grid} <= 23), {RANDOM_PATH_EXPRS} random expressions (closest to bound: {worst_slack})",
        GRID_MAX * GRID_MAX
    ))
}

// ---- 6 ------------------------------------------------------------------

fn star_subdivision() -> Outcome {
    let s = star_subdivision_embedding(&LoopGraph::complete(4)).map_err(|e| e.to_string())?;
    ensure(s.n == 6, || format!("star has {} leaves", s.n))?;
    ensure(s.embedding.image.len() == 4 + 3 * 6, || {
        "wrong image size".into()
    })?;
    let scan = scan_star_subdivision(&s);
    ensure(scan.is_ok(), || format!("{scan:?}"))?;
    Ok(format!(
        "K4 into S6 x S6: B independent, A2->B 2, B->A1 1, A-B part matches, {} A-edges",
        scan.a_edges
    ))
}

// ---- 7 ------------------------------------------------------------------

/// Width of the best elimination order over all permutations.
fn elimination_oracle(g: &LoopGraph) -> usize {
    let n = g.vertex_count();
    let adj: Vec<u16> = (0..n)
        .map(|v| {
            g.neighbours(v)
                .iter()
                .filter(|&&w| w != v)
                .fold(0u16, |m, &w| m | 1 << w)
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    let mut best = n.saturating_sub(1);
    permute(&mut order, 0, &mut |ord| {
        let mut a = adj.clone();
        let mut alive: u16 = if n == 0 { 0 } else { ((1u32 << n) - 1) as u16 };
        let mut w = 0;
        for &v in ord {
            let nb = a[v] & alive & !(1 << v);
            w = w.max(nb.count_ones() as usize);
            for (u, au) in a.iter_mut().enumerate() {
                if nb >> u & 1 == 1 {
                    *au |= nb & !(1 << u);
                }
            }
            alive &= !(1 << v);
        }
        best = best.min(w);
    });
    best
}

fn permute(xs: &mut Vec<usize>, i: usize, f: &mut dyn FnMut(&[usize])) {
    if i == xs.len() {
        f(xs);
        return;
    }
    for j in i..xs.len() {
        xs.swap(i, j);
        permute(xs, i + 1, f);
        xs.swap(i, j);
    }
}

/// Induced-embedding test written against the materialised product graph.
fn embedding_oracle(g: &LoopGraph, host: &LoopGraph, nb: usize, image: &[ProductVertex]) -> bool {
    let id = |p: ProductVertex| p.a * nb + p.b;
    (0..g.vertex_count()).all(|x| {
        (0..g.vertex_count()).all(|y| {
            x == y
                || (id(image[x]) != id(image[y])
                    && g.has_edge(x, y) == host.has_edge(id(image[x]), id(image[y])))
        })
    })
}

fn injective_maps(n: usize, hosts: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(cur: &mut Vec<usize>, n: usize, hosts: usize, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == n {
            f(cur);
            return;
        }
        for h in 0..hosts {
            if !cur.contains(&h) {
                cur.push(h);
                go(cur, n, hosts, f);
                cur.pop();
            }
        }
    }
    go(&mut Vec::new(), n, hosts, f);
}

fn oracle_cross_checks() -> Outcome {
    let mut r = rng(7);
    for i in 0..TW_SAMPLES {
        let n = r.gen_range(1..=TW_MAX_N);
        let p = r.gen_range(0.1..0.9);
        let g = random_connected_graph(&mut r, n, p);
        let (k, td) = exact_treewidth(&g).map_err(|e| e.to_string())?;
        let oracle = elimination_oracle(&g);
        ensure(k == oracle, || {
            format!("sample {i}: exact {k}, elimination search {oracle}")
        })?;
        let v = validate_decomposition(&g, &td);
        ensure(v.is_accept() && td.width() == k, || {
            format!("sample {i}: witness {v}")
        })?;
    }
    let (mut maps, mut embeddable) = (0usize, 0usize);
    for i in 0..EMBED_PAIRS {
        let na = r.gen_range(1..=3);
        let nb = r.gen_range(1..=HOST_MAX / na);
        let a = random_graph(&mut r, na, 0.5);
        let b = random_graph(&mut r, nb, 0.5);
        let host = strong_product(&a, &b).map_err(|e| e.to_string())?;
        let n = r.gen_range(1..=(na * nb).min(4));
        let g = random_graph(&mut r, n, 0.5);
        let mut found = (false, false);
        let mut disagreement = None;
        injective_maps(n, na * nb, &mut |m| {
            let image: Vec<ProductVertex> = m
                .iter()
                .map(|&h| ProductVertex::new(h / nb, h % nb))
                .collect();
            let fast = check_induced_embedding(
                &g,
                &ProductEmbedding::new(a.clone(), b.clone(), image.clone()),
            )
            .is_accept();
            let slow = embedding_oracle(&g, &host, nb, &image);
            found.0 |= fast;
            found.1 |= slow;
            maps += 1;
            if fast != slow && disagreement.is_none() {
                disagreement = Some(m.to_vec());
            }
        });
        ensure(disagreement.is_none(), || {
            format!("pair {i}: checker and search disagree on {disagreement:?}")
        })?;
        ensure(found.0 == found.1, || {
            format!("pair {i}: existence differs")
        })?;
        embeddable += found.0 as usize;
    }
    Ok(format!(
        "{TW_SAMPLES} graphs (n <= {TW_MAX_N}) match elimination search; {EMBED_PAIRS} pairs, {maps} maps agree, {embeddable} embeddable"
    ))
}

// ---- 8 ------------------------------------------------------------------

fn bound_arithmetic() -> Outcome {
    let r = bound_report(2, 6, Some(3));
    let c = r.refined_colours.as_ref().map(|c| c.to_string());
    let closed = (1u64 << (3 * 6 + 5)).to_string();
    ensure(
        c.as_deref() == Some("8388608") && c.as_deref() == Some(closed.as_str()),
        || format!("2^23 instance gives {c:?}"),
    )?;
    ensure(red_degree_bound(5) == 23, || {
        format!("5*5-2 gives {}", red_degree_bound(5))
    })?;
    ensure(grid_expression(6, 6).0.ell == 5, || {
        "grid expression is not five-colour".into()
    })?;
    Ok("2^(3*6+5) = 8388608, 5*5-2 = 23".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("planar product structure, width <= 39", planar_bound),
        ("induced-product expression exactness", expression_exactness),
        (
            "induced factor certificates and bounds",
            factor_certificates,
        ),
        ("factor/expression round trip", hereditary_round_trip),
        ("contraction sequences within 5l-2", contraction_bound),
        ("3-subdivision of K4 in S6 x S6", star_subdivision),
        ("oracle cross-checks", oracle_cross_checks),
        ("bound arithmetic", bound_arithmetic),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
