use super::*;
use crate::embedding::check_induced_embedding;
use crate::testutil::rng;
use crate::treedecomp::TreeDecomposition;
use rand::Rng;

/// Rotation system of a convex polyhedron centred at the origin, read off
/// the outward view at each vertex; edges join vertices at minimum distance.
fn polyhedron(points: &[[f64; 3]]) -> EmbeddedGraph {
    let n = points.len();
    let d2 = |a: [f64; 3], b: [f64; 3]| (0..3).map(|i| (a[i] - b[i]).powi(2)).sum::<f64>();
    let mut min = f64::MAX;
    for i in 0..n {
        for j in i + 1..n {
            min = min.min(d2(points[i], points[j]));
        }
    }
    let mut rotation = Vec::new();
    for (i, &p) in points.iter().enumerate() {
        let norm = d2(p, [0.0; 3]).sqrt();
        let nrm = p.map(|x| x / norm);
        let seed = if nrm[0].abs() < 0.9 {
            [1.0, 0.0, 0.0]
        } else {
            [0.0, 1.0, 0.0]
        };
        let dot = |a: [f64; 3], b: [f64; 3]| (0..3).map(|k| a[k] * b[k]).sum::<f64>();
        let cross = |a: [f64; 3], b: [f64; 3]| {
            [
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ]
        };
        let e1 = cross(nrm, seed);
        let e2 = cross(nrm, e1);
        let mut nb: Vec<(f64, usize)> = (0..n)
            .filter(|&j| j != i && (d2(p, points[j]) - min).abs() < 1e-6)
            .map(|j| {
                let w = [
                    points[j][0] - p[0],
                    points[j][1] - p[1],
                    points[j][2] - p[2],
                ];
                (dot(w, e2).atan2(dot(w, e1)), j)
            })
            .collect();
        nb.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        rotation.push(nb.into_iter().map(|(_, j)| j).collect::<Vec<_>>());
    }
    let tmp = EmbeddedGraph {
        graph: LoopGraph::new(0),
        rotation: rotation.clone(),
        outer: [0, 0, 0],
    };
    let mut g = LoopGraph::new(n);
    for (v, l) in rotation.iter().enumerate() {
        for &w in l {
            g.add_edge(v, w);
        }
    }
    let tmp = EmbeddedGraph { graph: g, ..tmp };
    let f = &tmp.faces()[0];
    EmbeddedGraph::new(tmp.graph.clone(), rotation, [f[0], f[1], f[2]]).unwrap()
}

fn tetrahedron() -> EmbeddedGraph {
    polyhedron(&[
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ])
}

fn octahedron() -> EmbeddedGraph {
    let mut pts = Vec::new();
    for axis in 0..3 {
        for s in [1.0, -1.0] {
            let mut p = [0.0; 3];
            p[axis] = s;
            pts.push(p);
        }
    }
    polyhedron(&pts)
}

fn icosahedron() -> EmbeddedGraph {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut pts = Vec::new();
    for a in [1.0, -1.0] {
        for b in [phi, -phi] {
            pts.push([0.0, a, b]);
            pts.push([a, b, 0.0]);
            pts.push([b, 0.0, a]);
        }
    }
    polyhedron(&pts)
}

fn random_triangulation(seed: u64, n: usize) -> EmbeddedGraph {
    let mut r = rng(seed);
    grow_triangulation(n, 4 * n, &mut |k| r.gen_range(0..k))
}

fn assert_structure(eg: &EmbeddedGraph) -> PlanarBuild {
    let b = build_planar_structure(eg).unwrap();
    let v = verify_nice_structure(&b.triangulated.graph, &b.structure);
    assert!(v.is_accept(), "{v}");
    assert!(b.thickness() <= THICKNESS);
    assert!(b.structure.td.width() <= 39);
    let e = check_induced_embedding(&eg.graph, &b.original_embedding());
    assert!(e.is_accept(), "{e}");
    for f in &b.frames {
        let bag = b.structure.td.bag(f.node);
        assert!(f.paths.len() <= 6);
        for &p in &f.paths {
            assert!((0..SLOTS).all(|s| bag.contains(&(p * SLOTS + s))));
        }
    }
    b
}

#[test]
fn polyhedra_embed() {
    for eg in [tetrahedron(), octahedron(), icosahedron()] {
        assert!(eg.is_triangulation());
        assert_eq!(eg.faces().len(), 2 * eg.vertex_count() - 4);
        let b = assert_structure(&eg);
        assert_eq!(b.original, eg.vertex_count());
    }
}

#[test]
fn tetrahedron_takes_one_step() {
    let eg = tetrahedron();
    let b = assert_structure(&eg);
    assert_eq!(b.structure.paths.len(), 4);
    assert_eq!(b.frames.len(), 1);
    assert_eq!(b.structure.td.node_count(), 2);
}

#[test]
fn random_triangulations_embed() {
    let mut r = rng(5);
    for seed in 0..40 {
        let n = r.gen_range(4..=120);
        let eg = random_triangulation(seed, n);
        assert!(eg.is_triangulation());
        assert!(EmbeddedGraph::new(eg.graph.clone(), eg.rotation.clone(), eg.outer).is_ok());
        assert_structure(&eg);
    }
}

#[test]
fn stacked_triangulations_embed() {
    // No flips: long chains of separating triangles.
    for seed in 0..10 {
        let mut r = rng(100 + seed);
        let eg = grow_triangulation(80, 0, &mut |k| r.gen_range(0..k));
        assert_structure(&eg);
    }
}

#[test]
fn cross_path_edges_use_end_slots() {
    let b = assert_structure(&random_triangulation(77, 90));
    let m = &b.structure.m;
    for (x, y) in m.edges() {
        if x / SLOTS != y / SLOTS {
            let later = x.max(y);
            assert!(matches!(later % SLOTS, 0 | 4), "{x}-{y}");
        }
    }
}

fn cycle_embedding(n: usize) -> EmbeddedGraph {
    let rotation = (0..n).map(|i| vec![(i + 1) % n, (i + n - 1) % n]).collect();
    EmbeddedGraph::from_rotation(rotation, [0, 1, 2]).unwrap()
}

fn star_embedding(leaves: usize) -> EmbeddedGraph {
    let mut rotation = vec![(1..=leaves).collect::<Vec<_>>()];
    rotation.extend((0..leaves).map(|_| vec![0]));
    EmbeddedGraph::from_rotation(rotation, [2, 0, 1]).unwrap()
}

fn grid_embedding(rows: usize, cols: usize) -> EmbeddedGraph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut rotation = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            // Counter-clockwise from east: east, north, west, south.
            let mut l = Vec::new();
            if c + 1 < cols {
                l.push(id(r, c + 1));
            }
            if r + 1 < rows {
                l.push(id(r + 1, c));
            }
            if c > 0 {
                l.push(id(r, c - 1));
            }
            if r > 0 {
                l.push(id(r - 1, c));
            }
            rotation.push(l);
        }
    }
    let probe = EmbeddedGraph {
        graph: LoopGraph::grid(rows, cols),
        rotation: rotation.clone(),
        outer: [0, 0, 0],
    };
    let outer = probe.faces().into_iter().max_by_key(Vec::len).unwrap();
    EmbeddedGraph::from_rotation(rotation, [outer[0], outer[1], outer[2]]).unwrap()
}

#[test]
fn triangulate_keeps_the_graph_induced() {
    for eg in [
        cycle_embedding(8),
        star_embedding(5),
        grid_embedding(4, 5),
        grid_embedding(9, 9),
        cycle_embedding(3),
    ] {
        let n = eg.vertex_count();
        let t = triangulate(&eg);
        assert!(EmbeddedGraph::new(t.graph.clone(), t.rotation.clone(), t.outer).is_ok());
        assert!(t.is_triangulation());
        let orig: Vec<usize> = (0..n).collect();
        assert_eq!(t.graph.induced_subgraph(&orig), eg.graph);
        assert_structure(&eg);
    }
}

#[test]
fn root_step_of_the_octahedron() {
    let eg = octahedron();
    let st = PlanarState::new(&eg);
    let frame = st.root_frame();
    let d = decompose_cycle(&st, &frame).unwrap();
    assert!(!d.chord);
    let added: Vec<usize> = d.new_paths.iter().flatten().copied().collect();
    assert!(!added.is_empty());
    for p in &d.new_paths {
        for w in p.windows(2) {
            assert!(eg.graph.has_edge(w[0], w[1]));
            assert_eq!(st.bfs.level[w[1]], st.bfs.level[w[0]] + 1);
        }
    }
    let mut covered: Vec<usize> = d
        .children
        .iter()
        .flat_map(|c| c.interior.clone())
        .chain(added)
        .collect();
    covered.sort_unstable();
    assert_eq!(covered, frame.interior);
}

#[test]
fn chords_split_frames() {
    // Outer triangle plus a vertex of degree 3 leaves the inner frames as
    // triangles; a square frame with a diagonal splits along it.
    let mut eg = EmbeddedGraph::triangle();
    let x = eg.insert_in_face(0, 1);
    eg.insert_in_face(0, x);
    let st = PlanarState::new(&eg);
    let frame = CycleFrame {
        cycle: vec![0, 1, 2],
        interior: vec![3, 4],
    };
    let oriented = st.root_frame();
    assert_eq!(oriented.interior, frame.interior);
    let d = decompose_cycle(&st, &oriented).unwrap();
    assert!(!d.chord);
    assert_structure(&eg);
}

#[test]
fn tampering_is_caught() {
    let eg = random_triangulation(9, 60);
    let b = build_planar_structure(&eg).unwrap();
    let g = &b.triangulated.graph;
    let s = &b.structure;
    // A slot moved off the rule.
    let v = s.paths[5][0];
    let mut t = s.clone();
    t.slot[v].1 = 3;
    assert!(matches!(
        verify_nice_structure(g, &t),
        NiceVerdict::Reject(NiceViolation::Slot { .. })
    ));
    // A single bag with every path is a valid decomposition but too thick.
    let mut t = s.clone();
    let all: Vec<usize> = (0..t.m.vertex_count()).collect();
    t.td = TreeDecomposition::new(all.len(), vec![all], &[]).unwrap();
    assert!(s.paths.len() > THICKNESS);
    assert!(matches!(
        verify_nice_structure(g, &t),
        NiceVerdict::Reject(NiceViolation::TooThick { .. })
    ));
    // Dropping a factor edge breaks the embedding.
    let mut t = s.clone();
    let (x, y) = t.m.edges().find(|&(x, y)| x / SLOTS != y / SLOTS).unwrap();
    t.m.remove_edge(x, y);
    assert!(matches!(
        verify_nice_structure(g, &t),
        NiceVerdict::Reject(NiceViolation::Embedding(_))
    ));
    // Half a path in a bag.
    let mut t = s.clone();
    let mut bags = t.td.bags().to_vec();
    bags[0].pop();
    t.td = t.td.with_bags(t.m.vertex_count(), bags);
    assert!(!verify_nice_structure(g, &t).is_accept());
    // Wrong level.
    let mut t = s.clone();
    t.level[v] += 1;
    assert!(matches!(
        verify_nice_structure(g, &t),
        NiceVerdict::Reject(NiceViolation::Level { .. })
    ));
}

#[test]
fn embedded_graph_errors() {
    let k4 = tetrahedron();
    let mut bad = k4.rotation.clone();
    bad[0].pop();
    assert!(matches!(
        EmbeddedGraph::new(k4.graph.clone(), bad, k4.outer),
        Err(PlanarError::RotationMismatch { v: 0 })
    ));
    // K4 with one rotation reversed is not planar.
    let mut twisted = k4.rotation.clone();
    twisted[0].swap(0, 1);
    assert!(matches!(
        EmbeddedGraph::new(k4.graph.clone(), twisted, k4.outer),
        Err(PlanarError::Euler { .. })
    ));
    let path = LoopGraph::path(2);
    assert_eq!(
        EmbeddedGraph::new(path, vec![vec![1], vec![0]], [0, 1, 0]).unwrap_err(),
        PlanarError::TooSmall { n: 2 }
    );
    let c = cycle_embedding(5);
    assert_eq!(
        EmbeddedGraph::new(c.graph.clone(), c.rotation.clone(), [0, 2, 4]).unwrap_err(),
        PlanarError::OuterNotFace([0, 2, 4])
    );
}

#[test]
fn flips_keep_a_triangulation() {
    let mut r = rng(3);
    let mut eg = random_triangulation(1, 30);
    let mut done = 0;
    for _ in 0..200 {
        let edges: Vec<_> = eg.graph.edges().collect();
        let (u, v) = edges[r.gen_range(0..edges.len())];
        if eg.flip(u, v) {
            done += 1;
            assert!(!eg.graph.has_edge(u, v));
        }
    }
    assert!(done > 0);
    assert!(eg.is_triangulation());
    assert!(EmbeddedGraph::new(eg.graph.clone(), eg.rotation.clone(), eg.outer).is_ok());
}
