//! Acceptance suite: one test per criterion, exact combinatorial checks on
//! seeded random instances plus brute-force oracles at desk scale.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion pass lines.

use koenig::chromatic::{
    chromatic_index_bruteforce, decompose_matchings, decompose_transversals, greedy_edge_color,
    koenig_edge_color, vizing_edge_color, EdgeOrder,
};
use koenig::compactness::{find_dead_node, find_prefix_path, level_count, LazyGraph};
use koenig::gadgets::{
    all_two_transversal_partitions, build_basic, build_staircase, build_two_regular, combine,
    extract_separator, verify_forcing, CapEvent, ForcingReport, GadgetInstance, InjectionPair,
    PointLabel, DEFAULT_POINT_BUDGET,
};
use koenig::graph::{EdgeColoring, FiniteMultigraph, Side, Vertex};
use koenig::matrix::{graph_to_matrix, matrix_to_graph, Point, PointSet};
use koenig::{check_proper, Properness};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

fn assert_proper(g: &FiniteMultigraph, c: &EdgeColoring) {
    assert!(matches!(
        check_proper(g, c).unwrap(),
        Properness::Proper
    ));
}

fn c6() -> FiniteMultigraph {
    FiniteMultigraph::from_edges(vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap()
}

fn petersen() -> FiniteMultigraph {
    let mut edges = Vec::new();
    for i in 0..5u64 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, i + 5));
    }
    FiniteMultigraph::from_edges(edges).unwrap()
}

/// Random bipartite multigraph with bounded degrees; parallel edges occur.
fn random_bipartite(
    rng: &mut ChaCha8Rng,
    max_side: usize,
    max_edges: usize,
    max_degree: usize,
) -> FiniteMultigraph {
    let l = rng.gen_range(1..=max_side);
    let r = rng.gen_range(1..=max_side);
    let target = rng.gen_range(1..=max_edges);
    let mut sides: BTreeMap<Vertex, Side> = BTreeMap::new();
    for i in 0..l as u64 {
        sides.insert(2 * i, Side::Left);
    }
    for j in 0..r as u64 {
        sides.insert(2 * j + 1, Side::Right);
    }
    let mut degrees: BTreeMap<Vertex, usize> = BTreeMap::new();
    let mut edges = Vec::new();
    for _ in 0..target * 4 {
        if edges.len() == target {
            break;
        }
        let u = 2 * rng.gen_range(0..l) as u64;
        let v = 2 * rng.gen_range(0..r) as u64 + 1;
        if degrees.get(&u).copied().unwrap_or(0) < max_degree
            && degrees.get(&v).copied().unwrap_or(0) < max_degree
        {
            *degrees.entry(u).or_insert(0) += 1;
            *degrees.entry(v).or_insert(0) += 1;
            edges.push((u, v));
        }
    }
    if edges.is_empty() {
        edges.push((0, 1));
    }
    let vertices: Vec<Vertex> = sides.keys().copied().collect();
    FiniteMultigraph::with_bipartition(vertices, edges, sides).unwrap()
}

/// Random multigraph, not necessarily bipartite.
fn random_multigraph(rng: &mut ChaCha8Rng, max_vertices: u64, max_edges: usize) -> FiniteMultigraph {
    let n = rng.gen_range(2..=max_vertices);
    let m = rng.gen_range(1..=max_edges);
    let mut edges = Vec::new();
    for _ in 0..m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            edges.push((u, v));
        }
    }
    if edges.is_empty() {
        edges.push((0, 1));
    }
    FiniteMultigraph::new((0..n).collect(), edges).unwrap()
}

/// Random simple graph on up to `max_vertices` vertices.
fn random_simple(rng: &mut ChaCha8Rng, max_vertices: u64) -> FiniteMultigraph {
    let n = rng.gen_range(2..=max_vertices);
    let p = rng.gen_range(0.05..0.4);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    FiniteMultigraph::new((0..n).collect(), edges).unwrap()
}

/// Random n-regular bipartite multigraph: a union of n random permutation
/// matchings between sides of equal size.
fn random_regular_bipartite(rng: &mut ChaCha8Rng, degree: usize, side: usize) -> FiniteMultigraph {
    let mut sides: BTreeMap<Vertex, Side> = BTreeMap::new();
    for i in 0..side as u64 {
        sides.insert(2 * i, Side::Left);
        sides.insert(2 * i + 1, Side::Right);
    }
    let mut edges = Vec::new();
    for _ in 0..degree {
        let mut perm: Vec<u64> = (0..side as u64).collect();
        perm.shuffle(rng);
        for (i, &j) in perm.iter().enumerate() {
            edges.push((2 * i as u64, 2 * j + 1));
        }
    }
    let vertices: Vec<Vertex> = sides.keys().copied().collect();
    FiniteMultigraph::with_bipartition(vertices, edges, sides).unwrap()
}

/// Random point set with at most `cap` points per row and per column.
fn random_point_set(rng: &mut ChaCha8Rng, cap: usize, max_points: usize) -> PointSet {
    let mut s = PointSet::new();
    let target = rng.gen_range(0..=max_points);
    let mut rows: BTreeMap<u64, usize> = BTreeMap::new();
    let mut cols: BTreeMap<u64, usize> = BTreeMap::new();
    for _ in 0..target * 4 {
        if s.len() == target {
            break;
        }
        let p = Point::new(rng.gen_range(0..12), rng.gen_range(0..12));
        if s.contains(&p) {
            continue;
        }
        if rows.get(&p.row).copied().unwrap_or(0) < cap
            && cols.get(&p.col).copied().unwrap_or(0) < cap
        {
            *rows.entry(p.row).or_insert(0) += 1;
            *cols.entry(p.col).or_insert(0) += 1;
            s.insert(p);
        }
    }
    s
}

#[test]
fn criterion_01_koenig_bound_met_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut oracle_checked = 0;
    for _ in 0..200 {
        let g = random_bipartite(&mut rng, 20, 80, 6);
        assert!(g.vertex_count() <= 40 && g.edge_count() <= 80);
        let delta = g.max_degree();
        let c = koenig_edge_color(&g).unwrap();
        assert_eq!(c.palette_size(), delta);
        assert_proper(&g, &c);
        if g.edge_count() <= 20 {
            assert_eq!(chromatic_index_bruteforce(&g).unwrap(), delta);
            oracle_checked += 1;
        }
    }
    assert!(oracle_checked >= 20, "oracle sample too small: {oracle_checked}");
    println!("criterion 1 (Koenig palette = Δ on 200 graphs, oracle on {oracle_checked}): PASS");
}

#[test]
fn criterion_02_greedy_bound_and_gap() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..200 {
        let g = random_multigraph(&mut rng, 16, 30);
        let n = g.max_degree() + rng.gen_range(0..2);
        for _ in 0..10 {
            let mut ids: Vec<usize> = (0..g.edge_count()).collect();
            ids.shuffle(&mut rng);
            let order = EdgeOrder::new(ids, g.edge_count()).unwrap();
            let c = greedy_edge_color(&g, &order, n).unwrap();
            assert!(c.colors_used() < 2 * n);
            assert_proper(&g, &c);
        }
    }
    // the adversarial order on C6 hits 2n−1 = 3 colors where Koenig needs 2
    let g = c6();
    let adversarial = EdgeOrder::new(vec![0, 3, 1, 4, 2, 5], 6).unwrap();
    let greedy = greedy_edge_color(&g, &adversarial, 2).unwrap();
    assert_eq!(greedy.colors_used(), 3);
    assert_proper(&g, &greedy);
    let koenig = koenig_edge_color(&g).unwrap();
    assert_eq!(koenig.palette_size(), 2);
    println!("criterion 2 (greedy ≤ 2n−1 on 2000 runs; C6 gap 3 vs 2): PASS");
}

#[test]
fn criterion_03_vizing_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..200 {
        let g = random_simple(&mut rng, 30);
        let c = vizing_edge_color(&g).unwrap();
        assert!(c.colors_used() <= g.max_degree() + 1);
        if g.edge_count() > 0 {
            assert_eq!(c.palette_size(), g.max_degree() + 1);
        }
        assert_proper(&g, &c);
    }
    // Δ+1 is necessary for the triangle and the Petersen graph
    let triangle = FiniteMultigraph::from_edges(vec![(0, 1), (1, 2), (2, 0)]).unwrap();
    assert_eq!(chromatic_index_bruteforce(&triangle).unwrap(), 3);
    assert_eq!(triangle.max_degree() + 1, 3);
    let petersen = petersen();
    assert_eq!(chromatic_index_bruteforce(&petersen).unwrap(), 4);
    assert_eq!(petersen.max_degree() + 1, 4);
    println!("criterion 3 (Vizing ≤ Δ+1 on 200 graphs; triangle and Petersen are class two): PASS");
}

#[test]
fn criterion_04_matching_decomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..50 {
        let degree = rng.gen_range(1..=4);
        let side = rng.gen_range(degree.max(1)..=12);
        let g = random_regular_bipartite(&mut rng, degree, side);
        assert!(g.vertex_count() <= 24);
        let parts = decompose_matchings(&g).unwrap();
        assert_eq!(parts.blocks.len(), degree);
        parts.validate(&g, true).unwrap();
        for block in &parts.blocks {
            assert_eq!(block.len(), side, "perfect matching covers each vertex once");
        }
    }
    println!("criterion 4 (50 n-regular bipartite graphs split into n complete matchings): PASS");
}

#[test]
fn criterion_05_transversal_correspondence() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for _ in 0..100 {
        let cap = rng.gen_range(1..=4);
        let s = random_point_set(&mut rng, cap, 30);
        let parts = decompose_transversals(&s, cap).unwrap();
        assert!(parts.blocks.len() <= cap);
        parts.validate(&s).unwrap();
        assert_eq!(graph_to_matrix(&matrix_to_graph(&s)).unwrap(), s);
    }
    println!("criterion 5 (100 point sets: ≤ n transversals, round trips identical): PASS");
}

#[test]
fn criterion_06_forcing_verification() {
    let pair_for = |cap: CapEvent, k: u64| -> InjectionPair {
        let (f, g): (BTreeMap<u64, u64>, BTreeMap<u64, u64>) = match cap {
            CapEvent::FCapped(q) => ([(q, k)].into_iter().collect(), BTreeMap::new()),
            CapEvent::GCapped(q) => (BTreeMap::new(), [(q, k)].into_iter().collect()),
            CapEvent::Uncapped => (BTreeMap::new(), BTreeMap::new()),
        };
        InjectionPair::new(f, g, 2).unwrap()
    };
    let caps = [
        CapEvent::FCapped(0),
        CapEvent::FCapped(1),
        CapEvent::GCapped(0),
        CapEvent::GCapped(1),
        CapEvent::Uncapped,
    ];
    let k = 5;
    for cap in caps {
        let pair = pair_for(cap, k);
        let builders: [&dyn Fn() -> GadgetInstance; 2] = [
            &|| build_basic(k, &pair),
            &|| build_staircase(k, &pair),
        ];
        for build in builders {
            let instance = build();
            assert!(instance.points.len() <= DEFAULT_POINT_BUDGET);
            assert_eq!(instance.cap, cap);
            let report = verify_forcing(&instance, DEFAULT_POINT_BUDGET).unwrap();
            assert!(report.valid_partitions > 0);
            assert_eq!(report.relation, ForcingReport::expected_for(cap));
            assert!(report.chain_violations.is_empty());
        }
    }
    // the two five-point path instances admit exactly 2 ordered assignments
    for cap in [CapEvent::FCapped(0), CapEvent::GCapped(0)] {
        let instance = build_basic(k, &pair_for(cap, k));
        let partitions =
            all_two_transversal_partitions(&instance.points, DEFAULT_POINT_BUDGET).unwrap();
        assert_eq!(partitions.len(), 2);
    }
    println!("criterion 6 (forcing matches cap type for basic and staircase, all caps): PASS");
}

#[test]
fn criterion_07_combined_set_soundness() {
    let f: BTreeMap<u64, u64> = [(0, 5)].into_iter().collect();
    let g: BTreeMap<u64, u64> = [(0, 7)].into_iter().collect();
    let pair = InjectionPair::new(f, g, 1).unwrap();
    let instances = [
        build_basic(5, &pair),
        build_basic(7, &pair),
        build_basic(9, &pair),
    ];
    let combined = combine(&instances).unwrap();
    assert!(combined.points.row_counts().values().all(|&c| c <= 2));
    assert!(combined.points.col_counts().values().all(|&c| c <= 2));
    let partitions =
        all_two_transversal_partitions(&combined.points, DEFAULT_POINT_BUDGET).unwrap();
    assert!(!partitions.is_empty());
    for partition in &partitions {
        partition.validate(&combined.points).unwrap();
        let report = extract_separator(partition, &combined).unwrap();
        assert!(report.a.contains(&5), "f-hit must enter A");
        assert!(!report.a.contains(&7), "g-hit must stay out of A");
        assert!(report.separates(&combined.caps));
    }
    println!(
        "criterion 7 (all {} partitions of the 3-gadget set yield sound separators): PASS",
        partitions.len()
    );
}

#[test]
fn criterion_08_two_regular_interior() {
    let scan = |instance: &GadgetInstance| {
        for (&row, &count) in &instance.points.row_counts() {
            let expected = if instance.boundary_rows.contains(&row) { 1 } else { 2 };
            assert_eq!(count, expected, "row {row} of {:?}", instance.cap);
        }
        for (&col, &count) in &instance.points.col_counts() {
            let expected = if instance.boundary_cols.contains(&col) { 1 } else { 2 };
            assert_eq!(count, expected, "col {col} of {:?}", instance.cap);
        }
    };
    for window in 0..=4u64 {
        let empty = InjectionPair::new(BTreeMap::new(), BTreeMap::new(), window).unwrap();
        scan(&build_two_regular(0, &empty, window));
        for cap_stage in 0..window {
            let f: BTreeMap<u64, u64> = [(cap_stage, 3)].into_iter().collect();
            let pair = InjectionPair::new(f.clone(), BTreeMap::new(), window).unwrap();
            scan(&build_two_regular(3, &pair, window));
            let pair = InjectionPair::new(BTreeMap::new(), f, window).unwrap();
            scan(&build_two_regular(3, &pair, window));
        }
    }
    println!("criterion 8 (two-regular interiors have exactly 2 points, windows 0..=4): PASS");
}

#[test]
fn criterion_09_compactness() {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    for _ in 0..50 {
        let palette = rng.gen_range(1..=3usize);
        // bipartite stream with distinct edges and Δ ≤ palette
        let side = rng.gen_range(1..=6usize);
        let mut degrees: BTreeMap<Vertex, usize> = BTreeMap::new();
        let mut seen = std::collections::BTreeSet::new();
        let mut edges = Vec::new();
        for _ in 0..60 {
            if edges.len() == 12 {
                break;
            }
            let u = 2 * rng.gen_range(0..side) as u64;
            let v = 2 * rng.gen_range(0..side) as u64 + 1;
            if seen.contains(&(u, v)) {
                continue;
            }
            if degrees.get(&u).copied().unwrap_or(0) < palette
                && degrees.get(&v).copied().unwrap_or(0) < palette
            {
                seen.insert((u, v));
                *degrees.entry(u).or_insert(0) += 1;
                *degrees.entry(v).or_insert(0) += 1;
                edges.push((u, v));
            }
        }
        let stream = LazyGraph::new(edges, palette).unwrap();
        let depth = stream.stream_len();
        for m in 0..=depth {
            assert!(level_count(&stream, m, 10_000_000).unwrap() >= 1, "level {m}");
        }
        assert!(find_prefix_path(&stream, depth, 10_000_000).unwrap().is_some());
    }
    // adversarial C6 stream has the dead node (1,1,2)
    let adversarial = LazyGraph::new(
        vec![(0, 1), (2, 3), (4, 5), (1, 2), (3, 4), (5, 0)],
        2,
    )
    .unwrap();
    assert_eq!(
        find_dead_node(&adversarial, 10_000_000).unwrap(),
        Some(vec![1, 1, 2])
    );
    // K3 with two colors has no depth-3 path
    let k3 = LazyGraph::new(vec![(0, 1), (1, 2), (2, 0)], 2).unwrap();
    assert_eq!(find_prefix_path(&k3, 3, 10_000_000).unwrap(), None);
    println!("criterion 9 (50 bipartite streams alive at every level; dead node (1,1,2); K3 dies): PASS");
}

#[test]
fn criterion_10_staircase_golden_coordinates() {
    // staircase capped by f at stage 1 reproduces the drawn positions,
    // given here in figure (column, row) coordinates
    let f: BTreeMap<u64, u64> = [(1, 1)].into_iter().collect();
    let pair = InjectionPair::new(f, BTreeMap::new(), 2).unwrap();
    let instance = build_staircase(1, &pair);
    assert_eq!(instance.cap, CapEvent::FCapped(1));
    let drawn: &[(&str, u64, u64)] = &[
        ("e1", 0, 0),
        ("e1_1", 2, 0),
        ("e1_2", 2, 3),
        ("e1_3", 5, 3),
        ("e1_4", 5, 7),
        ("e2", 1, 1),
        ("e2_1", 3, 1),
        ("e2_2", 3, 4),
        ("e2_3", 6, 4),
        ("e2_4", 6, 7),
        ("e3", 1, 2),
        ("e3_1", 4, 2),
        ("e3_2", 4, 5),
        ("e3_3", 7, 5),
        ("e3_4", 7, 8),
    ];
    assert_eq!(instance.points.len(), drawn.len());
    for &(label, col, row) in drawn {
        let label: PointLabel = label.parse().unwrap();
        assert_eq!(
            instance.point_of(label),
            Some(Point::new(row, col)),
            "{label} should sit at column {col}, row {row}"
        );
    }
    println!("criterion 10 (staircase golden fixture matches the drawn coordinates): PASS");
}
