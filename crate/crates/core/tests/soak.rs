//! Opt-in soak tests: heavier randomized runs than the default suites.
//! Run with `cargo test --test soak -- --ignored`.

use koenig::chromatic::{
    chromatic_index_bruteforce_with_budget, koenig_edge_color, vizing_edge_color,
};
use koenig::graph::{FiniteMultigraph, Side, Vertex};
use koenig::{check_proper, Properness};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

#[test]
#[ignore = "slow soak run"]
fn vizing_soak() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for round in 0..3000 {
        let n = rng.gen_range(2..=24u64);
        let p = rng.gen_range(0.05..0.6);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = FiniteMultigraph::new((0..n).collect(), edges).unwrap();
        let c = vizing_edge_color(&g).unwrap();
        assert!(
            matches!(check_proper(&g, &c).unwrap(), Properness::Proper),
            "round {round}"
        );
        assert!(c.colors_used() <= g.max_degree() + 1, "round {round}");
        if g.edge_count() <= 14 {
            let exact = chromatic_index_bruteforce_with_budget(&g, 14).unwrap();
            assert!(c.colors_used() >= exact, "round {round}");
        }
    }
}

#[test]
#[ignore = "slow soak run"]
fn koenig_soak() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for round in 0..3000 {
        let l = rng.gen_range(1..=15usize);
        let r = rng.gen_range(1..=15usize);
        let m = rng.gen_range(1..=60usize);
        let mut sides: BTreeMap<Vertex, Side> = BTreeMap::new();
        for i in 0..l as u64 {
            sides.insert(2 * i, Side::Left);
        }
        for j in 0..r as u64 {
            sides.insert(2 * j + 1, Side::Right);
        }
        let edges: Vec<(Vertex, Vertex)> = (0..m)
            .map(|_| {
                (
                    2 * rng.gen_range(0..l) as u64,
                    2 * rng.gen_range(0..r) as u64 + 1,
                )
            })
            .collect();
        let vertices: Vec<Vertex> = sides.keys().copied().collect();
        let g = FiniteMultigraph::with_bipartition(vertices, edges, sides).unwrap();
        let c = koenig_edge_color(&g).unwrap();
        assert_eq!(c.palette_size(), g.max_degree(), "round {round}");
        assert!(
            matches!(check_proper(&g, &c).unwrap(), Properness::Proper),
            "round {round}"
        );
    }
}
