#![allow(dead_code)]

use std::collections::BTreeSet;

use dimerstat::event::CylinderEvent;
use dimerstat::geometry::{build_region, Face, Model, RegionGraph};
use dimerstat::oracle;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DEFAULT_SEED: u64 = 0x5eed_d1e5;

/// Base seed for randomized tests; `DIMERSTAT_SEED` overrides it.
pub static SEED: std::sync::LazyLock<u64> = std::sync::LazyLock::new(|| {
    std::env::var("DIMERSTAT_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
});

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn edge_neighbours(f: Face) -> Vec<Face> {
    f.edges()
        .iter()
        .map(|e| {
            let [a, b] = e.faces();
            if a == f {
                b
            } else {
                a
            }
        })
        .collect()
}

/// A random balanced simply connected region with at least one matching and
/// at most `max_vertices` vertices, grown face by face from the origin.
pub fn random_region(model: Model, max_vertices: usize, rng: &mut ChaCha8Rng) -> RegionGraph {
    loop {
        let target = rng.gen_range(1..=8);
        let mut faces = BTreeSet::from([Face::new(model, 0, 0)]);
        let mut graph = build_region(model, &[Face::new(model, 0, 0)]).expect("single face");
        for _ in 0..4 * target {
            if faces.len() >= target {
                break;
            }
            let mut frontier: Vec<Face> = faces
                .iter()
                .flat_map(|&f| edge_neighbours(f))
                .filter(|g| !faces.contains(g))
                .collect();
            frontier.sort();
            frontier.dedup();
            let Some(&pick) = frontier.choose(rng) else { break };
            let mut next = faces.clone();
            next.insert(pick);
            let list: Vec<Face> = next.iter().copied().collect();
            if let Ok(g) = build_region(model, &list) {
                if g.vertex_count() <= max_vertices {
                    faces = next;
                    graph = g;
                }
            }
        }
        if graph.is_balanced()
            && oracle::count_matchings(&graph, oracle::DEFAULT_CAP)
                .map(|c| c > 0u32.into())
                .unwrap_or(false)
        {
            return graph;
        }
    }
}

/// Every single-edge event and every event of two disjoint edges.
pub fn small_events(graph: &RegionGraph) -> Vec<(Vec<usize>, CylinderEvent)> {
    let edges = graph.edges();
    let mut out = Vec::new();
    for i in 0..edges.len() {
        out.push((
            vec![i],
            CylinderEvent::new(graph.model(), vec![edges[i].edge]).expect("single edge"),
        ));
        for j in i + 1..edges.len() {
            let (a, b) = (edges[i], edges[j]);
            if a.black == b.black || a.white == b.white {
                continue;
            }
            if let Ok(ev) = CylinderEvent::new(graph.model(), vec![a.edge, b.edge]) {
                out.push((vec![i, j], ev));
            }
        }
    }
    out
}
