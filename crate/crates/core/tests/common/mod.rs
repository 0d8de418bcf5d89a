#![allow(dead_code)]

use std::path::PathBuf;

use rand::Rng;
use voldet::diagram::Diagram;
use voldet::notation::{braid_closure, parse_braid};
use voldet::tait::{sp_generate, PlaneGraph, SpOp};

pub const K11A47_BRAID: &str = "4: 1 1 -2 -2 -2 3 3 1 -2 -2 3";

pub fn census_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/alternating_knots_12.csv")
}

pub fn braid_diagram(text: &str) -> Diagram {
    Diagram::build(&braid_closure(&parse_braid(text).unwrap()).unwrap()).unwrap()
}

/// Random SP graph with between 2 and `max_edges` edges, grown from a single
/// edge by random bisections and doublings.
pub fn random_sp_graph(rng: &mut impl Rng, max_edges: usize) -> PlaneGraph {
    let target = rng.gen_range(2..=max_edges);
    let ops: Vec<SpOp> = (1..target)
        .map(|k| {
            let e = rng.gen_range(0..k);
            if rng.gen_bool(0.5) {
                SpOp::Double(e)
            } else {
                SpOp::Bisect(e)
            }
        })
        .collect();
    sp_generate(&PlaneGraph::t_n(1), &ops).unwrap().graph
}

/// A cycle on `bundles.len()` vertices whose i-th edge is replaced by
/// `bundles[i]` parallel edges.
pub fn bundled_cycle(bundles: &[usize]) -> PlaneGraph {
    let k = bundles.len();
    let mut ops: Vec<SpOp> = (0..k - 2).map(|_| SpOp::Bisect(0)).collect();
    // t_n(2) is a 2-cycle; bisecting edge 0 repeatedly yields a k-cycle whose
    // edges are 0, 1 and the new edges
    let mut next = k;
    for (e, &m) in bundles.iter().enumerate() {
        for _ in 1..m {
            ops.push(SpOp::Double(e));
            next += 1;
        }
    }
    debug_assert_eq!(next, bundles.iter().sum::<usize>());
    sp_generate(&PlaneGraph::t_n(2), &ops).unwrap().graph
}
