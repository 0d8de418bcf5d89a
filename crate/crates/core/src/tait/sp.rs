use std::collections::BTreeSet;

use serde::Serialize;

use super::{PlaneGraph, TaitError};

/// Plane multigraph with two designated terminals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpGraph {
    pub graph: PlaneGraph,
    pub terminals: (usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpOp {
    /// Subdivide the edge with a new vertex.
    Bisect(usize),
    /// Add a parallel copy next to the edge.
    Double(usize),
}

/// Applies bisections and doublings to `seed`; new edges get the next index.
pub fn sp_generate(seed: &PlaneGraph, ops: &[SpOp]) -> Result<SpGraph, TaitError> {
    let mut g = seed.clone();
    for &op in ops {
        match op {
            SpOp::Double(e) => {
                let [u, v] = *g.edges.get(e).ok_or(TaitError::DanglingEdge(e))?;
                let f = g.edges.len();
                g.edges.push([u, v]);
                let i = position(&g.rotation[u], (e, 0));
                g.rotation[u].insert(i + 1, (f, 0));
                let j = position(&g.rotation[v], (e, 1));
                g.rotation[v].insert(j, (f, 1));
            }
            SpOp::Bisect(e) => {
                let [_, v] = *g.edges.get(e).ok_or(TaitError::DanglingEdge(e))?;
                let w = g.n;
                let h = g.edges.len();
                g.n += 1;
                g.edges[e][1] = w;
                g.edges.push([w, v]);
                let j = position(&g.rotation[v], (e, 1));
                g.rotation[v][j] = (h, 1);
                g.rotation.push(vec![(e, 1), (h, 0)]);
            }
        }
    }
    Ok(SpGraph {
        graph: g,
        terminals: (0, 1),
    })
}

fn position(rot: &[(usize, u8)], he: (usize, u8)) -> usize {
    rot.iter()
        .position(|&x| x == he)
        .expect("rotation lists every half-edge")
}

/// Series and parallel reductions reach a single edge.
pub fn is_series_parallel(g: &PlaneGraph) -> bool {
    if g.edges.is_empty() || g.edges.iter().any(|&[u, v]| u == v) {
        return false;
    }
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); g.n];
    for &[u, v] in &g.edges {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    if adj.iter().any(BTreeSet::is_empty) {
        return false;
    }
    let mut alive = g.n;
    let mut work: Vec<usize> = (0..g.n).filter(|&v| adj[v].len() == 2).collect();
    while let Some(w) = work.pop() {
        if adj[w].len() != 2 || alive <= 2 {
            continue;
        }
        let mut it = adj[w].iter().copied();
        let (a, b) = (it.next().unwrap(), it.next().unwrap());
        adj[w].clear();
        alive -= 1;
        adj[a].remove(&w);
        adj[b].remove(&w);
        adj[a].insert(b);
        adj[b].insert(a);
        for x in [a, b] {
            if adj[x].len() == 2 {
                work.push(x);
            }
        }
    }
    alive == 2 && adj.iter().filter(|s| !s.is_empty()).all(|s| s.len() == 1)
}
