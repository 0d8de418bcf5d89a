//! Checkerboard shadings, Tait graphs and Goeritz matrices.

mod medial;
mod sp;

pub use medial::medial_diagram;
pub use sp::{is_series_parallel, sp_generate, SpGraph, SpOp};

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TaitError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("diagram is not alternating")]
    NotAlternating,
    #[error("edge {0} does not exist")]
    DanglingEdge(usize),
    #[error("graph needs at least 2 edges, got {0}")]
    TooFewEdges(usize),
}

/// Half-edge: edge index and which end (0 or 1).
pub type HalfEdge = (usize, u8);

/// Plane multigraph given by a rotation system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlaneGraph {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    /// Counterclockwise half-edges around each vertex.
    pub rotation: Vec<Vec<HalfEdge>>,
}

impl PlaneGraph {
    /// Two vertices joined by `k` parallel edges.
    pub fn t_n(k: usize) -> PlaneGraph {
        PlaneGraph {
            n: 2,
            edges: vec![[0, 1]; k],
            rotation: vec![
                (0..k).map(|e| (e, 0)).collect(),
                (0..k).rev().map(|e| (e, 1)).collect(),
            ],
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.n];
        for &[u, v] in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n
    }

    /// Incident edge lists per vertex, sorted; two graphs on the same edge
    /// indices are isomorphic through those indices iff these agree.
    pub fn incidence_signature(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (e, &[u, v]) in self.edges.iter().enumerate() {
            inc[u].push(e);
            inc[v].push(e);
        }
        for l in inc.iter_mut() {
            l.sort_unstable();
        }
        inc.sort();
        inc
    }

    /// Number of faces of the embedding given by the rotation system.
    pub fn face_count(&self) -> usize {
        let mut pos = vec![[(0usize, 0usize); 2]; self.edges.len()];
        for (v, rot) in self.rotation.iter().enumerate() {
            for (i, &(e, end)) in rot.iter().enumerate() {
                pos[e][end as usize] = (v, i);
            }
        }
        let mut seen = vec![[false; 2]; self.edges.len()];
        let mut faces = 0;
        for e in 0..self.edges.len() {
            for end in 0..2u8 {
                if seen[e][end as usize] {
                    continue;
                }
                faces += 1;
                let (mut f, mut fe) = (e, end);
                while !seen[f][fe as usize] {
                    seen[f][fe as usize] = true;
                    // cross the edge, then turn to the next half-edge clockwise
                    let other = 1 - fe;
                    let (v, i) = pos[f][other as usize];
                    let rot = &self.rotation[v];
                    let next = rot[(i + rot.len() - 1) % rot.len()];
                    f = next.0;
                    fe = next.1;
                }
            }
        }
        faces
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shading {
    /// The color class of the face at corner (0,1) of crossing 0.
    Black,
    White,
}

impl Shading {
    pub fn other(self) -> Shading {
        match self {
            Shading::Black => Shading::White,
            Shading::White => Shading::Black,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TaitGraph {
    pub shading: Shading,
    pub graph: PlaneGraph,
    /// Goeritz type of each crossing, +1 when the shaded corners are (0,1)
    /// and (2,3).
    pub signs: Vec<i8>,
    /// Face of the diagram behind each vertex.
    pub faces: Vec<usize>,
}

impl TaitGraph {
    pub fn uniform_sign(&self) -> bool {
        self.signs.windows(2).all(|w| w[0] == w[1])
    }
}

/// Checkerboard coloring of the faces, `false` for the class containing the
/// face at corner (0,1) of crossing 0.
pub fn face_colors(d: &Diagram) -> Result<Vec<bool>, TaitError> {
    d.require_connected()?;
    let nf = d.face_count();
    let mut adj = vec![Vec::new(); nf];
    for dart in 0..4 * d.crossing_count() {
        adj[d.face_of(dart)].push(d.face_of(d.partner(dart)));
    }
    let mut color = vec![None; nf];
    if nf == 0 {
        return Ok(Vec::new());
    }
    let root = if d.crossing_count() > 0 { d.face_of(1) } else { 0 };
    color[root] = Some(false);
    let mut queue = VecDeque::from([root]);
    while let Some(f) = queue.pop_front() {
        let cf = color[f].expect("queued faces are colored");
        for &g in &adj[f] {
            match color[g] {
                None => {
                    color[g] = Some(!cf);
                    queue.push_back(g);
                }
                Some(cg) => debug_assert_ne!(cg, cf, "link diagrams are checkerboard colorable"),
            }
        }
    }
    Ok(color.into_iter().map(|c| c.unwrap_or(false)).collect())
}

pub fn shade(d: &Diagram, shading: Shading) -> Result<TaitGraph, TaitError> {
    let colors = face_colors(d)?;
    let want = shading == Shading::White;
    let c = d.crossing_count();
    let mut vertex_of = vec![usize::MAX; d.face_count()];
    let mut faces = Vec::new();
    for (f, &col) in colors.iter().enumerate() {
        if col == want {
            vertex_of[f] = faces.len();
            faces.push(f);
        }
    }
    if c == 0 {
        return Ok(TaitGraph {
            shading,
            graph: PlaneGraph {
                n: 1,
                edges: Vec::new(),
                rotation: vec![Vec::new()],
            },
            signs: Vec::new(),
            faces: vec![0],
        });
    }
    let mut edges = Vec::with_capacity(c);
    let mut signs = Vec::with_capacity(c);
    for x in 0..c {
        if colors[d.corner_face(x, 0)] == want {
            edges.push([vertex_of[d.corner_face(x, 0)], vertex_of[d.corner_face(x, 2)]]);
            signs.push(1);
        } else {
            edges.push([vertex_of[d.corner_face(x, 1)], vertex_of[d.corner_face(x, 3)]]);
            signs.push(-1);
        }
    }
    // face orbits run clockwise, so reverse them for a counterclockwise rotation
    let rotation = faces
        .iter()
        .map(|&f| {
            d.face(f)
                .iter()
                .rev()
                .map(|&dart| {
                    let (x, p) = (dart as usize / 4, dart as usize % 4);
                    // dart p sits in corner (p-1, p)
                    let end = match (signs[x], p) {
                        (1, 1) | (-1, 2) => 0,
                        _ => 1,
                    };
                    (x, end)
                })
                .collect()
        })
        .collect();
    Ok(TaitGraph {
        shading,
        graph: PlaneGraph {
            n: faces.len(),
            edges,
            rotation,
        },
        signs,
        faces,
    })
}

/// The shading with fewer vertices (Black on ties).
pub fn smaller_shading(d: &Diagram) -> Result<TaitGraph, TaitError> {
    let colors = face_colors(d)?;
    let white = colors.iter().filter(|&&c| c).count();
    if white < colors.len() - white {
        shade(d, Shading::White)
    } else {
        shade(d, Shading::Black)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoeritzMatrix {
    pub entries: Vec<Vec<i64>>,
    /// Row and column removed to form the reduced matrix.
    pub deleted: usize,
}

impl GoeritzMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn reduced(&self) -> Vec<Vec<i64>> {
        self.reduced_at(self.deleted)
    }

    pub fn reduced_at(&self, k: usize) -> Vec<Vec<i64>> {
        self.entries
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .map(|(_, row)| {
                row.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != k)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect()
    }
}

pub fn goeritz(tg: &TaitGraph) -> GoeritzMatrix {
    let n = tg.graph.n;
    let mut m = vec![vec![0i64; n]; n];
    for (&[u, v], &s) in tg.graph.edges.iter().zip(&tg.signs) {
        if u != v {
            m[u][v] -= s as i64;
            m[v][u] -= s as i64;
        }
    }
    for i in 0..n {
        let off: i64 = (0..n).filter(|&j| j != i).map(|j| m[i][j]).sum();
        m[i][i] = -off;
    }
    GoeritzMatrix {
        entries: m,
        deleted: 0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExceptionGraph {
    None,
    /// Two vertices joined by a double edge.
    T2,
    /// Two double edges sharing one vertex.
    T2WedgeT2,
    /// Two double edges on the same two vertices.
    T2ParallelT2,
}

impl ExceptionGraph {
    pub fn is_exception(self) -> bool {
        self != ExceptionGraph::None
    }
}

pub fn detect_exceptions(g: &PlaneGraph) -> ExceptionGraph {
    let e = g.edges.len();
    if g.edges.iter().any(|&[u, v]| u == v) {
        return ExceptionGraph::None;
    }
    match (g.n, e) {
        (2, 2) => ExceptionGraph::T2,
        (2, 4) => ExceptionGraph::T2ParallelT2,
        (3, 4) => {
            let mut mult = std::collections::BTreeMap::new();
            for &[u, v] in &g.edges {
                *mult.entry((u.min(v), u.max(v))).or_insert(0) += 1;
            }
            if mult.len() == 2 && mult.values().all(|&m| m == 2) {
                ExceptionGraph::T2WedgeT2
            } else {
                ExceptionGraph::None
            }
        }
        _ => ExceptionGraph::None,
    }
}

/// Either checkerboard graph is series-parallel.
pub fn is_arborescent(d: &Diagram) -> Result<bool, TaitError> {
    if !d.is_alternating() {
        return Err(TaitError::NotAlternating);
    }
    Ok(is_series_parallel(&shade(d, Shading::Black)?.graph)
        || is_series_parallel(&shade(d, Shading::White)?.graph))
}
