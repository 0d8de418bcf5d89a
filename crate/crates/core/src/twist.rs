//! Twist regions: crossings grouped along chains of bigon faces.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, UnionFind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistError {
    #[error("twist decomposition needs at least 2 crossings, got {0}")]
    TooFewCrossings(usize),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    Chain,
    /// The bigons close up into a cycle through every crossing of the region,
    /// as in a (2,n) torus diagram.
    FullCycle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistDecomposition {
    pub regions: Vec<Vec<usize>>,
    pub kinds: Vec<RegionKind>,
}

impl TwistDecomposition {
    pub fn t(&self) -> usize {
        self.regions.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.regions.iter().map(Vec::len).collect()
    }

    /// Region index of every crossing.
    pub fn region_of(&self) -> Vec<usize> {
        let n = self.regions.iter().map(Vec::len).sum();
        let mut of = vec![0; n];
        for (r, region) in self.regions.iter().enumerate() {
            for &x in region {
                of[x] = r;
            }
        }
        of
    }
}

/// Regions are listed by their smallest crossing; crossings within a region
/// ascend.
pub fn decompose(d: &Diagram) -> Result<TwistDecomposition, TwistError> {
    d.require_connected()?;
    let c = d.crossing_count();
    if c < 2 {
        return Err(TwistError::TooFewCrossings(c));
    }
    let mut uf = UnionFind::new(c);
    let mut bigon_sites = Vec::new();
    for f in 0..d.face_count() {
        if d.is_bigon(f) {
            let face = d.face(f);
            let (x, y) = (face[0] as usize / 4, face[1] as usize / 4);
            if x != y {
                uf.union(x, y);
                bigon_sites.push(x);
            }
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 0..c {
        by_root.entry(uf.find(x)).or_default().push(x);
    }
    let mut bigons_in: BTreeMap<usize, usize> = BTreeMap::new();
    for x in bigon_sites {
        *bigons_in.entry(uf.find(x)).or_default() += 1;
    }
    let mut regions: Vec<(usize, Vec<usize>)> = by_root.into_iter().collect();
    regions.sort_by_key(|(_, r)| r[0]);
    let kinds = regions
        .iter()
        .map(|(root, r)| {
            let b = bigons_in.get(root).copied().unwrap_or(0);
            if r.len() >= 2 && b >= r.len() {
                RegionKind::FullCycle
            } else {
                RegionKind::Chain
            }
        })
        .collect();
    Ok(TwistDecomposition {
        regions: regions.into_iter().map(|(_, r)| r).collect(),
        kinds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum TwistReducedCheck {
    Pass,
    /// Pairs of regions meeting the same two non-bigon faces at opposite
    /// corners; candidates for merging by a flype.
    Suspect { pairs: Vec<(usize, usize)> },
}

impl TwistReducedCheck {
    pub fn is_pass(&self) -> bool {
        matches!(self, TwistReducedCheck::Pass)
    }
}

pub fn twist_reduced_heuristic(d: &Diagram, td: &TwistDecomposition) -> TwistReducedCheck {
    let region_of = td.region_of();
    let mut seen: BTreeMap<(usize, usize), BTreeSet<usize>> = BTreeMap::new();
    for x in 0..d.crossing_count() {
        for p in 0..2 {
            let f = d.corner_face(x, p);
            let g = d.corner_face(x, p + 2);
            if f == g || d.is_bigon(f) || d.is_bigon(g) {
                continue;
            }
            seen.entry((f.min(g), f.max(g)))
                .or_default()
                .insert(region_of[x]);
        }
    }
    let mut pairs = BTreeSet::new();
    for regions in seen.values() {
        let rs: Vec<usize> = regions.iter().copied().collect();
        for i in 0..rs.len() {
            for j in i + 1..rs.len() {
                pairs.insert((rs[i], rs[j]));
            }
        }
    }
    if pairs.is_empty() {
        TwistReducedCheck::Pass
    } else {
        TwistReducedCheck::Suspect {
            pairs: pairs.into_iter().collect(),
        }
    }
}
