//! Combinatorial link diagrams: darts, faces, and classification predicates.
//!
//! Dart `4x + p` is slot `p` of crossing `x` in the canonical PD code.
//! `rot` steps counterclockwise around a crossing; the face orbit of a dart is
//! generated by `d -> rot(partner(d))`, so the face containing dart `4x + p`
//! is the one filling corner `(p-1, p)` of crossing `x`.

use std::collections::HashSet;

use thiserror::Error;

use crate::notation::PdCode;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("code is not planar: component with {crossings} crossings has {faces} faces, expected {}", crossings + 2)]
    NotPlanar { crossings: usize, faces: usize },
    #[error("diagram has {0} split components, a connected diagram is required")]
    Disconnected(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pd: PdCode,
    partner: Vec<u32>,
    face_of: Vec<u32>,
    faces: Vec<Vec<u32>>,
    split: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceSet<'a> {
    pub faces: &'a [Vec<u32>],
    /// Largest face, ties broken by index.
    pub outer_face: usize,
}

#[inline]
pub(crate) fn rot(d: usize) -> usize {
    (d & !3) | ((d + 1) & 3)
}

impl Diagram {
    pub fn build(pd: &PdCode) -> Result<Diagram, DiagramError> {
        let pd = pd.canonical();
        let c = pd.crossing_count();
        let partner: Vec<u32> = pd.partners().into_iter().map(|d| d as u32).collect();

        let mut face_of = vec![u32::MAX; 4 * c];
        let mut faces = Vec::with_capacity(c + 2);
        for start in 0..4 * c {
            if face_of[start] != u32::MAX {
                continue;
            }
            let id = faces.len() as u32;
            let mut orbit = Vec::new();
            let mut d = start;
            while face_of[d] == u32::MAX {
                face_of[d] = id;
                orbit.push(d as u32);
                d = rot(partner[d] as usize);
            }
            faces.push(orbit);
        }

        let mut uf = UnionFind::new(c);
        for (d, &e) in partner.iter().enumerate() {
            uf.union(d / 4, e as usize / 4);
        }
        let mut crossings = vec![0usize; c];
        let mut face_counts = vec![0usize; c];
        for x in 0..c {
            crossings[uf.find(x)] += 1;
        }
        for f in &faces {
            face_counts[uf.find(f[0] as usize / 4)] += 1;
        }
        let mut split = 0;
        for r in 0..c {
            if crossings[r] > 0 {
                split += 1;
                if face_counts[r] != crossings[r] + 2 {
                    return Err(DiagramError::NotPlanar {
                        crossings: crossings[r],
                        faces: face_counts[r],
                    });
                }
            }
        }

        Ok(Diagram {
            pd,
            partner,
            face_of,
            faces,
            split: split.max(1),
        })
    }

    pub fn pd(&self) -> &PdCode {
        &self.pd
    }

    pub fn crossing_count(&self) -> usize {
        self.pd.crossing_count()
    }

    pub fn component_count(&self) -> usize {
        if self.pd.is_empty() {
            1
        } else {
            self.pd.component_count()
        }
    }

    pub fn partner(&self, d: usize) -> usize {
        self.partner[d] as usize
    }

    pub fn face_of(&self, d: usize) -> usize {
        self.face_of[d] as usize
    }

    /// Face filling corner `(p, p+1)` at crossing `x`.
    pub fn corner_face(&self, x: usize, p: usize) -> usize {
        self.face_of[4 * x + (p + 1) % 4] as usize
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn face(&self, f: usize) -> &[u32] {
        &self.faces[f]
    }

    pub fn is_bigon(&self, f: usize) -> bool {
        self.faces[f].len() == 2
    }

    pub fn faces(&self) -> Result<FaceSet<'_>, DiagramError> {
        self.require_connected()?;
        let outer_face = (0..self.faces.len())
            .max_by_key(|&f| (self.faces[f].len(), std::cmp::Reverse(f)))
            .unwrap_or(0);
        Ok(FaceSet {
            faces: &self.faces,
            outer_face,
        })
    }

    pub fn split_components(&self) -> usize {
        self.split
    }

    pub fn is_connected(&self) -> bool {
        self.split == 1
    }

    pub fn require_connected(&self) -> Result<(), DiagramError> {
        if self.split == 1 {
            Ok(())
        } else {
            Err(DiagramError::Disconnected(self.split))
        }
    }

    pub fn is_alternating(&self) -> bool {
        self.partner
            .iter()
            .enumerate()
            .all(|(d, &e)| (d ^ e as usize) & 1 == 1)
    }

    /// No crossing meets one face at two opposite corners.
    pub fn is_reduced(&self) -> bool {
        (0..self.crossing_count()).all(|x| {
            self.face_of[4 * x + 1] != self.face_of[4 * x + 3]
                && self.face_of[4 * x] != self.face_of[4 * x + 2]
        })
    }

    /// No two distinct faces share two distinct edges.
    ///
    /// A simple closed curve meeting the diagram in two edge points passes
    /// through exactly two faces, and both of its sides contain crossings
    /// whenever the two edges differ.
    pub fn is_prime(&self) -> bool {
        let mut seen = HashSet::new();
        for d in 0..self.partner.len() {
            let e = self.partner[d] as usize;
            if d > e {
                continue;
            }
            let (f, g) = (self.face_of[d], self.face_of[e]);
            if f == g {
                continue;
            }
            if !seen.insert((f.min(g), f.max(g))) {
                return false;
            }
        }
        true
    }

    /// Exhaustive 2-edge-cut search, quadratic in the crossing count.
    pub fn is_prime_by_cuts(&self) -> bool {
        let c = self.crossing_count();
        let edges: Vec<(usize, usize)> = (0..4 * c)
            .filter(|&d| d < self.partner[d] as usize)
            .map(|d| (d, self.partner[d] as usize))
            .collect();
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                let mut uf = UnionFind::new(c);
                for (k, &(a, b)) in edges.iter().enumerate() {
                    if k != i && k != j {
                        uf.union(a / 4, b / 4);
                    }
                }
                let roots: HashSet<usize> = (0..c).map(|x| uf.find(x)).collect();
                if roots.len() > 1 {
                    return false;
                }
            }
        }
        true
    }

    pub fn mirror(&self) -> Diagram {
        Diagram::build(&self.pd.mirror()).expect("mirror of a planar code is planar")
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}
