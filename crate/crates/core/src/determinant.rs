//! Link determinants by three independent routes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::diagram::{Diagram, UnionFind};
use crate::tait::{goeritz, smaller_shading, GoeritzMatrix, TaitError, TaitGraph};

pub const DEFAULT_STATE_LIMIT: usize = 16;
pub const DEFAULT_TREE_LIMIT: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeterminantError {
    #[error("{crossings} crossings exceed the state-sum limit of {limit}")]
    StateLimit { crossings: usize, limit: usize },
    #[error("{edges} edges exceed the tree enumeration limit of {limit}")]
    TreeLimit { edges: usize, limit: usize },
    #[error("spanning-tree route needs an alternating diagram")]
    NotAlternating,
    #[error("bracket norm {0} is not a perfect square")]
    NotSquare(BigInt),
    #[error(transparent)]
    Tait(#[from] TaitError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Goeritz,
    Bracket,
    SpanningTrees,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeterminantResult {
    pub value: BigInt,
    pub method: Method,
}

/// Fraction-free Gaussian elimination with row pivoting.
pub fn bareiss(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

pub fn det_goeritz(gm: &GoeritzMatrix) -> DeterminantResult {
    let reduced: Vec<Vec<BigInt>> = gm
        .reduced()
        .into_iter()
        .map(|row| row.into_iter().map(BigInt::from).collect())
        .collect();
    DeterminantResult {
        value: bareiss(&reduced).abs(),
        method: Method::Goeritz,
    }
}

/// Goeritz route on the shading with fewer faces.
pub fn det_of_diagram(d: &Diagram) -> Result<DeterminantResult, DeterminantError> {
    Ok(det_goeritz(&goeritz(&smaller_shading(d)?)))
}

/// Integer Laurent polynomial in `A`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Laurent(pub BTreeMap<i64, BigInt>);

impl Laurent {
    fn add_term(&mut self, exp: i64, coeff: BigInt) {
        let slot = self.0.entry(exp).or_default();
        *slot += coeff;
        if slot.is_zero() {
            self.0.remove(&exp);
        }
    }

    fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::default();
        for (ea, ca) in &self.0 {
            for (eb, cb) in &other.0 {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }

    fn pow(&self, k: usize) -> Laurent {
        let mut out = Laurent(BTreeMap::from([(0, BigInt::one())]));
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Value at `A = ζ`, a primitive eighth root of unity.
    pub fn at_zeta8(&self) -> Zeta8 {
        let mut z = Zeta8::default();
        for (e, c) in &self.0 {
            let r = e.rem_euclid(8) as usize;
            if r < 4 {
                z.0[r] += c;
            } else {
                z.0[r - 4] -= c;
            }
        }
        z
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .map(|(e, c)| format!("{c}*A^{e}"))
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// Element `a0 + a1 ζ + a2 ζ² + a3 ζ³` of `Z[ζ]`, `ζ⁴ = -1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Zeta8(pub [BigInt; 4]);

impl Zeta8 {
    fn conj(&self) -> Zeta8 {
        // conj(ζ^k) = ζ^{-k} = -ζ^{4-k}
        let a = &self.0;
        Zeta8([a[0].clone(), -&a[3], -&a[2], -&a[1]])
    }

    fn mul(&self, o: &Zeta8) -> Zeta8 {
        let mut out: [BigInt; 4] = Default::default();
        for i in 0..4 {
            for j in 0..4 {
                let p = &self.0[i] * &o.0[j];
                if i + j < 4 {
                    out[i + j] += p;
                } else {
                    out[i + j - 4] -= p;
                }
            }
        }
        Zeta8(out)
    }

    /// `z * conj(z)`, when it is a rational integer.
    pub fn norm(&self) -> Option<BigInt> {
        let n = self.mul(&self.conj());
        if n.0[1..].iter().all(Zero::is_zero) {
            Some(n.0[0].clone())
        } else {
            None
        }
    }
}

/// Kauffman bracket by the full state sum, normalized so the unknot is 1.
///
/// Smoothing 0 joins slots (0,1) and (2,3), smoothing 1 joins (1,2) and
/// (3,0); each state contributes `A^(n0 - n1) δ^(loops - 1)`.
pub fn bracket_polynomial(d: &Diagram, limit: usize) -> Result<Laurent, DeterminantError> {
    let c = d.crossing_count();
    if c > limit {
        return Err(DeterminantError::StateLimit { crossings: c, limit });
    }
    if c == 0 {
        return Ok(Laurent(BTreeMap::from([(0, BigInt::one())])));
    }
    let max_loops = 2 * c + 2;
    let tally = |range: std::ops::Range<u64>| -> BTreeMap<(i64, usize), u64> {
        let mut t = BTreeMap::new();
        for state in range {
            let mut uf = UnionFind::new(4 * c);
            for dart in 0..4 * c {
                uf.union(dart, d.partner(dart));
            }
            let mut ones = 0i64;
            for x in 0..c {
                let b = 4 * x;
                if state >> x & 1 == 0 {
                    uf.union(b, b + 1);
                    uf.union(b + 2, b + 3);
                } else {
                    ones += 1;
                    uf.union(b + 1, b + 2);
                    uf.union(b + 3, b);
                }
            }
            let loops = (0..4 * c).filter(|&v| uf.find(v) == v).count();
            *t.entry((c as i64 - 2 * ones, loops)).or_insert(0) += 1;
        }
        t
    };
    let total = 1u64 << c;
    let chunk = (total / 64).max(1);
    let parts: Vec<BTreeMap<(i64, usize), u64>> = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|i| tally(i * chunk..((i + 1) * chunk).min(total)))
        .collect();
    let mut counts: BTreeMap<(i64, usize), u64> = BTreeMap::new();
    for p in parts {
        for (k, v) in p {
            *counts.entry(k).or_insert(0) += v;
        }
    }
    let delta = Laurent(BTreeMap::from([(2, -BigInt::one()), (-2, -BigInt::one())]));
    let powers: Vec<Laurent> = (0..max_loops).map(|k| delta.pow(k)).collect();
    let mut out = Laurent::default();
    for ((exp, loops), n) in counts {
        for (e, coeff) in &powers[loops - 1].0 {
            out.add_term(exp + e, coeff * BigInt::from(n));
        }
    }
    Ok(out)
}

pub fn det_bracket(d: &Diagram, limit: usize) -> Result<DeterminantResult, DeterminantError> {
    let poly = bracket_polynomial(d, limit)?;
    let norm = poly
        .at_zeta8()
        .norm()
        .expect("norm of an element of Z[zeta8] fixed by conjugation");
    let root = norm.sqrt();
    if &root * &root != norm {
        return Err(DeterminantError::NotSquare(norm));
    }
    Ok(DeterminantResult {
        value: root,
        method: Method::Bracket,
    })
}

/// Counts spanning trees by exhaustive search over edge subsets.
pub fn count_spanning_trees(n: usize, edges: &[[usize; 2]]) -> BigInt {
    if n <= 1 {
        return BigInt::one();
    }
    struct Search<'a> {
        edges: &'a [[usize; 2]],
        parent: Vec<usize>,
        size: Vec<usize>,
    }
    impl Search<'_> {
        fn find(&self, mut x: usize) -> usize {
            while self.parent[x] != x {
                x = self.parent[x];
            }
            x
        }
        fn go(&mut self, i: usize, need: usize) -> u64 {
            if need == 0 {
                return 1;
            }
            if self.edges.len() - i < need {
                return 0;
            }
            let [u, v] = self.edges[i];
            let (a, b) = (self.find(u), self.find(v));
            let mut total = 0;
            if a != b {
                let (big, small) = if self.size[a] >= self.size[b] { (a, b) } else { (b, a) };
                self.parent[small] = big;
                self.size[big] += self.size[small];
                total += self.go(i + 1, need - 1);
                self.size[big] -= self.size[small];
                self.parent[small] = small;
            }
            total + self.go(i + 1, need)
        }
    }
    let mut s = Search {
        edges,
        parent: (0..n).collect(),
        size: vec![1; n],
    };
    BigInt::from(s.go(0, n - 1))
}

pub fn det_spanning_trees(tg: &TaitGraph, limit: usize) -> Result<DeterminantResult, DeterminantError> {
    if !tg.uniform_sign() {
        return Err(DeterminantError::NotAlternating);
    }
    let e = tg.graph.edges.len();
    if e > limit {
        return Err(DeterminantError::TreeLimit { edges: e, limit });
    }
    Ok(DeterminantResult {
        value: count_spanning_trees(tg.graph.n, &tg.graph.edges),
        method: Method::SpanningTrees,
    })
}

/// Matrix-tree count through the reduced Laplacian, for graphs too large to
/// enumerate.
pub fn matrix_tree_count(n: usize, edges: &[[usize; 2]]) -> BigInt {
    if n <= 1 {
        return BigInt::one();
    }
    let mut lap = vec![vec![BigInt::zero(); n]; n];
    for &[u, v] in edges {
        if u != v {
            lap[u][u] += 1;
            lap[v][v] += 1;
            lap[u][v] -= 1;
            lap[v][u] -= 1;
        }
    }
    let reduced: Vec<Vec<BigInt>> = lap[1..].iter().map(|r| r[1..].to_vec()).collect();
    bareiss(&reduced)
}
