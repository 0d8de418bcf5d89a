//! Text notations for link diagrams: braid words and planar diagram codes.
//!
//! PD tuples list the four edge labels at a crossing counterclockwise,
//! starting from the incoming under-strand. Positions 0 and 2 are the under
//! strand, 1 and 3 the over strand.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NotationError {
    #[error("malformed token {0:?}")]
    BadToken(String),
    #[error("braid word is empty")]
    EmptyBraid,
    #[error("braid needs at least 2 strands, got {0}")]
    TooFewStrands(usize),
    #[error("generator {letter} out of range for {strands} strands")]
    GeneratorOutOfRange { letter: i64, strands: usize },
    #[error("strand position {0} is never touched by a generator")]
    FreeStrand(usize),
    #[error("malformed PD code: {0}")]
    Syntax(String),
    #[error("tuple {index} has {arity} entries, expected 4")]
    Arity { index: usize, arity: usize },
    #[error("edge label {label} occurs {count} time(s), expected 2")]
    LabelMultiplicity { label: i64, count: usize },
    #[error("edge labels are not the contiguous range 1..={expected}")]
    NonContiguous { expected: usize },
}

/// A braid word on `strands` strands; letter `k` is σ_|k| with the sign of `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, NotationError> {
        if letters.is_empty() {
            return Err(NotationError::EmptyBraid);
        }
        if strands < 2 {
            return Err(NotationError::TooFewStrands(strands));
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(NotationError::GeneratorOutOfRange {
                    letter: l as i64,
                    strands,
                });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// Permutation of strand positions induced by the word (bottom to top).
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            at.swap(i, i + 1);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &strand) in at.iter().enumerate() {
            perm[strand] = pos;
        }
        perm
    }

    pub fn permutation_cycles(&self) -> usize {
        let perm = self.permutation();
        let mut seen = vec![false; perm.len()];
        let mut cycles = 0;
        for s in 0..perm.len() {
            if !seen[s] {
                cycles += 1;
                let mut j = s;
                while !seen[j] {
                    seen[j] = true;
                    j = perm[j];
                }
            }
        }
        cycles
    }

    pub fn mirror(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().map(|l| -l).collect(),
        }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.strands)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = NotationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_braid(s)
    }
}

/// Parses `"[N:] l1 l2 ..."`. Without a strand declaration the strand count is
/// one more than the largest generator index.
pub fn parse_braid(text: &str) -> Result<BraidWord, NotationError> {
    let (declared, body) = match text.split_once(':') {
        Some((head, rest)) => {
            let head = head.trim();
            let n: usize = head
                .parse()
                .map_err(|_| NotationError::BadToken(head.to_string()))?;
            (Some(n), rest)
        }
        None => (None, text),
    };
    let mut letters = Vec::new();
    for tok in body.split(|c: char| c.is_whitespace() || c == ',') {
        if tok.is_empty() {
            continue;
        }
        let l: i32 = tok
            .parse()
            .map_err(|_| NotationError::BadToken(tok.to_string()))?;
        if l == 0 {
            return Err(NotationError::BadToken(tok.to_string()));
        }
        letters.push(l);
    }
    let strands = declared.unwrap_or_else(|| {
        letters
            .iter()
            .map(|l| l.unsigned_abs() as usize + 1)
            .max()
            .unwrap_or(0)
    });
    BraidWord::new(strands, letters)
}

/// A validated planar diagram code.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PdCode {
    tuples: Vec<[u32; 4]>,
}

impl PdCode {
    pub fn new(tuples: Vec<[u32; 4]>) -> Result<Self, NotationError> {
        let n = tuples.len();
        let mut counts: HashMap<u32, usize> = HashMap::new();
        for t in &tuples {
            for &l in t {
                *counts.entry(l).or_default() += 1;
            }
        }
        let mut labels: Vec<_> = counts.into_iter().collect();
        labels.sort_unstable();
        for &(label, count) in &labels {
            if count != 2 {
                return Err(NotationError::LabelMultiplicity {
                    label: label as i64,
                    count,
                });
            }
        }
        if labels
            .iter()
            .enumerate()
            .any(|(i, &(l, _))| l as usize != i + 1)
        {
            return Err(NotationError::NonContiguous { expected: 2 * n });
        }
        Ok(PdCode { tuples })
    }

    /// The crossingless unknot.
    pub fn empty() -> Self {
        PdCode { tuples: Vec::new() }
    }

    pub fn tuples(&self) -> &[[u32; 4]] {
        &self.tuples
    }

    pub fn crossing_count(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn render(&self) -> String {
        let body: Vec<String> = self
            .tuples
            .iter()
            .map(|t| format!("[{},{},{},{}]", t[0], t[1], t[2], t[3]))
            .collect();
        format!("[{}]", body.join(","))
    }

    /// Dart `4x + p` is slot `p` of crossing `x`; returns the dart sharing its label.
    pub(crate) fn partners(&self) -> Vec<usize> {
        let mut first: Vec<Option<usize>> = vec![None; 2 * self.tuples.len() + 1];
        let mut partner = vec![0; 4 * self.tuples.len()];
        for (x, t) in self.tuples.iter().enumerate() {
            for (p, &l) in t.iter().enumerate() {
                let d = 4 * x + p;
                match first[l as usize] {
                    Some(e) => {
                        partner[d] = e;
                        partner[e] = d;
                    }
                    None => first[l as usize] = Some(d),
                }
            }
        }
        partner
    }

    fn walk(&self) -> Walk {
        let c = self.tuples.len();
        let partner = self.partners();
        let mut entered = vec![false; 4 * c];
        let mut flip = vec![false; c];
        let mut components = Vec::new();
        let starts = (0..c).map(|x| 4 * x).chain((0..c).map(|x| 4 * x + 1));
        for start in starts {
            if entered[start] || entered[start ^ 2] {
                continue;
            }
            let mut comp = Vec::new();
            let mut d = start;
            loop {
                entered[d] = true;
                let (x, p) = (d / 4, d % 4);
                if p == 2 {
                    flip[x] = true;
                }
                comp.push(d);
                let next = partner[4 * x + (p + 2) % 4];
                if next == start {
                    break;
                }
                d = next;
            }
            components.push(comp);
        }
        Walk { flip, components }
    }

    pub fn component_count(&self) -> usize {
        self.walk().components.len()
    }

    /// Relabels edges along strands and orients every component consistently.
    ///
    /// Components are visited in order of their first under-passage by crossing
    /// index (over-only components afterwards, starting at slot 1); each
    /// component's labels start at the edge entering its base dart. Crossing
    /// order is kept.
    pub fn canonical(&self) -> PdCode {
        let walk = self.walk();
        let mut label = vec![0u32; 4 * self.tuples.len()];
        let mut next = 1u32;
        let partner = self.partners();
        for comp in &walk.components {
            for &d in comp {
                label[d] = next;
                label[partner[d]] = next;
                next += 1;
            }
        }
        let tuples = self
            .tuples
            .iter()
            .enumerate()
            .map(|(x, _)| {
                let raw = [label[4 * x], label[4 * x + 1], label[4 * x + 2], label[4 * x + 3]];
                if walk.flip[x] {
                    [raw[2], raw[3], raw[0], raw[1]]
                } else {
                    raw
                }
            })
            .collect();
        PdCode { tuples }
    }

    /// Mirror image: over and under are exchanged at every crossing.
    pub fn mirror(&self) -> PdCode {
        let oriented = self.canonical();
        let walk = oriented.walk();
        let mut over_in = vec![1usize; oriented.tuples.len()];
        for comp in &walk.components {
            for &d in comp {
                if d % 2 == 1 {
                    over_in[d / 4] = d % 4;
                }
            }
        }
        let tuples = oriented
            .tuples
            .iter()
            .zip(&over_in)
            .map(|(t, &p)| [t[p], t[(p + 1) % 4], t[(p + 2) % 4], t[(p + 3) % 4]])
            .collect();
        PdCode { tuples }.canonical()
    }

    /// Disjoint union, `other` drawn beside `self`.
    pub fn disjoint_union(&self, other: &PdCode) -> PdCode {
        let off = 2 * self.tuples.len() as u32;
        let mut tuples = self.tuples.clone();
        tuples.extend(other.tuples.iter().map(|t| t.map(|l| l + off)));
        PdCode { tuples }.canonical()
    }

    /// Connected sum along edge `a` of `self` and edge `b` of `other`.
    ///
    /// Both edges are cut and reconnected so that orientations agree.
    pub fn connected_sum(&self, a: u32, other: &PdCode, b: u32) -> PdCode {
        let off = 2 * self.tuples.len() as u32;
        let b = b + off;
        let mut tuples = self.tuples.clone();
        tuples.extend(other.tuples.iter().map(|t| t.map(|l| l + off)));
        let code = PdCode { tuples };
        let walk = code.walk();
        let entering = |label: u32| -> usize {
            walk.components
                .iter()
                .flatten()
                .copied()
                .find(|&d| code.tuples[d / 4][d % 4] == label)
                .expect("label present")
        };
        let (ha, hb) = (entering(a), entering(b));
        let mut tuples = code.tuples;
        tuples[ha / 4][ha % 4] = b;
        tuples[hb / 4][hb % 4] = a;
        PdCode { tuples }.canonical()
    }
}

struct Walk {
    flip: Vec<bool>,
    // entering darts in walk order
    components: Vec<Vec<usize>>,
}

impl fmt::Display for PdCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for PdCode {
    type Err = NotationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pd(s)
    }
}

/// Parses `[[a,b,c,d],...]`; `PD[X[a,b,c,d],...]` and parenthesized tuples are
/// accepted as well.
pub fn parse_pd(text: &str) -> Result<PdCode, NotationError> {
    let mut s = text.trim().to_string();
    if let Some(rest) = s.strip_prefix("PD") {
        s = rest.trim_start().to_string();
    }
    let s = s.replace("X[", "[").replace('(', "[").replace(')', "]");
    let raw: Vec<Vec<i64>> =
        serde_json::from_str(&s).map_err(|e| NotationError::Syntax(e.to_string()))?;
    let mut tuples = Vec::with_capacity(raw.len());
    for (index, t) in raw.iter().enumerate() {
        if t.len() != 4 {
            return Err(NotationError::Arity {
                index,
                arity: t.len(),
            });
        }
        let mut out = [0u32; 4];
        for (o, &l) in out.iter_mut().zip(t) {
            if l < 1 || l > u32::MAX as i64 {
                return Err(NotationError::LabelMultiplicity { label: l, count: 1 });
            }
            *o = l as u32;
        }
        tuples.push(out);
    }
    PdCode::new(tuples)
}

/// Closure of a braid, strands running upward and closed on the right.
///
/// At σ_i the four slots are taken counterclockwise as bottom-left,
/// bottom-right, top-right, top-left; for positive letters strand i passes
/// over strand i+1.
pub fn braid_closure(b: &BraidWord) -> Result<PdCode, NotationError> {
    let n = b.strands;
    let mut touched = vec![false; n];
    for &l in &b.letters {
        let i = l.unsigned_abs() as usize - 1;
        touched[i] = true;
        touched[i + 1] = true;
    }
    if let Some(free) = touched.iter().position(|t| !t) {
        return Err(NotationError::FreeStrand(free + 1));
    }
    let mut cur: Vec<u32> = (0..n as u32).collect();
    let mut fresh = n as u32;
    let mut tuples = Vec::with_capacity(b.letters.len());
    for &l in &b.letters {
        let i = l.unsigned_abs() as usize - 1;
        let (bl, br) = (cur[i], cur[i + 1]);
        let (tl, tr) = (fresh, fresh + 1);
        fresh += 2;
        cur[i] = tl;
        cur[i + 1] = tr;
        tuples.push(if l > 0 { [br, tr, tl, bl] } else { [bl, br, tr, tl] });
    }
    // identify each top segment with the bottom segment below it
    let mut alias: Vec<u32> = (0..fresh).collect();
    for (j, &top) in cur.iter().enumerate() {
        alias[top as usize] = j as u32;
    }
    let mut dense: HashMap<u32, u32> = HashMap::new();
    for t in tuples.iter_mut() {
        for l in t.iter_mut() {
            let a = alias[*l as usize];
            let next = dense.len() as u32 + 1;
            *l = *dense.entry(a).or_insert(next);
        }
    }
    Ok(PdCode::new(tuples)?.canonical())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "[[1,4,2,5],[3,6,4,1],[5,2,6,3]]";

    #[test]
    fn braid_parsing() {
        let b = parse_braid("4: 1 1 -2 -2 -2 3 3 1 -2 -2 3").unwrap();
        assert_eq!(b.strands(), 4);
        assert_eq!(b.letters().len(), 11);
        assert_eq!(parse_braid("2: 1 1 1").unwrap().letters(), &[1, 1, 1]);
        assert!(matches!(
            parse_braid("3: 1 5"),
            Err(NotationError::GeneratorOutOfRange { .. })
        ));
        assert_eq!(parse_braid("1 -2").unwrap().strands(), 3);
        assert!(matches!(parse_braid("3:"), Err(NotationError::EmptyBraid)));
        assert!(matches!(parse_braid("3: 1 x"), Err(NotationError::BadToken(_))));
        assert!(matches!(parse_braid("2: 0"), Err(NotationError::BadToken(_))));
    }

    #[test]
    fn pd_parsing() {
        assert_eq!(parse_pd(TREFOIL).unwrap().crossing_count(), 3);
        assert_eq!(parse_pd("[[1,3,2,4],[3,1,4,2]]").unwrap().crossing_count(), 2);
        assert!(matches!(
            parse_pd("[[1,2,3,4],[1,2,3,5]]"),
            Err(NotationError::LabelMultiplicity { label: 4, count: 1 })
        ));
        assert!(matches!(
            parse_pd("[[1,2,1,2,3]]"),
            Err(NotationError::Arity { index: 0, arity: 5 })
        ));
        assert!(matches!(
            parse_pd("[[1,2,1,3],[3,2,5,5]]"),
            Err(NotationError::NonContiguous { expected: 4 })
        ));
        let alt = parse_pd("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]").unwrap();
        assert_eq!(alt.render(), TREFOIL);
        assert!(parse_pd("[]").unwrap().is_empty());
        assert!(parse_pd("[[1,2").is_err());
    }

    #[test]
    fn render_round_trip() {
        let pd = parse_pd(TREFOIL).unwrap();
        assert_eq!(parse_pd(&pd.render()).unwrap(), pd);
    }

    #[test]
    fn trefoil_is_already_canonical() {
        let pd = parse_pd(TREFOIL).unwrap();
        assert_eq!(pd.canonical(), pd);
    }

    #[test]
    fn relabeling_is_forgotten() {
        let pd = parse_pd(TREFOIL).unwrap();
        let perm = [0, 4, 6, 1, 3, 2, 5];
        let relabeled =
            PdCode::new(pd.tuples().iter().map(|t| t.map(|l| perm[l as usize])).collect())
                .unwrap();
        assert_ne!(relabeled, pd);
        assert_eq!(relabeled.canonical(), pd.canonical());
    }

    #[test]
    fn reversed_orientation_is_normalized() {
        // same trefoil walked the other way: under strands enter at slot 2
        let pd = parse_pd("[[2,5,1,4],[4,1,3,6],[6,3,5,2]]").unwrap();
        let canon = pd.canonical();
        let again = canon.canonical();
        assert_eq!(canon, again);
        assert_eq!(canon.component_count(), 1);
    }

    #[test]
    fn closures() {
        let hopf = braid_closure(&parse_braid("2: 1 1").unwrap()).unwrap();
        assert_eq!(hopf.crossing_count(), 2);
        assert_eq!(hopf.component_count(), 2);
        let trefoil = braid_closure(&parse_braid("2: 1 1 1").unwrap()).unwrap();
        assert_eq!(trefoil.crossing_count(), 3);
        assert_eq!(trefoil.component_count(), 1);
        let k11 = braid_closure(&parse_braid("4: 1 1 -2 -2 -2 3 3 1 -2 -2 3").unwrap()).unwrap();
        assert_eq!(k11.crossing_count(), 11);
        assert_eq!(k11.component_count(), 1);
        assert!(matches!(
            braid_closure(&parse_braid("3: 1 1").unwrap()),
            Err(NotationError::FreeStrand(3))
        ));
    }

    #[test]
    fn braid_permutation_cycles() {
        assert_eq!(parse_braid("2: 1 1").unwrap().permutation_cycles(), 2);
        assert_eq!(parse_braid("3: 1 2").unwrap().permutation_cycles(), 1);
        assert_eq!(parse_braid("4: 1 3").unwrap().permutation_cycles(), 2);
    }

    #[test]
    fn mirror_twice_is_identity() {
        let pd = braid_closure(&parse_braid("3: 1 -2 1 -2").unwrap()).unwrap();
        assert_eq!(pd.mirror().mirror(), pd.canonical());
        assert_ne!(pd.mirror(), pd.canonical());
    }
}
