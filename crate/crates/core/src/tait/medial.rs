use crate::diagram::Diagram;
use crate::notation::PdCode;

use super::{PlaneGraph, TaitError};

/// Alternating diagram with one crossing on each edge of `g`; crossing `e`
/// sits on edge `e`, and the vertices of `g` become the faces at corners
/// (1,2) and (3,0).
///
/// With edge `e` drawn from `u` (west) to `v` (east), its crossing's slots
/// counterclockwise from the north-east are the strands through the corners
/// before `e` at `v`, after `e` at `u`, before `e` at `u`, and after `e` at `v`.
pub fn medial_diagram(g: &PlaneGraph) -> Result<Diagram, TaitError> {
    if g.edges.len() < 2 {
        return Err(TaitError::TooFewEdges(g.edges.len()));
    }
    let mut tuples = vec![[0u32; 4]; g.edges.len()];
    let mut label = 0u32;
    for rot in &g.rotation {
        let k = rot.len();
        for i in 0..k {
            label += 1;
            let (e, end) = rot[i];
            let (f, fend) = rot[(i + 1) % k];
            tuples[e][if end == 0 { 1 } else { 3 }] = label;
            tuples[f][if fend == 0 { 2 } else { 0 }] = label;
        }
    }
    let pd = PdCode::new(tuples).expect("every corner labels two slots");
    Ok(Diagram::build(&pd)?)
}
