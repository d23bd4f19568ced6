use serde::Serialize;

use crate::diagram::{Diagram, IncidenceKind, Topology};
use crate::error::{Error, Result};
use crate::normal_form::{Component, Step};
use crate::polygon::{face_virtual_value, i0_of_faces};
use crate::rational::Rat;

/// `1 − (p + q)/m_v` with `p, q` the weights above 1 around `v` (1 when absent).
pub fn virtual_value(d: &Diagram, v: &str) -> Result<Rat> {
    let t = Topology::new(d)?;
    virtual_value_at(&t, t.vertex(v)?)
}

fn virtual_value_at(t: &Topology, v: usize) -> Result<Rat> {
    if !t.is_rupture(v) {
        return Err(Error::NotRupture(t.id(v).to_string()));
    }
    let heavy: Vec<i64> = t.incidences(v).iter().map(|x| x.weight).filter(|&w| w != 1).collect();
    if heavy.len() > 2 {
        return Err(Error::InvalidArgument(format!("vertex {} has {} weights above 1", t.id(v), heavy.len())));
    }
    let sum: i64 = heavy.iter().sum::<i64>() + (2 - heavy.len() as i64);
    Ok(Rat::one() - Rat::new(sum, t.multiplicity(v)))
}

/// Endpoint of edge `e` toward which the virtual value does not decrease.
///
/// Cutting a vertical edge leaves at each endpoint an arrow standing for the other
/// side; the edge points away from the endpoint whose arrow is heavier, to the
/// endpoint farther from the root on a tie. A horizontal edge points
/// to its parent node when both weights there exceed 1 or `ℓ⁺ > ℓ⁻`; otherwise an
/// exchange move is required first.
pub fn walk_direction(d: &Diagram, e: usize) -> Result<String> {
    let t = Topology::new(d)?;
    if e >= t.edge_count() {
        return Err(Error::UnknownEdge(e));
    }
    let (a, b) = t.edge_ends(e);
    let (ida, idb) = (t.id(a), t.id(b));
    let c = Component::recognize(d)?;
    for w in c.components() {
        let first = &w.component.nodes[0].id;
        let parent = &w.attach.id;
        if (parent == ida && first == idb) || (parent == idb && first == ida) {
            let node = w.attach;
            return if (node.p > 1 && node.q > 1) || w.ell_plus > w.ell_minus {
                Ok(parent.clone())
            } else {
                Err(Error::ExchangeRequired(format!("{ida}–{idb}")))
            };
        }
    }
    let (fa, fb) = (t.flow_through(a, e), t.flow_through(b, e));
    let distal = if t.parent(b).map(|(_, pe)| pe) == Some(e) { b } else { a };
    let pick = match fa.cmp(&fb) {
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Less => a,
        std::cmp::Ordering::Equal => distal,
    };
    Ok(t.id(pick).to_string())
}

/// The maximal spectral value, the node realizing it and the rewriting steps used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxSpectral {
    pub alpha: Rat,
    pub witness: String,
    pub steps: Vec<Step>,
}

/// Normalizes the diagram so the maximum sits on the root polygon, then reads it off
/// the `(1, 1)`-selected face.
pub fn max_spectral(d: &Diagram) -> Result<MaxSpectral> {
    let (c, steps) = Component::recognize(d)?.normalize_max()?;
    let faces = c.kfaces();
    let i0 = i0_of_faces(&faces).ok_or_else(|| Error::NotNormalForm("root polygon misses (1, 1)".into()))?;
    Ok(MaxSpectral { alpha: face_virtual_value(&faces, i0), witness: c.nodes[i0 - 1].id.clone(), steps })
}

/// Greedy ascent over adjacent rupture vertices from the root, with the virtual value
/// of every visited vertex.
pub fn climb(d: &Diagram) -> Result<Vec<(String, Rat)>> {
    let t = Topology::new(d)?;
    let mut v = t.root();
    let mut val = virtual_value_at(&t, v)?;
    let mut path = vec![(t.id(v).to_string(), val.clone())];
    loop {
        let mut best: Option<(usize, Rat)> = None;
        for x in t.incidences(v) {
            if let IncidenceKind::Edge { neighbor, .. } = x.kind {
                if t.is_rupture(neighbor) {
                    let nv = virtual_value_at(&t, neighbor)?;
                    if best.as_ref().map_or(true, |(_, b)| nv > *b) {
                        best = Some((neighbor, nv));
                    }
                }
            }
        }
        match best {
            Some((u, nv)) if nv > val => {
                v = u;
                val = nv;
                path.push((t.id(v).to_string(), val.clone()));
            }
            _ => return Ok(path),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::Polygon;

    #[test]
    fn brieskorn_maximum() {
        let d = Diagram::brieskorn(2, 3);
        assert_eq!(virtual_value(&d, "v").unwrap(), Rat::new(1, 6));
        let m = max_spectral(&d).unwrap();
        assert_eq!((m.alpha, m.witness.as_str()), (Rat::new(1, 6), "v"));
    }

    #[test]
    fn polygon_maxima() {
        let d = Polygon::from_triples(&[(1, 2, 2), (2, 1, 2)]).unwrap().to_diagram();
        assert_eq!(virtual_value(&d, "n1").unwrap(), Rat::new(1, 2));
        assert_eq!(virtual_value(&d, "n2").unwrap(), Rat::new(1, 2));
        assert_eq!(max_spectral(&d).unwrap().alpha, Rat::new(1, 2));
        let d = Polygon::from_triples(&[(1, 2, 2), (3, 1, 1)]).unwrap().to_diagram();
        let m = max_spectral(&d).unwrap();
        assert_eq!((m.alpha, m.witness.as_str()), (Rat::new(2, 5), "n1"));
    }

    #[test]
    fn leaves_have_no_virtual_value() {
        assert!(matches!(virtual_value(&Diagram::brieskorn(2, 3), "lp"), Err(Error::NotRupture(_))));
    }
}
