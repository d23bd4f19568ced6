use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Neg};

use serde::de::Error as _;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::diagram::Diagram;
use crate::error::Result;
use crate::normal_form::{Component, ComponentView};
use crate::par::{map_collect, Exec};
use crate::polygon::{Face, Polygon};
use crate::rational::PairBag;
use crate::spectral::spectral_pairs_with;

/// A finite formal ℤ-combination of Newton polygons with nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolygonCombination {
    terms: BTreeMap<Polygon, i64>,
}

impl PolygonCombination {
    pub fn new() -> PolygonCombination {
        PolygonCombination::default()
    }

    pub fn single(p: Polygon) -> PolygonCombination {
        let mut c = PolygonCombination::new();
        c.insert(p, 1);
        c
    }

    pub fn insert(&mut self, p: Polygon, coef: i64) {
        let e = self.terms.entry(p).or_insert(0);
        *e += coef;
        if *e == 0 {
            self.terms.retain(|_, c| *c != 0);
        }
    }

    pub fn coefficient(&self, p: &Polygon) -> i64 {
        self.terms.get(p).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Polygon, i64)> {
        self.terms.iter().map(|(p, c)| (p, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl AddAssign<&PolygonCombination> for PolygonCombination {
    fn add_assign(&mut self, other: &PolygonCombination) {
        for (p, c) in other.terms() {
            self.insert(p.clone(), c);
        }
    }
}

impl Add for PolygonCombination {
    type Output = PolygonCombination;
    fn add(mut self, other: PolygonCombination) -> PolygonCombination {
        self += &other;
        self
    }
}

impl Neg for PolygonCombination {
    type Output = PolygonCombination;
    fn neg(self) -> PolygonCombination {
        PolygonCombination { terms: self.terms.into_iter().map(|(p, c)| (p, -c)).collect() }
    }
}

#[derive(Serialize, Deserialize)]
struct Term {
    coef: i64,
    faces: Vec<Face>,
}

impl Serialize for PolygonCombination {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (p, c) in self.terms() {
            seq.serialize_element(&Term { coef: c, faces: p.faces().to_vec() })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for PolygonCombination {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<PolygonCombination, D::Error> {
        let mut out = PolygonCombination::new();
        for t in Vec::<Term>::deserialize(d)? {
            out.insert(Polygon::new(t.faces).map_err(D::Error::custom)?, t.coef);
        }
        Ok(out)
    }
}

/// Inserts the face `(1, 1, ℓ⁺)` in slope order, merging with an existing `(1, 1)` face.
fn complete(ell_plus: i64, faces: &[Face]) -> Vec<Face> {
    let mut out = faces.to_vec();
    if ell_plus == 0 {
        return out;
    }
    match out.iter_mut().find(|f| f.p == 1 && f.q == 1) {
        Some(f) => f.k += ell_plus,
        None => {
            let at = out.iter().position(|f| f.p > f.q).unwrap_or(out.len());
            out.insert(at, Face::new(1, 1, ell_plus));
        }
    }
    out
}

/// Faces of `Ψ_w⁺`: the component faces completed by `(1, 1, ℓ⁺)`.
pub fn psi_plus(w: &ComponentView<'_>) -> Vec<Face> {
    complete(w.ell_plus, &w.component.kfaces())
}

/// Faces of `Ψ_w⁻`: the two-face polygon `(1, 1, ℓ⁺), (P, 1, ℓ⁻)`, merged when `P = 1`.
pub fn psi_minus(w: &ComponentView<'_>) -> Vec<Face> {
    complete(w.ell_plus, &[Face::new(w.big_p, 1, w.ell_minus)])
}

/// The Ψ decomposition: the root polygon with coefficient +1 and, for every non-root
/// component, `+Ψ_w⁺ − Ψ_w⁻`.
pub fn decompose(d: &Diagram) -> Result<PolygonCombination> {
    decompose_component(&Component::recognize(d)?.normalize_h1()?)
}

/// [`decompose`] of an already recognized component tree.
pub fn decompose_component(c: &Component) -> Result<PolygonCombination> {
    let mut out = PolygonCombination::single(Polygon::new(c.kfaces())?);
    for w in c.components() {
        out.insert(Polygon::new(psi_plus(&w))?, 1);
        out.insert(Polygon::new(psi_minus(&w))?, -1);
    }
    Ok(out)
}

/// `Σ coef · Spp(P)` over the terms.
pub fn sppa(c: &PolygonCombination) -> Result<PairBag> {
    sppa_with(c, Exec::default())
}

/// [`sppa`] with an explicit execution strategy.
pub fn sppa_with(c: &PolygonCombination, exec: Exec) -> Result<PairBag> {
    let terms: Vec<(&Polygon, i64)> = c.terms().collect();
    let parts = map_collect(terms, exec, |(p, coef)| {
        spectral_pairs_with(&p.to_diagram(), Exec::Sequential).map(|b| b.scaled(coef))
    });
    let mut out = PairBag::new();
    for part in parts {
        out.add_scaled(&part?, 1);
    }
    Ok(out)
}
