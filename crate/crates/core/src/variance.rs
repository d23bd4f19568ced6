use num_integer::Integer;
use serde::Serialize;

use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::normal_form::{Component, ComponentView};
use crate::polygon::{face_virtual_value, i0_of_faces, milnor_formal, nd_terms, Face, Polygon};
use crate::rational::{moment, Rat, SpecBag};
use crate::spectral::spectrum;

/// `moment₂ / moment₀`; spectra of curves are centred at 0.
pub fn variance(sp: &SpecBag) -> Result<Rat> {
    let mu = moment(sp, 0);
    if mu.is_zero() {
        return Err(Error::EmptySpectrum);
    }
    Ok(moment(sp, 2) / mu)
}

/// Whether the variance bound is attained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Strict,
    Equality,
}

/// The coefficient `E_e` of `Δ_e` for the edge joining vertices `a` and `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeTerm {
    pub a: String,
    pub b: String,
    pub e: Rat,
    pub delta: i64,
}

/// The defect `6S − μα_μ` with its edge expansion and the derived variance data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectReport {
    pub defect: Rat,
    pub edge_terms: Vec<EdgeTerm>,
    #[serde(rename = "S")]
    pub s: Rat,
    pub mu: i64,
    pub alpha_max: Rat,
    pub alpha_min: Rat,
    pub variance: Rat,
    pub bound: Rat,
    pub verdict: Verdict,
}

impl DefectReport {
    /// Fills in `S`, the variance, the bound and the verdict from the defect, `μ` and
    /// `α_μ`, using `α_1 = −α_μ`.
    fn assemble(defect: Rat, edge_terms: Vec<EdgeTerm>, mu: i64, alpha_max: Rat) -> DefectReport {
        let s = (&defect + Rat::from_int(mu) * &alpha_max) / Rat::from_int(6);
        let variance = &s / Rat::from_int(mu);
        let bound = &alpha_max / Rat::from_int(6);
        let verdict = if defect.is_zero() { Verdict::Equality } else { Verdict::Strict };
        DefectReport { defect, edge_terms, s, mu, alpha_min: -&alpha_max, alpha_max, variance, bound, verdict }
    }

    /// `−Σ E_e Δ_e`.
    pub fn edge_sum(&self) -> Rat {
        -self.edge_terms.iter().map(|t| &t.e * Rat::from_int(t.delta)).sum::<Rat>()
    }
}

fn node_id(i: usize) -> String {
    format!("n{i}")
}

/// The defect of a non-degenerate polygon as `Σ F_i C_i` over its edges. A smooth
/// polygon (`μ = 0`) has no maximal spectral value and is rejected.
pub fn nd_defect(p: &Polygon) -> Result<DefectReport> {
    if p.milnor() == 0 {
        return Err(Error::EmptySpectrum);
    }
    let i0 = p.i0()?;
    let t = nd_terms(p.faces(), i0);
    let mut edge_terms = Vec::new();
    for (i, e) in t.edges.iter().enumerate() {
        let val = e.e.clone().ok_or_else(|| Error::InvalidPolygon("parallel consecutive faces".into()))?;
        edge_terms.push(EdgeTerm { a: node_id(i + 1), b: node_id(i + 2), e: val, delta: e.delta });
    }
    Ok(DefectReport::assemble(t.defect, edge_terms, p.milnor(), t.alpha))
}

/// Contribution of one splice component to the global defect.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentDefect {
    pub contribution: Rat,
    pub edge_terms: Vec<EdgeTerm>,
    /// `μ(Ψ⁺) − μ(Ψ⁻)` of the formal completions.
    pub mu: i128,
    /// `Σ_t n_t(n_t − 1)/(q_t q_{t+1}) Δ_t` with `n_0 = ℓ⁻` and `q_0 = 1`.
    pub mu_expansion: Rat,
    pub alpha_plus: Rat,
    pub alpha_minus: Rat,
    /// `(q_1 − p_1)/((ℓ⁺ + ℓ⁻)(q_1ℓ⁺ + p_1ℓ⁻))`.
    pub c0_plus: Rat,
}

/// The component term `(6S − μα_0)_w` and its edge coefficients.
///
/// The contribution is evaluated twice, from the two completed polygons and from the
/// edge expansion, and the two must agree.
pub fn component_defect(w: &ComponentView<'_>, alpha0: &Rat) -> Result<ComponentDefect> {
    let faces = w.component.kfaces();
    let (lp, lm, big_p) = (w.ell_plus, w.ell_minus, w.big_p);
    let Face { p: p1, q: q1, .. } = faces[0];
    if lm < 1 || lp + lm < 1 {
        return Err(Error::NotNormalForm(format!("component at {} has ℓ⁻ = {lm}", w.attach.id)));
    }
    let mut plus = vec![Face::new(1, 1, lp)];
    plus.extend(faces.iter().copied());
    let minus = [Face::new(1, 1, lp), Face::new(big_p, 1, lm)];
    let tp = nd_terms(&plus, 1);
    let tm = nd_terms(&minus, 1);
    let alpha_minus = Rat::one() - Rat::new(2, lp + lm);
    let alpha_plus = Rat::one() - Rat::new(p1 + q1, p1 * lm + q1 * lp);
    let mu = milnor_formal(&plus) - milnor_formal(&minus);
    let contribution = &tp.defect - &tm.defect + Rat::from_i128(mu) * (&alpha_minus - alpha0);

    let r = faces.len();
    let n: Vec<i64> = (0..r).map(|t| faces[t..].iter().map(|f| f.q * f.k).sum()).collect();
    let d0 = p1 - big_p * q1;
    let g = lp.gcd(&lm);
    let e0 = Rat::new(g * g - lm, (q1 * lp + p1 * lm) * (lp + big_p * lm))
        - Rat::new(lm - 1, q1) * (Rat::from_int(lm - 1) - Rat::from_int(lm) * alpha0);
    let mut edge_terms = vec![EdgeTerm { a: w.attach.id.clone(), b: w.component.nodes[0].id.clone(), e: e0, delta: d0 }];
    let mut mu_expansion = Rat::new(lm * (lm - 1), q1) * Rat::from_int(d0);
    for t in 1..r {
        let edge = &tp.edges[t];
        let et = edge.e.clone().ok_or_else(|| Error::Inconsistency("parallel faces inside a component".into()))?;
        let factor = Rat::new(n[t] * (n[t] - 1), faces[t - 1].q * faces[t].q);
        mu_expansion += &factor * Rat::from_int(edge.delta);
        edge_terms.push(EdgeTerm {
            a: w.component.nodes[t - 1].id.clone(),
            b: w.component.nodes[t].id.clone(),
            e: et + factor * (alpha0 - &alpha_plus),
            delta: edge.delta,
        });
    }
    let expanded = -edge_terms.iter().map(|t| &t.e * Rat::from_int(t.delta)).sum::<Rat>();
    if expanded != contribution {
        return Err(Error::Inconsistency(format!(
            "component at {}: edge expansion {expanded} differs from {contribution}",
            w.attach.id
        )));
    }
    let c0_plus = Rat::new(q1 - p1, (lp + lm) * (q1 * lp + p1 * lm));
    Ok(ComponentDefect { contribution, edge_terms, mu, mu_expansion, alpha_plus, alpha_minus, c0_plus })
}

/// The defect `6S − μα_μ` of a diagram, assembled from the root polygon and every
/// splice component after moving the maximal spectral value onto the root polygon.
pub fn global_defect(d: &Diagram) -> Result<DefectReport> {
    let (c, _) = Component::recognize(d)?.normalize_max()?;
    global_defect_of(&c)
}

/// [`global_defect`] of a component tree already in maximal normal form.
pub fn global_defect_of(c: &Component) -> Result<DefectReport> {
    let faces = c.kfaces();
    let i0 = i0_of_faces(&faces).ok_or_else(|| Error::NotNormalForm("root polygon misses (1, 1)".into()))?;
    let alpha0 = face_virtual_value(&faces, i0);
    let root = nd_terms(&faces, i0);
    let mut defect = root.defect;
    let mut mu = milnor_formal(&faces);
    let mut edge_terms = Vec::new();
    for (i, e) in root.edges.iter().enumerate() {
        let val = e.e.clone().ok_or_else(|| Error::InvalidPolygon("parallel consecutive faces".into()))?;
        edge_terms.push(EdgeTerm { a: c.nodes[i].id.clone(), b: c.nodes[i + 1].id.clone(), e: val, delta: e.delta });
    }
    for w in c.components() {
        let cd = component_defect(&w, &alpha0)?;
        defect += &cd.contribution;
        mu += cd.mu;
        edge_terms.extend(cd.edge_terms);
    }
    let mu = i64::try_from(mu).map_err(|_| Error::Overflow("Milnor number"))?;
    if mu == 0 {
        return Err(Error::EmptySpectrum);
    }
    Ok(DefectReport::assemble(defect, edge_terms, mu, alpha0))
}

/// The variance bound read off the spectrum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HertlingVerdict {
    pub variance: Rat,
    pub bound: Rat,
    pub verdict: Verdict,
}

/// Compares `V` with `(α_μ − α_1)/12` on the spectrum and cross-checks the sign of the
/// global defect. A violated bound is an inconsistency.
pub fn hertling_verdict(d: &Diagram) -> Result<HertlingVerdict> {
    let sp = spectrum(d)?;
    let v = variance(&sp)?;
    let (max, min) = (sp.max().ok_or(Error::EmptySpectrum)?, sp.min().ok_or(Error::EmptySpectrum)?);
    let bound = (max - min) / Rat::from_int(12);
    if v > bound {
        return Err(Error::Inconsistency(format!("variance {v} exceeds the bound {bound}")));
    }
    let report = global_defect(d)?;
    if report.defect.is_positive() {
        return Err(Error::Inconsistency(format!("positive defect {}", report.defect)));
    }
    let verdict = if v == bound { Verdict::Equality } else { Verdict::Strict };
    if verdict != report.verdict {
        return Err(Error::Inconsistency("spectrum and defect disagree on equality".into()));
    }
    Ok(HertlingVerdict { variance: v, bound, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brieskorn_variance() {
        let sp = spectrum(&Diagram::brieskorn(2, 3)).unwrap();
        assert_eq!(variance(&sp).unwrap(), Rat::new(1, 36));
        let h = hertling_verdict(&Diagram::brieskorn(2, 3)).unwrap();
        assert_eq!((h.bound, h.verdict), (Rat::new(1, 36), Verdict::Equality));
    }

    #[test]
    fn two_face_anchors() {
        let r = nd_defect(&Polygon::from_triples(&[(1, 2, 2), (2, 1, 2)]).unwrap()).unwrap();
        assert_eq!(r.defect, Rat::new(-1, 6));
        assert_eq!((r.edge_terms[0].e.clone(), r.edge_terms[0].delta), (Rat::new(1, 18), 3));
        assert_eq!((r.mu, r.alpha_max.clone()), (13, Rat::new(1, 2)));
        assert_eq!(r.variance, Rat::new(19, 234));
        assert_eq!(r.verdict, Verdict::Strict);
        let r = nd_defect(&Polygon::from_triples(&[(1, 2, 2), (3, 1, 1)]).unwrap()).unwrap();
        assert!(r.defect.is_zero());
        assert!(r.edge_terms[0].e.is_zero());
        assert_eq!(r.verdict, Verdict::Equality);
    }

    #[test]
    fn empty_spectrum_has_no_variance() {
        assert_eq!(variance(&SpecBag::new()), Err(Error::EmptySpectrum));
    }
}
