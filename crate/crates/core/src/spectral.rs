use std::collections::HashMap;

use num_integer::Integer;

use crate::diagram::{validate, Diagram, Topology};
use crate::error::{Error, Result};
use crate::par::{map_collect, Exec};
use crate::rational::{PairBag, Rat, SpecBag};

/// Accumulator of reduced `(numerator, denominator, weight)` triples with multiplicities.
#[derive(Default)]
struct Acc(Vec<(i64, i64, u8, i64)>);

impl Acc {
    fn add(&mut self, num: i64, den: i64, weight: u8, mult: i64) {
        if mult == 0 {
            return;
        }
        let g = num.gcd(&den);
        self.0.push((num / g, den / g, weight, mult));
    }

    fn merge(&mut self, other: Acc) {
        self.0.extend(other.0);
    }

    /// Adds `sign·Σ_{0<s<d} [(−s/d, 2) + (s/d, 0)]`.
    fn add_symmetric_block(&mut self, d: i64, sign: i64) {
        for s in 1..d {
            self.add(-s, d, 2, sign);
            self.add(s, d, 0, sign);
        }
    }

    fn into_bag(mut self) -> PairBag {
        self.0.sort_unstable_by_key(|&(n, d, w, _)| (d, n, w));
        let mut keys: Vec<(i64, i64, u8, i64)> = Vec::with_capacity(self.0.len());
        for (n, d, w, m) in self.0 {
            match keys.last_mut() {
                Some(last) if (last.0, last.1, last.2) == (n, d, w) => last.3 += m,
                _ => keys.push((n, d, w, m)),
            }
        }
        keys.retain(|k| k.3 != 0);
        keys.sort_unstable_by(|(n1, d1, w1, _), (n2, d2, w2, _)| {
            (*n1 as i128 * *d2 as i128).cmp(&(*n2 as i128 * *d1 as i128)).then(w1.cmp(w2))
        });
        PairBag::from_distinct(keys.into_iter().map(|(n, d, w, v)| (Rat::from_reduced(n, d), w, v)).collect())
    }
}

/// The three vertex contributions `a_v`, `b_v` and `c_v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexTerms {
    pub a: PairBag,
    pub b: PairBag,
    pub c: PairBag,
}

fn a_term(acc: &mut Acc, m: i64, r: i64, svals: &[i64]) {
    let mut groups: Vec<(i64, i64)> = Vec::new();
    for &s in svals {
        let g = s.rem_euclid(m);
        match groups.iter_mut().find(|(x, _)| *x == g) {
            Some((_, c)) => *c += 1,
            None => groups.push((g, 1)),
        }
    }
    let small = m < 1 << 30 && svals.len() < 1 << 20;
    for s in 1..m {
        let num: i128 = if small {
            if (s * r) % m == 0 {
                continue;
            }
            (-m + groups.iter().map(|&(g, c)| c * ((s * g) % m)).sum::<i64>()) as i128
        } else {
            let (s, m, r) = (s as i128, m as i128, r as i128);
            if (s * r) % m == 0 {
                continue;
            }
            -m + groups.iter().map(|&(g, c)| c as i128 * ((s * g as i128) % m)).sum::<i128>()
        };
        let coef = (num / m as i128) as i64;
        if coef != 0 {
            acc.add(s - m, m, 1, coef);
            acc.add(m - s, m, 1, coef);
        }
    }
}

/// `(m_v, r_v, d_v, s-values)` at a rupture vertex.
fn vertex_data(t: &Topology, v: usize) -> Result<(i64, i64, Option<i64>, Vec<i64>)> {
    let ld = t.local_data(v)?;
    let svals = ld.incidences.iter().map(|x| x.s).collect();
    let d_v = if v == t.root() { None } else { ld.d_v };
    Ok((ld.m_v, ld.r_v, d_v, svals))
}

fn vertex_acc(t: &Topology, v: usize) -> Result<Acc> {
    let (m, r, d_v, svals) = vertex_data(t, v)?;
    let mut acc = Acc::default();
    a_term(&mut acc, m, r, &svals);
    acc.add_symmetric_block(r, -1);
    if let Some(dv) = d_v {
        acc.add_symmetric_block(dv, 1);
    }
    Ok(acc)
}

/// The terms `a_v`, `b_v` and `c_v` of a rupture vertex; `c_v` is empty at the root.
pub fn vertex_terms(d: &Diagram, v: &str) -> Result<VertexTerms> {
    let t = Topology::new(d)?;
    let vi = t.vertex(v)?;
    if !t.is_rupture(vi) {
        return Err(Error::NotRupture(v.to_string()));
    }
    let (m, r, d_v, svals) = vertex_data(&t, vi)?;
    let mut a = Acc::default();
    a_term(&mut a, m, r, &svals);
    let mut b = Acc::default();
    b.add_symmetric_block(r, 1);
    let mut c = Acc::default();
    if let Some(dv) = d_v {
        c.add_symmetric_block(dv, 1);
    }
    Ok(VertexTerms { a: a.into_bag(), b: b.into_bag(), c: c.into_bag() })
}

/// The arrow contribution `Σ_{0<s<d_a} (−s/d_a, 2)`.
pub fn arrow_term(d: &Diagram, arrow: usize) -> Result<PairBag> {
    let t = Topology::new(d)?;
    if arrow >= t.arrow_count() {
        return Err(Error::UnknownArrow(arrow));
    }
    let da = t.arrow_gcd(arrow)?;
    Ok((1..da).map(|s| (Rat::new(-s, da), 2, 1)).collect())
}

fn assemble(t: &Topology, exec: Exec) -> Result<PairBag> {
    let rupture = t.rupture_vertices();
    if rupture.is_empty() {
        return Err(Error::NoRupture);
    }
    let parts = map_collect(rupture, exec, |v| vertex_acc(t, v));
    let mut acc = Acc::default();
    for part in parts {
        acc.merge(part?);
    }
    let mut cache: HashMap<(usize, i64, i64), i64> = HashMap::new();
    for a in 0..t.arrow_count() {
        let da = match cache.get(&t.arrow(a)) {
            Some(&da) => da,
            None => {
                let da = t.arrow_gcd(a)?;
                cache.insert(t.arrow(a), da);
                da
            }
        };
        for s in 1..da {
            acc.add(-s, da, 2, 1);
        }
    }
    acc.add(0, 1, 1, t.arrow_count() as i64 - 1);
    Ok(acc.into_bag())
}

/// Spectral pairs of a validated algebraic diagram rooted at a rupture vertex.
///
/// A negative multiplicity in the assembled result is reported as an inconsistency.
pub fn spectral_pairs(d: &Diagram) -> Result<PairBag> {
    spectral_pairs_with(d, Exec::default())
}

/// [`spectral_pairs`] with an explicit execution strategy.
pub fn spectral_pairs_with(d: &Diagram, exec: Exec) -> Result<PairBag> {
    validate(d).into_result()?;
    let t = Topology::new(d)?;
    if !t.is_rupture(t.root()) {
        return Err(Error::NotRupture(d.root.clone()));
    }
    let out = assemble(&t, exec)?;
    let negative = out.negative_entries();
    if !negative.is_empty() {
        let shown: Vec<String> = negative.iter().map(|(k, m)| format!("({}, {}): {}", k.alpha, k.weight, m)).collect();
        return Err(Error::Inconsistency(format!(
            "negative spectral pair multiplicities {} for diagram {:?}",
            shown.join(", "),
            d
        )));
    }
    Ok(out)
}

/// The same assembly as [`spectral_pairs`] for any structurally valid diagram,
/// without determinant or sign checks. Multiplicities may come out negative.
pub fn spectral_pairs_signed(d: &Diagram, exec: Exec) -> Result<PairBag> {
    let t = Topology::new(d)?;
    assemble(&t, exec)
}

/// Projection of [`spectral_pairs`] onto spectral values.
pub fn spectrum(d: &Diagram) -> Result<SpecBag> {
    Ok(spectral_pairs(d)?.project())
}

/// `−(0,1) + Σ_{0<s<d} [(s/d, 0) − (−s/d, 2)]` with `d = gcd(m1, m2)`.
pub fn splice_correction(m1: i64, m2: i64) -> PairBag {
    let d = m1.gcd(&m2);
    let mut acc = Acc::default();
    acc.add(0, 1, 1, -1);
    for s in 1..d {
        acc.add(s, d, 0, 1);
        acc.add(-s, d, 2, -1);
    }
    acc.into_bag()
}
