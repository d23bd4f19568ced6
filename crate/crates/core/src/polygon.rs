use std::collections::HashMap;

use num_integer::Integer;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::diagram::{Arrow, Diagram, Edge};
use crate::error::{Error, Result};
use crate::par::{map_collect, Exec};
use crate::rational::{Rat, SpecBag};

/// A face of a Newton polygon: primitive direction `(p, q)` repeated `k` times.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub p: i64,
    pub q: i64,
    pub k: i64,
}

impl Face {
    pub fn new(p: i64, q: i64, k: i64) -> Face {
        Face { p, q, k }
    }
}

impl Serialize for Face {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.p, self.q, self.k].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Face {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Face, D::Error> {
        let v: Vec<i64> = Vec::deserialize(d)?;
        match v.as_slice() {
            &[p, q, k] => Ok(Face { p, q, k }),
            _ => Err(D::Error::custom(format!("a face is [p, q, k], got {} entries", v.len()))),
        }
    }
}

/// A commode Newton polygon given by its faces in order of increasing slope `p/q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Polygon {
    faces: Vec<Face>,
}

/// Either serialized form of a polygon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolygonSpec {
    Faces { faces: Vec<Face> },
    Vertices { vertices: Vec<(i64, i64)> },
}

impl PolygonSpec {
    pub fn into_polygon(self) -> Result<Polygon> {
        match self {
            PolygonSpec::Faces { faces } => Polygon::new(faces),
            PolygonSpec::Vertices { vertices } => Polygon::from_vertices(&vertices),
        }
    }
}

impl<'de> Deserialize<'de> for Polygon {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Polygon, D::Error> {
        PolygonSpec::deserialize(d)?.into_polygon().map_err(D::Error::custom)
    }
}

/// Vertices `X_0, …, X_r` of a face list, without validity checks.
pub fn face_vertices(faces: &[Face]) -> Vec<(i128, i128)> {
    let r = faces.len();
    let mut m = vec![0i128; r + 1];
    let mut n = vec![0i128; r + 1];
    for i in 1..=r {
        m[i] = m[i - 1] + (faces[i - 1].p * faces[i - 1].k) as i128;
    }
    for i in (0..r).rev() {
        n[i] = n[i + 1] + (faces[i].q * faces[i].k) as i128;
    }
    m.into_iter().zip(n).collect()
}

/// Vertices padded with the sentinels `X_{−1} = X_{r+1} = (1, 1)`; index `i + 1` holds `X_i`.
fn padded_vertices(faces: &[Face]) -> Vec<(i128, i128)> {
    let mut out = vec![(1, 1)];
    out.extend(face_vertices(faces));
    out.push((1, 1));
    out
}

/// `A_{i,j} = m_i n_j − m_j n_i` on padded vertices.
fn pairing(x: &[(i128, i128)], i: i64, j: i64) -> i128 {
    let (a, b) = (x[(i + 1) as usize], x[(j + 1) as usize]);
    a.0 * b.1 - b.0 * a.1
}

/// `Σ_{k=−1}^{r} A_{k+1,k} + 1` for any face list, including degenerate ones.
pub fn milnor_formal(faces: &[Face]) -> i128 {
    let x = padded_vertices(faces);
    let r = faces.len() as i64;
    (-1..=r).map(|k| pairing(&x, k + 1, k)).sum::<i128>() + 1
}

/// `1 − φ_i(1, 1)` for face `i` (1-based) of any face list.
pub fn face_virtual_value(faces: &[Face], i: usize) -> Rat {
    let x = face_vertices(faces);
    let f = faces[i - 1];
    let (m, n) = x[i];
    Rat::one() - Rat::new_i128((f.p + f.q) as i128, f.q as i128 * m + f.p as i128 * n)
}

/// Barycentric coordinates of `(1, 1)` in the basis `X_{i−1}, X_i`.
fn unit_coordinates(x: &[(i128, i128)], i: usize) -> Option<(Rat, Rat)> {
    let ((m0, n0), (m1, n1)) = (x[i - 1], x[i]);
    let det = m0 * n1 - m1 * n0;
    if det == 0 {
        return None;
    }
    Some((Rat::new_i128(n1 - m1, det), Rat::new_i128(m0 - n0, det)))
}

/// Face whose half-open parallelogram `{λ_0 X_{i−1} + λ_1 X_i : 0 ≤ λ < 1}` contains `(1, 1)`,
/// falling back to the closed parallelogram. Works on any face list.
pub fn i0_of_faces(faces: &[Face]) -> Option<usize> {
    let x = face_vertices(faces);
    let zero = Rat::zero();
    let one = Rat::one();
    let coords: Vec<Option<(Rat, Rat)>> = (1..=faces.len()).map(|i| unit_coordinates(&x, i)).collect();
    let half_open = |l: &Rat| *l >= zero && *l < one;
    let closed = |l: &Rat| *l >= zero && *l <= one;
    for (i, c) in coords.iter().enumerate() {
        if let Some((l0, l1)) = c {
            if half_open(l0) && half_open(l1) {
                return Some(i + 1);
            }
        }
    }
    for (i, c) in coords.iter().enumerate() {
        if let Some((l0, l1)) = c {
            if closed(l0) && closed(l1) {
                return Some(i + 1);
            }
        }
    }
    None
}

/// Per-edge data of the non-degenerate defect formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NdEdge {
    /// `E_i = −F_i C_i / Δ_i`, absent when `Δ_i = 0`.
    pub e: Option<Rat>,
    pub delta: i64,
    pub f: i128,
    pub c: Rat,
}

/// The defect `Σ F_i C_i` together with its edge data, split at face `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NdTerms {
    pub defect: Rat,
    pub alpha: Rat,
    pub edges: Vec<NdEdge>,
}

/// Evaluates the edge sum of the non-degenerate defect with split index `j` (1-based).
///
/// For `i < j`, `F_i = (Σ_{k=−1}^{i−1} A_{k+1,k})(n_i − m_i) + d_i² − m_i`; otherwise
/// `F_i = (Σ_{k=i}^{r} A_{k+1,k})(m_i − n_i) + d_i² − n_i`. `C_i` is
/// `−Δ_i / ((p_i n_i + q_i m_i)(p_{i+1} n_i + q_{i+1} m_i))`.
pub fn nd_terms(faces: &[Face], j: usize) -> NdTerms {
    let x = padded_vertices(faces);
    let r = faces.len() as i64;
    let diag: Vec<i128> = (-1..=r).map(|k| pairing(&x, k + 1, k)).collect();
    let diag_sum = |from: i64, to: i64| -> i128 { (from..=to).map(|k| diag[(k + 1) as usize]).sum() };
    let mut defect = Rat::zero();
    let mut edges = Vec::new();
    for i in 1..r {
        let (m, n) = x[(i + 1) as usize];
        let d = m.gcd(&n);
        let (f0, f1) = (faces[(i - 1) as usize], faces[i as usize]);
        let delta = f1.p as i128 * f0.q as i128 - f0.p as i128 * f1.q as i128;
        let c = -Rat::new_i128(
            delta,
            (f0.p as i128 * n + f0.q as i128 * m) * (f1.p as i128 * n + f1.q as i128 * m),
        );
        let f = if (i as usize) < j {
            diag_sum(-1, i - 1) * (n - m) + d * d - m
        } else {
            diag_sum(i, r) * (m - n) + d * d - n
        };
        let fc = Rat::from_i128(f) * &c;
        let e = (delta != 0).then(|| -(&fc) / Rat::from_i128(delta));
        defect += &fc;
        edges.push(NdEdge { e, delta: delta as i64, f, c });
    }
    NdTerms { defect, alpha: face_virtual_value(faces, j), edges }
}

impl Polygon {
    /// Checks `k ≥ 1`, `gcd(p, q) = 1` and `Δ_i = p_{i+1} q_i − p_i q_{i+1} > 0`.
    pub fn new(faces: Vec<Face>) -> Result<Polygon> {
        if faces.is_empty() {
            return Err(Error::InvalidPolygon("a polygon needs at least one face".into()));
        }
        for (i, f) in faces.iter().enumerate() {
            if f.p < 1 || f.q < 1 || f.k < 1 {
                return Err(Error::InvalidPolygon(format!("face {} = {:?} has a non-positive entry", i + 1, f)));
            }
            if f.p.gcd(&f.q) != 1 {
                return Err(Error::InvalidPolygon(format!("face {} has non-coprime direction ({}, {})", i + 1, f.p, f.q)));
            }
        }
        for i in 1..faces.len() {
            let (a, b) = (faces[i - 1], faces[i]);
            if b.p * a.q - a.p * b.q <= 0 {
                return Err(Error::InvalidPolygon(format!("faces {} and {} are not strictly convex", i, i + 1)));
            }
        }
        let total_m: i128 = faces.iter().map(|f| (f.p * f.k) as i128).sum();
        let total_n: i128 = faces.iter().map(|f| (f.q * f.k) as i128).sum();
        if total_m > i32::MAX as i128 || total_n > i32::MAX as i128 {
            return Err(Error::Overflow("polygon vertices"));
        }
        Ok(Polygon { faces })
    }

    pub fn from_triples(faces: &[(i64, i64, i64)]) -> Result<Polygon> {
        Polygon::new(faces.iter().map(|&(p, q, k)| Face::new(p, q, k)).collect())
    }

    /// Recovers the faces from vertices `X_0 = (0, n_0), …, X_r = (m_r, 0)`.
    pub fn from_vertices(points: &[(i64, i64)]) -> Result<Polygon> {
        if points.len() < 2 {
            return Err(Error::InvalidPolygon("at least two vertices are needed".into()));
        }
        if points[0].0 != 0 || points[points.len() - 1].1 != 0 {
            return Err(Error::InvalidPolygon("the first vertex must lie on the n-axis and the last on the m-axis".into()));
        }
        let mut faces = Vec::with_capacity(points.len() - 1);
        for w in points.windows(2) {
            let (dm, dn) = (w[1].0 - w[0].0, w[0].1 - w[1].1);
            if dm <= 0 || dn <= 0 {
                return Err(Error::InvalidPolygon(format!("vertices {:?} and {:?} are not monotone", w[0], w[1])));
            }
            let k = dm.gcd(&dn);
            faces.push(Face::new(dm / k, dn / k, k));
        }
        Polygon::new(faces)
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Vertices `X_0, …, X_r`.
    pub fn vertices(&self) -> Vec<(i64, i64)> {
        face_vertices(&self.faces).into_iter().map(|(m, n)| (m as i64, n as i64)).collect()
    }

    /// `Δ_i = p_{i+1} q_i − p_i q_{i+1}` for `i = 1, …, r − 1`.
    pub fn deltas(&self) -> Vec<i64> {
        self.faces.windows(2).map(|w| w[1].p * w[0].q - w[0].p * w[1].q).collect()
    }

    /// The chain diagram: a head leaf, nodes `n1, …, nr`, a tail leaf, and `k_i`
    /// unit arrows at node `i`. Rooted at `n1`.
    pub fn to_diagram(&self) -> Diagram {
        let r = self.faces.len();
        let node = |i: usize| format!("n{i}");
        let mut vertices = vec!["h".to_string()];
        vertices.extend((1..=r).map(node));
        vertices.push("t".to_string());
        let mut edges = vec![Edge::new("h", node(1), 1, self.faces[0].p)];
        for i in 1..r {
            edges.push(Edge::new(node(i), node(i + 1), self.faces[i - 1].q, self.faces[i].p));
        }
        edges.push(Edge::new(node(r), "t", self.faces[r - 1].q, 1));
        let arrows = self
            .faces
            .iter()
            .enumerate()
            .flat_map(|(i, f)| (0..f.k).map(move |_| Arrow::new(node(i + 1), 1, 1)))
            .collect();
        Diagram::new(vertices, edges, arrows, node(1))
    }

    /// `Σ_{k=−1}^{r} A_{k+1,k} + 1` with sentinel vertices `(1, 1)`.
    pub fn milnor(&self) -> i64 {
        milnor_formal(&self.faces) as i64
    }

    /// `2·Area − m_r − n_0 + 1` of the region under the polygon.
    pub fn kouchnirenko(&self) -> i64 {
        let x = face_vertices(&self.faces);
        let r = self.faces.len();
        let twice_area: i128 = (1..=r).map(|i| x[i].0 * x[i - 1].1 - x[i - 1].0 * x[i].1).sum();
        (twice_area - x[r].0 - x[0].1 + 1) as i64
    }

    /// `φ_i(x, y) = (q_i x + p_i y)/(q_i m_i + p_i n_i)` for face `i` (1-based).
    pub fn phi(&self, i: usize, x: i64, y: i64) -> Rat {
        let f = self.faces[i - 1];
        let (m, n) = face_vertices(&self.faces)[i];
        Rat::new_i128((f.q * x + f.p * y) as i128, f.q as i128 * m + f.p as i128 * n)
    }

    /// Spectrum read off lattice points: open parallelograms spanned by consecutive
    /// vertices and the open segments `]0, 2X_i[` at interior vertices.
    pub fn lattice_spectrum(&self) -> SpecBag {
        self.lattice_spectrum_with(Exec::default())
    }

    pub fn lattice_spectrum_with(&self, exec: Exec) -> SpecBag {
        let x = face_vertices(&self.faces);
        let r = self.faces.len();
        let parts = map_collect((1..=r).collect(), exec, |i| face_lattice_counts(&self.faces[i - 1], x[i - 1], x[i], i < r));
        let mut acc: HashMap<(i64, i64), i64> = HashMap::new();
        for part in parts {
            for (k, v) in part {
                *acc.entry(k).or_insert(0) += v;
            }
        }
        acc.into_iter().map(|((n, d), v)| (Rat::new(n, d), v)).collect()
    }

    /// Face index `i_0` (1-based) whose half-open parallelogram contains `(1, 1)`.
    pub fn i0(&self) -> Result<usize> {
        i0_of_faces(&self.faces).ok_or_else(|| Error::InvalidPolygon("no face parallelogram contains (1, 1)".into()))
    }

    /// `α_μ = 1 − φ_{i_0}(1, 1)`.
    pub fn alpha_max(&self) -> Result<Rat> {
        Ok(face_virtual_value(&self.faces, self.i0()?))
    }

    /// The mirror polygon under `m ↔ n`.
    pub fn mirror(&self) -> Polygon {
        Polygon { faces: self.faces.iter().rev().map(|f| Face::new(f.q, f.p, f.k)).collect() }
    }
}

/// Smallest integer strictly greater than `a/b` (`b > 0`).
fn above(a: i128, b: i128) -> i128 {
    Integer::div_floor(&a, &b) + 1
}

/// Largest integer strictly smaller than `a/b` (`b > 0`).
fn below(a: i128, b: i128) -> i128 {
    -Integer::div_floor(&-a, &b) - 1
}

fn reduced(num: i128, den: i128) -> (i64, i64) {
    let g = num.gcd(&den);
    ((num / g) as i64, (den / g) as i64)
}

/// Values `1 − φ` of the lattice points attached to one face, keyed by reduced fraction.
fn face_lattice_counts(f: &Face, x0: (i128, i128), x1: (i128, i128), interior_end: bool) -> HashMap<(i64, i64), i64> {
    let (m0, n0) = x0;
    let (m1, n1) = x1;
    let (p, q) = (f.p as i128, f.q as i128);
    let big_n = q * m1 + p * n1;
    let dd = m1 * n0 - m0 * n1;
    let mut out: HashMap<(i64, i64), i64> = HashMap::new();
    for y in 1..(n0 + n1) {
        // (x, y) = λ0 X0 + λ1 X1 with λ0 = (y m1 − x n1)/D and λ1 = (x n0 − y m0)/D.
        let mut lo = above(m0 * y, n0);
        let mut hi = below(m0 * y + dd, n0);
        if n1 > 0 {
            lo = lo.max(above(y * m1 - dd, n1));
            hi = hi.min(below(y * m1, n1));
        } else if !(0 < y * m1 && y * m1 < dd) {
            continue;
        }
        for x in lo.max(1)..=hi {
            let key = reduced(big_n - (q * x + p * y), big_n);
            *out.entry(key).or_insert(0) += 1;
        }
    }
    if interior_end {
        let g = m1.gcd(&n1);
        for t in 1..2 * g {
            let key = reduced(g - t, g);
            *out.entry(key).or_insert(0) += 1;
        }
    }
    out
}

/// Number of integers in the open interval `(x, y)`.
pub fn count_open_segment(x: &Rat, y: &Rat) -> Result<i64> {
    if x >= y {
        return Err(Error::InvalidArgument(format!("empty interval ({x}, {y})")));
    }
    let n = y.ceil() - x.floor() - 1i32;
    i64::try_from(n).map_err(|_| Error::Overflow("segment count"))
}

/// `y − x + {x} + {−y} − 1`, the count of [`count_open_segment`] for non-integer endpoints.
pub fn open_segment_closed_form(x: &Rat, y: &Rat) -> Rat {
    y - x + x.frac() + (-y).frac() - Rat::one()
}

/// Primitive direction `(p, q)`, repetition `k` and denominator `N = q m_1 + p n_1`
/// of the face joining `X0` to `X1`.
fn cone_face(x0: (i64, i64), x1: (i64, i64)) -> Result<(i64, i64, i64, i64)> {
    let (dm, dn) = (x1.0 - x0.0, x0.1 - x1.1);
    if dm <= 0 || dn <= 0 {
        return Err(Error::InvalidArgument("cone generators must satisfy m0 < m1 and n0 > n1".into()));
    }
    let k = dm.gcd(&dn);
    let (p, q) = (dm / k, dn / k);
    Ok((p, q, k, q * x1.0 + p * x1.1))
}

/// Lattice points of `ℕ²` on the line `q x + p y = s` strictly inside the open cone
/// spanned by `X0` and `X1`, where `(p, q)` is the primitive direction of `X1 − X0`.
pub fn count_cone_fiber(x0: (i64, i64), x1: (i64, i64), s: i64) -> Result<i64> {
    let det = x0.0 as i128 * x1.1 as i128 - x1.0 as i128 * x0.1 as i128;
    if det == 0 {
        return Err(Error::InvalidArgument("cone generators are linearly dependent".into()));
    }
    let (p, q, _, _) = cone_face(x0, x1)?;
    if s <= 0 {
        return Ok(0);
    }
    let mut count = 0;
    for x in 0..=s / q {
        let rest = s - q * x;
        if rest % p != 0 {
            continue;
        }
        let y = rest / p;
        let a = x as i128 * x1.1 as i128 - y as i128 * x1.0 as i128;
        let b = x0.0 as i128 * y as i128 - x0.1 as i128 * x as i128;
        if a.signum() == det.signum() && b.signum() == det.signum() {
            count += 1;
        }
    }
    Ok(count)
}

/// Closed form of [`count_cone_fiber`]: `−1 + k s/N + {s(m0 v − n0 u)/N} + {s(u n1 − v m1)/N}`
/// with `q u + p v = 1`. Agrees with the count whenever both fractional arguments are non-integers.
pub fn cone_fiber_closed_form(x0: (i64, i64), x1: (i64, i64), s: i64) -> Result<Rat> {
    let (p, q, k, big_n) = cone_face(x0, x1)?;
    let g = q.extended_gcd(&p);
    let (u, v) = (g.x, g.y);
    let lower = Rat::new_i128(s as i128 * (x0.0 as i128 * v as i128 - x0.1 as i128 * u as i128), big_n as i128);
    let upper = Rat::new_i128(s as i128 * (u as i128 * x1.1 as i128 - v as i128 * x1.0 as i128), big_n as i128);
    Ok(Rat::new_i128(k as i128 * s as i128, big_n as i128) + lower.frac() + upper.frac() - Rat::one())
}

/// Endpoints of the integer interval counted by [`count_cone_fiber`].
pub fn cone_fiber_endpoints(x0: (i64, i64), x1: (i64, i64), s: i64) -> Result<(Rat, Rat)> {
    let (p, q, _, big_n) = cone_face(x0, x1)?;
    let g = q.extended_gcd(&p);
    let (u, v) = (g.x as i128, g.y as i128);
    let at = |x: (i64, i64)| Rat::new_i128(s as i128 * (v * x.0 as i128 - u * x.1 as i128), big_n as i128);
    Ok((at(x0), at(x1)))
}

/// Parameters of a brick diagram: a node with weights `p`, `q` and arrows `ℓ_1, …, ℓ_a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrickSpec {
    pub m: i64,
    pub n: i64,
    pub p: i64,
    pub q: i64,
    pub l: Vec<i64>,
}

impl BrickSpec {
    pub fn ell(&self) -> i64 {
        self.l.iter().sum()
    }

    pub fn check(&self) -> Result<()> {
        self.check_shape()?;
        if self.m - self.p * self.ell() <= 0 {
            return Err(Error::InvalidBrick(format!("m − pℓ = {} must be positive", self.m - self.p * self.ell())));
        }
        Ok(())
    }

    fn check_shape(&self) -> Result<()> {
        if self.m < 0 || self.n < 0 {
            return Err(Error::InvalidBrick("m and n must be non-negative".into()));
        }
        if self.p < 1 || self.q < 1 || self.p.gcd(&self.q) != 1 {
            return Err(Error::InvalidBrick(format!("({}, {}) is not a coprime positive pair", self.p, self.q)));
        }
        if self.l.is_empty() || self.l.iter().any(|&x| x < 1) {
            return Err(Error::InvalidBrick("arrow multiplicities must be positive and non-empty".into()));
        }
        Ok(())
    }

    /// The face data `(p, q, ℓ)` and its two vertices `(m − pℓ, n + qℓ)` and `(m, n)`.
    pub fn vertices(&self) -> ((i64, i64), (i64, i64)) {
        ((self.m - self.p * self.ell(), self.n + self.q * self.ell()), (self.m, self.n))
    }
}

fn brick_core(b: &BrickSpec) -> (Vec<String>, Vec<Edge>, Vec<Arrow>) {
    let mut vertices = vec!["v".to_string()];
    let mut edges = Vec::new();
    let mut arrows = vec![Arrow::new("v", b.p, b.m - b.p * b.ell())];
    if b.n > 0 {
        arrows.push(Arrow::new("v", b.q, b.n));
    } else {
        vertices.push("lq".into());
        edges.push(Edge::new("v", "lq", b.q, 1));
    }
    (vertices, edges, arrows)
}

/// Single node `v` carrying an arrow of weight `p` and multiplicity `m − pℓ`, an arrow
/// of weight `q` and multiplicity `n` (a leaf when `n = 0`) and unit-weight arrows `ℓ_j`.
pub fn brick_diagram(b: &BrickSpec) -> Result<Diagram> {
    b.check()?;
    let (vertices, edges, mut arrows) = brick_core(b);
    arrows.extend(b.l.iter().map(|&l| Arrow::new("v", 1, l)));
    Ok(Diagram::new(vertices, edges, arrows, "v"))
}

/// The brick with its arrows `ℓ_j` moved to a chain `w_1, …, w_a` hanging from `v`
/// through zero-determinant edges. It has the same spectrum as [`brick_diagram`].
pub fn separated_arrows_diagram(b: &BrickSpec) -> Result<Diagram> {
    b.check()?;
    let (mut vertices, mut edges, mut arrows) = brick_core(b);
    let mut prev = "v".to_string();
    for (j, &l) in b.l.iter().enumerate() {
        let w = format!("w{}", j + 1);
        vertices.push(w.clone());
        edges.push(Edge::new(prev.clone(), w.clone(), 1, b.p * b.q));
        arrows.push(Arrow::new(w.clone(), 1, l));
        prev = w;
    }
    vertices.push("z".into());
    edges.push(Edge::new(prev, "z", 1, 1));
    Ok(Diagram::new(vertices, edges, arrows, "v"))
}

/// `1 − (p + q)/(q m + p n)`.
///
/// Also accepted when `m = pℓ`, the case of a face ending on the n-axis.
pub fn virtual_value_of_brick(b: &BrickSpec) -> Result<Rat> {
    b.check_shape()?;
    if b.m - b.p * b.ell() < 0 {
        return Err(Error::InvalidBrick(format!("m − pℓ = {} must be non-negative", b.m - b.p * b.ell())));
    }
    Ok(Rat::one() - Rat::new(b.p + b.q, b.q * b.m + b.p * b.n))
}
