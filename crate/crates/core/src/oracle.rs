use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decomposition::decompose_component;
use crate::diagram::{cut, validate, Diagram, Topology};
use crate::error::{Error, Result};
use crate::normal_form::{Component, Node};
use crate::polygon::{Face, Polygon};
use crate::rational::{moment, Rat, SpecBag};
use crate::spectral::spectrum;

/// `{i/p + j/q − 1 : 0 < i < p, 0 < j < q}`.
pub fn brieskorn_spectrum(p: i64, q: i64) -> Result<SpecBag> {
    if p < 2 || q < 2 || p.gcd(&q) != 1 {
        return Err(Error::InvalidArgument(format!("Brieskorn exponents ({p}, {q}) must be coprime and at least 2")));
    }
    let mut out = SpecBag::new();
    for i in 1..p {
        for j in 1..q {
            out.insert(Rat::new(i * q + j * p - p * q, p * q), 1);
        }
    }
    Ok(out)
}

/// `6·moment₂ − moment₀·max`, read directly off the spectrum.
pub fn naive_defect(d: &Diagram) -> Result<Rat> {
    naive_defect_of(&spectrum(d)?)
}

/// [`naive_defect`] of a given spectrum.
pub fn naive_defect_of(sp: &SpecBag) -> Result<Rat> {
    let max = sp.max().ok_or(Error::EmptySpectrum)?;
    Ok(Rat::from_int(6) * moment(sp, 2) - moment(sp, 0) * max)
}

/// Size limits for the random generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub max_faces: i64,
    pub max_entry: i64,
}

impl Default for Bounds {
    fn default() -> Bounds {
        Bounds { max_faces: 4, max_entry: 6 }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn by_slope(faces: &mut Vec<(i64, i64)>) {
    faces.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
    faces.dedup();
}

fn draw_polygon_faces(rng: &mut ChaCha8Rng, max_faces: i64, max_entry: i64) -> Vec<(i64, i64)> {
    loop {
        let r = rng.gen_range(1..=max_faces.max(1));
        let mut faces = Vec::new();
        for _ in 0..r {
            let p = rng.gen_range(1..=max_entry.max(1));
            let q = rng.gen_range(1..=max_entry.max(1));
            if p.gcd(&q) == 1 {
                faces.push((p, q));
            }
        }
        by_slope(&mut faces);
        if !faces.is_empty() {
            return faces;
        }
    }
}

/// Commode polygon with at most `max_faces` faces, direction entries in `1..=max_entry`
/// and `k` in `1..=3`. Deterministic in `seed`.
pub fn random_polygon(seed: u64, max_faces: i64, max_entry: i64) -> Polygon {
    random_polygon_from(&mut rng(seed), max_faces, max_entry)
}

fn random_polygon_from(rng: &mut ChaCha8Rng, max_faces: i64, max_entry: i64) -> Polygon {
    let faces = draw_polygon_faces(rng, max_faces, max_entry);
    let faces = faces.into_iter().map(|(p, q)| Face::new(p, q, rng.gen_range(1..=3))).collect();
    Polygon::new(faces).expect("slope-sorted coprime faces form a polygon")
}

/// Faces of a child component hanging from a node with `p·q = big_p`: every face has
/// `p > big_p·q`, which makes the joining edge determinant positive.
fn draw_child_faces(rng: &mut ChaCha8Rng, big_p: i64, max_entry: i64) -> Vec<(i64, i64)> {
    loop {
        let r = rng.gen_range(1..=3);
        let mut faces = Vec::new();
        for _ in 0..r {
            let q = rng.gen_range(1..=3);
            let p = rng.gen_range(big_p * q + 1..=big_p * q + max_entry.max(1));
            if p.gcd(&q) == 1 {
                faces.push((p, q));
            }
        }
        by_slope(&mut faces);
        if !faces.is_empty() {
            return faces;
        }
    }
}

struct Gen {
    rng: ChaCha8Rng,
    counter: usize,
    bounds: Bounds,
}

impl Gen {
    fn fresh(&mut self, prefix: &str) -> String {
        self.counter += 1;
        format!("{prefix}{}", self.counter)
    }

    fn component(&mut self, big_p: Option<i64>, depth: u32) -> Component {
        let faces = match big_p {
            None => draw_polygon_faces(&mut self.rng, self.bounds.max_faces.min(3), self.bounds.max_entry),
            Some(big_p) => draw_child_faces(&mut self.rng, big_p, self.bounds.max_entry),
        };
        let head = big_p.is_none().then(|| self.fresh("l"));
        let mut nodes = Vec::new();
        let mut children = Vec::new();
        for (i, &(p, q)) in faces.iter().enumerate() {
            let id = self.fresh("n");
            let nchild = if depth > 0 && self.rng.gen_bool(0.5) { self.rng.gen_range(1..=2) } else { 0 };
            let low = if nchild > 0 && p > 1 && q > 1 { 0 } else { 1 };
            let arrows = self.rng.gen_range(low..=2);
            nodes.push(Node { id, p, q, arrows, extra_leaves: Vec::new() });
            for _ in 0..nchild {
                children.push((i, self.component(Some(p * q), depth - 1)));
            }
        }
        let tail = Some(self.fresh("l"));
        Component { nodes, children, head, tail }
    }
}

/// Random component tree of depth at most `max_depth`: a root polygon chain with
/// child components attached at its nodes, recursively.
pub fn random_component(seed: u64, max_depth: u32, bounds: Bounds) -> Component {
    let mut g = Gen { rng: rng(seed), counter: 0, bounds };
    loop {
        g.counter = 0;
        let c = g.component(None, max_depth);
        let v = validate(&c.build());
        if v.is_valid() && v.algebraic {
            return c;
        }
    }
}

/// Milnor number of a component tree read off its polygon decomposition, used to
/// bound corpus sizes without computing a spectrum.
pub fn component_milnor(c: &Component) -> Result<i64> {
    Ok(decompose_component(c)?.terms().map(|(p, k)| k * p.milnor()).sum())
}

/// [`random_component`] as a diagram. Depth 0 gives a polygon diagram.
pub fn random_diagram(seed: u64, max_depth: u32, bounds: Bounds) -> Diagram {
    random_component(seed, max_depth, bounds).build()
}

/// A diagram together with the two pieces it splits into along one edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpliceInstance {
    pub whole: Diagram,
    pub edge: usize,
    pub first: Diagram,
    pub first_arrow: usize,
    pub second: Diagram,
    pub second_arrow: usize,
}

/// Cuts a random diagram along a random edge joining two rupture vertices, both new
/// arrows having positive multiplicity. Splicing the pieces along their new arrows gives
/// the diagram back.
pub fn random_splice(seed: u64, max_depth: u32, bounds: Bounds) -> SpliceInstance {
    let mut r = rng(seed);
    loop {
        let whole = random_diagram(r.gen(), max_depth, bounds);
        let t = Topology::new(&whole).expect("generated diagrams are valid");
        let internal: Vec<usize> = (0..t.edge_count())
            .filter(|&e| {
                let (a, b) = t.edge_ends(e);
                t.is_rupture(a) && t.is_rupture(b) && t.flow_through(a, e) > 0 && t.flow_through(b, e) > 0
            })
            .collect();
        if internal.is_empty() {
            continue;
        }
        let edge = internal[r.gen_range(0..internal.len())];
        let halves = cut(&whole, edge).expect("edge exists");
        let first_arrow = halves.first.arrows.len() - 1;
        let second_arrow = halves.second.arrows.len() - 1;
        return SpliceInstance { whole, edge, first: halves.first, first_arrow, second: halves.second, second_arrow };
    }
}
