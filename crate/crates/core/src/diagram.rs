use std::collections::{HashMap, HashSet, VecDeque};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An edge between two vertices with a weight at each end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub a: String,
    pub b: String,
    pub wa: i64,
    pub wb: i64,
}

fn unit_weight() -> i64 {
    1
}

/// An arrowhead attached to a vertex with a weight at the vertex and a multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub at: String,
    #[serde(default = "unit_weight")]
    pub w: i64,
    pub mult: i64,
}

/// A rooted Eisenbud–Neumann splice diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
    pub arrows: Vec<Arrow>,
    pub root: String,
}

impl Edge {
    pub fn new(a: impl Into<String>, b: impl Into<String>, wa: i64, wb: i64) -> Edge {
        Edge { a: a.into(), b: b.into(), wa, wb }
    }
}

impl Arrow {
    pub fn new(at: impl Into<String>, w: i64, mult: i64) -> Arrow {
        Arrow { at: at.into(), w, mult }
    }
}

impl Diagram {
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>, arrows: Vec<Arrow>, root: impl Into<String>) -> Diagram {
        Diagram { vertices, edges, arrows, root: root.into() }
    }

    /// The same diagram rooted at another vertex.
    pub fn with_root(&self, root: &str) -> Diagram {
        Diagram { root: root.to_string(), ..self.clone() }
    }

    /// Single-node diagram of the Brieskorn–Pham curve `x^p + y^q`.
    pub fn brieskorn(p: i64, q: i64) -> Diagram {
        Diagram::new(
            vec!["lp".into(), "v".into(), "lq".into()],
            vec![Edge::new("lp", "v", 1, p), Edge::new("v", "lq", q, 1)],
            vec![Arrow::new("v", 1, 1)],
            "v",
        )
    }
}

/// A structural or determinant problem found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    #[error("duplicate vertex {vertex:?}")]
    DuplicateVertex { vertex: String },
    #[error("edge {edge} references unknown vertex {vertex:?}")]
    UnknownEdgeEnd { edge: usize, vertex: String },
    #[error("arrow {arrow} is attached to unknown vertex {vertex:?}")]
    UnknownArrowVertex { arrow: usize, vertex: String },
    #[error("root {vertex:?} is not a vertex")]
    UnknownRoot { vertex: String },
    #[error("edge {edge} is a loop")]
    SelfLoop { edge: usize },
    #[error("edge {edge} closes a cycle, the diagram is not a tree")]
    Cycle { edge: usize },
    #[error("vertex {vertex:?} is not connected to the root")]
    Disconnected { vertex: String },
    #[error("edge {edge} carries non-positive weight {weight}")]
    EdgeWeight { edge: usize, weight: i64 },
    #[error("arrow {arrow} carries non-positive weight {weight}")]
    ArrowWeight { arrow: usize, weight: i64 },
    #[error("arrow {arrow} has multiplicity {mult}, expected at least 1")]
    ArrowMultiplicity { arrow: usize, mult: i64 },
    #[error("diagram has no arrow")]
    NoArrows,
    #[error("edge {edge} has zero determinant")]
    ZeroDeterminant { edge: usize },
    #[error("integer overflow while evaluating the diagram")]
    Overflow,
}

/// Outcome of [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub violations: Vec<Violation>,
    pub algebraic: bool,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<bool> {
        if self.violations.is_empty() {
            Ok(self.algebraic)
        } else {
            Err(Error::Invalid(self.violations))
        }
    }
}

fn structural_violations(d: &Diagram) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for v in &d.vertices {
        if index.insert(v.as_str(), index.len()).is_some() {
            out.push(Violation::DuplicateVertex { vertex: v.clone() });
        }
    }
    if !index.contains_key(d.root.as_str()) {
        out.push(Violation::UnknownRoot { vertex: d.root.clone() });
    }
    let mut uf: Vec<usize> = (0..index.len()).collect();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    for (i, e) in d.edges.iter().enumerate() {
        for w in [e.wa, e.wb] {
            if w < 1 {
                out.push(Violation::EdgeWeight { edge: i, weight: w });
            }
        }
        let ia = index.get(e.a.as_str()).copied();
        let ib = index.get(e.b.as_str()).copied();
        if ia.is_none() {
            out.push(Violation::UnknownEdgeEnd { edge: i, vertex: e.a.clone() });
        }
        if ib.is_none() {
            out.push(Violation::UnknownEdgeEnd { edge: i, vertex: e.b.clone() });
        }
        if let (Some(a), Some(b)) = (ia, ib) {
            if a == b {
                out.push(Violation::SelfLoop { edge: i });
                continue;
            }
            let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
            if ra == rb {
                out.push(Violation::Cycle { edge: i });
            } else {
                uf[ra] = rb;
            }
        }
    }
    if let Some(&r) = index.get(d.root.as_str()) {
        let rr = find(&mut uf, r);
        for v in &d.vertices {
            let i = index[v.as_str()];
            if find(&mut uf, i) != rr {
                out.push(Violation::Disconnected { vertex: v.clone() });
            }
        }
    }
    if d.arrows.is_empty() {
        out.push(Violation::NoArrows);
    }
    for (i, a) in d.arrows.iter().enumerate() {
        if !index.contains_key(a.at.as_str()) {
            out.push(Violation::UnknownArrowVertex { arrow: i, vertex: a.at.clone() });
        }
        if a.w < 1 {
            out.push(Violation::ArrowWeight { arrow: i, weight: a.w });
        }
        if a.mult < 1 {
            out.push(Violation::ArrowMultiplicity { arrow: i, mult: a.mult });
        }
    }
    out
}

/// Checks the tree structure, the weights and the edge determinants.
///
/// A leaf edge carrying weight 1 at both ends is removable and is exempt from
/// the zero-determinant check. The diagram is flagged `algebraic` when every
/// edge joining two rupture vertices has a positive determinant.
pub fn validate(d: &Diagram) -> Validation {
    let violations = structural_violations(d);
    if !violations.is_empty() {
        return Validation { violations, algebraic: false };
    }
    let topo = match Topology::unchecked(d) {
        Ok(t) => t,
        Err(_) => return Validation { violations: vec![Violation::Overflow], algebraic: false },
    };
    let mut violations = Vec::new();
    let mut algebraic = true;
    for e in 0..d.edges.len() {
        let det = match topo.edge_determinant_checked(e) {
            Some(x) => x,
            None => {
                violations.push(Violation::Overflow);
                algebraic = false;
                continue;
            }
        };
        if det == 0 && !topo.is_trivial_leaf_edge(e) {
            violations.push(Violation::ZeroDeterminant { edge: e });
            algebraic = false;
        }
        let (a, b) = topo.edge_ends(e);
        if topo.is_rupture(a) && topo.is_rupture(b) && det <= 0 {
            algebraic = false;
        }
    }
    Validation { violations, algebraic }
}

/// Where an incidence at a vertex leads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IncidenceKind {
    Edge { edge: usize, neighbor: usize },
    Arrow { arrow: usize },
}

/// One edge-end or arrow stub at a vertex, with the weight it carries there.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub kind: IncidenceKind,
    pub weight: i64,
}

/// Index-based view of a structurally valid diagram with all multiplicities computed.
#[derive(Clone, Debug)]
pub struct Topology {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize, i64, i64)>,
    arrows: Vec<(usize, i64, i64)>,
    inc: Vec<Vec<Incidence>>,
    prod: Vec<i64>,
    root: usize,
    parent: Vec<Option<(usize, usize)>>,
    order: Vec<usize>,
    flow: Vec<[i64; 2]>,
    mult: Vec<i64>,
}

fn to_i64(x: i128, what: &'static str) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow(what))
}

impl Topology {
    /// Builds the topology after checking the structural part of [`validate`].
    pub fn new(d: &Diagram) -> Result<Topology> {
        let v = structural_violations(d);
        if !v.is_empty() {
            return Err(Error::Invalid(v));
        }
        Topology::unchecked(d)
    }

    fn unchecked(d: &Diagram) -> Result<Topology> {
        let ids = d.vertices.clone();
        let index: HashMap<String, usize> = ids.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let n = ids.len();
        let mut inc: Vec<Vec<Incidence>> = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(d.edges.len());
        for (i, e) in d.edges.iter().enumerate() {
            let (a, b) = (index[&e.a], index[&e.b]);
            edges.push((a, b, e.wa, e.wb));
            inc[a].push(Incidence { kind: IncidenceKind::Edge { edge: i, neighbor: b }, weight: e.wa });
            inc[b].push(Incidence { kind: IncidenceKind::Edge { edge: i, neighbor: a }, weight: e.wb });
        }
        let mut arrows = Vec::with_capacity(d.arrows.len());
        for (i, a) in d.arrows.iter().enumerate() {
            let at = index[&a.at];
            arrows.push((at, a.w, a.mult));
            inc[at].push(Incidence { kind: IncidenceKind::Arrow { arrow: i }, weight: a.w });
        }
        let mut prod = Vec::with_capacity(n);
        for list in &inc {
            let mut p: i64 = 1;
            for x in list {
                p = p.checked_mul(x.weight).ok_or(Error::Overflow("weight products"))?;
            }
            prod.push(p);
        }
        let root = index[&d.root];
        let mut parent = vec![None; n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for x in &inc[u] {
                if let IncidenceKind::Edge { edge, neighbor } = x.kind {
                    if !seen[neighbor] {
                        seen[neighbor] = true;
                        parent[neighbor] = Some((u, edge));
                        queue.push_back(neighbor);
                    }
                }
            }
        }
        let mut t = Topology {
            ids,
            index,
            edges,
            arrows,
            inc,
            prod,
            root,
            parent,
            order,
            flow: vec![[0, 0]; d.edges.len()],
            mult: vec![0; n],
        };
        t.compute_flows()?;
        Ok(t)
    }

    fn set_flow(&mut self, at: usize, edge: usize, value: i64) {
        let side = if self.edges[edge].0 == at { 0 } else { 1 };
        self.flow[edge][side] = value;
    }

    /// Multiplicity carried by the side of `edge` containing `at`.
    fn flow_at(&self, at: usize, edge: usize) -> i64 {
        let side = if self.edges[edge].0 == at { 0 } else { 1 };
        self.flow[edge][side]
    }

    fn compute_flows(&mut self) -> Result<()> {
        // Post-order: flows from each subtree toward its parent.
        for idx in (0..self.order.len()).rev() {
            let u = self.order[idx];
            let Some((_, pe)) = self.parent[u] else { continue };
            let prod = self.prod[u] as i128;
            let mut wpar = 1;
            let mut total: i128 = 0;
            for x in &self.inc[u] {
                match x.kind {
                    IncidenceKind::Edge { edge, .. } if edge == pe => wpar = x.weight,
                    IncidenceKind::Edge { edge, neighbor } => {
                        total += prod / x.weight as i128 * self.flow_at(neighbor, edge) as i128;
                    }
                    IncidenceKind::Arrow { arrow } => {
                        total += prod / x.weight as i128 * self.arrows[arrow].2 as i128;
                    }
                }
            }
            let value = to_i64(total / wpar as i128, "flows")?;
            self.set_flow(u, pe, value);
        }
        // Pre-order: vertex multiplicities, then flows from each parent toward its children.
        for idx in 0..self.order.len() {
            let u = self.order[idx];
            let prod = self.prod[u] as i128;
            let mut m: i128 = 0;
            for x in &self.inc[u] {
                let sub = match x.kind {
                    IncidenceKind::Edge { edge, neighbor } => self.flow_at(neighbor, edge),
                    IncidenceKind::Arrow { arrow } => self.arrows[arrow].2,
                };
                m += prod / x.weight as i128 * sub as i128;
            }
            self.mult[u] = to_i64(m, "multiplicities")?;
            let children: Vec<(usize, usize, i64)> = self.inc[u]
                .iter()
                .filter_map(|x| match x.kind {
                    IncidenceKind::Edge { edge, neighbor } if self.parent[neighbor].map(|p| p.1) == Some(edge) => {
                        Some((edge, neighbor, x.weight))
                    }
                    _ => None,
                })
                .collect();
            for (edge, c, w) in children {
                let down = self.flow_at(c, edge) as i128;
                let value = (m - prod / w as i128 * down) / w as i128;
                let value = to_i64(value, "flows")?;
                self.set_flow(u, edge, value);
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn vertex(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn incidences(&self, v: usize) -> &[Incidence] {
        &self.inc[v]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn edge_ends(&self, e: usize) -> (usize, usize) {
        (self.edges[e].0, self.edges[e].1)
    }

    pub fn edge_weights(&self, e: usize) -> (i64, i64) {
        (self.edges[e].2, self.edges[e].3)
    }

    /// Attached vertex, weight and multiplicity of an arrow.
    pub fn arrow(&self, a: usize) -> (usize, i64, i64) {
        self.arrows[a]
    }

    /// Product of all weights at `v`.
    pub fn weight_product(&self, v: usize) -> i64 {
        self.prod[v]
    }

    /// Parent vertex and connecting edge, `None` at the root.
    pub fn parent(&self, v: usize) -> Option<(usize, usize)> {
        self.parent[v]
    }

    /// Vertices in breadth-first order from the root.
    pub fn bfs_order(&self) -> &[usize] {
        &self.order
    }

    pub fn multiplicity(&self, v: usize) -> i64 {
        self.mult[v]
    }

    /// Multiplicity carried by everything beyond `edge` when seen from its endpoint `at`.
    pub fn flow_through(&self, at: usize, edge: usize) -> i64 {
        let (a, b) = self.edge_ends(edge);
        let far = if a == at { b } else { a };
        self.flow_at(far, edge)
    }

    /// Branch multiplicity of an incidence at `v`: the multiplicity of the arrow
    /// that replaces it when the incidence is cut.
    pub fn branch_multiplicity(&self, v: usize, x: &Incidence) -> i64 {
        match x.kind {
            IncidenceKind::Edge { edge, .. } => self.flow_through(v, edge),
            IncidenceKind::Arrow { arrow } => self.arrows[arrow].2,
        }
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.inc[v].len() == 1 && matches!(self.inc[v][0].kind, IncidenceKind::Edge { .. })
    }

    pub fn is_rupture(&self, v: usize) -> bool {
        self.inc[v].len() >= 3
    }

    /// Rupture vertices, root first when it is one, then in breadth-first order.
    pub fn rupture_vertices(&self) -> Vec<usize> {
        self.order.iter().copied().filter(|&v| self.is_rupture(v)).collect()
    }

    fn is_trivial_leaf_edge(&self, e: usize) -> bool {
        let (a, b, wa, wb) = self.edges[e];
        wa == 1 && wb == 1 && (self.is_leaf(a) || self.is_leaf(b))
    }

    fn edge_determinant_checked(&self, e: usize) -> Option<i64> {
        let (a, b, wa, wb) = self.edges[e];
        let lhs = (wa as i128).checked_mul(wb as i128)?;
        let rhs = ((self.prod[a] / wa) as i128).checked_mul((self.prod[b] / wb) as i128)?;
        i64::try_from(lhs - rhs).ok()
    }

    /// `wa·wb − (other weights at a)·(other weights at b)`.
    pub fn edge_determinant(&self, e: usize) -> Result<i64> {
        if e >= self.edges.len() {
            return Err(Error::UnknownEdge(e));
        }
        self.edge_determinant_checked(e).ok_or(Error::Overflow("edge determinant"))
    }

    /// Vertices on the tree path from `u` to `v`, both included.
    pub fn path(&self, u: usize, v: usize) -> Vec<usize> {
        let ancestors = |mut x: usize| {
            let mut out = vec![x];
            while let Some((p, _)) = self.parent[x] {
                out.push(p);
                x = p;
            }
            out
        };
        let au = ancestors(u);
        let av = ancestors(v);
        let set_v: HashSet<usize> = av.iter().copied().collect();
        let cut_u = au.iter().position(|x| set_v.contains(x)).expect("tree is connected");
        let lca = au[cut_u];
        let cut_v = av.iter().position(|&x| x == lca).expect("lca on both paths");
        let mut out: Vec<usize> = au[..=cut_u].to_vec();
        out.extend(av[..cut_v].iter().rev());
        out
    }

    /// Weight at `u` of the edge joining `u` to its tree neighbour `x`.
    pub fn weight_toward(&self, u: usize, x: usize) -> Option<i64> {
        self.inc[u].iter().find_map(|i| match i.kind {
            IncidenceKind::Edge { neighbor, .. } if neighbor == x => Some(i.weight),
            _ => None,
        })
    }

    /// Edge index joining two adjacent vertices.
    pub fn edge_between(&self, u: usize, x: usize) -> Option<usize> {
        self.inc[u].iter().find_map(|i| match i.kind {
            IncidenceKind::Edge { neighbor, edge } if neighbor == x => Some(edge),
            _ => None,
        })
    }

    /// Product over the vertices of the path from `v` to the arrow of the weights
    /// lying off the path.
    pub fn linking_factor(&self, v: usize, arrow: usize) -> Result<i64> {
        if arrow >= self.arrows.len() {
            return Err(Error::UnknownArrow(arrow));
        }
        let (at, w, _) = self.arrows[arrow];
        let path = self.path(v, at);
        let mut out: i128 = 1;
        for (i, &u) in path.iter().enumerate() {
            let mut on_path: i128 = 1;
            if i > 0 {
                on_path *= self.weight_toward(u, path[i - 1]).expect("path edge") as i128;
            }
            if i + 1 < path.len() {
                on_path *= self.weight_toward(u, path[i + 1]).expect("path edge") as i128;
            } else {
                on_path *= w as i128;
            }
            out *= self.prod[u] as i128 / on_path;
            if out > i64::MAX as i128 {
                return Err(Error::Overflow("linking factor"));
            }
        }
        Ok(out as i64)
    }

    /// Local invariants of `v` obtained by cutting every incidence at `v`.
    pub fn local_data(&self, v: usize) -> Result<LocalData> {
        let m_v = self.mult[v];
        let prod = self.prod[v];
        let mut cache: HashMap<(i64, i64), (i64, i64)> = HashMap::new();
        let mut incidences = Vec::with_capacity(self.inc[v].len());
        let mut r_v = m_v;
        let mut d_v = None;
        let parent_edge = self.parent[v].map(|p| p.1);
        for x in &self.inc[v] {
            let alpha = x.weight;
            let m = self.branch_multiplicity(v, x);
            let (beta, s) = match cache.get(&(alpha, m)) {
                Some(&bs) => bs,
                None => {
                    let bs = beta_and_s(prod / alpha, alpha, m, m_v)
                        .ok_or_else(|| Error::InvalidArgument(format!("weights at vertex {:?} are not pairwise coprime", self.ids[v])))?;
                    cache.insert((alpha, m), bs);
                    bs
                }
            };
            r_v = r_v.gcd(&s);
            if let IncidenceKind::Edge { edge, .. } = x.kind {
                if Some(edge) == parent_edge {
                    d_v = Some(m_v.gcd(&s));
                }
            }
            incidences.push(IncidenceData { kind: x.kind, alpha, m, beta, s });
        }
        Ok(LocalData { vertex: self.ids[v].clone(), incidences, m_v, d_v, r_v })
    }

    /// The integer `d_a = gcd(mult, link)` attached to an arrow, where `link` is the
    /// exponent of the vertex it hangs from as seen through the arrow stub.
    pub fn arrow_gcd(&self, arrow: usize) -> Result<i64> {
        if arrow >= self.arrows.len() {
            return Err(Error::UnknownArrow(arrow));
        }
        let (at, w, mult) = self.arrows[arrow];
        let num = self.mult[at] as i128 - mult as i128 * (self.prod[at] / w) as i128;
        if num % w as i128 != 0 {
            return Err(Error::Inconsistency(format!("arrow {arrow}: linking number is not integral")));
        }
        let link = to_i64(num / w as i128, "arrow data")?;
        Ok(mult.gcd(&link))
    }
}

/// Returns `(β, s)` with `β·other ≡ 1 (mod α)`, `0 ≤ β < α`, and `s = (m − β·m_v)/α`.
fn beta_and_s(other: i64, alpha: i64, m: i64, m_v: i64) -> Option<(i64, i64)> {
    let beta = if alpha == 1 {
        0
    } else {
        let g = other.rem_euclid(alpha).extended_gcd(&alpha);
        if g.gcd != 1 {
            return None;
        }
        g.x.rem_euclid(alpha)
    };
    let num = m as i128 - beta as i128 * m_v as i128;
    if num % alpha as i128 != 0 {
        return None;
    }
    i64::try_from(num / alpha as i128).ok().map(|s| (beta, s))
}

/// Cut data of one incidence at a vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceData {
    pub kind: IncidenceKind,
    pub alpha: i64,
    pub m: i64,
    pub beta: i64,
    pub s: i64,
}

/// Local invariants of a vertex: incidences, multiplicity, `d_v` and `r_v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalData {
    pub vertex: String,
    pub incidences: Vec<IncidenceData>,
    pub m_v: i64,
    pub d_v: Option<i64>,
    pub r_v: i64,
}

/// Multiplicity of a vertex: `Σ_a mult(a)·linking_factor(v, a)`.
pub fn multiplicity(d: &Diagram, v: &str) -> Result<i64> {
    let t = Topology::new(d)?;
    Ok(t.multiplicity(t.vertex(v)?))
}

pub fn linking_factor(d: &Diagram, v: &str, arrow: usize) -> Result<i64> {
    let t = Topology::new(d)?;
    t.linking_factor(t.vertex(v)?, arrow)
}

pub fn local_data(d: &Diagram, v: &str) -> Result<LocalData> {
    let t = Topology::new(d)?;
    t.local_data(t.vertex(v)?)
}

pub fn edge_determinant(d: &Diagram, e: usize) -> Result<i64> {
    Topology::new(d)?.edge_determinant(e)
}

/// Rupture vertex ids, root first when it is one.
pub fn rupture_vertices(d: &Diagram) -> Result<Vec<String>> {
    let t = Topology::new(d)?;
    Ok(t.rupture_vertices().into_iter().map(|v| t.id(v).to_string()).collect())
}

/// Parses the compact chain form `n1(p,q)[m,…]–n2(p,q)[…]–…`.
///
/// Node `i` gets weight `p` toward its predecessor (a leaf `h` for the first node) and
/// weight `q` toward its successor (a leaf `t` for the last node). Every bracket entry is
/// an arrow of weight 1 with that multiplicity. Names may be omitted or written as
/// `node`, giving `n1, n2, …`. Links are hyphens or Unicode dashes. The first node is the root.
pub fn parse_chain(text: &str) -> Result<Diagram> {
    let err = |part: usize, msg: &str| Error::InvalidArgument(format!("chain node {part}: {msg}"));
    let parts: Vec<&str> = text.split(['-', '–', '—']).map(str::trim).collect();
    if parts.iter().all(|p| p.is_empty()) {
        return Err(Error::InvalidArgument("empty chain".into()));
    }
    let mut nodes: Vec<(String, i64, i64, Vec<i64>)> = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        let n = i + 1;
        let open = part.find('(').ok_or_else(|| err(n, "expected `(p,q)`"))?;
        let close = part.find(')').ok_or_else(|| err(n, "missing `)`"))?;
        let name = part[..open].trim();
        let id = if name.is_empty() || name == "node" { format!("n{n}") } else { name.to_string() };
        let weights = parse_ints(&part[open + 1..close]).map_err(|m| err(n, &m))?;
        let &[p, q] = weights.as_slice() else {
            return Err(err(n, "expected two weights"));
        };
        let rest = part[close + 1..].trim();
        let arrows = if rest.is_empty() {
            Vec::new()
        } else {
            let inner = rest
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| err(n, "arrows must be written `[m,…]`"))?;
            parse_ints(inner).map_err(|m| err(n, &m))?
        };
        nodes.push((id, p, q, arrows));
    }
    let mut vertices = vec!["h".to_string()];
    vertices.extend(nodes.iter().map(|n| n.0.clone()));
    vertices.push("t".to_string());
    let mut edges = vec![Edge::new("h", nodes[0].0.clone(), 1, nodes[0].1)];
    for w in nodes.windows(2) {
        edges.push(Edge::new(w[0].0.clone(), w[1].0.clone(), w[0].2, w[1].1));
    }
    let last = &nodes[nodes.len() - 1];
    edges.push(Edge::new(last.0.clone(), "t", last.2, 1));
    let arrows = nodes.iter().flat_map(|(id, _, _, ms)| ms.iter().map(move |&m| Arrow::new(id.clone(), 1, m))).collect();
    let root = nodes[0].0.clone();
    Ok(Diagram::new(vertices, edges, arrows, root))
}

fn parse_ints(s: &str) -> std::result::Result<Vec<i64>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| x.trim().parse::<i64>().map_err(|_| format!("`{}` is not an integer", x.trim()))).collect()
}

/// Deletes `a1` and `a2` and joins their vertices by an edge carrying the former arrow weights.
///
/// Vertex ids of `d2` that clash with ids of `d1` get a `'` suffix. The result is rooted at `d1`'s root.
pub fn splice(d1: &Diagram, a1: usize, d2: &Diagram, a2: usize) -> Result<Diagram> {
    Topology::new(d1)?;
    Topology::new(d2)?;
    let arr1 = d1.arrows.get(a1).ok_or(Error::UnknownArrow(a1))?;
    let arr2 = d2.arrows.get(a2).ok_or(Error::UnknownArrow(a2))?;
    let mut taken: HashSet<String> = d1.vertices.iter().cloned().collect();
    let mut rename: HashMap<&str, String> = HashMap::new();
    for v in &d2.vertices {
        let mut name = v.clone();
        while taken.contains(&name) {
            name.push('\'');
        }
        taken.insert(name.clone());
        rename.insert(v.as_str(), name);
    }
    let mut vertices = d1.vertices.clone();
    vertices.extend(d2.vertices.iter().map(|v| rename[v.as_str()].clone()));
    let mut edges = d1.edges.clone();
    edges.extend(d2.edges.iter().map(|e| Edge::new(rename[e.a.as_str()].clone(), rename[e.b.as_str()].clone(), e.wa, e.wb)));
    edges.push(Edge::new(arr1.at.clone(), rename[arr2.at.as_str()].clone(), arr1.w, arr2.w));
    let mut arrows: Vec<Arrow> = d1.arrows.iter().enumerate().filter(|(i, _)| *i != a1).map(|(_, a)| a.clone()).collect();
    arrows.extend(
        d2.arrows
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != a2)
            .map(|(_, a)| Arrow::new(rename[a.at.as_str()].clone(), a.w, a.mult)),
    );
    if arrows.is_empty() {
        return Err(Error::InvalidArgument("splice would leave no arrow".into()));
    }
    let out = Diagram::new(vertices, edges, arrows, d1.root.clone());
    let t = Topology::new(&out)?;
    if t.edge_determinant(out.edges.len() - 1)? == 0 {
        return Err(Error::InvalidArgument("splice creates an edge with zero determinant".into()));
    }
    Ok(out)
}

/// The two halves of a diagram cut along an edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutHalves {
    /// Half containing the first endpoint of the edge; its new arrow is the last one.
    pub first: Diagram,
    /// Half containing the second endpoint of the edge; its new arrow is the last one.
    pub second: Diagram,
}

/// Cuts `edge` and replaces each side by an arrow whose multiplicity keeps every
/// vertex multiplicity unchanged.
///
/// Each half keeps the original root when it contains it and is otherwise rooted
/// at its endpoint of the cut edge.
pub fn cut(d: &Diagram, edge: usize) -> Result<CutHalves> {
    let t = Topology::new(d)?;
    if edge >= d.edges.len() {
        return Err(Error::UnknownEdge(edge));
    }
    let (a, b) = t.edge_ends(edge);
    let (wa, wb) = t.edge_weights(edge);
    let side = |start: usize, avoid: usize| -> HashSet<usize> {
        let mut seen = HashSet::from([start]);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for x in t.incidences(u) {
                if let IncidenceKind::Edge { edge: e, neighbor } = x.kind {
                    if e != avoid && seen.insert(neighbor) {
                        stack.push(neighbor);
                    }
                }
            }
        }
        seen
    };
    let build = |keep: &HashSet<usize>, at: usize, w: i64, mult: i64| -> Diagram {
        let vertices: Vec<String> = d.vertices.iter().filter(|v| keep.contains(&t.vertex(v).unwrap())).cloned().collect();
        let edges: Vec<Edge> = d
            .edges
            .iter()
            .enumerate()
            .filter(|(i, e)| *i != edge && keep.contains(&t.vertex(&e.a).unwrap()))
            .map(|(_, e)| e.clone())
            .collect();
        let mut arrows: Vec<Arrow> = d.arrows.iter().filter(|x| keep.contains(&t.vertex(&x.at).unwrap())).cloned().collect();
        arrows.push(Arrow::new(t.id(at).to_string(), w, mult));
        let root = if keep.contains(&t.root()) { d.root.clone() } else { t.id(at).to_string() };
        Diagram::new(vertices, edges, arrows, root)
    };
    let side_a = side(a, edge);
    let side_b = side(b, edge);
    let first = build(&side_a, a, wa, t.flow_through(a, edge));
    let second = build(&side_b, b, wb, t.flow_through(b, edge));
    Ok(CutHalves { first, second })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::Polygon;

    #[test]
    fn chain_text_matches_polygon_diagram() {
        let d = parse_chain("(1,2)[1,1] – (2,1)[1,1]").unwrap();
        assert_eq!(d, Polygon::from_triples(&[(1, 2, 2), (2, 1, 2)]).unwrap().to_diagram());
        let d = parse_chain("node(2,3)[1]").unwrap();
        assert_eq!(d, Polygon::from_triples(&[(2, 3, 1)]).unwrap().to_diagram());
        let d = parse_chain("a(2,3)[2]-b(1,1)").unwrap();
        assert_eq!((d.root.as_str(), d.arrows.len(), d.arrows[0].mult), ("a", 1, 2));
    }

    #[test]
    fn malformed_chains_are_rejected() {
        for bad in ["", "(2,3", "(2)[1]", "(2,3)[x]", "(2,3)1"] {
            assert!(matches!(parse_chain(bad), Err(Error::InvalidArgument(_))), "{bad}");
        }
    }

    #[test]
    fn brieskorn_validates_and_is_algebraic() {
        let v = validate(&Diagram::brieskorn(2, 3));
        assert!(v.violations.is_empty());
        assert!(v.algebraic);
    }

    #[test]
    fn zero_determinant_is_reported() {
        let mut d = Diagram::brieskorn(2, 3);
        d.edges[1].wa = 2;
        let v = validate(&d);
        assert!(v.violations.iter().any(|x| matches!(x, Violation::ZeroDeterminant { .. })));
    }

    #[test]
    fn cycles_are_reported() {
        let d = Diagram::new(
            vec!["a".into(), "b".into()],
            vec![Edge::new("a", "b", 1, 1), Edge::new("b", "a", 1, 1)],
            vec![Arrow::new("a", 1, 1)],
            "a",
        );
        let v = validate(&d);
        assert!(v.violations.iter().any(|x| matches!(x, Violation::Cycle { .. })));
    }

    #[test]
    fn brieskorn_multiplicities_and_linking() {
        let d = Diagram::brieskorn(2, 3);
        assert_eq!(multiplicity(&d, "v").unwrap(), 6);
        assert_eq!(multiplicity(&d, "lq").unwrap(), 2);
        assert_eq!(multiplicity(&d, "lp").unwrap(), 3);
        assert_eq!(linking_factor(&d, "v", 0).unwrap(), 6);
        assert_eq!(linking_factor(&d, "lp", 0).unwrap(), 3);
        let mut d2 = d.clone();
        d2.arrows.push(Arrow::new("v", 1, 1));
        assert_eq!(multiplicity(&d2, "v").unwrap(), 12);
    }

    #[test]
    fn brieskorn_local_data() {
        let ld = local_data(&Diagram::brieskorn(2, 3), "v").unwrap();
        assert_eq!(ld.m_v, 6);
        assert_eq!(ld.r_v, 1);
        assert_eq!(ld.d_v, None);
        let mut got: Vec<(i64, i64, i64)> = ld.incidences.iter().map(|x| (x.alpha, x.m, x.s)).collect();
        got.sort();
        assert_eq!(got, vec![(1, 1, 1), (2, 0, -3), (3, 0, -4)]);
    }

    #[test]
    fn leaf_edge_determinant_is_negative() {
        let d = Diagram::brieskorn(2, 3);
        assert_eq!(edge_determinant(&d, 0).unwrap(), -1);
        assert_eq!(rupture_vertices(&d).unwrap(), vec!["v".to_string()]);
    }

    #[test]
    fn splice_onto_only_arrows_fails() {
        let d = Diagram::brieskorn(2, 3);
        assert!(splice(&d, 0, &d, 0).is_err());
    }
}
