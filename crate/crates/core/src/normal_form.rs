use serde::Serialize;

use crate::diagram::{Arrow, Diagram, Edge, IncidenceKind, Topology};
use crate::error::{Error, Result};
use crate::polygon::{face_vertices, i0_of_faces, Face};

/// A node of a component chain with weight `p` toward the head, `q` toward the tail
/// and `arrows` unit arrows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Node {
    pub id: String,
    pub p: i64,
    pub q: i64,
    pub arrows: i64,
    /// Leaves joined to the node by an edge of weight 1 at both ends.
    pub extra_leaves: Vec<String>,
}

/// A splice component: a vertical chain of nodes with child components hanging from
/// its nodes through horizontal edges (weight 1 at the parent node, `p_1` at the child).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub nodes: Vec<Node>,
    /// Child components with the index of the node they hang from.
    pub children: Vec<(usize, Component)>,
    /// Leaf on the `p` side of the first node; only the root component has one.
    pub head: Option<String>,
    /// Leaf on the `q` side of the last node.
    pub tail: Option<String>,
}

/// A non-root component seen from its parent.
#[derive(Clone, Debug)]
pub struct ComponentView<'a> {
    pub component: &'a Component,
    /// Depth-first position: indices into the `children` lists from the root.
    pub path: Vec<usize>,
    pub attach: &'a Node,
    /// `p·q` of the node the component hangs from.
    pub big_p: i64,
    pub ell_plus: i64,
    pub ell_minus: i64,
}

/// One rewriting step of [`Component::normalize_max`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    Mirror,
    Exchange,
}

impl Component {
    /// `k_t` = unit arrows plus the `ℓ⁻` of the children at node `t`.
    pub fn kfaces(&self) -> Vec<Face> {
        let mut k: Vec<i64> = self.nodes.iter().map(|n| n.arrows).collect();
        for (j, c) in &self.children {
            k[*j] += c.ell_minus();
        }
        self.nodes.iter().zip(k).map(|(n, k)| Face::new(n.p, n.q, k)).collect()
    }

    /// `ℓ⁻ = Σ q_t k_t`.
    pub fn ell_minus(&self) -> i64 {
        self.kfaces().iter().map(|f| f.q * f.k).sum()
    }

    /// Every non-root component in depth-first order with its attachment data.
    pub fn components(&self) -> Vec<ComponentView<'_>> {
        let mut out = Vec::new();
        collect_views(self, &self.kfaces(), 0, &mut Vec::new(), &mut out);
        out
    }

    /// Rebuilds the splice diagram, keeping every vertex id.
    pub fn build(&self) -> Diagram {
        let mut b = Builder::default();
        if let Some(h) = &self.head {
            b.vertices.push(h.clone());
            b.edges.push(Edge::new(h.clone(), self.nodes[0].id.clone(), 1, self.nodes[0].p));
        }
        b.chain(self);
        let d = Diagram::new(b.vertices, b.edges, b.arrows, self.nodes[0].id.clone());
        let root = Topology::new(&d)
            .ok()
            .and_then(|t| {
                self.nodes
                    .iter()
                    .find(|n| t.vertex(&n.id).map(|v| t.is_rupture(v)).unwrap_or(false))
                    .map(|n| n.id.clone())
                    .or_else(|| t.rupture_vertices().first().map(|&v| t.id(v).to_string()))
            })
            .unwrap_or_else(|| self.nodes[0].id.clone());
        d.with_root(&root)
    }

    /// Reads a diagram as a component tree. The given root is tried first as the head
    /// of the root chain, then every other rupture vertex.
    pub fn recognize(d: &Diagram) -> Result<Component> {
        let t = Topology::new(d)?;
        let mut starts = vec![t.root()];
        for v in t.rupture_vertices() {
            if !starts.contains(&v) {
                starts.push(v);
            }
        }
        let mut last = None;
        for &start in &starts {
            for head in head_options(&t, start) {
                let mut used = vec![false; t.vertex_count()];
                let (inc, p) = match head {
                    Some((edge, leaf, w)) => {
                        used[leaf] = true;
                        (Some(edge), w)
                    }
                    None => (None, 1),
                };
                match read_chain(&t, start, inc, p, &mut used) {
                    Ok(mut c) if used.iter().all(|&u| u) => {
                        c.head = head.map(|(_, leaf, _)| t.id(leaf).to_string());
                        return Ok(c);
                    }
                    Ok(_) => last = Some("unreached vertices".to_string()),
                    Err(e) => last = Some(e.to_string()),
                }
            }
        }
        Err(Error::NotNormalForm(last.unwrap_or_else(|| "no rupture vertex".into())))
    }

    /// Reverses the root chain, swapping `p` and `q` on every node.
    pub fn mirror(&self) -> Component {
        let r = self.nodes.len();
        Component {
            nodes: self
                .nodes
                .iter()
                .rev()
                .map(|n| Node { p: n.q, q: n.p, ..n.clone() })
                .collect(),
            children: self.children.iter().map(|(j, c)| (r - 1 - j, c.clone())).collect(),
            head: self.tail.clone(),
            tail: self.head.clone(),
        }
    }

    /// Makes the child `children[ci]`, hanging from a node with `q = 1`, the vertical
    /// continuation of the chain; the former continuation becomes a child there.
    /// The underlying diagram is unchanged.
    pub fn exchange(&self, ci: usize) -> Result<Component> {
        let (i, d) = self
            .children
            .get(ci)
            .ok_or_else(|| Error::InvalidArgument(format!("no child {ci}")))?;
        let i = *i;
        if self.nodes[i].q != 1 {
            return Err(Error::InvalidArgument(format!("node {} has q = {} ≠ 1", self.nodes[i].id, self.nodes[i].q)));
        }
        let mut nodes: Vec<Node> = self.nodes[..=i].to_vec();
        nodes.extend(d.nodes.iter().cloned());
        let mut children: Vec<(usize, Component)> = self
            .children
            .iter()
            .enumerate()
            .filter(|(k, (j, _))| *k != ci && *j <= i)
            .map(|(_, c)| c.clone())
            .collect();
        children.extend(d.children.iter().map(|(j, c)| (j + i + 1, c.clone())));
        let rest = &self.nodes[i + 1..];
        if rest.is_empty() {
            if let Some(leaf) = &self.tail {
                nodes[i].extra_leaves.push(leaf.clone());
            }
        } else {
            let e = Component {
                nodes: rest.to_vec(),
                children: self.children.iter().filter(|(j, _)| *j > i).map(|(j, c)| (j - i - 1, c.clone())).collect(),
                head: None,
                tail: self.tail.clone(),
            };
            children.push((i, e));
        }
        Ok(Component { nodes, children, head: self.head.clone(), tail: d.tail.clone() })
    }

    /// Enforces that at most one horizontal edge per node has `ℓ⁻ ≥ ℓ⁺`.
    ///
    /// Two such edges can only occur at a single root node with `p = q = 1` and no
    /// arrows; that node and its leaves are removed and the two children are joined
    /// into one chain. Any other violation is an error.
    pub fn normalize_h1(&self) -> Result<Component> {
        let views = self.components();
        let mut heavy: Vec<(Vec<usize>, usize)> = Vec::new();
        for v in &views {
            if v.ell_minus >= v.ell_plus {
                let parent: Vec<usize> = v.path[..v.path.len() - 1].to_vec();
                let owner = self.at_path(&parent);
                let j = owner.children[*v.path.last().unwrap()].0;
                heavy.push((parent, j));
            }
        }
        heavy.sort();
        let Some(w) = heavy.windows(2).find(|w| w[0] == w[1]) else {
            return Ok(self.clone());
        };
        let (path, j) = w[0].clone();
        let node = &self.at_path(&path).nodes[j];
        let reducible = path.is_empty()
            && self.nodes.len() == 1
            && node.p == 1
            && node.q == 1
            && node.arrows == 0
            && self.children.len() == 2;
        if !reducible {
            return Err(Error::NotNormalForm(format!("two heavy horizontal edges at vertex {}", node.id)));
        }
        let e1 = &self.children[0].1;
        let e2 = self.children[1].1.mirror();
        let shift = e2.nodes.len();
        let mut nodes = e2.nodes.clone();
        nodes.extend(e1.nodes.iter().cloned());
        let mut children = e2.children.clone();
        children.extend(e1.children.iter().map(|(j, c)| (j + shift, c.clone())));
        Ok(Component { nodes, children, head: e2.head, tail: e1.tail.clone() })
    }

    /// Rewrites the root chain by mirrors and exchanges until the `(1, 1)`-selected
    /// node of the root polygon carries no child with `ℓ⁻ ≥ ℓ⁺`, or carries one while
    /// both of its weights exceed 1.
    pub fn normalize_max(&self) -> Result<(Component, Vec<Step>)> {
        let mut c = self.normalize_h1()?;
        let mut steps = Vec::new();
        for _ in 0..4 * (self.node_count() + 2) {
            let faces = c.kfaces();
            let i0 = i0_of_faces(&faces).ok_or_else(|| Error::NotNormalForm("root polygon misses (1, 1)".into()))?;
            let v = i0 - 1;
            let heavy: Vec<usize> = c
                .components()
                .iter()
                .filter(|w| w.path.len() == 1 && c.children[w.path[0]].0 == v && w.ell_minus >= w.ell_plus)
                .map(|w| w.path[0])
                .collect();
            let node = &c.nodes[v];
            match heavy.as_slice() {
                [] => return Ok((c, steps)),
                [_] if node.p != 1 && node.q != 1 => return Ok((c, steps)),
                [_] if node.q != 1 => {
                    c = c.mirror();
                    steps.push(Step::Mirror);
                }
                [ci] => {
                    c = c.exchange(*ci)?;
                    steps.push(Step::Exchange);
                }
                _ => return Err(Error::NotNormalForm(format!("two heavy horizontal edges at vertex {}", node.id))),
            }
        }
        Err(Error::Inconsistency("normalization does not terminate".into()))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len() + self.children.iter().map(|(_, c)| c.node_count()).sum::<usize>()
    }

    fn at_path(&self, path: &[usize]) -> &Component {
        path.iter().fold(self, |c, &i| &c.children[i].1)
    }
}

fn collect_views<'a>(c: &'a Component, faces: &[Face], offset: usize, path: &mut Vec<usize>, out: &mut Vec<ComponentView<'a>>) {
    let x = face_vertices(faces);
    for (ci, (j, child)) in c.children.iter().enumerate() {
        let node = &c.nodes[*j];
        let (m, n) = x[j + offset + 1];
        let mult = (node.q as i128 * m + node.p as i128 * n) as i64;
        let big_p = node.p * node.q;
        let ell_minus = child.ell_minus();
        let ell_plus = mult - big_p * ell_minus;
        path.push(ci);
        out.push(ComponentView { component: child, path: path.clone(), attach: node, big_p, ell_plus, ell_minus });
        let mut child_faces = vec![Face::new(1, 1, ell_plus)];
        child_faces.extend(child.kfaces());
        collect_views(child, &child_faces, 1, path, out);
        path.pop();
    }
}

#[derive(Default)]
struct Builder {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    arrows: Vec<Arrow>,
}

impl Builder {
    fn chain(&mut self, c: &Component) {
        for (i, n) in c.nodes.iter().enumerate() {
            self.vertices.push(n.id.clone());
            if i > 0 {
                let prev = &c.nodes[i - 1];
                self.edges.push(Edge::new(prev.id.clone(), n.id.clone(), prev.q, n.p));
            }
            for _ in 0..n.arrows {
                self.arrows.push(Arrow::new(n.id.clone(), 1, 1));
            }
            for leaf in &n.extra_leaves {
                self.vertices.push(leaf.clone());
                self.edges.push(Edge::new(n.id.clone(), leaf.clone(), 1, 1));
            }
        }
        if let Some(t) = &c.tail {
            let last = c.nodes.last().expect("non-empty chain");
            self.vertices.push(t.clone());
            self.edges.push(Edge::new(last.id.clone(), t.clone(), last.q, 1));
        }
        for (j, child) in &c.children {
            let parent = &c.nodes[*j];
            self.edges.push(Edge::new(parent.id.clone(), child.nodes[0].id.clone(), 1, child.nodes[0].p));
            self.chain(child);
        }
    }
}

/// Candidate head leaves at `start` (edge, leaf, weight at `start`), non-unit weights
/// first, followed by the option of no head leaf.
fn head_options(t: &Topology, start: usize) -> Vec<Option<(usize, usize, i64)>> {
    let mut leaves: Vec<(usize, usize, i64)> = t
        .incidences(start)
        .iter()
        .filter_map(|x| match x.kind {
            IncidenceKind::Edge { edge, neighbor } if t.is_leaf(neighbor) && t.weight_toward(neighbor, start) == Some(1) => {
                Some((edge, neighbor, x.weight))
            }
            _ => None,
        })
        .collect();
    leaves.sort_by_key(|&(edge, _, _)| edge);
    let mut out: Vec<Option<(usize, usize, i64)>> = leaves.into_iter().map(Some).collect();
    out.push(None);
    out
}

fn read_chain(t: &Topology, start: usize, entry: Option<usize>, p0: i64, used: &mut [bool]) -> Result<Component> {
    let mut nodes = Vec::new();
    let mut children = Vec::new();
    let mut tail = None;
    let (mut u, mut inc_edge, mut p) = (start, entry, p0);
    loop {
        if used[u] {
            return Err(Error::NotNormalForm(format!("vertex {} reached twice", t.id(u))));
        }
        used[u] = true;
        let mut arrows = 0;
        let mut heavy = Vec::new();
        let mut unit_leaves = Vec::new();
        let mut unit_nodes = Vec::new();
        for x in t.incidences(u) {
            match x.kind {
                IncidenceKind::Arrow { arrow } => {
                    let (_, w, mult) = t.arrow(arrow);
                    if w != 1 || mult != 1 {
                        return Err(Error::NotNormalForm(format!("arrow {arrow} is not a unit arrow")));
                    }
                    arrows += 1;
                }
                IncidenceKind::Edge { edge, .. } if Some(edge) == inc_edge => {}
                IncidenceKind::Edge { edge, neighbor } => {
                    let far = t.weight_toward(neighbor, u).expect("edge end");
                    if x.weight != 1 {
                        heavy.push((edge, neighbor, x.weight, far));
                    } else if t.is_leaf(neighbor) {
                        if far != 1 {
                            return Err(Error::NotNormalForm(format!("leaf {} carries weight {far}", t.id(neighbor))));
                        }
                        unit_leaves.push(neighbor);
                    } else {
                        unit_nodes.push((edge, neighbor, far));
                    }
                }
            }
        }
        if heavy.len() > 1 {
            return Err(Error::NotNormalForm(format!("vertex {} has more than two weights above 1", t.id(u))));
        }
        let mut next = None;
        let q = match heavy.pop() {
            Some((edge, x, w, far)) => {
                if t.is_leaf(x) {
                    if far != 1 {
                        return Err(Error::NotNormalForm(format!("leaf {} carries weight {far}", t.id(x))));
                    }
                    used[x] = true;
                    tail = Some(t.id(x).to_string());
                } else {
                    next = Some((edge, x, far));
                }
                w
            }
            None => {
                if !unit_leaves.is_empty() {
                    let leaf = unit_leaves.remove(0);
                    used[leaf] = true;
                    tail = Some(t.id(leaf).to_string());
                } else if unit_nodes.len() == 1 {
                    next = unit_nodes.pop();
                }
                1
            }
        };
        for &leaf in &unit_leaves {
            used[leaf] = true;
        }
        let index = nodes.len();
        nodes.push(Node {
            id: t.id(u).to_string(),
            p,
            q,
            arrows,
            extra_leaves: unit_leaves.iter().map(|&l| t.id(l).to_string()).collect(),
        });
        for (edge, x, far) in unit_nodes {
            children.push((index, read_chain(t, x, Some(edge), far, used)?));
        }
        match next {
            Some((edge, x, far)) => {
                u = x;
                inc_edge = Some(edge);
                p = far;
            }
            None => break,
        }
    }
    Ok(Component { nodes, children, head: None, tail })
}

/// Applies the two-heavy-edges reduction when it is needed; otherwise returns the
/// diagram unchanged.
pub fn normalize_h1(d: &Diagram) -> Result<Diagram> {
    let c = Component::recognize(d)?;
    let n = c.normalize_h1()?;
    if n == c {
        Ok(d.clone())
    } else {
        Ok(n.build())
    }
}
