//! Trivalent plane graphs as combinatorial maps.
//!
//! A graph is stored as a set of darts (half-edges) with two permutations:
//! the edge involution `alpha` and the vertex rotation `sigma`, whose cycles
//! list the darts leaving each vertex in counterclockwise order. Dart `2k` is
//! the dart `e{k}+` of edge `k` and dart `2k + 1` is `e{k}-`, so `alpha(d) = d ^ 1`.
//! The dart `e{k}+` points from its tail to its head along the edge.
//!
//! The face permutation is `phi = sigma^-1 . alpha`. Each face is a
//! `phi`-orbit traversed counterclockwise, and the corner at the tail of a
//! dart `d`, swept counterclockwise from `d` to `sigma(d)`, lies in the face of
//! `d`. Corners are therefore indexed by darts.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

/// Index of a dart (half-edge).
pub type Dart = usize;

/// Errors raised while building or parsing a plane graph.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex `{vertex}` has {degree} darts; every vertex must have exactly 3")]
    NotTrivalent { vertex: String, degree: usize },
    #[error("the rotation system is not connected")]
    NotConnected,
    #[error("the rotation system has Euler characteristic {chi}, expected 2")]
    NotSpherical { chi: i64 },
    #[error("malformed edge pairing: {0}")]
    MalformedPairing(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A face-vertex incidence, identified by the dart whose tail corner it is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corner {
    /// The dart `d`; the corner is swept counterclockwise from `d` to `sigma(d)`.
    pub dart: Dart,
    /// The face containing the corner.
    pub face: usize,
    /// The vertex at the corner.
    pub vertex: usize,
}

/// A tree spanning every vertex except `missed_vertex`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpanningTreeMissingOne {
    /// The vertex `v_T` left out of the tree.
    pub missed_vertex: usize,
    /// Sorted edge indices of the tree.
    pub edges: Vec<usize>,
}

impl SpanningTreeMissingOne {
    /// Whether edge `e` belongs to the tree.
    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }
}

/// An undirected multigraph; loops and parallel edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    /// Number of vertices.
    pub num_vertices: usize,
    /// Edge list as vertex pairs.
    pub edges: Vec<(usize, usize)>,
}

impl Multigraph {
    /// Whether some edge joins a vertex to itself.
    pub fn has_loop(&self) -> bool {
        self.edges.iter().any(|&(a, b)| a == b)
    }
}

/// A connected trivalent graph embedded in the sphere.
#[derive(Debug, Clone)]
pub struct PlaneGraph {
    sigma: Vec<Dart>,
    sigma_inv: Vec<Dart>,
    tail: Vec<usize>,
    vertices: Vec<[Dart; 3]>,
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    face_of: Vec<usize>,
    faces: Vec<Vec<Dart>>,
}

fn parse_dart_token(tok: &str) -> Option<(String, bool)> {
    let (name, sign) = if let Some(n) = tok.strip_suffix('+') {
        (n, true)
    } else if let Some(n) = tok.strip_suffix('-') {
        (n, false)
    } else if let Some(n) = tok.strip_suffix('\u{2212}') {
        (n, false)
    } else {
        return None;
    };
    if name.is_empty() {
        return None;
    }
    Some((name.to_string(), sign))
}

fn natural_key(name: &str) -> (u64, String) {
    let digits: String = name.chars().skip_while(|c| !c.is_ascii_digit()).collect();
    (digits.parse().unwrap_or(u64::MAX), name.to_string())
}

impl PlaneGraph {
    /// Builds a graph from per-vertex counterclockwise dart lists such as
    /// `("v1", ["e1+", "e2+", "e3+"])`. Darts are listed at their tail vertex.
    pub fn from_rotation_system(vertices: &[(String, Vec<String>)]) -> Result<Self, GraphError> {
        let mut edge_set: BTreeSet<(u64, String)> = BTreeSet::new();
        let mut seen: HashMap<(String, bool), usize> = HashMap::new();
        for (vi, (vname, darts)) in vertices.iter().enumerate() {
            if darts.len() != 3 {
                return Err(GraphError::NotTrivalent { vertex: vname.clone(), degree: darts.len() });
            }
            for tok in darts {
                let (name, sign) = parse_dart_token(tok)
                    .ok_or_else(|| GraphError::MalformedPairing(format!("bad dart name `{tok}`")))?;
                if seen.insert((name.clone(), sign), vi).is_some() {
                    return Err(GraphError::MalformedPairing(format!("dart `{tok}` listed twice")));
                }
                edge_set.insert(natural_key(&name));
            }
        }
        let edge_names: Vec<String> = edge_set.into_iter().map(|(_, n)| n).collect();
        let edge_index: HashMap<&str, usize> =
            edge_names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        for name in &edge_names {
            for sign in [true, false] {
                if !seen.contains_key(&(name.clone(), sign)) {
                    let s = if sign { '+' } else { '-' };
                    return Err(GraphError::MalformedPairing(format!("dart `{name}{s}` is missing")));
                }
            }
        }
        let n_darts = 2 * edge_names.len();
        let mut sigma = vec![0; n_darts];
        let mut tail = vec![0; n_darts];
        let mut vlist = Vec::with_capacity(vertices.len());
        for (vi, (_, darts)) in vertices.iter().enumerate() {
            let ds: Vec<Dart> = darts
                .iter()
                .map(|tok| {
                    let (name, sign) = parse_dart_token(tok).expect("validated above");
                    2 * edge_index[name.as_str()] + usize::from(!sign)
                })
                .collect();
            for i in 0..3 {
                sigma[ds[i]] = ds[(i + 1) % 3];
                tail[ds[i]] = vi;
            }
            vlist.push([ds[0], ds[1], ds[2]]);
        }
        let mut sigma_inv = vec![0; n_darts];
        for d in 0..n_darts {
            sigma_inv[sigma[d]] = d;
        }
        let mut g = PlaneGraph {
            sigma,
            sigma_inv,
            tail,
            vertices: vlist,
            vertex_names: vertices.iter().map(|(n, _)| n.clone()).collect(),
            edge_names,
            face_of: vec![usize::MAX; n_darts],
            faces: Vec::new(),
        };
        g.check_connected()?;
        g.compute_faces();
        let chi = g.num_vertices() as i64 - g.num_edges() as i64 + g.num_faces() as i64;
        if chi != 2 {
            return Err(GraphError::NotSpherical { chi });
        }
        Ok(g)
    }

    /// Parses the text format: one `vertex NAME: d1 d2 d3` line per vertex,
    /// darts listed counterclockwise. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut vertices = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: &str| GraphError::Parse { line: lineno + 1, message: message.to_string() };
            let rest = line.strip_prefix("vertex").ok_or_else(|| err("expected `vertex NAME: darts`"))?;
            let (name, darts) = rest.split_once(':').ok_or_else(|| err("missing `:` after the vertex name"))?;
            let name = name.trim();
            if name.is_empty() {
                return Err(err("empty vertex name"));
            }
            let darts: Vec<String> = darts.split_whitespace().map(str::to_string).collect();
            for d in &darts {
                if parse_dart_token(d).is_none() {
                    return Err(err(&format!("bad dart `{d}`; expected a name ending in + or -")));
                }
            }
            vertices.push((name.to_string(), darts));
        }
        if vertices.is_empty() {
            return Err(GraphError::Parse { line: 0, message: "no vertices".into() });
        }
        Self::from_rotation_system(&vertices)
    }

    /// Serializes back to the text format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (v, ds) in self.vertices.iter().enumerate() {
            let names: Vec<String> = ds.iter().map(|&d| self.dart_name(d)).collect();
            s.push_str(&format!("vertex {}: {}\n", self.vertex_names[v], names.join(" ")));
        }
        s
    }

    fn check_connected(&self) -> Result<(), GraphError> {
        let n = self.num_vertices();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &d in &self.vertices[v] {
                let w = self.tail[self.alpha(d)];
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().all(|&b| b) {
            Ok(())
        } else {
            Err(GraphError::NotConnected)
        }
    }

    fn compute_faces(&mut self) {
        for start in 0..self.num_darts() {
            if self.face_of[start] != usize::MAX {
                continue;
            }
            let f = self.faces.len();
            let mut orbit = Vec::new();
            let mut d = start;
            loop {
                self.face_of[d] = f;
                orbit.push(d);
                d = self.phi(d);
                if d == start {
                    break;
                }
            }
            self.faces.push(orbit);
        }
    }

    /// The theta graph: two vertices joined by three parallel edges.
    pub fn theta() -> Self {
        Self::parse(THETA).expect("builtin graph")
    }

    /// The complete graph on four vertices with its planar embedding.
    pub fn k4() -> Self {
        Self::parse(K4).expect("builtin graph")
    }

    /// The triangular prism.
    pub fn prism() -> Self {
        Self::parse(PRISM).expect("builtin graph")
    }

    /// The cube graph.
    pub fn cube() -> Self {
        Self::parse(CUBE).expect("builtin graph")
    }

    /// Two loops joined by a bridge.
    pub fn dumbbell() -> Self {
        Self::parse(DUMBBELL).expect("builtin graph")
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_names.len()
    }

    pub fn num_darts(&self) -> usize {
        self.sigma.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// The genus `(|V| - 2) / 2` of the branched double cover.
    pub fn genus(&self) -> usize {
        (self.num_vertices() - 2) / 2
    }

    /// The opposite dart of the same edge.
    pub fn alpha(&self, d: Dart) -> Dart {
        d ^ 1
    }

    /// The next dart counterclockwise around the tail vertex.
    pub fn sigma(&self, d: Dart) -> Dart {
        self.sigma[d]
    }

    pub fn sigma_inv(&self, d: Dart) -> Dart {
        self.sigma_inv[d]
    }

    /// The next dart along the boundary of the face of `d`.
    pub fn phi(&self, d: Dart) -> Dart {
        self.sigma_inv[d ^ 1]
    }

    pub fn phi_inv(&self, d: Dart) -> Dart {
        self.sigma[d] ^ 1
    }

    pub fn edge_of(&self, d: Dart) -> usize {
        d / 2
    }

    pub fn tail(&self, d: Dart) -> usize {
        self.tail[d]
    }

    pub fn head(&self, d: Dart) -> usize {
        self.tail[d ^ 1]
    }

    pub fn face_of(&self, d: Dart) -> usize {
        self.face_of[d]
    }

    /// The boundary darts of face `f` in counterclockwise order.
    pub fn face_darts(&self, f: usize) -> &[Dart] {
        &self.faces[f]
    }

    /// The three darts leaving vertex `v`, counterclockwise.
    pub fn vertex_darts(&self, v: usize) -> [Dart; 3] {
        self.vertices[v]
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn edge_name(&self, e: usize) -> &str {
        &self.edge_names[e]
    }

    /// Looks up an edge by name.
    pub fn edge_by_name(&self, name: &str) -> Option<usize> {
        self.edge_names.iter().position(|n| n == name)
    }

    /// Looks up a vertex by name.
    pub fn vertex_by_name(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|n| n == name)
    }

    /// Display name of a dart such as `e3+`.
    pub fn dart_name(&self, d: Dart) -> String {
        format!("{}{}", self.edge_names[d / 2], if d % 2 == 0 { '+' } else { '-' })
    }

    /// The corner at the tail of `d`.
    pub fn corner(&self, d: Dart) -> Corner {
        Corner { dart: d, face: self.face_of[d], vertex: self.tail[d] }
    }

    /// All corners, one per dart.
    pub fn corners(&self) -> Vec<Corner> {
        (0..self.num_darts()).map(|d| self.corner(d)).collect()
    }

    /// Corners of face `f`, in boundary order.
    pub fn face_corners(&self, f: usize) -> Vec<Corner> {
        self.faces[f].iter().map(|&d| self.corner(d)).collect()
    }

    /// Whether edge `e` borders the same face on both sides.
    pub fn is_bridge(&self, e: usize) -> bool {
        self.face_of[2 * e] == self.face_of[2 * e + 1]
    }

    /// Whether no edge is a bridge.
    pub fn is_bridgeless(&self) -> bool {
        (0..self.num_edges()).all(|e| !self.is_bridge(e))
    }

    /// The dual multigraph on faces, with one dual edge per primal edge.
    pub fn dual_graph(&self) -> Multigraph {
        Multigraph {
            num_vertices: self.num_faces(),
            edges: (0..self.num_edges()).map(|e| (self.face_of[2 * e], self.face_of[2 * e + 1])).collect(),
        }
    }

    /// All trees spanning `V - {missed_vertex}` inside `G - missed_vertex`.
    pub fn enumerate_trees(&self, missed_vertex: usize) -> Vec<SpanningTreeMissingOne> {
        let n = self.num_vertices();
        let usable: Vec<usize> = (0..self.num_edges())
            .filter(|&e| self.tail[2 * e] != missed_vertex && self.tail[2 * e + 1] != missed_vertex)
            .collect();
        let need = n - 2;
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        self.tree_search(&usable, 0, need, &mut chosen, missed_vertex, &mut out);
        out
    }

    fn tree_search(
        &self,
        usable: &[usize],
        start: usize,
        need: usize,
        chosen: &mut Vec<usize>,
        missed: usize,
        out: &mut Vec<SpanningTreeMissingOne>,
    ) {
        if chosen.len() == need {
            if self.is_tree_missing(chosen, missed) {
                out.push(SpanningTreeMissingOne { missed_vertex: missed, edges: chosen.clone() });
            }
            return;
        }
        for i in start..usable.len() {
            if usable.len() - i < need - chosen.len() {
                break;
            }
            chosen.push(usable[i]);
            self.tree_search(usable, i + 1, need, chosen, missed, out);
            chosen.pop();
        }
    }

    /// Checks that `edges` form a tree spanning exactly `V - {missed}`.
    pub fn is_tree_missing(&self, edges: &[usize], missed: usize) -> bool {
        let n = self.num_vertices();
        if edges.len() + 2 != n {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for &e in edges {
            let (a, b) = (self.tail[2 * e], self.tail[2 * e + 1]);
            if a == missed || b == missed {
                return false;
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        let roots: BTreeSet<usize> = (0..n).filter(|&v| v != missed).map(|v| find(&mut parent, v)).collect();
        roots.len() == 1
    }
}

/// Number of proper vertex colorings with `k` colors, by deletion and
/// contraction with memoization. Returns 0 when the graph has a loop.
pub fn chromatic_polynomial(graph: &Multigraph, k: u64) -> i128 {
    if graph.has_loop() {
        return 0;
    }
    let edges: BTreeSet<(usize, usize)> =
        graph.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let mut memo = BTreeMap::new();
    chromatic_rec(graph.num_vertices, edges, k as i128, &mut memo)
}

type SimpleKey = (usize, Vec<(usize, usize)>);

fn chromatic_rec(
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    k: i128,
    memo: &mut BTreeMap<SimpleKey, i128>,
) -> i128 {
    let Some(&(a, b)) = edges.iter().next() else {
        return k.pow(n as u32);
    };
    let key = (n, edges.iter().copied().collect::<Vec<_>>());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut deleted = edges.clone();
    deleted.remove(&(a, b));
    // Contract b into a and relabel the last vertex as b to keep labels dense.
    let last = n - 1;
    let relabel = |x: usize| -> usize {
        let x = if x == b { a } else { x };
        if x == last {
            b
        } else {
            x
        }
    };
    let mut contracted = BTreeSet::new();
    for &(x, y) in &deleted {
        let (x, y) = (relabel(x), relabel(y));
        contracted.insert((x.min(y), x.max(y)));
    }
    let result = if contracted.iter().any(|&(x, y)| x == y) {
        chromatic_rec(n, deleted, k, memo)
    } else {
        chromatic_rec(n, deleted, k, memo) - chromatic_rec(n - 1, contracted, k, memo)
    };
    memo.insert(key, result);
    result
}

const THETA: &str = "vertex v1: e1+ e2+ e3+\nvertex v2: e1- e3- e2-\n";
const K4: &str = "vertex v1: e1+ e4+ e3-\nvertex v2: e2+ e5+ e1-\nvertex v3: e3+ e6+ e2-\nvertex v4: e5- e6- e4-\n";
const PRISM: &str = "vertex v1: e1+ e7+ e3-\nvertex v2: e2+ e8+ e1-\nvertex v3: e3+ e9+ e2-\n\
vertex v4: e4+ e6- e7-\nvertex v5: e8- e5+ e4-\nvertex v6: e9- e6+ e5-\n";
const CUBE: &str = "vertex v1: e9+ e4- e1+\nvertex v2: e2+ e10+ e1-\nvertex v3: e3+ e11+ e2-\n\
vertex v4: e4+ e12+ e3-\nvertex v5: e8- e9- e5+\nvertex v6: e6+ e5- e10-\nvertex v7: e11- e7+ e6-\n\
vertex v8: e12- e8+ e7-\n";
const DUMBBELL: &str = "vertex v1: e1+ e1- e3+\nvertex v2: e3- e2+ e2-\n";
