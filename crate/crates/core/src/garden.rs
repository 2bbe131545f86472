//! Combinatorial gardens. The sphere is cut along the graph and the web of
//! threads into triangles, one per dart: triangle t(d) lies in the face of
//! d, its straight side is the edge of d, and its two thread sides run from
//! the face center to the endpoints of that edge. Tines are validated
//! sequences of side crossings through this triangle complex.
//!
//! Gardens are stored in lasso form: each face k has an approach path P_k
//! from the base triangle to an entry triangle of the face, the lasso l_k
//! is P_k followed by a full turn around the center and P_k reversed, and
//! the tine of face k is l_1 ... l_(k-1) P_k (center) P_k reversed.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::algebra::GroupRing;
use crate::group_theory::EdgeOrientation;
use crate::plane_graph::{Dart, PlaneGraph};
use crate::words;

/// A triangle of the complex, identified with its dart.
pub type Triangle = usize;

/// Errors raised by garden operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GardenError {
    #[error("garden construction failed its square-zero certificate at {0}")]
    ConstructionFailed(String),
    #[error("move index {index} is out of range 1..{max}")]
    InvalidIndex { index: usize, max: usize },
    #[error("side {side} does not border the base triangle")]
    NotIncident { side: Side },
    #[error("cannot parse garden: {0}")]
    Parse(String),
}

/// A side of a triangle: the graph edge or one of the two threads, labeled
/// in the boundary order of the triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    S,
    L,
    R,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::S => Side::S,
            Side::L => Side::R,
            Side::R => Side::L,
        }
    }

    fn parse(c: &str) -> Option<Side> {
        match c {
            "S" => Some(Side::S),
            "L" => Some(Side::L),
            "R" => Some(Side::R),
            _ => None,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Side::S => "S",
            Side::L => "L",
            Side::R => "R",
        };
        write!(f, "{s}")
    }
}

/// Adjacency data of the triangle complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleComplex {
    alpha: Vec<Dart>,
    phi: Vec<Dart>,
    phi_inv: Vec<Dart>,
    face: Vec<usize>,
    tail: Vec<usize>,
    head: Vec<usize>,
    num_faces: usize,
}

impl TriangleComplex {
    pub fn new(graph: &PlaneGraph) -> Self {
        let n = graph.num_darts();
        TriangleComplex {
            alpha: (0..n).map(|d| graph.alpha(d)).collect(),
            phi: (0..n).map(|d| graph.phi(d)).collect(),
            phi_inv: (0..n).map(|d| graph.phi_inv(d)).collect(),
            face: (0..n).map(|d| graph.face_of(d)).collect(),
            tail: (0..n).map(|d| graph.tail(d)).collect(),
            head: (0..n).map(|d| graph.head(d)).collect(),
            num_faces: graph.num_faces(),
        }
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn num_faces(&self) -> usize {
        self.num_faces
    }

    pub fn face(&self, t: Triangle) -> usize {
        self.face[t]
    }

    /// The triangle across a side.
    pub fn neighbor(&self, t: Triangle, side: Side) -> Triangle {
        match side {
            Side::S => self.alpha[t],
            Side::L => self.phi[t],
            Side::R => self.phi_inv[t],
        }
    }

    /// The crossing event from `t` across `side`.
    pub fn cross(&self, t: Triangle, side: Side) -> CrossingEvent {
        let to = self.neighbor(t, side);
        match side {
            Side::S => CrossingEvent::Edge { from: t, to },
            _ => CrossingEvent::Thread { from: t, to, side },
        }
    }

    /// Crossings of a full counterclockwise turn around the center of the
    /// face of `t`, starting and ending at `t`.
    pub fn center_circle(&self, t: Triangle) -> CrossingSequence {
        let mut seq = CrossingSequence::empty(t);
        let mut cur = t;
        loop {
            seq.events.push(self.cross(cur, Side::L));
            cur = self.neighbor(cur, Side::L);
            if cur == t {
                return seq;
            }
        }
    }

    /// Vertex and rotational sense of a crossing when it winds around a
    /// graph vertex: `(vertex, counterclockwise)`. Straight crossings wind
    /// around both endpoints of their edge.
    fn windings(&self, e: &CrossingEvent) -> Vec<(usize, bool)> {
        match *e {
            CrossingEvent::Edge { from, .. } => vec![(self.head[from], true), (self.tail[from], false)],
            CrossingEvent::Thread { from, side: Side::R, .. } => vec![(self.tail[from], true)],
            CrossingEvent::Thread { from, side: Side::L, .. } => vec![(self.head[from], false)],
            _ => Vec::new(),
        }
    }

    /// The side to step from `t` to wind around vertex `v` in the given sense.
    fn winding_step(&self, t: Triangle, v: usize, counterclockwise: bool) -> Option<Side> {
        let at_tail = self.tail[t] == v;
        let at_head = self.head[t] == v;
        match (counterclockwise, at_tail, at_head) {
            (true, true, _) => Some(Side::R),
            (true, _, true) => Some(Side::S),
            (false, _, true) => Some(Side::L),
            (false, true, _) => Some(Side::S),
            _ => None,
        }
    }
}

/// A single event along a path through the triangle complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CrossingEvent {
    /// Crossing a graph edge between the two triangles on its sides.
    Edge { from: Triangle, to: Triangle },
    /// Crossing a thread between two triangles of the same face.
    Thread { from: Triangle, to: Triangle, side: Side },
    /// Passing through the center of a face.
    Center { face: usize, entry: Triangle, exit: Triangle },
}

impl CrossingEvent {
    pub fn from(&self) -> Triangle {
        match *self {
            CrossingEvent::Edge { from, .. } | CrossingEvent::Thread { from, .. } => from,
            CrossingEvent::Center { entry, .. } => entry,
        }
    }

    pub fn to(&self) -> Triangle {
        match *self {
            CrossingEvent::Edge { to, .. } | CrossingEvent::Thread { to, .. } => to,
            CrossingEvent::Center { exit, .. } => exit,
        }
    }

    /// The side crossed, for edge and thread events.
    pub fn side(&self) -> Option<Side> {
        match *self {
            CrossingEvent::Edge { .. } => Some(Side::S),
            CrossingEvent::Thread { side, .. } => Some(side),
            CrossingEvent::Center { .. } => None,
        }
    }

    /// The same crossing traversed backwards.
    pub fn inverse(&self) -> CrossingEvent {
        match *self {
            CrossingEvent::Edge { from, to } => CrossingEvent::Edge { from: to, to: from },
            CrossingEvent::Thread { from, to, side } => CrossingEvent::Thread { from: to, to: from, side: side.opposite() },
            CrossingEvent::Center { face, entry, exit } => CrossingEvent::Center { face, entry: exit, exit: entry },
        }
    }

    /// Whether the event's adjacency claims match the complex.
    pub fn is_valid(&self, complex: &TriangleComplex) -> bool {
        let n = complex.len();
        match *self {
            CrossingEvent::Edge { from, to } => from < n && complex.neighbor(from, Side::S) == to,
            CrossingEvent::Thread { from, to, side } => from < n && side != Side::S && complex.neighbor(from, side) == to,
            CrossingEvent::Center { face, entry, exit } => {
                entry < n && exit < n && complex.face(entry) == face && complex.face(exit) == face
            }
        }
    }
}

/// A path through the triangle complex: a start triangle and its events.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CrossingSequence {
    pub start: Triangle,
    pub events: Vec<CrossingEvent>,
}

impl CrossingSequence {
    pub fn empty(start: Triangle) -> Self {
        CrossingSequence { start, events: Vec::new() }
    }

    /// Follows a list of sides from a start triangle.
    pub fn from_sides(complex: &TriangleComplex, start: Triangle, sides: &[Side]) -> Self {
        let mut seq = CrossingSequence::empty(start);
        for &s in sides {
            seq.push_side(complex, s);
        }
        seq
    }

    pub fn end(&self) -> Triangle {
        self.events.last().map_or(self.start, CrossingEvent::to)
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn push_side(&mut self, complex: &TriangleComplex, side: Side) {
        let e = complex.cross(self.end(), side);
        self.events.push(e);
    }

    pub fn push_center(&mut self, complex: &TriangleComplex) {
        let t = self.end();
        self.events.push(CrossingEvent::Center { face: complex.face(t), entry: t, exit: t });
    }

    /// Concatenation; the other path should start where this one ends.
    pub fn concat(&self, other: &CrossingSequence) -> CrossingSequence {
        let mut events = self.events.clone();
        events.extend_from_slice(&other.events);
        CrossingSequence { start: self.start, events }
    }

    pub fn inverse(&self) -> CrossingSequence {
        CrossingSequence { start: self.end(), events: self.events.iter().rev().map(CrossingEvent::inverse).collect() }
    }

    /// Consecutive events chain and every adjacency claim matches.
    pub fn validate(&self, complex: &TriangleComplex) -> bool {
        let mut cur = self.start;
        for e in &self.events {
            if e.from() != cur || !e.is_valid(complex) {
                return false;
            }
            cur = e.to();
        }
        true
    }

    pub fn num_centers(&self) -> usize {
        self.events.iter().filter(|e| matches!(e, CrossingEvent::Center { .. })).count()
    }

    /// Side letters with `C` for center passes.
    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.events.iter().map(|e| e.side().map_or("C".to_string(), |s| s.to_string())).collect();
        if parts.is_empty() {
            "-".to_string()
        } else {
            parts.join(" ")
        }
    }

    pub fn from_text(complex: &TriangleComplex, start: Triangle, text: &str) -> Result<Self, GardenError> {
        let mut seq = CrossingSequence::empty(start);
        for tok in text.split_whitespace() {
            if tok == "-" {
                continue;
            }
            if tok == "C" {
                seq.push_center(complex);
            } else {
                let side = Side::parse(tok).ok_or_else(|| GardenError::Parse(format!("unknown side {tok}")))?;
                seq.push_side(complex, side);
            }
        }
        Ok(seq)
    }
}

/// Whether a path is valid in the complex.
pub fn validate_path(complex: &TriangleComplex, seq: &CrossingSequence) -> bool {
    seq.validate(complex)
}

/// Rewrites a path to a locally minimal homotopic form: cancels immediate
/// back-and-forth crossings, absorbs thread crossings adjacent to a center
/// pass, and replaces runs of more than three crossings winding around a
/// vertex by the shorter way around.
pub fn homotopy_reduce(complex: &TriangleComplex, seq: &CrossingSequence) -> CrossingSequence {
    let mut events = seq.events.clone();
    loop {
        let before = events.len();
        events = cancel_pairs(&events);
        events = absorb_into_centers(&events);
        events = shorten_vertex_windings(complex, &events);
        if events.len() == before {
            return CrossingSequence { start: seq.start, events };
        }
    }
}

fn cancel_pairs(events: &[CrossingEvent]) -> Vec<CrossingEvent> {
    let mut out: Vec<CrossingEvent> = Vec::with_capacity(events.len());
    for &e in events {
        if !matches!(e, CrossingEvent::Center { .. }) && out.last() == Some(&e.inverse()) {
            out.pop();
        } else {
            out.push(e);
        }
    }
    out
}

fn absorb_into_centers(events: &[CrossingEvent]) -> Vec<CrossingEvent> {
    let mut out: Vec<CrossingEvent> = Vec::with_capacity(events.len());
    for &e in events {
        match (out.last().copied(), e) {
            (Some(CrossingEvent::Thread { from, .. }), CrossingEvent::Center { face, exit, .. }) => {
                out.pop();
                out.push(CrossingEvent::Center { face, entry: from, exit });
            }
            (Some(CrossingEvent::Center { face, entry, .. }), CrossingEvent::Thread { to, .. }) => {
                out.pop();
                out.push(CrossingEvent::Center { face, entry, exit: to });
            }
            _ => out.push(e),
        }
    }
    out
}

fn shorten_vertex_windings(complex: &TriangleComplex, events: &[CrossingEvent]) -> Vec<CrossingEvent> {
    let n = events.len();
    for i in 0..n {
        for (v, ccw) in complex.windings(&events[i]) {
            let mut j = i + 1;
            while j < n && complex.windings(&events[j]).contains(&(v, ccw)) {
                j += 1;
            }
            let k = j - i;
            if k < 4 {
                continue;
            }
            let start = events[i].from();
            let mut replacement = CrossingSequence::empty(start);
            if k >= 6 {
                // A full turn around a vertex is trivial.
                replacement.events.extend_from_slice(&events[i + 6..j]);
            } else {
                for _ in 0..6 - k {
                    let Some(side) = complex.winding_step(replacement.end(), v, !ccw) else { break };
                    replacement.push_side(complex, side);
                }
                if replacement.end() != events[j - 1].to() || replacement.len() != 6 - k {
                    continue;
                }
            }
            let mut out = events[..i].to_vec();
            out.extend(replacement.events);
            out.extend_from_slice(&events[j..]);
            return out;
        }
    }
    events.to_vec()
}

/// The path from the base to the entry triangle of one face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Approach {
    pub face: usize,
    pub path: CrossingSequence,
}

/// A tine: a loop at the base triangle with exactly one center pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tine {
    pub face: usize,
    pub path: CrossingSequence,
}

/// Position of the base face's tine in seed order, when first or last.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiniteTypePosition {
    First,
    Last,
}

/// A combinatorial garden.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Garden {
    pub orientation: EdgeOrientation,
    pub base: Triangle,
    approaches: Vec<Approach>,
    tines: Vec<Tine>,
    /// False for gardens read from text, whose geometry is not certified.
    pub geometry_checked: bool,
}

impl Garden {
    /// Assembles a garden from approach paths in seed order.
    pub fn from_approaches(
        complex: &TriangleComplex,
        orientation: EdgeOrientation,
        base: Triangle,
        approaches: Vec<Approach>,
    ) -> Garden {
        let tines = lasso_tines(complex, &approaches);
        Garden { orientation, base, approaches, tines, geometry_checked: false }
    }

    pub fn approaches(&self) -> &[Approach] {
        &self.approaches
    }

    pub fn tines(&self) -> &[Tine] {
        &self.tines
    }

    /// Faces in seed order.
    pub fn seed_order(&self) -> Vec<usize> {
        self.approaches.iter().map(|a| a.face).collect()
    }

    /// The lasso of the approach at a seed position.
    pub fn lasso(&self, complex: &TriangleComplex, k: usize) -> CrossingSequence {
        lasso(complex, &self.approaches[k].path)
    }

    /// The connecting path η_i = P_i reversed followed by P_(i+1), between
    /// the entry triangles of consecutive tines.
    pub fn eta(&self, i: usize) -> CrossingSequence {
        self.approaches[i].path.inverse().concat(&self.approaches[i + 1].path)
    }

    /// Whether the tine through the base face comes first or last.
    pub fn finite_type(&self, complex: &TriangleComplex) -> Option<FiniteTypePosition> {
        let base_face = complex.face(self.base);
        if self.approaches.first().map(|a| a.face) == Some(base_face) {
            Some(FiniteTypePosition::First)
        } else if self.approaches.last().map(|a| a.face) == Some(base_face) {
            Some(FiniteTypePosition::Last)
        } else {
            None
        }
    }

    /// Replaces one tine by an arbitrary path, keeping the approaches.
    pub fn with_tine_path(&self, k: usize, path: CrossingSequence) -> Garden {
        let mut g = self.clone();
        g.tines[k].path = path;
        g.geometry_checked = false;
        g
    }

    /// Every tine validates, has one center pass at its own face, and each
    /// face owns exactly one tine.
    pub fn validate(&self, complex: &TriangleComplex) -> bool {
        let mut seen = vec![false; complex.num_faces()];
        for t in &self.tines {
            if t.path.start != self.base || t.path.end() != self.base || !t.path.validate(complex) || t.path.num_centers() != 1 {
                return false;
            }
            let center_face = t.path.events.iter().find_map(|e| match e {
                CrossingEvent::Center { face, .. } => Some(*face),
                _ => None,
            });
            if center_face != Some(t.face) || seen[t.face] {
                return false;
            }
            seen[t.face] = true;
        }
        seen.iter().all(|&s| s)
    }

    /// Move V at position `i` (1-based): the tines at positions i and i+1
    /// swap, the later face keeping its approach and the earlier face's
    /// approach passing around the later lasso.
    pub fn apply_move_v(&self, complex: &TriangleComplex, i: usize) -> Result<Garden, GardenError> {
        let n = self.approaches.len();
        if i == 0 || i >= n {
            return Err(GardenError::InvalidIndex { index: i, max: n - 1 });
        }
        let (a, b) = (&self.approaches[i - 1], &self.approaches[i]);
        let around = lasso(complex, &b.path).inverse().concat(&a.path);
        let mut approaches = self.approaches.clone();
        approaches[i - 1] = b.clone();
        approaches[i] = Approach { face: a.face, path: homotopy_reduce(complex, &around) };
        Ok(self.rebuilt(complex, approaches))
    }

    /// Inverse of Move V at position `i` (1-based).
    pub fn apply_move_v_inverse(&self, complex: &TriangleComplex, i: usize) -> Result<Garden, GardenError> {
        let n = self.approaches.len();
        if i == 0 || i >= n {
            return Err(GardenError::InvalidIndex { index: i, max: n - 1 });
        }
        let (a, b) = (&self.approaches[i - 1], &self.approaches[i]);
        let around = lasso(complex, &a.path).concat(&b.path);
        let mut approaches = self.approaches.clone();
        approaches[i - 1] = Approach { face: b.face, path: homotopy_reduce(complex, &around) };
        approaches[i] = a.clone();
        Ok(self.rebuilt(complex, approaches))
    }

    /// Moves VI (thread sides) and VII (the straight side): the base moves
    /// across a side and every approach first crosses back into the old base.
    pub fn apply_base_move(&self, complex: &TriangleComplex, side: Side) -> Garden {
        let new_base = complex.neighbor(self.base, side);
        let back = CrossingSequence { start: new_base, events: vec![complex.cross(self.base, side).inverse()] };
        let approaches = self
            .approaches
            .iter()
            .map(|a| Approach { face: a.face, path: homotopy_reduce(complex, &back.concat(&a.path)) })
            .collect();
        let mut g = self.rebuilt(complex, approaches);
        g.base = new_base;
        g
    }

    /// Move VI across a thread side of the base triangle.
    pub fn apply_move_vi(&self, complex: &TriangleComplex, side: Side) -> Result<Garden, GardenError> {
        if side == Side::S {
            return Err(GardenError::NotIncident { side });
        }
        Ok(self.apply_base_move(complex, side))
    }

    /// Move VII across the graph edge of the base triangle.
    pub fn apply_move_vii(&self, complex: &TriangleComplex) -> Garden {
        self.apply_base_move(complex, Side::S)
    }

    /// Toggles the orientation of one edge; tines are unchanged.
    pub fn flip_orientation(&self, edge: usize) -> Garden {
        let mut g = self.clone();
        g.orientation = self.orientation.flipped(edge);
        g
    }

    fn rebuilt(&self, complex: &TriangleComplex, approaches: Vec<Approach>) -> Garden {
        let tines = lasso_tines(complex, &approaches);
        Garden { orientation: self.orientation.clone(), base: self.base, approaches, tines, geometry_checked: self.geometry_checked }
    }

    /// Text form: orientation, base triangle, and one approach per line.
    pub fn to_text(&self, graph: &PlaneGraph) -> String {
        let mut s = format!("orientation {}\nbase {}\n", self.orientation.to_text(), graph.dart_name(self.base));
        for a in &self.approaches {
            s.push_str(&format!("approach f{}: {}\n", a.face + 1, a.path.to_text()));
        }
        s
    }

    /// Parses [`Garden::to_text`]; the result is marked unchecked.
    pub fn from_text(graph: &PlaneGraph, text: &str) -> Result<Garden, GardenError> {
        let complex = TriangleComplex::new(graph);
        let mut orientation = None;
        let mut base = None;
        let mut approaches = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            if let Some(rest) = line.strip_prefix("orientation ") {
                orientation = Some(EdgeOrientation::from_text(rest.trim()).ok_or_else(|| GardenError::Parse(line.to_string()))?);
            } else if let Some(rest) = line.strip_prefix("base ") {
                let name = rest.trim();
                base = Some((0..graph.num_darts()).find(|&d| graph.dart_name(d) == name).ok_or_else(|| GardenError::Parse(line.to_string()))?);
            } else if let Some(rest) = line.strip_prefix("approach f") {
                let (face, path) = rest.split_once(':').ok_or_else(|| GardenError::Parse(line.to_string()))?;
                let face: usize = face.trim().parse().map_err(|_| GardenError::Parse(line.to_string()))?;
                if face == 0 || face > graph.num_faces() {
                    return Err(GardenError::Parse(format!("face {face} out of range")));
                }
                let start = base.ok_or_else(|| GardenError::Parse("approach before base".into()))?;
                approaches.push(Approach { face: face - 1, path: CrossingSequence::from_text(&complex, start, path)? });
            } else {
                return Err(GardenError::Parse(line.to_string()));
            }
        }
        let orientation = orientation.ok_or_else(|| GardenError::Parse("missing orientation".into()))?;
        if orientation.num_edges() != graph.num_edges() {
            return Err(GardenError::Parse("orientation length does not match edges".into()));
        }
        let base = base.ok_or_else(|| GardenError::Parse("missing base".into()))?;
        Ok(Garden::from_approaches(&complex, orientation, base, approaches))
    }
}

fn lasso(complex: &TriangleComplex, approach: &CrossingSequence) -> CrossingSequence {
    approach.concat(&complex.center_circle(approach.end())).concat(&approach.inverse())
}

fn lasso_tines(complex: &TriangleComplex, approaches: &[Approach]) -> Vec<Tine> {
    let mut prefix = CrossingSequence::empty(approaches.first().map_or(0, |a| a.path.start));
    let mut tines = Vec::with_capacity(approaches.len());
    for a in approaches {
        let mut path = prefix.concat(&a.path);
        path.push_center(complex);
        let path = path.concat(&a.path.inverse());
        tines.push(Tine { face: a.face, path });
        prefix = prefix.concat(&lasso(complex, &a.path));
    }
    tines
}

/// Breadth-first tree of the triangle adjacency graph: parent crossings and depths.
struct TriangleTree {
    parent_side: Vec<Option<Side>>,
    depth: Vec<usize>,
    children: Vec<Vec<(Side, Triangle)>>,
}

fn triangle_tree(complex: &TriangleComplex, root: Triangle) -> TriangleTree {
    let n = complex.len();
    let mut parent_side = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    let mut children = vec![Vec::new(); n];
    depth[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(t) = queue.pop_front() {
        for side in [Side::S, Side::L, Side::R] {
            let u = complex.neighbor(t, side);
            if depth[u] == usize::MAX {
                depth[u] = depth[t] + 1;
                parent_side[u] = Some(side.opposite());
                children[t].push((side, u));
                queue.push_back(u);
            }
        }
    }
    TriangleTree { parent_side, depth, children }
}

/// Builds the canonical lasso garden from a base triangle: approaches run
/// along a breadth-first tree of the triangle graph to the shallowest
/// triangle of each face, and faces are ordered by a contour walk of that
/// tree, beginning with the base face. The square-zero certificate decides
/// between the two senses of the contour.
pub fn canonical_garden(
    graph: &PlaneGraph,
    base: Triangle,
    orientation: EdgeOrientation,
    ring: &GroupRing,
) -> Result<Garden, GardenError> {
    let complex = TriangleComplex::new(graph);
    let tree = triangle_tree(&complex, base);
    let mut entry = vec![usize::MAX; complex.num_faces()];
    for t in 0..complex.len() {
        let f = complex.face(t);
        if entry[f] == usize::MAX || (tree.depth[t], t) < (tree.depth[entry[f]], entry[f]) {
            entry[f] = t;
        }
    }
    let mut failure = String::new();
    for reversed in [false, true] {
        let order = contour_order(&complex, &tree, base, &entry, reversed);
        let approaches = order
            .iter()
            .map(|&f| Approach { face: f, path: tree_path(&complex, &tree, base, entry[f]) })
            .collect();
        let mut garden = Garden::from_approaches(&complex, orientation.clone(), base, approaches);
        match words::verify_d_squared(graph, &garden, ring) {
            Ok(()) => {
                garden.geometry_checked = true;
                return Ok(garden);
            }
            Err((s, _)) => failure = s.to_string(),
        }
    }
    Err(GardenError::ConstructionFailed(failure))
}

fn tree_path(complex: &TriangleComplex, tree: &TriangleTree, root: Triangle, target: Triangle) -> CrossingSequence {
    let mut sides = Vec::new();
    let mut t = target;
    while t != root {
        let up = tree.parent_side[t].expect("non-root has a parent");
        sides.push(up.opposite());
        t = complex.neighbor(t, up);
    }
    sides.reverse();
    CrossingSequence::from_sides(complex, root, &sides)
}

/// Ports of a triangle in boundary order, with the face center between the
/// two thread sides.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Port {
    Side(Side),
    Center,
}

const PORTS: [Port; 4] = [Port::Side(Side::S), Port::Side(Side::L), Port::Center, Port::Side(Side::R)];

fn contour_order(complex: &TriangleComplex, tree: &TriangleTree, root: Triangle, entry: &[Triangle], reversed: bool) -> Vec<usize> {
    let mut order = Vec::new();
    let ports: Vec<Port> = if reversed { PORTS.iter().rev().copied().collect() } else { PORTS.to_vec() };
    // Iterative walk: (triangle, port position to resume from, ports left).
    let start_of = |t: Triangle| -> usize {
        match tree.parent_side[t] {
            Some(p) => ports.iter().position(|&q| q == Port::Side(p)).expect("port") + 1,
            None => ports.iter().position(|&q| q == Port::Center).expect("port"),
        }
    };
    let mut stack: Vec<(Triangle, usize, usize)> = vec![(root, start_of(root), if tree.parent_side[root].is_some() { 3 } else { 4 })];
    while let Some((t, pos, left)) = stack.pop() {
        if left == 0 {
            continue;
        }
        let port = ports[pos % 4];
        stack.push((t, pos + 1, left - 1));
        match port {
            Port::Center => {
                if entry[complex.face(t)] == t {
                    order.push(complex.face(t));
                }
            }
            Port::Side(side) => {
                if let Some(&(_, child)) = tree.children[t].iter().find(|(s, _)| *s == side) {
                    stack.push((child, start_of(child), 3));
                }
            }
        }
    }
    let base_face = complex.face(root);
    let k = order.iter().position(|&f| f == base_face).expect("base face visited");
    order.rotate_left(k);
    order
}

/// Every triangle of the complex.
pub fn triangles(complex: &TriangleComplex) -> std::ops::Range<Triangle> {
    0..complex.len()
}
