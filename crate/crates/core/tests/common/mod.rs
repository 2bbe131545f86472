//! Shared fixtures for the integration tests: named graphs with their
//! canonical gardens and a seeded generator of random crossing sequences.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use trivalent_dga::algebra::GroupRing;
use trivalent_dga::garden::{canonical_garden, CrossingSequence, Garden, Side, TriangleComplex};
use trivalent_dga::group_theory::{EdgeOrientation, Group};
use trivalent_dga::plane_graph::PlaneGraph;

/// A graph with its coefficient ring, triangle complex and canonical garden.
pub struct Fixture {
    pub name: &'static str,
    pub graph: PlaneGraph,
    pub ring: GroupRing,
    pub complex: TriangleComplex,
    pub garden: Garden,
}

impl Fixture {
    pub fn new(name: &'static str, graph: PlaneGraph) -> Self {
        Fixture::with_base(name, graph, 0)
    }

    pub fn with_base(name: &'static str, graph: PlaneGraph, base: usize) -> Self {
        let ring = GroupRing::new(Group::full(&graph).expect("coefficient group"));
        let complex = TriangleComplex::new(&graph);
        let garden = canonical_garden(&graph, base, EdgeOrientation::standard(graph.num_edges()), &ring).expect("canonical garden");
        Fixture { name, graph, ring, complex, garden }
    }

    /// A copy of this fixture with its garden rebuilt at another base.
    pub fn rebased(&self, base: usize) -> Garden {
        canonical_garden(&self.graph, base, EdgeOrientation::standard(self.graph.num_edges()), &self.ring).expect("canonical garden")
    }
}

pub fn theta() -> Fixture {
    Fixture::new("theta", PlaneGraph::theta())
}

pub fn k4() -> Fixture {
    Fixture::new("k4", PlaneGraph::k4())
}

pub fn prism() -> Fixture {
    Fixture::new("prism", PlaneGraph::prism())
}

/// A random side crossing or center pass from the end of `path`.
pub fn push_random(complex: &TriangleComplex, path: &mut CrossingSequence, rng: &mut ChaCha8Rng) {
    match rng.gen_range(0..7) {
        0 | 1 => path.push_side(complex, Side::S),
        2 | 3 => path.push_side(complex, Side::L),
        4 | 5 => path.push_side(complex, Side::R),
        _ => path.push_center(complex),
    }
}

/// A random validated crossing sequence of the given length.
pub fn random_path(complex: &TriangleComplex, len: usize, rng: &mut ChaCha8Rng) -> CrossingSequence {
    let mut path = CrossingSequence::empty(rng.gen_range(0..complex.len()));
    for _ in 0..len {
        push_random(complex, &mut path, rng);
    }
    assert!(path.validate(complex));
    path
}

/// Splices `inserted` (which must start and end at the triangle reached
/// after `pos` events) into `path` after its first `pos` events.
pub fn splice(path: &CrossingSequence, pos: usize, inserted: &[trivalent_dga::garden::CrossingEvent]) -> CrossingSequence {
    let mut events = path.events[..pos].to_vec();
    events.extend_from_slice(inserted);
    events.extend_from_slice(&path.events[pos..]);
    CrossingSequence { start: path.start, events }
}

/// The triangle reached after the first `pos` events of `path`.
pub fn triangle_at(path: &CrossingSequence, pos: usize) -> usize {
    if pos == 0 {
        path.start
    } else {
        path.events[pos - 1].to()
    }
}

/// A crossing immediately followed by its reverse.
pub fn backtrack(complex: &TriangleComplex, t: usize, side: Side) -> Vec<trivalent_dga::garden::CrossingEvent> {
    let e = complex.cross(t, side);
    vec![e, e.inverse()]
}

/// Steps winding around vertex `v` from triangle `t`, counterclockwise or not.
pub fn winding(graph: &PlaneGraph, complex: &TriangleComplex, t: usize, v: usize, ccw: bool, steps: usize) -> CrossingSequence {
    let mut seq = CrossingSequence::empty(t);
    for _ in 0..steps {
        let cur = seq.end();
        let side = match (ccw, graph.tail(cur) == v) {
            (true, true) => Side::R,
            (true, false) => Side::S,
            (false, true) => Side::S,
            (false, false) => Side::L,
        };
        seq.push_side(complex, side);
    }
    seq
}

/// Loads one of the graph files shipped in the workspace `graphs/` directory.
pub fn load_graph(name: &str) -> PlaneGraph {
    let path = format!("{}/../../graphs/{name}.graph", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    PlaneGraph::parse(&text).unwrap_or_else(|e| panic!("{path}: {e}"))
}
