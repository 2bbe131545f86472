//! Benchmark fixtures shared by the criterion targets.

use trivalent_dga::algebra::GroupRing;
use trivalent_dga::garden::{canonical_garden, Garden, TriangleComplex};
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
        let ring = GroupRing::new(Group::full(&graph).expect("coefficient group"));
        let complex = TriangleComplex::new(&graph);
        let garden = canonical_garden(&graph, 0, EdgeOrientation::standard(graph.num_edges()), &ring).expect("canonical garden");
        Fixture { name, graph, ring, complex, garden }
    }
}

/// The genus 0, 1 and 2 fixtures.
pub fn fixtures() -> Vec<Fixture> {
    vec![
        Fixture::new("theta", PlaneGraph::theta()),
        Fixture::new("k4", PlaneGraph::k4()),
        Fixture::new("prism", PlaneGraph::prism()),
    ]
}
