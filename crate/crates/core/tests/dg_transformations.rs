//! Dg-maps attached to garden moves, changes of tree, destabilization and
//! abelianization.

mod common;

use common::{k4, prism, theta, Fixture};
use trivalent_dga::algebra::{DgMap, Generator, GroupRing, Matrix2};
use trivalent_dga::dg_transformations::{
    abelianize_dga, algebra_generators, braid_action, braid_witness, doubled_center_vanishes, finite_type_destabilize, join_paths,
    move_v_inverse_map, move_v_map, move_v_shift, move_vi_map, project_differential, project_map, tree_transition, CommutativeDifferential,
    SignedPath, TransformError, TreeFrame,
};
use trivalent_dga::garden::Side;
use trivalent_dga::group_theory::Group;
use trivalent_dga::plane_graph::SpanningTreeMissingOne;
use trivalent_dga::representations::{enumerate_representations, is_bijection, pullback, tree_darts, FiniteField};
use trivalent_dga::words::differential;

fn all_darts(fx: &Fixture) -> Vec<usize> {
    (0..fx.graph.num_darts()).collect()
}

/// A path from one root to another that may cross any edge.
fn connecting_path(fx: &Fixture, from: &TreeFrame, to: &TreeFrame) -> SignedPath {
    let free = SpanningTreeMissingOne { missed_vertex: from.tree.missed_vertex, edges: Vec::new() };
    TreeFrame::new(&fx.graph, &fx.complex, &free).canonical_path(&fx.complex, to.root).unwrap()
}

fn frames(fx: &Fixture) -> Vec<TreeFrame> {
    (0..fx.graph.num_vertices())
        .flat_map(|v| fx.graph.enumerate_trees(v).into_iter().take(2))
        .map(|t| TreeFrame::new(&fx.graph, &fx.complex, &t))
        .collect()
}

#[test]
fn move_v_and_its_inverse_cancel() {
    for fx in [theta(), k4(), prism()] {
        let gens = algebra_generators(&fx.graph);
        for i in 1..fx.garden.approaches().len() {
            let (next, fwd) = move_v_map(&fx.graph, &fx.complex, &fx.garden, i).unwrap();
            assert!(next.validate(&fx.complex));
            fwd.check_intertwines(&gens, &differential(&fx.graph, &fx.garden), &differential(&fx.graph, &next), &fx.ring).unwrap();
            let (back, inv) = move_v_inverse_map(&fx.graph, &fx.complex, &next, i).unwrap();
            assert_eq!(back, fx.garden);
            assert!(fwd.then(&inv).agrees_with(&DgMap::identity(), &gens, &all_darts(&fx), &fx.ring));
        }
        let n = fx.garden.approaches().len();
        assert!(move_v_shift(&fx.graph, &fx.complex, &fx.garden, 0).is_err());
        assert!(move_v_shift(&fx.graph, &fx.complex, &fx.garden, n).is_err());
    }
}

#[test]
fn move_vi_rejects_the_edge_side() {
    let fx = k4();
    assert!(matches!(move_vi_map(&fx.graph, &fx.complex, &fx.garden, Side::S), Err(TransformError::Garden(_))));
    assert!(move_vi_map(&fx.graph, &fx.complex, &fx.garden, Side::L).is_ok());
}

#[test]
fn braid_words_and_witnesses() {
    let fx = theta();
    let w = braid_witness(&fx.graph, &fx.complex, &fx.garden, 1, &fx.ring).unwrap();
    assert!(w.holds);
    // With three tines the two sides of the braid relation agree exactly.
    assert!(fx.ring.matrix_equal(&w.discrepancy, &Matrix2::zero()));
    let fx = k4();
    for i in [1, 2] {
        assert!(braid_witness(&fx.graph, &fx.complex, &fx.garden, i, &fx.ring).unwrap().holds);
    }
    let (g, shift) = braid_action(&fx.graph, &fx.complex, &fx.garden, &[2, -2, 1, -1]).unwrap();
    assert_eq!(g, fx.garden);
    assert!(fx.ring.matrix_equal(&shift, &Matrix2::zero()));
    for k in 0..fx.garden.tines().len() {
        assert!(doubled_center_vanishes(&fx.graph, &fx.garden, k, &fx.ring));
    }
}

#[test]
fn tree_transitions_are_automorphisms() {
    for fx in [theta(), k4()] {
        let gens = algebra_generators(&fx.graph);
        let d = differential(&fx.graph, &fx.garden);
        let frames = frames(&fx);
        for a in &frames {
            let own = tree_transition(&fx.graph, &fx.complex, &fx.garden, a, a, &SignedPath::constant(a.root)).unwrap();
            assert!(own.agrees_with(&DgMap::identity(), &gens, &all_darts(&fx), &fx.ring), "{}", fx.name);
            for b in &frames {
                let gamma = connecting_path(&fx, a, b);
                let map = tree_transition(&fx.graph, &fx.complex, &fx.garden, a, b, &gamma).unwrap();
                map.check_intertwines(&gens, &d, &d, &fx.ring).unwrap();
            }
        }
    }
}

#[test]
fn tree_transitions_compose() {
    let fx = k4();
    let gens = algebra_generators(&fx.graph);
    let frames = frames(&fx);
    for (a, b, c) in [(0, 2, 5), (1, 4, 7), (3, 6, 0)] {
        let (a, b, c) = (&frames[a], &frames[b], &frames[c]);
        let ab = connecting_path(&fx, a, b);
        let bc = connecting_path(&fx, b, c);
        let ac = join_paths(&fx.graph, &fx.complex, b.tree.missed_vertex, &ab, &bc).unwrap();
        let first = tree_transition(&fx.graph, &fx.complex, &fx.garden, a, b, &ab).unwrap();
        let second = tree_transition(&fx.graph, &fx.complex, &fx.garden, b, c, &bc).unwrap();
        let direct = tree_transition(&fx.graph, &fx.complex, &fx.garden, a, c, &ac).unwrap();
        assert!(second.then(&first).agrees_with(&direct, &gens, &all_darts(&fx), &fx.ring));
    }
}

#[test]
fn tree_transitions_identify_representations() {
    let fx = k4();
    let f = FiniteField::new(3).unwrap();
    let frames = frames(&fx);
    for a in frames.iter().step_by(2) {
        let source = enumerate_representations(&fx.graph, &fx.garden, &a.tree, &f, 1).unwrap();
        for b in frames.iter().step_by(3) {
            let map = tree_transition(&fx.graph, &fx.complex, &fx.garden, a, b, &connecting_path(&fx, a, b)).unwrap();
            let target = enumerate_representations(&fx.graph, &fx.garden, &b.tree, &f, 1).unwrap();
            let darts = tree_darts(&fx.graph, &a.tree);
            assert!(is_bijection(&target, &source, |e| pullback(&map, e, &darts, &f)));
        }
    }
}

#[test]
fn projected_differentials_square_to_zero() {
    for fx in [k4(), prism()] {
        let gens = algebra_generators(&fx.graph);
        let d = differential(&fx.graph, &fx.garden);
        for tree in fx.graph.enumerate_trees(1).iter().take(2) {
            let ring = GroupRing::new(Group::tree(&fx.graph, tree).unwrap());
            let p = project_differential(&d, &gens, tree);
            assert!(p.squares_to_zero(&ring).is_ok(), "{}", fx.name);
            let (next, map) = move_v_map(&fx.graph, &fx.complex, &fx.garden, 1).unwrap();
            let projected = project_map(&map, &gens, tree);
            let target = project_differential(&differential(&fx.graph, &next), &gens, tree);
            for &s in &gens {
                let lhs = projected.apply(&p.on_generator(s));
                let rhs = target.apply(&projected.on_generator(s));
                assert!(ring.equal(&lhs, &rhs), "{} {s}", fx.name);
            }
        }
    }
}

#[test]
fn finite_type_destabilization() {
    for fx in [theta(), k4(), prism()] {
        let tree = fx.graph.enumerate_trees(0).remove(0);
        let ring = GroupRing::new(Group::tree(&fx.graph, &tree).unwrap());
        let out = finite_type_destabilize(&fx.graph, &fx.complex, &fx.garden, &tree, &ring).unwrap();
        assert_eq!(out.reduced.generators.len(), fx.graph.num_faces() + 2);
        assert!(!out.reduced.generators.contains(&Generator::W));
        assert!(!out.reduced.generators.contains(&Generator::Face(out.base_face)));
        assert!(out.reduced.differential.squares_to_zero(&ring).is_ok(), "{}", fx.name);
        assert!(out.shifted.differential.squares_to_zero(&ring).is_ok(), "{}", fx.name);
        assert!(ring.equal(&out.shifted.differential.on_generator(Generator::W), &trivalent_dga::algebra::AlgebraElement::generator(Generator::Face(out.base_face))));
    }
    let fx = k4();
    let tree = fx.graph.enumerate_trees(0).remove(0);
    let ring = GroupRing::new(Group::tree(&fx.graph, &tree).unwrap());
    let middle = fx.garden.apply_move_v(&fx.complex, 1).unwrap();
    assert!(middle.finite_type(&fx.complex).is_none());
    assert!(matches!(
        finite_type_destabilize(&fx.graph, &fx.complex, &middle, &tree, &ring),
        Err(TransformError::NotFiniteType)
    ));
}

#[test]
fn abelianized_differential_matches_direct_computation() {
    for fx in [theta(), k4(), prism()] {
        let e = fx.graph.num_edges();
        let gens = algebra_generators(&fx.graph);
        let commutative = CommutativeDifferential::new(&fx.graph, &fx.garden);
        let ab = abelianize_dga(&differential(&fx.graph, &fx.garden), &gens, e);
        for s in &gens {
            assert_eq!(ab[s], commutative.on_generator(*s), "{} {s}", fx.name);
        }
        for s in &gens {
            assert!(commutative.apply(&commutative.on_generator(*s)).is_zero(), "{} {s}", fx.name);
        }
        for edge in [0, e - 1] {
            let flipped = fx.garden.flip_orientation(edge);
            let c = CommutativeDifferential::new(&fx.graph, &flipped);
            let ab = abelianize_dga(&differential(&fx.graph, &flipped), &gens, e);
            assert!(gens.iter().all(|s| ab[s] == c.on_generator(*s)), "{} flip {edge}", fx.name);
        }
    }
}
