//! Grassmannian face colorings and their correspondence with representations.

mod common;

use common::{k4, theta, Fixture};
use trivalent_dga::colorings::{
    coloring_to_rep, counting_identities, enumerate_colorings, enumerate_grassmannian, face_adjacencies, is_transverse, pgl_orbits,
    rep_to_coloring, verify_bijection, FaceColoring, GrassmannPoint,
};
use trivalent_dga::plane_graph::PlaneGraph;
use trivalent_dga::representations::{
    general_linear_generators, orbit_count, FiniteField, FqMatrix, RepresentationProblem, DEFAULT_SEARCH_LIMIT,
};

#[test]
fn grassmannian_sizes() {
    for q in [2, 3, 4, 5, 7] {
        let f = FiniteField::new(q).unwrap();
        assert_eq!(enumerate_grassmannian(&f, 1).len(), q + 1);
    }
    for (q, n) in [(2, 35), (3, 130)] {
        let f = FiniteField::new(q).unwrap();
        let points = enumerate_grassmannian(&f, 2);
        assert_eq!(points.len(), n);
        assert!(points.iter().all(|p| p.dim() == 2 && p.ambient() == 4));
    }
}

#[test]
fn transversality() {
    for (q, r) in [(2, 1), (3, 1), (2, 2), (3, 2)] {
        let f = FiniteField::new(q).unwrap();
        let std: Vec<_> = (0..3).map(|k| GrassmannPoint::standard(r, k, &f)).collect();
        for a in 0..3 {
            assert!(!is_transverse(&std[a], &std[a], &f).unwrap());
            for b in 0..3 {
                if a != b {
                    assert!(is_transverse(&std[a], &std[b], &f).unwrap());
                }
            }
        }
        let points = enumerate_grassmannian(&f, r);
        for p in points.iter().take(10) {
            let again = GrassmannPoint::from_columns(&p.columns(), &f).unwrap();
            assert_eq!(&again, p);
        }
    }
    let f = FiniteField::new(2).unwrap();
    let line = GrassmannPoint::standard(1, 0, &f);
    let plane = GrassmannPoint::standard(2, 0, &f);
    assert!(is_transverse(&line, &plane, &f).is_err());
}

#[test]
fn coloring_counts() {
    let f2 = FiniteField::new(2).unwrap();
    let f3 = FiniteField::new(3).unwrap();
    let g = PlaneGraph::theta();
    let cols = enumerate_colorings(&g, &f2, 1, DEFAULT_SEARCH_LIMIT).unwrap();
    assert_eq!(cols.len(), 6);
    assert!(cols.iter().all(|c| c.is_valid(&g, &f2)));
    assert_eq!(orbit_count(&pgl_orbits(&cols, &f2, 1).unwrap()), 1);
    let g = PlaneGraph::k4();
    assert_eq!(enumerate_colorings(&g, &f2, 1, DEFAULT_SEARCH_LIMIT).unwrap().len(), 0);
    let cols = enumerate_colorings(&g, &f3, 1, DEFAULT_SEARCH_LIMIT).unwrap();
    assert_eq!(cols.len(), 24);
    assert_eq!(orbit_count(&pgl_orbits(&cols, &f3, 1).unwrap()), 1);
    // A bridge makes a face adjacent to itself, which no coloring allows.
    let g = PlaneGraph::dumbbell();
    assert!(face_adjacencies(&g).iter().any(|(a, b)| a == b));
    assert_eq!(enumerate_colorings(&g, &f3, 1, DEFAULT_SEARCH_LIMIT).unwrap().len(), 0);
    assert!(enumerate_colorings(&PlaneGraph::cube(), &f3, 2, 10).is_err());
}

#[test]
fn rank_one_counts_match_the_dual_chromatic_polynomial() {
    for g in [PlaneGraph::theta(), PlaneGraph::k4(), PlaneGraph::prism(), PlaneGraph::cube(), PlaneGraph::dumbbell()] {
        for q in [2, 3, 4, 5] {
            let report = counting_identities(&g, &FiniteField::new(q).unwrap()).unwrap();
            assert!(report.passes(), "{report:?}");
        }
    }
}

fn block_diagonal(g: &FqMatrix) -> FqMatrix {
    let z = FqMatrix::zeros(g.rows, g.cols);
    FqMatrix::from_blocks(g, &z, &z, g)
}

#[test]
fn psi_is_conjugation_equivariant() {
    let fx = k4();
    let f = FiniteField::new(3).unwrap();
    let tree = fx.graph.enumerate_trees(0).remove(0);
    let reps = RepresentationProblem::for_garden(&fx.graph, &fx.garden, &tree).enumerate(&f, 2, DEFAULT_SEARCH_LIMIT).unwrap();
    assert_eq!(reps.len(), 27);
    for rep in &reps {
        let c = rep_to_coloring(&fx.graph, &fx.complex, &fx.garden, rep, &f).unwrap();
        assert!(c.is_valid(&fx.graph, &f));
        for g in general_linear_generators(&f, 2) {
            let conj = rep_to_coloring(&fx.graph, &fx.complex, &fx.garden, &rep.conjugate(&g, &f), &f).unwrap();
            assert_eq!(conj, c.transform(&block_diagonal(&g), &f));
        }
    }
}

#[test]
fn theta_of_a_theta_graph_coloring_is_trivial() {
    let fx = theta();
    let f = FiniteField::new(2).unwrap();
    let tree = fx.graph.enumerate_trees(0).remove(0);
    assert!(tree.edges.is_empty());
    for c in enumerate_colorings(&fx.graph, &f, 1, DEFAULT_SEARCH_LIMIT).unwrap() {
        let rep = coloring_to_rep(&fx.graph, &fx.complex, &fx.garden.orientation, &tree, &c, &f).unwrap();
        assert!(rep.values.is_empty());
    }
}

/// Ψ∘Θ returns every coloring to its own orbit.
fn assert_round_trip(fx: &Fixture, q: usize, r: usize) {
    let f = FiniteField::new(q).unwrap();
    let cols = enumerate_colorings(&fx.graph, &f, r, DEFAULT_SEARCH_LIMIT).unwrap();
    let orbits = pgl_orbits(&cols, &f, r).unwrap();
    let index: std::collections::HashMap<&FaceColoring, usize> = cols.iter().enumerate().map(|(i, c)| (c, i)).collect();
    for tree in fx.graph.enumerate_trees(1).iter().take(2) {
        let problem = RepresentationProblem::for_garden(&fx.graph, &fx.garden, tree);
        for (i, c) in cols.iter().enumerate() {
            let rep = coloring_to_rep(&fx.graph, &fx.complex, &fx.garden.orientation, tree, c, &f).unwrap();
            assert!(problem.verify(&rep, &f), "{} q={q} r={r}", fx.name);
            let back = rep_to_coloring(&fx.graph, &fx.complex, &fx.garden, &rep, &f).unwrap();
            assert_eq!(orbits[index[&back]], orbits[i], "{} q={q} r={r}", fx.name);
        }
    }
}

#[test]
fn theta_map_inverts_psi_on_orbits() {
    assert_round_trip(&k4(), 3, 1);
    assert_round_trip(&k4(), 4, 1);
    assert_round_trip(&common::prism(), 3, 1);
    assert_round_trip(&theta(), 2, 2);
}

#[test]
fn bijection_reports() {
    for (fx, q, r) in [(theta(), 2, 1), (theta(), 2, 2), (k4(), 3, 1), (k4(), 5, 1), (k4(), 2, 2), (common::prism(), 3, 1)] {
        for tree in fx.graph.enumerate_trees(0).iter().take(2) {
            let report = verify_bijection(&fx.graph, &fx.garden, tree, &FiniteField::new(q).unwrap(), r).unwrap();
            assert!(report.passes(), "{} q={q} r={r}: {report:?}", fx.name);
        }
    }
    let fx = k4();
    let tree = fx.graph.enumerate_trees(0).remove(0);
    let empty = verify_bijection(&fx.graph, &fx.garden, &tree, &FiniteField::new(2).unwrap(), 1).unwrap();
    assert_eq!((empty.representations, empty.colorings), (0, 0));
    assert!(empty.passes());
}
