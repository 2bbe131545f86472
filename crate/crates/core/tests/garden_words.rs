//! Gardens, crossing sequences and their word matrices.

mod common;

use common::{k4, prism, random_path, theta};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trivalent_dga::algebra::{Generator, Matrix2};
use trivalent_dga::garden::{homotopy_reduce, CrossingSequence, Garden, GardenError, Side, TriangleComplex};
use trivalent_dga::plane_graph::PlaneGraph;
use trivalent_dga::words::{differential, enumerate_sheet_sequences, face_boundary, matrix_of_words, verify_d_squared};

#[test]
fn triangle_complex_neighbours() {
    for g in [PlaneGraph::theta(), PlaneGraph::k4(), PlaneGraph::prism()] {
        let cx = TriangleComplex::new(&g);
        assert_eq!(cx.len(), 6 * g.genus() + 6);
        for t in 0..cx.len() {
            assert_eq!(cx.neighbor(cx.neighbor(t, Side::S), Side::S), t);
            assert_eq!(cx.neighbor(cx.neighbor(t, Side::L), Side::R), t);
            assert_eq!(cx.face(cx.neighbor(t, Side::L)), cx.face(t));
            let circle = cx.center_circle(t);
            assert_eq!(circle.len(), g.face_darts(cx.face(t)).len());
            assert_eq!(circle.end(), t);
        }
    }
}

#[test]
fn canonical_gardens_are_valid() {
    for fx in [theta(), k4(), prism()] {
        let g = &fx.garden;
        assert!(g.validate(&fx.complex), "{}", fx.name);
        assert_eq!(g.tines().len(), fx.graph.num_faces());
        assert!(g.finite_type(&fx.complex).is_some());
        let mut order = g.seed_order();
        order.sort_unstable();
        assert_eq!(order, (0..fx.graph.num_faces()).collect::<Vec<_>>());
        for t in g.tines() {
            assert_eq!(t.path.num_centers(), 1);
        }
    }
}

#[test]
fn garden_text_round_trips() {
    for fx in [theta(), k4(), prism()] {
        let text = fx.garden.to_text(&fx.graph);
        let back = Garden::from_text(&fx.graph, &text).unwrap();
        assert!(!back.geometry_checked);
        assert_eq!(back.tines(), fx.garden.tines());
        assert_eq!(back.to_text(&fx.graph), text);
    }
    let g = PlaneGraph::theta();
    assert!(matches!(Garden::from_text(&g, "base e1+\n"), Err(GardenError::Parse(_))));
    assert!(matches!(Garden::from_text(&g, "orientation ++\nbase e1+\n"), Err(GardenError::Parse(_))));
    assert!(Garden::from_text(&g, "orientation +++\nbase e1+\napproach f9: -\n").is_err());
}

#[test]
fn crossing_text_round_trips() {
    let fx = k4();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..50 {
        let p = random_path(&fx.complex, rng.gen_range(0..12), &mut rng);
        let back = CrossingSequence::from_text(&fx.complex, p.start, &p.to_text()).unwrap();
        assert_eq!(matrix_of_words(&fx.graph, &fx.garden.orientation, &back), matrix_of_words(&fx.graph, &fx.garden.orientation, &p));
    }
}

#[test]
fn word_matrices_are_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for fx in [theta(), k4()] {
        let o = &fx.garden.orientation;
        for _ in 0..60 {
            let a = random_path(&fx.complex, rng.gen_range(0..10), &mut rng);
            let mut b = CrossingSequence::empty(a.end());
            for _ in 0..rng.gen_range(0..10) {
                common::push_random(&fx.complex, &mut b, &mut rng);
            }
            let product = matrix_of_words(&fx.graph, o, &a).mul(&matrix_of_words(&fx.graph, o, &b));
            assert!(fx.ring.matrix_equal(&matrix_of_words(&fx.graph, o, &a.concat(&b)), &product));
        }
    }
}

#[test]
fn matrix_product_matches_sheet_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for fx in [theta(), k4()] {
        let o = &fx.garden.orientation;
        for _ in 0..60 {
            let p = random_path(&fx.complex, rng.gen_range(0..13), &mut rng);
            let m = matrix_of_words(&fx.graph, o, &p);
            for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                assert_eq!(fx.ring.canonicalize(m.entry(i, j)), fx.ring.canonicalize(&enumerate_sheet_sequences(&fx.graph, o, &p, i, j)));
            }
        }
    }
}

#[test]
fn homotopy_reduction_preserves_the_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for fx in [theta(), k4(), prism()] {
        let o = &fx.garden.orientation;
        for _ in 0..80 {
            let p = random_path(&fx.complex, rng.gen_range(0..30), &mut rng);
            let r = homotopy_reduce(&fx.complex, &p);
            assert!(r.validate(&fx.complex));
            assert!(r.len() <= p.len());
            assert_eq!(r.end(), p.end());
            assert!(fx.ring.matrix_equal(&matrix_of_words(&fx.graph, o, &r), &matrix_of_words(&fx.graph, o, &p)));
        }
    }
}

#[test]
fn differential_squares_to_zero_on_larger_graphs() {
    for fx in [common::Fixture::new("cube", PlaneGraph::cube()), common::Fixture::new("dumbbell", PlaneGraph::dumbbell())] {
        assert!(verify_d_squared(&fx.graph, &fx.garden, &fx.ring).is_ok(), "{}", fx.name);
    }
    let fx = k4();
    for base in 0..fx.graph.num_darts() {
        assert!(verify_d_squared(&fx.graph, &fx.rebased(base), &fx.ring).is_ok(), "base {base}");
    }
}

#[test]
fn a_misordered_garden_fails() {
    let fx = k4();
    let text = fx.garden.to_text(&fx.graph);
    let mut lines: Vec<&str> = text.lines().collect();
    lines.swap(2, 3);
    let mutated = Garden::from_text(&fx.graph, &lines.join("\n")).unwrap();
    assert!(mutated.validate(&fx.complex));
    let (generator, residual) = verify_d_squared(&fx.graph, &mutated, &fx.ring).unwrap_err();
    assert!(matches!(generator, Generator::X | Generator::Y | Generator::Z | Generator::W));
    assert!(!residual.is_zero());
}

#[test]
fn face_differentials_sum_corners() {
    let fx = k4();
    let d = differential(&fx.graph, &fx.garden);
    for f in 0..fx.graph.num_faces() {
        let e = d.on_generator(Generator::Face(f));
        assert_eq!(e, face_boundary(&fx.graph, &fx.garden.orientation, f));
        assert_eq!(e.num_terms(), fx.graph.face_darts(f).len());
        assert_eq!(e.homogeneous_degree(), Some(0));
    }
    let x = Matrix2::generators().map(|e| d.apply(e));
    assert_eq!(x.entry(0, 1).homogeneous_degree(), Some(1));
}
