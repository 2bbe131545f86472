//! The free graded algebra over the group ring: products, the Leibniz rule,
//! exact equality, and the tame maps (elementary automorphisms,
//! regenerations, stabilizations).

mod common;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trivalent_dga::algebra::{
    check_chain_homotopy, elementary_automorphism, AlgebraElement, AlgebraError, DgMap, Dga, FirstOccurrenceHomotopy, Generator, Matrix2,
    Monomial, RingMap,
};
use trivalent_dga::dg_transformations::{algebra_generators, move_vii_map, move_vii_regeneration};
use trivalent_dga::group_theory::{vertex_relator, GroupWord};
use trivalent_dga::words::differential;

/// A random element over the given generators with short ring words.
fn random_element(gens: &[Generator], darts: usize, rng: &mut ChaCha8Rng) -> AlgebraElement {
    let mut e = AlgebraElement::zero();
    for _ in 0..rng.gen_range(1..4) {
        let k = rng.gen_range(0..3);
        let mut m = Monomial::from_ring(GroupWord::generator(rng.gen_range(0..darts)));
        for _ in 0..k {
            m = m.mul(&Monomial::generator(gens[rng.gen_range(0..gens.len())]));
            if rng.gen_bool(0.5) {
                m = m.mul(&Monomial::from_ring(GroupWord::generator(rng.gen_range(0..darts)).inverse()));
            }
        }
        e.add_term(m, BigInt::from(rng.gen_range(-3..=3)));
    }
    e
}

#[test]
fn products_are_associative_and_bilinear() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let gens = algebra_generators(&common::theta().graph);
    for _ in 0..100 {
        let [a, b, c] = [0; 3].map(|_| random_element(&gens, 6, &mut rng));
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        assert!(a.sub(&a).is_zero());
        assert_eq!(AlgebraElement::one().mul(&a), a);
    }
}

#[test]
fn differential_obeys_leibniz() {
    let fx = common::k4();
    let d = differential(&fx.graph, &fx.garden);
    let gens = algebra_generators(&fx.graph);
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..60 {
        let s = gens[rng.gen_range(0..gens.len())];
        let a = AlgebraElement::generator(s);
        let b = random_element(&gens, fx.graph.num_darts(), &mut rng);
        let sign = if s.degree() % 2 == 0 { 1 } else { -1 };
        let expected = d.apply(&a).mul(&b).add(&a.mul(&d.apply(&b)).scale(&BigInt::from(sign)));
        assert!(fx.ring.equal(&d.apply(&a.mul(&b)), &expected));
    }
}

#[test]
fn ring_equality_uses_the_relators() {
    let fx = common::k4();
    let r = vertex_relator(&fx.graph, 2);
    let a = AlgebraElement::ring(r.mul(&GroupWord::generator(3)), 2);
    let b = AlgebraElement::ring(GroupWord::generator(3), 2);
    assert!(fx.ring.equal(&a, &b));
    assert_eq!(fx.ring.canonicalize(&a.sub(&b)), AlgebraElement::zero());
    assert!(!fx.ring.equal(&a, &AlgebraElement::ring(GroupWord::generator(4), 2)));
}

#[test]
fn text_form_round_trips() {
    let fx = common::k4();
    let d = differential(&fx.graph, &fx.garden);
    for s in algebra_generators(&fx.graph) {
        let e = d.on_generator(s);
        let back = AlgebraElement::from_text(&fx.graph, &e.to_text(&fx.graph)).unwrap();
        assert_eq!(back, e, "{s}");
    }
    assert!(matches!(AlgebraElement::from_text(&fx.graph, "[2 x"), Err(AlgebraError::Parse(_))));
}

#[test]
fn matrices_multiply_entrywise() {
    let x = Matrix2::generators();
    let n = Matrix2::nilpotent(AlgebraElement::generator(Generator::Face(0)));
    assert_eq!(n.mul(&n), Matrix2::zero());
    let u = Matrix2::unipotent(AlgebraElement::ring(GroupWord::generator(1), 1));
    let v = Matrix2::unipotent(AlgebraElement::ring(GroupWord::generator(1), -1));
    assert_eq!(u.mul(&v), Matrix2::identity());
    assert_eq!(Matrix2::identity().mul(&x), x);
    assert_eq!(x.entry(0, 1), &AlgebraElement::generator(Generator::W));
}

#[test]
fn elementary_automorphisms_invert() {
    let fx = common::theta();
    let gens = algebra_generators(&fx.graph);
    let alpha = AlgebraElement::generator(Generator::Face(1)).mul(&AlgebraElement::generator(Generator::Face(2)));
    let (fwd, inv) = elementary_automorphism(Generator::X, &alpha).unwrap();
    let darts: Vec<usize> = (0..fx.graph.num_darts()).collect();
    assert!(fwd.then(&inv).agrees_with(&DgMap::identity(), &gens, &darts, &fx.ring));
    assert!(matches!(
        elementary_automorphism(Generator::X, &AlgebraElement::generator(Generator::X)),
        Err(AlgebraError::SelfReference { .. })
    ));
}

#[test]
fn ring_maps_compose() {
    let mut a = RingMap::identity();
    a.set(0, true, GroupWord::generator(2));
    let mut b = RingMap::identity();
    b.set(2, true, GroupWord::generator(4).inverse());
    let (neg, w) = a.then(&b).apply_word(&GroupWord::generator(0));
    assert!(!neg);
    assert_eq!(w, GroupWord::generator(4).inverse());
    assert!(RingMap::identity().is_identity());
}

#[test]
fn stabilization_round_trips() {
    let fx = common::k4();
    let dga = Dga { generators: algebra_generators(&fx.graph), differential: differential(&fx.graph, &fx.garden) };
    let stab = dga.stabilize(3);
    assert!(stab.dga.differential.squares_to_zero(&fx.ring).is_ok());
    for &s in &dga.generators {
        stab.inclusion.check_intertwines(&[s], &dga.differential, &stab.dga.differential, &fx.ring).unwrap();
    }
    stab.projection.check_intertwines(&stab.dga.generators, &stab.dga.differential, &dga.differential, &fx.ring).unwrap();
    let (back, _) = stab.dga.destabilize(stab.x, stab.y, &fx.ring).unwrap();
    assert_eq!(back.generators, dga.generators);
    for &s in &dga.generators {
        assert!(fx.ring.equal(&back.differential.on_generator(s), &dga.differential.on_generator(s)));
    }
    // A pair that another differential mentions cannot be removed.
    assert!(matches!(
        dga.destabilize(Generator::W, Generator::Face(0), &fx.ring),
        Err(AlgebraError::DestabilizationObstructed { .. })
    ));
}

#[test]
fn stabilization_homotopy() {
    let fx = common::theta();
    let dga = Dga { generators: algebra_generators(&fx.graph), differential: differential(&fx.graph, &fx.garden) };
    let stab = dga.stabilize(2);
    let round = stab.projection.then(&stab.inclusion);
    let homotopy = FirstOccurrenceHomotopy { x: stab.x, y: stab.y };
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let gens = stab.dga.generators.clone();
    let tests: Vec<_> = (0..80).map(|_| random_element(&gens, fx.graph.num_darts(), &mut rng)).collect();
    assert!(check_chain_homotopy(&round, &stab.dga.differential, &homotopy, &tests, &fx.ring).unwrap());
}

#[test]
fn move_vii_regeneration_matches_its_map() {
    for fx in [common::theta(), common::k4()] {
        let reg = move_vii_regeneration(&fx.graph, &fx.garden);
        let (_, map) = move_vii_map(&fx.graph, &fx.complex, &fx.garden);
        let gens = [Generator::X, Generator::Y, Generator::Z, Generator::W];
        assert!(reg.to_map().agrees_with(&map, &gens, &[], &fx.ring));
        let round = reg.to_map().then(&reg.inverse().to_map());
        assert!(round.agrees_with(&DgMap::identity(), &gens, &[], &fx.ring));
        // The diagonal entries carry inverse units; the off-diagonal ones do not.
        assert_eq!(reg.simple_generators(fx.graph.num_edges()), vec![Generator::X, Generator::Z]);
        assert!(!reg.is_simple(fx.graph.num_edges()));
    }
}
