//! Dg-maps between the algebras of different gardens and trees: orientation
//! changes, the three garden moves, the exactness witnesses for braid
//! relations and the full twist, projection to a tree quotient, transition
//! maps between trees, destabilization of finite-type gardens, and the
//! abelianized model with commuting coefficients.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{
    elementary_automorphism, AlgebraElement, AlgebraError, Differential, DgMap, Dga, Generator, GroupRing, Matrix2, Monomial,
    Regeneration, RingMap, Unit,
};
use crate::garden::{CrossingEvent, CrossingSequence, FiniteTypePosition, Garden, GardenError, Side, Triangle, TriangleComplex};
use crate::group_theory::{abelianize, letter, project_to_tree, EdgeOrientation, GroupWord, Letter};
use crate::plane_graph::{PlaneGraph, SpanningTreeMissingOne};
use crate::words;

/// Errors raised while building dg-maps.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error(transparent)]
    Garden(#[from] GardenError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("garden is not of finite type")]
    NotFiniteType,
    #[error("no path between {from:?} and {to:?} around vertex {vertex}")]
    Unroutable { vertex: usize, from: SheetState, to: SheetState },
}

/// All generators of the enlarged algebra: faces and the entries of X.
pub fn algebra_generators(graph: &PlaneGraph) -> Vec<Generator> {
    let mut g: Vec<Generator> = (0..graph.num_faces()).map(Generator::Face).collect();
    g.extend([Generator::X, Generator::Y, Generator::Z, Generator::W]);
    g
}

/// The ring automorphism negating the generators of the listed edges; a dg-map
/// from the differential of a garden to that of the garden with those edges
/// flipped.
pub fn orientation_map(graph: &PlaneGraph, edges: &[usize]) -> DgMap {
    DgMap::with_ring(RingMap::negate_edges(graph, edges))
}

/// A loop at the base through the centers of the tines at the given seed
/// positions, in order: the lassos before the first position, then each
/// approach, its center, and the connecting path to the next approach.
pub fn through_centers(complex: &TriangleComplex, garden: &Garden, positions: &[usize]) -> CrossingSequence {
    let mut path = CrossingSequence::empty(garden.base);
    for k in 0..positions[0] {
        path = path.concat(&garden.lasso(complex, k));
    }
    let approaches = garden.approaches();
    path = path.concat(&approaches[positions[0]].path);
    for (n, &p) in positions.iter().enumerate() {
        path.push_center(complex);
        let back = approaches[p].path.inverse();
        path = path.concat(&back);
        if let Some(&next) = positions.get(n + 1) {
            path = path.concat(&approaches[next].path);
        }
    }
    path
}

/// The shift added to X by Move V at position `i` (1-based): the matrix of
/// the connecting curve through the two centers.
pub fn move_v_shift(graph: &PlaneGraph, complex: &TriangleComplex, garden: &Garden, i: usize) -> Result<Matrix2, TransformError> {
    let n = garden.approaches().len();
    if i == 0 || i >= n {
        return Err(GardenError::InvalidIndex { index: i, max: n - 1 }.into());
    }
    Ok(words::matrix_of_words(graph, &garden.orientation, &through_centers(complex, garden, &[i - 1, i])))
}

fn shift_map(shift: &Matrix2, sign: i64) -> DgMap {
    let shifted = if sign > 0 { Matrix2::generators().add(shift) } else { Matrix2::generators().sub(shift) };
    let mut m = DgMap::identity();
    m.set_matrix(&shifted);
    m
}

/// Move V with its dg-map X ↦ X + W(connecting curve).
pub fn move_v_map(
    graph: &PlaneGraph,
    complex: &TriangleComplex,
    garden: &Garden,
    i: usize,
) -> Result<(Garden, DgMap), TransformError> {
    let shift = move_v_shift(graph, complex, garden, i)?;
    Ok((garden.apply_move_v(complex, i)?, shift_map(&shift, 1)))
}

/// The inverse of Move V, acting by the inverse of the forward map from the
/// resulting garden.
pub fn move_v_inverse_map(
    graph: &PlaneGraph,
    complex: &TriangleComplex,
    garden: &Garden,
    i: usize,
) -> Result<(Garden, DgMap), TransformError> {
    let target = garden.apply_move_v_inverse(complex, i)?;
    let shift = move_v_shift(graph, complex, &target, i)?;
    Ok((target, shift_map(&shift, -1)))
}

/// Moves VI and VII: the base crosses `side` and X is conjugated by the
/// matrix of the crossing back into the old base.
pub fn base_move_map(graph: &PlaneGraph, complex: &TriangleComplex, garden: &Garden, side: Side) -> (Garden, DgMap) {
    let target = garden.apply_base_move(complex, side);
    let forward = words::event_matrix(graph, &garden.orientation, &complex.cross(garden.base, side));
    let back = words::event_matrix(graph, &garden.orientation, &complex.cross(garden.base, side).inverse());
    let mut m = DgMap::identity();
    m.set_matrix(&forward.mul(&Matrix2::generators()).mul(&back));
    (target, m)
}

/// Move VI across a thread side of the base.
pub fn move_vi_map(
    graph: &PlaneGraph,
    complex: &TriangleComplex,
    garden: &Garden,
    side: Side,
) -> Result<(Garden, DgMap), TransformError> {
    if side == Side::S {
        return Err(GardenError::NotIncident { side }.into());
    }
    Ok(base_move_map(graph, complex, garden, side))
}

/// Move VII across the edge of the base.
pub fn move_vii_map(graph: &PlaneGraph, complex: &TriangleComplex, garden: &Garden) -> (Garden, DgMap) {
    base_move_map(graph, complex, garden, Side::S)
}

/// Move VII as a regeneration s ↦ u · t(s) · v, with t exchanging z with x
/// and w with y.
pub fn move_vii_regeneration(graph: &PlaneGraph, garden: &Garden) -> Regeneration {
    let from = garden.base;
    let to = graph.alpha(from);
    let o = &garden.orientation;
    // N = W(new -> old) has entries (0,1) = s(from) λ_from⁻¹ and
    // (1,0) = s(to) λ_to; its inverse W(old -> new) has (0,1) = s(to) λ_to⁻¹
    // and (1,0) = s(from) λ_from. The move acts by X ↦ N⁻¹ X N.
    let unit = |d: usize, inverse: bool| {
        let w = if inverse { GroupWord::generator(d).inverse() } else { GroupWord::generator(d) };
        Unit::new(o.sign(d) < 0, w)
    };
    let n01 = unit(from, true);
    let n10 = unit(to, false);
    let m01 = unit(to, true);
    let m10 = unit(from, false);
    let mut r = Regeneration::new();
    // (N⁻¹ X N)_{ij} = N⁻¹_{i,1-i} X_{1-i,1-j} N_{1-j,j}.
    for i in 0..2 {
        for j in 0..2 {
            let left = if i == 0 { m01.clone() } else { m10.clone() };
            let right = if j == 0 { n10.clone() } else { n01.clone() };
            r.set(Generator::matrix_entry(i, j), left, Generator::matrix_entry(1 - i, 1 - j), right);
        }
    }
    r
}

/// Applies a sequence of Move V steps (positive indices forward, negative
/// inverse), returning the final garden and the summed X shift.
pub fn braid_action(
    graph: &PlaneGraph,
    complex: &TriangleComplex,
    garden: &Garden,
    word: &[i64],
) -> Result<(Garden, Matrix2), TransformError> {
    let mut g = garden.clone();
    let mut total = Matrix2::zero();
    for &s in word {
        let i = s.unsigned_abs() as usize;
        if s > 0 {
            total = total.add(&move_v_shift(graph, complex, &g, i)?);
            g = g.apply_move_v(complex, i)?;
        } else {
            let next = g.apply_move_v_inverse(complex, i)?;
            total = total.sub(&move_v_shift(graph, complex, &next, i)?);
            g = next;
        }
    }
    Ok((g, total))
}

/// Outcome of an exactness check: the discrepancy on X and the primitive
/// whose differential it must equal.
#[derive(Debug, Clone)]
pub struct ExactnessWitness {
    pub discrepancy: Matrix2,
    pub primitive: Matrix2,
    pub holds: bool,
}

/// The braid relation at position `i`: the X shifts of σ_(i+1) σ_i σ_(i+1)
/// and σ_i σ_(i+1) σ_i differ by the differential of the matrix of the
/// loop through three consecutive centers.
pub fn braid_witness(
    graph: &PlaneGraph,
    complex: &TriangleComplex,
    garden: &Garden,
    i: usize,
    ring: &GroupRing,
) -> Result<ExactnessWitness, TransformError> {
    let i = i as i64;
    let (_, a) = braid_action(graph, complex, garden, &[i, i + 1, i])?;
    let (_, b) = braid_action(graph, complex, garden, &[i + 1, i, i + 1])?;
    let discrepancy = b.sub(&a);
    let k = i as usize - 1;
    let primitive = words::matrix_of_words(graph, &garden.orientation, &through_centers(complex, garden, &[k, k + 1, k + 2]));
    let d = words::differential(graph, garden);
    let holds = ring.matrix_equal(&d.apply_matrix(&primitive), &discrepancy);
    Ok(ExactnessWitness { discrepancy, primitive, holds })
}

/// Whether σ_i σ_j and σ_j σ_i act by equal X shifts.
pub fn distant_commutation(
    graph: &PlaneGraph,
    complex: &TriangleComplex,
    garden: &Garden,
    i: usize,
    j: usize,
    ring: &GroupRing,
) -> Result<bool, TransformError> {
    let (_, a) = braid_action(graph, complex, garden, &[i as i64, j as i64])?;
    let (_, b) = braid_action(graph, complex, garden, &[j as i64, i as i64])?;
    Ok(ring.matrix_equal(&a, &b))
}

/// The full twist (σ_(n-1) ... σ_1)^n on n tines, applying σ_1 first in
/// each cycle. Its X shift equals the product of the summed reversed-tine
/// matrices with the summed tine matrices, which is the differential of
/// the primitive -(Σ W(reversed tine)) X.
pub fn full_twist_witness(
    graph: &PlaneGraph,
    complex: &TriangleComplex,
    garden: &Garden,
    ring: &GroupRing,
) -> Result<ExactnessWitness, TransformError> {
    let n = garden.approaches().len() as i64;
    let cycle: Vec<i64> = (1..n).collect();
    let word: Vec<i64> = (0..n).flat_map(|_| cycle.iter().copied()).collect();
    let (_, discrepancy) = braid_action(graph, complex, garden, &word)?;
    let o = &garden.orientation;
    let mut reversed_sum = Matrix2::zero();
    for t in garden.tines() {
        reversed_sum = reversed_sum.add(&words::matrix_of_words(graph, o, &t.path.inverse()));
    }
    let primitive = reversed_sum.mul(&Matrix2::generators()).map(AlgebraElement::neg);
    let d = words::differential(graph, garden);
    let holds = ring.matrix_equal(&d.apply_matrix(&primitive), &discrepancy);
    Ok(ExactnessWitness { discrepancy, primitive, holds })
}

/// Product of a reversed tine matrix with the same tine's matrix, which
/// vanishes since the loop meets its center twice with no crossing between.
pub fn doubled_center_vanishes(graph: &PlaneGraph, garden: &Garden, k: usize, ring: &GroupRing) -> bool {
    let o = &garden.orientation;
    let t = &garden.tines()[k].path;
    let m = words::matrix_of_words(graph, o, &t.inverse()).mul(&words::matrix_of_words(graph, o, t));
    ring.matrix_equal(&m, &Matrix2::zero())
}

// ---------------------------------------------------------------------------
// Tree quotients.

/// Reduces every coefficient modulo the non-tree generators.
pub fn project_element(e: &AlgebraElement, tree: &SpanningTreeMissingOne) -> AlgebraElement {
    e.map_monomials(|m| {
        let ring = m.ring_factors().iter().map(|w| project_to_tree(w, tree)).collect();
        AlgebraElement::from_monomial(Monomial::from_parts(ring, m.generators().to_vec()), BigInt::one())
    })
}

/// The projected differential π_T ∘ ∂ on generators.
pub fn project_differential(d: &Differential, generators: &[Generator], tree: &SpanningTreeMissingOne) -> Differential {
    let mut out = Differential::new();
    for &s in generators {
        out.set(s, project_element(&d.on_generator(s), tree));
    }
    out
}

/// The projection π_T ∘ Φ of a map over the full group, read on tree
/// coefficients.
pub fn project_map(map: &DgMap, generators: &[Generator], tree: &SpanningTreeMissingOne) -> ProjectedMap {
    ProjectedMap {
        map: map.clone(),
        images: generators.iter().map(|&s| (s, project_element(&map.on_generator(s), tree))).collect(),
        tree: tree.clone(),
    }
}

/// A map between tree quotients induced from a map over the full group.
#[derive(Debug, Clone)]
pub struct ProjectedMap {
    map: DgMap,
    images: BTreeMap<Generator, AlgebraElement>,
    tree: SpanningTreeMissingOne,
}

impl ProjectedMap {
    /// Applies π_T' ∘ Φ to an element with tree coefficients (included into
    /// the full group unchanged).
    pub fn apply(&self, e: &AlgebraElement) -> AlgebraElement {
        project_element(&self.map.apply(e), &self.tree)
    }

    pub fn on_generator(&self, s: Generator) -> AlgebraElement {
        self.images.get(&s).cloned().unwrap_or_else(|| AlgebraElement::generator(s))
    }
}

// ---------------------------------------------------------------------------
// Signed paths and tree transitions.

/// A triangle together with a sheet of the branched double cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SheetState {
    pub triangle: Triangle,
    pub upper: bool,
}

/// A path through the triangle complex that starts on a given sheet; the
/// sheet flips at every edge crossing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPath {
    pub upper: bool,
    pub path: CrossingSequence,
}

impl SignedPath {
    pub fn constant(state: SheetState) -> Self {
        SignedPath { upper: state.upper, path: CrossingSequence::empty(state.triangle) }
    }

    pub fn start(&self) -> SheetState {
        SheetState { triangle: self.path.start, upper: self.upper }
    }

    pub fn end(&self) -> SheetState {
        let flips = self.path.events.iter().filter(|e| matches!(e, CrossingEvent::Edge { .. })).count();
        SheetState { triangle: self.path.end(), upper: self.upper ^ (flips % 2 == 1) }
    }

    pub fn inverse(&self) -> SignedPath {
        let end = self.end();
        SignedPath { upper: end.upper, path: self.path.inverse() }
    }

    /// Concatenation; `other` must start at this path's end state.
    pub fn concat(&self, other: &SignedPath) -> SignedPath {
        debug_assert_eq!(self.end(), other.start());
        SignedPath { upper: self.upper, path: self.path.concat(&other.path) }
    }

    /// The group element read off the crossings: an upper-to-lower crossing
    /// of the edge of dart d reads λ_d, a lower-to-upper one reads the
    /// inverse of the opposite dart's generator.
    pub fn word(&self) -> GroupWord {
        let mut upper = self.upper;
        let mut letters: Vec<Letter> = Vec::new();
        for e in &self.path.events {
            if let CrossingEvent::Edge { from, to } = *e {
                letters.push(if upper { letter(from, false) } else { letter(to, true) });
                upper = !upper;
            }
        }
        GroupWord::from_letters(&letters)
    }
}

fn around(graph: &PlaneGraph, t: Triangle, v: usize) -> bool {
    graph.tail(t) == v || graph.head(t) == v
}

/// A path from one state to another winding counterclockwise around vertex
/// `v`, staying near `v`.
pub fn winding_path(graph: &PlaneGraph, complex: &TriangleComplex, v: usize, from: SheetState, to: SheetState) -> Result<SignedPath, TransformError> {
    let err = TransformError::Unroutable { vertex: v, from, to };
    if !around(graph, from.triangle, v) || !around(graph, to.triangle, v) {
        return Err(err);
    }
    let mut p = SignedPath::constant(from);
    for _ in 0..12 {
        if p.end() == to {
            return Ok(p);
        }
        let t = p.end().triangle;
        let side = if graph.tail(t) == v { Side::R } else { Side::S };
        p.path.push_side(complex, side);
    }
    if p.end() == to {
        Ok(p)
    } else {
        Err(err)
    }
}

/// Canonical paths from the branch point over the missed vertex of a tree
/// to every state, never crossing a tree edge.
#[derive(Debug, Clone)]
pub struct TreeFrame {
    pub tree: SpanningTreeMissingOne,
    pub root: SheetState,
    parent: HashMap<SheetState, (SheetState, Side)>,
}

impl TreeFrame {
    pub fn new(graph: &PlaneGraph, complex: &TriangleComplex, tree: &SpanningTreeMissingOne) -> Self {
        let v = tree.missed_vertex;
        let start = (0..graph.num_darts()).find(|&d| graph.tail(d) == v).expect("vertex has darts");
        let root = SheetState { triangle: start, upper: true };
        let mut parent = HashMap::new();
        let mut seen = std::collections::HashSet::from([root]);
        let mut queue = VecDeque::from([root]);
        while let Some(s) = queue.pop_front() {
            for side in [Side::S, Side::L, Side::R] {
                if side == Side::S && tree.contains(graph.edge_of(s.triangle)) {
                    continue;
                }
                let next = SheetState { triangle: complex.neighbor(s.triangle, side), upper: s.upper ^ (side == Side::S) };
                if seen.insert(next) {
                    parent.insert(next, (s, side));
                    queue.push_back(next);
                }
            }
        }
        TreeFrame { tree: tree.clone(), root, parent }
    }

    /// The canonical path from the root to `target`.
    pub fn canonical_path(&self, complex: &TriangleComplex, target: SheetState) -> Result<SignedPath, TransformError> {
        let mut sides = Vec::new();
        let mut s = target;
        while s != self.root {
            let &(prev, side) = self.parent.get(&s).ok_or(TransformError::Unroutable {
                vertex: self.tree.missed_vertex,
                from: self.root,
                to: target,
            })?;
            sides.push(side);
            s = prev;
        }
        sides.reverse();
        Ok(SignedPath { upper: self.root.upper, path: CrossingSequence::from_sides(complex, self.root.triangle, &sides) })
    }
}

/// The loop (γ_{q,T'})⁻¹ γ⁻¹ γ_{q,T} read as a group element, with q on the
/// given sheet over face `f` and γ joined to both roots near their vertices.
pub fn beta(
    graph: &PlaneGraph,
    complex: &TriangleComplex,
    source: &TreeFrame,
    target: &TreeFrame,
    gamma: &SignedPath,
    f: usize,
    upper: bool,
) -> Result<GroupWord, TransformError> {
    let q = SheetState { triangle: graph.face_darts(f)[0], upper };
    let to_q_target = target.canonical_path(complex, q)?;
    let to_q_source = source.canonical_path(complex, q)?;
    let join_target = winding_path(graph, complex, target.tree.missed_vertex, target.root, gamma.end())?;
    let join_source = winding_path(graph, complex, source.tree.missed_vertex, gamma.start(), source.root)?;
    let lp = to_q_target
        .inverse()
        .concat(&join_target)
        .concat(&gamma.inverse())
        .concat(&join_source)
        .concat(&to_q_source);
    Ok(lp.word())
}

/// Joins two paths at a shared missed vertex.
pub fn join_paths(graph: &PlaneGraph, complex: &TriangleComplex, vertex: usize, a: &SignedPath, b: &SignedPath) -> Result<SignedPath, TransformError> {
    Ok(a.concat(&winding_path(graph, complex, vertex, a.end(), b.start())?).concat(b))
}

/// The transition automorphism R ∘ C of the enlarged algebra over the full
/// group for a change of tree along γ.
pub fn tree_transition(
    graph: &PlaneGraph,
    complex: &TriangleComplex,
    garden: &Garden,
    source: &TreeFrame,
    target: &TreeFrame,
    gamma: &SignedPath,
) -> Result<DgMap, TransformError> {
    let mut betas = HashMap::new();
    for f in 0..graph.num_faces() {
        for upper in [true, false] {
            betas.insert((f, upper), beta(graph, complex, source, target, gamma, f, upper)?);
        }
    }
    let b = |f: usize, upper: bool| betas[&(f, upper)].clone();
    let mut ring = RingMap::identity();
    for d in 0..graph.num_darts() {
        let image = b(graph.face_of(d), true).mul(&GroupWord::generator(d)).mul(&b(graph.face_of(graph.alpha(d)), false).inverse());
        ring.set(d, false, image);
    }
    let mut map = DgMap::with_ring(ring);
    let conj = |l: GroupWord, s: Generator, r: GroupWord| {
        AlgebraElement::ring(l, 1).mul(&AlgebraElement::generator(s)).mul(&AlgebraElement::ring(r.inverse(), 1))
    };
    for f in 0..graph.num_faces() {
        map.set(Generator::Face(f), conj(b(f, false), Generator::Face(f), b(f, true)));
    }
    let fb = complex.face(garden.base);
    map.set(Generator::X, conj(b(fb, true), Generator::X, b(fb, true)));
    map.set(Generator::Y, conj(b(fb, true), Generator::Y, b(fb, false)));
    map.set(Generator::Z, conj(b(fb, false), Generator::Z, b(fb, false)));
    map.set(Generator::W, conj(b(fb, false), Generator::W, b(fb, true)));
    Ok(map)
}

// ---------------------------------------------------------------------------
// Finite-type destabilization.

/// Result of destabilizing a finite-type garden over a tree quotient.
#[derive(Debug, Clone)]
pub struct Destabilized {
    /// The projected algebra before destabilization.
    pub projected: Dga,
    /// The algebra after the elementary automorphism.
    pub shifted: Dga,
    /// The algebra on the finite faces and x, y, z.
    pub reduced: Dga,
    /// The quotient map from the shifted algebra onto the reduced one.
    pub quotient: DgMap,
    pub base_face: usize,
}

/// Applies the elementary automorphism moving the non-base part of ∂w onto
/// the base face, then cancels the pair (w, base face).
pub fn finite_type_destabilize(
    graph: &PlaneGraph,
    complex: &TriangleComplex,
    garden: &Garden,
    tree: &SpanningTreeMissingOne,
    ring: &GroupRing,
) -> Result<Destabilized, TransformError> {
    if garden.finite_type(complex).is_none() {
        return Err(TransformError::NotFiniteType);
    }
    let generators = algebra_generators(graph);
    let d = project_differential(&words::differential(graph, garden), &generators, tree);
    let projected = Dga { generators: generators.clone(), differential: d.clone() };
    let fb = complex.face(garden.base);
    let face = Generator::Face(fb);
    let dw = ring.canonicalize(&d.on_generator(Generator::W));
    let rest = ring.canonicalize(&dw.sub(&AlgebraElement::generator(face)));
    if rest.mentions(face) || rest.mentions(Generator::W) {
        return Err(TransformError::NotFiniteType);
    }
    let (mu, mu_inv) = elementary_automorphism(face, &rest.neg())?;
    let shifted = projected.transport(&mu, &mu_inv);
    // After the shift ∂w is the base face, and the ideal generated by the
    // pair is closed under ∂, so the quotient is a dg-algebra.
    let mut quotient = DgMap::identity();
    quotient.set(face, AlgebraElement::zero());
    quotient.set(Generator::W, AlgebraElement::zero());
    let mut differential = Differential::new();
    let kept: Vec<Generator> = generators.iter().copied().filter(|&s| s != face && s != Generator::W).collect();
    for &s in &kept {
        differential.set(s, ring.canonicalize(&quotient.apply(&shifted.differential.on_generator(s))));
    }
    let reduced = Dga { generators: kept, differential };
    Ok(Destabilized { projected, shifted, reduced, quotient, base_face: fb })
}

/// Whether the base tine is first in seed order.
pub fn base_tine_first(complex: &TriangleComplex, garden: &Garden) -> bool {
    garden.finite_type(complex) == Some(FiniteTypePosition::First)
}

// ---------------------------------------------------------------------------
// Abelianization.

/// An element of the free algebra over the commutative group ring of Z^E:
/// terms keyed by their generator word and coefficient exponent vector.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CommutativeElement {
    terms: BTreeMap<(Vec<Generator>, Vec<i64>), BigInt>,
}

impl CommutativeElement {
    pub fn zero() -> Self {
        CommutativeElement::default()
    }

    pub fn term(gens: Vec<Generator>, exponents: Vec<i64>, c: BigInt) -> Self {
        let mut e = CommutativeElement::zero();
        e.add_term(gens, exponents, c);
        e
    }

    pub fn add_term(&mut self, gens: Vec<Generator>, exponents: Vec<i64>, c: BigInt) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry((gens, exponents)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &CommutativeElement) -> CommutativeElement {
        let mut out = self.clone();
        for ((g, x), c) in &other.terms {
            out.add_term(g.clone(), x.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &CommutativeElement) -> CommutativeElement {
        let mut out = CommutativeElement::zero();
        for ((g1, x1), c1) in &self.terms {
            for ((g2, x2), c2) in &other.terms {
                let gens = g1.iter().chain(g2).copied().collect();
                let exps = x1.iter().zip(x2).map(|(a, b)| a + b).collect();
                out.add_term(gens, exps, c1 * c2);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Text form: terms `[coef] t_e1^a * ... * s1 * s2` joined by ` + `.
    pub fn to_text(&self, graph: &PlaneGraph) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((gens, x), c)| {
                let mut tokens: Vec<String> = x
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a != 0)
                    .map(|(e, &a)| if a == 1 { format!("t_{}", graph.edge_name(e)) } else { format!("t_{}^{a}", graph.edge_name(e)) })
                    .collect();
                tokens.extend(gens.iter().map(Generator::to_string));
                if tokens.is_empty() {
                    format!("[{c}]")
                } else {
                    format!("[{c}] {}", tokens.join(" * "))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// Abelianizes coefficients (forgetting orientation) and moves them to the front.
pub fn abelianize_element(e: &AlgebraElement, num_edges: usize) -> CommutativeElement {
    let mut out = CommutativeElement::zero();
    for (m, c) in e.terms() {
        let mut x = vec![0i64; num_edges];
        for w in m.ring_factors() {
            for (k, v) in abelianize(w, num_edges).0.iter().enumerate() {
                x[k] += v;
            }
        }
        out.add_term(m.generators().to_vec(), x, c.clone());
    }
    out
}

/// Abelianization of a whole differential on its generators.
pub fn abelianize_dga(d: &Differential, generators: &[Generator], num_edges: usize) -> BTreeMap<Generator, CommutativeElement> {
    generators.iter().map(|&s| (s, abelianize_element(&d.on_generator(s), num_edges))).collect()
}

/// The commutative differential of a garden computed directly over Z[Z^E]:
/// corner monomials from the orientation count at each vertex, and X from a
/// sheet-by-sheet transfer along each tine.
pub struct CommutativeDifferential {
    images: BTreeMap<Generator, CommutativeElement>,
}

impl CommutativeDifferential {
    pub fn new(graph: &PlaneGraph, garden: &Garden) -> Self {
        let o = &garden.orientation;
        let e = graph.num_edges();
        let mut images = BTreeMap::new();
        for f in 0..graph.num_faces() {
            let mut sum = CommutativeElement::zero();
            for &d in graph.face_darts(f) {
                sum = sum.add(&corner_term(graph, o, d));
            }
            images.insert(Generator::Face(f), sum);
        }
        let mut x: [[CommutativeElement; 2]; 2] = Default::default();
        for t in garden.tines() {
            for start in 0..2 {
                let row = transfer(graph, o, e, &t.path, start);
                for end in 0..2 {
                    x[start][end] = x[start][end].add(&row[end]);
                }
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                images.insert(Generator::matrix_entry(i, j), x[i][j].clone());
            }
        }
        CommutativeDifferential { images }
    }

    pub fn on_generator(&self, s: Generator) -> CommutativeElement {
        self.images.get(&s).cloned().unwrap_or_default()
    }

    /// Leibniz extension with the Koszul sign of the prefix degree.
    pub fn apply(&self, a: &CommutativeElement) -> CommutativeElement {
        let mut out = CommutativeElement::zero();
        for ((gens, x), c) in &a.terms {
            let mut prefix_degree = 0u32;
            for k in 0..gens.len() {
                let ds = self.on_generator(gens[k]);
                let sign = if prefix_degree % 2 == 0 { c.clone() } else { -c.clone() };
                let pre = CommutativeElement::term(gens[..k].to_vec(), x.clone(), sign);
                let post = CommutativeElement::term(gens[k + 1..].to_vec(), vec![0; x.len()], BigInt::one());
                out = out.add(&pre.mul(&ds).mul(&post));
                prefix_degree += gens[k].degree();
            }
        }
        out
    }
}

/// The corner at the tail of d: sign (-1)^(edges leaving the vertex), and
/// exponent +1 on the edge opposite the corner, -1 on the two bounding edges.
fn corner_term(graph: &PlaneGraph, o: &EdgeOrientation, d: usize) -> CommutativeElement {
    let [a, b, c] = [d, graph.sigma(d), graph.sigma(graph.sigma(d))];
    let outgoing = [a, b, c].iter().filter(|&&x| o.is_oriented(x)).count();
    let mut x = vec![0i64; graph.num_edges()];
    x[graph.edge_of(a)] -= 1;
    x[graph.edge_of(b)] -= 1;
    x[graph.edge_of(c)] += 1;
    let sign = if outgoing % 2 == 0 { 1 } else { -1 };
    CommutativeElement::term(Vec::new(), x, BigInt::from(sign))
}

/// Sums over sheet sequences by dynamic programming, from a fixed start sheet.
fn transfer(graph: &PlaneGraph, o: &EdgeOrientation, num_edges: usize, path: &CrossingSequence, start: usize) -> [CommutativeElement; 2] {
    let unit = CommutativeElement::term(Vec::new(), vec![0; num_edges], BigInt::one());
    let mut state: [CommutativeElement; 2] = Default::default();
    state[start] = unit.clone();
    for e in &path.events {
        let mut next: [CommutativeElement; 2] = Default::default();
        match *e {
            CrossingEvent::Edge { from, to } => {
                let mut up = vec![0i64; num_edges];
                up[graph.edge_of(to)] = -1;
                let mut down = vec![0i64; num_edges];
                down[graph.edge_of(from)] = 1;
                next[1] = state[0].mul(&CommutativeElement::term(Vec::new(), up, BigInt::from(o.sign(to))));
                next[0] = state[1].mul(&CommutativeElement::term(Vec::new(), down, BigInt::from(o.sign(from))));
            }
            CrossingEvent::Thread { from, to, side } => {
                let h = if side == Side::L { corner_term(graph, o, to) } else { negate(&corner_term(graph, o, from)) };
                next[0] = state[0].clone();
                next[1] = state[1].add(&state[0].mul(&h));
            }
            CrossingEvent::Center { face, .. } => {
                next[1] = state[0].mul(&CommutativeElement::term(vec![Generator::Face(face)], vec![0; num_edges], BigInt::one()));
            }
        }
        state = next;
    }
    state
}

fn negate(a: &CommutativeElement) -> CommutativeElement {
    let mut out = CommutativeElement::zero();
    for ((g, x), c) in &a.terms {
        out.add_term(g.clone(), x.clone(), -c.clone());
    }
    out
}
