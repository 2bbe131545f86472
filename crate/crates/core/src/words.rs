//! Matrices of crossing events and the differential of a garden. Each event
//! of a path carries a 2x2 matrix indexed by the sheet (0 for the lower
//! sheet, 1 for the upper) before and after the event; the matrix of a path
//! is the ordered product. A separate enumeration over sheet sequences
//! serves as an independent check of the product.

use crate::algebra::{AlgebraElement, Differential, Generator, GroupRing, Matrix2};
use crate::garden::{CrossingEvent, CrossingSequence, Garden, Side};
use crate::group_theory::{letter, EdgeOrientation, GroupWord};
use crate::plane_graph::{Dart, PlaneGraph};

/// The signed monomial of the corner at the tail of `d`, between `d` and
/// its counterclockwise successor.
pub fn thread_monomial(graph: &PlaneGraph, orientation: &EdgeOrientation, d: Dart) -> AlgebraElement {
    let sd = graph.sigma(d);
    let far = graph.alpha(graph.sigma(sd));
    let sign = orientation.sign(sd) * orientation.sign(far) * orientation.sign(d);
    let word = GroupWord::from_letters(&[letter(sd, true), letter(far, false), letter(d, true)]);
    AlgebraElement::ring(word, sign)
}

/// The boundary of a face: the sum of its corner monomials.
pub fn face_boundary(graph: &PlaneGraph, orientation: &EdgeOrientation, f: usize) -> AlgebraElement {
    graph
        .face_darts(f)
        .iter()
        .fold(AlgebraElement::zero(), |acc, &d| acc.add(&thread_monomial(graph, orientation, d)))
}

/// The matrix of one event.
pub fn event_matrix(graph: &PlaneGraph, orientation: &EdgeOrientation, event: &CrossingEvent) -> Matrix2 {
    match *event {
        CrossingEvent::Edge { from, to } => {
            let up = AlgebraElement::ring(GroupWord::from_letters(&[letter(to, true)]), orientation.sign(to));
            let down = AlgebraElement::ring(GroupWord::generator(from), orientation.sign(from));
            Matrix2([[AlgebraElement::zero(), up], [down, AlgebraElement::zero()]])
        }
        CrossingEvent::Thread { to, side: Side::L, .. } => Matrix2::unipotent(thread_monomial(graph, orientation, to)),
        CrossingEvent::Thread { from, .. } => Matrix2::unipotent(thread_monomial(graph, orientation, from).neg()),
        CrossingEvent::Center { face, .. } => Matrix2::nilpotent(AlgebraElement::generator(Generator::Face(face))),
    }
}

/// The ordered product of event matrices along a path.
pub fn matrix_of_words(graph: &PlaneGraph, orientation: &EdgeOrientation, path: &CrossingSequence) -> Matrix2 {
    path.events
        .iter()
        .fold(Matrix2::identity(), |acc, e| acc.mul(&event_matrix(graph, orientation, e)))
}

/// Weight of a single sheet transition at an event, or `None` if the
/// transition is not allowed.
fn transition_weight(
    graph: &PlaneGraph,
    orientation: &EdgeOrientation,
    event: &CrossingEvent,
    before: usize,
    after: usize,
) -> Option<AlgebraElement> {
    match *event {
        CrossingEvent::Edge { from, to } => match (before, after) {
            // Upper sheet: the path letter of the dart being crossed.
            (1, 0) => Some(AlgebraElement::ring(GroupWord::generator(from), orientation.sign(from))),
            // Lower sheet: the inverse letter of the opposite dart.
            (0, 1) => Some(AlgebraElement::ring(GroupWord::generator(to).inverse(), orientation.sign(to))),
            _ => None,
        },
        CrossingEvent::Thread { from, to, side } => {
            if before == after {
                return Some(AlgebraElement::one());
            }
            if (before, after) != (0, 1) {
                return None;
            }
            let corner = if side == Side::L { to } else { from };
            let m = thread_monomial(graph, orientation, corner);
            Some(if side == Side::L { m } else { m.neg() })
        }
        CrossingEvent::Center { face, .. } => {
            ((before, after) == (0, 1)).then(|| AlgebraElement::generator(Generator::Face(face)))
        }
    }
}

/// Entry (i, j) of the path matrix as a sum over all sheet sequences
/// starting on sheet `i` and ending on sheet `j`.
pub fn enumerate_sheet_sequences(
    graph: &PlaneGraph,
    orientation: &EdgeOrientation,
    path: &CrossingSequence,
    i: usize,
    j: usize,
) -> AlgebraElement {
    let n = path.events.len();
    if n == 0 {
        return if i == j { AlgebraElement::one() } else { AlgebraElement::zero() };
    }
    let mut total = AlgebraElement::zero();
    for mask in 0u64..(1u64 << (n - 1)) {
        let sheet = |k: usize| -> usize {
            if k == 0 {
                i
            } else if k == n {
                j
            } else {
                ((mask >> (k - 1)) & 1) as usize
            }
        };
        let mut product = AlgebraElement::one();
        let mut alive = true;
        for (k, e) in path.events.iter().enumerate() {
            match transition_weight(graph, orientation, e, sheet(k), sheet(k + 1)) {
                Some(w) => product = product.mul(&w),
                None => {
                    alive = false;
                    break;
                }
            }
        }
        if alive {
            total = total.add(&product);
        }
    }
    total
}

/// The differential of a garden: faces map to their corner sums, and the
/// matrix X = (z w; y x) maps to the sum of tine matrices.
pub fn differential(graph: &PlaneGraph, garden: &Garden) -> Differential {
    let mut d = Differential::new();
    for f in 0..graph.num_faces() {
        d.set(Generator::Face(f), face_boundary(graph, &garden.orientation, f));
    }
    let mut total = Matrix2::zero();
    for t in garden.tines() {
        total = total.add(&matrix_of_words(graph, &garden.orientation, &t.path));
    }
    for i in 0..2 {
        for j in 0..2 {
            d.set(Generator::matrix_entry(i, j), total.entry(i, j).clone());
        }
    }
    d
}

/// Checks that the differential of a garden squares to zero, reporting the
/// first failing generator and its nonzero residual.
pub fn verify_d_squared(graph: &PlaneGraph, garden: &Garden, ring: &GroupRing) -> Result<(), (Generator, AlgebraElement)> {
    differential(graph, garden).squares_to_zero(ring)
}
