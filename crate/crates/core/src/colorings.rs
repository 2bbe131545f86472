//! Face colorings by points of the Grassmannian Gr(r, 2r) over a finite
//! field, their projective-linear moduli, and the two maps between
//! representations and colorings: reading frames off event matrices, and
//! rebuilding a representation from a gauge-fixed coloring.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::algebra::Matrix2;
use crate::garden::{CrossingEvent, Garden, Side, Triangle, TriangleComplex};
use crate::group_theory::EdgeOrientation;
use crate::plane_graph::{chromatic_polynomial, Dart, PlaneGraph, SpanningTreeMissingOne};
use crate::representations::{
    conjugation_orbits, general_linear_generators, orbit_count, orbit_partition, FiniteField, FqMatrix, Representation,
    RepresentationError, RepresentationProblem, DEFAULT_SEARCH_LIMIT,
};
use crate::words;

/// Errors from coloring computations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("ambient dimensions {0} and {1} differ")]
    DimensionMismatch(usize, usize),
    #[error("matrix of rank {rank} does not span an {expected}-plane")]
    RankDeficient { rank: usize, expected: usize },
    #[error("search space of {bound} exceeds the limit {limit}")]
    SearchSpaceTooLarge { bound: u128, limit: u128 },
    #[error("coloring cannot be gauge fixed: {0}")]
    GaugeFailure(String),
    #[error("frames are inconsistent: {0}")]
    PropagationInconsistent(String),
    #[error(transparent)]
    Representation(#[from] RepresentationError),
}

/// An r-plane in F^(2r), stored as the reduced row-echelon form of a
/// matrix whose rows span it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GrassmannPoint {
    pub basis: FqMatrix,
}

impl GrassmannPoint {
    /// The span of the columns of a 2r x r matrix.
    pub fn from_columns(m: &FqMatrix, f: &FiniteField) -> Result<Self, ColoringError> {
        let (rref, pivots) = m.transpose().rref(f);
        if pivots.len() != m.cols {
            return Err(ColoringError::RankDeficient { rank: pivots.len(), expected: m.cols });
        }
        Ok(GrassmannPoint { basis: rref })
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols
    }

    /// A 2r x r matrix whose columns span the plane.
    pub fn columns(&self) -> FqMatrix {
        self.basis.transpose()
    }

    /// The image under an invertible matrix.
    pub fn transform(&self, g: &FqMatrix, f: &FiniteField) -> GrassmannPoint {
        GrassmannPoint::from_columns(&g.mul(&self.columns(), f), f).expect("invertible maps preserve rank")
    }

    /// Span(I;0), Span(0;I) and Span(I;I) for `which` = 0, 1, 2.
    pub fn standard(r: usize, which: usize, f: &FiniteField) -> GrassmannPoint {
        let id = FqMatrix::identity(r);
        let zero = FqMatrix::zeros(r, r);
        let cols = match which {
            0 => id.vstack(&zero),
            1 => zero.vstack(&id),
            _ => id.vstack(&id),
        };
        GrassmannPoint::from_columns(&cols, f).unwrap()
    }
}

/// Every point of Gr(r, 2r; F_q), one per reduced row-echelon form.
pub fn enumerate_grassmannian(f: &FiniteField, r: usize) -> Vec<GrassmannPoint> {
    let n = 2 * r;
    let q = f.order();
    let mut out = Vec::new();
    for pivots in combinations(n, r) {
        // Free entries: row i, columns after pivot i that are not pivots.
        let free: Vec<(usize, usize)> =
            (0..r).flat_map(|i| ((pivots[i] + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (i, c))).collect();
        let count = q.pow(free.len() as u32);
        for mut x in 0..count {
            let mut m = FqMatrix::zeros(r, n);
            for (i, &p) in pivots.iter().enumerate() {
                m.set(i, p, 1);
            }
            for &(i, c) in &free {
                m.set(i, c, (x % q) as u8);
                x /= q;
            }
            out.push(GrassmannPoint { basis: m });
        }
    }
    out.sort();
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Whether two r-planes in F^(2r) are complementary.
pub fn is_transverse(u: &GrassmannPoint, v: &GrassmannPoint, f: &FiniteField) -> Result<bool, ColoringError> {
    if u.ambient() != v.ambient() {
        return Err(ColoringError::DimensionMismatch(u.ambient(), v.ambient()));
    }
    Ok(u.basis.vstack(&v.basis).rank(f) == u.ambient())
}

/// A plane per face such that faces sharing an edge get transverse planes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceColoring(pub Vec<GrassmannPoint>);

impl FaceColoring {
    pub fn transform(&self, g: &FqMatrix, f: &FiniteField) -> FaceColoring {
        FaceColoring(self.0.iter().map(|p| p.transform(g, f)).collect())
    }

    /// Whether every pair of faces sharing an edge is transverse.
    pub fn is_valid(&self, graph: &PlaneGraph, f: &FiniteField) -> bool {
        face_adjacencies(graph).iter().all(|&(a, b)| is_transverse(&self.0[a], &self.0[b], f).unwrap_or(false))
    }
}

/// Pairs of faces on the two sides of each edge.
pub fn face_adjacencies(graph: &PlaneGraph) -> Vec<(usize, usize)> {
    (0..graph.num_edges()).map(|e| (graph.face_of(2 * e), graph.face_of(2 * e + 1))).collect()
}

fn face_order(graph: &PlaneGraph) -> Vec<usize> {
    let adj = face_adjacencies(graph);
    let mut seen = vec![false; graph.num_faces()];
    let mut order = Vec::new();
    for start in 0..graph.num_faces() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &(a, b) in &adj {
                for (u, w) in [(a, b), (b, a)] {
                    if u == x && !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    order
}

/// All colorings, by backtracking over faces in breadth-first dual order.
pub fn enumerate_colorings(graph: &PlaneGraph, f: &FiniteField, r: usize, limit: u128) -> Result<Vec<FaceColoring>, ColoringError> {
    let points = enumerate_grassmannian(f, r);
    let per_face = (f.order() as u128).pow((r * r) as u32);
    let bound = (1..graph.num_faces()).try_fold(points.len() as u128, |acc, _| acc.checked_mul(per_face)).unwrap_or(u128::MAX);
    if bound > limit {
        return Err(ColoringError::SearchSpaceTooLarge { bound, limit });
    }
    let n = points.len();
    let mut transverse = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            transverse[i * n + j] = is_transverse(&points[i], &points[j], f)?;
        }
    }
    let adj = face_adjacencies(graph);
    let order = face_order(graph);
    let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    // Neighbours of each face that come earlier in the order.
    let earlier: Vec<Vec<usize>> = order
        .iter()
        .map(|&x| {
            let mut v: Vec<usize> = adj
                .iter()
                .flat_map(|&(a, b)| [(a, b), (b, a)])
                .filter(|&(u, w)| u == x && pos[&w] <= pos[&x])
                .map(|(_, w)| w)
                .collect();
            v.sort();
            v.dedup();
            v
        })
        .collect();
    let mut assignment = vec![usize::MAX; graph.num_faces()];
    let mut out = Vec::new();
    fn go(
        k: usize,
        order: &[usize],
        earlier: &[Vec<usize>],
        n: usize,
        transverse: &[bool],
        assignment: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == order.len() {
            out.push(assignment.clone());
            return;
        }
        let face = order[k];
        for c in 0..n {
            if earlier[k].iter().all(|&w| w != face && transverse[c * n + assignment[w]] || w == face && transverse[c * n + c]) {
                assignment[face] = c;
                go(k + 1, order, earlier, n, transverse, assignment, out);
            }
        }
        assignment[face] = usize::MAX;
    }
    let mut raw = Vec::new();
    go(0, &order, &earlier, n, &transverse, &mut assignment, &mut raw);
    for a in raw {
        out.push(FaceColoring(a.iter().map(|&i| points[i].clone()).collect()));
    }
    Ok(out)
}

/// Orbit labels of colorings under PGL_(2r).
pub fn pgl_orbits(colorings: &[FaceColoring], f: &FiniteField, r: usize) -> Result<Vec<usize>, ColoringError> {
    let gens = general_linear_generators(f, 2 * r);
    Ok(orbit_partition(colorings, &gens, |g, c| c.transform(g, f))?)
}

// ---------------------------------------------------------------------------
// Frames from representations.

/// A 2x2 matrix over the algebra evaluated blockwise under a representation.
pub fn evaluate_matrix(m: &Matrix2, rep: &Representation, f: &FiniteField) -> FqMatrix {
    let b = |i, j| rep.eval(m.entry(i, j), f);
    FqMatrix::from_blocks(&b(0, 0), &b(0, 1), &b(1, 0), &b(1, 1))
}

fn event_frame(graph: &PlaneGraph, o: &EdgeOrientation, e: &CrossingEvent, rep: &Representation, f: &FiniteField) -> FqMatrix {
    evaluate_matrix(&words::event_matrix(graph, o, e), rep, f)
}

/// Frames M(ν) for every triangle: the evaluated matrix of any path from
/// the base triangle. Fails if two paths disagree.
pub fn frames(
    graph: &PlaneGraph,
    complex: &TriangleComplex,
    orientation: &EdgeOrientation,
    base: Triangle,
    rep: &Representation,
    f: &FiniteField,
) -> Result<Vec<FqMatrix>, ColoringError> {
    let mut frame: Vec<Option<FqMatrix>> = vec![None; complex.len()];
    frame[base] = Some(FqMatrix::identity(2 * rep.rank));
    let mut queue = VecDeque::from([base]);
    while let Some(t) = queue.pop_front() {
        for side in [Side::S, Side::L, Side::R] {
            let e = complex.cross(t, side);
            let next = frame[t].as_ref().unwrap().mul(&event_frame(graph, orientation, &e, rep, f), f);
            let u = e.to();
            match &frame[u] {
                None => {
                    frame[u] = Some(next);
                    queue.push_back(u);
                }
                Some(existing) if *existing != next => {
                    return Err(ColoringError::PropagationInconsistent(format!("triangle {u} reached with two frames")));
                }
                Some(_) => {}
            }
        }
    }
    frame.into_iter().enumerate().map(|(t, m)| m.ok_or(ColoringError::PropagationInconsistent(format!("triangle {t} unreached")))).collect()
}

/// The coloring of a representation: each face gets the span of the first
/// r columns of the frame of any of its triangles.
pub fn rep_to_coloring(
    graph: &PlaneGraph,
    complex: &TriangleComplex,
    garden: &Garden,
    rep: &Representation,
    f: &FiniteField,
) -> Result<FaceColoring, ColoringError> {
    let fr = frames(graph, complex, &garden.orientation, garden.base, rep, f)?;
    coloring_from_frames(complex, &fr, rep.rank, f)
}

fn coloring_from_frames(complex: &TriangleComplex, fr: &[FqMatrix], r: usize, f: &FiniteField) -> Result<FaceColoring, ColoringError> {
    let mut planes: Vec<Option<GrassmannPoint>> = vec![None; complex.num_faces()];
    for (t, m) in fr.iter().enumerate() {
        let p = GrassmannPoint::from_columns(&m.block(0, 0, 2 * r, r), f)?;
        let slot = &mut planes[complex.face(t)];
        match slot {
            None => *slot = Some(p),
            Some(existing) if *existing != p => {
                return Err(ColoringError::PropagationInconsistent(format!("face {} has two planes", complex.face(t))));
            }
            Some(_) => {}
        }
    }
    Ok(FaceColoring(planes.into_iter().map(|p| p.expect("every face has a triangle")).collect()))
}

// ---------------------------------------------------------------------------
// Representations from colorings.

/// A frame sending Span(I;0), Span(0;I), Span(I;I) to three pairwise
/// transverse planes.
pub fn frame_of_triple(u: &[GrassmannPoint; 3], f: &FiniteField) -> Result<FqMatrix, ColoringError> {
    let (a, b, c) = (u[0].columns(), u[1].columns(), u[2].columns());
    let r = a.cols;
    let ab = a.hstack(&b);
    let ab_inv = ab.inverse(f).ok_or_else(|| ColoringError::GaugeFailure("first two planes meet".into()))?;
    // Write each column of c as a part in u0 plus a part in u1.
    let coords = ab_inv.mul(&c, f);
    let x = coords.block(0, 0, r, r);
    let y = coords.block(r, 0, r, r);
    let frame = a.mul(&x, f).hstack(&b.mul(&y, f));
    if !frame.is_invertible(f) {
        return Err(ColoringError::GaugeFailure("third plane is not transverse".into()));
    }
    Ok(frame)
}

/// Triangles met when winding counterclockwise once around a vertex,
/// starting from `start`.
fn winding(graph: &PlaneGraph, complex: &TriangleComplex, v: usize, start: Triangle) -> Vec<(Triangle, CrossingEvent)> {
    let mut out = Vec::new();
    let mut t = start;
    for _ in 0..6 {
        let side = if graph.tail(t) == v { Side::R } else { Side::S };
        let e = complex.cross(t, side);
        t = e.to();
        out.push((t, e));
    }
    out
}

/// Rebuilds a representation from a coloring. The coloring is moved by an
/// element of GL_(2r) so that the three faces at the missed vertex carry
/// the planes every representation produces there; frames are then
/// propagated along paths avoiding the tree, each thread crossing solved
/// so that the next face gets its plane, and the tree values are read off
/// the frames on both sides of each tree edge. The result is the
/// lexicographically least member of its conjugation orbit.
pub fn coloring_to_rep(
    graph: &PlaneGraph,
    complex: &TriangleComplex,
    orientation: &EdgeOrientation,
    tree: &SpanningTreeMissingOne,
    coloring: &FaceColoring,
    f: &FiniteField,
) -> Result<Representation, ColoringError> {
    let r = coloring.0.first().map(GrassmannPoint::dim).unwrap_or(1);
    let v = tree.missed_vertex;
    let base = (0..graph.num_darts()).find(|&d| graph.tail(d) == v).expect("vertex has darts");
    let trivial = Representation { rank: r, values: BTreeMap::new() };

    // The planes any representation gives the faces at the missed vertex,
    // since the events there involve only non-tree edges.
    let mut local = FqMatrix::identity(2 * r);
    let mut targets: BTreeMap<usize, GrassmannPoint> = BTreeMap::new();
    targets.insert(complex.face(base), GrassmannPoint::from_columns(&local.block(0, 0, 2 * r, r), f)?);
    for (t, e) in winding(graph, complex, v, base) {
        local = local.mul(&event_frame(graph, orientation, &e, &trivial, f), f);
        targets.entry(complex.face(t)).or_insert(GrassmannPoint::from_columns(&local.block(0, 0, 2 * r, r), f)?);
    }
    let faces: Vec<usize> = targets.keys().copied().collect();
    if faces.len() != 3 {
        return Err(ColoringError::GaugeFailure("missed vertex does not meet three faces".into()));
    }
    let source = [coloring.0[faces[0]].clone(), coloring.0[faces[1]].clone(), coloring.0[faces[2]].clone()];
    let target = [targets[&faces[0]].clone(), targets[&faces[1]].clone(), targets[&faces[2]].clone()];
    let g = frame_of_triple(&target, f)?.mul(&frame_of_triple(&source, f)?.inverse(f).unwrap(), f);
    let chi = coloring.transform(&g, f);

    // Propagate frames without crossing tree edges.
    let mut frame: Vec<Option<FqMatrix>> = vec![None; complex.len()];
    frame[base] = Some(FqMatrix::identity(2 * r));
    let mut queue = VecDeque::from([base]);
    while let Some(t) = queue.pop_front() {
        let m = frame[t].clone().unwrap();
        for side in [Side::S, Side::L, Side::R] {
            if side == Side::S && tree.contains(graph.edge_of(t)) {
                continue;
            }
            let e = complex.cross(t, side);
            let u = e.to();
            let next = if side == Side::S {
                m.mul(&event_frame(graph, orientation, &e, &trivial, f), f)
            } else {
                // Solve for the unipotent block so that the last r columns
                // span the plane of the face across the next triangle's edge.
                let plane = chi.0[complex.face(graph.alpha(u))].columns();
                let coords = m.inverse(f).unwrap().mul(&plane, f);
                let a = coords.block(0, 0, r, r);
                let b = coords.block(r, 0, r, r);
                let b_inv = b.inverse(f).ok_or_else(|| ColoringError::PropagationInconsistent(format!("thread into triangle {u}")))?;
                let h = a.mul(&b_inv, f);
                let unip = FqMatrix::from_blocks(&FqMatrix::identity(r), &h, &FqMatrix::zeros(r, r), &FqMatrix::identity(r));
                m.mul(&unip, f)
            };
            match &frame[u] {
                None => {
                    frame[u] = Some(next);
                    queue.push_back(u);
                }
                Some(existing) if *existing != next => {
                    return Err(ColoringError::PropagationInconsistent(format!("triangle {u} reached with two frames")));
                }
                Some(_) => {}
            }
        }
    }
    let frame: Vec<FqMatrix> = frame
        .into_iter()
        .enumerate()
        .map(|(t, m)| m.ok_or(ColoringError::PropagationInconsistent(format!("triangle {t} unreached"))))
        .collect::<Result<_, _>>()?;

    // Read the tree values off the edge crossings.
    let mut values = BTreeMap::new();
    for &e in &tree.edges {
        let d: Dart = 2 * e;
        let ad = graph.alpha(d);
        let x = frame[d].inverse(f).unwrap().mul(&frame[ad], f);
        if !x.block(0, 0, r, r).is_zero() || !x.block(r, r, r, r).is_zero() {
            return Err(ColoringError::PropagationInconsistent(format!("edge {e} is not an edge crossing")));
        }
        let sign = |dart: Dart| if orientation.sign(dart) < 0 { f.neg(1) } else { 1 };
        let down = x.block(r, 0, r, r).scale(sign(d), f);
        let up = x.block(0, r, r, r).scale(sign(ad), f);
        let up_inv = up.inverse(f).ok_or_else(|| ColoringError::PropagationInconsistent(format!("edge {e} block singular")))?;
        values.insert(d, down);
        values.insert(ad, up_inv);
    }
    let rep = Representation { rank: r, values };
    Ok(least_conjugate(&rep, f))
}

/// The lexicographically least member of a conjugation orbit.
pub fn least_conjugate(rep: &Representation, f: &FiniteField) -> Representation {
    let gens = general_linear_generators(f, rep.rank);
    let mut seen = HashSet::from([rep.clone()]);
    let mut queue = VecDeque::from([rep.clone()]);
    let mut best = rep.clone();
    while let Some(x) = queue.pop_front() {
        if x < best {
            best = x.clone();
        }
        for g in &gens {
            let y = x.conjugate(g, f);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Reports.

/// Comparison of representation and coloring moduli for one configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectionReport {
    pub representations: usize,
    pub representation_orbits: usize,
    pub colorings: usize,
    pub coloring_orbits: usize,
    /// Ψ sends each conjugation orbit into a single PGL orbit.
    pub psi_well_defined: bool,
    /// Ψ hits every PGL orbit exactly once.
    pub psi_bijective: bool,
    /// Θ lands in a valid representation whose Ψ-image is the coloring's orbit,
    /// and Θ∘Ψ returns each conjugation orbit.
    pub theta_inverse: bool,
}

impl BijectionReport {
    pub fn passes(&self) -> bool {
        self.representation_orbits == self.coloring_orbits && self.psi_well_defined && self.psi_bijective && self.theta_inverse
    }
}

/// Checks that Ψ descends to a bijection of moduli with Θ as its inverse.
pub fn verify_bijection(
    graph: &PlaneGraph,
    garden: &Garden,
    tree: &SpanningTreeMissingOne,
    f: &FiniteField,
    r: usize,
) -> Result<BijectionReport, ColoringError> {
    let complex = TriangleComplex::new(graph);
    let problem = RepresentationProblem::for_garden(graph, garden, tree);
    let reps = problem.enumerate(f, r, DEFAULT_SEARCH_LIMIT)?;
    let rep_orbits = conjugation_orbits(&reps, f, r)?;
    let cols = enumerate_colorings(graph, f, r, DEFAULT_SEARCH_LIMIT)?;
    let col_orbits = pgl_orbits(&cols, f, r)?;
    let col_index: HashMap<&FaceColoring, usize> = cols.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let rep_index: HashMap<&Representation, usize> = reps.iter().enumerate().map(|(i, c)| (c, i)).collect();

    let mut psi_orbit: HashMap<usize, usize> = HashMap::new();
    let mut well_defined = true;
    for (i, rep) in reps.iter().enumerate() {
        let c = rep_to_coloring(graph, &complex, garden, rep, f)?;
        let Some(&j) = col_index.get(&c) else {
            well_defined = false;
            continue;
        };
        match psi_orbit.insert(rep_orbits[i], col_orbits[j]) {
            Some(prev) if prev != col_orbits[j] => well_defined = false,
            _ => {}
        }
    }
    let hit: HashSet<usize> = psi_orbit.values().copied().collect();
    let bijective = hit.len() == orbit_count(&col_orbits) && psi_orbit.len() == orbit_count(&rep_orbits);

    let mut theta_ok = true;
    let mut first_of_orbit: BTreeMap<usize, usize> = BTreeMap::new();
    for (j, &o) in col_orbits.iter().enumerate() {
        first_of_orbit.entry(o).or_insert(j);
    }
    for (&o, &j) in &first_of_orbit {
        match coloring_to_rep(graph, &complex, &garden.orientation, tree, &cols[j], f) {
            Ok(rep) => {
                let valid = problem.verify(&rep, f);
                let back = rep_to_coloring(graph, &complex, garden, &rep, f).ok().and_then(|c| col_index.get(&c).map(|&k| col_orbits[k]));
                let Some(&i) = rep_index.get(&rep) else {
                    theta_ok = false;
                    continue;
                };
                theta_ok &= valid && back == Some(o) && psi_orbit.get(&rep_orbits[i]) == Some(&o);
            }
            Err(_) => theta_ok = false,
        }
    }
    Ok(BijectionReport {
        representations: reps.len(),
        representation_orbits: orbit_count(&rep_orbits),
        colorings: cols.len(),
        coloring_orbits: orbit_count(&col_orbits),
        psi_well_defined: well_defined,
        psi_bijective: bijective,
        theta_inverse: theta_ok,
    })
}

/// Rank-one counts against the chromatic polynomial of the dual graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingReport {
    pub q: usize,
    pub colorings: usize,
    pub chromatic: i128,
    pub orbits: usize,
    pub group_order: usize,
}

impl CountingReport {
    pub fn passes(&self) -> bool {
        self.colorings as i128 == self.chromatic && (self.orbits * self.group_order) as i128 == self.chromatic
    }
}

/// Counts rank-one colorings and their PGL_2 orbits.
pub fn counting_identities(graph: &PlaneGraph, f: &FiniteField) -> Result<CountingReport, ColoringError> {
    let cols = enumerate_colorings(graph, f, 1, DEFAULT_SEARCH_LIMIT)?;
    let orbits = orbit_count(&pgl_orbits(&cols, f, 1)?);
    let q = f.order();
    Ok(CountingReport {
        q,
        colorings: cols.len(),
        chromatic: chromatic_polynomial(&graph.dual_graph(), q as u64 + 1),
        orbits,
        group_order: q * q * q - q,
    })
}
