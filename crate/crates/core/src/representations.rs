//! Finite-field linear algebra and rank-r representations of the
//! dg-algebra over a tree quotient: exhaustive enumeration with pruning,
//! conjugation orbits, and pullbacks along dg-maps.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::algebra::{AlgebraElement, Differential, DgMap, Dga, Generator};
use crate::garden::Garden;
use crate::group_theory::{letter_gen, letter_is_inverse, project_to_tree, vertex_relator, GroupWord};
use crate::plane_graph::{Dart, PlaneGraph, SpanningTreeMissingOne};
use crate::words;

/// Default cap on the number of leaves an exhaustive search may visit.
pub const DEFAULT_SEARCH_LIMIT: u128 = 200_000_000;

/// Errors from field construction and enumeration.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepresentationError {
    #[error("{0} is not a prime power of supported size")]
    NotAField(usize),
    #[error("search space of {bound} exceeds the limit {limit}")]
    SearchSpaceTooLarge { bound: u128, limit: u128 },
    #[error("the group action left the supplied set")]
    NotInvariant,
}

/// A finite field of order q = p^k with elements 0..q, encoded as base-p
/// digit vectors of polynomials modulo a fixed irreducible polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: usize,
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

fn prime_power(q: usize) -> Option<(usize, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut n = q;
    let mut k = 0;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    (n == 1).then_some((p, k))
}

fn digits(x: usize, p: usize, k: usize) -> Vec<usize> {
    let mut v = Vec::with_capacity(k);
    let mut x = x;
    for _ in 0..k {
        v.push(x % p);
        x /= p;
    }
    v
}

fn undigits(v: &[usize], p: usize) -> usize {
    v.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Remainder of a polynomial modulo a monic one, coefficients mod p.
fn poly_rem(a: &[usize], m: &[usize], p: usize) -> Vec<usize> {
    let mut a = a.to_vec();
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a[a.len() - 1] % p;
        let shift = a.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            a[shift + i] = (a[shift + i] + p * p - lead * c % p) % p;
        }
        a.pop();
    }
    a
}

fn is_irreducible(m: &[usize], p: usize) -> bool {
    let k = m.len() - 1;
    for d in 1..=k / 2 {
        for low in 0..p.pow(d as u32) {
            let mut f = digits(low, p, d);
            f.push(1);
            if poly_rem(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    /// The field of order `q`; supports prime powers up to 256.
    pub fn new(q: usize) -> Result<Self, RepresentationError> {
        let (p, k) = prime_power(q).filter(|_| q <= 256).ok_or(RepresentationError::NotAField(q))?;
        let k = k as usize;
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            (0..p.pow(k as u32))
                .map(|low| {
                    let mut m = digits(low, p, k);
                    m.push(1);
                    m
                })
                .find(|m| is_irreducible(m, p))
                .expect("an irreducible polynomial exists in every degree")
        };
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            let da = digits(a, p, k);
            for b in 0..q {
                let db = digits(b, p, k);
                let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&s, p) as u8;
                let mut prod = vec![0usize; 2 * k];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let r = if k == 1 { vec![prod[0]] } else { poly_rem(&prod, &modulus, p) };
                mul[a * q + b] = undigits(&r, p) as u8;
            }
        }
        let neg = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8).collect();
        let inv = (0..q).map(|a| if a == 0 { 0 } else { (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u8 }).collect();
        Ok(FiniteField { p, q, add, mul, neg, inv })
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: u8) -> Option<u8> {
        (a != 0).then(|| self.inv[a as usize])
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> u8 {
        n.rem_euclid(self.p as i64) as u8
    }

    pub fn from_bigint(&self, n: &BigInt) -> u8 {
        let r = n % BigInt::from(self.p);
        self.from_int(r.to_i64().expect("residue fits"))
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> {
        (0..self.q).map(|a| a as u8)
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> u8 {
        (1..self.q as u8)
            .find(|&g| {
                let mut x = g;
                let mut order = 1;
                while x != 1 {
                    x = self.mul(x, g);
                    order += 1;
                }
                order == self.q - 1
            })
            .expect("the multiplicative group is cyclic")
    }
}

/// A dense matrix over a finite field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u8>,
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FqMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = FqMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        FqMatrix { rows: r, cols: c, data: rows.concat() }
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &FqMatrix, f: &FiniteField) -> FqMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = FqMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &FqMatrix, f: &FiniteField) -> FqMatrix {
        FqMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect() }
    }

    pub fn sub(&self, other: &FqMatrix, f: &FiniteField) -> FqMatrix {
        self.add(&other.neg(f), f)
    }

    pub fn neg(&self, f: &FiniteField) -> FqMatrix {
        self.scale(f.neg(1), f)
    }

    pub fn scale(&self, c: u8, f: &FiniteField) -> FqMatrix {
        FqMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(c, a)).collect() }
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut out = FqMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self, f: &FiniteField) -> (FqMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| m.get(i, col) != 0) else { continue };
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, row * m.cols + j);
            }
            let inv = f.inv(m.get(row, col)).unwrap();
            for j in 0..m.cols {
                let v = f.mul(inv, m.get(row, j));
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                let c = m.get(i, col);
                if i != row && c != 0 {
                    for j in 0..m.cols {
                        let v = f.sub(m.get(i, j), f.mul(c, m.get(row, j)));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, f: &FiniteField) -> usize {
        self.rref(f).1.len()
    }

    pub fn is_invertible(&self, f: &FiniteField) -> bool {
        self.rows == self.cols && self.rank(f) == self.rows
    }

    pub fn inverse(&self, f: &FiniteField) -> Option<FqMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&FqMatrix::identity(n));
        let (r, pivots) = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    /// Determinant by elimination.
    pub fn det(&self, f: &FiniteField) -> u8 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1u8;
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| m.get(i, col) != 0) else { return 0 };
            if p != col {
                for j in 0..n {
                    m.data.swap(p * n + j, col * n + j);
                }
                det = f.neg(det);
            }
            let pivot = m.get(col, col);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot).unwrap();
            for i in col + 1..n {
                let c = f.mul(m.get(i, col), inv);
                if c != 0 {
                    for j in col..n {
                        let v = f.sub(m.get(i, j), f.mul(c, m.get(col, j)));
                        m.set(i, j, v);
                    }
                }
            }
        }
        det
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> FqMatrix {
        let mut out = FqMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r0 + i, c0 + j));
            }
        }
        out
    }

    pub fn hstack(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = FqMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    pub fn vstack(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, other.cols);
        FqMatrix { rows: self.rows + other.rows, cols: self.cols, data: [self.data.as_slice(), other.data.as_slice()].concat() }
    }

    /// The 2x2 block matrix with the given blocks.
    pub fn from_blocks(a: &FqMatrix, b: &FqMatrix, c: &FqMatrix, d: &FqMatrix) -> FqMatrix {
        a.hstack(b).vstack(&c.hstack(d))
    }
}

/// All matrices of size n x n over the field, in lexicographic order of entries.
pub fn all_matrices(f: &FiniteField, n: usize) -> Vec<FqMatrix> {
    let q = f.order();
    let count = q.pow((n * n) as u32);
    (0..count)
        .map(|mut x| {
            let mut m = FqMatrix::zeros(n, n);
            for k in 0..n * n {
                m.data[k] = (x % q) as u8;
                x /= q;
            }
            m
        })
        .collect()
}

/// All invertible n x n matrices.
pub fn general_linear_group(f: &FiniteField, n: usize) -> Vec<FqMatrix> {
    all_matrices(f, n).into_iter().filter(|m| m.det(f) != 0).collect()
}

/// The order of GL_n(F_q).
pub fn general_linear_order(q: usize, n: usize) -> u128 {
    let qn = (q as u128).pow(n as u32);
    (0..n as u32).map(|i| qn - (q as u128).pow(i)).product()
}

/// A generating set of GL_n(F_q): elementary transvections with every
/// nonzero scalar, and a diagonal matrix with a primitive element.
pub fn general_linear_generators(f: &FiniteField, n: usize) -> Vec<FqMatrix> {
    let mut gens = Vec::new();
    let mut d = FqMatrix::identity(n);
    d.set(0, 0, f.primitive_element());
    gens.push(d);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for a in 1..f.order() as u8 {
                let mut t = FqMatrix::identity(n);
                t.set(i, j, a);
                gens.push(t);
            }
        }
    }
    gens
}

/// Partitions a finite set into orbits of a group given by generators,
/// returning an orbit index per item. Fails if an image leaves the set.
pub fn orbit_partition<T, A>(items: &[T], generators: &[A], act: impl Fn(&A, &T) -> T) -> Result<Vec<usize>, RepresentationError>
where
    T: Clone + Eq + Hash,
{
    let index: HashMap<&T, usize> = items.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut orbit = vec![usize::MAX; items.len()];
    let mut next = 0;
    for start in 0..items.len() {
        if orbit[start] != usize::MAX {
            continue;
        }
        orbit[start] = next;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let image = act(g, &items[i]);
                let &j = index.get(&image).ok_or(RepresentationError::NotInvariant)?;
                if orbit[j] == usize::MAX {
                    orbit[j] = next;
                    queue.push_back(j);
                }
            }
        }
        next += 1;
    }
    Ok(orbit)
}

/// Number of distinct orbit labels.
pub fn orbit_count(labels: &[usize]) -> usize {
    labels.iter().max().map_or(0, |m| m + 1)
}

// ---------------------------------------------------------------------------
// Representations.

/// Values of a representation on the tree darts; every other dart acts as
/// the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Representation {
    pub rank: usize,
    pub values: BTreeMap<Dart, FqMatrix>,
}

impl Representation {
    /// The value of a group word.
    pub fn eval_word(&self, w: &GroupWord, f: &FiniteField) -> FqMatrix {
        let mut m = FqMatrix::identity(self.rank);
        for &l in w.letters() {
            if let Some(v) = self.values.get(&letter_gen(l)) {
                let v = if letter_is_inverse(l) { v.inverse(f).expect("values are invertible") } else { v.clone() };
                m = m.mul(&v, f);
            }
        }
        m
    }

    /// The value of an element; generators of positive degree act as zero.
    pub fn eval(&self, e: &AlgebraElement, f: &FiniteField) -> FqMatrix {
        let mut total = FqMatrix::zeros(self.rank, self.rank);
        for (m, c) in e.terms() {
            if !m.generators().is_empty() {
                continue;
            }
            let mut prod = FqMatrix::identity(self.rank);
            for w in m.ring_factors() {
                prod = prod.mul(&self.eval_word(w, f), f);
            }
            total = total.add(&prod.scale(f.from_bigint(c), f), f);
        }
        total
    }

    /// Conjugation g ε g⁻¹.
    pub fn conjugate(&self, g: &FqMatrix, f: &FiniteField) -> Representation {
        let gi = g.inverse(f).expect("conjugating matrix is invertible");
        Representation { rank: self.rank, values: self.values.iter().map(|(&d, m)| (d, g.mul(m, f).mul(&gi, f))).collect() }
    }
}

/// The darts of a tree in breadth-first edge order starting next to the
/// missed vertex.
pub fn tree_darts(graph: &PlaneGraph, tree: &SpanningTreeMissingOne) -> Vec<Dart> {
    let v0 = (0..graph.num_darts())
        .find(|&d| graph.tail(d) == tree.missed_vertex)
        .map(|d| graph.head(d))
        .filter(|&v| v != tree.missed_vertex)
        .unwrap_or(0);
    let mut seen_v = vec![false; graph.num_vertices()];
    let mut seen_e = vec![false; graph.num_edges()];
    let mut order = Vec::new();
    let mut queue = VecDeque::from([v0]);
    seen_v[v0] = true;
    while let Some(v) = queue.pop_front() {
        for d in graph.vertex_darts(v) {
            let e = graph.edge_of(d);
            if tree.contains(e) && !seen_e[e] {
                seen_e[e] = true;
                order.extend([2 * e, 2 * e + 1]);
                let w = graph.head(d);
                if !seen_v[w] {
                    seen_v[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    for &e in &tree.edges {
        if !seen_e[e] {
            order.extend([2 * e, 2 * e + 1]);
        }
    }
    order
}

enum ConstraintKind {
    Relator(GroupWord),
    Vanishing(Vec<(u8, Vec<GroupWord>)>),
}

struct Constraint {
    kind: ConstraintKind,
}

impl Constraint {
    fn holds(&self, values: &BTreeMap<Dart, FqMatrix>, rank: usize, f: &FiniteField) -> bool {
        let rep = Representation { rank, values: values.clone() };
        match &self.kind {
            ConstraintKind::Relator(w) => rep.eval_word(w, f) == FqMatrix::identity(rank),
            ConstraintKind::Vanishing(terms) => {
                let mut total = FqMatrix::zeros(rank, rank);
                for (c, ws) in terms {
                    let mut prod = FqMatrix::identity(rank);
                    for w in ws {
                        prod = prod.mul(&rep.eval_word(w, f), f);
                    }
                    total = total.add(&prod.scale(*c, f), f);
                }
                total.is_zero()
            }
        }
    }

    fn darts(&self) -> Vec<Dart> {
        let words: Vec<&GroupWord> = match &self.kind {
            ConstraintKind::Relator(w) => vec![w],
            ConstraintKind::Vanishing(terms) => terms.iter().flat_map(|(_, ws)| ws.iter()).collect(),
        };
        words.iter().flat_map(|w| w.letters().iter().map(|&l| letter_gen(l))).collect()
    }
}

/// The representation problem of a dg-algebra over a tree quotient: the
/// tree darts, the vertex relators away from the missed vertex, and the
/// degree-zero parts of the differentials.
pub struct RepresentationProblem {
    darts: Vec<Dart>,
    relators: Vec<GroupWord>,
    differential: Differential,
    generators: Vec<Generator>,
}

impl RepresentationProblem {
    /// The problem for a dg-algebra whose coefficients live in the full group.
    pub fn new(graph: &PlaneGraph, tree: &SpanningTreeMissingOne, dga: &Dga) -> Self {
        let relators = (0..graph.num_vertices())
            .filter(|&v| v != tree.missed_vertex)
            .map(|v| project_to_tree(&vertex_relator(graph, v), tree))
            .collect();
        RepresentationProblem {
            darts: tree_darts(graph, tree),
            relators,
            differential: dga.differential.clone(),
            generators: dga.generators.clone(),
        }
    }

    /// The problem for the enlarged algebra of a garden.
    pub fn for_garden(graph: &PlaneGraph, garden: &Garden, tree: &SpanningTreeMissingOne) -> Self {
        let d = words::differential(graph, garden);
        let generators = crate::dg_transformations::algebra_generators(graph);
        RepresentationProblem::new(graph, tree, &Dga { generators, differential: d })
    }

    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }

    /// Size of the unpruned search space, |GL_r(F_q)|^(number of tree darts).
    pub fn search_bound(&self, q: usize, r: usize) -> u128 {
        let gl = general_linear_order(q, r);
        (0..self.darts.len()).try_fold(1u128, |acc, _| acc.checked_mul(gl)).unwrap_or(u128::MAX)
    }

    /// Whether a candidate satisfies every relator and every vanishing
    /// condition, evaluated directly on the algebra elements.
    pub fn verify(&self, rep: &Representation, f: &FiniteField) -> bool {
        let id = FqMatrix::identity(rep.rank);
        self.relators.iter().all(|w| rep.eval_word(w, f) == id)
            && self.generators.iter().all(|&s| rep.eval(&self.differential.on_generator(s), f).is_zero())
            && rep.values.values().all(|m| m.is_invertible(f))
    }

    fn constraints(&self, f: &FiniteField) -> Vec<Constraint> {
        let mut out: Vec<Constraint> = self.relators.iter().map(|w| Constraint { kind: ConstraintKind::Relator(w.clone()) }).collect();
        for &s in &self.generators {
            let ring = self.differential.on_generator(s).ring_part();
            if ring.is_zero() {
                continue;
            }
            let terms = ring
                .terms()
                .map(|(m, c)| {
                    let ws: Vec<GroupWord> = m.ring_factors().iter().map(|w| restrict_word(w, &self.darts)).collect();
                    (f.from_bigint(c), ws)
                })
                .collect();
            out.push(Constraint { kind: ConstraintKind::Vanishing(terms) });
        }
        out
    }

    /// All representations of rank `r`, by backtracking over the tree darts
    /// with each constraint checked as soon as its darts are assigned.
    pub fn enumerate(&self, f: &FiniteField, r: usize, limit: u128) -> Result<Vec<Representation>, RepresentationError> {
        let bound = self.search_bound(f.order(), r);
        if bound > limit {
            return Err(RepresentationError::SearchSpaceTooLarge { bound, limit });
        }
        let position: HashMap<Dart, usize> = self.darts.iter().enumerate().map(|(i, &d)| (d, i)).collect();
        let mut attached: Vec<Vec<Constraint>> = (0..=self.darts.len()).map(|_| Vec::new()).collect();
        for c in self.constraints(f) {
            let slot = c.darts().iter().filter_map(|d| position.get(d)).map(|&i| i + 1).max().unwrap_or(0);
            attached[slot].push(c);
        }
        let gl = general_linear_group(f, r);
        let mut out = Vec::new();
        let mut values = BTreeMap::new();
        if attached[0].iter().all(|c| c.holds(&values, r, f)) {
            self.search(0, &gl, &attached, &mut values, f, r, &mut out);
        }
        Ok(out.into_iter().filter(|rep| self.verify(rep, f)).collect())
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        &self,
        k: usize,
        gl: &[FqMatrix],
        attached: &[Vec<Constraint>],
        values: &mut BTreeMap<Dart, FqMatrix>,
        f: &FiniteField,
        r: usize,
        out: &mut Vec<Representation>,
    ) {
        if k == self.darts.len() {
            out.push(Representation { rank: r, values: values.clone() });
            return;
        }
        for m in gl {
            values.insert(self.darts[k], m.clone());
            if attached[k + 1].iter().all(|c| c.holds(values, r, f)) {
                self.search(k + 1, gl, attached, values, f, r, out);
            }
        }
        values.remove(&self.darts[k]);
    }
}

/// Deletes letters of darts outside the given set.
fn restrict_word(w: &GroupWord, darts: &[Dart]) -> GroupWord {
    let kept: Vec<_> = w.letters().iter().copied().filter(|&l| darts.contains(&letter_gen(l))).collect();
    GroupWord::from_letters(&kept)
}

/// Enumerates the rank-r representations of the enlarged algebra of a
/// garden over the tree quotient.
pub fn enumerate_representations(
    graph: &PlaneGraph,
    garden: &Garden,
    tree: &SpanningTreeMissingOne,
    f: &FiniteField,
    r: usize,
) -> Result<Vec<Representation>, RepresentationError> {
    RepresentationProblem::for_garden(graph, garden, tree).enumerate(f, r, DEFAULT_SEARCH_LIMIT)
}

/// Orbit labels of representations under simultaneous conjugation.
pub fn conjugation_orbits(reps: &[Representation], f: &FiniteField, r: usize) -> Result<Vec<usize>, RepresentationError> {
    let gens = general_linear_generators(f, r);
    orbit_partition(reps, &gens, |g, rep| rep.conjugate(g, f))
}

/// The pullback ε ∘ Φ read on the darts of the source tree. Positive-degree
/// generators map to positive-degree elements, so only the coefficient map
/// of Φ matters.
pub fn pullback(map: &DgMap, rep: &Representation, source_darts: &[Dart], f: &FiniteField) -> Representation {
    let mut values = BTreeMap::new();
    for &d in source_darts {
        let (negate, w) = map.ring.apply_word(&GroupWord::generator(d));
        let v = rep.eval_word(&w, f);
        values.insert(d, if negate { v.neg(f) } else { v });
    }
    Representation { rank: rep.rank, values }
}

/// Whether a map between two finite sets of representations is a bijection.
pub fn is_bijection(source: &[Representation], target: &[Representation], image: impl Fn(&Representation) -> Representation) -> bool {
    if source.len() != target.len() {
        return false;
    }
    let targets: std::collections::HashSet<&Representation> = target.iter().collect();
    let mut hit = std::collections::HashSet::new();
    source.iter().all(|s| {
        let t = image(s);
        targets.contains(&t) && hit.insert(t)
    })
}

