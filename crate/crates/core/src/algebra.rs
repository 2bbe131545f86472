//! The graded algebra Z[Π] * Z<F, x, y, z, w>: elements as sums of
//! alternating ring/generator monomials, Leibniz differentials, graded
//! algebra maps, and the stable tame machinery (elementary automorphisms,
//! regenerations, stabilization and destabilization, chain homotopies).
//!
//! Elements are collected structurally, merging monomials whose ring factors
//! are equal as freely reduced words. Equality in the group ring is decided
//! by [`GroupRing`], which merges monomials whose ring factors are equal in
//! the coefficient group.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::group_theory::{abelianize, letter_gen, letter_is_inverse, AbelianVector, Group, GroupWord};
use crate::plane_graph::{Dart, PlaneGraph};

/// Errors raised by algebra operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("elementary automorphism of {generator} has a shift mentioning {generator}")]
    SelfReference { generator: Generator },
    #[error("cannot destabilize at ({x}, {y}): {reason}")]
    DestabilizationObstructed { x: Generator, y: Generator, reason: String },
    #[error("homotopy coefficient {numerator} is not divisible by {denominator}")]
    NonIntegralDivision { numerator: BigInt, denominator: usize },
    #[error("cannot parse algebra element: {0}")]
    Parse(String),
}

/// A generator of the free graded algebra over the group ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// A face of the graph, degree 1.
    Face(usize),
    X,
    Y,
    Z,
    W,
    /// A generator added by stabilization, with its degree.
    Aux { id: usize, degree: u32 },
}

impl Generator {
    pub fn degree(&self) -> u32 {
        match self {
            Generator::Face(_) => 1,
            Generator::X | Generator::Y | Generator::Z | Generator::W => 2,
            Generator::Aux { degree, .. } => *degree,
        }
    }

    /// The matrix entry of X = (z w; y x) at (row, column).
    pub fn matrix_entry(i: usize, j: usize) -> Generator {
        match (i, j) {
            (0, 0) => Generator::Z,
            (0, 1) => Generator::W,
            (1, 0) => Generator::Y,
            _ => Generator::X,
        }
    }

    fn parse(token: &str) -> Option<Generator> {
        match token {
            "x" => Some(Generator::X),
            "y" => Some(Generator::Y),
            "z" => Some(Generator::Z),
            "w" => Some(Generator::W),
            _ => {
                if let Some(rest) = token.strip_prefix('f') {
                    let k: usize = rest.parse().ok()?;
                    return (k >= 1).then(|| Generator::Face(k - 1));
                }
                let rest = token.strip_prefix('s')?;
                let (id, degree) = rest.split_once('_')?;
                Some(Generator::Aux { id: id.parse().ok()?, degree: degree.parse().ok()? })
            }
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Face(k) => write!(f, "f{}", k + 1),
            Generator::X => write!(f, "x"),
            Generator::Y => write!(f, "y"),
            Generator::Z => write!(f, "z"),
            Generator::W => write!(f, "w"),
            Generator::Aux { id, degree } => write!(f, "s{id}_{degree}"),
        }
    }
}

/// An alternating product r0 s1 r1 ... sk rk of group words and generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    gens: Vec<Generator>,
    ring: Vec<GroupWord>,
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial { gens: Vec::new(), ring: vec![GroupWord::identity()] }
    }

    pub fn from_ring(g: GroupWord) -> Self {
        Monomial { gens: Vec::new(), ring: vec![g] }
    }

    pub fn generator(s: Generator) -> Self {
        Monomial { gens: vec![s], ring: vec![GroupWord::identity(), GroupWord::identity()] }
    }

    /// Builds a monomial from its parts; `ring` must be one longer than `gens`.
    pub fn from_parts(ring: Vec<GroupWord>, gens: Vec<Generator>) -> Self {
        assert_eq!(ring.len(), gens.len() + 1, "ring factors must interleave generators");
        Monomial { gens, ring }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn ring_factors(&self) -> &[GroupWord] {
        &self.ring
    }

    pub fn degree(&self) -> u32 {
        self.gens.iter().map(Generator::degree).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut ring = self.ring.clone();
        let last = ring.pop().expect("monomial has a ring factor");
        ring.push(last.mul(&other.ring[0]));
        ring.extend(other.ring[1..].iter().cloned());
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&other.gens);
        Monomial { gens, ring }
    }

    /// Prefix up to (not including) generator `k`, as a monomial ending in ring factor k.
    fn prefix(&self, k: usize) -> Monomial {
        Monomial { gens: self.gens[..k].to_vec(), ring: self.ring[..=k].to_vec() }
    }

    /// Suffix after generator `k`, starting at ring factor k+1.
    fn suffix(&self, k: usize) -> Monomial {
        Monomial { gens: self.gens[k + 1..].to_vec(), ring: self.ring[k + 1..].to_vec() }
    }
}

/// A finite Z-linear combination of monomials.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    terms: BTreeMap<Monomial, BigInt>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn one() -> Self {
        Self::from_monomial(Monomial::unit(), BigInt::one())
    }

    pub fn from_monomial(m: Monomial, c: BigInt) -> Self {
        let mut e = AlgebraElement::zero();
        e.add_term(m, c);
        e
    }

    /// The ring element c * g.
    pub fn ring(g: GroupWord, c: i64) -> Self {
        Self::from_monomial(Monomial::from_ring(g), BigInt::from(c))
    }

    pub fn generator(s: Generator) -> Self {
        Self::from_monomial(Monomial::generator(s), BigInt::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Structural zero; use [`GroupRing::is_zero`] for equality in the group ring.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> AlgebraElement {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, k: &BigInt) -> AlgebraElement {
        if k.is_zero() {
            return AlgebraElement::zero();
        }
        AlgebraElement { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Degree if every term has the same degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Whether some term contains the generator.
    pub fn mentions(&self, s: Generator) -> bool {
        self.terms.keys().any(|m| m.gens.contains(&s))
    }

    /// Generators appearing anywhere in the element.
    pub fn support(&self) -> BTreeSet<Generator> {
        self.terms.keys().flat_map(|m| m.gens.iter().copied()).collect()
    }

    /// Terms of degree zero, as a ring element.
    pub fn ring_part(&self) -> AlgebraElement {
        AlgebraElement { terms: self.terms.iter().filter(|(m, _)| m.gens.is_empty()).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    /// Terms that do not contain the generator.
    pub fn without(&self, s: Generator) -> AlgebraElement {
        AlgebraElement { terms: self.terms.iter().filter(|(m, _)| !m.gens.contains(&s)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    /// Linear extension of a rule on monomials.
    pub fn map_monomials(&self, mut rule: impl FnMut(&Monomial) -> AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (m, c) in &self.terms {
            for (m2, c2) in rule(m).terms {
                out.add_term(m2, c2 * c);
            }
        }
        out
    }

    /// Text form: terms `[coef] a * b * ...` joined by ` + `, ring words
    /// written as dot-separated dart names with `^-1` for inverses.
    pub fn to_text(&self, graph: &PlaneGraph) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let mut tokens = vec![format!("[{c}]")];
            for (k, r) in m.ring.iter().enumerate() {
                if !r.is_empty() {
                    tokens.push(ring_word_text(graph, r));
                }
                if k < m.gens.len() {
                    tokens.push(m.gens[k].to_string());
                }
            }
            parts.push(tokens.join(" * ").replacen(" * ", " ", 1));
        }
        parts.join(" + ")
    }

    /// Parses the output of [`AlgebraElement::to_text`].
    pub fn from_text(graph: &PlaneGraph, text: &str) -> Result<AlgebraElement, AlgebraError> {
        let text = text.trim();
        let mut out = AlgebraElement::zero();
        if text == "0" {
            return Ok(out);
        }
        for term in text.split(" + ") {
            let term = term.trim();
            let rest = term.strip_prefix('[').ok_or_else(|| AlgebraError::Parse(term.to_string()))?;
            let (coef, body) = rest.split_once(']').ok_or_else(|| AlgebraError::Parse(term.to_string()))?;
            let coef: BigInt = coef.parse().map_err(|_| AlgebraError::Parse(coef.to_string()))?;
            let mut m = Monomial::unit();
            for tok in body.split('*').map(str::trim).filter(|t| !t.is_empty()) {
                let factor = match Generator::parse(tok) {
                    Some(s) => Monomial::generator(s),
                    None => Monomial::from_ring(parse_ring_word(graph, tok)?),
                };
                m = m.mul(&factor);
            }
            out.add_term(m, coef);
        }
        Ok(out)
    }
}

/// Dart names joined by dots, `1` for the identity.
pub fn ring_word_text(graph: &PlaneGraph, w: &GroupWord) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    w.letters()
        .iter()
        .map(|&l| {
            let name = graph.dart_name(letter_gen(l));
            if letter_is_inverse(l) {
                format!("{name}^-1")
            } else {
                name
            }
        })
        .collect::<Vec<_>>()
        .join(".")
}

fn parse_ring_word(graph: &PlaneGraph, tok: &str) -> Result<GroupWord, AlgebraError> {
    if tok == "1" {
        return Ok(GroupWord::identity());
    }
    let mut letters = Vec::new();
    for part in tok.split('.') {
        let (name, inverse) = match part.strip_suffix("^-1") {
            Some(n) => (n, true),
            None => (part, false),
        };
        let d = (0..graph.num_darts()).find(|&d| graph.dart_name(d) == name).ok_or_else(|| AlgebraError::Parse(part.to_string()))?;
        letters.push(crate::group_theory::letter(d, inverse));
    }
    Ok(GroupWord::from_letters(&letters))
}

/// A 2x2 matrix of algebra elements, indexed by (start state, end state).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix2(pub [[AlgebraElement; 2]; 2]);

impl Matrix2 {
    pub fn identity() -> Self {
        Matrix2([[AlgebraElement::one(), AlgebraElement::zero()], [AlgebraElement::zero(), AlgebraElement::one()]])
    }

    pub fn zero() -> Self {
        Matrix2(Default::default())
    }

    /// The matrix X = (z w; y x) of degree 2 generators.
    pub fn generators() -> Self {
        let g = |i, j| AlgebraElement::generator(Generator::matrix_entry(i, j));
        Matrix2([[g(0, 0), g(0, 1)], [g(1, 0), g(1, 1)]])
    }

    /// The strictly upper triangular matrix with entry `a`.
    pub fn nilpotent(a: AlgebraElement) -> Self {
        Matrix2([[AlgebraElement::zero(), a], [AlgebraElement::zero(), AlgebraElement::zero()]])
    }

    /// The unipotent matrix (1 a; 0 1).
    pub fn unipotent(a: AlgebraElement) -> Self {
        Matrix2([[AlgebraElement::one(), a], [AlgebraElement::zero(), AlgebraElement::one()]])
    }

    pub fn entry(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.0[i][j]
    }

    pub fn mul(&self, other: &Matrix2) -> Matrix2 {
        let mut out = Matrix2::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = self.0[i][0].mul(&other.0[0][j]).add(&self.0[i][1].mul(&other.0[1][j]));
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix2) -> Matrix2 {
        let mut out = self.clone();
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = out.0[i][j].add(&other.0[i][j]);
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix2) -> Matrix2 {
        self.add(&other.map(|e| e.neg()))
    }

    pub fn map(&self, mut f: impl FnMut(&AlgebraElement) -> AlgebraElement) -> Matrix2 {
        Matrix2([[f(&self.0[0][0]), f(&self.0[0][1])], [f(&self.0[1][0]), f(&self.0[1][1])]])
    }
}

/// Equality and canonical forms in the group ring of a presented group.
#[derive(Debug, Clone)]
pub struct GroupRing {
    group: Group,
}

impl GroupRing {
    pub fn new(group: Group) -> Self {
        GroupRing { group }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    /// Merges monomials whose generator sequences agree and whose ring
    /// factors are pairwise equal in the group, dropping zero sums. Each class
    /// is represented by its least member.
    pub fn canonicalize(&self, e: &AlgebraElement) -> AlgebraElement {
        let mut buckets: BTreeMap<(Vec<Generator>, Vec<crate::group_theory::ClassKey>), Vec<(Monomial, BigInt)>> = BTreeMap::new();
        for (m, c) in &e.terms {
            let m = if self.group.has_normal_forms() {
                Monomial {
                    gens: m.gens.clone(),
                    ring: m.ring.iter().map(|r| self.group.normal_form(r).expect("normal forms exist")).collect(),
                }
            } else {
                m.clone()
            };
            let key = (m.gens.clone(), m.ring.iter().map(|r| self.group.class_key(r)).collect());
            buckets.entry(key).or_default().push((m, c.clone()));
        }
        let mut out = AlgebraElement::zero();
        for (_, mut members) in buckets {
            members.sort_by(|a, b| a.0.cmp(&b.0));
            let mut classes: Vec<(Monomial, BigInt)> = Vec::new();
            for (m, c) in members {
                let found = classes.iter_mut().find(|(rep, _)| {
                    self.group.has_normal_forms() || rep.ring.iter().zip(&m.ring).all(|(a, b)| a == b || self.group.is_equal(a, b))
                });
                match found {
                    Some((_, total)) => *total += c,
                    None => classes.push((m, c)),
                }
            }
            for (m, c) in classes {
                out.add_term(m, c);
            }
        }
        out
    }

    /// Exact zero test in the algebra over the group ring.
    pub fn is_zero(&self, e: &AlgebraElement) -> bool {
        self.canonicalize(e).is_zero()
    }

    pub fn equal(&self, a: &AlgebraElement, b: &AlgebraElement) -> bool {
        self.is_zero(&a.sub(b))
    }

    pub fn matrix_equal(&self, a: &Matrix2, b: &Matrix2) -> bool {
        (0..2).all(|i| (0..2).all(|j| self.equal(a.entry(i, j), b.entry(i, j))))
    }
}

/// A ring homomorphism of Z[Π] given on dart generators by signed group words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RingMap {
    images: BTreeMap<Dart, (bool, GroupWord)>,
}

impl RingMap {
    pub fn identity() -> Self {
        RingMap::default()
    }

    /// Negates every generator lying on one of the given edges.
    pub fn negate_edges(graph: &PlaneGraph, edges: &[usize]) -> Self {
        let mut images = BTreeMap::new();
        for d in 0..graph.num_darts() {
            if edges.contains(&graph.edge_of(d)) {
                images.insert(d, (true, GroupWord::generator(d)));
            }
        }
        RingMap { images }
    }

    /// Sends each listed dart generator to a group word.
    pub fn from_images(images: impl IntoIterator<Item = (Dart, GroupWord)>) -> Self {
        RingMap { images: images.into_iter().map(|(d, w)| (d, (false, w))).collect() }
    }

    pub fn set(&mut self, d: Dart, negate: bool, image: GroupWord) {
        self.images.insert(d, (negate, image));
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().all(|(&d, (neg, w))| !neg && *w == GroupWord::generator(d))
    }

    /// Image of a word: a sign and a group word.
    pub fn apply_word(&self, w: &GroupWord) -> (bool, GroupWord) {
        let mut negate = false;
        let mut letters = Vec::new();
        for &l in w.letters() {
            let d = letter_gen(l);
            match self.images.get(&d) {
                Some((neg, img)) => {
                    negate ^= neg;
                    if letter_is_inverse(l) {
                        letters.extend(img.inverse().letters().iter().copied());
                    } else {
                        letters.extend(img.letters().iter().copied());
                    }
                }
                None => letters.push(l),
            }
        }
        (negate, GroupWord::from_letters(&letters))
    }

    /// The composite `then ∘ self`.
    pub fn then(&self, then: &RingMap) -> RingMap {
        let mut images = then.images.clone();
        for (&d, (neg, w)) in &self.images {
            let (n2, w2) = then.apply_word(w);
            images.insert(d, (neg ^ n2, w2));
        }
        RingMap { images }
    }
}

/// A Leibniz differential given by its values on generators.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Differential {
    images: BTreeMap<Generator, AlgebraElement>,
}

impl Differential {
    pub fn new() -> Self {
        Differential::default()
    }

    pub fn set(&mut self, s: Generator, value: AlgebraElement) {
        self.images.insert(s, value);
    }

    /// Value on a generator; generators without an entry map to zero.
    pub fn on_generator(&self, s: Generator) -> AlgebraElement {
        self.images.get(&s).cloned().unwrap_or_default()
    }

    pub fn generators(&self) -> impl Iterator<Item = &Generator> {
        self.images.keys()
    }

    /// Leibniz expansion with sign (-1)^(degree of the prefix); ring
    /// elements are annihilated.
    pub fn apply(&self, e: &AlgebraElement) -> AlgebraElement {
        e.map_monomials(|m| {
            let mut out = AlgebraElement::zero();
            let mut prefix_degree = 0;
            for k in 0..m.gens.len() {
                let ds = self.on_generator(m.gens[k]);
                if !ds.is_zero() {
                    let sign = if prefix_degree % 2 == 0 { BigInt::one() } else { BigInt::from(-1) };
                    let pre = AlgebraElement::from_monomial(m.prefix(k), sign);
                    let post = AlgebraElement::from_monomial(m.suffix(k), BigInt::one());
                    out = out.add(&pre.mul(&ds).mul(&post));
                }
                prefix_degree += m.gens[k].degree();
            }
            out
        })
    }

    pub fn apply_matrix(&self, m: &Matrix2) -> Matrix2 {
        m.map(|e| self.apply(e))
    }

    /// Whether the differential squares to zero on every generator.
    pub fn squares_to_zero(&self, ring: &GroupRing) -> Result<(), (Generator, AlgebraElement)> {
        for (&s, v) in &self.images {
            let dd = ring.canonicalize(&self.apply(v));
            if !dd.is_zero() {
                return Err((s, dd));
            }
        }
        Ok(())
    }
}

/// A graded algebra map: a ring map on coefficients and images of
/// generators (generators without an entry are fixed).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DgMap {
    pub ring: RingMap,
    images: BTreeMap<Generator, AlgebraElement>,
}

/// The generator and residual Φ∂s - ∂'Φs where a map fails to intertwine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntertwiningFailure {
    pub generator: Generator,
    pub residual: AlgebraElement,
}

impl DgMap {
    pub fn identity() -> Self {
        DgMap::default()
    }

    pub fn with_ring(ring: RingMap) -> Self {
        DgMap { ring, images: BTreeMap::new() }
    }

    pub fn set(&mut self, s: Generator, image: AlgebraElement) {
        self.images.insert(s, image);
    }

    /// Sets the images of x, y, z, w from a matrix in the layout of X.
    pub fn set_matrix(&mut self, m: &Matrix2) {
        for i in 0..2 {
            for j in 0..2 {
                self.set(Generator::matrix_entry(i, j), m.entry(i, j).clone());
            }
        }
    }

    pub fn on_generator(&self, s: Generator) -> AlgebraElement {
        self.images.get(&s).cloned().unwrap_or_else(|| AlgebraElement::generator(s))
    }

    pub fn apply(&self, e: &AlgebraElement) -> AlgebraElement {
        e.map_monomials(|m| {
            let ring_elem = |r: &GroupWord| {
                let (neg, w) = self.ring.apply_word(r);
                AlgebraElement::ring(w, if neg { -1 } else { 1 })
            };
            let mut out = ring_elem(&m.ring[0]);
            for k in 0..m.gens.len() {
                out = out.mul(&self.on_generator(m.gens[k])).mul(&ring_elem(&m.ring[k + 1]));
            }
            out
        })
    }

    pub fn apply_matrix(&self, m: &Matrix2) -> Matrix2 {
        m.map(|e| self.apply(e))
    }

    /// The composite `then ∘ self`.
    pub fn then(&self, then: &DgMap) -> DgMap {
        let mut out = DgMap::with_ring(self.ring.then(&then.ring));
        let keys: BTreeSet<Generator> = self.images.keys().chain(then.images.keys()).copied().collect();
        for s in keys {
            out.set(s, then.apply(&self.on_generator(s)));
        }
        out
    }

    /// Checks Φ(∂s) = ∂'(Φ s) exactly on each listed generator.
    pub fn check_intertwines(
        &self,
        generators: &[Generator],
        source: &Differential,
        target: &Differential,
        ring: &GroupRing,
    ) -> Result<(), IntertwiningFailure> {
        for &s in generators {
            let lhs = self.apply(&source.on_generator(s));
            let rhs = target.apply(&self.on_generator(s));
            let residual = ring.canonicalize(&lhs.sub(&rhs));
            if !residual.is_zero() {
                return Err(IntertwiningFailure { generator: s, residual });
            }
        }
        Ok(())
    }

    /// Whether the map agrees with another on the given generators and on
    /// the listed ring generators.
    pub fn agrees_with(&self, other: &DgMap, generators: &[Generator], darts: &[Dart], ring: &GroupRing) -> bool {
        generators.iter().all(|&s| ring.equal(&self.on_generator(s), &other.on_generator(s)))
            && darts.iter().all(|&d| {
                let g = AlgebraElement::ring(GroupWord::generator(d), 1);
                ring.equal(&self.apply(&g), &other.apply(&g))
            })
    }
}

/// A semi-free dg-algebra: its generators and differential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dga {
    pub generators: Vec<Generator>,
    pub differential: Differential,
}

/// Result of a stabilization: the enlarged algebra, the two new generators,
/// and the inclusion and projection maps.
#[derive(Debug, Clone)]
pub struct Stabilization {
    pub dga: Dga,
    pub x: Generator,
    pub y: Generator,
    pub inclusion: DgMap,
    pub projection: DgMap,
}

impl Dga {
    /// Adds generators x', y' with deg y' = deg x' + 1, ∂y' = x', ∂x' = 0.
    pub fn stabilize(&self, degree: u32) -> Stabilization {
        let next = self.generators.iter().filter_map(|s| if let Generator::Aux { id, .. } = s { Some(id + 1) } else { None }).max().unwrap_or(0);
        let x = Generator::Aux { id: next, degree };
        let y = Generator::Aux { id: next + 1, degree: degree + 1 };
        let mut differential = self.differential.clone();
        differential.set(y, AlgebraElement::generator(x));
        differential.set(x, AlgebraElement::zero());
        let mut generators = self.generators.clone();
        generators.extend([x, y]);
        let mut projection = DgMap::identity();
        projection.set(x, AlgebraElement::zero());
        projection.set(y, AlgebraElement::zero());
        Stabilization { dga: Dga { generators, differential }, x, y, inclusion: DgMap::identity(), projection }
    }

    /// Removes a cancelling pair with ∂y = x, ∂x = 0 that no other
    /// differential mentions.
    pub fn destabilize(&self, x: Generator, y: Generator, ring: &GroupRing) -> Result<(Dga, DgMap), AlgebraError> {
        let obstructed = |reason: String| AlgebraError::DestabilizationObstructed { x, y, reason };
        if !self.generators.contains(&x) || !self.generators.contains(&y) {
            return Err(obstructed("not a generator".into()));
        }
        if !ring.equal(&self.differential.on_generator(y), &AlgebraElement::generator(x)) {
            return Err(obstructed(format!("∂{y} is not {x}")));
        }
        if !ring.is_zero(&self.differential.on_generator(x)) {
            return Err(obstructed(format!("∂{x} is not zero")));
        }
        let mut differential = Differential::new();
        for &s in &self.generators {
            if s == x || s == y {
                continue;
            }
            let v = ring.canonicalize(&self.differential.on_generator(s));
            if v.mentions(x) || v.mentions(y) {
                return Err(obstructed(format!("∂{s} mentions the pair")));
            }
            differential.set(s, v);
        }
        let generators = self.generators.iter().copied().filter(|&s| s != x && s != y).collect();
        let mut projection = DgMap::identity();
        projection.set(x, AlgebraElement::zero());
        projection.set(y, AlgebraElement::zero());
        Ok((Dga { generators, differential }, projection))
    }

    /// The differential transported along an automorphism with inverse:
    /// ∂' = Φ ∘ ∂ ∘ Φ⁻¹ on generators.
    pub fn transport(&self, map: &DgMap, inverse: &DgMap) -> Dga {
        let mut differential = Differential::new();
        for &s in &self.generators {
            differential.set(s, map.apply(&self.differential.apply(&inverse.on_generator(s))));
        }
        Dga { generators: self.generators.clone(), differential }
    }
}

/// Elementary automorphism s ↦ s + α with its inverse s ↦ s - α.
pub fn elementary_automorphism(s: Generator, alpha: &AlgebraElement) -> Result<(DgMap, DgMap), AlgebraError> {
    if alpha.mentions(s) {
        return Err(AlgebraError::SelfReference { generator: s });
    }
    let mut forward = DgMap::identity();
    forward.set(s, AlgebraElement::generator(s).add(alpha));
    let mut inverse = DgMap::identity();
    inverse.set(s, AlgebraElement::generator(s).sub(alpha));
    Ok((forward, inverse))
}

/// A signed group element used as a regeneration unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unit {
    pub negative: bool,
    pub word: GroupWord,
}

impl Unit {
    pub fn new(negative: bool, word: GroupWord) -> Self {
        Unit { negative, word }
    }

    pub fn element(&self) -> AlgebraElement {
        AlgebraElement::ring(self.word.clone(), if self.negative { -1 } else { 1 })
    }

    pub fn inverse(&self) -> Unit {
        Unit { negative: self.negative, word: self.word.inverse() }
    }
}

/// A regeneration s ↦ u_s · t(s) · v_s, where t permutes generators of equal
/// degree (the identity permutation gives a regeneration in the strict sense).
#[derive(Debug, Clone)]
pub struct Regeneration {
    pub entries: BTreeMap<Generator, (Unit, Generator, Unit)>,
}

impl Regeneration {
    pub fn new() -> Self {
        Regeneration { entries: BTreeMap::new() }
    }

    pub fn set(&mut self, s: Generator, u: Unit, target: Generator, v: Unit) {
        self.entries.insert(s, (u, target, v));
    }

    pub fn to_map(&self) -> DgMap {
        let mut m = DgMap::identity();
        for (&s, (u, t, v)) in &self.entries {
            m.set(s, u.element().mul(&AlgebraElement::generator(*t)).mul(&v.element()));
        }
        m
    }

    /// The inverse regeneration t(s) ↦ u⁻¹ s v⁻¹.
    pub fn inverse(&self) -> Regeneration {
        let mut inv = Regeneration::new();
        for (&s, (u, t, v)) in &self.entries {
            inv.set(*t, u.inverse(), s, v.inverse());
        }
        inv
    }

    /// Generators whose units are inverse up to abelianization and sign.
    pub fn simple_generators(&self, num_edges: usize) -> Vec<Generator> {
        self.entries
            .iter()
            .filter(|(_, (u, _, v))| u.negative == v.negative && abelianize(&u.word.mul(&v.word), num_edges).is_zero())
            .map(|(&s, _)| s)
            .collect()
    }

    /// Abelianized product u_s v_s for a generator.
    pub fn abelian_product(&self, s: Generator, num_edges: usize) -> Option<AbelianVector> {
        self.entries.get(&s).map(|(u, _, v)| abelianize(&u.word.mul(&v.word), num_edges))
    }

    /// Whether the underlying permutation is the identity and every
    /// generator is simple.
    pub fn is_simple(&self, num_edges: usize) -> bool {
        self.entries.iter().all(|(s, (_, t, _))| s == t) && self.simple_generators(num_edges).len() == self.entries.len()
    }
}

impl Default for Regeneration {
    fn default() -> Self {
        Regeneration::new()
    }
}

/// A degree +1 linear operator given on monomials.
pub trait Homotopy {
    fn apply_monomial(&self, m: &Monomial) -> Result<AlgebraElement, AlgebraError>;

    fn apply(&self, e: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        let mut out = AlgebraElement::zero();
        for (m, c) in e.terms() {
            out = out.add(&self.apply_monomial(m)?.scale(c));
        }
        Ok(out)
    }
}

/// The zero homotopy.
pub struct ZeroHomotopy;

impl Homotopy for ZeroHomotopy {
    fn apply_monomial(&self, _: &Monomial) -> Result<AlgebraElement, AlgebraError> {
        Ok(AlgebraElement::zero())
    }
}

/// The averaged stabilization homotopy: each occurrence of x' is replaced by
/// y' in turn, with Koszul signs, and the sum divided by the number of
/// stabilization generators in the monomial. Errors when the division is
/// not exact.
pub struct AveragedStabilizationHomotopy {
    pub x: Generator,
    pub y: Generator,
}

impl Homotopy for AveragedStabilizationHomotopy {
    fn apply_monomial(&self, m: &Monomial) -> Result<AlgebraElement, AlgebraError> {
        let count = m.gens.iter().filter(|&&s| s == self.x || s == self.y).count();
        if count == 0 {
            return Ok(AlgebraElement::zero());
        }
        let mut sum = AlgebraElement::zero();
        let mut prefix_degree = 0;
        for (k, &s) in m.gens.iter().enumerate() {
            if s == self.x {
                let mut gens = m.gens.clone();
                gens[k] = self.y;
                let sign = if prefix_degree % 2 == 0 { 1 } else { -1 };
                sum.add_term(Monomial { gens, ring: m.ring.clone() }, BigInt::from(sign));
            }
            prefix_degree += s.degree();
        }
        let denominator = BigInt::from(count);
        let mut out = AlgebraElement::zero();
        for (mono, c) in sum.terms() {
            if !(c % &denominator).is_zero() {
                return Err(AlgebraError::NonIntegralDivision { numerator: c.clone(), denominator: count });
            }
            out.add_term(mono.clone(), c / &denominator);
        }
        Ok(out)
    }
}

/// Integral stabilization homotopy: the first stabilization generator, if
/// it is x', is replaced by y' with the Koszul sign of its prefix.
pub struct FirstOccurrenceHomotopy {
    pub x: Generator,
    pub y: Generator,
}

impl Homotopy for FirstOccurrenceHomotopy {
    fn apply_monomial(&self, m: &Monomial) -> Result<AlgebraElement, AlgebraError> {
        let mut prefix_degree = 0;
        for (k, &s) in m.gens.iter().enumerate() {
            if s == self.y {
                return Ok(AlgebraElement::zero());
            }
            if s == self.x {
                let mut gens = m.gens.clone();
                gens[k] = self.y;
                let sign = if prefix_degree % 2 == 0 { 1 } else { -1 };
                return Ok(AlgebraElement::from_monomial(Monomial { gens, ring: m.ring.clone() }, BigInt::from(sign)));
            }
            prefix_degree += s.degree();
        }
        Ok(AlgebraElement::zero())
    }
}

/// Checks (Φ - 1)(a) = -(Ψ∂ + ∂Ψ)(a), i.e. 1 - Φ = Ψ∂ + ∂Ψ, on each test element.
pub fn check_chain_homotopy(
    map: &DgMap,
    differential: &Differential,
    homotopy: &dyn Homotopy,
    tests: &[AlgebraElement],
    ring: &GroupRing,
) -> Result<bool, AlgebraError> {
    for a in tests {
        let lhs = a.sub(&map.apply(a));
        let rhs = homotopy.apply(&differential.apply(a))?.add(&differential.apply(&homotopy.apply(a)?));
        if !ring.equal(&lhs, &rhs) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sum of absolute coefficients, a size measure for reports.
pub fn weight(e: &AlgebraElement) -> BigInt {
    e.terms().map(|(_, c)| c.abs()).sum()
}
