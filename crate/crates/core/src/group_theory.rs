//! The coefficient groups: the group on oriented edges modulo vertex
//! relators, its tree quotients, abelianization, and an exact word problem
//! solver based on shortlex Knuth-Bendix completion.
//!
//! Generators are indexed by darts: the generator for dart `d` is the oriented
//! edge pointing along `d`. A letter packs a generator and an exponent sign as
//! `2 * d + (1 if inverse)`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::plane_graph::{Dart, PlaneGraph, SpanningTreeMissingOne};

/// A generator or its inverse, packed as `2 * dart + inverse`.
pub type Letter = u32;

/// Builds the letter for generator `d` with the given exponent sign.
pub fn letter(d: Dart, inverse: bool) -> Letter {
    (2 * d + usize::from(inverse)) as Letter
}

/// The generator (dart) of a letter.
pub fn letter_gen(l: Letter) -> Dart {
    (l / 2) as Dart
}

/// Whether a letter is an inverse generator.
pub fn letter_is_inverse(l: Letter) -> bool {
    l & 1 == 1
}

/// The inverse letter.
pub fn inverse_letter(l: Letter) -> Letter {
    l ^ 1
}

/// Errors from the word problem machinery.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("Knuth-Bendix completion exceeded its budget ({rules} rules, {steps} steps)")]
    CompletionBudgetExceeded { rules: usize, steps: usize },
    #[error("no decision procedure is available for this presentation")]
    NoDecisionProcedure,
    #[error("this group has a decision procedure but no canonical normal forms")]
    NoNormalForm,
}

/// A freely reduced word in the oriented-edge generators.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupWord(Vec<Letter>);

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord(Vec::new())
    }

    /// The generator attached to dart `d`.
    pub fn generator(d: Dart) -> Self {
        GroupWord(vec![letter(d, false)])
    }

    /// Builds a word from letters, freely reducing them.
    pub fn from_letters(letters: &[Letter]) -> Self {
        GroupWord(free_reduce(letters))
    }

    /// Wraps letters that are already freely reduced.
    pub(crate) fn from_reduced(letters: Vec<Letter>) -> Self {
        debug_assert!(is_freely_reduced(&letters));
        GroupWord(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        GroupWord(self.0.iter().rev().map(|&l| inverse_letter(l)).collect())
    }

    /// Concatenates and freely reduces.
    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&inverse_letter(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        GroupWord(out)
    }

    /// Number of letters whose generator lies on edge `e`.
    pub fn edge_count(&self, e: usize) -> usize {
        self.0.iter().filter(|&&l| letter_gen(l) / 2 == e).count()
    }
}

/// Removes adjacent cancelling pairs.
pub fn free_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last() == Some(&inverse_letter(l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn is_freely_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|w| w[0] != inverse_letter(w[1]))
}

/// A global choice of orientation for every edge. The oriented dart of edge
/// `e` carries the generator `A_e`; the other dart carries `B_e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeOrientation {
    plus_is_oriented: Vec<bool>,
}

impl EdgeOrientation {
    /// Every edge oriented along its `+` dart.
    pub fn standard(num_edges: usize) -> Self {
        EdgeOrientation { plus_is_oriented: vec![true; num_edges] }
    }

    pub fn from_flags(plus_is_oriented: Vec<bool>) -> Self {
        EdgeOrientation { plus_is_oriented }
    }

    pub fn num_edges(&self) -> usize {
        self.plus_is_oriented.len()
    }

    /// The dart carrying `A_e`.
    pub fn oriented_dart(&self, e: usize) -> Dart {
        if self.plus_is_oriented[e] {
            2 * e
        } else {
            2 * e + 1
        }
    }

    /// Whether dart `d` is the oriented dart of its edge.
    pub fn is_oriented(&self, d: Dart) -> bool {
        self.oriented_dart(d / 2) == d
    }

    /// `+1` for an `A` letter, `-1` for a `B` letter.
    pub fn sign(&self, d: Dart) -> i64 {
        if self.is_oriented(d) {
            1
        } else {
            -1
        }
    }

    /// Reverses the orientation of edge `e`.
    pub fn flipped(&self, e: usize) -> Self {
        let mut o = self.clone();
        o.plus_is_oriented[e] = !o.plus_is_oriented[e];
        o
    }

    /// Edges on which two orientations disagree.
    pub fn difference(&self, other: &EdgeOrientation) -> Vec<usize> {
        (0..self.num_edges()).filter(|&e| self.plus_is_oriented[e] != other.plus_is_oriented[e]).collect()
    }

    /// `+` or `-` per edge, giving the dart that carries `A_e`.
    pub fn to_text(&self) -> String {
        self.plus_is_oriented.iter().map(|&b| if b { '+' } else { '-' }).collect()
    }

    pub fn from_text(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '+' => Some(true),
                '-' => Some(false),
                _ => None,
            })
            .collect::<Option<Vec<bool>>>()
            .map(Self::from_flags)
    }
}

/// Renders a word with `A_e` / `B_e` names.
pub fn format_word(graph: &PlaneGraph, orientation: &EdgeOrientation, word: &GroupWord) -> String {
    if word.is_empty() {
        return "1".to_string();
    }
    let mut s = String::new();
    for (i, &l) in word.letters().iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let d = letter_gen(l);
        let ab = if orientation.is_oriented(d) { 'A' } else { 'B' };
        let _ = write!(s, "{}_{}", ab, graph.edge_name(d / 2));
        if letter_is_inverse(l) {
            s.push_str("^-1");
        }
    }
    s
}

/// The length-6 relator for vertex `v`: the loop going counterclockwise
/// twice around `v`, read as crossings of the incident edges.
pub fn vertex_relator(graph: &PlaneGraph, v: usize) -> GroupWord {
    let [a0, a1, a2] = graph.vertex_darts(v);
    let al = |d: Dart| graph.alpha(d);
    GroupWord::from_letters(&[
        letter(al(a1), false),
        letter(a2, true),
        letter(al(a0), false),
        letter(a1, true),
        letter(al(a2), false),
        letter(a0, true),
    ])
}

/// A finite presentation on a subset of the dart generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    /// Generators in shortlex order of preference.
    pub generators: Vec<Dart>,
    /// Relators, each equal to the identity.
    pub relators: Vec<GroupWord>,
}

impl GroupPresentation {
    /// The full group: all darts, one relator per vertex.
    pub fn full(graph: &PlaneGraph) -> Self {
        GroupPresentation {
            generators: (0..graph.num_darts()).collect(),
            relators: (0..graph.num_vertices()).map(|v| vertex_relator(graph, v)).collect(),
        }
    }

    /// The tree quotient: tree darts only, relators projected, the relator at
    /// the missed vertex dropped.
    pub fn tree(graph: &PlaneGraph, tree: &SpanningTreeMissingOne) -> Self {
        let mut generators = Vec::new();
        for &e in &tree.edges {
            generators.push(2 * e);
            generators.push(2 * e + 1);
        }
        let relators = (0..graph.num_vertices())
            .filter(|&v| v != tree.missed_vertex)
            .map(|v| project_to_tree(&vertex_relator(graph, v), tree))
            .filter(|w| !w.is_empty())
            .collect();
        GroupPresentation { generators, relators }
    }
}

/// Deletes every letter whose edge is not in the tree.
pub fn project_to_tree(word: &GroupWord, tree: &SpanningTreeMissingOne) -> GroupWord {
    let kept: Vec<Letter> = word.letters().iter().copied().filter(|&l| tree.contains(letter_gen(l) / 2)).collect();
    GroupWord::from_letters(&kept)
}

/// An integer vector indexed by edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianVector(pub Vec<i64>);

impl AbelianVector {
    pub fn zero(n: usize) -> Self {
        AbelianVector(vec![0; n])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &AbelianVector) -> AbelianVector {
        AbelianVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Keeps only tree coordinates.
    pub fn restrict(&self, tree: &SpanningTreeMissingOne) -> AbelianVector {
        AbelianVector(self.0.iter().enumerate().map(|(e, &x)| if tree.contains(e) { x } else { 0 }).collect())
    }
}

/// Abelianizes and forgets orientation: each letter contributes `+-1` at its edge.
pub fn abelianize(word: &GroupWord, num_edges: usize) -> AbelianVector {
    let mut v = vec![0i64; num_edges];
    for &l in word.letters() {
        v[letter_gen(l) / 2] += if letter_is_inverse(l) { -1 } else { 1 };
    }
    AbelianVector(v)
}

/// Budget for Knuth-Bendix completion.
#[derive(Debug, Clone, Copy)]
pub struct CompletionBudget {
    pub max_rules: usize,
    pub max_steps: usize,
}

impl Default for CompletionBudget {
    fn default() -> Self {
        CompletionBudget { max_rules: 5_000, max_steps: 200_000 }
    }
}

/// A length-reducing or shortlex-reducing string rewriting system on letters.
#[derive(Debug, Clone)]
pub struct RewriteSystem {
    rank: HashMap<Letter, u32>,
    rules: Vec<Option<(Vec<Letter>, Vec<Letter>)>>,
    index: HashMap<Vec<Letter>, usize>,
    max_lhs: usize,
}

impl RewriteSystem {
    fn new(generators: &[Dart]) -> Self {
        let mut rank = HashMap::new();
        for (i, &d) in generators.iter().enumerate() {
            rank.insert(letter(d, false), 2 * i as u32);
            rank.insert(letter(d, true), 2 * i as u32 + 1);
        }
        RewriteSystem { rank, rules: Vec::new(), index: HashMap::new(), max_lhs: 0 }
    }

    /// Number of live rules.
    pub fn num_rules(&self) -> usize {
        self.index.len()
    }

    /// Live rules as `(lhs, rhs)` pairs.
    pub fn rules(&self) -> Vec<(Vec<Letter>, Vec<Letter>)> {
        self.rules.iter().flatten().cloned().collect()
    }

    /// Shortlex comparison with the generator ranking.
    pub fn shortlex_less(&self, a: &[Letter], b: &[Letter]) -> bool {
        if a.len() != b.len() {
            return a.len() < b.len();
        }
        for (x, y) in a.iter().zip(b) {
            let (rx, ry) = (self.rank[x], self.rank[y]);
            if rx != ry {
                return rx < ry;
            }
        }
        false
    }

    /// Rewrites to an irreducible word.
    pub fn reduce(&self, word: &[Letter]) -> Vec<Letter> {
        let mut out: Vec<Letter> = Vec::with_capacity(word.len());
        let mut input: Vec<Letter> = word.iter().rev().copied().collect();
        while let Some(l) = input.pop() {
            out.push(l);
            let n = out.len();
            for len in 1..=self.max_lhs.min(n) {
                if let Some(&i) = self.index.get(&out[n - len..]) {
                    let (_, rhs) = self.rules[i].as_ref().expect("indexed rule is live");
                    out.truncate(n - len);
                    input.extend(rhs.iter().rev());
                    break;
                }
            }
        }
        out
    }

    fn orient(&self, a: Vec<Letter>, b: Vec<Letter>) -> (Vec<Letter>, Vec<Letter>) {
        if self.shortlex_less(&a, &b) {
            (b, a)
        } else {
            (a, b)
        }
    }

    fn insert(&mut self, lhs: Vec<Letter>, rhs: Vec<Letter>, pending: &mut VecDeque<(Vec<Letter>, Vec<Letter>)>) {
        // Remove rules made redundant by the new left side.
        for i in 0..self.rules.len() {
            let contains = match &self.rules[i] {
                Some((l, _)) => l.windows(lhs.len()).any(|w| w == lhs.as_slice()),
                None => false,
            };
            if contains {
                let (l, r) = self.rules[i].take().expect("live rule");
                self.index.remove(&l);
                pending.push_back((l, r));
            }
        }
        self.max_lhs = self.max_lhs.max(lhs.len());
        self.index.insert(lhs.clone(), self.rules.len());
        self.rules.push(Some((lhs, rhs)));
        // Keep right sides reduced.
        for i in 0..self.rules.len() {
            if let Some((l, r)) = self.rules[i].clone() {
                let nr = self.reduce(&r);
                if nr != r {
                    self.rules[i] = Some((l, nr));
                }
            }
        }
    }

    fn settle(
        &mut self,
        pending: &mut VecDeque<(Vec<Letter>, Vec<Letter>)>,
        budget: &CompletionBudget,
        steps: &mut usize,
    ) -> Result<(), GroupError> {
        while let Some((a, b)) = pending.pop_front() {
            *steps += 1;
            if pending.len() > budget.max_steps || *steps > budget.max_steps {
                return Err(GroupError::CompletionBudgetExceeded { rules: self.num_rules(), steps: *steps });
            }
            let (a, b) = (self.reduce(&a), self.reduce(&b));
            if a == b {
                continue;
            }
            let (l, r) = self.orient(a, b);
            self.insert(l, r, pending);
            if self.num_rules() > budget.max_rules {
                return Err(GroupError::CompletionBudgetExceeded { rules: self.num_rules(), steps: 0 });
            }
        }
        Ok(())
    }

    /// Critical pairs from overlapping a suffix of rule `i` with a prefix of rule `j`.
    fn overlaps(&self, i: usize, j: usize, out: &mut Vec<(Vec<Letter>, Vec<Letter>)>) {
        let (Some((li, ri)), Some((lj, rj))) = (&self.rules[i], &self.rules[j]) else {
            return;
        };
        for k in 1..li.len().min(lj.len()) {
            if li[li.len() - k..] == lj[..k] {
                let mut a = ri.clone();
                a.extend_from_slice(&lj[k..]);
                let mut b = li[..li.len() - k].to_vec();
                b.extend_from_slice(rj);
                out.push((a, b));
            }
        }
    }

    /// Whether every critical pair resolves.
    pub fn is_confluent(&self) -> bool {
        let live: Vec<usize> = (0..self.rules.len()).filter(|&i| self.rules[i].is_some()).collect();
        let mut pairs = Vec::new();
        for &i in &live {
            for &j in &live {
                pairs.clear();
                self.overlaps(i, j, &mut pairs);
                for (a, b) in &pairs {
                    if self.reduce(a) != self.reduce(b) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Shortlex Knuth-Bendix completion of a group presentation.
pub fn complete_rewrite_system(
    presentation: &GroupPresentation,
    budget: CompletionBudget,
) -> Result<RewriteSystem, GroupError> {
    let mut sys = RewriteSystem::new(&presentation.generators);
    let mut pending = VecDeque::new();
    for &d in &presentation.generators {
        pending.push_back((vec![letter(d, false), letter(d, true)], vec![]));
        pending.push_back((vec![letter(d, true), letter(d, false)], vec![]));
    }
    for rel in &presentation.relators {
        // Each cyclic rotation u v = 1 yields the equation u = v^-1 with u the longer half.
        let r = rel.letters();
        let n = r.len();
        for shift in 0..n {
            let rot: Vec<Letter> = (0..n).map(|i| r[(i + shift) % n]).collect();
            for rot in [rot.clone(), rot.iter().rev().map(|&l| inverse_letter(l)).collect()] {
                let half = n.div_ceil(2);
                let u = rot[..half].to_vec();
                let v_inv: Vec<Letter> = rot[half..].iter().rev().map(|&l| inverse_letter(l)).collect();
                pending.push_back((u, v_inv));
            }
        }
    }
    let mut steps = 0usize;
    sys.settle(&mut pending, &budget, &mut steps)?;
    let mut i = 0;
    let mut pairs = Vec::new();
    while i < sys.rules.len() {
        if sys.rules[i].is_some() {
            for j in 0..=i {
                for (x, y) in [(i, j), (j, i)] {
                    pairs.clear();
                    sys.overlaps(x, y, &mut pairs);
                    steps += pairs.len();
                    pending.extend(pairs.drain(..));
                    sys.settle(&mut pending, &budget, &mut steps)?;
                    if steps > budget.max_steps {
                        return Err(GroupError::CompletionBudgetExceeded { rules: sys.num_rules(), steps });
                    }
                    if sys.rules[i].is_none() {
                        break;
                    }
                }
                if sys.rules[i].is_none() {
                    break;
                }
            }
            if steps > budget.max_steps {
                return Err(GroupError::CompletionBudgetExceeded { rules: sys.num_rules(), steps });
            }
        }
        i += 1;
    }
    Ok(sys)
}

/// Offset for auxiliary generators introduced by the surface splitting.
const AUX_BASE: Dart = 1 << 24;

/// One closed orientable surface factor, presented by a single relator in
/// which every generator occurs once with each sign.
#[derive(Debug, Clone)]
struct SurfaceFactor {
    genus: usize,
    generators: Vec<Dart>,
    relator: Vec<Letter>,
    /// Cyclic permutations of the relator and its inverse.
    symmetrized: Vec<Vec<Letter>>,
    /// Leading letter pair of each symmetrized relator; unique because every
    /// piece has length one.
    by_prefix: HashMap<(Letter, Letter), usize>,
}

impl SurfaceFactor {
    fn new(generators: Vec<Dart>, relator: Vec<Letter>) -> Result<Self, GroupError> {
        let genus = relator.len() / 4;
        if relator.len() != 2 * generators.len() || generators.len() % 2 != 0 {
            return Err(GroupError::NoDecisionProcedure);
        }
        let mut symmetrized = Vec::new();
        let mut by_prefix = HashMap::new();
        if genus >= 2 {
            let inv: Vec<Letter> = relator.iter().rev().map(|&l| inverse_letter(l)).collect();
            for r in [&relator, &inv] {
                for shift in 0..r.len() {
                    let rot: Vec<Letter> = (0..r.len()).map(|i| r[(i + shift) % r.len()]).collect();
                    if by_prefix.insert((rot[0], rot[1]), symmetrized.len()).is_some() {
                        return Err(GroupError::NoDecisionProcedure);
                    }
                    symmetrized.push(rot);
                }
            }
        }
        Ok(SurfaceFactor { genus, generators, relator, symmetrized, by_prefix })
    }

    fn is_trivial(&self, word: &[Letter]) -> bool {
        match self.genus {
            0 => free_reduce(word).is_empty(),
            1 => self.generators.iter().all(|&d| {
                word.iter().filter(|&&l| letter_gen(l) == d).map(|&l| if letter_is_inverse(l) { -1i64 } else { 1 }).sum::<i64>() == 0
            }),
            _ => self.dehn_reduce(word).is_empty(),
        }
    }

    /// Greedy relator-half replacement until no more than half of any
    /// relator appears as a subword.
    fn dehn_reduce(&self, word: &[Letter]) -> Vec<Letter> {
        let mut w = cyclic_reduce(word);
        'outer: loop {
            for i in 0..w.len().saturating_sub(1) {
                let Some(&ri) = self.by_prefix.get(&(w[i], w[i + 1])) else { continue };
                let r = &self.symmetrized[ri];
                let mut k = 2;
                while k < r.len() && i + k < w.len() && w[i + k] == r[k] {
                    k += 1;
                }
                if 2 * k > r.len() {
                    let mut next = w[..i].to_vec();
                    next.extend(r[k..].iter().rev().map(|&l| inverse_letter(l)));
                    next.extend_from_slice(&w[i + k..]);
                    w = cyclic_reduce(&next);
                    continue 'outer;
                }
            }
            return w;
        }
    }
}

/// Decision procedure for presentations whose 2-complex is a disjoint union
/// of closed orientable surfaces with all vertices glued to one point. The
/// group is then a free product of surface groups and a free group with one
/// generator per surplus surface vertex.
#[derive(Debug, Clone)]
struct PinchedSurfaceSolver {
    /// Surface vertex at the start and end of each generator.
    ends: HashMap<Dart, (usize, usize)>,
    tree_gens: Vec<Dart>,
    is_root: Vec<bool>,
    /// Eliminated generators and their images in surviving generators.
    substitution: HashMap<Dart, Vec<Letter>>,
    factor_of: HashMap<Dart, usize>,
    factors: Vec<SurfaceFactor>,
}

impl PinchedSurfaceSolver {
    fn new(presentation: &GroupPresentation) -> Option<Result<Self, GroupError>> {
        let (ends, nv) = pinched_surface_vertices(presentation)?;
        Some(Self::build(presentation, ends, nv))
    }

    fn build(presentation: &GroupPresentation, ends: HashMap<Dart, (usize, usize)>, nv: usize) -> Result<Self, GroupError> {
        // Spanning forest of the surface 1-skeleton.
        let mut adjacency: Vec<Vec<(Dart, usize)>> = vec![Vec::new(); nv];
        for &d in &presentation.generators {
            let Some(&(a, b)) = ends.get(&d) else { continue };
            adjacency[a].push((d, b));
            adjacency[b].push((d, a));
        }
        let mut component = vec![usize::MAX; nv];
        let mut is_root = vec![false; nv];
        let mut tree_gens = Vec::new();
        let mut num_components = 0;
        for root in 0..nv {
            if component[root] != usize::MAX {
                continue;
            }
            is_root[root] = true;
            component[root] = num_components;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &(d, u) in &adjacency[v] {
                    if component[u] == usize::MAX {
                        component[u] = num_components;
                        tree_gens.push(d);
                        queue.push_back(u);
                    }
                }
            }
            num_components += 1;
        }
        let in_tree: HashSet<Dart> = tree_gens.iter().copied().collect();
        // Contract the forest, then merge faces of each component into one.
        let mut relators: Vec<Vec<Vec<Letter>>> = vec![Vec::new(); num_components];
        for r in &presentation.relators {
            let kept: Vec<Letter> = r.letters().iter().copied().filter(|&l| !in_tree.contains(&letter_gen(l))).collect();
            let kept = cyclic_reduce(&kept);
            if let Some(&l) = kept.first() {
                relators[component[ends[&letter_gen(l)].0]].push(kept);
            }
        }
        let mut substitution: HashMap<Dart, Vec<Letter>> = HashMap::new();
        let mut factors = Vec::new();
        let mut factor_of = HashMap::new();
        for (c, rels) in relators.iter_mut().enumerate() {
            while rels.len() > 1 {
                let (r1, pos, r2) = find_mergeable(rels).ok_or(GroupError::NoDecisionProcedure)?;
                let rel = rels[r1].clone();
                let n = rel.len();
                let l = rel[pos];
                let e = letter_gen(l);
                // rel rotated to start at l reads l P = 1.
                let p: Vec<Letter> = (1..n).map(|k| rel[(pos + k) % n]).collect();
                let image: Vec<Letter> = if letter_is_inverse(l) { p } else { p.iter().rev().map(|&x| inverse_letter(x)).collect() };
                let subst = |w: &[Letter]| -> Vec<Letter> {
                    let mut out = Vec::new();
                    for &x in w {
                        if letter_gen(x) == e {
                            if letter_is_inverse(x) {
                                out.extend(image.iter().rev().map(|&y| inverse_letter(y)));
                            } else {
                                out.extend_from_slice(&image);
                            }
                        } else {
                            out.push(x);
                        }
                    }
                    free_reduce(&out)
                };
                rels[r2] = cyclic_reduce(&subst(&rels[r2]));
                for img in substitution.values_mut() {
                    *img = subst(img);
                }
                substitution.insert(e, image);
                rels.remove(r1);
                rels.retain(|r| !r.is_empty());
            }
            let relator = rels.pop().unwrap_or_default();
            let mut gens: Vec<Dart> = relator.iter().map(|&l| letter_gen(l)).collect();
            gens.sort_unstable();
            gens.dedup();
            for &d in &gens {
                factor_of.insert(d, c);
            }
            factors.push(SurfaceFactor::new(gens, relator)?);
        }
        Ok(PinchedSurfaceSolver { ends, tree_gens, is_root, substitution, factor_of, factors })
    }

    fn forward(&self, word: &[Letter]) -> Vec<Letter> {
        let mut out = Vec::with_capacity(word.len() * 3);
        for &l in word {
            let d = letter_gen(l);
            let Some(&(a, b)) = self.ends.get(&d) else {
                out.push(l);
                continue;
            };
            let (from, to) = if letter_is_inverse(l) { (b, a) } else { (a, b) };
            if !self.is_root[from] {
                out.push(letter(AUX_BASE + from, false));
            }
            if let Some(img) = self.substitution.get(&d) {
                if letter_is_inverse(l) {
                    out.extend(img.iter().rev().map(|&y| inverse_letter(y)));
                } else {
                    out.extend_from_slice(img);
                }
            } else if !self.tree_gens.contains(&d) {
                out.push(l);
            }
            if !self.is_root[to] {
                out.push(letter(AUX_BASE + to, true));
            }
        }
        free_reduce(&out)
    }

    fn factor(&self, l: Letter) -> Option<usize> {
        self.factor_of.get(&letter_gen(l)).copied()
    }

    /// Free-product reduction: delete syllables trivial in their factor
    /// until none remain.
    fn is_trivial(&self, word: &[Letter]) -> bool {
        let mut w = self.forward(word);
        'outer: loop {
            let mut start = 0;
            while start < w.len() {
                let f = self.factor(w[start]);
                let mut end = start + 1;
                while end < w.len() && self.factor(w[end]) == f {
                    end += 1;
                }
                if let Some(f) = f {
                    if self.factors[f].is_trivial(&w[start..end]) {
                        w.drain(start..end);
                        w = free_reduce(&w);
                        continue 'outer;
                    }
                }
                start = end;
            }
            return w.is_empty();
        }
    }

    /// Image in the free factor, a homomorphic invariant.
    fn free_part(&self, word: &[Letter]) -> Vec<Letter> {
        let w: Vec<Letter> = self.forward(word).into_iter().filter(|&l| self.factor(l).is_none()).collect();
        free_reduce(&w)
    }
}

/// A relator index and position of a generator whose inverse lies in a
/// different relator, together with that other relator's index.
fn find_mergeable(rels: &[Vec<Letter>]) -> Option<(usize, usize, usize)> {
    let mut home: HashMap<Letter, usize> = HashMap::new();
    for (i, r) in rels.iter().enumerate() {
        for &l in r {
            home.insert(l, i);
        }
    }
    for (i, r) in rels.iter().enumerate() {
        for (pos, &l) in r.iter().enumerate() {
            if let Some(&j) = home.get(&inverse_letter(l)) {
                if j != i {
                    return Some((i, pos, j));
                }
            }
        }
    }
    None
}

/// Surface vertices of a presentation in which every generator occurs
/// exactly once with each sign: the cycles of the vertex link.
fn pinched_surface_vertices(presentation: &GroupPresentation) -> Option<(HashMap<Dart, (usize, usize)>, usize)> {
    let mut count: HashMap<Letter, usize> = HashMap::new();
    for r in &presentation.relators {
        for &l in r.letters() {
            *count.entry(l).or_default() += 1;
        }
    }
    if count.keys().any(|&l| !presentation.generators.contains(&letter_gen(l))) {
        return None;
    }
    // Generators absent from every relator are free and stay outside the link.
    let mut linked = Vec::new();
    for &d in &presentation.generators {
        match (count.get(&letter(d, false)), count.get(&letter(d, true))) {
            (Some(1), Some(1)) => linked.push(d),
            (None, None) => {}
            _ => return None,
        }
    }
    // Node 2i is the start of generator i and node 2i+1 its end.
    let pos: HashMap<Dart, usize> = linked.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    let mut parent: Vec<usize> = (0..2 * pos.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let end_node = |l: Letter| 2 * pos[&letter_gen(l)] + usize::from(!letter_is_inverse(l));
    let start_node = |l: Letter| 2 * pos[&letter_gen(l)] + usize::from(letter_is_inverse(l));
    for r in &presentation.relators {
        let ls = r.letters();
        for i in 0..ls.len() {
            let (x, y) = (end_node(ls[i]), start_node(ls[(i + 1) % ls.len()]));
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            parent[rx] = ry;
        }
    }
    let mut label: HashMap<usize, usize> = HashMap::new();
    let mut ends = HashMap::new();
    for (i, &d) in linked.iter().enumerate() {
        let mut id = |node: usize| {
            let r = find(&mut parent, node);
            let n = label.len();
            *label.entry(r).or_insert(n)
        };
        let a = id(2 * i);
        let b = id(2 * i + 1);
        ends.insert(d, (a, b));
    }
    Some((ends, label.len()))
}

fn cyclic_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut w = free_reduce(letters);
    let mut lo = 0;
    while w.len() >= lo + 2 && w[lo] == inverse_letter(w[w.len() - 1]) {
        w.pop();
        lo += 1;
    }
    w.drain(..lo);
    w
}

#[derive(Debug, Clone)]
enum Solver {
    Rewrite(RewriteSystem),
    Surface(Box<PinchedSurfaceSolver>),
}

/// Invariant of a group element used to bucket candidates for equality.
/// When the group has canonical normal forms the key is the normal form and
/// equal keys mean equal elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassKey {
    abelian: Vec<i64>,
    word: Vec<Letter>,
}

/// A presented group with a decision procedure for equality.
#[derive(Debug, Clone)]
pub struct Group {
    presentation: GroupPresentation,
    solver: Solver,
    num_edges: usize,
    generator_set: Vec<bool>,
}

impl Group {
    /// Builds a decision procedure. Presentations of pinched-surface shape
    /// use the surface splitting; all others use shortlex completion.
    pub fn new(presentation: GroupPresentation, num_edges: usize, budget: CompletionBudget) -> Result<Self, GroupError> {
        let solver = match PinchedSurfaceSolver::new(&presentation) {
            Some(Ok(s)) => Solver::Surface(Box::new(s)),
            Some(Err(_)) | None => Solver::Rewrite(complete_rewrite_system(&presentation, budget)?),
        };
        let max_gen = presentation.generators.iter().copied().max().map_or(0, |m| m + 1);
        let mut generator_set = vec![false; max_gen.max(2 * num_edges)];
        for &d in &presentation.generators {
            generator_set[d] = true;
        }
        Ok(Group { presentation, solver, num_edges, generator_set })
    }

    /// Builds a decision procedure by shortlex completion only.
    pub fn with_rewriting(presentation: GroupPresentation, num_edges: usize, budget: CompletionBudget) -> Result<Self, GroupError> {
        let system = complete_rewrite_system(&presentation, budget)?;
        let max_gen = presentation.generators.iter().copied().max().map_or(0, |m| m + 1);
        let mut generator_set = vec![false; max_gen.max(2 * num_edges)];
        for &d in &presentation.generators {
            generator_set[d] = true;
        }
        Ok(Group { presentation, solver: Solver::Rewrite(system), num_edges, generator_set })
    }

    /// The full coefficient group of a graph.
    pub fn full(graph: &PlaneGraph) -> Result<Self, GroupError> {
        Self::new(GroupPresentation::full(graph), graph.num_edges(), CompletionBudget::default())
    }

    /// The tree quotient group of a graph.
    pub fn tree(graph: &PlaneGraph, tree: &SpanningTreeMissingOne) -> Result<Self, GroupError> {
        Self::new(GroupPresentation::tree(graph, tree), graph.num_edges(), CompletionBudget::default())
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.presentation
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    /// Genera of the surface factors, when the surface splitting is in use.
    pub fn surface_genera(&self) -> Option<Vec<usize>> {
        match &self.solver {
            Solver::Surface(s) => Some(s.factors.iter().map(|f| f.genus).collect()),
            Solver::Rewrite(_) => None,
        }
    }

    /// Rank of the free factor split off by the surface splitting.
    pub fn free_rank(&self) -> Option<usize> {
        match &self.solver {
            Solver::Surface(s) => Some(s.is_root.iter().filter(|&&r| !r).count()),
            Solver::Rewrite(_) => None,
        }
    }

    /// Single relators of the surface factors, in surviving generators.
    pub fn surface_relators(&self) -> Vec<GroupWord> {
        match &self.solver {
            Solver::Surface(s) => s.factors.iter().map(|f| GroupWord::from_reduced(f.relator.clone())).collect(),
            Solver::Rewrite(_) => Vec::new(),
        }
    }

    /// Whether a dart generator belongs to this group's alphabet.
    pub fn has_generator(&self, d: Dart) -> bool {
        self.generator_set.get(d).copied().unwrap_or(false)
    }

    /// Whether normal forms are canonical, so that class keys decide equality.
    pub fn has_normal_forms(&self) -> bool {
        matches!(self.solver, Solver::Rewrite(_))
    }

    /// The canonical representative of a word, when normal forms exist.
    pub fn normal_form(&self, w: &GroupWord) -> Result<GroupWord, GroupError> {
        match &self.solver {
            Solver::Rewrite(s) => Ok(GroupWord::from_reduced(s.reduce(w.letters()))),
            Solver::Surface(_) => Err(GroupError::NoNormalForm),
        }
    }

    /// Equality invariant for bucketing. Equal elements have equal keys; the
    /// converse holds when [`Group::has_normal_forms`] is true.
    pub fn class_key(&self, w: &GroupWord) -> ClassKey {
        let abelian = abelianize(w, self.num_edges).0;
        let word = match &self.solver {
            Solver::Rewrite(s) => s.reduce(w.letters()),
            Solver::Surface(s) => s.free_part(w.letters()),
        };
        ClassKey { abelian, word }
    }

    /// Exact equality in the group, with an abelianization pre-filter.
    pub fn is_equal(&self, u: &GroupWord, v: &GroupWord) -> bool {
        if abelianize(u, self.num_edges) != abelianize(v, self.num_edges) {
            return false;
        }
        self.is_trivial(&u.mul(&v.inverse()))
    }

    /// Whether a word is the identity.
    pub fn is_trivial(&self, w: &GroupWord) -> bool {
        match &self.solver {
            Solver::Rewrite(s) => s.reduce(w.letters()).is_empty(),
            Solver::Surface(s) => s.is_trivial(w.letters()),
        }
    }
}
