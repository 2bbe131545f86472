//! End-to-end acceptance run: one PASS or FAIL line per criterion, exiting
//! nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::{backtrack, k4, load_graph, prism, random_path, splice, theta, triangle_at, winding, Fixture};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trivalent_dga::algebra::{DgMap, Dga, GroupRing, Matrix2};
use trivalent_dga::colorings::{counting_identities, enumerate_colorings, verify_bijection};
use trivalent_dga::dg_transformations::{
    abelianize_element, algebra_generators, base_move_map, braid_witness, distant_commutation, finite_type_destabilize, full_twist_witness,
    move_v_inverse_map, move_v_map, orientation_map, CommutativeDifferential,
};
use trivalent_dga::garden::{CrossingEvent, Side};
use trivalent_dga::group_theory::Group;
use trivalent_dga::plane_graph::PlaneGraph;
use trivalent_dga::representations::{is_bijection, pullback, FiniteField, RepresentationProblem, DEFAULT_SEARCH_LIMIT};
use trivalent_dga::words::{differential, enumerate_sheet_sequences, matrix_of_words, verify_d_squared};

type Outcome = Result<String, String>;

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn structural_counts() -> Outcome {
    for (name, g) in [("theta", PlaneGraph::theta()), ("k4", PlaneGraph::k4()), ("prism", PlaneGraph::prism())] {
        let k = g.genus();
        let counts = (g.num_vertices(), g.num_edges(), g.num_faces(), g.num_darts());
        ensure(counts == (2 * k + 2, 3 * k + 3, k + 3, 6 * k + 6), || format!("{name}: g={k} counts {counts:?}"))?;
    }
    Ok("theta g=0, K4 g=1, prism g=2".into())
}

fn d_squared() -> Outcome {
    let mut summary = Vec::new();
    for fx in [theta(), k4(), prism()] {
        verify_d_squared(&fx.graph, &fx.garden, &fx.ring).map_err(|(s, r)| format!("{}: ∂²{s} = {}", fx.name, r.to_text(&fx.graph)))?;
        summary.push(fx.name);
    }
    Ok(format!("∂² = 0 on {}", summary.join(", ")))
}

fn word_matrix_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for fx in [theta(), k4(), prism()] {
        let o = &fx.garden.orientation;
        for _ in 0..120 {
            let len = rng.gen_range(0..=14);
            let path = random_path(&fx.complex, len, &mut rng);
            let m = matrix_of_words(&fx.graph, o, &path);
            for i in 0..2 {
                for j in 0..2 {
                    let oracle = enumerate_sheet_sequences(&fx.graph, o, &path, i, j);
                    ensure(fx.ring.equal(m.entry(i, j), &oracle), || format!("{}: entry ({i},{j}) of {}", fx.name, path.to_text()))?;
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} random paths agree entrywise"))
}

fn homotopy_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = [0usize; 4];
    for fx in [theta(), k4(), prism()] {
        let (g, cx, o) = (&fx.graph, &fx.complex, &fx.garden.orientation);
        let w = |p: &trivalent_dga::garden::CrossingSequence| matrix_of_words(g, o, p);
        for round in 0..160 {
            let path = random_path(cx, rng.gen_range(0..20), &mut rng);
            let pos = rng.gen_range(0..=path.len());
            let t = triangle_at(&path, pos);
            let kind = round % 4;
            let rewritten = match kind {
                // Move I: a crossing and its immediate reverse.
                0 => {
                    let side = [Side::S, Side::L, Side::R][rng.gen_range(0..3)];
                    splice(&path, pos, &backtrack(cx, t, side))
                }
                // Move II: a full turn around a vertex of the current triangle.
                1 => {
                    let v = if rng.gen_bool(0.5) { g.tail(t) } else { g.head(t) };
                    let turn = winding(g, cx, t, v, rng.gen_bool(0.5), 6);
                    ensure(turn.end() == t, || format!("{}: turn around v{v} does not close", fx.name))?;
                    splice(&path, pos, &turn.events)
                }
                // Move III: half a turn one way replaced by half a turn the other way.
                2 => {
                    let v = if rng.gen_bool(0.5) { g.tail(t) } else { g.head(t) };
                    let ccw = winding(g, cx, t, v, true, 3);
                    let cw = winding(g, cx, t, v, false, 3);
                    ensure(ccw.end() == cw.end(), || format!("{}: half turns around v{v} disagree", fx.name))?;
                    let mut tail = trivalent_dga::garden::CrossingSequence::empty(ccw.end());
                    for _ in 0..rng.gen_range(0..8) {
                        common::push_random(cx, &mut tail, &mut rng);
                    }
                    let head = |half: &trivalent_dga::garden::CrossingSequence| {
                        let mut events = path.events[..pos].to_vec();
                        events.extend_from_slice(&half.events);
                        events.extend_from_slice(&tail.events);
                        trivalent_dga::garden::CrossingSequence { start: path.start, events }
                    };
                    let (a, b) = (head(&ccw), head(&cw));
                    ensure(a.validate(cx) && b.validate(cx), || "half-turn splice invalid".into())?;
                    ensure(fx.ring.matrix_equal(&w(&a), &w(&b)), || format!("{}: Move III at {pos} of {}", fx.name, path.to_text()))?;
                    checked[kind] += 1;
                    continue;
                }
                // Move IV: a thread crossing next to a center pass is absorbed.
                _ => {
                    let side = if rng.gen_bool(0.5) { Side::L } else { Side::R };
                    let cross = cx.cross(t, side);
                    let t2 = cross.to();
                    let face = cx.face(t);
                    let plain = splice(&path, pos, &[CrossingEvent::Center { face, entry: t, exit: t }]);
                    let moved = if rng.gen_bool(0.5) {
                        vec![cross, CrossingEvent::Center { face, entry: t2, exit: t }]
                    } else {
                        vec![CrossingEvent::Center { face, entry: t, exit: t2 }, cross.inverse()]
                    };
                    splice(&path, pos, &moved)
                        .validate(cx)
                        .then_some(())
                        .ok_or_else(|| format!("{}: Move IV splice invalid", fx.name))?;
                    ensure(fx.ring.matrix_equal(&w(&plain), &w(&splice(&path, pos, &moved))), || {
                        format!("{}: Move IV at {pos} of {}", fx.name, path.to_text())
                    })?;
                    checked[kind] += 1;
                    continue;
                }
            };
            ensure(rewritten.validate(cx), || format!("{}: rewrite invalid", fx.name))?;
            ensure(fx.ring.matrix_equal(&w(&path), &w(&rewritten)), || {
                format!("{}: move {} at {pos} of {}", fx.name, kind + 1, path.to_text())
            })?;
            checked[kind] += 1;
        }
    }
    Ok(format!("Moves I-IV on {:?} random configurations", checked))
}

fn intertwines(fx: &Fixture, map: &DgMap, source: &trivalent_dga::garden::Garden, target: &trivalent_dga::garden::Garden, what: &str) -> Result<(), String> {
    let gens = algebra_generators(&fx.graph);
    let ds = differential(&fx.graph, source);
    let dt = differential(&fx.graph, target);
    map.check_intertwines(&gens, &ds, &dt, &fx.ring)
        .map_err(|e| format!("{} {what}: residual on {} is {}", fx.name, e.generator, e.residual.to_text(&fx.graph)))
}

fn is_identity(fx: &Fixture, map: &DgMap) -> bool {
    let darts: Vec<usize> = (0..fx.graph.num_darts()).collect();
    map.agrees_with(&DgMap::identity(), &algebra_generators(&fx.graph), &darts, &fx.ring)
}

fn move_intertwining() -> Outcome {
    let mut count = 0;
    for fx in [theta(), k4()] {
        let g = &fx.graph;
        let cx = &fx.complex;
        for base in 0..g.num_darts() {
            let garden = fx.rebased(base);
            for e in 0..g.num_edges() {
                let flipped = garden.flip_orientation(e);
                intertwines(&fx, &orientation_map(g, &[e]), &garden, &flipped, &format!("flip e{e}"))?;
                count += 1;
            }
            for i in 1..garden.approaches().len() {
                let (next, fwd) = move_v_map(g, cx, &garden, i).map_err(|e| e.to_string())?;
                intertwines(&fx, &fwd, &garden, &next, &format!("V{i} base {base}"))?;
                let (back, inv) = move_v_inverse_map(g, cx, &next, i).map_err(|e| e.to_string())?;
                intertwines(&fx, &inv, &next, &back, &format!("V{i}⁻¹ base {base}"))?;
                ensure(back == garden, || format!("{}: V{i} V{i}⁻¹ does not restore the garden", fx.name))?;
                ensure(is_identity(&fx, &fwd.then(&inv)), || format!("{}: V{i} V{i}⁻¹ map is not the identity", fx.name))?;
                count += 2;
            }
            for side in [Side::L, Side::R, Side::S] {
                let (next, map) = base_move_map(g, cx, &garden, side);
                intertwines(&fx, &map, &garden, &next, &format!("base move {side} at {base}"))?;
                count += 1;
            }
            for (label, script) in [
                ("LR", vec![Side::L, Side::R]),
                ("SS", vec![Side::S, Side::S]),
                ("(SL)³", [Side::S, Side::L].repeat(3)),
            ] {
                let mut cur = garden.clone();
                let mut total = DgMap::identity();
                for side in script {
                    let (next, map) = base_move_map(g, cx, &cur, side);
                    total = total.then(&map);
                    cur = next;
                }
                ensure(cur == garden, || format!("{}: {label} does not restore the garden at {base}", fx.name))?;
                ensure(differential(g, &cur) == differential(g, &garden), || format!("{}: {label} changes ∂", fx.name))?;
                ensure(is_identity(&fx, &total), || format!("{}: {label} map is not the identity at {base}", fx.name))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} move and round-trip checks over every base triangle"))
}

fn exactness_witnesses() -> Outcome {
    let mut count = 0;
    for fx in [theta(), k4()] {
        let n = fx.garden.approaches().len();
        for i in 1..n - 1 {
            let w = braid_witness(&fx.graph, &fx.complex, &fx.garden, i, &fx.ring).map_err(|e| e.to_string())?;
            ensure(w.holds, || format!("{}: braid relation at {i}", fx.name))?;
            count += 1;
        }
        for i in 1..n {
            for j in i + 2..n {
                let ok = distant_commutation(&fx.graph, &fx.complex, &fx.garden, i, j, &fx.ring).map_err(|e| e.to_string())?;
                ensure(ok, || format!("{}: σ{i} σ{j} do not commute", fx.name))?;
                count += 1;
            }
        }
        let w = full_twist_witness(&fx.graph, &fx.complex, &fx.garden, &fx.ring).map_err(|e| e.to_string())?;
        ensure(w.holds, || format!("{}: full twist", fx.name))?;
        ensure(w.discrepancy != Matrix2::zero(), || format!("{}: full twist shift is trivially zero", fx.name))?;
        count += 1;
    }
    Ok(format!("{count} braid, commutation and full-twist witnesses"))
}

fn stabilization() -> Outcome {
    let mut lines = Vec::new();
    for fx in [theta(), k4()] {
        let g = &fx.graph;
        let tree = g.enumerate_trees(0).remove(0);
        let dga = Dga { generators: algebra_generators(g), differential: differential(g, &fx.garden) };
        let stab = dga.stabilize(1);
        let base = RepresentationProblem::new(g, &tree, &dga);
        let enlarged = RepresentationProblem::new(g, &tree, &stab.dga);
        let tree_ring = GroupRing::new(Group::tree(g, &tree).map_err(|e| e.to_string())?);
        let destab = finite_type_destabilize(g, &fx.complex, &fx.garden, &tree, &tree_ring).map_err(|e| e.to_string())?;
        let reduced = RepresentationProblem::new(g, &tree, &destab.reduced);
        let darts = base.darts().to_vec();
        for q in [2, 3] {
            let f = FiniteField::new(q).map_err(|e| e.to_string())?;
            for r in [1, 2] {
                if base.search_bound(q, r) > DEFAULT_SEARCH_LIMIT {
                    lines.push(format!("{} q={q} r={r} skipped", fx.name));
                    continue;
                }
                let a = base.enumerate(&f, r, DEFAULT_SEARCH_LIMIT).map_err(|e| e.to_string())?;
                let b = enlarged.enumerate(&f, r, DEFAULT_SEARCH_LIMIT).map_err(|e| e.to_string())?;
                let c = reduced.enumerate(&f, r, DEFAULT_SEARCH_LIMIT).map_err(|e| e.to_string())?;
                ensure(is_bijection(&b, &a, |e| pullback(&stab.inclusion, e, &darts, &f)), || {
                    format!("{} q={q} r={r}: inclusion pullback is not a bijection", fx.name)
                })?;
                ensure(is_bijection(&a, &b, |e| pullback(&stab.projection, e, &darts, &f)), || {
                    format!("{} q={q} r={r}: projection pullback is not a bijection", fx.name)
                })?;
                ensure(
                    a.iter().all(|e| pullback(&stab.inclusion, &pullback(&stab.projection, e, &darts, &f), &darts, &f) == *e),
                    || format!("{} q={q} r={r}: round trip is not the identity", fx.name),
                )?;
                ensure(is_bijection(&c, &a, |e| pullback(&destab.quotient, e, &darts, &f)), || {
                    format!("{} q={q} r={r}: destabilized representations differ ({} vs {})", fx.name, c.len(), a.len())
                })?;
                lines.push(format!("{} q={q} r={r}: {}", fx.name, a.len()));
            }
        }
    }
    Ok(lines.join("; "))
}

fn counting() -> Outcome {
    let expected: [(&str, [(usize, usize); 4]); 3] = [
        ("theta", [(6, 1), (24, 1), (60, 1), (120, 1)]),
        ("k4", [(0, 0), (24, 1), (120, 2), (360, 3)]),
        ("prism", [(0, 0), (24, 1), (240, 4), (1080, 9)]),
    ];
    for (name, values) in expected {
        let g = load_graph(name);
        for (q, want) in [2, 3, 4, 5].into_iter().zip(values) {
            let f = FiniteField::new(q).map_err(|e| e.to_string())?;
            let rep = counting_identities(&g, &f).map_err(|e| e.to_string())?;
            ensure(rep.passes(), || format!("{name} q={q}: {rep:?}"))?;
            ensure((rep.colorings, rep.orbits) == want, || format!("{name} q={q}: got {}/{}, want {want:?}", rep.colorings, rep.orbits))?;
        }
    }
    Ok("theta, K4, prism at q = 2, 3, 4, 5".into())
}

fn sheaves() -> Outcome {
    let mut lines = Vec::new();
    for (fx, q, r) in [(theta(), 2, 1), (theta(), 3, 1), (k4(), 2, 1), (k4(), 3, 1), (theta(), 2, 2)] {
        let tree = fx.graph.enumerate_trees(0).remove(0);
        let f = FiniteField::new(q).map_err(|e| e.to_string())?;
        let rep = verify_bijection(&fx.graph, &fx.garden, &tree, &f, r).map_err(|e| e.to_string())?;
        ensure(rep.passes(), || format!("{} q={q} r={r}: {rep:?}", fx.name))?;
        lines.push(format!("{} q={q} r={r}: {}={}", fx.name, rep.representation_orbits, rep.coloring_orbits));
    }
    Ok(lines.join("; "))
}

fn four_colors() -> Outcome {
    let f = FiniteField::new(3).map_err(|e| e.to_string())?;
    let mut names = Vec::new();
    for name in ["theta", "k4", "prism", "cube", "pentagonal_prism"] {
        let g = load_graph(name);
        ensure(g.is_bridgeless(), || format!("{name} has a bridge"))?;
        let cols = enumerate_colorings(&g, &f, 1, DEFAULT_SEARCH_LIMIT).map_err(|e| e.to_string())?;
        ensure(!cols.is_empty(), || format!("{name} has no rank-one coloring over F_3"))?;
        names.push(format!("{name}:{}", cols.len()));
    }
    Ok(names.join(", "))
}

fn abelianization() -> Outcome {
    let mut count = 0;
    for fx in [theta(), k4()] {
        let e = fx.graph.num_edges();
        let d = differential(&fx.graph, &fx.garden);
        let commutative = CommutativeDifferential::new(&fx.graph, &fx.garden);
        for s in algebra_generators(&fx.graph) {
            let lhs = abelianize_element(&d.on_generator(s), e);
            ensure(lhs == commutative.on_generator(s), || format!("{}: Ab ∂{s} differs", fx.name))?;
            count += 1;
        }
    }
    Ok(format!("{count} generators agree"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("structural counts", structural_counts),
        ("differential squares to zero", d_squared),
        ("word-matrix oracle", word_matrix_oracle),
        ("homotopy invariance", homotopy_invariance),
        ("move intertwining", move_intertwining),
        ("exactness witnesses", exactness_witnesses),
        ("stabilization", stabilization),
        ("counting identities", counting),
        ("representations are colorings", sheaves),
        ("four-color corollary", four_colors),
        ("abelianization", abelianization),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", n + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {reason} ({secs:.1}s)", n + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
