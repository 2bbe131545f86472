//! The four report builders behind the subcommands. Each returns a JSON
//! value, a few human-readable summary lines, and whether every
//! certificate it checked passed.

use std::collections::BTreeSet;

use serde_json::{json, Value};
use thiserror::Error;
use trivalent_dga::algebra::{DgMap, GroupRing};
use trivalent_dga::colorings::{
    counting_identities, enumerate_colorings, least_conjugate, pgl_orbits, verify_bijection, ColoringError, FaceColoring,
};
use trivalent_dga::dg_transformations::{
    abelianize_dga, algebra_generators, base_move_map, braid_witness, full_twist_witness, move_v_inverse_map, move_v_map,
    orientation_map, project_differential, CommutativeDifferential, ExactnessWitness, TransformError,
};
use trivalent_dga::garden::{canonical_garden, Garden, GardenError, TriangleComplex};
use trivalent_dga::group_theory::{EdgeOrientation, Group, GroupError};
use trivalent_dga::plane_graph::{GraphError, PlaneGraph, SpanningTreeMissingOne};
use trivalent_dga::representations::{
    conjugation_orbits, FiniteField, FqMatrix, Representation, RepresentationError, RepresentationProblem, DEFAULT_SEARCH_LIMIT,
};
use trivalent_dga::words::{differential, verify_d_squared};

use crate::script::{parse_script, ScriptError, Step};

/// Orbit representatives listed per report before truncation.
const MAX_REPRESENTATIVES: usize = 50;

/// Errors that stop a command before any certificate is decided.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Graph { path: String, source: GraphError },
    #[error(transparent)]
    Garden(#[from] GardenError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Representation(#[from] RepresentationError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Script(#[from] ScriptError),
    #[error("{0}")]
    Usage(String),
}

/// A finished report.
pub struct Report {
    pub json: Value,
    pub summary: Vec<String>,
    pub passed: bool,
}

/// Inputs shared by the commands that need a garden.
pub struct Setup {
    pub graph: PlaneGraph,
    pub complex: TriangleComplex,
    pub ring: GroupRing,
    pub garden: Garden,
}

pub fn load_graph(path: &str) -> Result<PlaneGraph, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_string(), source })?;
    PlaneGraph::parse(&text).map_err(|source| CliError::Graph { path: path.to_string(), source })
}

/// Builds the coefficient ring and a garden, read from a file when one is
/// given and constructed canonically from the base triangle otherwise.
pub fn setup(graph: PlaneGraph, garden_path: Option<&str>, base: usize) -> Result<Setup, CliError> {
    let complex = TriangleComplex::new(&graph);
    let ring = GroupRing::new(Group::full(&graph)?);
    let garden = match garden_path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_string(), source })?;
            let garden = Garden::from_text(&graph, &text)?;
            if !garden.validate(&complex) {
                return Err(CliError::Usage(format!("{path}: garden paths are not connected crossing sequences")));
            }
            garden
        }
        None => {
            if base >= complex.len() {
                return Err(CliError::Usage(format!("base triangle {base} is out of range 0..{}", complex.len())));
            }
            canonical_garden(&graph, base, EdgeOrientation::standard(graph.num_edges()), &ring)?
        }
    };
    Ok(Setup { graph, complex, ring, garden })
}

/// Reads a tree given as comma-separated edge names; the missed vertex is
/// the first one the edges span the rest of the graph without.
pub fn parse_tree(graph: &PlaneGraph, text: &str) -> Result<SpanningTreeMissingOne, CliError> {
    let mut edges = Vec::new();
    for name in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        edges.push(graph.edge_by_name(name).ok_or_else(|| CliError::Usage(format!("unknown edge `{name}` in --tree")))?);
    }
    edges.sort_unstable();
    edges.dedup();
    (0..graph.num_vertices())
        .find(|&v| graph.is_tree_missing(&edges, v))
        .map(|missed_vertex| SpanningTreeMissingOne { missed_vertex, edges })
        .ok_or_else(|| CliError::Usage(format!("`{text}` is not a tree spanning all vertices but one")))
}

/// The tree from `--tree`, or the first tree missing the first vertex.
pub fn choose_tree(graph: &PlaneGraph, text: Option<&str>) -> Result<SpanningTreeMissingOne, CliError> {
    match text {
        Some(s) => parse_tree(graph, s),
        None => graph.enumerate_trees(0).into_iter().next().ok_or_else(|| CliError::Usage("the graph has no spanning tree".into())),
    }
}

fn tree_json(graph: &PlaneGraph, tree: &SpanningTreeMissingOne) -> Value {
    json!({
        "missed_vertex": graph.vertex_name(tree.missed_vertex),
        "edges": tree.edges.iter().map(|&e| graph.edge_name(e)).collect::<Vec<_>>(),
    })
}

fn face_name(f: usize) -> String {
    format!("f{}", f + 1)
}

// ---------------------------------------------------------------------------
// info

pub fn info(graph: &PlaneGraph) -> Report {
    let faces: Vec<Value> = (0..graph.num_faces())
        .map(|f| json!({ "face": face_name(f), "darts": graph.face_darts(f).iter().map(|&d| graph.dart_name(d)).collect::<Vec<_>>() }))
        .collect();
    let dual = graph.dual_graph();
    let trees: Vec<Value> = (0..graph.num_vertices())
        .map(|v| json!({ "missed_vertex": graph.vertex_name(v), "count": graph.enumerate_trees(v).len() }))
        .collect();
    let summary = format!(
        "g={}, V={}, E={}, F={}",
        graph.genus(),
        graph.num_vertices(),
        graph.num_edges(),
        graph.num_faces()
    );
    let json = json!({
        "command": "info",
        "genus": graph.genus(),
        "vertices": graph.num_vertices(),
        "edges": graph.num_edges(),
        "faces": graph.num_faces(),
        "triangles": TriangleComplex::new(graph).len(),
        "corners": graph.corners().len(),
        "bridgeless": graph.is_bridgeless(),
        "face_boundaries": faces,
        "dual_graph": dual.edges.iter().map(|&(a, b)| [face_name(a), face_name(b)]).collect::<Vec<_>>(),
        "trees": trees,
    });
    Report { json, summary: vec![summary], passed: true }
}

// ---------------------------------------------------------------------------
// dga

pub fn dga(s: &Setup, tree: Option<&SpanningTreeMissingOne>) -> Result<Report, CliError> {
    let Setup { graph, ring, garden, .. } = s;
    let gens = algebra_generators(graph);
    let d = differential(graph, garden);
    let listing: Vec<Value> = gens
        .iter()
        .map(|&g| json!({ "generator": g.to_string(), "degree": g.degree(), "differential": d.on_generator(g).to_text(graph) }))
        .collect();

    let mut summary = Vec::new();
    let mut passed = true;
    let square = match verify_d_squared(graph, garden, ring) {
        Ok(()) => {
            summary.push("d^2 = 0: PASS".to_string());
            json!({ "status": "PASS" })
        }
        Err((g, residual)) => {
            passed = false;
            summary.push(format!("d^2 = 0: FAIL at {g}"));
            json!({ "status": "FAIL", "counterexample": { "generator": g.to_string(), "residual": residual.to_text(graph) } })
        }
    };

    let commutative = CommutativeDifferential::new(graph, garden);
    let abelian = abelianize_dga(&d, &gens, graph.num_edges());
    let mut ab_listing = Vec::new();
    let mut ab_agrees = true;
    let mut ab_square = true;
    for &g in &gens {
        let direct = commutative.on_generator(g);
        ab_agrees &= abelian[&g] == direct;
        ab_square &= commutative.apply(&direct).is_zero();
        ab_listing.push(json!({ "generator": g.to_string(), "differential": direct.to_text(graph) }));
    }
    passed &= ab_agrees && ab_square;
    summary.push(format!("abelianization agrees: {}", status(ab_agrees && ab_square)));

    let mut json = json!({
        "command": "dga",
        "garden": garden.to_text(graph),
        "differential": listing,
        "d_squared": square,
        "abelianized": {
            "differential": ab_listing,
            "matches_direct_computation": ab_agrees,
            "squares_to_zero": ab_square,
        },
    });
    if let Some(tree) = tree {
        let tree_ring = GroupRing::new(Group::tree(graph, tree)?);
        let projected = project_differential(&d, &gens, tree);
        let ok = projected.squares_to_zero(&tree_ring).is_ok();
        passed &= ok;
        summary.push(format!("projected d^2 = 0: {}", status(ok)));
        json["tree"] = json!({ "tree": tree_json(graph, tree), "projected_d_squared": status(ok) });
    }
    summary.insert(0, format!("{} generators, {} ring letters", gens.len(), graph.num_darts()));
    Ok(Report { json, summary, passed })
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

// ---------------------------------------------------------------------------
// moves

fn witness_json(graph: &PlaneGraph, w: &ExactnessWitness) -> Value {
    let entries = |m: &trivalent_dga::algebra::Matrix2| -> Vec<Vec<String>> {
        (0..2).map(|i| (0..2).map(|j| m.entry(i, j).to_text(graph)).collect()).collect()
    };
    json!({ "status": status(w.holds), "primitive": entries(&w.primitive) })
}

pub fn moves(s: &Setup, script: &str) -> Result<Report, CliError> {
    let Setup { graph, complex, ring, garden } = s;
    let steps = parse_script(script)?;
    let gens = algebra_generators(graph);
    let start = differential(graph, garden);
    let mut current = garden.clone();
    let mut composite = DgMap::identity();
    let mut passed = true;
    let mut log = Vec::new();
    let mut summary = Vec::new();

    for (n, step) in steps.iter().enumerate() {
        let label = script.split_whitespace().nth(n).unwrap_or_default().to_string();
        if !step.is_move() {
            let w = match step {
                Step::Braid(i) => braid_witness(graph, complex, &current, *i, ring)?,
                _ => full_twist_witness(graph, complex, &current, ring)?,
            };
            passed &= w.holds;
            summary.push(format!("{label}: exactness witness {}", status(w.holds)));
            log.push(json!({ "step": label, "kind": "witness", "exactness": witness_json(graph, &w) }));
            continue;
        }
        let (next, map) = match step {
            Step::MoveV { index, inverse: false } => move_v_map(graph, complex, &current, *index)?,
            Step::MoveV { index, inverse: true } => move_v_inverse_map(graph, complex, &current, *index)?,
            Step::Base(side) => base_move_map(graph, complex, &current, *side),
            Step::Flip(name) => {
                let e = graph.edge_by_name(name).ok_or_else(|| CliError::Usage(format!("unknown edge `{name}` in move script")))?;
                (current.flip_orientation(e), orientation_map(graph, &[e]))
            }
            _ => unreachable!("witness steps handled above"),
        };
        let before = differential(graph, &current);
        let after = differential(graph, &next);
        let check = map.check_intertwines(&gens, &before, &after, ring);
        let ok = check.is_ok();
        passed &= ok;
        summary.push(format!("{label}: intertwines {}", status(ok)));
        let mut entry = json!({ "step": label, "kind": "move", "intertwines": status(ok), "garden": next.to_text(graph) });
        if let Err(failure) = check {
            entry["counterexample"] = json!({ "generator": failure.generator.to_string(), "residual": failure.residual.to_text(graph) });
        }
        log.push(entry);
        composite = composite.then(&map);
        current = next;
    }

    let end = differential(graph, &current);
    let composite_ok = composite.check_intertwines(&gens, &start, &end, ring).is_ok();
    passed &= composite_ok;
    let equal = gens.iter().all(|&g| ring.equal(&start.on_generator(g), &end.on_generator(g)));
    summary.push(format!("composite intertwines {}; differentials equal: {equal}", status(composite_ok)));
    let json = json!({
        "command": "moves",
        "script": script,
        "steps": log,
        "composite_intertwines": status(composite_ok),
        "final_garden": current.to_text(graph),
        "returns_to_start": current == *garden,
        "differentials_equal": equal,
    });
    Ok(Report { json, summary, passed })
}

// ---------------------------------------------------------------------------
// sheaves

fn matrix_json(m: &FqMatrix) -> Vec<Vec<u8>> {
    (0..m.rows).map(|i| (0..m.cols).map(|j| m.get(i, j)).collect()).collect()
}

fn rep_json(graph: &PlaneGraph, rep: &Representation) -> Value {
    let values: Vec<Value> =
        rep.values.iter().map(|(&d, m)| json!({ "dart": graph.dart_name(d), "matrix": matrix_json(m) })).collect();
    Value::Array(values)
}

fn coloring_json(c: &FaceColoring) -> Value {
    let faces: Vec<Value> = c.0.iter().enumerate().map(|(f, p)| json!({ "face": face_name(f), "basis": matrix_json(&p.basis) })).collect();
    Value::Array(faces)
}

/// The first member of each orbit, in order of first appearance.
fn representatives<T>(items: &[T], labels: &[usize]) -> Vec<usize> {
    let mut seen = BTreeSet::new();
    (0..items.len()).filter(|&i| seen.insert(labels[i])).collect()
}

pub fn sheaves(s: &Setup, tree: &SpanningTreeMissingOne, q: usize, r: usize) -> Result<Report, CliError> {
    let Setup { graph, garden, .. } = s;
    if r == 0 {
        return Err(CliError::Usage("--rank must be positive".into()));
    }
    let f = FiniteField::new(q)?;
    let problem = RepresentationProblem::for_garden(graph, garden, tree);
    let reps = problem.enumerate(&f, r, DEFAULT_SEARCH_LIMIT)?;
    let all_verified = reps.iter().all(|rep| problem.verify(rep, &f));
    let rep_orbits = conjugation_orbits(&reps, &f, r)?;
    let cols = enumerate_colorings(graph, &f, r, DEFAULT_SEARCH_LIMIT)?;
    let col_orbits = pgl_orbits(&cols, &f, r)?;
    let bijection = verify_bijection(graph, garden, tree, &f, r)?;

    let rep_reps = representatives(&reps, &rep_orbits);
    let col_reps = representatives(&cols, &col_orbits);
    let mut passed = all_verified && bijection.passes();
    let mut summary = vec![
        format!("q={q} r={r}: {} representations in {} orbits", reps.len(), rep_reps.len()),
        format!("{} colorings in {} orbits", cols.len(), col_reps.len()),
        format!("bijection: {}", status(bijection.passes())),
    ];

    let mut json = json!({
        "command": "sheaves",
        "field": q,
        "rank": r,
        "tree": tree_json(graph, tree),
        "representations": {
            "count": reps.len(),
            "moduli": rep_reps.len(),
            "all_verified": all_verified,
            "orbit_representatives": rep_reps.iter().take(MAX_REPRESENTATIVES).map(|&i| rep_json(graph, &least_conjugate(&reps[i], &f))).collect::<Vec<_>>(),
            "truncated": rep_reps.len() > MAX_REPRESENTATIVES,
        },
        "colorings": {
            "count": cols.len(),
            "moduli": col_reps.len(),
            "orbit_representatives": col_reps.iter().take(MAX_REPRESENTATIVES).map(|&i| coloring_json(&cols[i])).collect::<Vec<_>>(),
            "truncated": col_reps.len() > MAX_REPRESENTATIVES,
        },
        "bijection": {
            "status": status(bijection.passes()),
            "psi_well_defined": bijection.psi_well_defined,
            "psi_bijective": bijection.psi_bijective,
            "theta_inverse": bijection.theta_inverse,
        },
    });
    if r == 1 {
        let counting = counting_identities(graph, &f)?;
        passed &= counting.passes();
        summary.push(format!("chromatic identity: {} (P(q+1) = {})", status(counting.passes()), counting.chromatic));
        json["chromatic"] = json!({
            "status": status(counting.passes()),
            "dual_chromatic_value": counting.chromatic.to_string(),
            "colorings": counting.colorings,
            "orbits": counting.orbits,
            "pgl_order": counting.group_order,
        });
    }
    Ok(Report { json, summary, passed })
}
