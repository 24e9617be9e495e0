use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::{Cli, CliError, Command, LocalCommand, NatrepCommand, Outcome, Source, Status, TildeCommand};
use crate::build::{self, ConstructionMetadata};
use crate::cover::{
    build_cover, homology_rank, is_triangulable, pi1_presentation, todd_coxeter, EnumerationStatus, Presentation,
    TriangleComplex, DEFAULT_COSET_LIMIT,
};
use crate::geom::{diagram, flag_transitivity, is_geometry, Geometry};
use crate::gf2::{BitVector, Gf2Matrix};
use crate::graph::Graph;
use crate::local::{condition_star, derived_graph_action, hypothesis_61_check, kernel_series, local_space_check};
use crate::natrep::{o3_split_dims, um_dimension};
use crate::perm::{load_group_json, GroupAction, Permutation};

/// Sizes up to this bound are also ranked by the schoolbook eliminator.
const BENCH_ORACLE_BOUND: usize = 256;

pub(super) fn dispatch(cli: &Cli, inputs: &mut Vec<Value>) -> Result<Outcome, CliError> {
    let seed = cli.seed;
    match &cli.command {
        Command::Build { name, n, out } => build_cmd(name, *n, seed, out.as_deref(), inputs),
        Command::Tilde {
            command: TildeCommand::Build { out },
        } => {
            if seed.is_none() {
                return Err(CliError::bad_input("tilde build needs --seed"));
            }
            build_cmd("tilde", None, seed, out.as_deref(), inputs)
        }
        Command::Verify(src) => verify_cmd(&load(src, seed, inputs)?),
        Command::Diagram(src) => {
            let subject = load(src, seed, inputs)?;
            Outcome::ok(diagram(&subject.geometry)?)
        }
        Command::Natrep {
            command: NatrepCommand::Dim(src),
        } => {
            let subject = load(src, seed, inputs)?;
            match &subject.o3 {
                Some(o3) => Outcome::ok(o3_split_dims(&subject.geometry, o3)?),
                None => Outcome::ok(um_dimension(&subject.geometry)?),
            }
        }
        Command::Cover {
            input,
            subgroup,
            limit,
            out,
        } => {
            let base = TriangleComplex::from_json(&read_input(input, inputs)?)?;
            let cover = build_cover(&base, subgroup, limit.unwrap_or(DEFAULT_COSET_LIMIT))?;
            let covering = cover.is_covering_of(&base);
            let mut results = json!({
                "sheets": cover.sheets,
                "vertices": cover.complex.graph().len(),
                "edges": cover.complex.graph().edge_count(),
                "triangles": cover.complex.triangles().len(),
                "connected": cover.complex.graph().is_connected(),
                "covering": covering,
            });
            if let Some(path) = out {
                write_output(path, &cover.complex.to_json())?;
                results["out"] = json!(path.display().to_string());
            }
            Outcome::with_status(if covering { Status::Ok } else { Status::CheckFailed }, results)
        }
        Command::Pi1 {
            complex,
            source,
            base,
            limit,
        } => {
            let k = match complex {
                Some(path) => TriangleComplex::from_json(&read_input(path, inputs)?)?,
                None => TriangleComplex::collinearity(&load(source, seed, inputs)?.geometry)?,
            };
            let presentation = pi1_presentation(&k, *base)?;
            let report = is_triangulable(&k, limit.unwrap_or(DEFAULT_COSET_LIMIT))?;
            Outcome::ok(json!({
                "vertices": k.graph().len(),
                "edges": k.graph().edge_count(),
                "triangles": k.triangles().len(),
                "presentation": presentation,
                "homology": { "gf2": homology_rank(&k, 2)?, "gf3": homology_rank(&k, 3)? },
                "triangulable": report,
            }))
        }
        Command::Tc { input, limit } => {
            let p = Presentation::from_json(&read_input(input, inputs)?)?;
            let outcome = todd_coxeter(&p, limit.unwrap_or(DEFAULT_COSET_LIMIT))?;
            let status = match outcome.status {
                EnumerationStatus::Completed { .. } => Status::Ok,
                EnumerationStatus::Overflow { .. } => Status::Capacity,
            };
            Outcome::with_status(status, outcome.status)
        }
        Command::Local { command } => match command {
            LocalCommand::Star(src) => {
                let subject = load(src, seed, inputs)?;
                let report = condition_star(&subject.geometry, subject.action()?)?;
                let status = if report.holds { Status::Ok } else { Status::CheckFailed };
                Outcome::with_status(status, report)
            }
            LocalCommand::Kernels { source, vertex, s_max } => {
                let subject = load(source, seed, inputs)?;
                let a = subject.vertex(vertex.as_deref())?;
                Outcome::ok(kernel_series(&subject.geometry, subject.action()?, a, *s_max)?)
            }
            LocalCommand::Space { source, vertex } => {
                let subject = load(source, seed, inputs)?;
                let a = subject.vertex(vertex.as_deref())?;
                let report = local_space_check(&subject.geometry, a)?;
                let status = if report.projective {
                    Status::Ok
                } else {
                    Status::CheckFailed
                };
                Outcome::with_status(status, report)
            }
        },
        Command::Hyp61 { source, graph } => {
            let (delta, action) = match graph {
                Some(path) => {
                    let g = Graph::from_json(&read_input(path, inputs)?).map_err(CliError::bad_input)?;
                    let group_path = source.group.as_ref().expect("clap requires --group");
                    let group = load_group_json(&read_input(group_path, inputs)?)?;
                    (g, GroupAction::natural(&group))
                }
                None => {
                    let subject = load(source, seed, inputs)?;
                    derived_graph_action(&subject.geometry, subject.action()?)?
                }
            };
            Outcome::ok(hypothesis_61_check(&delta, &action)?)
        }
        Command::Bench { sizes } => bench(sizes, seed),
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn read_input(path: &Path, inputs: &mut Vec<Value>) -> Result<String, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::bad_input(format!("{}: {e}", path.display())))?;
    inputs.push(json!({ "path": path.display().to_string(), "sha256": sha256_hex(&bytes) }));
    String::from_utf8(bytes).map_err(|_| CliError::bad_input(format!("{}: not UTF-8", path.display())))
}

fn write_output(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::bad_input(format!("{}: {e}", path.display())))
}

fn builtin(name: &str, n: Option<usize>, seed: Option<u64>) -> Result<ConstructionMetadata, CliError> {
    let meta = match name {
        "petersen" => build::petersen_geometry(),
        "pg" => build::projective_geometry_2(n.unwrap_or(3))?,
        "sp" => build::symplectic_polar_space(n.unwrap_or(2))?,
        "gq22" => build::symplectic_polar_space(2)?,
        "tilde" => {
            let seed = seed.ok_or_else(|| CliError::bad_input("the tilde construction needs --seed"))?;
            build::tilde_geometry(seed)?
        }
        "m22" => {
            let seed = seed.ok_or_else(|| CliError::bad_input("the m22 construction needs --seed"))?;
            build::m22_pipeline(seed)?
        }
        other => return Err(CliError::bad_input(format!("unknown builtin {other:?}"))),
    };
    Ok(meta)
}

/// A geometry with whatever group data came with it.
struct Subject {
    geometry: Geometry,
    action: Option<GroupAction<usize>>,
    o3: Option<Permutation>,
}

impl Subject {
    fn action(&self) -> Result<&GroupAction<usize>, CliError> {
        self.action
            .as_ref()
            .ok_or_else(|| CliError::bad_input("this command needs a group: use --builtin or pass --group"))
    }

    /// The named top-type element, or the first one.
    fn vertex(&self, id: Option<&str>) -> Result<usize, CliError> {
        let g = &self.geometry;
        match id {
            Some(id) => g
                .index_of(id)
                .ok_or_else(|| CliError::bad_input(format!("no element {id:?}"))),
            None => g
                .elements_of_type(g.rank())
                .first()
                .copied()
                .ok_or_else(|| CliError::bad_input("the geometry has no top-type element")),
        }
    }
}

fn load(src: &Source, seed: Option<u64>, inputs: &mut Vec<Value>) -> Result<Subject, CliError> {
    match (&src.input, &src.builtin) {
        (Some(path), None) => {
            let geometry = Geometry::from_json(&read_input(path, inputs)?)?;
            let action = match &src.group {
                Some(gp) => {
                    let group = load_group_json(&read_input(gp, inputs)?)?;
                    if group.degree() != geometry.len() {
                        return Err(CliError::bad_input(format!(
                            "group of degree {} for {} elements",
                            group.degree(),
                            geometry.len()
                        )));
                    }
                    Some(GroupAction::natural(&group))
                }
                None => None,
            };
            Ok(Subject {
                geometry,
                action,
                o3: None,
            })
        }
        (None, Some(name)) => {
            let meta = builtin(name, src.n, seed)?;
            inputs.push(json!({ "builtin": name, "n": src.n, "seed": seed }));
            Ok(Subject {
                geometry: meta.geometry,
                action: Some(meta.action),
                o3: meta.o3_generator,
            })
        }
        _ => Err(CliError::bad_input("give exactly one of --input or --builtin")),
    }
}

fn build_cmd(
    name: &str,
    n: Option<usize>,
    seed: Option<u64>,
    out: Option<&Path>,
    inputs: &mut Vec<Value>,
) -> Result<Outcome, CliError> {
    let meta = builtin(name, n, seed)?;
    inputs.push(json!({ "builtin": name, "n": n, "seed": seed }));
    let g = &meta.geometry;
    let verdict = is_geometry(g);
    let ft = flag_transitivity(g, &meta.action)?;
    let mut results = json!({
        "name": meta.name,
        "rank": g.rank(),
        "counts": g.type_counts(),
        "incidences": g.incidence_count(),
        "group_order": meta.group.order().to_string(),
        "is_geometry": verdict.is_geometry,
        "flag_transitive": ft.transitive,
        "provenance": meta.provenance,
    });
    if verdict.is_geometry {
        results["diagram"] = serde_json::to_value(diagram(g)?).expect("diagram serializes");
    }
    match out {
        Some(path) => {
            write_output(path, &g.to_json())?;
            results["out"] = json!(path.display().to_string());
        }
        None => results["geometry"] = serde_json::from_str(&g.to_json()).expect("geometry JSON"),
    }
    let status = if verdict.is_geometry && ft.transitive {
        Status::Ok
    } else {
        Status::CheckFailed
    };
    Outcome::with_status(status, results)
}

fn verify_cmd(subject: &Subject) -> Result<Outcome, CliError> {
    let g = &subject.geometry;
    let verdict = is_geometry(g);
    let mut results = json!({
        "rank": g.rank(),
        "counts": g.type_counts(),
        "incidences": g.incidence_count(),
        "verdict": verdict,
    });
    let mut status = if verdict.is_geometry {
        Status::Ok
    } else {
        Status::CheckFailed
    };
    if let Some(action) = &subject.action {
        let ft = flag_transitivity(g, action)?;
        if !ft.transitive {
            status = Status::CheckFailed;
        }
        results["flag_transitivity"] = serde_json::to_value(ft).expect("serializes");
    }
    Outcome::with_status(status, results)
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Gf2Matrix {
    let rows: Vec<BitVector> = (0..n)
        .map(|_| {
            let bits: Vec<u8> = (0..n).map(|_| rng.gen::<bool>() as u8).collect();
            BitVector::from_bits(&bits)
        })
        .collect();
    Gf2Matrix::from_rows(n, &rows)
}

/// Schoolbook elimination on unpacked rows.
fn naive_rank(mut rows: Vec<Vec<u8>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] == 1) else {
            continue;
        };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] == 1 {
                for k in c..cols {
                    rows[r][k] ^= rows[rank][k];
                }
            }
        }
        rank += 1;
    }
    rank
}

fn bench(sizes: &[usize], seed: Option<u64>) -> Result<Outcome, CliError> {
    if sizes.contains(&0) {
        return Err(CliError::bad_input("bench sizes must be positive"));
    }
    let seed = match (seed, sizes.is_empty()) {
        (Some(s), _) => s,
        (None, true) => 0,
        (None, false) => return Err(CliError::bad_input("bench needs --seed")),
    };
    let mut rows = Vec::with_capacity(sizes.len());
    for (i, &n) in sizes.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        let m = random_matrix(&mut rng, n);
        let start = Instant::now();
        let rank = m.rank();
        let elapsed = start.elapsed().as_millis() as u64;
        eprintln!("bench: {n}x{n} rank {rank} in {elapsed} ms");
        let mut row = json!({ "size": n, "rank": rank, "elapsed_ms": elapsed });
        if n <= BENCH_ORACLE_BOUND {
            let dense: Vec<Vec<u8>> = (0..n).map(|r| m.row(r).to_bits()).collect();
            let oracle = naive_rank(dense);
            row["oracle_rank"] = json!(oracle);
            if oracle != rank {
                return Outcome::with_status(Status::CheckFailed, json!({ "rows": [row] }));
            }
        }
        rows.push(row);
    }
    Outcome::ok(json!({ "rows": rows }))
}
