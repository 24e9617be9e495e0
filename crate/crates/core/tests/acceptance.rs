//! One line per acceptance criterion. Run with
//! `cargo test --test acceptance -- --nocapture`.

use std::collections::HashSet;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use geomforge::build::{
    load_m24, m22_pipeline, petersen_geometry, projective_geometry_2, symplectic_polar_space, tilde_geometry,
    GolayCode, GOLAY_POLYNOMIAL,
};
use geomforge::cover::{
    homology_rank, is_triangulable, todd_coxeter, Certificate, EnumerationStatus, Presentation, TriangleComplex,
    Triangulability, DEFAULT_COSET_LIMIT,
};
use geomforge::geom::{
    diagram, flag_transitivity, is_s_covering, isomorphic, quotient_by_action, Geometry, ResidueClass,
};
use geomforge::gf2::{Gf2Matrix, MatrixGFp};
use geomforge::graph::Graph;
use geomforge::local::{condition_star, derived_graph_action, hypothesis_61_check, kernel_series};
use geomforge::natrep::{o3_split_dims, um_dimension};
use geomforge::perm::{stabilizer, GroupAction, Permutation, PermutationGroup, StabilizerMode};

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Gauss-Jordan over GF(p) on plain rows.
fn naive_rank(mut rows: Vec<Vec<u32>>, p: u32) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] % p != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = (1..p).find(|&x| x * rows[rank][c] % p == 1).unwrap();
        for k in 0..cols {
            rows[rank][k] = rows[rank][k] * inv % p;
        }
        for r in 0..rows.len() {
            let f = rows[r][c] % p;
            if r != rank && f != 0 {
                for k in 0..cols {
                    rows[r][k] = (rows[r][k] + (p - f) * rows[rank][k]) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Points minus the rank of the line relations, straight from incidences.
fn naive_um(g: &Geometry) -> usize {
    let points = g.elements_of_type(1);
    let rows: Vec<Vec<u32>> = g
        .elements_of_type(2)
        .into_iter()
        .map(|l| points.iter().map(|&p| g.incident(p, l) as u32).collect())
        .collect();
    points.len() - naive_rank(rows, 2)
}

/// The construction of T0 is not part of the one-second budget.
fn c1_golden_values() -> Check {
    let p0 = petersen_geometry();
    let t = tilde_geometry(1).map_err(|e| e.to_string())?;
    let o3 = t.o3_generator.as_ref().ok_or("T0 has no O3 generator")?;
    let start = Instant::now();
    let r = um_dimension(&p0.geometry).map_err(|e| e.to_string())?;
    ensure!(
        start.elapsed() < Duration::from_secs(1),
        "um(P0) took {:?}",
        start.elapsed()
    );
    ensure!(r.total_dim == 6, "um(P0) = {}", r.total_dim);
    let start = Instant::now();
    let r = o3_split_dims(&t.geometry, o3).map_err(|e| e.to_string())?;
    ensure!(
        start.elapsed() < Duration::from_secs(1),
        "um(T0) took {:?}",
        start.elapsed()
    );
    ensure!(r.total_dim == 11, "um(T0) = {}", r.total_dim);
    ensure!(r.split == Some((6, 5)), "split {:?}", r.split);
    Ok(())
}

fn c2_tilde_end_to_end() -> Check {
    let t = tilde_geometry(42).map_err(|e| e.to_string())?;
    let g = &t.geometry;
    ensure!(
        g.rank() == 2 && g.type_counts() == vec![45, 45],
        "counts {:?}",
        g.type_counts()
    );
    let ft = flag_transitivity(g, &t.action).map_err(|e| e.to_string())?;
    ensure!(ft.transitive, "not flag-transitive: {ft:?}");
    let d = diagram(g).map_err(|e| e.to_string())?;
    ensure!(
        d.class(1, 2) == Some(ResidueClass::TildeEdge),
        "diagram {:?}",
        d.class(1, 2)
    );
    let o3 = t.o3_generator.clone().ok_or("no O3 generator")?;
    let n = PermutationGroup::new(g.len(), vec![o3]).map_err(|e| e.to_string())?;
    let (q, f) = quotient_by_action(g, &GroupAction::natural(&n)).map_err(|e| e.to_string())?;
    let gq = symplectic_polar_space(2).map_err(|e| e.to_string())?.geometry;
    ensure!(
        isomorphic(&q, &gq).map_err(|e| e.to_string())?.is_some(),
        "quotient is not GQ(2,2)"
    );
    ensure!(
        is_s_covering(&f, 1).map_err(|e| e.to_string())?,
        "quotient map is not a 1-covering"
    );
    let other = tilde_geometry(7).map_err(|e| e.to_string())?;
    ensure!(
        isomorphic(g, &other.geometry).map_err(|e| e.to_string())?.is_some(),
        "seeds 42 and 7 differ"
    );
    Ok(())
}

fn c3_classical() -> Check {
    let c2 = symplectic_polar_space(2).map_err(|e| e.to_string())?;
    let c3 = symplectic_polar_space(3).map_err(|e| e.to_string())?;
    ensure!(
        c2.geometry.type_counts() == vec![15, 15],
        "C2 counts {:?}",
        c2.geometry.type_counts()
    );
    ensure!(
        c3.geometry.type_counts() == vec![63, 315, 135],
        "C3 counts {:?}",
        c3.geometry.type_counts()
    );
    ensure!(c2.group.order() == 720, "|Sp4(2)| = {}", c2.group.order());
    ensure!(c3.group.order() == 1_451_520, "|Sp6(2)| = {}", c3.group.order());
    let d = diagram(&c3.geometry).map_err(|e| e.to_string())?;
    ensure!(
        d.class(1, 2) == Some(ResidueClass::ProjectivePlane2),
        "(1,2) {:?}",
        d.class(1, 2)
    );
    ensure!(d.class(2, 3) == Some(ResidueClass::Gq22), "(2,3) {:?}", d.class(2, 3));
    ensure!(d.class(1, 3) == Some(ResidueClass::Digon), "(1,3) {:?}", d.class(1, 3));
    for (n, m) in [(2, &c2), (3, &c3)] {
        let top = m.geometry.elements_of_type(n)[0];
        let res = m.geometry.residue(&[top]).map_err(|e| e.to_string())?.geometry;
        let pg = projective_geometry_2(n).map_err(|e| e.to_string())?.geometry;
        ensure!(
            isomorphic(&res, &pg).map_err(|e| e.to_string())?.is_some(),
            "top residue of C{n}(2)"
        );
    }
    let gq_um = um_dimension(&c2.geometry).map_err(|e| e.to_string())?.total_dim;
    ensure!(gq_um == 5 && naive_um(&c2.geometry) == 5, "um(GQ(2,2)) = {gq_um}");
    let pg = projective_geometry_2(4).map_err(|e| e.to_string())?.geometry;
    let plane = pg.elements_of_type(3)[0];
    let fano = pg.residue(&[plane]).map_err(|e| e.to_string())?.geometry;
    let fano = fano.truncation(&[1, 2]).map_err(|e| e.to_string())?.geometry;
    let fano_um = um_dimension(&fano).map_err(|e| e.to_string())?.total_dim;
    ensure!(
        fano.type_counts() == vec![7, 7],
        "plane counts {:?}",
        fano.type_counts()
    );
    ensure!(fano_um == 3 && naive_um(&fano) == 3, "um(PG(2,2)) = {fano_um}");
    Ok(())
}

fn c4_local() -> Check {
    let p0 = petersen_geometry();
    let v = p0.geometry.elements_of_type(2)[0];
    let k = kernel_series(&p0.geometry, &p0.action, v, 2).map_err(|e| e.to_string())?;
    ensure!(k.orders == vec![12, 2, 1], "kernel series {:?}", k.orders);
    let s = condition_star(&p0.geometry, &p0.action).map_err(|e| e.to_string())?;
    ensure!(s.holds, "condition (*) fails on P0: {:?}", s.kernels);
    let t0 = tilde_geometry(1).map_err(|e| e.to_string())?;
    let s = condition_star(&t0.geometry, &t0.action).map_err(|e| e.to_string())?;
    ensure!(s.holds, "condition (*) fails on T0: {:?}", s.kernels);
    Ok(())
}

fn c5_hypothesis() -> Check {
    let p0 = petersen_geometry();
    let (delta, action) = derived_graph_action(&p0.geometry, &p0.action).map_err(|e| e.to_string())?;
    ensure!(
        action.image_group().order() == 120,
        "|G| = {}",
        action.image_group().order()
    );
    let r = hypothesis_61_check(&delta, &action).map_err(|e| e.to_string())?;
    ensure!(r.girth == Some(5), "girth {:?}", r.girth);
    ensure!(r.vertex_transitive && r.edge_transitive, "transitivity {r:?}");
    ensure!(r.local_action.doubly_transitive, "local action {:?}", r.local_action);
    ensure!(r.kernel_nontrivial, "kernel order {}", r.kernel_order);
    ensure!(
        !r.pass && r.failed_clause.as_deref() == Some("regular-normal-subgroup"),
        "{:?}",
        r.failed_clause
    );
    Ok(())
}

fn c6_coset_enumeration() -> Check {
    let p = |g: &[&str], r: &[&str], h: &[&str]| Presentation::new(g, r, h).map_err(|e| e.to_string());
    let a5 = todd_coxeter(&p(&["a", "b"], &["aa", "bbb", "ababababab"], &[])?, DEFAULT_COSET_LIMIT)
        .map_err(|e| e.to_string())?;
    ensure!(
        a5.status == EnumerationStatus::Completed { index: 60 },
        "A5 {:?}",
        a5.status
    );
    let d3 = todd_coxeter(&p(&["a", "b"], &["aa", "bb", "ababab"], &["a"])?, 1000).map_err(|e| e.to_string())?;
    ensure!(
        d3.status == EnumerationStatus::Completed { index: 3 },
        "dihedral {:?}",
        d3.status
    );
    let free = todd_coxeter(&p(&["a"], &[], &[])?, 500).map_err(|e| e.to_string())?;
    ensure!(
        free.status == EnumerationStatus::Overflow { limit: 500 },
        "free {:?}",
        free.status
    );
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut rels = vec!["aa", "bbb", "ababababab"];
    for _ in 0..20 {
        rels.shuffle(&mut rng);
        for (h, index) in [(&[][..], 60), (&["b"][..], 20), (&["a"][..], 30)] {
            let out = todd_coxeter(&p(&["a", "b"], &rels, h)?, DEFAULT_COSET_LIMIT).map_err(|e| e.to_string())?;
            ensure!(
                out.index() == Some(index),
                "relators {rels:?} over {h:?}: {:?}",
                out.status
            );
        }
    }
    Ok(())
}

fn c7_triangulability() -> Check {
    let k4 = TriangleComplex::clique_complex(Graph::complete(4));
    let r = is_triangulable(&k4, DEFAULT_COSET_LIMIT).map_err(|e| e.to_string())?;
    ensure!(r.verdict == Triangulability::Yes, "K4 {r:?}");
    for g in [Graph::cycle(5), Graph::petersen()] {
        let r = is_triangulable(&TriangleComplex::from_graph(g), DEFAULT_COSET_LIMIT).map_err(|e| e.to_string())?;
        ensure!(r.verdict == Triangulability::No, "{r:?}");
        ensure!(
            matches!(r.certificate, Some(Certificate::Homology { .. })),
            "certificate {:?}",
            r.certificate
        );
    }
    let gq = symplectic_polar_space(2).map_err(|e| e.to_string())?.geometry;
    let k = TriangleComplex::collinearity(&gq).map_err(|e| e.to_string())?;
    let edges = k.graph().edges();
    let col = |a: usize, b: usize| edges.binary_search(&(a, b)).unwrap();
    let rows: Vec<Vec<u32>> = k
        .triangles()
        .iter()
        .map(|&[a, b, c]| {
            let mut row = vec![0; edges.len()];
            row[col(b, c)] = 1;
            row[col(a, c)] = 2;
            row[col(a, b)] = 1;
            row
        })
        .collect();
    let cycles = edges.len() + 1 - k.graph().len();
    ensure!(cycles == 31, "cycle rank {cycles}");
    let h = homology_rank(&k, 3).map_err(|e| e.to_string())?;
    let oracle = 31 - naive_rank(rows, 3);
    ensure!(h == oracle && h >= 16, "H1(GF(3)) = {h}, oracle {oracle}");
    Ok(())
}

fn c8_gf2_kernel() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for prime in [2u32, 3] {
        for _ in 0..200 {
            let (r, c) = (rng.gen_range(1..=100), rng.gen_range(1..=100));
            let density = rng.gen_range(0.02..0.6);
            let rows: Vec<Vec<u8>> = (0..r)
                .map(|_| {
                    (0..c)
                        .map(|_| {
                            if rng.gen_bool(density) {
                                rng.gen_range(1..prime) as u8
                            } else {
                                0
                            }
                        })
                        .collect()
                })
                .collect();
            let fast = if prime == 2 {
                Gf2Matrix::from_dense(&rows, c).rank()
            } else {
                MatrixGFp::from_dense(prime, &rows, c)
                    .map_err(|e| e.to_string())?
                    .rank()
            };
            let slow = naive_rank(
                rows.iter().map(|row| row.iter().map(|&x| x as u32).collect()).collect(),
                prime,
            );
            ensure!(fast == slow, "GF({prime}) {r}x{c}: packed {fast}, naive {slow}");
        }
    }
    let n = 2000;
    let rows: Vec<Vec<u8>> = (0..n)
        .map(|_| (0..n).map(|_| rng.gen::<bool>() as u8).collect())
        .collect();
    let m = Gf2Matrix::from_dense(&rows, n);
    let start = Instant::now();
    let rank = m.rank();
    let took = start.elapsed();
    ensure!(rank + 10 >= n, "2000x2000 rank {rank}");
    ensure!(took < Duration::from_secs(1), "2000x2000 rank took {took:?}");
    Ok(())
}

fn c9_determinism() -> Check {
    let runs: [&[&str]; 6] = [
        &["build", "tilde", "--seed", "11"],
        &["natrep", "dim", "--builtin", "tilde", "--seed", "11"],
        &["diagram", "--builtin", "sp", "--n", "3"],
        &["local", "star", "--builtin", "tilde", "--seed", "11"],
        &["pi1", "--builtin", "gq22"],
        &["bench", "--sizes", "50,400", "--seed", "2"],
    ];
    let exe = env!("CARGO_BIN_EXE_geomforge");
    let stable = |args: &[&str]| -> Result<String, String> {
        let out = Command::new(exe).args(args).output().map_err(|e| e.to_string())?;
        ensure!(out.status.code() == Some(0), "{args:?} exited {:?}", out.status.code());
        Ok(String::from_utf8_lossy(&out.stdout)
            .lines()
            .filter(|l| !l.contains("\"elapsed_ms\""))
            .collect::<Vec<_>>()
            .join("\n"))
    };
    for args in runs {
        let base = stable(args)?;
        ensure!(stable(args)? == base, "{args:?} differs between runs");
        for t in ["1", "3"] {
            let mut v = vec!["--threads", t];
            v.extend(args);
            ensure!(stable(&v)? == base, "{args:?} differs with --threads {t}");
        }
    }
    Ok(())
}

/// Stretch tier: weights from polynomial multiples, group order from orbit
/// lengths and an element count of the five-point stabilizer.
fn c10_m22_tier() -> Check {
    let mut weights = [0usize; 25];
    for a in 0u64..1 << 12 {
        let prod = (0..12)
            .filter(|i| a >> i & 1 == 1)
            .fold(0u64, |acc, i| acc ^ (GOLAY_POLYNOMIAL as u64) << i);
        let w = prod.count_ones() as usize;
        weights[w + w % 2] += 1;
    }
    ensure!(weights[8] == 759, "{} words of weight 8", weights[8]);
    let code = GolayCode::new().map_err(|e| e.to_string())?;
    ensure!(
        code.weight_distribution() == weights,
        "weight distribution differs from the oracle"
    );
    let m24 = load_m24(&code).map_err(|e| e.to_string())?;
    let mut g = m24.clone();
    let mut order = 1u128;
    for p in 0..5 {
        order *= g.point_orbit(p).len() as u128;
        g = stabilizer(&g, &[p], StabilizerMode::Pointwise).map_err(|e| e.to_string())?;
    }
    let mut seen = HashSet::from([Permutation::identity(24)]);
    let mut frontier = vec![Permutation::identity(24)];
    while let Some(x) = frontier.pop() {
        for s in g.generators() {
            let y = x.then(s);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    order *= seen.len() as u128;
    ensure!(
        order == 244_823_040 && m24.order() == order,
        "|M24| = {} by orbits, {} by chain",
        order,
        m24.order()
    );
    let p1 = m22_pipeline(1).map_err(|e| e.to_string())?;
    let um = um_dimension(&p1.geometry).map_err(|e| e.to_string())?.total_dim;
    ensure!(um == 11 && naive_um(&p1.geometry) == 11, "um(P1) = {um}");
    let (delta, action) = derived_graph_action(&p1.geometry, &p1.action).map_err(|e| e.to_string())?;
    let r = hypothesis_61_check(&delta, &action).map_err(|e| e.to_string())?;
    ensure!(r.pass && r.girth == Some(5), "P1 hypothesis check: {r:?}");
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: Vec<(u32, &str, u64, fn() -> Check)> = vec![
        (1, "golden um dimensions", 60_000, c1_golden_values),
        (2, "tilde geometry end to end", 60_000, c2_tilde_end_to_end),
        (3, "classical geometries", 10_000, c3_classical),
        (4, "local analysis", 10_000, c4_local),
        (5, "local-action hypothesis on Petersen", 5_000, c5_hypothesis),
        (6, "coset enumeration", 5_000, c6_coset_enumeration),
        (7, "triangulability suite", 5_000, c7_triangulability),
        (8, "GF(2) kernel", 60_000, c8_gf2_kernel),
        (9, "CLI determinism", 120_000, c9_determinism),
        (10, "stretch: Golay, M24 and P1", 120_000, c10_m22_tier),
    ];
    let mut failures = Vec::new();
    println!();
    for (id, name, limit_ms, run) in criteria {
        let start = Instant::now();
        let result = run();
        let ms = start.elapsed().as_millis() as u64;
        let result = match result {
            Ok(()) if ms > limit_ms => Err(format!("took {ms} ms")),
            other => other,
        };
        match &result {
            Ok(()) => println!("PASS {id:>2} {name} ({ms} ms, limit {limit_ms} ms)"),
            Err(why) => {
                println!("FAIL {id:>2} {name} ({ms} ms, limit {limit_ms} ms): {why}");
                failures.push(id);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
