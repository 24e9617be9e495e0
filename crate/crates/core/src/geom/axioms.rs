use serde::Serialize;

use super::{GeomError, Geometry};
use crate::perm::{act_on_set, orbit_closure, GroupAction};

/// Why a candidate fails to be a geometry. Flags are listed by element id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AxiomFailure {
    /// A maximal flag that misses some type.
    MaximalFlag {
        flag: Vec<String>,
        missing_types: Vec<usize>,
    },
    /// A flag of corank at least 2 whose residue is disconnected.
    Disconnected { flag: Vec<String>, components: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeometryVerdict {
    pub is_geometry: bool,
    pub failure: Option<AxiomFailure>,
}

/// Checks that every maximal flag meets all types and every residue of rank
/// at least 2 (the whole geometry included) is connected. Maximal flags are
/// checked first; within each check flags are visited in lexicographic order
/// of element indices and the first failure is reported.
pub fn is_geometry(g: &Geometry) -> GeometryVerdict {
    let n = g.rank();
    let mut failure = None;
    g.for_each_flag(n, |flag, res| {
        if failure.is_none() && flag.len() < n && res.is_empty() {
            let present: Vec<usize> = flag.iter().map(|&x| g.type_of(x)).collect();
            failure = Some(AxiomFailure::MaximalFlag {
                flag: ids(g, flag),
                missing_types: (1..=n).filter(|t| !present.contains(t)).collect(),
            });
        }
    });
    let mut mark = vec![0u32; g.len()];
    let mut stamp = 0u32;
    if failure.is_none() && n >= 2 {
        g.for_each_flag(n - 2, |flag, res| {
            if failure.is_some() {
                return;
            }
            stamp += 2;
            let c = components_within(g, res, &mut mark, stamp);
            if c > 1 {
                failure = Some(AxiomFailure::Disconnected {
                    flag: ids(g, flag),
                    components: c,
                });
            }
        });
    }
    GeometryVerdict {
        is_geometry: failure.is_none(),
        failure,
    }
}

fn ids(g: &Geometry, flag: &[usize]) -> Vec<String> {
    flag.iter().map(|&x| g.id(x).to_string()).collect()
}

fn components_within(g: &Geometry, set: &[usize], mark: &mut [u32], stamp: u32) -> usize {
    for &x in set {
        mark[x] = stamp;
    }
    let visited = stamp + 1;
    let mut count = 0;
    let mut stack = Vec::new();
    for &s in set {
        if mark[s] != stamp {
            continue;
        }
        count += 1;
        mark[s] = visited;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &v in g.neighbors(u) {
                if mark[v] == stamp {
                    mark[v] = visited;
                    stack.push(v);
                }
            }
        }
    }
    count
}

/// Verifies that every generator image preserves types and incidence.
pub fn check_action(g: &Geometry, a: &GroupAction<usize>) -> Result<(), GeomError> {
    if a.len() != g.len() {
        return Err(GeomError::Action(format!(
            "action on {} labels for {} elements",
            a.len(),
            g.len()
        )));
    }
    for (k, p) in a.images().iter().enumerate() {
        for x in 0..g.len() {
            if g.type_of(p.apply(x)) != g.type_of(x) {
                return Err(GeomError::Action(format!(
                    "generator {k} moves {:?} to an element of another type",
                    g.id(x)
                )));
            }
        }
        for (x, y) in g.incidence_pairs() {
            if !g.incident(p.apply(x), p.apply(y)) {
                return Err(GeomError::Action(format!(
                    "generator {k} breaks the incidence {:?} ~ {:?}",
                    g.id(x),
                    g.id(y)
                )));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagTransitivity {
    pub maximal_flags: usize,
    pub orbit_length: usize,
    pub transitive: bool,
}

/// Counts maximal flags and the orbit of the first one.
pub fn flag_transitivity(g: &Geometry, a: &GroupAction<usize>) -> Result<FlagTransitivity, GeomError> {
    check_action(g, a)?;
    let mut count = 0;
    let mut first: Option<Vec<usize>> = None;
    g.for_each_flag(g.rank(), |flag, res| {
        if res.is_empty() {
            count += 1;
            if first.is_none() {
                first = Some(flag.to_vec());
            }
        }
    });
    let orbit_length = match first {
        Some(f) if !f.is_empty() => orbit_closure(a.image_group(), vec![f], act_on_set).len(),
        _ => count,
    };
    Ok(FlagTransitivity {
        maximal_flags: count,
        orbit_length,
        transitive: orbit_length == count,
    })
}

pub fn is_flag_transitive(g: &Geometry, a: &GroupAction<usize>) -> Result<bool, GeomError> {
    Ok(flag_transitivity(g, a)?.transitive)
}
