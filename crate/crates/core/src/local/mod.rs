//! Local analysis of derived graphs: the subgraphs Σ(y), the projective
//! space 𝒪_a at a vertex, the kernel series K_s, condition (*), girth and the
//! girth-5 local-action hypothesis.
//!
//! Vertices of the derived graph Δ are the elements of the top type; the
//! graph's `origin` maps them back to element indices.

use std::collections::BTreeSet;
use std::collections::VecDeque;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::build::projective_geometry_2;
use crate::geom::{isomorphic, GeomError, Geometry};
use crate::graph::Graph;
use crate::perm::{
    act_on_set, orbit_closure, prime_order_normal_closures, stabilizer, GroupAction, PermError, PermutationGroup,
    StabilizerMode, DEFAULT_NORMAL_BOUND,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalError {
    #[error("bad argument: {0}")]
    Argument(String),
    #[error("rank error: {0}")]
    Rank(String),
    #[error("action error: {0}")]
    Action(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

fn top_type(g: &Geometry) -> Result<usize, LocalError> {
    if g.rank() < 2 {
        return Err(LocalError::Rank("local analysis needs rank at least 2".into()));
    }
    Ok(g.rank())
}

/// The subgraph of Δ induced on the top-type elements incident to `y`.
pub fn sigma_subgraph(g: &Geometry, y: usize) -> Result<Graph, LocalError> {
    let n = top_type(g)?;
    if y >= g.len() {
        return Err(LocalError::Argument(format!("element {y} out of range")));
    }
    if g.type_of(y) == n {
        return Err(LocalError::Argument(format!("{:?} has the top type {n}", g.id(y))));
    }
    let delta = g.derived_graph()?;
    let on_y: BTreeSet<usize> = g.neighbors_of_type(y, n).into_iter().collect();
    let vertices: Vec<usize> = (0..delta.len())
        .filter(|&v| on_y.contains(&delta.origin()[v]))
        .collect();
    Ok(delta.induced(&vertices))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalSpaceReport {
    pub vertex: String,
    /// Number of elements y incident to the vertex, by type of 𝒪_a.
    pub counts: Vec<usize>,
    /// Whether distinct y give distinct vertex sets Σ(y).
    pub distinct: bool,
    pub projective: bool,
}

/// Checks that the sets Σ(y), y incident to the top-type element `a`, typed
/// `n - type(y)` and ordered by containment, form PG(n - 1, 2).
pub fn local_space_check(g: &Geometry, a: usize) -> Result<LocalSpaceReport, LocalError> {
    let n = top_type(g)?;
    if a >= g.len() || g.type_of(a) != n {
        return Err(LocalError::Argument(format!("element {a} is not of the top type {n}")));
    }
    let ys: Vec<usize> = g.neighbors(a).to_vec();
    let sets: Vec<BTreeSet<usize>> = ys
        .iter()
        .map(|&y| g.neighbors_of_type(y, n).into_iter().collect())
        .collect();
    let distinct = sets.iter().collect::<BTreeSet<_>>().len() == sets.len();
    let types: Vec<usize> = ys.iter().map(|&y| n - g.type_of(y)).collect();
    let mut counts = vec![0; n - 1];
    for &t in &types {
        counts[t - 1] += 1;
    }
    let mut pairs = Vec::new();
    for i in 0..ys.len() {
        for j in 0..ys.len() {
            if types[i] < types[j] && sets[i].is_subset(&sets[j]) {
                pairs.push((i, j));
            }
        }
    }
    let ids: Vec<String> = ys.iter().map(|&y| g.id(y).to_string()).collect();
    let local = Geometry::from_parts(n - 1, ids, types, &pairs)?;
    let pg = projective_geometry_2(n)
        .map_err(|e| LocalError::Argument(e.to_string()))?
        .geometry;
    let projective = distinct && isomorphic(&local, &pg)?.is_some();
    Ok(LocalSpaceReport {
        vertex: g.id(a).to_string(),
        counts,
        distinct,
        projective,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelSeriesReport {
    pub vertex: String,
    /// `orders[s] = |K_s|`; `K_0` is the vertex stabilizer.
    pub orders: Vec<u128>,
}

/// `K_s` is the pointwise stabilizer of the radius-`s` ball around `a` in Δ,
/// taken in the image of the action on elements.
pub fn kernel_series(
    g: &Geometry,
    action: &GroupAction<usize>,
    a: usize,
    s_max: usize,
) -> Result<KernelSeriesReport, LocalError> {
    let n = top_type(g)?;
    if action.len() != g.len() {
        return Err(LocalError::Action(format!(
            "action on {} points for {} elements",
            action.len(),
            g.len()
        )));
    }
    if a >= g.len() || g.type_of(a) != n {
        return Err(LocalError::Argument(format!(
            "element {a} is not a vertex of the derived graph"
        )));
    }
    let delta = g.derived_graph()?;
    let root = delta
        .origin()
        .iter()
        .position(|&x| x == a)
        .expect("top-type element is a vertex");
    let image = action.image_group();
    let mut orders = Vec::with_capacity(s_max + 1);
    for s in 0..=s_max {
        let ball: Vec<usize> = delta.ball(root, s).iter().map(|&v| delta.origin()[v]).collect();
        orders.push(stabilizer(image, &ball, StabilizerMode::Pointwise)?.order());
    }
    Ok(KernelSeriesReport {
        vertex: g.id(a).to_string(),
        orders,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionStarReport {
    pub holds: bool,
    /// `|K_{n-1}|` at one vertex of each orbit on top-type elements.
    pub kernels: Vec<(String, u128)>,
}

/// Whether `|K_{n-1}| <= 2` at every vertex of Δ.
pub fn condition_star(g: &Geometry, action: &GroupAction<usize>) -> Result<ConditionStarReport, LocalError> {
    let n = top_type(g)?;
    let image = action.image_group();
    let mut kernels = Vec::new();
    let mut seen = vec![false; g.len()];
    for v in g.elements_of_type(n) {
        if seen[v] {
            continue;
        }
        for x in image.point_orbit(v) {
            seen[x] = true;
        }
        let k = kernel_series(g, action, v, n - 1)?;
        kernels.push((k.vertex, k.orders[n - 1]));
    }
    Ok(ConditionStarReport {
        holds: kernels.iter().all(|(_, k)| *k <= 2),
        kernels,
    })
}

/// Length of a shortest cycle, `None` for forests.
pub fn girth(g: &Graph) -> Option<usize> {
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; g.len()];
    let mut parent = vec![usize::MAX; g.len()];
    for root in 0..g.len() {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        parent[root] = usize::MAX;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            if best.is_some_and(|b| 2 * dist[u] + 1 >= b) {
                break;
            }
            for &v in g.neighbors(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if parent[u] != v {
                    let c = dist[u] + dist[v] + 1;
                    best = Some(best.map_or(c, |b| b.min(c)));
                }
            }
        }
    }
    best
}

/// `None` serializes as the string `"infinite"`.
fn serialize_girth<S: Serializer>(g: &Option<usize>, s: S) -> Result<S::Ok, S::Error> {
    match g {
        Some(k) => s.serialize_u64(*k as u64),
        None => s.serialize_str("infinite"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalAction {
    pub degree: usize,
    pub order: u128,
    pub doubly_transitive: bool,
    pub regular_normal_subgroup: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypothesis61Report {
    #[serde(serialize_with = "serialize_girth")]
    pub girth: Option<usize>,
    pub vertex_transitive: bool,
    pub edge_transitive: bool,
    pub arc_transitive: bool,
    pub local_action: LocalAction,
    pub kernel_order: u128,
    pub kernel_nontrivial: bool,
    pub pass: bool,
    pub failed_clause: Option<String>,
}

/// Girth 5, vertex- and edge-transitivity, a doubly transitive local action
/// `G(x)^{Γ(x)}` without regular normal subgroups, and `G_1(x) != 1`, checked
/// in that order at vertex 0.
pub fn hypothesis_61_check(g: &Graph, action: &GroupAction<usize>) -> Result<Hypothesis61Report, LocalError> {
    if action.len() != g.len() || g.is_empty() {
        return Err(LocalError::Action(format!(
            "action on {} points for {} vertices",
            action.len(),
            g.len()
        )));
    }
    for p in action.images() {
        if g.edges().iter().any(|&(u, v)| !g.is_adjacent(p.apply(u), p.apply(v))) {
            return Err(LocalError::Action("a generator is not a graph automorphism".into()));
        }
    }
    let image = action.image_group();
    let vertex_transitive = image.orbits().len() == 1;
    let edges = g.edges();
    let edge_transitive = edges.is_empty()
        || orbit_closure(image, vec![vec![edges[0].0, edges[0].1]], |p, e: &Vec<usize>| {
            act_on_set(p, e)
        })
        .len()
            == edges.len();
    let arc_transitive = edges.is_empty()
        || orbit_closure(image, vec![edges[0]], |p, &(u, v): &(usize, usize)| {
            (p.apply(u), p.apply(v))
        })
        .len()
            == 2 * edges.len();

    let x = 0;
    let nbrs = g.neighbors(x).to_vec();
    let gx = stabilizer(image, &[x], StabilizerMode::Pointwise)?;
    let mut fixed = vec![x];
    fixed.extend(&nbrs);
    let kernel_order = stabilizer(image, &fixed, StabilizerMode::Pointwise)?.order();
    let local = if nbrs.is_empty() {
        PermutationGroup::trivial(1)
    } else {
        gx.restrict(&nbrs)?
    };
    let k = nbrs.len();
    let doubly_transitive = k >= 2
        && orbit_closure(&local, vec![(0usize, 1usize)], |p, &(a, b): &(usize, usize)| {
            (p.apply(a), p.apply(b))
        })
        .len()
            == k * (k - 1);
    let regular_normal_subgroup = prime_order_normal_closures(&local, DEFAULT_NORMAL_BOUND)?
        .iter()
        .any(|(n, _)| n.order() == k as u128 && n.is_transitive());
    let girth = girth(g);
    let local_action = LocalAction {
        degree: k,
        order: local.order(),
        doubly_transitive,
        regular_normal_subgroup,
    };
    let kernel_nontrivial = kernel_order > 1;
    let clauses = [
        ("girth", girth == Some(5)),
        ("vertex-transitive", vertex_transitive),
        ("edge-transitive", edge_transitive),
        ("doubly-transitive", doubly_transitive),
        ("regular-normal-subgroup", !regular_normal_subgroup),
        ("kernel", kernel_nontrivial),
    ];
    let failed_clause = clauses.iter().find(|(_, ok)| !ok).map(|(name, _)| name.to_string());
    Ok(Hypothesis61Report {
        girth,
        vertex_transitive,
        edge_transitive,
        arc_transitive,
        local_action,
        kernel_order,
        kernel_nontrivial,
        pass: failed_clause.is_none(),
        failed_clause,
    })
}

/// A group action on the derived graph's vertices, read off an action on
/// all elements.
pub fn derived_graph_action(
    g: &Geometry,
    action: &GroupAction<usize>,
) -> Result<(Graph, GroupAction<usize>), LocalError> {
    let delta = g.derived_graph()?;
    let pos: std::collections::HashMap<usize, usize> =
        delta.origin().iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let images = action
        .images()
        .iter()
        .map(|p| {
            let img: Vec<usize> = delta.origin().iter().map(|&x| pos[&p.apply(x)]).collect();
            crate::perm::Permutation::from_images(img)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let on_vertices = GroupAction::from_images(action.group().clone(), (0..delta.len()).collect(), images)?;
    Ok((delta, on_vertices))
}

#[cfg(test)]
mod tests;
