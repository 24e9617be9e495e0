use proptest::prelude::*;

use super::*;
use crate::build::{petersen_geometry, symplectic_polar_space, tilde_geometry};
use crate::perm::Permutation;

fn edge_geometry(g: &Graph) -> Geometry {
    let n = g.len();
    let edges = g.edges();
    let mut types = vec![1; n];
    types.extend(std::iter::repeat(2).take(edges.len()));
    let pairs: Vec<(usize, usize)> = edges
        .iter()
        .enumerate()
        .flat_map(|(k, &(u, v))| [(u, n + k), (v, n + k)])
        .collect();
    Geometry::from_types(2, types, &pairs).unwrap()
}

/// Shortest cycle through each edge: drop it and measure the detour.
fn girth_oracle(g: &Graph) -> Option<usize> {
    let edges = g.edges();
    let mut best = None;
    for &(u, v) in &edges {
        let rest: Vec<(usize, usize)> = edges.iter().copied().filter(|&e| e != (u, v)).collect();
        let h = Graph::new(g.len(), &rest).unwrap();
        let d = h.distances(u)[v];
        if d != usize::MAX {
            best = Some(best.map_or(d + 1, |b: usize| b.min(d + 1)));
        }
    }
    best
}

#[test]
fn sigma_subgraphs() {
    let t0 = tilde_geometry(10).unwrap().geometry;
    let p = t0.elements_of_type(1)[5];
    let s = sigma_subgraph(&t0, p).unwrap();
    assert_eq!((s.len(), s.edge_count()), (3, 3));

    let p0 = petersen_geometry().geometry;
    let s = sigma_subgraph(&p0, 0).unwrap();
    assert_eq!((s.len(), s.edge_count()), (2, 1));
    assert!(matches!(sigma_subgraph(&p0, 20), Err(LocalError::Argument(_))));

    let c3 = symplectic_polar_space(3).unwrap().geometry;
    let pt = c3.elements_of_type(1)[0];
    let s = sigma_subgraph(&c3, pt).unwrap();
    let res = c3.residue(&[pt]).unwrap();
    let d = res.geometry.derived_graph().unwrap();
    let lift = |graph: &Graph, map: &dyn Fn(usize) -> usize| -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = graph
            .edges()
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (map(graph.origin()[u]), map(graph.origin()[v]));
                (a.min(b), a.max(b))
            })
            .collect();
        e.sort_unstable();
        e
    };
    assert_eq!(lift(&s, &|x| x), lift(&d, &|x| res.elements[x]));
    assert_eq!(s.len(), 15);
}

#[test]
fn local_spaces() {
    let p0 = petersen_geometry().geometry;
    for v in p0.elements_of_type(2) {
        let r = local_space_check(&p0, v).unwrap();
        assert_eq!(r.counts, vec![3]);
        assert!(r.projective && r.distinct);
    }
    let t0 = tilde_geometry(11).unwrap().geometry;
    let line = t0.elements_of_type(2)[7];
    assert!(local_space_check(&t0, line).unwrap().projective);
    let c3 = symplectic_polar_space(3).unwrap().geometry;
    let plane = c3.elements_of_type(3)[0];
    let r = local_space_check(&c3, plane).unwrap();
    assert_eq!(r.counts, vec![7, 7]);
    assert!(r.projective);

    let k4 = edge_geometry(&Graph::complete(4));
    let e = k4.elements_of_type(2)[0];
    let r = local_space_check(&k4, e).unwrap();
    assert_eq!(r.counts, vec![2]);
    assert!(!r.projective);
    assert!(local_space_check(&k4, 0).is_err());
}

#[test]
fn kernel_series_examples() {
    let m = petersen_geometry();
    let img = m.action.image_group().order();
    for v in m.geometry.elements_of_type(2) {
        let k = kernel_series(&m.geometry, &m.action, v, 2).unwrap();
        assert_eq!(k.orders, vec![12, 2, 1]);
        assert_eq!(k.orders[0] * 10, img);
    }

    let t = tilde_geometry(12).unwrap();
    let vertices = t.geometry.elements_of_type(2);
    let k = kernel_series(&t.geometry, &t.action, vertices[0], 2).unwrap();
    assert!(k.orders[1] <= 2);
    assert_eq!(k.orders[0] * 45, t.action.image_group().order());
    for w in k.orders.windows(2) {
        assert_eq!(w[0] % w[1], 0);
    }
    for &v in &vertices[1..6] {
        assert_eq!(kernel_series(&t.geometry, &t.action, v, 2).unwrap().orders, k.orders);
    }

    let trivial = GroupAction::natural(&PermutationGroup::trivial(m.geometry.len()));
    assert_eq!(kernel_series(&m.geometry, &trivial, 15, 3).unwrap().orders, vec![1; 4]);
    assert!(kernel_series(&m.geometry, &m.action, 0, 1).is_err());
}

#[test]
fn condition_star_examples() {
    let m = petersen_geometry();
    let r = condition_star(&m.geometry, &m.action).unwrap();
    assert!(r.holds);
    assert_eq!(r.kernels.len(), 1);
    assert_eq!(r.kernels[0].1, 2);
    let t = tilde_geometry(13).unwrap();
    assert!(condition_star(&t.geometry, &t.action).unwrap().holds);
    let trivial = GroupAction::natural(&PermutationGroup::trivial(m.geometry.len()));
    let r = condition_star(&m.geometry, &trivial).unwrap();
    assert!(r.holds);
    assert_eq!(r.kernels.len(), 10);
    let rank1 = Geometry::from_types(1, vec![1, 1], &[]).unwrap();
    assert!(matches!(
        condition_star(&rank1, &GroupAction::natural(&PermutationGroup::trivial(2))),
        Err(LocalError::Rank(_))
    ));
}

#[test]
fn girths() {
    assert_eq!(girth(&Graph::petersen()), Some(5));
    assert_eq!(girth(&Graph::complete(3)), Some(3));
    assert_eq!(girth(&Graph::cycle(7)), Some(7));
    assert_eq!(girth(&Graph::new(4, &[(0, 1), (1, 2), (1, 3)]).unwrap()), None);
    assert_eq!(girth(&Graph::new(0, &[]).unwrap()), None);
    let t0 = tilde_geometry(14).unwrap().geometry;
    let d = t0.derived_graph().unwrap();
    assert_eq!(girth(&d), girth_oracle(&d));
}

#[test]
fn petersen_hypothesis() {
    let m = petersen_geometry();
    let (delta, action) = derived_graph_action(&m.geometry, &m.action).unwrap();
    let r = hypothesis_61_check(&delta, &action).unwrap();
    assert_eq!(r.girth, Some(5));
    assert!(r.vertex_transitive && r.edge_transitive && r.arc_transitive);
    assert_eq!(
        r.local_action,
        LocalAction {
            degree: 3,
            order: 6,
            doubly_transitive: true,
            regular_normal_subgroup: true
        }
    );
    assert_eq!(r.kernel_order, 2);
    assert!(r.kernel_nontrivial);
    assert!(!r.pass);
    assert_eq!(r.failed_clause.as_deref(), Some("regular-normal-subgroup"));
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["girth"], 5);
}

#[test]
fn complete_graph_fails_on_girth() {
    let k4 = Graph::complete(4);
    let s4 = PermutationGroup::symmetric(4);
    let r = hypothesis_61_check(&k4, &GroupAction::natural(&s4)).unwrap();
    assert_eq!(r.failed_clause.as_deref(), Some("girth"));
    assert!(r.local_action.doubly_transitive);

    let path = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
    let swap = PermutationGroup::new(3, vec![Permutation::from_images(vec![1, 0, 2]).unwrap()]).unwrap();
    assert!(matches!(
        hypothesis_61_check(&path, &GroupAction::natural(&swap)),
        Err(LocalError::Action(_))
    ));
    let tree = Graph::new(2, &[(0, 1)]).unwrap();
    let r = hypothesis_61_check(&tree, &GroupAction::natural(&PermutationGroup::symmetric(2))).unwrap();
    assert_eq!(serde_json::to_value(&r).unwrap()["girth"], "infinite");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn girth_matches_oracle(n in 2usize..10, mask in any::<u64>()) {
        let pairs: Vec<(usize, usize)> = crate::build::two_subsets(n)
            .into_iter()
            .enumerate()
            .filter(|(i, _)| mask >> (i % 64) & 1 == 1)
            .map(|(_, e)| e)
            .collect();
        let g = Graph::new(n, &pairs).unwrap();
        prop_assert_eq!(girth(&g), girth_oracle(&g));
    }
}
