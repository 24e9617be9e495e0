//! Incidence geometries: validation, residues, diagrams, flag-transitivity,
//! graphs, quotients, coverings, isomorphism and amalgam reports.
//!
//! Elements are addressed by index (`0..len()`); ids are kept for reporting
//! and file exchange. Types run from 1 to `rank`.

mod amalgam;
mod axioms;
mod diagram;
mod iso;
mod morphism;

pub use amalgam::{amalgam_report, AmalgamReport, Intersection, Parabolic};
pub use axioms::{
    check_action, flag_transitivity, is_flag_transitive, is_geometry, AxiomFailure, FlagTransitivity, GeometryVerdict,
};
pub use diagram::{classify_rank2, diagram, DiagramEdge, DiagramReport, ResidueClass};
pub use iso::{isomorphic, isomorphic_with_limit, DEFAULT_ISO_LIMIT};
pub use morphism::{is_s_covering, quotient_by_action, GeometryMorphism};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::perm::PermError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("not a flag: {0}")]
    NotFlag(String),
    #[error("rank error: {0}")]
    Rank(String),
    #[error("geometry axioms fail: {0}")]
    Axiom(String),
    #[error("action error: {0}")]
    Action(String),
    #[error("morphism error: {0}")]
    Morphism(String),
    #[error("bad argument: {0}")]
    Argument(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("{what}: size {size} exceeds bound {bound}")]
    Capacity { what: String, size: usize, bound: usize },
    #[error("malformed geometry file: {0}")]
    Parse(String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A typed incidence system. Incidence is symmetric, irreflexive and never
/// joins two elements of the same type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Geometry {
    rank: usize,
    ids: Vec<String>,
    types: Vec<usize>,
    adj: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct ElementEntry {
    id: String,
    #[serde(rename = "type")]
    ty: usize,
}

#[derive(Serialize, Deserialize)]
struct GeometryFile {
    rank: usize,
    elements: Vec<ElementEntry>,
    incidences: Vec<[String; 2]>,
}

/// A geometry induced on part of another, with the bookkeeping needed to map back.
#[derive(Clone, Debug)]
pub struct Subgeometry {
    pub geometry: Geometry,
    /// `elements[k]` is the element of the parent that became element `k`.
    pub elements: Vec<usize>,
    /// `type_map[t - 1]` is the parent type of new type `t`.
    pub type_map: Vec<usize>,
}

impl Geometry {
    /// Builds a geometry from ids, types and incidences given by index.
    pub fn from_parts(
        rank: usize,
        ids: Vec<String>,
        types: Vec<usize>,
        pairs: &[(usize, usize)],
    ) -> Result<Self, GeomError> {
        if ids.len() != types.len() {
            return Err(GeomError::Structural(format!(
                "{} ids for {} types",
                ids.len(),
                types.len()
            )));
        }
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(GeomError::Structural(format!("duplicate id {id:?}")));
            }
        }
        if let Some(i) = types.iter().position(|&t| t == 0 || t > rank) {
            return Err(GeomError::Structural(format!(
                "element {:?} has type {} outside 1..{rank}",
                ids[i], types[i]
            )));
        }
        let n = ids.len();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(GeomError::Structural(format!("incidence ({a},{b}) out of range")));
            }
            if a == b {
                return Err(GeomError::Structural(format!("reflexive incidence at {:?}", ids[a])));
            }
            if types[a] == types[b] {
                return Err(GeomError::Structural(format!(
                    "same-type incidence between {:?} and {:?}",
                    ids[a], ids[b]
                )));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        Ok(Geometry {
            rank,
            ids,
            types,
            adj,
            index,
        })
    }

    /// Builds a geometry from `(id, type)` elements and incidences by id.
    pub fn new(
        rank: usize,
        elements: Vec<(String, usize)>,
        incidences: &[(String, String)],
    ) -> Result<Self, GeomError> {
        let (ids, types): (Vec<String>, Vec<usize>) = elements.into_iter().unzip();
        let pos: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut pairs = Vec::with_capacity(incidences.len());
        for (a, b) in incidences {
            let lookup = |s: &String| {
                pos.get(s.as_str())
                    .copied()
                    .ok_or_else(|| GeomError::Structural(format!("unknown id {s:?} in incidence")))
            };
            pairs.push((lookup(a)?, lookup(b)?));
        }
        Self::from_parts(rank, ids, types, &pairs)
    }

    /// Builds a geometry with ids `"0"`, `"1"`, ...
    pub fn from_types(rank: usize, types: Vec<usize>, pairs: &[(usize, usize)]) -> Result<Self, GeomError> {
        let ids = (0..types.len()).map(|i| i.to_string()).collect();
        Self::from_parts(rank, ids, types, pairs)
    }

    pub fn from_json(text: &str) -> Result<Self, GeomError> {
        let file: GeometryFile = serde_json::from_str(text).map_err(|e| GeomError::Parse(e.to_string()))?;
        let elements = file.elements.into_iter().map(|e| (e.id, e.ty)).collect();
        let incidences: Vec<(String, String)> = file.incidences.into_iter().map(|[a, b]| (a, b)).collect();
        Self::new(file.rank, elements, &incidences)
    }

    pub fn to_json(&self) -> String {
        let file = GeometryFile {
            rank: self.rank,
            elements: self
                .ids
                .iter()
                .zip(&self.types)
                .map(|(id, &ty)| ElementEntry { id: id.clone(), ty })
                .collect(),
            incidences: self
                .incidence_pairs()
                .into_iter()
                .map(|(a, b)| [self.ids[a].clone(), self.ids[b].clone()])
                .collect(),
        };
        serde_json::to_string(&file).expect("geometry serializes")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, x: usize) -> &str {
        &self.ids[x]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn type_of(&self, x: usize) -> usize {
        self.types[x]
    }

    pub fn types(&self) -> &[usize] {
        &self.types
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.adj[x]
    }

    pub fn incident(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn elements_of_type(&self, t: usize) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.types[x] == t).collect()
    }

    /// Number of elements of each type, index `t - 1` for type `t`.
    pub fn type_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.rank];
        for &t in &self.types {
            c[t - 1] += 1;
        }
        c
    }

    /// Incident pairs `(a, b)` with `a < b`.
    pub fn incidence_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, n) in self.adj.iter().enumerate() {
            out.extend(n.iter().filter(|&&b| b > a).map(|&b| (a, b)));
        }
        out
    }

    pub fn incidence_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Elements of type `t` incident to `x`.
    pub fn neighbors_of_type(&self, x: usize, t: usize) -> Vec<usize> {
        self.adj[x].iter().copied().filter(|&y| self.types[y] == t).collect()
    }

    pub fn is_flag(&self, flag: &[usize]) -> bool {
        flag.iter().all(|&x| x < self.len())
            && flag
                .iter()
                .enumerate()
                .all(|(i, &a)| flag[i + 1..].iter().all(|&b| a != b && self.incident(a, b)))
    }

    pub fn flag_from_ids(&self, ids: &[&str]) -> Result<Vec<usize>, GeomError> {
        let mut flag = ids
            .iter()
            .map(|id| {
                self.index_of(id)
                    .ok_or_else(|| GeomError::NotFlag(format!("unknown id {id:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        flag.sort_unstable();
        if !self.is_flag(&flag) {
            return Err(GeomError::NotFlag(format!("{ids:?} is not pairwise incident")));
        }
        Ok(flag)
    }

    /// Elements incident to every member of `flag` (and not in it), sorted.
    pub fn residue_elements(&self, flag: &[usize]) -> Vec<usize> {
        match flag.split_first() {
            None => (0..self.len()).collect(),
            Some((&first, rest)) => {
                let mut r = self.adj[first].clone();
                for &x in rest {
                    r = intersect_sorted(&r, &self.adj[x]);
                }
                r
            }
        }
    }

    /// Visits every flag of size at most `max_size` together with its residue
    /// elements, flags as increasing index lists in lexicographic order.
    pub fn for_each_flag<F: FnMut(&[usize], &[usize])>(&self, max_size: usize, mut f: F) {
        let all: Vec<usize> = (0..self.len()).collect();
        let mut flag = Vec::new();
        self.flag_dfs(&mut flag, &all, max_size, &mut f);
    }

    fn flag_dfs<F: FnMut(&[usize], &[usize])>(&self, flag: &mut Vec<usize>, res: &[usize], max_size: usize, f: &mut F) {
        f(flag, res);
        if flag.len() == max_size {
            return;
        }
        let last = flag.last().copied();
        for &x in res {
            if last.is_some_and(|l| x <= l) {
                continue;
            }
            let next = intersect_sorted(res, &self.adj[x]);
            flag.push(x);
            self.flag_dfs(flag, &next, max_size, f);
            flag.pop();
        }
    }

    /// The geometry induced on `elements` with types renumbered in increasing order.
    pub fn induced(&self, elements: &[usize]) -> Subgeometry {
        let mut used: Vec<usize> = elements.iter().map(|&x| self.types[x]).collect();
        used.sort_unstable();
        used.dedup();
        self.induced_with_types(elements, used)
    }

    fn induced_with_types(&self, elements: &[usize], type_map: Vec<usize>) -> Subgeometry {
        let mut new_type = vec![0; self.rank + 1];
        for (k, &t) in type_map.iter().enumerate() {
            new_type[t] = k + 1;
        }
        let pos: HashMap<usize, usize> = elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut pairs = Vec::new();
        for (i, &x) in elements.iter().enumerate() {
            for y in &self.adj[x] {
                if let Some(&j) = pos.get(y) {
                    if i < j {
                        pairs.push((i, j));
                    }
                }
            }
        }
        let geometry = Geometry::from_parts(
            type_map.len(),
            elements.iter().map(|&x| self.ids[x].clone()).collect(),
            elements.iter().map(|&x| new_type[self.types[x]]).collect(),
            &pairs,
        )
        .expect("induced subsystem of a valid geometry");
        Subgeometry {
            geometry,
            elements: elements.to_vec(),
            type_map,
        }
    }

    /// The residue of `flag`: rank `n - |flag|`, types renumbered order-preservingly.
    pub fn residue(&self, flag: &[usize]) -> Result<Subgeometry, GeomError> {
        let mut flag = flag.to_vec();
        flag.sort_unstable();
        if !self.is_flag(&flag) {
            return Err(GeomError::NotFlag(format!("{flag:?}")));
        }
        let used: Vec<usize> = flag.iter().map(|&x| self.types[x]).collect();
        let type_map: Vec<usize> = (1..=self.rank).filter(|t| !used.contains(t)).collect();
        Ok(self.induced_with_types(&self.residue_elements(&flag), type_map))
    }

    /// The system induced on elements whose type lies in `keep`.
    pub fn truncation(&self, keep: &[usize]) -> Result<Subgeometry, GeomError> {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() {
            return Err(GeomError::Argument("truncation needs at least one type".into()));
        }
        if let Some(&t) = keep.iter().find(|&&t| t == 0 || t > self.rank) {
            return Err(GeomError::Argument(format!("type {t} outside 1..{}", self.rank)));
        }
        let elements: Vec<usize> = (0..self.len()).filter(|&x| keep.contains(&self.types[x])).collect();
        Ok(self.induced_with_types(&elements, keep))
    }

    /// Same elements and incidence with types permuted: old type `t` becomes `perm[t - 1]`.
    pub fn retyped(&self, perm: &[usize]) -> Result<Geometry, GeomError> {
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if sorted != (1..=self.rank).collect::<Vec<_>>() {
            return Err(GeomError::Argument(format!("{perm:?} is not a type permutation")));
        }
        let mut g = self.clone();
        for t in &mut g.types {
            *t = perm[*t - 1];
        }
        Ok(g)
    }

    /// Elements of type `vt` adjacent when incident to a common element of type `via`.
    fn shadow_graph(&self, vt: usize, via: usize) -> Graph {
        let verts = self.elements_of_type(vt);
        let pos: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut edges = Vec::new();
        for l in self.elements_of_type(via) {
            let on: Vec<usize> = self.adj[l].iter().filter_map(|y| pos.get(y).copied()).collect();
            for i in 0..on.len() {
                for j in i + 1..on.len() {
                    edges.push((on[i], on[j]));
                }
            }
        }
        Graph::new(verts.len(), &edges)
            .expect("shadow graph")
            .with_origin(verts)
    }

    /// Type-1 elements, adjacent when on a common type-2 element.
    pub fn collinearity_graph(&self) -> Result<Graph, GeomError> {
        if self.rank < 2 {
            return Err(GeomError::Rank("collinearity graph needs rank at least 2".into()));
        }
        Ok(self.shadow_graph(1, 2))
    }

    /// Type-n elements, adjacent when on a common type-(n-1) element.
    pub fn derived_graph(&self) -> Result<Graph, GeomError> {
        if self.rank < 2 {
            return Err(GeomError::Rank("derived graph needs rank at least 2".into()));
        }
        Ok(self.shadow_graph(self.rank, self.rank - 1))
    }

    /// Disjoint union of two geometries of equal rank; ids of `other` get a `'` suffix.
    pub fn disjoint_union(&self, other: &Geometry) -> Result<Geometry, GeomError> {
        if self.rank != other.rank {
            return Err(GeomError::Argument("ranks differ".into()));
        }
        let n = self.len();
        let mut ids = self.ids.clone();
        ids.extend(other.ids.iter().map(|s| format!("{s}'")));
        let mut types = self.types.clone();
        types.extend_from_slice(&other.types);
        let mut pairs = self.incidence_pairs();
        pairs.extend(other.incidence_pairs().into_iter().map(|(a, b)| (a + n, b + n)));
        Geometry::from_parts(self.rank, ids, types, &pairs)
    }
}

pub(crate) fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
