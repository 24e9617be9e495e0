use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{todd_coxeter, CoverError, EnumerationStatus, Presentation};
use crate::geom::Geometry;
use crate::gf2::MatrixGFp;
use crate::graph::Graph;

/// A simple graph with some of its 3-cliques chosen as 2-cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleComplex {
    graph: Graph,
    triangles: Vec<[usize; 3]>,
}

#[derive(Serialize, Deserialize)]
struct ComplexFile {
    vertices: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default)]
    triangles: Vec<[usize; 3]>,
}

impl TriangleComplex {
    /// Triangles are normalized to increasing order and deduplicated.
    pub fn new(graph: Graph, triangles: Vec<[usize; 3]>) -> Result<Self, CoverError> {
        let mut tris = Vec::with_capacity(triangles.len());
        for mut t in triangles {
            t.sort_unstable();
            if t[2] >= graph.len() {
                return Err(CoverError::Complex(format!("triangle {t:?} has a vertex out of range")));
            }
            if !(graph.is_adjacent(t[0], t[1]) && graph.is_adjacent(t[1], t[2]) && graph.is_adjacent(t[0], t[2])) {
                return Err(CoverError::Complex(format!("triangle {t:?} is not a clique")));
            }
            tris.push(t);
        }
        tris.sort_unstable();
        tris.dedup();
        Ok(TriangleComplex { graph, triangles: tris })
    }

    pub fn from_graph(graph: Graph) -> Self {
        TriangleComplex {
            graph,
            triangles: Vec::new(),
        }
    }

    /// Every 3-clique of the graph is a 2-cell.
    pub fn clique_complex(graph: Graph) -> Self {
        let triangles = graph.triangles();
        TriangleComplex { graph, triangles }
    }

    /// The collinearity graph with the 3-subsets of each line as 2-cells.
    pub fn collinearity(g: &Geometry) -> Result<Self, CoverError> {
        let graph = g
            .collinearity_graph()
            .map_err(|e| CoverError::Argument(e.to_string()))?;
        let pos: HashMap<usize, usize> = graph.origin().iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut triangles = Vec::new();
        for l in g.elements_of_type(2) {
            let pts: Vec<usize> = g.neighbors_of_type(l, 1).iter().map(|p| pos[p]).collect();
            for a in 0..pts.len() {
                for b in a + 1..pts.len() {
                    for c in b + 1..pts.len() {
                        triangles.push([pts[a], pts[b], pts[c]]);
                    }
                }
            }
        }
        Self::new(graph, triangles)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn from_json(text: &str) -> Result<Self, CoverError> {
        let file: ComplexFile = serde_json::from_str(text).map_err(|e| CoverError::Parse(e.to_string()))?;
        let edges: Vec<(usize, usize)> = file.edges.iter().map(|e| (e[0], e[1])).collect();
        let graph = Graph::new(file.vertices, &edges).map_err(|e| CoverError::Complex(e.to_string()))?;
        Self::new(graph, file.triangles)
    }

    pub fn to_json(&self) -> String {
        let file = ComplexFile {
            vertices: self.graph.len(),
            edges: self.graph.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            triangles: self.triangles.clone(),
        };
        serde_json::to_string(&file).expect("complex serializes")
    }
}

/// For each edge `(u, v)` with `u < v`, the generator index it carries, or
/// `None` for spanning-tree edges.
struct EdgeLabels {
    presentation: Presentation,
    labels: HashMap<(usize, usize), Option<usize>>,
}

impl EdgeLabels {
    /// The letter for walking `u -> v`, if any.
    fn letter(&self, u: usize, v: usize) -> Option<usize> {
        if u < v {
            self.labels[&(u, v)].map(|g| 2 * g)
        } else {
            self.labels[&(v, u)].map(|g| 2 * g + 1)
        }
    }
}

fn label_edges(k: &TriangleComplex, base: usize) -> Result<EdgeLabels, CoverError> {
    let g = &k.graph;
    if base >= g.len() {
        return Err(CoverError::Argument(format!("basepoint {base} out of range")));
    }
    let mut parent = vec![usize::MAX; g.len()];
    parent[base] = base;
    let mut queue = VecDeque::from([base]);
    let mut seen = 1;
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if parent[v] == usize::MAX {
                parent[v] = u;
                seen += 1;
                queue.push_back(v);
            }
        }
    }
    if seen != g.len() {
        return Err(CoverError::Disconnected);
    }
    let mut labels = HashMap::new();
    let mut generators = Vec::new();
    for (u, v) in g.edges() {
        if parent[v] == u || parent[u] == v {
            labels.insert((u, v), None);
        } else {
            labels.insert((u, v), Some(generators.len()));
            generators.push(format!("x{}", generators.len()));
        }
    }
    let mut presentation = Presentation {
        generators,
        relators: Vec::new(),
        subgroup_words: Vec::new(),
    };
    let mut labelled = EdgeLabels {
        presentation: presentation.clone(),
        labels,
    };
    for &[a, b, c] in &k.triangles {
        let word: Vec<usize> = [(a, b), (b, c), (c, a)]
            .iter()
            .filter_map(|&(x, y)| labelled.letter(x, y))
            .collect();
        presentation.relators.push(presentation.format_word(&word));
    }
    labelled.presentation = presentation;
    Ok(labelled)
}

/// A presentation of the fundamental group: one generator `x0, x1, ...` per
/// edge outside a BFS spanning tree (in edge order), one relator per 2-cell.
pub fn pi1_presentation(k: &TriangleComplex, base: usize) -> Result<Presentation, CoverError> {
    Ok(label_edges(k, base)?.presentation)
}

/// dim H1(K; GF(p)) for p = 2 or 3.
pub fn homology_rank(k: &TriangleComplex, prime: u32) -> Result<usize, CoverError> {
    if prime != 2 && prime != 3 {
        return Err(CoverError::Argument(format!(
            "homology over GF({prime}) is not supported"
        )));
    }
    let edges = k.graph.edges();
    let index: HashMap<(usize, usize), usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let minus = (prime - 1) as u8;
    let rows: Vec<Vec<u8>> = k
        .triangles
        .iter()
        .map(|&[a, b, c]| {
            let mut row = vec![0u8; edges.len()];
            row[index[&(b, c)]] = 1;
            row[index[&(a, c)]] = minus;
            row[index[&(a, b)]] = 1;
            row
        })
        .collect();
    let boundary_rank = if rows.is_empty() {
        0
    } else {
        MatrixGFp::from_dense(prime, &rows, edges.len())
            .map_err(|e| CoverError::Argument(e.to_string()))?
            .rank()
    };
    let cycles = edges.len() + k.graph.components().len() - k.graph.len();
    Ok(cycles - boundary_rank)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Triangulability {
    Yes,
    No,
    Unknown,
}

/// Why the fundamental group is known to be nontrivial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    Homology { prime: u32, rank: usize },
    GroupOrder { order: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangulabilityReport {
    pub verdict: Triangulability,
    pub certificate: Option<Certificate>,
    pub generators: usize,
    pub relators: usize,
}

/// `yes` when the fundamental group enumerates to index 1 over the trivial
/// subgroup, `no` only with a certificate, `unknown` on overflow.
pub fn is_triangulable(k: &TriangleComplex, limit: usize) -> Result<TriangulabilityReport, CoverError> {
    let p = pi1_presentation(k, 0)?;
    let mut report = TriangulabilityReport {
        verdict: Triangulability::Unknown,
        certificate: None,
        generators: p.generators.len(),
        relators: p.relators.len(),
    };
    for prime in [2, 3] {
        let rank = homology_rank(k, prime)?;
        if rank > 0 {
            report.verdict = Triangulability::No;
            report.certificate = Some(Certificate::Homology { prime, rank });
            return Ok(report);
        }
    }
    match todd_coxeter(&p, limit)?.status {
        EnumerationStatus::Completed { index: 1 } => report.verdict = Triangulability::Yes,
        EnumerationStatus::Completed { index } => {
            report.verdict = Triangulability::No;
            report.certificate = Some(Certificate::GroupOrder { order: index });
        }
        EnumerationStatus::Overflow { .. } => {}
    }
    Ok(report)
}

/// A covering complex: vertex `sheet * n + v` lies over `v`.
#[derive(Clone, Debug)]
pub struct Cover {
    pub complex: TriangleComplex,
    pub projection: Vec<usize>,
    pub sheets: usize,
}

impl Cover {
    /// Whether the projection maps every neighborhood bijectively onto the
    /// neighborhood below and sends 2-cells to 2-cells.
    pub fn is_covering_of(&self, base: &TriangleComplex) -> bool {
        let g = self.complex.graph();
        if self.projection.len() != g.len() {
            return false;
        }
        let local = (0..g.len()).all(|x| {
            let mut below: Vec<usize> = g.neighbors(x).iter().map(|&y| self.projection[y]).collect();
            below.sort_unstable();
            below == base.graph().neighbors(self.projection[x])
        });
        let cells = self.complex.triangles().iter().all(|t| {
            let mut p = t.map(|x| self.projection[x]);
            p.sort_unstable();
            base.triangles().binary_search(&p).is_ok()
        });
        local && cells && self.complex.triangles().len() == self.sheets * base.triangles().len()
    }
}

/// The cover belonging to the subgroup of the fundamental group (at vertex
/// 0) generated by `subgroup_words`, written in the generators of
/// [`pi1_presentation`].
pub fn build_cover(k: &TriangleComplex, subgroup_words: &[String], limit: usize) -> Result<Cover, CoverError> {
    let labels = label_edges(k, 0)?;
    let mut p = labels.presentation.clone();
    p.subgroup_words = subgroup_words.to_vec();
    let outcome = todd_coxeter(&p, limit)?;
    let Some(table) = outcome.table else {
        return Err(CoverError::Overflow(limit));
    };
    let n = k.graph.len();
    let sheets = table.len();
    let step = |sheet: usize, u: usize, v: usize| labels.letter(u, v).map_or(sheet, |l| table.image(sheet, l));
    let mut edges = Vec::with_capacity(sheets * k.graph.edge_count());
    for (u, v) in k.graph.edges() {
        for s in 0..sheets {
            edges.push((s * n + u, step(s, u, v) * n + v));
        }
    }
    let mut triangles = Vec::with_capacity(sheets * k.triangles.len());
    for &[a, b, c] in &k.triangles {
        for s in 0..sheets {
            let sb = step(s, a, b);
            let sc = step(sb, b, c);
            debug_assert_eq!(step(sc, c, a), s);
            triangles.push([s * n + a, sb * n + b, sc * n + c]);
        }
    }
    let graph = Graph::new(sheets * n, &edges).map_err(|e| CoverError::Complex(e.to_string()))?;
    let complex = TriangleComplex::new(graph, triangles)?;
    Ok(Cover {
        complex,
        projection: (0..sheets * n).map(|x| x % n).collect(),
        sheets,
    })
}
