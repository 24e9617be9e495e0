//! Simple undirected graphs with sorted adjacency lists.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("loop at vertex {0}")]
    Loop(usize),
}

/// A simple graph. `origin[v]` records where vertex `v` came from (for
/// example the element index in a geometry); it is the identity for graphs
/// built directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    origin: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    vertices: usize,
    edges: Vec<[usize; 2]>,
}

impl Graph {
    /// Builds a graph from an edge list; repeated edges are merged.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v));
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        Ok(Graph {
            adj,
            origin: (0..n).collect(),
        })
    }

    pub fn with_origin(mut self, origin: Vec<usize>) -> Self {
        assert_eq!(origin.len(), self.adj.len());
        self.origin = origin;
        self
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).expect("cycle")
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Graph::new(n, &edges).expect("complete graph")
    }

    /// Kneser graph K(5,2): 2-subsets of {0..4}, adjacent when disjoint.
    pub fn petersen() -> Self {
        let verts = crate::build::two_subsets(5);
        let mut edges = Vec::new();
        for i in 0..verts.len() {
            for j in i + 1..verts.len() {
                let (a, b) = (verts[i], verts[j]);
                if a.0 != b.0 && a.0 != b.1 && a.1 != b.0 && a.1 != b.1 {
                    edges.push((i, j));
                }
            }
        }
        Graph::new(verts.len(), &edges).expect("petersen")
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn origin(&self) -> &[usize] {
        &self.origin
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, a) in self.adj.iter().enumerate() {
            for &v in a {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// The common degree, if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|a| a.len() == d).then_some(d)
    }

    /// Breadth-first distances from `root`; `usize::MAX` marks unreachable vertices.
    pub fn distances(&self, root: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Vertices at distance at most `radius` from `root`, sorted.
    pub fn ball(&self, root: usize, radius: usize) -> Vec<usize> {
        self.distances(root)
            .iter()
            .enumerate()
            .filter(|&(_, &d)| d <= radius)
            .map(|(v, _)| v)
            .collect()
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// The subgraph induced on `vertices` (taken in the given order); origins carry over.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let pos: std::collections::HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for w in &self.adj[v] {
                if let Some(&j) = pos.get(w) {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
        Graph::new(vertices.len(), &edges)
            .expect("induced subgraph")
            .with_origin(vertices.iter().map(|&v| self.origin[v]).collect())
    }

    /// All 3-cliques `[a, b, c]` with `a < b < c`, sorted.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for (a, b) in self.edges() {
            for &c in &self.adj[b] {
                if c > b && self.is_adjacent(a, c) {
                    out.push([a, b, c]);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let file: GraphFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let edges: Vec<(usize, usize)> = file.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::new(file.vertices, &edges).map_err(|e| e.to_string())
    }

    pub fn to_json(&self) -> String {
        let file = GraphFile {
            vertices: self.len(),
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        };
        serde_json::to_string(&file).expect("graph serializes")
    }
}
