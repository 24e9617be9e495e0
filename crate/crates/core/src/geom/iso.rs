use std::collections::HashMap;

use super::{GeomError, Geometry};

pub const DEFAULT_ISO_LIMIT: usize = 500;

/// Search nodes allowed before giving up with a capacity error.
const NODE_BUDGET: usize = 200_000;

/// A type- and incidence-preserving bijection `a -> b` (as an index map), if
/// one exists. Both geometries must have at most [`DEFAULT_ISO_LIMIT`] elements.
pub fn isomorphic(a: &Geometry, b: &Geometry) -> Result<Option<Vec<usize>>, GeomError> {
    isomorphic_with_limit(a, b, DEFAULT_ISO_LIMIT)
}

pub fn isomorphic_with_limit(a: &Geometry, b: &Geometry, limit: usize) -> Result<Option<Vec<usize>>, GeomError> {
    for g in [a, b] {
        if g.len() > limit {
            return Err(GeomError::Capacity {
                what: "isomorphism test".into(),
                size: g.len(),
                bound: limit,
            });
        }
    }
    if a.rank() != b.rank() || a.type_counts() != b.type_counts() || a.incidence_count() != b.incidence_count() {
        return Ok(None);
    }
    let n = a.len();
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let mut adj: Vec<Vec<usize>> = Vec::with_capacity(2 * n);
    adj.extend((0..n).map(|x| a.neighbors(x).to_vec()));
    adj.extend((0..n).map(|x| b.neighbors(x).iter().map(|y| y + n).collect()));
    let mut colors: Vec<u32> = a.types().iter().chain(b.types()).map(|&t| t as u32).collect();
    refine(&adj, &mut colors);
    let mut search = Search {
        a,
        b,
        adj: &adj,
        n,
        nodes: 0,
    };
    search.run(colors)
}

struct Search<'a> {
    a: &'a Geometry,
    b: &'a Geometry,
    adj: &'a [Vec<usize>],
    n: usize,
    nodes: usize,
}

impl Search<'_> {
    fn run(&mut self, colors: Vec<u32>) -> Result<Option<Vec<usize>>, GeomError> {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return Err(GeomError::Capacity {
                what: "isomorphism search nodes".into(),
                size: self.nodes,
                bound: NODE_BUDGET,
            });
        }
        let n = self.n;
        let classes = color_classes(&colors, n);
        if classes.values().any(|(xa, xb)| xa.len() != xb.len()) {
            return Ok(None);
        }
        let target = classes
            .iter()
            .filter(|(_, (xa, _))| xa.len() > 1)
            .min_by_key(|(&c, (xa, _))| (xa.len(), c));
        let Some((_, (xa, xb))) = target else {
            let mut map = vec![0; n];
            for (xa, xb) in classes.values() {
                map[xa[0]] = xb[0] - n;
            }
            return Ok(self.verify(&map).then_some(map));
        };
        let v = xa[0];
        let fresh = colors.iter().max().copied().unwrap_or(0) + 1;
        for &w in xb {
            let mut c = colors.clone();
            c[v] = fresh;
            c[w] = fresh;
            refine(self.adj, &mut c);
            if let Some(map) = self.run(c)? {
                return Ok(Some(map));
            }
        }
        Ok(None)
    }

    fn verify(&self, map: &[usize]) -> bool {
        (0..self.n).all(|x| {
            self.a.type_of(x) == self.b.type_of(map[x])
                && self.a.neighbors(x).iter().all(|&y| self.b.incident(map[x], map[y]))
        })
    }
}

fn color_classes(colors: &[u32], n: usize) -> HashMap<u32, (Vec<usize>, Vec<usize>)> {
    let mut classes: HashMap<u32, (Vec<usize>, Vec<usize>)> = HashMap::new();
    for (v, &c) in colors.iter().enumerate() {
        let e = classes.entry(c).or_default();
        if v < n {
            e.0.push(v);
        } else {
            e.1.push(v);
        }
    }
    classes
}

/// Colour refinement to the coarsest equitable partition. New colours are the
/// ranks of the sorted distinct signatures, so they depend only on the
/// isomorphism type of the coloured graph.
pub(crate) fn refine(adj: &[Vec<usize>], colors: &mut [u32]) {
    let mut count = distinct(colors);
    loop {
        let sigs: Vec<(u32, Vec<u32>)> = (0..adj.len())
            .map(|v| {
                let mut s: Vec<u32> = adj[v].iter().map(|&w| colors[w]).collect();
                s.sort_unstable();
                (colors[v], s)
            })
            .collect();
        let mut uniq: Vec<&(u32, Vec<u32>)> = sigs.iter().collect();
        uniq.sort();
        uniq.dedup();
        let rank: HashMap<&(u32, Vec<u32>), u32> = uniq.iter().enumerate().map(|(i, s)| (*s, i as u32)).collect();
        for (v, s) in sigs.iter().enumerate() {
            colors[v] = rank[s];
        }
        if uniq.len() == count {
            return;
        }
        count = uniq.len();
    }
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}
