use std::collections::HashSet;

use super::{check_action, GeomError, Geometry};
use crate::perm::GroupAction;

/// A type- and incidence-preserving map of elements, by index.
#[derive(Clone, Debug)]
pub struct GeometryMorphism {
    source: Geometry,
    target: Geometry,
    map: Vec<usize>,
}

impl GeometryMorphism {
    pub fn new(source: Geometry, target: Geometry, map: Vec<usize>) -> Result<Self, GeomError> {
        if map.len() != source.len() {
            return Err(GeomError::Morphism(format!(
                "map has {} entries for {} elements",
                map.len(),
                source.len()
            )));
        }
        if source.rank() != target.rank() {
            return Err(GeomError::Morphism("ranks differ".into()));
        }
        for (x, &y) in map.iter().enumerate() {
            if y >= target.len() {
                return Err(GeomError::Morphism(format!("image {y} out of range")));
            }
            if source.type_of(x) != target.type_of(y) {
                return Err(GeomError::Morphism(format!("{:?} changes type", source.id(x))));
            }
        }
        for (x, y) in source.incidence_pairs() {
            if !target.incident(map[x], map[y]) {
                return Err(GeomError::Morphism(format!(
                    "incidence {:?} ~ {:?} is not preserved",
                    source.id(x),
                    source.id(y)
                )));
            }
        }
        Ok(GeometryMorphism { source, target, map })
    }

    pub fn identity(g: &Geometry) -> Self {
        GeometryMorphism {
            source: g.clone(),
            target: g.clone(),
            map: (0..g.len()).collect(),
        }
    }

    pub fn source(&self) -> &Geometry {
        &self.source
    }

    pub fn target(&self) -> &Geometry {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_surjective(&self) -> bool {
        let hit: HashSet<usize> = self.map.iter().copied().collect();
        hit.len() == self.target.len()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GeometryMorphism) -> Result<GeometryMorphism, GeomError> {
        if next.source != self.target {
            return Err(GeomError::Morphism("composition across different geometries".into()));
        }
        Ok(GeometryMorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            map: self.map.iter().map(|&y| next.map[y]).collect(),
        })
    }
}

/// Quotient by the orbits of `n`: two orbits are incident when some of their
/// representatives are. The quotient is not re-validated as a geometry.
pub fn quotient_by_action(g: &Geometry, n: &GroupAction<usize>) -> Result<(Geometry, GeometryMorphism), GeomError> {
    check_action(g, n)?;
    let mut orbit_of = vec![usize::MAX; g.len()];
    let mut reps = Vec::new();
    for x in 0..g.len() {
        if orbit_of[x] == usize::MAX {
            for y in n.orbit_of_index(x) {
                orbit_of[y] = reps.len();
            }
            reps.push(x);
        }
    }
    let mut pairs: Vec<(usize, usize)> = g
        .incidence_pairs()
        .into_iter()
        .map(|(a, b)| (orbit_of[a], orbit_of[b]))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    let same_type = pairs
        .iter()
        .find(|&&(a, b)| a == b || g.type_of(reps[a]) == g.type_of(reps[b]));
    if let Some(&(a, _)) = same_type {
        return Err(GeomError::Action(format!(
            "orbit of {:?} becomes incident to itself or its own type",
            g.id(reps[a])
        )));
    }
    let q = Geometry::from_parts(
        g.rank(),
        reps.iter().map(|&x| g.id(x).to_string()).collect(),
        reps.iter().map(|&x| g.type_of(x)).collect(),
        &pairs,
    )?;
    let f = GeometryMorphism::new(g.clone(), q.clone(), orbit_of)?;
    Ok((q, f))
}

/// Whether `f` is surjective and an isomorphism on every residue of rank at
/// most `s`. With `s = rank - 1` this is the covering test.
pub fn is_s_covering(f: &GeometryMorphism, s: usize) -> Result<bool, GeomError> {
    let g = f.source();
    let h = f.target();
    let n = g.rank();
    if s < 1 || s >= n {
        return Err(GeomError::Argument(format!(
            "s = {s} outside 1..{}",
            n.saturating_sub(1)
        )));
    }
    if !f.is_surjective() {
        return Ok(false);
    }
    let map = f.map();
    let min_size = n - s;
    let mut ok = true;
    g.for_each_flag(n - 1, |flag, res| {
        if !ok || flag.len() < min_size {
            return;
        }
        let image: Vec<usize> = flag.iter().map(|&x| map[x]).collect();
        let mut sorted = image.clone();
        sorted.sort_unstable();
        let target_res = h.residue_elements(&sorted);
        if target_res.len() != res.len() {
            ok = false;
            return;
        }
        let imgs: HashSet<usize> = res.iter().map(|&x| map[x]).collect();
        if imgs.len() != res.len() {
            ok = false;
            return;
        }
        // incidence must be reflected as well as preserved
        for (i, &x) in res.iter().enumerate() {
            for &y in &res[i + 1..] {
                if h.incident(map[x], map[y]) != g.incident(x, y) {
                    ok = false;
                    return;
                }
            }
        }
    });
    Ok(ok)
}
