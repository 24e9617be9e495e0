use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{PermError, Permutation, StabChain};

/// A finitely generated permutation group with a lazily built stabilizer chain.
#[derive(Clone, Debug)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabChain>,
}

impl PermutationGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermError> {
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
        let generators = if generators.is_empty() {
            vec![Permutation::identity(degree)]
        } else {
            generators
        };
        Ok(PermutationGroup {
            degree,
            generators,
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new(degree, Vec::new()).expect("positive degree")
    }

    /// Symmetric group on `degree` points, generated by an n-cycle and a transposition.
    pub fn symmetric(degree: usize) -> Self {
        if degree < 2 {
            return Self::trivial(degree.max(1));
        }
        let cycle: Vec<usize> = (0..degree).map(|i| (i + 1) % degree).collect();
        let mut swap: Vec<usize> = (0..degree).collect();
        swap.swap(0, 1);
        Self::new(
            degree,
            vec![
                Permutation::from_images(cycle).unwrap(),
                Permutation::from_images(swap).unwrap(),
            ],
        )
        .unwrap()
    }

    /// Alternating group, generated by 3-cycles `(0 1 k)`.
    pub fn alternating(degree: usize) -> Self {
        if degree < 3 {
            return Self::trivial(degree.max(1));
        }
        let gens = (2..degree)
            .map(|k| Permutation::from_cycles(degree, &[&[0, 1, k]]).unwrap())
            .collect();
        Self::new(degree, gens).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        self.chain.get_or_init(|| StabChain::new(self.degree, &self.generators))
    }

    /// Group order from the stabilizer chain (cached).
    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain().contains(g)
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(Permutation::is_identity)
    }

    pub fn is_subgroup_of(&self, other: &PermutationGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    /// True when conjugating every generator of `self` by every generator of
    /// `ambient` stays inside `self`.
    pub fn is_normal_in(&self, ambient: &PermutationGroup) -> bool {
        ambient
            .generators
            .iter()
            .all(|a| self.generators.iter().all(|g| self.contains(&g.conjugate_by(a))))
    }

    /// Orbit of a point under the generators, in discovery order.
    pub fn point_orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut orbit = vec![point];
        seen[point] = true;
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            head += 1;
        }
        orbit
    }

    /// All orbits, each sorted, listed by smallest element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree {
            if seen[p] {
                continue;
            }
            let mut orb = self.point_orbit(p);
            for &x in &orb {
                seen[x] = true;
            }
            orb.sort_unstable();
            out.push(orb);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.point_orbit(0).len() == self.degree
    }

    /// Plain closure enumeration. Returns `None` once more than `limit` elements appear.
    pub fn enumerate_bounded(&self, limit: usize) -> Option<Vec<Permutation>> {
        let mut seen = std::collections::HashSet::new();
        let id = Permutation::identity(self.degree);
        seen.insert(id.clone());
        let mut elems = vec![id];
        let mut head = 0;
        while head < elems.len() {
            let x = elems[head].clone();
            for g in &self.generators {
                let y = x.then(g);
                if seen.insert(y.clone()) {
                    elems.push(y);
                    if elems.len() > limit {
                        return None;
                    }
                }
            }
            head += 1;
        }
        Some(elems)
    }

    /// Smallest normal subgroup of `self` containing `gens`.
    pub fn normal_closure(&self, gens: &[Permutation]) -> PermutationGroup {
        let mut current: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        if current.is_empty() {
            return PermutationGroup::trivial(self.degree);
        }
        let mut group = PermutationGroup::new(self.degree, current.clone()).unwrap();
        let mut k = 0;
        while k < current.len() {
            let g = current[k].clone();
            for a in &self.generators {
                let c = g.conjugate_by(a);
                if !group.contains(&c) {
                    current.push(c);
                    group = PermutationGroup::new(self.degree, current.clone()).unwrap();
                }
            }
            k += 1;
        }
        group
    }

    /// Restricts the group to an invariant subset of points.
    pub fn restrict(&self, points: &[usize]) -> Result<PermutationGroup, PermError> {
        let mut index = vec![usize::MAX; self.degree];
        for (i, &p) in points.iter().enumerate() {
            index[p] = i;
        }
        let mut gens = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let mut images = Vec::with_capacity(points.len());
            for &p in points {
                let q = index[g.apply(p)];
                if q == usize::MAX {
                    return Err(PermError::NotInvariant);
                }
                images.push(q);
            }
            gens.push(Permutation::from_images(images)?);
        }
        PermutationGroup::new(points.len().max(1), gens)
    }
}

/// On-disk group description.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_order: Option<u128>,
}

impl GroupFile {
    pub fn from_group(group: &PermutationGroup, name: Option<String>) -> Self {
        GroupFile {
            degree: group.degree(),
            generators: group.generators().iter().map(|g| g.images().collect()).collect(),
            name,
            expected_order: Some(group.order()),
        }
    }

    /// Parses the generators and checks `expected_order` when present.
    pub fn load(&self) -> Result<PermutationGroup, PermError> {
        let mut gens = Vec::with_capacity(self.generators.len());
        for images in &self.generators {
            if images.len() != self.degree {
                return Err(PermError::DegreeMismatch {
                    expected: self.degree,
                    found: images.len(),
                });
            }
            gens.push(Permutation::from_images(images.clone())?);
        }
        let group = PermutationGroup::new(self.degree, gens)?;
        if let Some(expected) = self.expected_order {
            let found = group.order();
            if found != expected {
                return Err(PermError::OrderMismatch { expected, found });
            }
        }
        Ok(group)
    }
}

pub fn load_group_json(text: &str) -> Result<PermutationGroup, PermError> {
    let file: GroupFile = serde_json::from_str(text).map_err(|e| PermError::Parse(e.to_string()))?;
    file.load()
}
