use std::collections::{HashMap, VecDeque};
use std::hash::Hash;
use std::sync::OnceLock;

use super::{PermError, Permutation, PermutationGroup};

/// A permutation group acting on a finite, sorted domain of labels.
///
/// `images[k]` is the permutation of domain indices induced by generator `k`.
#[derive(Clone, Debug)]
pub struct GroupAction<L> {
    group: PermutationGroup,
    domain: Vec<L>,
    images: Vec<Permutation>,
    image_group: OnceLock<PermutationGroup>,
}

impl GroupAction<usize> {
    /// The defining action of `group` on its points.
    pub fn natural(group: &PermutationGroup) -> Self {
        GroupAction {
            group: group.clone(),
            domain: (0..group.degree()).collect(),
            images: group.generators().to_vec(),
            image_group: OnceLock::new(),
        }
    }
}

impl<L: Ord + Clone> GroupAction<L> {
    /// Assembles an action from precomputed generator images. `domain` must be sorted.
    pub fn from_images(group: PermutationGroup, domain: Vec<L>, images: Vec<Permutation>) -> Result<Self, PermError> {
        if images.len() != group.generators().len() {
            return Err(PermError::ActionArity {
                generators: group.generators().len(),
                images: images.len(),
            });
        }
        if domain.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PermError::UnsortedDomain);
        }
        if let Some(p) = images.iter().find(|p| p.degree() != domain.len()) {
            return Err(PermError::DegreeMismatch {
                expected: domain.len(),
                found: p.degree(),
            });
        }
        Ok(GroupAction {
            group,
            domain,
            images,
            image_group: OnceLock::new(),
        })
    }

    pub fn group(&self) -> &PermutationGroup {
        &self.group
    }

    pub fn domain(&self) -> &[L] {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn images(&self) -> &[Permutation] {
        &self.images
    }

    pub fn index_of(&self, label: &L) -> Option<usize> {
        self.domain.binary_search(label).ok()
    }

    /// The group generated by the generator images, acting on domain indices.
    pub fn image_group(&self) -> &PermutationGroup {
        self.image_group.get_or_init(|| {
            PermutationGroup::new(self.domain.len().max(1), self.images.clone())
                .expect("images share the domain degree")
        })
    }

    /// Orbit of a domain index, sorted.
    pub fn orbit_of_index(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.domain.len()];
        seen[start] = true;
        let mut out = vec![start];
        let mut head = 0;
        while head < out.len() {
            let x = out[head];
            for p in &self.images {
                let y = p.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            head += 1;
        }
        out.sort_unstable();
        out
    }

    /// Same domain, with a different group and its generator images.
    pub fn with_generator_images(&self, group: PermutationGroup, images: Vec<Permutation>) -> Result<Self, PermError> {
        GroupAction::from_images(group, self.domain.clone(), images)
    }
}

/// Orbit of `seed` under the action; the result is closed under every
/// generator image, contains `seed`, and is sorted.
pub fn orbit<L: Ord + Clone>(action: &GroupAction<L>, seed: &L) -> Result<Vec<L>, PermError> {
    let idx = action.index_of(seed).ok_or(PermError::OutsideDomain)?;
    Ok(action
        .orbit_of_index(idx)
        .into_iter()
        .map(|i| action.domain[i].clone())
        .collect())
}

/// Describes a derived domain and how a point permutation acts on it.
pub trait ActionRule {
    type Label: Ord + Clone + Hash;

    /// The domain; must be closed under the group.
    fn domain(&self, group: &PermutationGroup) -> Vec<Self::Label>;

    fn act(&self, g: &Permutation, x: &Self::Label) -> Self::Label;
}

/// Domain = closure of the seed labels under the group.
pub struct Closure<L, F> {
    pub seeds: Vec<L>,
    pub act: F,
}

impl<L, F> ActionRule for Closure<L, F>
where
    L: Ord + Clone + Hash,
    F: Fn(&Permutation, &L) -> L,
{
    type Label = L;

    fn domain(&self, group: &PermutationGroup) -> Vec<L> {
        orbit_closure(group, self.seeds.clone(), &self.act)
    }

    fn act(&self, g: &Permutation, x: &L) -> L {
        (self.act)(g, x)
    }
}

/// A fixed domain; `induced_action` reports an error if it is not invariant.
pub struct FixedDomain<L, F> {
    pub domain: Vec<L>,
    pub act: F,
}

impl<L, F> ActionRule for FixedDomain<L, F>
where
    L: Ord + Clone + Hash,
    F: Fn(&Permutation, &L) -> L,
{
    type Label = L;

    fn domain(&self, _group: &PermutationGroup) -> Vec<L> {
        let mut d = self.domain.clone();
        d.sort();
        d.dedup();
        d
    }

    fn act(&self, g: &Permutation, x: &L) -> L {
        (self.act)(g, x)
    }
}

/// Union of the orbits of `seeds`, sorted.
pub fn orbit_closure<L, F>(group: &PermutationGroup, seeds: Vec<L>, act: F) -> Vec<L>
where
    L: Ord + Clone + Hash,
    F: Fn(&Permutation, &L) -> L,
{
    let mut seen: std::collections::HashSet<L> = seeds.iter().cloned().collect();
    let mut queue: VecDeque<L> = seeds.into_iter().collect();
    let mut out = Vec::new();
    while let Some(x) = queue.pop_front() {
        for g in group.generators() {
            let y = act(g, &x);
            if !seen.contains(&y) {
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
        out.push(x);
    }
    out.sort();
    out.dedup();
    out
}

/// Lifts the action of `group` to the domain described by `rule`.
pub fn induced_action<R: ActionRule>(group: &PermutationGroup, rule: &R) -> Result<GroupAction<R::Label>, PermError> {
    let domain = rule.domain(group);
    let index: HashMap<&R::Label, usize> = domain.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut images = Vec::with_capacity(group.generators().len());
    for (k, g) in group.generators().iter().enumerate() {
        let mut img = Vec::with_capacity(domain.len());
        for x in &domain {
            let y = rule.act(g, x);
            match index.get(&y) {
                Some(&j) => img.push(j),
                None => return Err(PermError::NotClosed { generator: k }),
            }
        }
        images.push(Permutation::from_images(img).map_err(|_| PermError::NotClosed { generator: k })?);
    }
    // spot-check the homomorphism property on pairs of generators
    let gens = group.generators();
    for a in 0..gens.len().min(4) {
        for b in 0..gens.len().min(4) {
            let prod = gens[a].then(&gens[b]);
            for x in domain.iter().take(8) {
                let lhs = rule.act(&prod, x);
                let rhs = rule.act(&gens[b], &rule.act(&gens[a], x));
                if lhs != rhs {
                    return Err(PermError::NotHomomorphism);
                }
            }
        }
    }
    GroupAction::from_images(group.clone(), domain, images)
}

/// Acts on a sorted set of points elementwise, returning the sorted image.
pub fn act_on_set(g: &Permutation, set: &Vec<usize>) -> Vec<usize> {
    let mut out: Vec<usize> = set.iter().map(|&x| g.apply(x)).collect();
    out.sort_unstable();
    out
}
