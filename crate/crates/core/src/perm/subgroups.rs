use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::chain::{StabChain, CHAIN_SEED};
use super::{PermError, Permutation, PermutationGroup};

pub const DEFAULT_NORMAL_BOUND: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilizerMode {
    Setwise,
    Pointwise,
}

/// Setwise or pointwise stabilizer of `points`.
pub fn stabilizer(
    group: &PermutationGroup,
    points: &[usize],
    mode: StabilizerMode,
) -> Result<PermutationGroup, PermError> {
    if let Some(&p) = points.iter().find(|&&p| p >= group.degree()) {
        return Err(PermError::PointOutOfRange(p));
    }
    if points.is_empty() {
        return Ok(group.clone());
    }
    match mode {
        StabilizerMode::Pointwise => {
            let mut prefix: Vec<usize> = Vec::new();
            for &p in points {
                if !prefix.contains(&p) {
                    prefix.push(p);
                }
            }
            let chain = StabChain::with_base_prefix(group.degree(), group.generators(), &prefix);
            let gens = chain.level_generators(prefix.len());
            PermutationGroup::new(group.degree(), gens)
        }
        StabilizerMode::Setwise => {
            let mut set = points.to_vec();
            set.sort_unstable();
            set.dedup();
            Ok(stabilizer_of_label(group, &set, |g, s: &Vec<usize>| {
                super::act_on_set(g, s)
            }))
        }
    }
}

/// Stabilizer of `x` under an arbitrary action of `group`, by random Schreier
/// generators until the order matches `|group| / |orbit|`.
pub fn stabilizer_of_label<L, F>(group: &PermutationGroup, x: &L, act: F) -> PermutationGroup
where
    L: Clone + Eq + Hash,
    F: Fn(&Permutation, &L) -> L,
{
    // Schreier tree: label -> (parent index, generator index)
    let mut index: HashMap<L, usize> = HashMap::new();
    let mut labels = vec![x.clone()];
    let mut parent: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX)];
    index.insert(x.clone(), 0);
    let mut head = 0;
    while head < labels.len() {
        let cur = labels[head].clone();
        for (k, g) in group.generators().iter().enumerate() {
            let y = act(g, &cur);
            if !index.contains_key(&y) {
                index.insert(y.clone(), labels.len());
                labels.push(y);
                parent.push((head, k));
            }
        }
        head += 1;
    }
    let orbit_len = labels.len() as u128;
    let target = group.order() / orbit_len;
    let degree = group.degree();
    if target == 1 {
        return PermutationGroup::trivial(degree);
    }
    let rep = |mut i: usize| -> Permutation {
        let mut word = Vec::new();
        while parent[i].0 != usize::MAX {
            word.push(parent[i].1);
            i = parent[i].0;
        }
        let mut u = Permutation::identity(degree);
        for &k in word.iter().rev() {
            u = u.then(&group.generators()[k]);
        }
        u
    };
    let mut rng = ChaCha8Rng::seed_from_u64(CHAIN_SEED ^ 0x57ab);
    let mut gens: Vec<Permutation> = Vec::new();
    let mut sub = PermutationGroup::trivial(degree);
    let chain = group.chain();
    while sub.order() < target {
        let g = chain.random_element(&mut rng);
        let y = act(&g, x);
        let i = index[&y];
        let h = g.then(&rep(i).inverse());
        if !h.is_identity() && !sub.contains(&h) {
            gens.push(h);
            sub = PermutationGroup::new(degree, gens.clone()).unwrap();
        }
    }
    sub
}

/// Minimal normal subgroups, as the inclusion-minimal normal closures of
/// prime-order elements. Groups above `bound` are rejected.
pub fn minimal_normal_subgroups(group: &PermutationGroup, bound: u128) -> Result<Vec<PermutationGroup>, PermError> {
    Ok(prime_order_normal_closures(group, bound)?
        .into_iter()
        .filter(|(_, minimal)| *minimal)
        .map(|(n, _)| n)
        .collect())
}

/// Every distinct normal closure of a prime-order element, each flagged with
/// whether it is minimal among them (equivalently, minimal normal in `group`).
pub fn prime_order_normal_closures(
    group: &PermutationGroup,
    bound: u128,
) -> Result<Vec<(PermutationGroup, bool)>, PermError> {
    let order = group.order();
    if order > bound {
        return Err(PermError::Capacity { order, bound });
    }
    if order == 1 {
        return Ok(Vec::new());
    }
    let mut processed: HashSet<Permutation> = HashSet::new();
    let mut closures: Vec<PermutationGroup> = Vec::new();
    let mut candidates: Vec<Permutation> = Vec::new();
    group.chain().for_each_element(|g| {
        let o = g.order();
        if o > 1 && is_prime(o) {
            candidates.push(g.clone());
        }
    });
    candidates.sort();
    for x in candidates {
        if processed.contains(&x) {
            continue;
        }
        // the conjugacy class of x yields the same closure
        let mut class = vec![x.clone()];
        processed.insert(x.clone());
        let mut head = 0;
        while head < class.len() {
            let y = class[head].clone();
            for a in group.generators() {
                let z = y.conjugate_by(a);
                if processed.insert(z.clone()) {
                    class.push(z);
                }
            }
            head += 1;
        }
        let n = group.normal_closure(&[x]);
        if !closures.iter().any(|c| same_group(c, &n)) {
            closures.push(n);
        }
    }
    closures.sort_by_key(|c| c.order());
    let flags: Vec<bool> = closures
        .iter()
        .map(|c| !closures.iter().any(|d| d.order() < c.order() && d.is_subgroup_of(c)))
        .collect();
    Ok(closures.into_iter().zip(flags).collect())
}

fn same_group(a: &PermutationGroup, b: &PermutationGroup) -> bool {
    a.order() == b.order() && a.is_subgroup_of(b)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// What a searched-for subgroup must satisfy.
#[derive(Clone, Debug)]
pub struct SubgroupPredicate {
    pub order: u128,
    /// Generators of a subgroup that must be contained (and, with
    /// `quotient_order`, normal).
    pub contains: Option<PermutationGroup>,
    pub quotient_order: Option<u128>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchLog {
    pub seed: u64,
    pub attempts: usize,
    pub pruned_by_element_order: usize,
    pub budget: usize,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub subgroup: Option<PermutationGroup>,
    pub log: SearchLog,
}

/// Random search for a subgroup `<required, a, b>` with `a, b` uniform random
/// elements, pruned when an element order fails to divide the target.
pub fn subgroup_search(
    group: &PermutationGroup,
    predicate: &SubgroupPredicate,
    seed: u64,
    budget: usize,
) -> Result<SearchOutcome, PermError> {
    let ambient = group.order();
    if predicate.order == 0 || ambient % predicate.order != 0 {
        return Err(PermError::BadPredicate("order target does not divide |group|".into()));
    }
    let required: Vec<Permutation> = match &predicate.contains {
        Some(h) => {
            if predicate.order % h.order() != 0 {
                return Err(PermError::BadPredicate(
                    "contained subgroup order does not divide target".into(),
                ));
            }
            h.generators().iter().filter(|g| !g.is_identity()).cloned().collect()
        }
        None => Vec::new(),
    };
    let mut log = SearchLog {
        seed,
        attempts: 0,
        pruned_by_element_order: 0,
        budget,
    };
    let accept = |h: &PermutationGroup| -> bool {
        if h.order() != predicate.order {
            return false;
        }
        if let Some(req) = &predicate.contains {
            if !req.is_subgroup_of(h) {
                return false;
            }
            if let Some(q) = predicate.quotient_order {
                if !req.is_normal_in(h) || h.order() / req.order() != q {
                    return false;
                }
            }
        } else if let Some(q) = predicate.quotient_order {
            if h.order() != q {
                return false;
            }
        }
        true
    };
    if predicate.order == ambient {
        let found = accept(group).then(|| group.clone());
        return Ok(SearchOutcome { subgroup: found, log });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chain = group.chain();
    let target = predicate.order;
    while log.attempts < budget {
        log.attempts += 1;
        let a = chain.random_element(&mut rng);
        let b = chain.random_element(&mut rng);
        if target % a.order() as u128 != 0 || target % b.order() as u128 != 0 {
            log.pruned_by_element_order += 1;
            continue;
        }
        let mut gens = required.clone();
        gens.push(a);
        gens.push(b);
        let h = PermutationGroup::new(group.degree(), gens)?;
        if target <= 200_000 && h.enumerate_bounded(target as usize).is_none() {
            continue;
        }
        if accept(&h) {
            return Ok(SearchOutcome { subgroup: Some(h), log });
        }
    }
    Ok(SearchOutcome { subgroup: None, log })
}
