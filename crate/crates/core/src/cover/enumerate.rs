//! HLT coset enumeration: cosets are processed in order; each relator is
//! scanned from the coset and completed by defining new cosets, the row is
//! then filled, and coincidences are collapsed immediately.

use serde::Serialize;

use super::{inverse_letter, CoverError, Presentation, Word};

pub const DEFAULT_COSET_LIMIT: usize = 1_000_000;

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum EnumerationStatus {
    Completed { index: usize },
    Overflow { limit: usize },
}

/// A closed coset table: `image(c, l)` is coset `c` times letter `l`; coset 0
/// is the subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    letters: usize,
    rows: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn letters(&self) -> usize {
        self.letters
    }

    pub fn image(&self, coset: usize, letter: usize) -> usize {
        self.rows[coset][letter]
    }

    pub fn trace(&self, coset: usize, word: &[usize]) -> usize {
        word.iter().fold(coset, |c, &l| self.rows[c][l])
    }

    /// Whether every relator fixes every coset and the subgroup words fix coset 0.
    pub fn is_valid(&self, relators: &[Word], subgroup: &[Word]) -> bool {
        let inverses =
            (0..self.len()).all(|c| (0..self.letters).all(|l| self.image(self.image(c, l), inverse_letter(l)) == c));
        inverses
            && relators.iter().all(|r| (0..self.len()).all(|c| self.trace(c, r) == c))
            && subgroup.iter().all(|w| self.trace(0, w) == 0)
    }
}

#[derive(Clone, Debug)]
pub struct EnumerationOutcome {
    pub status: EnumerationStatus,
    pub table: Option<CosetTable>,
}

impl EnumerationOutcome {
    pub fn index(&self) -> Option<usize> {
        match self.status {
            EnumerationStatus::Completed { index } => Some(index),
            EnumerationStatus::Overflow { .. } => None,
        }
    }
}

struct Overflow;

struct Enumerator {
    letters: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    limit: usize,
    queue: Vec<u32>,
}

impl Enumerator {
    fn get(&self, c: u32, l: usize) -> u32 {
        self.table[c as usize * self.letters + l]
    }

    fn put(&mut self, c: u32, l: usize, d: u32) {
        self.table[c as usize * self.letters + l] = d;
    }

    fn cosets(&self) -> usize {
        self.parent.len()
    }

    fn alive(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn define(&mut self, c: u32, l: usize) -> Result<u32, Overflow> {
        if self.cosets() >= self.limit {
            return Err(Overflow);
        }
        let d = self.cosets() as u32;
        self.parent.push(d);
        self.table.extend(std::iter::repeat(NONE).take(self.letters));
        self.put(c, l, d);
        self.put(d, inverse_letter(l), c);
        Ok(d)
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut root = c;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut x = c;
        while self.parent[x as usize] != root {
            let next = self.parent[x as usize];
            self.parent[x as usize] = root;
            x = next;
        }
        root
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.parent[hi as usize] = lo;
            self.queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let dead = self.queue[i];
            i += 1;
            for l in 0..self.letters {
                let d = self.get(dead, l);
                if d == NONE {
                    continue;
                }
                let inv = inverse_letter(l);
                self.put(d, inv, NONE);
                let mu = self.rep(dead);
                let nu = self.rep(d);
                if self.get(mu, l) != NONE {
                    let t = self.get(mu, l);
                    self.merge(nu, t);
                } else if self.get(nu, inv) != NONE {
                    let t = self.get(nu, inv);
                    self.merge(mu, t);
                } else {
                    self.put(mu, l, nu);
                    self.put(nu, inv, mu);
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: u32, w: &[usize]) -> Result<(), Overflow> {
        let mut f = c;
        let mut b = c;
        let mut i = 0isize;
        let mut j = w.len() as isize - 1;
        loop {
            while i <= j && self.get(f, w[i as usize]) != NONE {
                f = self.get(f, w[i as usize]);
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i && self.get(b, inverse_letter(w[j as usize])) != NONE {
                b = self.get(b, inverse_letter(w[j as usize]));
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                let l = w[i as usize];
                self.put(f, l, b);
                self.put(b, inverse_letter(l), f);
                return Ok(());
            }
            self.define(f, w[i as usize])?;
        }
    }
}

/// Enumerates the cosets of the subgroup, allocating at most `limit` cosets
/// in total (dead cosets included).
pub fn todd_coxeter(p: &Presentation, limit: usize) -> Result<EnumerationOutcome, CoverError> {
    if limit == 0 {
        return Err(CoverError::Argument("coset limit must be at least 1".into()));
    }
    if limit >= NONE as usize {
        return Err(CoverError::Argument(format!("coset limit must be below {NONE}")));
    }
    let relators = p.relator_words()?;
    let subgroup = p.subgroup_letters()?;
    let letters = 2 * p.generators.len();
    let mut e = Enumerator {
        letters,
        table: vec![NONE; letters],
        parent: vec![0],
        limit,
        queue: Vec::new(),
    };
    let overflow = EnumerationOutcome {
        status: EnumerationStatus::Overflow { limit },
        table: None,
    };
    for w in &subgroup {
        if e.scan_and_fill(0, w).is_err() {
            return Ok(overflow);
        }
    }
    let mut c = 0u32;
    while (c as usize) < e.cosets() {
        if e.alive(c) {
            for r in &relators {
                if e.scan_and_fill(c, r).is_err() {
                    return Ok(overflow);
                }
                if !e.alive(c) {
                    break;
                }
            }
            if e.alive(c) {
                for l in 0..letters {
                    if e.get(c, l) == NONE && e.define(c, l).is_err() {
                        return Ok(overflow);
                    }
                }
            }
        }
        c += 1;
    }
    let live: Vec<u32> = (0..e.cosets() as u32).filter(|&c| e.alive(c)).collect();
    let mut number = vec![usize::MAX; e.cosets()];
    for (k, &c) in live.iter().enumerate() {
        number[c as usize] = k;
    }
    let rows: Vec<Vec<usize>> = live
        .iter()
        .map(|&c| (0..letters).map(|l| number[e.get(c, l) as usize]).collect())
        .collect();
    let table = CosetTable { letters, rows };
    if !table.is_valid(&relators, &subgroup) {
        return Err(CoverError::Argument(
            "enumeration produced an invalid coset table".into(),
        ));
    }
    Ok(EnumerationOutcome {
        status: EnumerationStatus::Completed { index: live.len() },
        table: Some(table),
    })
}
