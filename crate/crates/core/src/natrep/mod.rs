//! Universal natural representations over GF(2): the line-relation system,
//! the dimension of UM, the split under an element of order 3, and checks of
//! concrete vector assignments.
//!
//! UM is handled as GF(2)^points modulo the row space of the relation matrix.
//! The non-pivot columns of its reduced echelon form give coordinates on UM.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::build::gaussian_binomial_n2;
use crate::geom::Geometry;
use crate::gf2::{span_dimension, BitVector, Gf2Matrix};
use crate::perm::Permutation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NatRepError {
    #[error("rank error: {0}")]
    Rank(String),
    #[error("not of GF(2)-type: line {line:?} has {points} points")]
    NotGf2Type { line: String, points: usize },
    #[error("bad argument: {0}")]
    Argument(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NatRepResult {
    pub points: usize,
    #[serde(rename = "rank")]
    pub relation_rank: usize,
    #[serde(rename = "dim")]
    pub total_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<(usize, usize)>,
}

/// One row per line (type-2 element), one column per point (type-1 element),
/// rows of weight 3.
#[derive(Clone, Debug)]
pub struct RelationSystem {
    pub matrix: Gf2Matrix,
    pub points: Vec<usize>,
    pub lines: Vec<usize>,
}

pub fn relation_matrix(g: &Geometry) -> Result<RelationSystem, NatRepError> {
    if g.rank() < 2 {
        return Err(NatRepError::Rank("relation system needs rank at least 2".into()));
    }
    let points = g.elements_of_type(1);
    let lines = g.elements_of_type(2);
    let mut col = vec![usize::MAX; g.len()];
    for (i, &p) in points.iter().enumerate() {
        col[p] = i;
    }
    let mut m = Gf2Matrix::zeros(lines.len(), points.len());
    for (r, &l) in lines.iter().enumerate() {
        let on = g.neighbors_of_type(l, 1);
        if on.len() != 3 {
            return Err(NatRepError::NotGf2Type {
                line: g.id(l).to_string(),
                points: on.len(),
            });
        }
        for p in on {
            m.set(r, col[p], true);
        }
    }
    Ok(RelationSystem {
        matrix: m,
        points,
        lines,
    })
}

pub fn um_dimension(g: &Geometry) -> Result<NatRepResult, NatRepError> {
    let sys = relation_matrix(g)?;
    let rank = sys.matrix.rank();
    Ok(NatRepResult {
        points: sys.points.len(),
        relation_rank: rank,
        total_dim: sys.points.len() - rank,
        split: None,
    })
}

/// The matrix of `o3` on UM in the basis of free (non-pivot) columns, and the
/// UM dimension.
pub fn lift_to_um(g: &Geometry, o3: &Permutation) -> Result<(Gf2Matrix, NatRepResult), NatRepError> {
    if o3.degree() != g.len() {
        return Err(NatRepError::Argument(format!(
            "generator of degree {} for {} elements",
            o3.degree(),
            g.len()
        )));
    }
    let sys = relation_matrix(g)?;
    let mut col = vec![usize::MAX; g.len()];
    for (i, &p) in sys.points.iter().enumerate() {
        col[p] = i;
    }
    if sys.points.iter().any(|&p| g.type_of(o3.apply(p)) != 1) {
        return Err(NatRepError::Argument("generator does not permute the points".into()));
    }
    let (rref, pivots) = sys.matrix.rref();
    let np = sys.points.len();
    let mut pivot_row = vec![usize::MAX; np];
    for (r, &c) in pivots.iter().enumerate() {
        pivot_row[c] = r;
    }
    let free: Vec<usize> = (0..np).filter(|&c| pivot_row[c] == usize::MAX).collect();
    let mut free_pos = vec![usize::MAX; np];
    for (i, &c) in free.iter().enumerate() {
        free_pos[c] = i;
    }
    let d = free.len();
    // column j holds the normal form of the image of basis vector j
    let mut m = Gf2Matrix::zeros(d, d);
    for (j, &c) in free.iter().enumerate() {
        let image = col[o3.apply(sys.points[c])];
        if free_pos[image] != usize::MAX {
            m.flip(free_pos[image], j);
        } else {
            let row = rref.row(pivot_row[image]);
            for k in row.ones() {
                if free_pos[k] != usize::MAX {
                    m.flip(free_pos[k], j);
                }
            }
        }
    }
    let result = NatRepResult {
        points: np,
        relation_rank: pivots.len(),
        total_dim: d,
        split: None,
    };
    Ok((m, result))
}

/// `(dim image(g - 1), dim kernel(g - 1))` on UM for an element `g` of order 3.
pub fn o3_split_dims(g: &Geometry, o3: &Permutation) -> Result<NatRepResult, NatRepError> {
    if o3.order() != 3 {
        return Err(NatRepError::Argument(format!(
            "generator has order {}, not 3",
            o3.order()
        )));
    }
    let (m, mut result) = lift_to_um(g, o3)?;
    let d = result.total_dim;
    let commutant = m.add(&Gf2Matrix::identity(d)).rank();
    result.split = Some((commutant, d - commutant));
    Ok(result)
}

/// Point vectors in GF(2)^dim, keyed by point id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorAssignment {
    dim: usize,
    map: BTreeMap<String, BitVector>,
}

impl VectorAssignment {
    pub fn new(dim: usize, map: BTreeMap<String, BitVector>) -> Self {
        assert!(map.values().all(|v| v.len() == dim), "vector length");
        VectorAssignment { dim, map }
    }

    /// Every point sent to the same vector.
    pub fn constant(g: &Geometry, v: BitVector) -> Self {
        let map = g
            .elements_of_type(1)
            .into_iter()
            .map(|p| (g.id(p).to_string(), v.clone()))
            .collect();
        VectorAssignment { dim: v.len(), map }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, id: &str) -> Option<&BitVector> {
        self.map.get(id)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepresentationVerdict {
    pub valid: bool,
    pub span_dim: usize,
    pub failures: Vec<String>,
}

/// Checks the line relations, that each element of type `i` spans an
/// `i`-space, and that for `j < i` the type-`j` elements below it map
/// bijectively onto the `j`-subspaces of that span.
pub fn verify_natural_representation(g: &Geometry, v: &VectorAssignment) -> Result<RepresentationVerdict, NatRepError> {
    let points = g.elements_of_type(1);
    for &p in &points {
        if v.get(g.id(p)).is_none() {
            return Err(NatRepError::Argument(format!("no vector for point {:?}", g.id(p))));
        }
    }
    let vec_of = |p: usize| v.get(g.id(p)).expect("checked above");
    let mut failures = Vec::new();
    for &p in &points {
        if vec_of(p).is_zero() {
            failures.push(format!("point {:?} has the zero vector", g.id(p)));
        }
    }
    let shadow = |x: usize| -> Vec<usize> {
        if g.type_of(x) == 1 {
            vec![x]
        } else {
            g.neighbors_of_type(x, 1)
        }
    };
    if g.rank() >= 2 {
        for l in g.elements_of_type(2) {
            let mut sum = BitVector::zeros(v.dim());
            for p in shadow(l) {
                sum.xor_assign(vec_of(p));
            }
            if !sum.is_zero() {
                failures.push(format!("line {:?}: point vectors do not sum to zero", g.id(l)));
            }
        }
    }
    let span_of = |x: usize| -> Vec<BitVector> {
        let vs: Vec<BitVector> = shadow(x).into_iter().map(|p| vec_of(p).clone()).collect();
        crate::gf2::canonical_basis(v.dim(), &vs)
    };
    let spans: Vec<Vec<BitVector>> = (0..g.len()).map(span_of).collect();
    for x in 0..g.len() {
        let i = g.type_of(x);
        if spans[x].len() != i {
            failures.push(format!("{:?} of type {i} spans dimension {}", g.id(x), spans[x].len()));
            continue;
        }
        for j in 1..i {
            let below: Vec<usize> = g.neighbors_of_type(x, j);
            let mut images: Vec<&Vec<BitVector>> = below.iter().map(|&y| &spans[y]).collect();
            let inside = below.iter().all(|&y| {
                let mut joint = spans[x].clone();
                joint.extend(spans[y].iter().cloned());
                span_dimension(v.dim(), &joint) == i
            });
            images.sort();
            images.dedup();
            let expected = subspace_count(i, j);
            if !inside || images.len() != below.len() || Some(below.len() as u128) != expected {
                failures.push(format!(
                    "{:?}: its {} elements of type {j} are not the {j}-subspaces of its span",
                    g.id(x),
                    below.len()
                ));
            }
        }
    }
    let all: Vec<BitVector> = points.iter().map(|&p| vec_of(p).clone()).collect();
    Ok(RepresentationVerdict {
        valid: failures.is_empty(),
        span_dim: span_dimension(v.dim(), &all),
        failures,
    })
}

/// Number of `j`-subspaces of GF(2)^i.
fn subspace_count(i: usize, j: usize) -> Option<u128> {
    if j == 2 && i >= 2 {
        return gaussian_binomial_n2(i as u32).ok();
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for k in 0..j {
        num = num.checked_mul((1u128 << (i - k)) - 1)?;
        den = den.checked_mul((1u128 << (k + 1)) - 1)?;
    }
    Some(num / den)
}
