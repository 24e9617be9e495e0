use std::collections::BTreeSet;

use serde::{Serialize, Serializer};

use super::{is_geometry, isomorphic, GeomError, Geometry};

/// Classification of a rank-2 residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ResidueClass {
    Digon,
    ProjectivePlane2,
    Gq22,
    PetersenEdge,
    TildeEdge,
    Unknown,
}

impl ResidueClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ResidueClass::Digon => "digon",
            ResidueClass::ProjectivePlane2 => "projective-plane-2",
            ResidueClass::Gq22 => "gq-2-2",
            ResidueClass::PetersenEdge => "petersen-edge",
            ResidueClass::TildeEdge => "tilde-edge",
            ResidueClass::Unknown => "unknown",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            ResidueClass::Digon,
            ResidueClass::ProjectivePlane2,
            ResidueClass::Gq22,
            ResidueClass::PetersenEdge,
            ResidueClass::TildeEdge,
            ResidueClass::Unknown,
        ]
        .into_iter()
        .find(|c| c.as_str() == s)
    }
}

impl Serialize for ResidueClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramEdge {
    pub types: [usize; 2],
    pub class: ResidueClass,
    /// Number of rank-2 residues of this type pair that were classified.
    pub residues: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramReport {
    pub rank: usize,
    pub edges: Vec<DiagramEdge>,
    /// `orders[i - 1]` is one less than the size of every rank-1 residue of
    /// type `i`, or `None` when those sizes vary.
    pub orders: Vec<Option<usize>>,
}

impl DiagramReport {
    pub fn class(&self, i: usize, j: usize) -> Option<ResidueClass> {
        let key = [i.min(j), i.max(j)];
        self.edges.iter().find(|e| e.types == key).map(|e| e.class)
    }
}

/// Classifies all rank-2 residues of every type pair and the node orders.
pub fn diagram(g: &Geometry) -> Result<DiagramReport, GeomError> {
    let verdict = is_geometry(g);
    if let Some(f) = verdict.failure {
        return Err(GeomError::Axiom(format!("{f:?}")));
    }
    let n = g.rank();
    let mut edges = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let flags = flags_of_cotype(g, &[i, j]);
            let mut classes = BTreeSet::new();
            for f in &flags {
                let res = g.residue(f)?;
                classes.insert(classify_rank2(&res.geometry));
                if classes.len() > 1 {
                    break;
                }
            }
            let class = match classes.len() {
                1 => *classes.iter().next().expect("one class"),
                _ => ResidueClass::Unknown,
            };
            edges.push(DiagramEdge {
                types: [i, j],
                class,
                residues: flags.len(),
            });
        }
    }
    let orders = (1..=n)
        .map(|i| {
            let sizes: BTreeSet<usize> = flags_of_cotype(g, &[i])
                .iter()
                .map(|f| g.residue_elements(f).len())
                .collect();
            match sizes.len() {
                1 => sizes.into_iter().next().map(|s| s.saturating_sub(1)),
                _ => None,
            }
        })
        .collect();
    Ok(DiagramReport { rank: n, edges, orders })
}

/// Flags whose type set is the complement of `cotype`.
fn flags_of_cotype(g: &Geometry, cotype: &[usize]) -> Vec<Vec<usize>> {
    let want: Vec<usize> = (1..=g.rank()).filter(|t| !cotype.contains(t)).collect();
    let mut out = Vec::new();
    g.for_each_flag(want.len(), |flag, _| {
        if flag.len() == want.len() {
            let mut types: Vec<usize> = flag.iter().map(|&x| g.type_of(x)).collect();
            types.sort_unstable();
            if types == want {
                out.push(flag.to_vec());
            }
        }
    });
    out
}

/// Matches a rank-2 geometry against the templates.
pub fn classify_rank2(g: &Geometry) -> ResidueClass {
    if g.rank() != 2 {
        return ResidueClass::Unknown;
    }
    let counts = g.type_counts();
    let (c1, c2) = (counts[0], counts[1]);
    if c1 > 0 && c2 > 0 && g.incidence_count() == c1 * c2 {
        return ResidueClass::Digon;
    }
    let cubic = (0..g.len()).all(|x| g.neighbors(x).len() == 3);
    if (c1, c2) == (7, 7) && cubic && is_linear(g) {
        return ResidueClass::ProjectivePlane2;
    }
    if (c1, c2) == (15, 15) && cubic && is_gq(g) {
        return ResidueClass::Gq22;
    }
    if (c1 == 15 && c2 == 10) || (c1 == 10 && c2 == 15) {
        let reference = crate::build::petersen_geometry().geometry;
        let reference = if c1 == 15 {
            reference
        } else {
            reference.retyped(&[2, 1]).expect("swap")
        };
        if matches!(isomorphic(g, &reference), Ok(Some(_))) {
            return ResidueClass::PetersenEdge;
        }
    }
    if (c1, c2) == (45, 45) && cubic {
        if let Ok(reference) = crate::build::tilde_reference() {
            if matches!(isomorphic(g, reference), Ok(Some(_))) {
                return ResidueClass::TildeEdge;
            }
        }
    }
    ResidueClass::Unknown
}

/// Any two type-1 elements share exactly one type-2 element.
fn is_linear(g: &Geometry) -> bool {
    let pts = g.elements_of_type(1);
    pts.iter().enumerate().all(|(i, &p)| {
        pts[i + 1..]
            .iter()
            .all(|&q| super::intersect_sorted(g.neighbors(p), g.neighbors(q)).len() == 1)
    })
}

/// For a point `p` off a line `l`, exactly one point of `l` is collinear with `p`.
fn is_gq(g: &Geometry) -> bool {
    let pts = g.elements_of_type(1);
    let lines = g.elements_of_type(2);
    let collinear = |p: usize, q: usize| p != q && !super::intersect_sorted(g.neighbors(p), g.neighbors(q)).is_empty();
    pts.iter().all(|&p| {
        lines
            .iter()
            .filter(|&&l| !g.incident(p, l))
            .all(|&l| g.neighbors(l).iter().filter(|&&q| collinear(p, q)).count() == 1)
    })
}
