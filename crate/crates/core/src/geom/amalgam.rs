use serde::Serialize;

use super::{flag_transitivity, GeomError, Geometry};
use crate::perm::{stabilizer, GroupAction, StabilizerMode};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Parabolic {
    #[serde(rename = "type")]
    pub ty: usize,
    pub element: String,
    pub order: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Intersection {
    pub types: [usize; 2],
    pub order: u128,
}

/// Orders of the maximal parabolics, their pairwise intersections and the
/// Borel subgroup, all inside the image of the action on elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmalgamReport {
    pub flag: Vec<String>,
    pub group_order: u128,
    pub parabolics: Vec<Parabolic>,
    pub intersections: Vec<Intersection>,
    pub borel_order: u128,
}

pub fn amalgam_report(g: &Geometry, a: &GroupAction<usize>, flag: &[usize]) -> Result<AmalgamReport, GeomError> {
    let mut flag = flag.to_vec();
    flag.sort_by_key(|&x| g.type_of(x));
    if !g.is_flag(&flag) || flag.len() != g.rank() {
        return Err(GeomError::NotFlag(
            "a maximal flag with one element of each type is required".into(),
        ));
    }
    if !flag_transitivity(g, a)?.transitive {
        return Err(GeomError::Precondition("the action is not flag-transitive".into()));
    }
    let group = a.image_group();
    let order_fixing =
        |pts: &[usize]| -> Result<u128, GeomError> { Ok(stabilizer(group, pts, StabilizerMode::Pointwise)?.order()) };
    let mut parabolics = Vec::new();
    for &x in &flag {
        parabolics.push(Parabolic {
            ty: g.type_of(x),
            element: g.id(x).to_string(),
            order: order_fixing(&[x])?,
        });
    }
    let mut intersections = Vec::new();
    for i in 0..flag.len() {
        for j in i + 1..flag.len() {
            intersections.push(Intersection {
                types: [g.type_of(flag[i]), g.type_of(flag[j])],
                order: order_fixing(&[flag[i], flag[j]])?,
            });
        }
    }
    Ok(AmalgamReport {
        flag: flag.iter().map(|&x| g.id(x).to_string()).collect(),
        group_order: group.order(),
        parabolics,
        intersections,
        borel_order: order_fixing(&flag)?,
    })
}
