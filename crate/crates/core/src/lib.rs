//! Desk-scale machinery for tilde and Petersen type geometries: permutation
//! groups, GF(2) linear algebra, incidence geometries and their
//! constructions, natural representations, coset enumeration and local
//! analysis.

pub mod build;
pub mod cli;
pub mod cover;
pub mod geom;
pub mod gf2;
pub mod graph;
pub mod local;
pub mod natrep;
pub mod perm;
