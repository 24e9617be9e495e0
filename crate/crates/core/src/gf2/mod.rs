//! Dense linear algebra over GF(2) (word-packed) and GF(3) (byte-packed).
//!
//! Elimination always pivots in natural column order, so echelon forms,
//! nullspace bases and solutions are canonical.

mod bits;
mod gf3;

pub use bits::{canonical_basis, span_dimension, BitVector, Gf2Matrix};
pub use gf3::{canonical_basis3, Gf3Matrix};

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unsupported prime {0}; only 2 and 3")]
    Prime(u32),
    #[error("malformed matrix text: {0}")]
    Parse(String),
}

/// A matrix over GF(2) or GF(3).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MatrixGFp {
    Gf2(Gf2Matrix),
    Gf3(Gf3Matrix),
}

impl MatrixGFp {
    pub fn zeros(prime: u32, rows: usize, cols: usize) -> Result<Self, Gf2Error> {
        match prime {
            2 => Ok(MatrixGFp::Gf2(Gf2Matrix::zeros(rows, cols))),
            3 => Ok(MatrixGFp::Gf3(Gf3Matrix::zeros(rows, cols))),
            p => Err(Gf2Error::Prime(p)),
        }
    }

    pub fn from_dense(prime: u32, rows: &[Vec<u8>], cols: usize) -> Result<Self, Gf2Error> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Gf2Error::Shape(format!(
                "row of length {} in a {cols}-column matrix",
                r.len()
            )));
        }
        match prime {
            2 => Ok(MatrixGFp::Gf2(Gf2Matrix::from_dense(rows, cols))),
            3 => Ok(MatrixGFp::Gf3(Gf3Matrix::from_dense(rows, cols))),
            p => Err(Gf2Error::Prime(p)),
        }
    }

    /// Coordinate-list input, converted to dense packed form. Entries are reduced mod p
    /// and repeated coordinates overwrite.
    pub fn from_coordinates(
        prime: u32,
        rows: usize,
        cols: usize,
        entries: &[(usize, usize, u8)],
    ) -> Result<Self, Gf2Error> {
        let mut m = Self::zeros(prime, rows, cols)?;
        for &(r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Gf2Error::Shape(format!("entry ({r},{c}) outside {rows}x{cols}")));
            }
            m.set(r, c, v);
        }
        Ok(m)
    }

    pub fn prime(&self) -> u32 {
        match self {
            MatrixGFp::Gf2(_) => 2,
            MatrixGFp::Gf3(_) => 3,
        }
    }

    pub fn rows(&self) -> usize {
        match self {
            MatrixGFp::Gf2(m) => m.rows(),
            MatrixGFp::Gf3(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            MatrixGFp::Gf2(m) => m.cols(),
            MatrixGFp::Gf3(m) => m.cols(),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        match self {
            MatrixGFp::Gf2(m) => m.get(r, c) as u8,
            MatrixGFp::Gf3(m) => m.get(r, c),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        match self {
            MatrixGFp::Gf2(m) => m.set(r, c, v % 2 == 1),
            MatrixGFp::Gf3(m) => m.set(r, c, v % 3),
        }
    }

    pub fn transpose(&self) -> MatrixGFp {
        match self {
            MatrixGFp::Gf2(m) => MatrixGFp::Gf2(m.transpose()),
            MatrixGFp::Gf3(m) => MatrixGFp::Gf3(m.transpose()),
        }
    }

    pub fn mul(&self, other: &MatrixGFp) -> Result<MatrixGFp, Gf2Error> {
        if self.cols() != other.rows() {
            return Err(Gf2Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        match (self, other) {
            (MatrixGFp::Gf2(a), MatrixGFp::Gf2(b)) => Ok(MatrixGFp::Gf2(a.mul(b))),
            (MatrixGFp::Gf3(a), MatrixGFp::Gf3(b)) => Ok(MatrixGFp::Gf3(a.mul(b))),
            _ => Err(Gf2Error::Shape("mixed fields".into())),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            MatrixGFp::Gf2(m) => m.rank(),
            MatrixGFp::Gf3(m) => m.rank(),
        }
    }

    /// Rows of the reduced echelon form, as dense vectors.
    pub fn rref_rows(&self) -> Vec<Vec<u8>> {
        match self {
            MatrixGFp::Gf2(m) => m.rref().0.row_vectors().iter().map(BitVector::to_bits).collect(),
            MatrixGFp::Gf3(m) => {
                let (r, p) = m.rref();
                (0..p.len()).map(|i| r.row(i)).collect()
            }
        }
    }

    /// Column space basis in reduced echelon form.
    pub fn column_space(&self) -> Vec<Vec<u8>> {
        self.transpose().rref_rows()
    }

    pub fn to_coordinate_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.rows(), self.cols(), self.prime());
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                let v = self.get(r, c);
                if v != 0 {
                    let _ = writeln!(out, "{r} {c} {v}");
                }
            }
        }
        out
    }

    pub fn parse_coordinate_text(text: &str) -> Result<Self, Gf2Error> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Gf2Error::Parse("empty input".into()))?;
        let nums = parse_fields(header, 3)?;
        let (rows, cols, prime) = (nums[0], nums[1], nums[2] as u32);
        let mut entries = Vec::new();
        for line in lines {
            let f = parse_fields(line, 3)?;
            entries.push((f[0], f[1], (f[2] % prime as usize) as u8));
        }
        Self::from_coordinates(prime, rows, cols, &entries)
    }
}

fn parse_fields(line: &str, n: usize) -> Result<Vec<usize>, Gf2Error> {
    let f: Vec<usize> = line
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|e| Gf2Error::Parse(format!("{line:?}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    if f.len() != n {
        return Err(Gf2Error::Parse(format!("expected {n} fields in {line:?}")));
    }
    Ok(f)
}

/// Rank together with a canonical (reduced echelon) nullspace basis.
pub fn rank_nullspace(m: &MatrixGFp) -> (usize, Vec<Vec<u8>>) {
    match m {
        MatrixGFp::Gf2(a) => {
            let null = a.nullspace();
            (a.cols() - null.len(), null.iter().map(BitVector::to_bits).collect())
        }
        MatrixGFp::Gf3(a) => {
            let null = a.nullspace();
            (a.cols() - null.len(), null)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Solved(Vec<u8>),
    Inconsistent,
}

/// Solves `m * x = b`; free variables are set to zero.
pub fn solve(m: &MatrixGFp, b: &[u8]) -> Result<Solution, Gf2Error> {
    if b.len() != m.rows() {
        return Err(Gf2Error::Shape(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            m.rows()
        )));
    }
    let x = match m {
        MatrixGFp::Gf2(a) => a.solve(&BitVector::from_bits(b)).map(|x| x.to_bits()),
        MatrixGFp::Gf3(a) => {
            let b: Vec<u8> = b.iter().map(|v| v % 3).collect();
            a.solve(&b)
        }
    };
    Ok(x.map_or(Solution::Inconsistent, Solution::Solved))
}

/// Kernel and image of a square matrix acting on column vectors, both as
/// canonical echelon bases.
pub fn image_kernel(a: &MatrixGFp) -> Result<(Vec<Vec<u8>>, Vec<Vec<u8>>), Gf2Error> {
    if a.rows() != a.cols() {
        return Err(Gf2Error::Shape(format!("{}x{} is not square", a.rows(), a.cols())));
    }
    let (_, kernel) = rank_nullspace(a);
    Ok((kernel, a.column_space()))
}
