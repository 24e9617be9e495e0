/// Dense GF(3) matrix, one byte per entry (values 0, 1, 2).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gf3Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

const INV: [u8; 3] = [0, 1, 2];

impl Gf3Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf3Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_dense(rows: &[Vec<u8>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row length");
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v % 3);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v % 3;
    }

    pub fn row(&self, r: usize) -> Vec<u8> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Gf3Matrix {
        let mut t = Gf3Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Gf3Matrix) -> Gf3Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let mut out = Gf3Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = (out.get(r, c) + a * other.get(k, c)) % 3;
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    /// Gauss–Jordan elimination in natural column order; returns pivot columns.
    pub fn eliminate(&mut self, reduced: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        let cols = self.cols;
        for col in 0..cols {
            if next == self.rows {
                break;
            }
            let Some(p) = (next..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if p != next {
                for c in 0..cols {
                    self.data.swap(p * cols + c, next * cols + c);
                }
            }
            let inv = INV[self.get(next, col) as usize];
            for c in col..cols {
                let v = self.get(next, c) * inv % 3;
                self.set(next, c, v);
            }
            let start = if reduced { 0 } else { next + 1 };
            for r in start..self.rows {
                if r == next {
                    continue;
                }
                let f = self.get(r, col);
                if f == 0 {
                    continue;
                }
                let neg = 3 - f;
                for c in col..cols {
                    let v = (self.get(r, c) + neg * self.get(next, c)) % 3;
                    self.data[r * cols + c] = v;
                }
            }
            pivots.push(col);
            next += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate(false).len()
    }

    pub fn rref(&self) -> (Gf3Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        m.rows = pivots.len();
        m.data.truncate(pivots.len() * m.cols);
        (m, pivots)
    }

    pub fn nullspace(&self) -> Vec<Vec<u8>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u8; self.cols];
            v[f] = 1;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = (3 - r.get(i, f)) % 3;
            }
            basis.push(v);
        }
        canonical_basis3(self.cols, &basis)
    }

    pub fn solve(&self, b: &[u8]) -> Option<Vec<u8>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Gf3Matrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, b[r]);
        }
        let pivots = aug.eliminate(true);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u8; self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(i, self.cols);
        }
        Some(x)
    }
}

pub fn canonical_basis3(len: usize, vectors: &[Vec<u8>]) -> Vec<Vec<u8>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let (m, pivots) = Gf3Matrix::from_dense(vectors, len).rref();
    (0..pivots.len()).map(|r| m.row(r)).collect()
}
