use rayon::prelude::*;

/// Rows below this many words of work are eliminated serially.
const PARALLEL_WORK: usize = 1 << 16;

/// A GF(2) vector packed into 64-bit words, bit `i` of word `i / 64`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_indices(len: usize, ones: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in ones {
            v.flip(i);
        }
        v
    }

    /// The low `len` bits of `value`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= 64);
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = if len == 64 { value } else { value & ((1u64 << len) - 1) };
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn dot(&self, other: &BitVector) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }
}

/// Dense GF(2) matrix, rows packed into machine words.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        Gf2Matrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[BitVector]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row length");
            m.row_words_mut(i).copy_from_slice(&r.words);
        }
        m
    }

    pub fn from_dense(rows: &[Vec<u8>], cols: usize) -> Self {
        let bits: Vec<BitVector> = rows.iter().map(|r| BitVector::from_bits(r)).collect();
        Self::from_rows(cols, &bits)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.data[r * self.stride + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let w = &mut self.data[r * self.stride + c / 64];
        let mask = 1u64 << (c % 64);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r * self.stride + c / 64] ^= 1u64 << (c % 64);
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVector {
        BitVector {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    pub fn row_vectors(&self) -> Vec<BitVector> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let mut out = Gf2Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let (src, dst) = (other.row_words(k).to_vec(), out.row_words_mut(r));
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d ^= s;
                    }
                }
            }
        }
        out
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.cols);
        let mut out = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(v.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>();
            if parity % 2 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    pub fn add(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        let (lo, hi) = (a.min(b), a.max(b));
        let (first, second) = self.data.split_at_mut(hi * s);
        first[lo * s..(lo + 1) * s].swap_with_slice(&mut second[..s]);
    }

    /// In-place Gaussian elimination with pivots taken in natural column
    /// order. With `reduced`, clears pivot columns above the pivot too
    /// (reduced row echelon form). Returns the pivot columns; the first
    /// `pivots.len()` rows are the nonzero echelon rows.
    pub fn eliminate(&mut self, reduced: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        let stride = self.stride;
        for col in 0..self.cols {
            if next == self.rows {
                break;
            }
            let word = col / 64;
            let mask = 1u64 << (col % 64);
            let Some(p) = (next..self.rows).find(|&r| self.data[r * stride + word] & mask != 0) else {
                continue;
            };
            self.swap_rows(p, next);
            let pivot: Vec<u64> = self.row_words(next)[word..].to_vec();
            let start = if reduced { 0 } else { next + 1 };
            let work = (self.rows - start) * (stride - word);
            let eliminate_row = |r: usize, row: &mut [u64]| {
                if r != next && row[word] & mask != 0 {
                    for (d, s) in row[word..].iter_mut().zip(&pivot) {
                        *d ^= s;
                    }
                }
            };
            let rows = &mut self.data[start * stride..];
            if work >= PARALLEL_WORK {
                rows.par_chunks_mut(stride)
                    .enumerate()
                    .for_each(|(i, row)| eliminate_row(start + i, row));
            } else {
                rows.chunks_mut(stride)
                    .enumerate()
                    .for_each(|(i, row)| eliminate_row(start + i, row));
            }
            pivots.push(col);
            next += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate(false).len()
    }

    /// Reduced row echelon form: the nonzero rows and their pivot columns.
    pub fn rref(&self) -> (Gf2Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        m.rows = pivots.len();
        m.data.truncate(pivots.len() * m.stride);
        (m, pivots)
    }

    /// Basis of `{x : self * x = 0}`, in reduced echelon form.
    pub fn nullspace(&self) -> Vec<BitVector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVector::zeros(self.cols);
            v.set(f, true);
            for (i, &p) in pivots.iter().enumerate() {
                if r.get(i, f) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        canonical_basis(self.cols, &basis)
    }

    /// A solution of `self * x = b` with free variables set to zero, or
    /// `None` when `b` is outside the column space.
    pub fn solve(&self, b: &BitVector) -> Option<BitVector> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Gf2Matrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    aug.set(r, c, true);
                }
            }
            if b.get(r) {
                aug.set(r, self.cols, true);
            }
        }
        let pivots = aug.eliminate(true);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = BitVector::zeros(self.cols);
        for (i, &p) in pivots.iter().enumerate() {
            if aug.get(i, self.cols) {
                x.set(p, true);
            }
        }
        Some(x)
    }
}

/// The reduced echelon basis of the span of `vectors`.
pub fn canonical_basis(len: usize, vectors: &[BitVector]) -> Vec<BitVector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let (m, _) = Gf2Matrix::from_rows(len, vectors).rref();
    m.row_vectors()
}

pub fn span_dimension(len: usize, vectors: &[BitVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Gf2Matrix::from_rows(len, vectors).rank()
}
