//! Dense matrices over a prime field F_p.
//!
//! Entries are stored as `u8`, so the prime is limited to `p <= 251`. All
//! elimination routines pivot on the first nonzero entry in row order, which
//! makes every basis choice in the crate deterministic.

use std::fmt;

/// Largest prime accepted by [`Matrix`].
pub const MAX_PRIME: u32 = 251;

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    result as u32
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[F_{}; {}x{}]", self.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "\n  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        debug_assert!(is_prime(p) && p <= MAX_PRIME, "unsupported prime {p}");
        Matrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major entries, reducing each entry mod `p`.
    pub fn from_entries(p: u32, rows: usize, cols: usize, entries: &[u32]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count does not match shape");
        let mut m = Self::zeros(p, rows, cols);
        for (slot, &e) in m.data.iter_mut().zip(entries) {
            *slot = (e % p) as u8;
        }
        m
    }

    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let flat: Vec<u32> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::from_entries(p, rows.len(), cols, &flat)
    }

    /// Column vectors as the columns of a `len x vectors.len()` matrix.
    pub fn from_columns(p: u32, len: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, len, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), len);
            for (r, &e) in col.iter().enumerate() {
                m.set(r, c, e);
            }
        }
        m
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c] as u32
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = (v % self.p) as u8;
    }

    pub fn entries(&self) -> Vec<u32> {
        self.data.iter().map(|&e| e as u32).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == 0)
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.p, rhs.p, "prime mismatch");
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product {:?} * {:?}", self.shape(), rhs.shape());
        let p = self.p as u64;
        let mut out = Matrix::zeros(self.p, self.rows, rhs.cols);
        let mut acc = vec![0u64; rhs.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (slot, &b) in acc.iter_mut().zip(row) {
                    *slot += a * b as u64;
                }
            }
            for (slot, a) in out.data[r * rhs.cols..(r + 1) * rhs.cols].iter_mut().zip(&acc) {
                *slot = (a % p) as u8;
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in sum");
        let p = self.p;
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| ((a as u32 + b as u32) % p) as u8).collect();
        Matrix { p, rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix {
        let p = self.p;
        let data = self.data.iter().map(|&a| ((p - a as u32) % p) as u8).collect();
        Matrix { p, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, s: u32) -> Matrix {
        let p = self.p;
        let s = s % p;
        let data = self.data.iter().map(|&a| ((a as u32 * s) % p) as u8).collect();
        Matrix { p, rows: self.rows, cols: self.cols, data }
    }

    /// `[self | rhs]`
    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows, "row mismatch in hstack");
        let mut out = Matrix::zeros(self.p, self.rows, self.cols + rhs.cols);
        out.paste(0, 0, self);
        out.paste(0, self.cols, rhs);
        out
    }

    /// `[self ; rhs]`
    pub fn vstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Matrix { p: self.p, rows: self.rows + rhs.rows, cols: self.cols, data }
    }

    pub fn block_diag(p: u32, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(p, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.paste(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "paste out of bounds");
        for r in 0..block.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(&block.data[r * block.cols..(r + 1) * block.cols]);
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        let mut out = Matrix::zeros(self.p, rows.len(), cols.len());
        for (i, r) in rows.clone().enumerate() {
            for (j, c) in cols.clone().enumerate() {
                out.data[i * out.cols + j] = self.data[r * self.cols + c];
            }
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.p, self.rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for r in 0..self.rows {
                out.data[r * out.cols + j] = self.data[r * self.cols + c];
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.p, rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            out.data[i * self.cols..(i + 1) * self.cols]
                .copy_from_slice(&self.data[r * self.cols..(r + 1) * self.cols]);
        }
        out
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let p = self.p;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if piv != row {
                for c in 0..m.cols {
                    m.data.swap(piv * m.cols + c, row * m.cols + c);
                }
            }
            let inv = inv_mod(m.get(row, col), p);
            for c in col..m.cols {
                let v = m.get(row, c) * inv % p;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = (m.get(r, c) + p - factor * m.get(row, c) % p) % p;
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.rref().1.len()
    }

    /// Full column rank, i.e. injective as a linear map.
    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Basis of the null space, as the columns of the returned matrix.
    pub fn kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let p = self.p;
        let mut basis = Matrix::zeros(p, self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            basis.set(f, j, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                let v = r.get(i, f);
                basis.set(pc, j, (p - v) % p);
            }
        }
        basis
    }

    /// Basis of the column space: the pivot columns of `self`.
    pub fn column_space(&self) -> Matrix {
        let (_, pivots) = self.rref();
        self.select_columns(&pivots)
    }

    /// Some `x` with `self * x = rhs`, if one exists.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows, "row mismatch in solve");
        let aug = self.hstack(rhs);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.p, self.cols, rhs.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(pc, c, r.get(i, self.cols + c));
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let inv = self.solve(&Matrix::identity(self.p, self.rows))?;
        Some(inv)
    }

    /// A matrix `l` with `l * self = I`; requires full column rank.
    pub fn left_inverse(&self) -> Option<Matrix> {
        if !self.is_injective() {
            return None;
        }
        let t = self.transpose();
        // t * y = I has a solution because t has full row rank.
        let y = t.solve(&Matrix::identity(self.p, self.cols))?;
        Some(y.transpose())
    }

    /// Standard basis vectors completing the (independent) columns of `self`
    /// to a basis of the ambient space, picked greedily in index order.
    pub fn complement(&self) -> Matrix {
        let n = self.rows;
        let k = self.cols;
        let (_, pivots) = self.hstack(&Matrix::identity(self.p, n)).rref();
        let chosen: Vec<usize> = pivots.into_iter().filter(|&c| c >= k).map(|c| c - k).collect();
        let mut out = Matrix::zeros(self.p, n, chosen.len());
        for (j, &e) in chosen.iter().enumerate() {
            out.set(e, j, 1);
        }
        out
    }
}

/// Quotient of `F_p^n` by the span of some columns.
///
/// `projection` maps the ambient space onto coordinates of the quotient and
/// `section` embeds the quotient back along a fixed complement, so that
/// `projection * section = I`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub projection: Matrix,
    pub section: Matrix,
}

impl Quotient {
    pub fn new(p: u32, ambient: usize, relations: &Matrix) -> Quotient {
        assert_eq!(relations.rows(), ambient);
        let basis = if relations.cols() == 0 { Matrix::zeros(p, ambient, 0) } else { relations.column_space() };
        let complement = basis.complement();
        let full = basis.hstack(&complement);
        let inv = full.inverse().expect("basis plus complement is invertible");
        let k = basis.cols();
        let projection = inv.submatrix(k..ambient, 0..ambient);
        Quotient { projection, section: complement }
    }

    pub fn dim(&self) -> usize {
        self.section.cols()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_matrix(p: u32, max: usize) -> impl Strategy<Value = Matrix> {
        (0..=max, 0..=max).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(0..p, r * c).prop_map(move |e| Matrix::from_entries(p, r, c, &e))
        })
    }

    #[test]
    fn inverse_mod_small_primes() {
        for p in [2, 3, 5, 7, 251] {
            for a in 1..p {
                assert_eq!(a * inv_mod(a, p) % p, 1);
            }
        }
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = Matrix::from_rows(3, &[vec![1, 2, 0], vec![2, 1, 0]]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn left_inverse_of_injection() {
        let m = Matrix::from_rows(2, &[vec![1, 0], vec![1, 1], vec![0, 1]]);
        let l = m.left_inverse().unwrap();
        assert_eq!(l.mul(&m), Matrix::identity(2, 2));
    }

    #[test]
    fn quotient_projection_section() {
        let rel = Matrix::from_rows(2, &[vec![1], vec![1], vec![0]]);
        let q = Quotient::new(2, 3, &rel);
        assert_eq!(q.dim(), 2);
        assert_eq!(q.projection.mul(&q.section), Matrix::identity(2, 2));
        assert!(q.projection.mul(&rel).is_zero());
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix(3, 6)) {
            prop_assert_eq!(m.rank() + m.kernel().cols(), m.cols());
            prop_assert!(m.mul(&m.kernel()).is_zero());
        }

        #[test]
        fn solve_finds_preimages(m in arb_matrix(5, 5), seed in 0u32..1000) {
            let x = Matrix::from_entries(5, m.cols(), 1, &(0..m.cols() as u32).map(|i| (i * 7 + seed) % 5).collect::<Vec<_>>());
            let b = m.mul(&x);
            let y = m.solve(&b).expect("b lies in the image");
            prop_assert_eq!(m.mul(&y), b);
        }

        #[test]
        fn complement_completes_basis(m in arb_matrix(2, 6)) {
            let basis = if m.cols() == 0 { m.clone() } else { m.column_space() };
            let full = basis.hstack(&basis.complement());
            prop_assert!(full.is_invertible());
        }
    }
}
