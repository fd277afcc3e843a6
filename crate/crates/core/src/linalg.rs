//! Dense matrices over prime fields.
//!
//! Every higher layer of the engine (Hom spaces, kernels of module maps,
//! resolutions) is reduced to the three kernels in this module: reduced row
//! echelon form, right null spaces and linear solves.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The prime field `F_p`. Primality is checked on construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    /// Largest modulus accepted; keeps every product inside a `u64`.
    pub const MAX_MODULUS: u64 = (1 << 31) - 1;

    pub fn new(p: u64) -> Result<Self> {
        if p > Self::MAX_MODULUS || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        ((a as u64 + p - b as u64) % p) as u32
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a % self.p != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }

    /// Residue printed as a signed representative in `(-p/2, p/2]`.
    pub fn signed(self, a: u32) -> i64 {
        if a as u64 * 2 > self.p as u64 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Row-major dense matrix over `F_p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Output of [`FpMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl FpMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FpMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % field.p;
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing every entry.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data = rows.iter().flatten().map(|&x| field.reduce(x)).collect();
        Ok(FpMatrix {
            field,
            rows: r,
            cols: c,
            data,
        })
    }

    /// Wraps already-reduced row-major residues.
    pub fn from_vec(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|&x| x >= field.p) {
            return Err(Error::DimensionMismatch("entry not reduced".into()));
        }
        Ok(FpMatrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn from_fn(
        field: PrimeField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u32,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j) % field.p);
            }
        }
        FpMatrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u32>]) -> Self {
        Self::from_fn(field, rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn random<R: Rng + ?Sized>(
        field: PrimeField,
        rows: usize,
        cols: usize,
        rng: &mut R,
    ) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        FpMatrix {
            field,
            rows,
            cols,
            data,
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.field.p;
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }
    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(
            self.cols, other.rows,
            "product of {}x{} and {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let p = self.field.p as u64;
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            let acc = &mut out[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (slot, &b) in acc.iter_mut().zip(brow) {
                    *slot = (*slot + a * b as u64) % p;
                }
            }
        }
        FpMatrix {
            field: self.field,
            rows: self.rows,
            cols: other.cols,
            data: out.into_iter().map(|x| x as u32).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        let p = self.field.p as u64;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for (a, b) in self.row(i).iter().zip(v) {
                    acc = (acc + *a as u64 * *b as u64) % p;
                }
                acc as u32
            })
            .collect()
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        FpMatrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        FpMatrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: u32) -> FpMatrix {
        let f = self.field;
        FpMatrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn neg(&self) -> FpMatrix {
        self.scale(self.field.neg(1 % self.field.p))
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Self::from_fn(self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        })
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FpMatrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn block_diag(field: PrimeField, blocks: &[&FpMatrix]) -> FpMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.paste(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &FpMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.get(i, j);
            }
        }
    }

    pub fn submatrix(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> FpMatrix {
        Self::from_fn(self.field, rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn select_columns(&self, idx: &[usize]) -> FpMatrix {
        Self::from_fn(self.field, self.rows, idx.len(), |i, j| self.get(i, idx[j]))
    }

    pub fn select_rows(&self, idx: &[usize]) -> FpMatrix {
        Self::from_fn(self.field, idx.len(), self.cols, |i, j| self.get(idx[i], j))
    }

    /// Reduced row echelon form by Gauss-Jordan elimination.
    pub fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c));
            m.scale_row(r, inv, c);
            for i in 0..m.rows {
                if i != r {
                    let factor = m.get(i, c);
                    if factor != 0 {
                        m.axpy_row(i, r, f.neg(factor), c);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            matrix: m,
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        if self.rows <= self.cols {
            self.rref().rank
        } else {
            self.transpose().rref().rank
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, r: usize, c: u32, from: usize) {
        let f = self.field;
        for j in from..self.cols {
            let idx = r * self.cols + j;
            self.data[idx] = f.mul(self.data[idx], c);
        }
    }

    /// row[dst] += c * row[src], starting at column `from`.
    fn axpy_row(&mut self, dst: usize, src: usize, c: u32, from: usize) {
        let p = self.field.p as u64;
        let c = c as u64;
        for j in from..self.cols {
            let s = self.data[src * self.cols + j] as u64;
            if s != 0 {
                let idx = dst * self.cols + j;
                self.data[idx] = ((self.data[idx] as u64 + c * s) % p) as u32;
            }
        }
    }

    /// Columns form a basis of the right null space.
    pub fn kernel_basis(&self) -> FpMatrix {
        let f = self.field;
        let Rref { matrix, pivots, .. } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut k = FpMatrix::zeros(f, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                k.set(pc, j, f.neg(matrix.get(i, fc)));
            }
        }
        k
    }

    /// Solves `self * X = b`; `Error::NoSolution` when some column of `b`
    /// is outside the column space.
    pub fn solve(&self, b: &FpMatrix) -> Result<FpMatrix> {
        if self.rows != b.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve: A has {} rows, B has {}",
                self.rows, b.rows
            )));
        }
        let aug = self.hstack(b);
        let Rref { matrix, pivots, .. } = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return Err(Error::NoSolution);
        }
        let mut x = FpMatrix::zeros(self.field, self.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, matrix.get(i, self.cols + j));
            }
        }
        Ok(x)
    }

    pub fn solve_vec(&self, b: &[u32]) -> Result<Vec<u32>> {
        let bm = FpMatrix::from_columns(self.field, self.rows, &[b.to_vec()]);
        Ok(self.solve(&bm)?.column(0))
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if !self.is_square() {
            return None;
        }
        self.solve(&FpMatrix::identity(self.field, self.rows)).ok()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Columns of `self` at the pivot positions: a basis of the column space.
    pub fn column_space(&self) -> FpMatrix {
        let piv = self.rref().pivots;
        self.select_columns(&piv)
    }

    /// Extends the (independent) columns of `self` to a basis of the ambient
    /// space, returning only the added standard basis vectors.
    pub fn complement_basis(&self) -> FpMatrix {
        let n = self.rows;
        let aug = self.hstack(&FpMatrix::identity(self.field, n));
        let piv = aug.rref().pivots;
        let added: Vec<usize> = piv.into_iter().filter(|&c| c >= self.cols).collect();
        FpMatrix::from_fn(self.field, n, added.len(), |i, j| {
            u32::from(i == added[j] - self.cols)
        })
    }

    /// True when every column of `other` lies in the column space of `self`.
    pub fn spans(&self, other: &FpMatrix) -> bool {
        self.solve(other).is_ok()
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FpMatrix<F_{}>[{}x{}]",
            self.field.p, self.rows, self.cols
        )?;
        for i in 0..self.rows {
            write!(f, "\n  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    /// Rank by elimination with a full pivot search, kept separate from
    /// `rref` on purpose.
    fn oracle_rank(m: &FpMatrix) -> usize {
        let p = m.field().modulus() as i64;
        let mut a: Vec<Vec<i64>> = (0..m.rows())
            .map(|i| m.row(i).iter().map(|&x| x as i64).collect())
            .collect();
        let (rows, cols) = (m.rows(), m.cols());
        let mut rank = 0;
        let mut used_r = vec![false; rows];
        let mut used_c = vec![false; cols];
        loop {
            let mut found = None;
            'search: for i in 0..rows {
                for j in 0..cols {
                    if !used_r[i] && !used_c[j] && a[i][j] != 0 {
                        found = Some((i, j));
                        break 'search;
                    }
                }
            }
            let Some((pi, pj)) = found else { break };
            used_r[pi] = true;
            used_c[pj] = true;
            rank += 1;
            let inv = {
                // extended Euclid
                let (mut t, mut nt, mut r, mut nr) = (0i64, 1i64, p, a[pi][pj]);
                while nr != 0 {
                    let q = r / nr;
                    (t, nt) = (nt, t - q * nt);
                    (r, nr) = (nr, r - q * nr);
                }
                t.rem_euclid(p)
            };
            for i in 0..rows {
                if i != pi && a[i][pj] != 0 {
                    let fac = a[i][pj] * inv % p;
                    for j in 0..cols {
                        a[i][j] = (a[i][j] - fac * a[pi][j]).rem_euclid(p);
                    }
                }
            }
        }
        rank
    }

    #[test]
    fn primality_is_checked() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(101).is_ok());
        assert!(PrimeField::new(2).is_ok());
    }

    #[test]
    fn rref_identity_and_equal_rows() {
        let i2 = FpMatrix::identity(f(2), 2);
        let r = i2.rref();
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
        let ones = FpMatrix::from_rows(f(2), &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(ones.rref().rank, 1);
    }

    #[test]
    fn rank_matches_oracle_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let m = FpMatrix::random(f(101), 5, 7, &mut rng);
            assert_eq!(m.rref().rank, oracle_rank(&m));
        }
        // rank-deficient: product of thin factors
        for _ in 0..20 {
            let a = FpMatrix::random(f(101), 5, 2, &mut rng);
            let b = FpMatrix::random(f(101), 2, 7, &mut rng);
            let m = a.mul(&b);
            assert_eq!(m.rref().rank, oracle_rank(&m));
        }
    }

    #[test]
    fn kernel_cases() {
        assert_eq!(FpMatrix::identity(f(5), 3).kernel_basis().cols(), 0);
        let z = FpMatrix::zeros(f(5), 3, 3);
        let k = z.kernel_basis();
        assert_eq!(k.cols(), 3);
        assert_eq!(k.rank(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let m = FpMatrix::random(f(101), 4, 6, &mut rng);
            let k = m.kernel_basis();
            assert!(m.mul(&k).is_zero());
            assert_eq!(k.cols(), 6 - m.rank());
            assert_eq!(k.rank(), k.cols());
        }
    }

    #[test]
    fn solve_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = FpMatrix::random(f(101), 3, 2, &mut rng);
        let x = FpMatrix::identity(f(101), 3).solve(&b).unwrap();
        assert_eq!(x, b);
        let zero = FpMatrix::zeros(f(101), 3, 3);
        assert_eq!(zero.solve(&b), Err(Error::NoSolution));
        assert!(matches!(
            zero.solve(&FpMatrix::zeros(f(101), 2, 1)),
            Err(Error::DimensionMismatch(_))
        ));
        for _ in 0..20 {
            let a = FpMatrix::random(f(101), 4, 6, &mut rng);
            let x0 = FpMatrix::random(f(101), 6, 2, &mut rng);
            let b = a.mul(&x0);
            let x = a.solve(&b).unwrap();
            assert_eq!(a.mul(&x), b);
        }
    }

    #[test]
    fn complement_and_column_space() {
        let m = FpMatrix::from_rows(f(3), &[vec![1, 1], vec![1, 1], vec![0, 0]]).unwrap();
        let cs = m.column_space();
        assert_eq!(cs.cols(), 1);
        let comp = cs.complement_basis();
        assert_eq!(comp.cols(), 2);
        assert!(cs.hstack(&comp).is_invertible());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn matrix(p: u64, max: usize) -> impl Strategy<Value = FpMatrix> {
            (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
                proptest::collection::vec(0..p as u32, r * c).prop_map(move |d| {
                    FpMatrix::from_vec(PrimeField::new(p).unwrap(), r, c, d).unwrap()
                })
            })
        }

        proptest! {
            #[test]
            fn rref_is_idempotent(m in matrix(7, 6)) {
                let r = m.rref().matrix;
                prop_assert_eq!(r.rref().matrix, r);
            }

            #[test]
            fn rank_of_transpose(m in matrix(101, 6)) {
                prop_assert_eq!(m.rref().rank, m.transpose().rref().rank);
            }

            #[test]
            fn solution_set_is_particular_plus_kernel(
                m in matrix(5, 5),
                seed in any::<u64>(),
            ) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let x0 = FpMatrix::random(m.field(), m.cols(), 1, &mut rng);
                let b = m.mul(&x0);
                let x = m.solve(&b).unwrap();
                let k = m.kernel_basis();
                // x0 - x lies in the kernel
                let diff = x0.sub(&x);
                prop_assert!(k.spans(&diff));
                // and every particular + kernel combination solves the system
                let c = FpMatrix::random(m.field(), k.cols(), 1, &mut rng);
                let y = x.add(&k.mul(&c));
                prop_assert_eq!(m.mul(&y), b);
            }
        }
    }
}
