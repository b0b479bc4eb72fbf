//! Exact dense linear algebra over `F_p`.
//!
//! Matrices are small (dimensions in the tens), so everything is dense and
//! row-major. Subspaces are stored by a basis in reduced row-echelon form, which
//! makes equality of subspaces equality of representations.

use std::fmt;

use crate::error::{Error, Result};
use crate::fp::Prime;

/// Default bound on the number of base-`p` digits [`Subspace::enumerate_vectors`]
/// will walk through.
pub const DEFAULT_ENUMERATION_DIGITS: usize = 20;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from signed rows, reducing every entry mod `p`.
    pub fn from_rows<R: AsRef<[i64]>>(p: Prime, cols: usize, rows: &[R]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has length {}, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row.iter().map(|&x| p.reduce(x)));
        }
        Ok(FpMatrix {
            p,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_vec(p: Prime, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let data = data.into_iter().map(|x| x % p.get()).collect();
        Ok(FpMatrix {
            p,
            rows,
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(p: Prime, rows: usize, columns: &[Vec<u32>]) -> Result<Self> {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::Dimension(format!(
                    "column {j} has length {}, expected {rows}",
                    c.len()
                )));
            }
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x % p.get());
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn modulus(&self) -> Prime {
        self.p
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
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p.get();
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_modulus(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let q = self.p.get() as u64;
        let mut out = FpMatrix::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = ((out.data[idx] as u64 + a * other.get(k, j) as u64) % q) as u32;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(self.apply(v))
    }

    /// Unchecked matrix-vector product.
    pub(crate) fn apply(&self, v: &[u32]) -> Vec<u32> {
        let q = self.p.get() as u64;
        (0..self.rows)
            .map(|r| {
                let s = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| acc + a as u64 * b as u64);
                (s % q) as u32
            })
            .collect()
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_modulus(other)?;
        if self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "cannot stack {} columns on {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FpMatrix {
            p: self.p,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hstack(&self, other: &FpMatrix) -> Result<FpMatrix> {
        Ok(self.transpose().vstack(&other.transpose())?.transpose())
    }

    /// Rows `start..end`.
    pub fn row_block(&self, start: usize, end: usize) -> FpMatrix {
        FpMatrix {
            p: self.p,
            rows: end - start,
            cols: self.cols,
            data: self.data[start * self.cols..end * self.cols].to_vec(),
        }
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    fn check_modulus(&self, other: &FpMatrix) -> Result<()> {
        if self.p != other.p {
            return Err(Error::Argument(format!(
                "modulus mismatch: {} vs {}",
                self.p, other.p
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix(p={}, {}x{}) [", self.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "{:?}", self.row(r))?;
            if r + 1 < self.rows {
                write!(f, ", ")?;
            }
        }
        write!(f, "]")
    }
}

/// Reduced row-echelon form and the pivot columns.
pub fn rref(m: &FpMatrix) -> (FpMatrix, Vec<usize>) {
    let p = m.p;
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(pr) = (r..a.rows).find(|&i| a.get(i, c) != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..a.cols {
                a.data.swap(pr * a.cols + j, r * a.cols + j);
            }
        }
        let inv = p.inv(a.get(r, c));
        for j in c..a.cols {
            let v = p.mul(a.get(r, j), inv);
            a.set(r, j, v);
        }
        for i in 0..a.rows {
            if i == r {
                continue;
            }
            let f = a.get(i, c);
            if f == 0 {
                continue;
            }
            for j in c..a.cols {
                let v = p.sub(a.get(i, j), p.mul(f, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// A linear subspace of `F_p^n`, held as a canonical RREF basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: FpMatrix,
}

impl Subspace {
    pub fn zero(p: Prime, ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: FpMatrix::zeros(p, 0, ambient_dim),
        }
    }

    pub fn full(p: Prime, ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: FpMatrix::identity(p, ambient_dim),
        }
    }

    /// Span of the rows of `m`.
    pub fn row_space(m: &FpMatrix) -> Self {
        let (r, pivots) = rref(m);
        Subspace {
            ambient_dim: m.cols(),
            basis: r.row_block(0, pivots.len()),
        }
    }

    pub fn span(p: Prime, ambient_dim: usize, vectors: &[Vec<u32>]) -> Result<Self> {
        let rows: Vec<Vec<i64>> = vectors
            .iter()
            .map(|v| v.iter().map(|&x| x as i64).collect())
            .collect();
        Ok(Self::row_space(&FpMatrix::from_rows(p, ambient_dim, &rows)?))
    }

    pub fn modulus(&self) -> Prime {
        self.basis.modulus()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Basis rows in RREF.
    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<u32>> {
        self.basis.row_vecs()
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        // Reduce against the RREF basis: clear each pivot, then test for zero.
        let p = self.modulus();
        let mut w = v.to_vec();
        for r in 0..self.dim() {
            let row = self.basis.row(r);
            let pivot = row.iter().position(|&x| x != 0).unwrap();
            let f = w[pivot];
            if f != 0 {
                for (wj, &bj) in w.iter_mut().zip(row) {
                    *wj = p.sub(*wj, p.mul(f, bj));
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim
            && (0..self.dim()).all(|r| other.contains(self.basis.row(r)))
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.modulus() != other.modulus() || self.ambient_dim != other.ambient_dim {
            return Err(Error::Dimension(format!(
                "subspaces of F_{}^{} and F_{}^{}",
                self.modulus(),
                self.ambient_dim,
                other.modulus(),
                other.ambient_dim
            )));
        }
        Ok(())
    }

    /// `self + other`.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        Ok(Subspace::row_space(&self.basis.vstack(&other.basis)?))
    }

    /// `self ∩ other`: solve `Uᵀa = Wᵀb` with one kernel computation and map the
    /// `a` part back through `Uᵀ`.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let p = self.modulus();
        let (du, dw) = (self.dim(), other.dim());
        let mut system = FpMatrix::zeros(p, self.ambient_dim, du + dw);
        for i in 0..self.ambient_dim {
            for j in 0..du {
                system.set(i, j, self.basis.get(j, i));
            }
            for j in 0..dw {
                system.set(i, du + j, p.neg(other.basis.get(j, i)));
            }
        }
        let solutions = kernel(&system);
        let ut = self.basis.transpose();
        let vectors: Vec<Vec<u32>> = solutions
            .basis_vectors()
            .iter()
            .map(|ab| ut.apply(&ab[..du]))
            .collect();
        Subspace::span(p, self.ambient_dim, &vectors)
    }

    /// All `p^dim` vectors, ordered mixed-radix over the basis coefficients with
    /// the first basis row least significant.
    pub fn enumerate_vectors(&self, max_digits: usize) -> Result<Vec<Vec<u32>>> {
        let p = self.modulus();
        let dim = self.dim();
        if dim > max_digits {
            return Err(Error::Resource {
                what: format!("enumerating a {dim}-dimensional subspace"),
                needed: dim as u128,
                cap: max_digits as u128,
            });
        }
        let count = p.pow(dim).ok_or_else(|| Error::Resource {
            what: "enumeration size".into(),
            needed: u128::MAX,
            cap: u64::MAX as u128,
        })?;
        let mut out = Vec::with_capacity(count as usize);
        let mut coeffs = vec![0u32; dim];
        let mut v = vec![0u32; self.ambient_dim];
        for _ in 0..count {
            out.push(v.clone());
            // increment the mixed-radix counter and update v incrementally
            for (j, c) in coeffs.iter_mut().enumerate() {
                let row = self.basis.row(j);
                if *c + 1 < p.get() {
                    *c += 1;
                    for (vi, &b) in v.iter_mut().zip(row) {
                        *vi = p.add(*vi, b);
                    }
                    break;
                }
                // wrap: subtract (p-1)·row, i.e. add row once more
                *c = 0;
                for (vi, &b) in v.iter_mut().zip(row) {
                    *vi = p.add(*vi, b);
                }
            }
        }
        Ok(out)
    }
}

/// `{v : m·v = 0}`.
pub fn kernel(m: &FpMatrix) -> Subspace {
    let p = m.modulus();
    let (r, pivots) = rref(m);
    let n = m.cols();
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let vectors: Vec<Vec<u32>> = (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|free| {
            let mut v = vec![0u32; n];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = p.neg(r.get(row, free));
            }
            v
        })
        .collect();
    Subspace::span(p, n, &vectors).expect("kernel vectors have matching length")
}

/// Column space of `m` as a subspace of `F_p^{rows}`.
pub fn image(m: &FpMatrix) -> Subspace {
    Subspace::row_space(&m.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn prime(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    fn all_vectors(p: Prime, n: usize) -> Vec<Vec<u32>> {
        let total = p.pow(n).unwrap();
        (0..total)
            .map(|i| crate::fp::decode_index(p, i, n))
            .collect()
    }

    fn point_set(s: &Subspace) -> HashSet<Vec<u32>> {
        s.enumerate_vectors(DEFAULT_ENUMERATION_DIGITS)
            .unwrap()
            .into_iter()
            .collect()
    }

    #[test]
    fn rref_examples() {
        let p2 = prime(2);
        let id = FpMatrix::identity(p2, 2);
        assert_eq!(rref(&id), (id.clone(), vec![0, 1]));

        let p5 = prime(5);
        let m = FpMatrix::from_rows(p5, 2, &[[1, 2], [2, 4]]).unwrap();
        let expected = FpMatrix::from_rows(p5, 2, &[[1, 2], [0, 0]]).unwrap();
        assert_eq!(rref(&m), (expected, vec![0]));

        let z = FpMatrix::zeros(prime(3), 3, 3);
        assert_eq!(rref(&z), (z.clone(), vec![]));
    }

    #[test]
    fn kernel_examples() {
        let p3 = prime(3);
        assert_eq!(kernel(&FpMatrix::identity(p3, 3)).dim(), 0);
        assert_eq!(
            kernel(&FpMatrix::zeros(p3, 1, 2)),
            Subspace::full(p3, 2)
        );

        // [[1,1]] over F_2: enumerate all four vectors
        let p2 = prime(2);
        let m = FpMatrix::from_rows(p2, 2, &[[1, 1]]).unwrap();
        let brute: HashSet<Vec<u32>> = all_vectors(p2, 2)
            .into_iter()
            .filter(|v| m.apply(v).iter().all(|&x| x == 0))
            .collect();
        assert_eq!(brute, HashSet::from([vec![0, 0], vec![1, 1]]));
        let k = kernel(&m);
        assert_eq!(point_set(&k), brute);
        assert_eq!(k, Subspace::span(p2, 2, &[vec![1, 1]]).unwrap());
    }

    #[test]
    fn image_examples() {
        let p5 = prime(5);
        assert_eq!(image(&FpMatrix::identity(p5, 3)), Subspace::full(p5, 3));
        assert_eq!(image(&FpMatrix::zeros(p5, 3, 2)).dim(), 0);
        let m = FpMatrix::from_rows(p5, 1, &[[1], [2]]).unwrap();
        let brute: HashSet<Vec<u32>> = (0..5).map(|t| vec![t, 2 * t % 5]).collect();
        assert_eq!(point_set(&image(&m)), brute);
    }

    #[test]
    fn sum_and_intersection_examples() {
        let p2 = prime(2);
        let e1 = Subspace::span(p2, 2, &[vec![1, 0]]).unwrap();
        let e2 = Subspace::span(p2, 2, &[vec![0, 1]]).unwrap();
        assert_eq!(e1.sum(&Subspace::zero(p2, 2)).unwrap(), e1);
        assert_eq!(e1.sum(&e2).unwrap(), Subspace::full(p2, 2));
        assert_eq!(e1.intersection(&Subspace::full(p2, 2)).unwrap(), e1);
        assert_eq!(e1.intersection(&e2).unwrap().dim(), 0);
        let other = Subspace::zero(p2, 3);
        assert!(matches!(e1.sum(&other), Err(Error::Dimension(_))));
        assert!(matches!(e1.intersection(&other), Err(Error::Dimension(_))));
    }

    #[test]
    fn enumeration_order_and_cap() {
        let p3 = prime(3);
        let z = Subspace::zero(p3, 2);
        assert_eq!(z.enumerate_vectors(20).unwrap(), vec![vec![0, 0]]);

        let line = Subspace::span(p3, 2, &[vec![1, 0]]).unwrap();
        assert_eq!(
            line.enumerate_vectors(20).unwrap(),
            vec![vec![0, 0], vec![1, 0], vec![2, 0]]
        );

        let p2 = prime(2);
        let plane = Subspace::full(p2, 2);
        let vs = plane.enumerate_vectors(20).unwrap();
        assert_eq!(vs, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(vs.iter().collect::<HashSet<_>>().len(), 4);

        assert!(matches!(
            Subspace::full(p2, 5).enumerate_vectors(4),
            Err(Error::Resource { .. })
        ));
    }

    fn arb_matrix(p: u32, max_dim: usize) -> impl Strategy<Value = FpMatrix> {
        (0..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(0..p, r * c).prop_map(move |data| {
                FpMatrix::from_vec(Prime::new(p).unwrap(), r, c, data).unwrap()
            })
        })
    }

    fn arb_subspace_pair(p: u32, n: usize) -> impl Strategy<Value = (Subspace, Subspace)> {
        let rows = proptest::collection::vec(0..p, n * n);
        (0..=n, 0..=n, rows.clone(), rows).prop_map(move |(ru, rw, a, b)| {
            let pr = Prime::new(p).unwrap();
            let u = FpMatrix::from_vec(pr, ru, n, a[..ru * n].to_vec()).unwrap();
            let w = FpMatrix::from_vec(pr, rw, n, b[..rw * n].to_vec()).unwrap();
            (Subspace::row_space(&u), Subspace::row_space(&w))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in prop_oneof![arb_matrix(2, 6), arb_matrix(3, 6), arb_matrix(5, 4)]) {
            prop_assert_eq!(m.rank() + kernel(&m).dim(), m.cols());
            prop_assert_eq!(image(&m).dim(), m.rank());
        }

        #[test]
        fn rref_is_canonical(m in prop_oneof![arb_matrix(2, 6), arb_matrix(3, 6)]) {
            let (r, piv) = rref(&m);
            prop_assert_eq!(rref(&r), (r.clone(), piv));
            // an invertible row operation leaves the RREF unchanged
            if m.rows() >= 2 {
                let p = m.modulus();
                let mut mixed = m.clone();
                for j in 0..m.cols() {
                    let v = p.add(mixed.get(0, j), mixed.get(1, j));
                    mixed.set(0, j, v);
                }
                prop_assert_eq!(rref(&mixed).0, r);
            }
        }

        #[test]
        fn grassmann_identity(
            (u, w) in prop_oneof![
                (1usize..=6).prop_flat_map(|n| arb_subspace_pair(2, n)),
                (1usize..=6).prop_flat_map(|n| arb_subspace_pair(3, n)),
            ]
        ) {
            let s = u.sum(&w).unwrap();
            let i = u.intersection(&w).unwrap();
            prop_assert_eq!(s.dim() + i.dim(), u.dim() + w.dim());
            prop_assert!(i.is_subspace_of(&u) && i.is_subspace_of(&w));
            prop_assert!(u.is_subspace_of(&s) && w.is_subspace_of(&s));
        }

        #[test]
        fn intersection_matches_brute_force(
            (u, w) in prop_oneof![
                (1usize..=5).prop_flat_map(|n| arb_subspace_pair(2, n)),
                (1usize..=6).prop_flat_map(|n| arb_subspace_pair(3, n)),
            ]
        ) {
            let a = point_set(&u);
            let b = point_set(&w);
            let brute: HashSet<Vec<u32>> = a.intersection(&b).cloned().collect();
            prop_assert_eq!(point_set(&u.intersection(&w).unwrap()), brute);
        }
    }
}
