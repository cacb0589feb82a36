//! Dense complex linear algebra on `Complex64` matrices: LU with partial
//! pivoting, determinants, solves, complete-pivoting rank and nullspaces,
//! and a few subspace utilities used by the flag and verification code.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Pivots smaller than this fraction of the largest entry count as zero in LU.
pub const SINGULAR_PIVOT_RTOL: f64 = 1e-13;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}×{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::from_vec(rows.len(), cols, rows.concat())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// The first `count` rows.
    pub fn top_rows(&self, count: usize) -> CMatrix {
        self.select_rows(0..count)
    }

    pub fn select_rows(&self, range: impl IntoIterator<Item = usize>) -> CMatrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for i in range {
            data.extend_from_slice(self.row(i));
            rows += 1;
        }
        CMatrix {
            rows,
            cols: self.cols,
            data,
        }
    }

    pub fn transpose(&self) -> CMatrix {
        let mut t = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn conj_transpose(&self) -> CMatrix {
        let mut t = self.transpose();
        t.data.iter_mut().for_each(|z| *z = z.conj());
        t
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.cols {
            return Err(Error::Shape(format!(
                "cannot stack {} columns over {}",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(CMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "{}×{} times {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(l, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn scale_row(&mut self, i: usize, s: Complex64) {
        self.row_mut(i).iter_mut().for_each(|z| *z *= s);
    }

    /// Entrywise maximum of `|self − other|`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}×{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_dist(x: &[Complex64], y: &[Complex64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Packed LU factors of `PA = LU`: unit lower triangle below the diagonal,
/// `U` on and above it. `perm[i]` is the row of `A` that ended up in row `i`.
#[derive(Clone, Debug)]
pub struct LuDecomposition {
    factors: CMatrix,
    perm: Vec<usize>,
    odd: bool,
    singular_pivot: Option<usize>,
}

impl LuDecomposition {
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// `true` when the permutation is odd.
    pub fn parity_odd(&self) -> bool {
        self.odd
    }

    /// First pivot index that fell under the singularity threshold.
    pub fn singular_pivot(&self) -> Option<usize> {
        self.singular_pivot
    }

    pub fn lower(&self) -> CMatrix {
        let n = self.factors.rows();
        let mut l = CMatrix::identity(n);
        for i in 0..n {
            for j in 0..i {
                l[(i, j)] = self.factors[(i, j)];
            }
        }
        l
    }

    pub fn upper(&self) -> CMatrix {
        let n = self.factors.rows();
        let mut u = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                u[(i, j)] = self.factors[(i, j)];
            }
        }
        u
    }

    pub fn determinant(&self) -> Complex64 {
        let n = self.factors.rows();
        let d: Complex64 = (0..n).map(|i| self.factors[(i, i)]).product();
        if self.odd {
            -d
        } else {
            d
        }
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.factors.rows();
        if b.len() != n {
            return Err(Error::Shape(format!(
                "right-hand side of length {} for a {n}×{n} system",
                b.len()
            )));
        }
        if let Some(pivot) = self.singular_pivot {
            return Err(Error::Singular { pivot });
        }
        let mut y: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: Complex64 = (0..i).map(|j| self.factors[(i, j)] * y[j]).sum();
            y[i] -= s;
        }
        for i in (0..n).rev() {
            let s: Complex64 = (i + 1..n).map(|j| self.factors[(i, j)] * y[j]).sum();
            y[i] = (y[i] - s) / self.factors[(i, i)];
        }
        Ok(y)
    }

    /// `A⁻¹` column by column.
    pub fn inverse(&self) -> Result<CMatrix> {
        let n = self.factors.rows();
        let mut inv = CMatrix::zeros(n, n);
        let mut e = vec![ZERO; n];
        for j in 0..n {
            e.iter_mut().for_each(|z| *z = ZERO);
            e[j] = ONE;
            let col = self.solve(&e)?;
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }
}

pub fn lu_decompose(a: &CMatrix) -> Result<LuDecomposition> {
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "LU of a non-square {}×{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let threshold = SINGULAR_PIVOT_RTOL * a.max_abs();
    let mut f = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut odd = false;
    let mut singular_pivot = None;
    for k in 0..n {
        let (p, best) =
            (k..n)
                .map(|i| (i, f[(i, k)].norm()))
                .fold((k, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc });
        if best <= threshold || best == 0.0 {
            singular_pivot.get_or_insert(k);
        }
        if p != k {
            for j in 0..n {
                f.data.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
            odd = !odd;
        }
        let pivot = f[(k, k)];
        if pivot == ZERO {
            continue;
        }
        for i in k + 1..n {
            let m = f[(i, k)] / pivot;
            f[(i, k)] = m;
            if m == ZERO {
                continue;
            }
            for j in k + 1..n {
                let u = f[(k, j)];
                f[(i, j)] -= m * u;
            }
        }
    }
    Ok(LuDecomposition {
        factors: f,
        perm,
        odd,
        singular_pivot,
    })
}

pub fn det(a: &CMatrix) -> Result<Complex64> {
    Ok(lu_decompose(a)?.determinant())
}

pub fn solve_linear(a: &CMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    lu_decompose(a)?.solve(b)
}

pub fn inverse_transpose(a: &CMatrix) -> Result<CMatrix> {
    Ok(lu_decompose(a)?.inverse()?.transpose())
}

/// Gauss–Jordan elimination with complete pivoting. Returns the reduced
/// matrix (in permuted column order), the column permutation and the rank.
struct CompleteElimination {
    reduced: CMatrix,
    col_perm: Vec<usize>,
    rank: usize,
}

fn complete_pivot_eliminate(a: &CMatrix, tol: f64) -> CompleteElimination {
    let (m, n) = (a.rows(), a.cols());
    let threshold = tol * a.max_abs();
    let mut r = a.clone();
    let mut col_perm: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    while rank < m.min(n) {
        let mut best = (rank, rank, -1.0);
        for i in rank..m {
            for j in rank..n {
                let v = r[(i, j)].norm();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        let (pi, pj, pv) = best;
        if pv <= threshold || pv == 0.0 {
            break;
        }
        if pi != rank {
            for j in 0..n {
                r.data.swap(rank * n + j, pi * n + j);
            }
        }
        if pj != rank {
            for i in 0..m {
                r.data.swap(i * n + rank, i * n + pj);
            }
            col_perm.swap(rank, pj);
        }
        let inv = ONE / r[(rank, rank)];
        r.scale_row(rank, inv);
        for i in 0..m {
            if i == rank {
                continue;
            }
            let factor = r[(i, rank)];
            if factor == ZERO {
                continue;
            }
            for j in rank..n {
                let u = r[(rank, j)];
                r[(i, j)] -= factor * u;
            }
        }
        rank += 1;
    }
    CompleteElimination {
        reduced: r,
        col_perm,
        rank,
    }
}

/// Number of complete-pivoting pivots exceeding `tol · max|entry|`.
pub fn numeric_rank(a: &CMatrix, tol: f64) -> usize {
    if a.rows() == 0 || a.cols() == 0 {
        return 0;
    }
    complete_pivot_eliminate(a, tol).rank
}

/// Basis of the right nullspace `{z : a z = 0}`, one basis vector per column.
pub fn nullspace(a: &CMatrix, tol: f64) -> CMatrix {
    let n = a.cols();
    if a.rows() == 0 {
        return CMatrix::identity(n);
    }
    let CompleteElimination {
        reduced,
        col_perm,
        rank,
    } = complete_pivot_eliminate(a, tol);
    let mut basis = CMatrix::zeros(n, n - rank);
    for (c, free) in (rank..n).enumerate() {
        basis[(col_perm[free], c)] = ONE;
        for i in 0..rank {
            basis[(col_perm[i], c)] = -reduced[(i, free)];
        }
    }
    basis
}

/// Relative tolerance used when intersecting row spaces.
pub const INTERSECTION_RTOL: f64 = 1e-10;

/// Basis (as rows) of `rowspace(a) ∩ rowspace(b)`, assuming each input has
/// independent rows. Solves `u·a = v·b` through the left nullspace of the
/// stacked matrix `[a; b]`.
pub fn intersect_rowspaces(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.cols() != b.cols() {
        return Err(Error::Shape(format!(
            "row spaces in dimensions {} and {}",
            a.cols(),
            b.cols()
        )));
    }
    let stacked = a.vstack(b)?;
    let coeffs = nullspace(&stacked.transpose(), INTERSECTION_RTOL);
    let p = a.rows();
    let mut out = CMatrix::zeros(coeffs.cols(), a.cols());
    for c in 0..coeffs.cols() {
        for i in 0..p {
            let u = coeffs[(i, c)];
            if u == ZERO {
                continue;
            }
            for j in 0..a.cols() {
                out[(c, j)] += u * a[(i, j)];
            }
        }
    }
    Ok(out)
}

fn hermitian_dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// Orthonormal basis (rows) of the row space, by modified Gram–Schmidt with
/// one reorthogonalization pass. Rows whose remainder falls below `tol`
/// relative to their original norm are dropped.
pub fn orthonormal_rows(a: &CMatrix, tol: f64) -> CMatrix {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for i in 0..a.rows() {
        let mut v = a.row(i).to_vec();
        let original = vec_norm(&v);
        if original == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for q in &basis {
                let c = hermitian_dot(q, &v);
                v.iter_mut().zip(q).for_each(|(x, qi)| *x -= c * qi);
            }
        }
        let nv = vec_norm(&v);
        if nv > tol * original {
            v.iter_mut().for_each(|x| *x /= nv);
            basis.push(v);
        }
    }
    let rows = basis.len();
    CMatrix {
        rows,
        cols: a.cols(),
        data: basis.concat(),
    }
}

/// Upper bound on the sine of the largest principal angle between the row
/// spaces of `a` and `b` (equal dimensions assumed): the Frobenius norm of
/// the component of an orthonormal basis of `a` orthogonal to `b`.
pub fn principal_angle_sine_bound(a: &CMatrix, b: &CMatrix, tol: f64) -> f64 {
    let qa = orthonormal_rows(a, tol);
    let qb = orthonormal_rows(b, tol);
    if qa.rows() != qb.rows() {
        return 1.0;
    }
    let mut total = 0.0;
    for i in 0..qa.rows() {
        let mut v = qa.row(i).to_vec();
        for j in 0..qb.rows() {
            let c = hermitian_dot(qb.row(j), &v);
            v.iter_mut().zip(qb.row(j)).for_each(|(x, q)| *x -= c * q);
        }
        total += v.iter().map(|z| z.norm_sqr()).sum::<f64>();
    }
    total.sqrt().min(1.0)
}

/// Power-iteration estimate of the induced 2-norm (largest singular value).
/// Always a lower bound up to rounding.
pub fn spectral_norm_estimate(a: &CMatrix, iterations: usize) -> f64 {
    if a.rows() == 0 || a.cols() == 0 {
        return 0.0;
    }
    let ah = a.conj_transpose();
    // deterministic start with no special alignment to coordinate axes
    let mut v: Vec<Complex64> = (0..a.cols())
        .map(|j| Complex64::new(1.0 + 0.1 * j as f64, 0.05 * j as f64))
        .collect();
    let mut estimate = 0.0;
    for _ in 0..iterations {
        let nv = vec_norm(&v);
        if nv == 0.0 {
            return 0.0;
        }
        v.iter_mut().for_each(|z| *z /= nv);
        let av = a.mul_vec(&v).expect("shape");
        estimate = vec_norm(&av);
        v = ah.mul_vec(&av).expect("shape");
    }
    estimate
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> CMatrix {
        let mut rng = SeededRng::new(seed);
        let data = (0..rows * cols).map(|_| rng.complex_square()).collect();
        CMatrix::from_vec(rows, cols, data).unwrap()
    }

    #[test]
    fn lu_of_identity() {
        let lu = lu_decompose(&CMatrix::identity(4)).unwrap();
        assert_eq!(lu.lower(), CMatrix::identity(4));
        assert_eq!(lu.upper(), CMatrix::identity(4));
        assert!(!lu.parity_odd());
        assert_eq!(lu.singular_pivot(), None);
    }

    #[test]
    fn lu_of_swap() {
        let a = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let lu = lu_decompose(&a).unwrap();
        assert!(lu.parity_odd());
        assert_eq!(lu.determinant(), c(-1.0, 0.0));
    }

    #[test]
    fn lu_rejects_non_square() {
        assert!(matches!(
            lu_decompose(&CMatrix::zeros(2, 3)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn lu_reconstruction_residual() {
        for (n, seed) in [(5, 1), (12, 2), (30, 3), (50, 4)] {
            let a = random_matrix(n, n, seed);
            let lu = lu_decompose(&a).unwrap();
            let pa = a.select_rows(lu.permutation().iter().copied());
            let prod = &lu.lower() * &lu.upper();
            assert!(pa.max_abs_diff(&prod) < 1e-12 * a.frobenius_norm());
        }
    }

    #[test]
    fn determinants() {
        assert_eq!(det(&CMatrix::identity(3)).unwrap(), c(1.0, 0.0));
        let d = CMatrix::diagonal(&[c(2.0, 0.0), c(0.0, 3.0)]);
        assert!((det(&d).unwrap() - c(0.0, 6.0)).norm() < 1e-15);
        let a = random_matrix(4, 4, 10);
        let b = random_matrix(4, 4, 11);
        let lhs = det(&a).unwrap() * det(&b).unwrap();
        let rhs = det(&(&a * &b)).unwrap();
        assert!((lhs - rhs).norm() < 1e-10 * rhs.norm());
    }

    #[test]
    fn det_multiplicativity_sweep() {
        for seed in 0..20 {
            let n = 2 + (seed as usize % 8);
            let a = random_matrix(n, n, 100 + seed);
            let b = random_matrix(n, n, 200 + seed);
            let lhs = det(&a).unwrap() * det(&b).unwrap();
            let rhs = det(&(&a * &b)).unwrap();
            assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm(), "seed {seed}");
        }
    }

    #[test]
    fn solves() {
        let b = vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 1.0)];
        assert_eq!(solve_linear(&CMatrix::identity(3), &b).unwrap(), b);
        let two = CMatrix::diagonal(&[c(2.0, 0.0); 3]);
        let x = solve_linear(&two, &[c(4.0, 0.0), c(2.0, 0.0), c(0.0, 2.0)]).unwrap();
        assert_eq!(x, vec![c(2.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)]);

        let a = random_matrix(8, 8, 5);
        let mut rng = SeededRng::new(6);
        let b: Vec<Complex64> = (0..8).map(|_| rng.complex_square()).collect();
        let x = solve_linear(&a, &b).unwrap();
        let r = a.mul_vec(&x).unwrap();
        assert!(vec_dist(&r, &b) <= 1e-10 * vec_norm(&b));
    }

    #[test]
    fn singular_solve_reports_pivot() {
        let a = CMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert_eq!(
            solve_linear(&a, &[c(1.0, 0.0), c(1.0, 0.0)]),
            Err(Error::Singular { pivot: 1 })
        );
    }

    #[test]
    fn ranks() {
        assert_eq!(numeric_rank(&CMatrix::zeros(3, 4), 1e-12), 0);
        assert_eq!(numeric_rank(&CMatrix::identity(5), 1e-12), 5);
        let u = random_matrix(6, 1, 7);
        let v = random_matrix(1, 5, 8);
        assert_eq!(numeric_rank(&(&u * &v), 1e-10), 1);
        for r in 1..=10 {
            let a = random_matrix(12, r, 30 + r as u64);
            let b = random_matrix(r, 11, 60 + r as u64);
            assert_eq!(numeric_rank(&(&a * &b), 1e-10), r);
        }
    }

    #[test]
    fn inverse_transposes() {
        assert_eq!(
            inverse_transpose(&CMatrix::identity(3)).unwrap(),
            CMatrix::identity(3)
        );
        let d = CMatrix::diagonal(&[c(2.0, 0.0), c(4.0, 0.0)]);
        assert_eq!(
            inverse_transpose(&d).unwrap(),
            CMatrix::diagonal(&[c(0.5, 0.0), c(0.25, 0.0)])
        );
        let a = random_matrix(6, 6, 9);
        let it = inverse_transpose(&a).unwrap();
        let prod = &a.transpose() * &it;
        assert!(prod.max_abs_diff(&CMatrix::identity(6)) < 1e-10);
        assert!(matches!(
            inverse_transpose(&CMatrix::zeros(2, 2)),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn nullspace_annihilates() {
        let a = random_matrix(3, 7, 12);
        let z = nullspace(&a, 1e-12);
        assert_eq!(z.cols(), 4);
        assert!((&a * &z).max_abs() < 1e-12);
    }

    #[test]
    fn intersections() {
        let a = random_matrix(3, 5, 13);
        let same = intersect_rowspaces(&a, &a).unwrap();
        assert_eq!(same.rows(), 3);
        assert_eq!(numeric_rank(&same.vstack(&a).unwrap(), 1e-10), 3);

        let e1 = CMatrix::from_real_rows(&[&[1.0, 0.0]]);
        let e2 = CMatrix::from_real_rows(&[&[0.0, 1.0]]);
        let empty = intersect_rowspaces(&e1, &e2).unwrap();
        assert_eq!((empty.rows(), empty.cols()), (0, 2));

        // a generic 3-space and 4-space in C^6 meet in a line
        let p = random_matrix(3, 6, 14);
        let q = random_matrix(4, 6, 15);
        let line = intersect_rowspaces(&p, &q).unwrap();
        assert_eq!(line.rows(), 1);
        assert_eq!(numeric_rank(&p.vstack(&line).unwrap(), 1e-10), 3);
        assert_eq!(numeric_rank(&q.vstack(&line).unwrap(), 1e-10), 4);
    }

    #[test]
    fn principal_angles() {
        let a = random_matrix(2, 5, 16);
        let mix = random_matrix(2, 2, 17);
        let b = &mix * &a;
        assert!(principal_angle_sine_bound(&a, &b, 1e-12) < 1e-12);
        let other = random_matrix(2, 5, 18);
        assert!(principal_angle_sine_bound(&a, &other, 1e-12) > 1e-3);
    }

    #[test]
    fn spectral_norm_is_bracketed() {
        let a = random_matrix(7, 7, 19);
        let est = spectral_norm_estimate(&a, 20);
        assert!(est <= a.frobenius_norm() * (1.0 + 1e-12));
        assert!(est >= a.frobenius_norm() / (7f64).sqrt() * 0.999);
        let d = CMatrix::diagonal(&[c(3.0, 0.0), c(1.0, 0.0)]);
        assert!((spectral_norm_estimate(&d, 20) - 3.0).abs() < 1e-6);
    }
}
