use super::Scalar;
use crate::{Error, Result};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::from_vec(rows.len(), cols, rows.concat())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| S::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
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

    pub fn data(&self) -> &[S] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut S {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn map(&self, f: impl Fn(S) -> S) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == S::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    *out.get_mut(i, j) += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(S::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.modulus()).fold(0.0, f64::max)
    }

    /// Copy of the block `rows × cols` ranges.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let (r0, c0) = (rows.start, cols.start);
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(r0 + i, c0 + j))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

/// Square root of the sum of squared magnitudes.
pub fn frobenius<S: Scalar>(a: &DenseMatrix<S>) -> f64 {
    a.data().iter().map(|v| v.modulus_sqr()).sum::<f64>().sqrt()
}

/// LU factorisation with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu<S> {
    lu: DenseMatrix<S>,
    perm: Vec<usize>,
}

impl<S: Scalar> Lu<S> {
    /// Pivots smaller than `1e-14 · max|a|` are treated as zero.
    pub fn factor(a: &DenseMatrix<S>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension(format!(
                "LU needs a square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let tol = 1e-14 * a.max_abs();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu.get(i, k).modulus()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax <= tol || pmax == 0.0 {
                return Err(Error::Singular { row: k });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu.get(k, j);
                    lu.set(k, j, lu.get(p, j));
                    lu.set(p, j, tmp);
                }
                perm.swap(k, p);
            }
            let pivot = lu.get(k, k);
            for i in k + 1..n {
                let factor = lu.get(i, k) / pivot;
                lu.set(i, k, factor);
                if factor == S::zero() {
                    continue;
                }
                for j in k + 1..n {
                    let v = lu.get(k, j);
                    *lu.get_mut(i, j) -= factor * v;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, rhs: &[S]) -> Result<Vec<S>> {
        let n = self.lu.rows();
        if rhs.len() != n {
            return Err(Error::Dimension(format!(
                "rhs has length {}, matrix has {} rows",
                rhs.len(),
                n
            )));
        }
        let mut y: Vec<S> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let l = self.lu.get(i, k);
                let yk = y[k];
                y[i] -= l * yk;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = self.lu.get(i, k);
                let yk = y[k];
                y[i] -= u * yk;
            }
            y[i] /= self.lu.get(i, i);
        }
        Ok(y)
    }

    /// Solves for every column of `b`.
    pub fn solve_matrix(&self, b: &DenseMatrix<S>) -> Result<DenseMatrix<S>> {
        let mut out = DenseMatrix::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            let x = self.solve(&b.column(j))?;
            for (i, v) in x.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        Ok(out)
    }
}

/// Gaussian elimination with partial pivoting.
pub fn solve_dense<S: Scalar>(a: &DenseMatrix<S>, rhs: &[S]) -> Result<Vec<S>> {
    Lu::factor(a)?.solve(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn one_by_one() {
        let a = DenseMatrix::from_vec(1, 1, vec![5.0]).unwrap();
        assert_eq!(solve_dense(&a, &[10.0]).unwrap(), vec![2.0]);
    }

    #[test]
    fn rotation_by_quarter_turn() {
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        let x = solve_dense(&a, &[1.0, 0.0]).unwrap();
        assert_eq!(x, vec![0.0, 1.0]);
        let a = DenseMatrix::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let x = solve_dense(&a, &[1.0, 0.0]).unwrap();
        assert_eq!(x, vec![0.0, -1.0]);
    }

    #[test]
    fn random_twelve_by_twelve_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let n = 12;
        let a = DenseMatrix::from_fn(n, n, |i, j| {
            rng.gen_range(-1.0..1.0) + if i == j { 4.0 } else { 0.0 }
        });
        let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = solve_dense(&a, &rhs).unwrap();
        let back = a.mul_vec(&x);
        let norm = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
        let res = back
            .iter()
            .zip(&rhs)
            .map(|(b, r)| (b - r).abs())
            .fold(0.0, f64::max);
        assert!(res < 1e-11 * norm, "residual {res}");
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(solve_dense(&a, &[1.0, 1.0]), Err(Error::Singular { .. })));
    }

    #[test]
    fn complex_solve() {
        let i = Complex64::i();
        let a = DenseMatrix::from_rows(&[vec![1.0 + i, 2.0.into()], vec![i, 3.0 - i]]).unwrap();
        let x_true = vec![Complex64::new(1.0, -2.0), Complex64::new(0.5, 0.25)];
        let rhs = a.mul_vec(&x_true);
        let x = solve_dense(&a, &rhs).unwrap();
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).norm() < 1e-14);
        }
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(frobenius(&DenseMatrix::<f64>::zeros(3, 2)), 0.0);
        let a = DenseMatrix::from_rows(&[vec![3.0, 4.0]]).unwrap();
        assert_eq!(frobenius(&a), 5.0);
        let id = DenseMatrix::<f64>::identity(7);
        assert!((frobenius(&id) - 7f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn symmetric_matrix_has_zero_skew_part() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = DenseMatrix::from_fn(9, 9, |_, _| rng.gen_range(-1.0..1.0));
        let s = b.add(&b.transpose()).unwrap();
        assert_eq!(frobenius(&s.sub(&s.transpose()).unwrap()), 0.0);
    }
}
