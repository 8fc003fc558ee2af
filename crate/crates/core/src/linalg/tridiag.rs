use super::{DenseMatrix, Scalar};
use crate::{Error, Result};

/// Tridiagonal matrix stored by diagonals.
///
/// `lower[i]` sits at `(i + 1, i)`, `upper[i]` at `(i, i + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiag<S> {
    lower: Vec<S>,
    diag: Vec<S>,
    upper: Vec<S>,
}

/// Result of a double sweep together with the number of multiplications and
/// divisions it performed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSolution<S> {
    pub x: Vec<S>,
    pub ops: usize,
}

impl<S: Scalar> Tridiag<S> {
    pub fn new(lower: Vec<S>, diag: Vec<S>, upper: Vec<S>) -> Result<Self> {
        let m = diag.len();
        if m == 0 || lower.len() + 1 != m || upper.len() + 1 != m {
            return Err(Error::Dimension(format!(
                "tridiagonal lengths lower={}, diag={}, upper={}",
                lower.len(),
                m,
                upper.len()
            )));
        }
        Ok(Self { lower, diag, upper })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn lower(&self) -> &[S] {
        &self.lower
    }

    pub fn diag(&self) -> &[S] {
        &self.diag
    }

    pub fn upper(&self) -> &[S] {
        &self.upper
    }

    pub fn mul_vec(&self, x: &[S]) -> Vec<S> {
        let m = self.len();
        assert_eq!(x.len(), m, "vector length must match matrix size");
        (0..m)
            .map(|i| {
                let mut acc = self.diag[i] * x[i];
                if i > 0 {
                    acc += self.lower[i - 1] * x[i - 1];
                }
                if i + 1 < m {
                    acc += self.upper[i] * x[i + 1];
                }
                acc
            })
            .collect()
    }

    pub fn to_dense(&self) -> DenseMatrix<S> {
        let m = self.len();
        DenseMatrix::from_fn(m, m, |i, j| {
            if i == j {
                self.diag[i]
            } else if i == j + 1 {
                self.lower[j]
            } else if j == i + 1 {
                self.upper[i]
            } else {
                S::zero()
            }
        })
    }
}

/// Double-sweep (Thomas) solve of `m · x = rhs`.
///
/// Per row the sweep does one multiplication and one division for the
/// elimination coefficient, one multiplication and one division for the
/// right-hand side and one multiplication in back substitution: `5m` minus
/// the few operations the end rows skip.
pub fn solve_tridiag<S: Scalar>(m: &Tridiag<S>, rhs: &[S]) -> Result<SweepSolution<S>> {
    let n = m.len();
    if rhs.len() != n {
        return Err(Error::Dimension(format!(
            "rhs has length {}, matrix has {} rows",
            rhs.len(),
            n
        )));
    }
    let mut ops = 0usize;
    let mut w = vec![S::zero(); n];
    let mut g = vec![S::zero(); n];

    let pivot_ok = |p: S| p.modulus() > f64::MIN_POSITIVE && p.is_finite();

    let d0 = m.diag[0];
    if !pivot_ok(d0) {
        return Err(Error::Singular { row: 0 });
    }
    if n > 1 {
        w[0] = m.upper[0] / d0;
        ops += 1;
    }
    g[0] = rhs[0] / d0;
    ops += 1;

    for i in 1..n {
        let a = m.lower[i - 1];
        let denom = m.diag[i] - a * w[i - 1];
        ops += 1;
        if !pivot_ok(denom) {
            return Err(Error::Singular { row: i });
        }
        if i + 1 < n {
            w[i] = m.upper[i] / denom;
            ops += 1;
        }
        g[i] = (rhs[i] - a * g[i - 1]) / denom;
        ops += 2;
    }

    let mut x = g;
    for i in (0..n.saturating_sub(1)).rev() {
        let next = x[i + 1];
        x[i] -= w[i] * next;
        ops += 1;
    }
    Ok(SweepSolution { x, ops })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn identity_system() {
        let m = Tridiag::new(vec![0.0; 2], vec![1.0; 3], vec![0.0; 2]).unwrap();
        let sol = solve_tridiag(&m, &[3.0, 4.0, 5.0]).unwrap();
        assert_eq!(sol.x, vec![3.0, 4.0, 5.0]);
    }

    #[test]
    fn two_by_two_hand_check() {
        let m = Tridiag::new(vec![1.0], vec![2.0, 2.0], vec![1.0]).unwrap();
        let sol = solve_tridiag(&m, &[3.0, 3.0]).unwrap();
        assert!((sol.x[0] - 1.0).abs() < 1e-15);
        assert!((sol.x[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_pivot_names_row() {
        // second pivot: 1 - 1 * (1/1) = 0
        let m = Tridiag::new(vec![1.0, 1.0], vec![1.0, 1.0, 3.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(
            solve_tridiag(&m, &[1.0, 1.0, 1.0]).unwrap_err(),
            Error::Singular { row: 1 }
        );
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(Tridiag::new(vec![1.0], vec![1.0; 3], vec![1.0; 2]).is_err());
        let m = Tridiag::new(vec![0.0], vec![1.0; 2], vec![0.0]).unwrap();
        assert!(solve_tridiag(&m, &[1.0]).is_err());
    }

    #[test]
    fn operation_count_is_five_per_row() {
        let n = 40;
        let m = Tridiag::new(vec![-1.0; n - 1], vec![4.0; n], vec![-1.0; n - 1]).unwrap();
        let sol = solve_tridiag(&m, &vec![1.0; n]).unwrap();
        assert_eq!(sol.ops, 5 * n - 4);
    }

    #[test]
    fn complex_system_residual() {
        let n = 12;
        let i = Complex64::i();
        let lower: Vec<_> = (0..n - 1).map(|k| Complex64::new(0.3, k as f64 * 0.01)).collect();
        let upper: Vec<_> = (0..n - 1).map(|k| Complex64::new(-0.2, 0.1) * k as f64).collect();
        let diag: Vec<_> = (0..n).map(|k| 3.0 + i * (k as f64)).collect();
        let m = Tridiag::new(lower, diag, upper).unwrap();
        let rhs: Vec<_> = (0..n).map(|k| Complex64::new(k as f64, 1.0)).collect();
        let x = solve_tridiag(&m, &rhs).unwrap().x;
        let back = m.mul_vec(&x);
        for (b, r) in back.iter().zip(&rhs) {
            assert!((b - r).norm() < 1e-12 * 20.0);
        }
    }
}
