use super::{DenseMatrix, Scalar};
use crate::{Error, Result};

/// Singular values below `DEFAULT_RANK_TOL · σ_max` count as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 80;

/// One-sided (Hestenes) Jacobi: orthogonalises the columns of `a` by plane
/// rotations. Returns the column norms (singular values, unsorted) and the
/// accumulated right rotation `V`, so that `a · V` has orthogonal columns.
fn jacobi<S: Scalar>(a: &DenseMatrix<S>) -> (Vec<f64>, DenseMatrix<S>) {
    let (m, n) = (a.rows(), a.cols());
    // column-major working copies
    let mut u: Vec<Vec<S>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<S>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { S::one() } else { S::zero() }).collect())
        .collect();
    let eps = f64::EPSILON;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = u[p].iter().map(|x| x.modulus_sqr()).sum();
                let beta: f64 = u[q].iter().map(|x| x.modulus_sqr()).sum();
                let gamma = (0..m).fold(S::zero(), |acc, i| acc + u[p][i].conj() * u[q][i]);
                let g = gamma.modulus();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // phase that makes the off-diagonal Gram entry real
                let phase = gamma.scale(1.0 / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for col in [&mut u, &mut v] {
                    let len = col[p].len();
                    for i in 0..len {
                        let xp = col[p][i];
                        let xq = col[q][i] * phase;
                        col[p][i] = xp.scale(c) - xq.scale(s);
                        col[q][i] = xp.scale(s) + xq.scale(c);
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma = u
        .iter()
        .map(|c| c.iter().map(|x| x.modulus_sqr()).sum::<f64>().sqrt())
        .collect();
    let vmat = DenseMatrix::from_fn(n, n, |i, j| v[j][i]);
    (sigma, vmat)
}

/// Singular values in decreasing order.
pub fn singular_values<S: Scalar>(a: &DenseMatrix<S>) -> Vec<f64> {
    let (mut s, _) = jacobi(a);
    s.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    s
}

/// Number of singular values above `rel_tol · σ_max`.
pub fn numerical_rank<S: Scalar>(a: &DenseMatrix<S>, rel_tol: f64) -> usize {
    let s = singular_values(a);
    let smax = s.first().copied().unwrap_or(0.0);
    s.iter().filter(|&&v| v > rel_tol * smax).count()
}

/// Scales every column to unit max-modulus in place, returning the factors.
pub fn equilibrate_columns<S: Scalar>(a: &mut DenseMatrix<S>) -> Vec<f64> {
    let scales: Vec<f64> = (0..a.cols())
        .map(|j| {
            let m = a.column(j).iter().map(|v| v.modulus()).fold(0.0, f64::max);
            if m > 0.0 {
                1.0 / m
            } else {
                1.0
            }
        })
        .collect();
    for i in 0..a.rows() {
        for (j, s) in scales.iter().enumerate() {
            let v = a.get(i, j).scale(*s);
            a.set(i, j, v);
        }
    }
    scales
}

/// Unit vector spanning the one-dimensional null space of `a`, with the
/// default rank tolerance.
pub fn null_space_1d<S: Scalar>(a: &DenseMatrix<S>, expected_rank: usize) -> Result<Vec<S>> {
    null_space_1d_with_tol(a, expected_rank, DEFAULT_RANK_TOL)
}

/// Unit vector spanning the null space of `a`, which must have numerical rank
/// `expected_rank = cols - 1`. The sign/phase is fixed so the entry of largest
/// magnitude is positive real.
pub fn null_space_1d_with_tol<S: Scalar>(
    a: &DenseMatrix<S>,
    expected_rank: usize,
    rel_tol: f64,
) -> Result<Vec<S>> {
    let n = a.cols();
    if expected_rank + 1 != n {
        return Err(Error::InvalidArgument(format!(
            "a one-dimensional null space needs rank {} for {} columns, got {}",
            n - 1,
            n,
            expected_rank
        )));
    }
    let (sigma, v) = jacobi(a);
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let rank = sigma.iter().filter(|&&s| s > rel_tol * smax).count();
    if rank != expected_rank {
        return Err(Error::Rank {
            expected: expected_rank,
            found: rank,
        });
    }
    let jmin = sigma
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.partial_cmp(y.1).unwrap_or(std::cmp::Ordering::Equal))
        .map(|(j, _)| j)
        .unwrap_or(0);
    let mut x = v.column(jmin);
    let norm = x.iter().map(|z| z.modulus_sqr()).sum::<f64>().sqrt();
    let big = x
        .iter()
        .cloned()
        .max_by(|p, q| p.modulus().partial_cmp(&q.modulus()).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap_or(S::one());
    let phase = big.conj().scale(1.0 / (big.modulus() * norm));
    for z in &mut x {
        *z *= phase;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_row() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        let v = null_space_1d(&a, 1).unwrap();
        let r = 1.0 / 2f64.sqrt();
        // largest entry positive: the tie goes to whichever the max picks
        assert!((v[0].abs() - r).abs() < 1e-15 && (v[1].abs() - r).abs() < 1e-15);
        assert!((v[0] + v[1]).abs() < 1e-15);
    }

    #[test]
    fn full_rank_has_no_null_space() {
        let a = DenseMatrix::<f64>::identity(2);
        assert_eq!(
            null_space_1d(&a, 1).unwrap_err(),
            Error::Rank {
                expected: 1,
                found: 2
            }
        );
    }

    #[test]
    fn tall_complex_rank_deficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (m, n) = (15, 12);
        let null: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        // rows orthogonal to `null`: random rows minus their projection
        let nn: f64 = null.iter().map(|z| z.norm_sqr()).sum();
        let rows: Vec<Vec<Complex64>> = (0..m)
            .map(|_| {
                let r: Vec<Complex64> = (0..n)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                let dot = r.iter().zip(&null).fold(Complex64::new(0.0, 0.0), |a, (x, y)| a + x * y);
                r.iter().zip(&null).map(|(x, y)| x - dot * y.conj() / nn).collect()
            })
            .collect();
        let a = DenseMatrix::from_rows(&rows).unwrap();
        let v = null_space_1d(&a, n - 1).unwrap();
        let res = a.mul_vec(&v).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(res < 1e-9 * (1.0 + a.max_abs()));
        let big = v.iter().max_by(|p, q| p.norm().partial_cmp(&q.norm()).unwrap()).unwrap();
        assert!(big.im.abs() < 1e-15 && big.re > 0.0);
    }

    #[test]
    fn singular_values_of_diagonal() {
        let a = DenseMatrix::from_rows(&[vec![3.0, 0.0], vec![0.0, -5.0], vec![0.0, 0.0]]).unwrap();
        let s = singular_values(&a);
        assert!((s[0] - 5.0).abs() < 1e-15 && (s[1] - 3.0).abs() < 1e-15);
    }
}
