//! Eigenvalues of general square matrices: Householder reduction to upper
//! Hessenberg form followed by single-shift complex QR with Wilkinson shifts.

use super::{DenseMatrix, Scalar};
use crate::{Error, Result};
use num_complex::Complex64;

const MAX_ITER_PER_EIGENVALUE: usize = 60;

/// Unitary similarity reduction to upper Hessenberg form.
pub fn hessenberg<S: Scalar>(a: &DenseMatrix<S>) -> Result<DenseMatrix<Complex64>> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "eigenvalues need a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let mut h = DenseMatrix::from_fn(n, n, |i, j| a.get(i, j).to_complex());
    for k in 0..n.saturating_sub(2) {
        let norm: f64 = (k + 1..n).map(|i| h.get(i, k).norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = h.get(k + 1, k);
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        // v = x + phase·‖x‖·e1, reflector P = I − 2 v vᴴ / (vᴴ v)
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h.get(i, k)).collect();
        v[0] += phase * norm;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // H ← P H
        for j in 0..n {
            let dot = v
                .iter()
                .enumerate()
                .fold(Complex64::new(0.0, 0.0), |acc, (r, vr)| acc + vr.conj() * h.get(k + 1 + r, j));
            let f = dot * beta;
            for (r, vr) in v.iter().enumerate() {
                *h.get_mut(k + 1 + r, j) -= vr * f;
            }
        }
        // H ← H P
        for i in 0..n {
            let dot = v
                .iter()
                .enumerate()
                .fold(Complex64::new(0.0, 0.0), |acc, (c, vc)| acc + h.get(i, k + 1 + c) * vc);
            let f = dot * beta;
            for (c, vc) in v.iter().enumerate() {
                *h.get_mut(i, k + 1 + c) -= f * vc.conj();
            }
        }
        for i in k + 2..n {
            h.set(i, k, Complex64::new(0.0, 0.0));
        }
    }
    Ok(h)
}

/// Eigenvalue of the 2×2 block `[[a, b], [c, d]]` closer to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_tr = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// All eigenvalues of `a`, in no particular order.
///
/// Only the active diagonal block is updated during QR sweeps since
/// eigenvectors are not accumulated.
pub fn eigenvalues<S: Scalar>(a: &DenseMatrix<S>) -> Result<Vec<Complex64>> {
    let mut h = hessenberg(a)?;
    let n = h.rows();
    let mut out = Vec::with_capacity(n);
    let zero = Complex64::new(0.0, 0.0);
    let eps = f64::EPSILON;
    let scale = h.max_abs().max(f64::MIN_POSITIVE);

    let mut hi = n as isize - 1;
    let mut iter = 0usize;
    while hi >= 0 {
        let hu = hi as usize;
        if hu == 0 {
            out.push(h.get(0, 0));
            break;
        }
        // deflation search
        let mut l = hu;
        while l > 0 {
            let sub = h.get(l, l - 1).norm();
            let diag = h.get(l - 1, l - 1).norm() + h.get(l, l).norm();
            let reference = if diag == 0.0 { scale } else { diag };
            if sub <= eps * reference {
                h.set(l, l - 1, zero);
                break;
            }
            l -= 1;
        }
        if l == hu {
            out.push(h.get(hu, hu));
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > MAX_ITER_PER_EIGENVALUE {
            return Err(Error::NoConvergence {
                index: hu,
                iterations: iter - 1,
            });
        }
        let mu = if iter.is_multiple_of(11) {
            // exceptional shift to break cycles
            h.get(hu, hu) + Complex64::new(h.get(hu, hu - 1).norm(), 0.0) * 0.75
        } else {
            wilkinson_shift(
                h.get(hu - 1, hu - 1),
                h.get(hu - 1, hu),
                h.get(hu, hu - 1),
                h.get(hu, hu),
            )
        };

        for k in l..=hu {
            *h.get_mut(k, k) -= mu;
        }
        // QR by Givens on rows (k, k+1), restricted to the active block
        let mut rots: Vec<(f64, Complex64)> = Vec::with_capacity(hu - l);
        for k in l..hu {
            let x = h.get(k, k);
            let y = h.get(k + 1, k);
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (1.0, zero)
            } else if x.norm() == 0.0 {
                (0.0, y.conj() / y.norm())
            } else {
                let xn = x.norm();
                (xn / r, (x / xn) * y.conj() / r)
            };
            for j in k..=hu {
                let a0 = h.get(k, j);
                let b0 = h.get(k + 1, j);
                h.set(k, j, a0 * c + s * b0);
                h.set(k + 1, j, -s.conj() * a0 + b0 * c);
            }
            rots.push((c, s));
        }
        // RQ: right-multiply by the adjoint rotations
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let k = l + idx;
            let top = l;
            let bottom = (k + 2).min(hu);
            for i in top..=bottom {
                let a0 = h.get(i, k);
                let b0 = h.get(i, k + 1);
                h.set(i, k, a0 * c + b0 * s.conj());
                h.set(i, k + 1, -a0 * s + b0 * c);
            }
        }
        for k in l..=hu {
            *h.get_mut(k, k) += mu;
        }
    }
    Ok(out)
}
