//! Small dense solvers: Cholesky for SPD systems and column-pivoted
//! Householder QR for least squares. Sized for the handful of columns the
//! regressions here need; nothing is blocked or vectorised.

use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Matrix { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// `XᵀX`.
    pub fn gram(&self) -> Matrix<T> {
        let mut g = Matrix::zeros(self.cols, self.cols);
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..self.cols {
                let ri = row[i];
                for j in i..self.cols {
                    g.data[i * self.cols + j] += ri * row[j];
                }
            }
        }
        for i in 0..self.cols {
            for j in 0..i {
                g.data[i * self.cols + j] = g.data[j * self.cols + i];
            }
        }
        g
    }

    /// `Xᵀy`.
    pub fn t_mul_vec(&self, y: &[T]) -> Vec<T> {
        assert_eq!(y.len(), self.rows);
        let mut out = vec![T::zero(); self.cols];
        for (r, &yr) in y.iter().enumerate() {
            for (o, &x) in out.iter_mut().zip(self.row(r)) {
                *o += x * yr;
            }
        }
        out
    }

    /// `Xβ`.
    pub fn mul_vec(&self, beta: &[T]) -> Vec<T> {
        assert_eq!(beta.len(), self.cols);
        (0..self.rows).map(|r| self.row(r).iter().zip(beta).map(|(&a, &b)| a * b).sum()).collect()
    }
}

/// Lower-triangular Cholesky factor of an SPD matrix.
#[derive(Debug, Clone)]
pub struct Cholesky<T> {
    n: usize,
    l: Vec<T>,
}

impl<T: Scalar> Cholesky<T> {
    /// Returns `None` if a pivot is not strictly positive.
    pub fn factor(a: &Matrix<T>) -> Option<Self> {
        assert_eq!(a.rows, a.cols);
        let n = a.rows;
        let mut l = vec![T::zero(); n * n];
        for j in 0..n {
            let mut d = a.get(j, j);
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if !(d > T::zero()) || !d.is_finite() {
                return None;
            }
            let djj = d.sqrt();
            l[j * n + j] = djj;
            for i in (j + 1)..n {
                let mut s = a.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / djj;
            }
        }
        Some(Cholesky { n, l })
    }

    /// Cheap lower bound on the 2-norm condition number of the factored matrix.
    pub fn condition_estimate(&self) -> T {
        let diag: Vec<T> = (0..self.n).map(|i| self.l[i * self.n + i]).collect();
        let hi = diag.iter().copied().fold(T::zero(), T::max);
        let lo = diag.iter().copied().fold(T::infinity(), T::min);
        let r = hi / lo;
        r * r
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        let mut z = b.to_vec();
        for i in 0..n {
            let mut s = z[i];
            for k in 0..i {
                s -= self.l[i * n + k] * z[k];
            }
            z[i] = s / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = z[i];
            for k in (i + 1)..n {
                s -= self.l[k * n + i] * z[k];
            }
            z[i] = s / self.l[i * n + i];
        }
        z
    }
}

/// Least-squares solve of `min ‖Xβ − y‖` by Householder QR with column pivoting.
///
/// On rank deficiency returns `Err(column)` naming the first original column
/// that is numerically dependent on the ones already chosen.
pub fn lstsq_pivoted_qr<T: Scalar>(x: &Matrix<T>, y: &[T]) -> Result<Vec<T>, usize> {
    let (m, n) = (x.rows, x.cols);
    assert!(m >= n, "need at least as many rows as columns");
    let mut a = x.clone();
    let mut b = y.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let tol_scale = T::epsilon() * T::from_count(m.max(n)) * T::lit(10.0);
    let mut r00 = T::zero();

    let col_norm =
        |a: &Matrix<T>, c: usize, from: usize| -> T { (from..m).map(|r| a.get(r, c) * a.get(r, c)).sum::<T>().sqrt() };
    let original_norms: Vec<T> = (0..n).map(|c| col_norm(&a, c, 0)).collect();

    for k in 0..n {
        let (best, best_norm) =
            (k..n)
                .map(|c| (c, col_norm(&a, c, k)))
                .fold((k, T::neg_infinity()), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if best != k {
            for r in 0..m {
                let tmp = a.get(r, k);
                a.set(r, k, a.get(r, best));
                a.set(r, best, tmp);
            }
            perm.swap(k, best);
        }
        if k == 0 {
            r00 = best_norm;
        }
        let scale = if r00 > T::zero() { r00 } else { T::one() };
        if !(best_norm > tol_scale * scale) || best_norm <= tol_scale * original_norms[perm[k]] {
            return Err(perm[k]);
        }
        // Householder vector v with H = I − 2vvᵀ/(vᵀv) mapping a[k.., k] to ±‖·‖e₁.
        let alpha = if a.get(k, k) > T::zero() { -best_norm } else { best_norm };
        let mut v: Vec<T> = (k..m).map(|r| a.get(r, k)).collect();
        v[0] -= alpha;
        let vtv: T = v.iter().map(|&e| e * e).sum();
        if vtv > T::zero() {
            for c in k..n {
                let dot: T = v.iter().enumerate().map(|(i, &vi)| vi * a.get(k + i, c)).sum();
                let f = T::two() * dot / vtv;
                for (i, &vi) in v.iter().enumerate() {
                    let cur = a.get(k + i, c);
                    a.set(k + i, c, cur - f * vi);
                }
            }
            let dot: T = v.iter().enumerate().map(|(i, &vi)| vi * b[k + i]).sum();
            let f = T::two() * dot / vtv;
            for (i, &vi) in v.iter().enumerate() {
                b[k + i] -= f * vi;
            }
        }
    }

    let mut z = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in (i + 1)..n {
            s -= a.get(i, j) * z[j];
        }
        z[i] = s / a.get(i, i);
    }
    let mut beta = vec![T::zero(); n];
    for (k, &orig) in perm.iter().enumerate() {
        beta[orig] = z[k];
    }
    Ok(beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_solves_spd_system() {
        let a = Matrix::<f64>::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]);
        let c = Cholesky::factor(&a).unwrap();
        let x = c.solve(&[2.0, 1.0]);
        assert!((x[0] - 0.5).abs() < 1e-12 && x[1].abs() < 1e-12);
        assert!(Cholesky::factor(&Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]])).is_none());
    }

    #[test]
    fn qr_recovers_exact_solution_and_flags_dependency() {
        let x = Matrix::<f64>::from_rows(&[
            vec![1.0, 0.0, 2.0],
            vec![1.0, 1.0, 1.0],
            vec![1.0, 2.0, 5.0],
            vec![1.0, 3.0, 0.0],
        ]);
        let beta = [1.0, -2.0, 0.5];
        let y = x.mul_vec(&beta);
        let got = lstsq_pivoted_qr(&x, &y).unwrap();
        for (g, b) in got.iter().zip(beta) {
            assert!((g - b).abs() < 1e-12);
        }
        let dep = Matrix::from_rows(&[vec![1.0, 2.0], vec![1.0, 2.0], vec![1.0, 2.0]]);
        assert!(lstsq_pivoted_qr(&dep, &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn qr_works_in_f32() {
        let x = Matrix::from_rows(&[vec![1.0f32, 0.0], vec![1.0, 1.0], vec![1.0, 2.0]]);
        let y = x.mul_vec(&[2.0, 3.0]);
        let got = lstsq_pivoted_qr(&x, &y).unwrap();
        assert!((got[0] - 2.0).abs() < 1e-5 && (got[1] - 3.0).abs() < 1e-5);
    }
}
