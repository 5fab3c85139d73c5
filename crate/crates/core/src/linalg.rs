//! Small dense linear algebra: Householder QR with column pivoting.
//!
//! Matrices here are at most a few dozen rows, so everything is stored
//! row-major in a flat `Vec<f64>` and factored in place.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix whose rows are the given vectors.
    ///
    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Self { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Scales every nonzero row to unit Euclidean norm.
    /// Alternately normalizes rows and columns to unit 2-norm, `sweeps`
    /// times. Returns the accumulated column scale `d`: the result is
    /// `R·A·diag(d)` for some positive diagonal `R`.
    pub fn equilibrate(&mut self, sweeps: usize) -> Vec<f64> {
        let mut d = vec![1.0; self.cols];
        for _ in 0..sweeps {
            self.normalize_rows();
            for (j, dj) in d.iter_mut().enumerate() {
                let n = libm::sqrt((0..self.rows).map(|i| self[(i, j)] * self[(i, j)]).sum());
                if n > 0.0 {
                    (0..self.rows).for_each(|i| self[(i, j)] /= n);
                    *dj /= n;
                }
            }
        }
        d
    }

    pub fn normalize_rows(&mut self) {
        let cols = self.cols;
        for r in self.data.chunks_mut(cols) {
            let n = norm(r);
            if n > 0.0 {
                r.iter_mut().for_each(|x| *x /= n);
            }
        }
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

/// `A P = Q R` with `Q` orthogonal, `R` upper triangular and `P` a column
/// permutation chosen so that `|R[0,0]| >= |R[1,1]| >= ...`.
#[derive(Debug, Clone)]
pub struct PivotedQr {
    q: Matrix,
    r_diag: Vec<f64>,
    perm: Vec<usize>,
}

impl PivotedQr {
    pub fn new(a: &Matrix) -> Self {
        let (m, n) = (a.rows, a.cols);
        let mut r = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let steps = m.min(n);
        let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(steps);
        let mut r_diag = Vec::with_capacity(steps);

        for j in 0..steps {
            // Recomputing the trailing column norms each step keeps the
            // pivot choice exact; the matrices are tiny.
            let (pivot, _) = (j..n)
                .map(|c| (c, (j..m).map(|i| r[(i, c)] * r[(i, c)]).sum::<f64>()))
                .fold((j, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot != j {
                for i in 0..m {
                    let tmp = r[(i, j)];
                    r[(i, j)] = r[(i, pivot)];
                    r[(i, pivot)] = tmp;
                }
                perm.swap(j, pivot);
            }

            let mut v: Vec<f64> = (j..m).map(|i| r[(i, j)]).collect();
            let alpha = norm(&v);
            if alpha == 0.0 {
                reflectors.push(Vec::new());
                r_diag.push(0.0);
                continue;
            }
            let beta = if v[0] >= 0.0 { -alpha } else { alpha };
            v[0] -= beta;
            let vn = norm(&v);
            v.iter_mut().for_each(|x| *x /= vn);
            for c in j..n {
                let s: f64 = (j..m).map(|i| v[i - j] * r[(i, c)]).sum();
                for i in j..m {
                    r[(i, c)] -= 2.0 * v[i - j] * s;
                }
            }
            r_diag.push(r[(j, j)]);
            reflectors.push(v);
        }

        // Q = H_0 H_1 ... H_{s-1}, applied to the identity from the right end.
        let mut q = Matrix::identity(m);
        for (j, v) in reflectors.iter().enumerate().rev() {
            if v.is_empty() {
                continue;
            }
            for c in 0..m {
                let s: f64 = (j..m).map(|i| v[i - j] * q[(i, c)]).sum();
                for i in j..m {
                    q[(i, c)] -= 2.0 * v[i - j] * s;
                }
            }
        }

        Self { q, r_diag, perm }
    }

    pub fn q(&self) -> &Matrix {
        &self.q
    }

    pub fn r_diag(&self) -> &[f64] {
        &self.r_diag
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// Number of diagonal entries of `R` above `rel_tol * |R[0,0]|`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let lead = self.r_diag.first().map_or(0.0, |x| libm::fabs(*x));
        if lead == 0.0 {
            return 0;
        }
        self.r_diag.iter().take_while(|d| libm::fabs(**d) > rel_tol * lead).count()
    }

    /// Ratio of the largest to the smallest `|R[j,j]|`, a cheap lower
    /// estimate of the 2-norm condition number.
    pub fn condition_estimate(&self) -> f64 {
        let lead = self.r_diag.first().map_or(0.0, |x| libm::fabs(*x));
        let tail = self.r_diag.last().map_or(0.0, |x| libm::fabs(*x));
        if tail == 0.0 {
            f64::INFINITY
        } else {
            lead / tail
        }
    }
}

/// Orthonormal basis of the null space of `a` (as columns of the returned
/// vectors), using a pivoted QR of `aᵀ` with relative rank threshold `rel_tol`.
pub fn null_space(a: &Matrix, rel_tol: f64) -> Vec<Vec<f64>> {
    let qr = PivotedQr::new(&a.transpose());
    let rank = qr.rank(rel_tol);
    (rank..a.cols).map(|j| qr.q().column(j)).collect()
}

/// Numerical rank of a family of vectors.
pub fn rank_of(vectors: &[Vec<f64>], rel_tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = Matrix::from_rows(vectors).transpose();
    PivotedQr::new(&m).rank(rel_tol)
}

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting; `None` when a pivot falls below `1e-14` times the largest entry.
pub fn solve(a: &Matrix, b: &[f64]) -> Option<Vec<f64>> {
    let n = a.rows;
    assert!(a.cols == n && b.len() == n, "solve needs a square system");
    let mut m = a.clone();
    let mut x = b.to_vec();
    let scale = m.data.iter().fold(0.0f64, |s, v| s.max(libm::fabs(*v)));
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| libm::fabs(m[(i, c)]).total_cmp(&libm::fabs(m[(j, c)])))?;
        if !(libm::fabs(m[(p, c)]) > 1e-14 * scale) {
            return None;
        }
        if p != c {
            for j in 0..n {
                m.data.swap(p * n + j, c * n + j);
            }
            x.swap(p, c);
        }
        for i in c + 1..n {
            let f = m[(i, c)] / m[(c, c)];
            for j in c..n {
                m[(i, j)] -= f * m[(c, j)];
            }
            x[i] -= f * x[c];
        }
    }
    for c in (0..n).rev() {
        let s: f64 = (c + 1..n).map(|j| m[(c, j)] * x[j]).sum();
        x[c] = (x[c] - s) / m[(c, c)];
    }
    Some(x)
}
