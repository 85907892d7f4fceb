//! Skew-symmetric matrices and their Pfaffians.

use num_complex::Complex64;

/// Pivot when the sub-diagonal entry is below this fraction of the column
/// maximum.
const PIVOT_RATIO: f64 = 1e-3;

/// Complex skew-symmetric matrix storing the strict upper triangle only, so
/// `A = -Aᵀ` holds exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMatrix {
    n: usize,
    upper: Vec<Complex64>,
}

impl SkewMatrix {
    pub fn zeros(n: usize) -> Self {
        SkewMatrix {
            n,
            upper: vec![Complex64::new(0.0, 0.0); n * n.saturating_sub(1) / 2],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        // Row i starts after sum_{r<i} (n-1-r) entries.
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.upper[self.index(i, j)],
            std::cmp::Ordering::Greater => -self.upper[self.index(j, i)],
            std::cmp::Ordering::Equal => Complex64::new(0.0, 0.0),
        }
    }

    /// Sets `A[i][j] = v` and `A[j][i] = -v`. Diagonal writes are ignored.
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => {
                let k = self.index(i, j);
                self.upper[k] = v;
            }
            std::cmp::Ordering::Greater => {
                let k = self.index(j, i);
                self.upper[k] = -v;
            }
            std::cmp::Ordering::Equal => {}
        }
    }

    pub fn add(&mut self, i: usize, j: usize, v: Complex64) {
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// `P A Pᵀ` with `(P A Pᵀ)[i][j] = A[perm[i]][perm[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> SkewMatrix {
        let mut out = SkewMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in i + 1..self.n {
                out.set(i, j, self.get(perm[i], perm[j]));
            }
        }
        out
    }
}

/// Pfaffian by skew-symmetric Gaussian elimination (Parlett–Reid style) with
/// threshold pivoting. Odd dimension gives 0.
pub fn pfaffian(a: &SkewMatrix) -> Complex64 {
    let n = a.n;
    let zero = Complex64::new(0.0, 0.0);
    if n % 2 == 1 {
        return zero;
    }
    let mut m = a.to_dense();
    let mut result = Complex64::new(1.0, 0.0);
    for k in (0..n).step_by(2) {
        let (p, colmax) = (k + 1..n)
            .map(|r| (r, m[r][k].norm()))
            .fold((k + 1, 0.0f64), |best, cur| if cur.1 > best.1 { cur } else { best });
        if colmax == 0.0 {
            return zero;
        }
        if m[k + 1][k].norm() < PIVOT_RATIO * colmax && p != k + 1 {
            m.swap(k + 1, p);
            for row in m.iter_mut() {
                row.swap(k + 1, p);
            }
            result = -result;
        }
        let pivot = m[k][k + 1];
        result *= pivot;
        let tau: Vec<Complex64> = (k + 2..n).map(|j| m[k][j] / pivot).collect();
        let col: Vec<Complex64> = (k + 2..n).map(|j| m[j][k + 1]).collect();
        for a_ in 0..tau.len() {
            for b_ in a_ + 1..tau.len() {
                let delta = tau[a_] * col[b_] - col[a_] * tau[b_];
                let (i, j) = (k + 2 + a_, k + 2 + b_);
                m[i][j] += delta;
                m[j][i] = -m[i][j];
            }
        }
    }
    result
}
