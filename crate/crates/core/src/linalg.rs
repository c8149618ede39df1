//! Small dense complex linear algebra: LU with partial pivoting.
//!
//! Systems here have dimension twice the edge count, so a plain row-major
//! `Vec` and an O(n³) factorization are all that is needed.

use num_complex::Complex64;
use thiserror::Error;

/// Pivots below this fraction of the matrix ∞-norm are treated as zero.
pub const PIVOT_RTOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LuError {
    #[error("matrix is singular to working precision (pivot {pivot:e} at column {column})")]
    Singular { column: usize, pivot: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            m.data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// `‖A x − b‖∞`
    pub fn residual_inf(&self, x: &[Complex64], b: &[Complex64]) -> f64 {
        self.mul_vec(x)
            .iter()
            .zip(b)
            .map(|(ax, bi)| (ax - bi).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// `P A = L U` with unit lower-triangular `L`, both packed in one matrix.
#[derive(Debug, Clone)]
pub struct LuFactorization {
    lu: CMatrix,
    perm: Vec<usize>,
    norm_inf: f64,
}

impl LuFactorization {
    pub fn new(a: &CMatrix) -> Result<Self, LuError> {
        let n = a.dim();
        let norm_inf = a.norm_inf();
        let threshold = PIVOT_RTOL * norm_inf;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let (p, pivot) = (col..n)
                .map(|r| (r, lu[(r, col)].norm()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pivot > threshold) {
                return Err(LuError::Singular { column: col, pivot });
            }
            if p != col {
                for j in 0..n {
                    lu.data.swap(p * n + j, col * n + j);
                }
                perm.swap(p, col);
            }
            let inv = lu[(col, col)].inv();
            for r in col + 1..n {
                let factor = lu[(r, col)] * inv;
                lu[(r, col)] = factor;
                if factor.norm_sqr() == 0.0 {
                    continue;
                }
                for j in col + 1..n {
                    let u = lu[(col, j)];
                    lu[(r, j)] -= factor * u;
                }
            }
        }
        Ok(Self { lu, perm, norm_inf })
    }

    pub fn dim(&self) -> usize {
        self.lu.dim()
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>, LuError> {
        let n = self.dim();
        if b.len() != n {
            return Err(LuError::Dimension {
                expected: n,
                got: b.len(),
            });
        }
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        Ok(x)
    }

    /// Solves `Aᴴ x = b`.
    pub fn solve_adjoint(&self, b: &[Complex64]) -> Result<Vec<Complex64>, LuError> {
        let n = self.dim();
        if b.len() != n {
            return Err(LuError::Dimension {
                expected: n,
                got: b.len(),
            });
        }
        // Aᴴ = Uᴴ Lᴴ P, so solve Uᴴ y = b, Lᴴ w = y, x = Pᵀ w.
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for j in 0..i {
                s -= self.lu[(j, i)].conj() * y[j];
            }
            y[i] = s / self.lu[(i, i)].conj();
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= self.lu[(j, i)].conj() * y[j];
            }
            y[i] = s;
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k];
        }
        Ok(x)
    }

    /// Hager–Higham estimate of the ∞-norm condition number.
    ///
    /// Estimates `‖A⁻¹‖₁` of `Aᴴ` (equal to `‖A⁻¹‖∞`) with a handful of solves.
    pub fn condition_estimate(&self) -> f64 {
        let n = self.dim();
        if n == 0 {
            return 0.0;
        }
        let one = |v: &[Complex64]| v.iter().map(|z| z.norm()).sum::<f64>();
        let sign = |z: Complex64| {
            let m = z.norm();
            if m == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                z / m
            }
        };
        // B = A⁻ᴴ, so B x = solve_adjoint(x) and Bᴴ x = solve(x).
        let mut x = vec![Complex64::new(1.0 / n as f64, 0.0); n];
        let mut est = 0.0;
        for _ in 0..5 {
            let Ok(y) = self.solve_adjoint(&x) else {
                return f64::INFINITY;
            };
            let new_est = one(&y);
            let xi: Vec<Complex64> = y.iter().map(|&z| sign(z)).collect();
            let Ok(z) = self.solve(&xi) else {
                return f64::INFINITY;
            };
            let (j, zmax) = z
                .iter()
                .enumerate()
                .map(|(j, v)| (j, v.norm()))
                .fold((0, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b });
            let ztx: f64 = z.iter().zip(&x).map(|(a, b)| (a.conj() * b).re).sum();
            if new_est <= est || zmax <= ztx {
                est = est.max(new_est);
                break;
            }
            est = new_est;
            x = vec![Complex64::new(0.0, 0.0); n];
            x[j] = Complex64::new(1.0, 0.0);
        }
        est * self.norm_inf
    }
}
