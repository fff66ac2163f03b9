//! Curvature coefficients as a 4th-order Hermitian tensor.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::certify::{block_criterion, certify, Certificate};
use crate::eigen::SolverConfig;
use crate::error::{Error, Result};
use crate::tensor::ComplexTensor;

/// Coefficients `R[i][k][j][l] = R(e_i, conj e_k, e_j, conj e_l)` and the
/// metric `g[i][j] = g(e_i, conj e_j)` on a frame of size `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureData {
    n: usize,
    r: Vec<Complex64>,
    g: Vec<Complex64>,
}

const SYMMETRY_TOL: f64 = 1e-12;

impl CurvatureData {
    /// `r` is row-major over `[i][k][j][l]` (length `n^4`), `g` row-major (length `n^2`).
    pub fn new(n: usize, r: Vec<Complex64>, g: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyShape { m: 2, n });
        }
        if r.len() != n.pow(4) {
            return Err(Error::ShapeMismatch {
                block: "R",
                expected: n.pow(4),
                found: r.len(),
            });
        }
        if g.len() != n * n {
            return Err(Error::ShapeMismatch {
                block: "g",
                expected: n * n,
                found: g.len(),
            });
        }
        let data = CurvatureData { n, r, g };
        data.check_symmetry()?;
        data.check_metric()?;
        Ok(data)
    }

    fn check_symmetry(&self) -> Result<()> {
        let n = self.n;
        let tol = SYMMETRY_TOL * self.r.iter().map(|v| v.norm()).fold(1.0, f64::max);
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        if (self.at(i, k, j, l).conj() - self.at(k, i, l, j)).norm() > tol {
                            return Err(Error::SymmetryViolation {
                                i: i + 1,
                                k: k + 1,
                                j: j + 1,
                                l: l + 1,
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_metric(&self) -> Result<()> {
        let n = self.n;
        let tol = SYMMETRY_TOL * self.g.iter().map(|v| v.norm()).fold(1.0, f64::max);
        for i in 0..n {
            for j in 0..n {
                if (self.g[i * n + j].conj() - self.g[j * n + i]).norm() > tol {
                    return Err(Error::InvalidMetric(format!(
                        "g[{}][{}] is not the conjugate of g[{}][{}]",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        // g_{ij} pairs v_i with conj(v_j), so the quadratic form is v^T g conj(v),
        // positive iff the Hermitian matrix g^T is.
        let mat = DMatrix::from_fn(n, n, |i, j| self.g[j * n + i]);
        let smallest = mat.symmetric_eigenvalues().min();
        if !(smallest > 0.0) {
            return Err(Error::InvalidMetric(format!(
                "not positive definite (smallest eigenvalue {smallest})"
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `R[i][k][j][l]`, 0-based.
    pub fn at(&self, i: usize, k: usize, j: usize, l: usize) -> Complex64 {
        let n = self.n;
        self.r[((i * n + k) * n + j) * n + l]
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.r
    }

    pub fn metric(&self) -> &[Complex64] {
        &self.g
    }

    /// Same metric, coefficients multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        CurvatureData {
            n: self.n,
            r: self.r.iter().map(|v| v * factor).collect(),
            g: self.g.clone(),
        }
    }

    /// `|v|_g^2 = Σ g_{ij} v_i conj(v_j)`.
    pub fn norm_sqr(&self, v: &[Complex64]) -> Result<f64> {
        let n = self.n;
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        let mut total = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                total += self.g[i * n + j] * v[i] * v[j].conj();
            }
        }
        Ok(total.re)
    }

    /// `δ_ik δ_jl + δ_il δ_jk` with the identity metric.
    pub fn constant_curvature(n: usize) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let mut r = vec![Complex64::new(0.0, 0.0); n.pow(4)];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        let v = f64::from(u8::from(i == k && j == l)) + f64::from(u8::from(i == l && j == k));
                        r[((i * n + k) * n + j) * n + l] = one * v;
                    }
                }
            }
        }
        let g = (0..n * n)
            .map(|p| if p / n == p % n { one } else { Complex64::new(0.0, 0.0) })
            .collect();
        CurvatureData { n, r, g }
    }
}

/// `A_R` with `a_{ij kl} = R[i][k][j][l]` (holomorphic block `i, j`).
pub fn curvature_to_tensor(data: &CurvatureData) -> ComplexTensor {
    let n = data.n;
    let mut terms = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    terms.push((vec![i, j, k, l], data.at(i, k, j, l)));
                }
            }
        }
    }
    ComplexTensor::from_accumulated(2, n, terms)
}

/// Holomorphic sectional curvature `R(v, conj v, v, conj v) / |v|_g^4`.
pub fn hsc(data: &CurvatureData, v: &[Complex64]) -> Result<f64> {
    let norm = data.norm_sqr(v)?;
    if v.iter().all(|z| *z == Complex64::new(0.0, 0.0)) || !(norm > 0.0) {
        return Err(Error::ZeroVector);
    }
    let value = curvature_to_tensor(data).eval_form(v)?;
    Ok(value.re / (norm * norm))
}

/// Positivity of the holomorphic sectional curvature at this point.
pub fn check_hsc_positive(data: &CurvatureData, cfg: &SolverConfig) -> Result<Certificate> {
    certify(&curvature_to_tensor(data), cfg)
}

/// Two-block criterion applied to `A_R`. `s` is 1-based.
pub fn cheung_lemma_check(data: &CurvatureData, s: usize, k1: f64, k2: f64) -> Result<Certificate> {
    block_criterion(&curvature_to_tensor(data), s, k1, k2)
}
