//! The G tensor of the projectivized-bundle construction and its λ threshold.
//!
//! Indices `0..n` are base directions, `n..n+r` fiber directions. The entry
//! `G_{p q̄, s t̄}` is stored at tensor key `(p, s, q, t)`, so `p, s` are the
//! holomorphic slots and `q, t` the antiholomorphic ones.

use num_complex::Complex64;

use crate::certify::{evaluate_predicate, Predicate};
use crate::eigen::{min_eigenvalue, SolverConfig};
use crate::error::{Error, Result};
use crate::tensor::ComplexTensor;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Coefficient blocks, all row-major and 0-based.
///
/// * `g4[i][j][k][l] = g_{ij̄,kl̄}` (n^4)
/// * `h2[α][β] = h_{αβ̄}` (r^2)
/// * `hv2[i][j] = h_{vv̄,ij̄}` (n^2)
/// * `hv4[i][j][k][l] = h_{vv̄,ij̄kl̄}` (n^4)
/// * `hv3[β][i][j][k] = h_{vβ̄,ij̄k}` (r n^3)
/// * `hab2[α][β][i][j] = h_{αβ̄,ij̄}` (r^2 n^2)
#[derive(Clone, Debug, PartialEq)]
pub struct AHZComponents {
    pub n: usize,
    pub r: usize,
    pub g4: Vec<Complex64>,
    pub h2: Vec<Complex64>,
    pub hv2: Vec<Complex64>,
    pub hv4: Vec<Complex64>,
    pub hv3: Vec<Complex64>,
    pub hab2: Vec<Complex64>,
}

impl AHZComponents {
    /// All derivative blocks zero.
    pub fn new(n: usize, r: usize, g4: Vec<Complex64>, h2: Vec<Complex64>) -> Self {
        AHZComponents {
            n,
            r,
            g4,
            h2,
            hv2: vec![ZERO; n * n],
            hv4: vec![ZERO; n.pow(4)],
            hv3: vec![ZERO; r * n.pow(3)],
            hab2: vec![ZERO; r * r * n * n],
        }
    }

    pub fn check_shapes(&self) -> Result<()> {
        let (n, r) = (self.n, self.r);
        if n == 0 || r == 0 {
            return Err(Error::EmptyShape { m: 2, n: n + r });
        }
        let expect = [
            ("g4", &self.g4, n.pow(4)),
            ("h2", &self.h2, r * r),
            ("hv2", &self.hv2, n * n),
            ("hv4", &self.hv4, n.pow(4)),
            ("hv3", &self.hv3, r * n.pow(3)),
            ("hab2", &self.hab2, r * r * n * n),
        ];
        for (block, values, expected) in expect {
            if values.len() != expected {
                return Err(Error::ShapeMismatch {
                    block,
                    expected,
                    found: values.len(),
                });
            }
        }
        Ok(())
    }

    /// Multiply every `h` derivative block (`hv2`, `hv4`, `hv3`, `hab2`) by `factor`.
    pub fn scale_derivatives(&self, factor: f64) -> Self {
        let scale = |v: &[Complex64]| v.iter().map(|z| z * factor).collect();
        AHZComponents {
            hv2: scale(&self.hv2),
            hv4: scale(&self.hv4),
            hv3: scale(&self.hv3),
            hab2: scale(&self.hab2),
            ..self.clone()
        }
    }
}

fn idx4(n: usize, a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * n + b) * n + c) * n + d
}

/// Which blocks `assemble` reads for the metric and fiber-product parts.
enum Pattern {
    Given,
    /// `g4 -> -a I_n`, fiber product `-> b I_r`.
    Replaced {
        a: f64,
        b: f64,
    },
}

fn assemble(c: &AHZComponents, lambda: f64, pattern: &Pattern) -> ComplexTensor {
    let (n, r) = (c.n, c.r);
    let total = n + r;
    let is_fiber = |p: usize| p >= n;
    let hv2 = |i: usize, j: usize| c.hv2[i * n + j];
    let h2 = |a: usize, b: usize| c.h2[(a - n) * r + (b - n)];
    let hv3 = |beta: usize, i: usize, j: usize, k: usize| c.hv3[((beta - n) * n + i) * n * n + j * n + k];
    let hab2 = |a: usize, b: usize, i: usize, j: usize| c.hab2[(((a - n) * r + (b - n)) * n + i) * n + j];

    // Entry G_{p q̄, s t̄} for the two holomorphic-slot types below.
    let holo_base = |p: usize, q: usize, s: usize, t: usize| -> Complex64 {
        match (is_fiber(q), is_fiber(t)) {
            (false, false) => {
                let metric = match pattern {
                    Pattern::Given => c.g4[idx4(n, p, q, s, t)],
                    Pattern::Replaced { a, .. } => {
                        if p == q && q == s && s == t {
                            Complex64::new(-a, 0.0)
                        } else {
                            ZERO
                        }
                    }
                };
                metric * lambda + c.hv4[idx4(n, p, q, s, t)] - hv2(p, q) * hv2(s, t) - hv2(p, t) * hv2(s, q)
            }
            (false, true) => hv3(t, p, q, s),
            (true, false) => hv3(q, p, t, s),
            (true, true) => ZERO,
        }
    };

    let mut terms = Vec::new();
    for p in 0..total {
        for s in 0..total {
            for q in 0..total {
                for t in 0..total {
                    let holo_fibers = usize::from(is_fiber(p)) + usize::from(is_fiber(s));
                    let anti_fibers = usize::from(is_fiber(q)) + usize::from(is_fiber(t));
                    let value = match (holo_fibers, anti_fibers) {
                        (0, _) => holo_base(p, q, s, t),
                        // Conjugate partner of a (0, 1) entry.
                        (1, 0) => holo_base(q, p, t, s).conj(),
                        (1, 1) => {
                            let (alpha, i) = if is_fiber(p) { (p, s) } else { (s, p) };
                            let (beta, j) = if is_fiber(q) { (q, t) } else { (t, q) };
                            hab2(alpha, beta, i, j) - h2(alpha, beta) * hv2(i, j)
                        }
                        (2, 2) => match pattern {
                            Pattern::Given => -(h2(p, q) * h2(s, t) + h2(p, t) * h2(s, q)),
                            Pattern::Replaced { b, .. } => {
                                if p == q && q == s && s == t {
                                    Complex64::new(-b, 0.0)
                                } else {
                                    ZERO
                                }
                            }
                        },
                        _ => ZERO,
                    };
                    terms.push((vec![p, s, q, t], value));
                }
            }
        }
    }
    ComplexTensor::from_accumulated(2, total, terms)
}

/// The `(n + r)`-dimensional 4th-order G tensor at `lambda`.
pub fn ahz_assemble_g(c: &AHZComponents, lambda: f64) -> Result<ComplexTensor> {
    c.check_shapes()?;
    let g = assemble(c, lambda, &Pattern::Given);
    if !g.is_hermitian() {
        return Err(Error::NotHermitianAfterAssembly);
    }
    Ok(g)
}

/// G with the metric block replaced by `-a I_n` and the fiber product by `b I_r`.
pub fn ahz_assemble_g_prime(c: &AHZComponents, lambda: f64, a: f64, b: f64) -> Result<ComplexTensor> {
    c.check_shapes()?;
    let g = assemble(c, lambda, &Pattern::Replaced { a, b });
    if !g.is_hermitian() {
        return Err(Error::NotHermitianAfterAssembly);
    }
    Ok(g)
}

/// Whether `-S_{G'(lambda)}` is strictly diagonally dominated.
pub fn ahz_is_certified(c: &AHZComponents, lambda: f64, a: f64, b: f64) -> Result<bool> {
    let neg = ahz_assemble_g_prime(c, lambda, a, b)?.symmetrize().scaled(-1.0);
    Ok(evaluate_predicate(&neg, Predicate::Dd, true)?.holds)
}

const LAMBDA_CAP: f64 = 1e12;
const RELATIVE_TOL: f64 = 1e-6;

/// Smallest `lambda` (to relative `1e-6`, absolute `1e-6` near zero) at which
/// `-S_{G'}` is strictly diagonally dominated. Doubling from 1 brackets it,
/// bisection from 0 refines it.
pub fn ahz_lambda_threshold(c: &AHZComponents, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::NoThresholdFound(format!(
            "bounds must be positive (a = {a}, b = {b})"
        )));
    }
    let mut hi = 1.0;
    while !ahz_is_certified(c, hi, a, b)? {
        hi *= 2.0;
        if hi > LAMBDA_CAP {
            return Err(Error::NoThresholdFound(format!(
                "not diagonally dominated for lambda up to {LAMBDA_CAP:e}"
            )));
        }
    }
    let mut lo = 0.0;
    while hi - lo > RELATIVE_TOL * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if ahz_is_certified(c, mid, a, b)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// The fiber product tensor `h_{αβ̄} h_{γδ̄} + h_{αδ̄} h_{γβ̄}` on `r` dimensions.
pub fn fiber_product_tensor(c: &AHZComponents) -> ComplexTensor {
    let r = c.r;
    let h = |a: usize, b: usize| c.h2[a * r + b];
    let mut terms = Vec::new();
    for a in 0..r {
        for g in 0..r {
            for b in 0..r {
                for d in 0..r {
                    terms.push((vec![a, g, b, d], h(a, b) * h(g, d) + h(a, d) * h(g, b)));
                }
            }
        }
    }
    ComplexTensor::from_accumulated(2, r, terms)
}

/// The negated metric block `-g_{ij̄,kl̄}` as an n-dimensional tensor.
pub fn negated_metric_tensor(c: &AHZComponents) -> ComplexTensor {
    let n = c.n;
    let mut terms = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    terms.push((vec![i, k, j, l], -c.g4[idx4(n, i, j, k, l)]));
                }
            }
        }
    }
    ComplexTensor::from_accumulated(2, n, terms)
}

/// Default `(a, b)`: the smallest eigenvalues of the symmetrized negated
/// metric block and fiber product. Either may be nonpositive, in which case
/// `ahz_lambda_threshold` refuses them.
pub fn ahz_default_bounds(c: &AHZComponents, cfg: &SolverConfig) -> Result<(f64, f64)> {
    c.check_shapes()?;
    let a = min_eigenvalue(&negated_metric_tensor(c), cfg)?.lambda.re;
    let b = min_eigenvalue(&fiber_product_tensor(c), cfg)?.lambda.re;
    Ok((a, b))
}
