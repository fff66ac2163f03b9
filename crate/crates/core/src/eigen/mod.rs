//! Ĥ-eigenpairs: `(A·x)_i = λ conj(x_i) |x_i|^{2m-2}` for all `i`.
//!
//! Extremal eigenvalues come from minimizing (maximizing) the form of the
//! symmetrized tensor on `{Σ|x_i|^{2m} = 1}`; every constrained critical point
//! there is an eigenvector. Full enumeration is multi-start damped Newton on
//! the real-split system and is best-effort.

mod system;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::{Certificate, Rule, Verdict, Witness};
use crate::error::{Error, Result};
use crate::tensor::{ComplexTensor, ComplexVector};
use system::{polish, EigenSystem};

/// Multi-start solver settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub starts: usize,
    pub newton_tol: f64,
    pub max_iter: usize,
    pub dedup_tol: f64,
    pub rng_seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            starts: 200,
            newton_tol: 1e-10,
            max_iter: 200,
            dedup_tol: 1e-6,
            rng_seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 || self.max_iter == 0 {
            return Err(Error::InvalidConfig("starts and max_iter must be positive".into()));
        }
        if !(self.newton_tol > 0.0) || !(self.dedup_tol > 0.0) {
            return Err(Error::InvalidConfig("tolerances must be positive".into()));
        }
        if self.dedup_tol < self.newton_tol {
            return Err(Error::InvalidConfig("dedup_tol must be >= newton_tol".into()));
        }
        Ok(())
    }
}

/// An eigenvalue with its eigenvector, normalized so `Σ|x_i|^{2m} = 1` and the
/// first nonzero component is real positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    #[serde(with = "crate::json::complex")]
    pub lambda: Complex64,
    pub vector: ComplexVector,
    pub residual: f64,
}

/// Components below this modulus are treated as zero when fixing the phase.
const PHASE_FLOOR: f64 = 1e-10;

fn pow_norm(x: &[Complex64], m: usize) -> f64 {
    x.iter().map(|z| z.norm_sqr().powi(m as i32)).sum()
}

/// Rescale so `Σ|x_i|^{2m} = 1`.
fn normalize(x: &mut [Complex64], m: usize) -> Result<()> {
    let total = pow_norm(x, m);
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::ZeroVector);
    }
    let s = total.powf(-1.0 / (2 * m) as f64);
    x.iter_mut().for_each(|z| *z *= s);
    Ok(())
}

fn fix_phase(x: &mut [Complex64]) {
    let scale = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(k) = x.iter().position(|z| z.norm() > PHASE_FLOOR * scale.max(1.0)) {
        let rot = x[k].conj() / x[k].norm();
        x.iter_mut().for_each(|z| *z *= rot);
        x[k].im = 0.0;
    }
    // Drop negative zeros so reports print "0.0".
    x.iter_mut().for_each(|z| *z += Complex64::new(0.0, 0.0));
}

fn canonical_vector(x: &[Complex64], m: usize) -> Result<ComplexVector> {
    let mut v = x.to_vec();
    normalize(&mut v, m)?;
    fix_phase(&mut v);
    Ok(ComplexVector(v))
}

/// Tolerances are relative to the largest entry modulus (at least 1).
fn tensor_scale(a: &ComplexTensor) -> f64 {
    a.max_abs().max(1.0)
}

/// Max-norm of the eigen-equation defect after rescaling `x` onto `Σ|x_i|^{2m} = 1`.
pub fn residual(a: &ComplexTensor, lambda: Complex64, x: &[Complex64]) -> Result<f64> {
    if x.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: x.len(),
        });
    }
    let m = a.order_half();
    let mut v = x.to_vec();
    normalize(&mut v, m)?;
    let cx = a.apply_contraction(&v)?;
    Ok(v.iter()
        .zip(cx.iter())
        .map(|(xi, yi)| (yi - lambda * xi.conj() * xi.norm().powi(2 * m as i32 - 2)).norm())
        .fold(0.0, f64::max))
}

/// Upper bound `2n(2m-1)^{2n-1}` on the number of distinct eigenvalues.
pub fn eigenvalue_count_bound(dim: usize, order_half: usize) -> f64 {
    2.0 * dim as f64 * ((2 * order_half - 1) as f64).powi(2 * dim as i32 - 1)
}

fn random_start(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect()
}

fn start_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn rayleigh(a: &ComplexTensor, x: &[Complex64]) -> f64 {
    let f = a.eval_form(x).expect("length checked by caller");
    f.re / pow_norm(x, a.order_half())
}

/// Newton-polish from `x0`; returns an accepted pair or `None`.
fn newton_from(a: &ComplexTensor, x0: &[Complex64], cfg: &SolverConfig) -> Option<EigenPair> {
    let m = a.order_half();
    let mut x = x0.to_vec();
    normalize(&mut x, m).ok()?;
    let gauge = (0..x.len())
        .max_by(|&i, &j| x[i].norm().total_cmp(&x[j].norm()))
        .expect("dim >= 1");
    let rot = x[gauge].conj() / x[gauge].norm();
    x.iter_mut().for_each(|z| *z *= rot);

    let scale = tensor_scale(a);
    let sys = EigenSystem::new(a, gauge);
    let lambda0 = rayleigh(a, &x);
    let z = polish(&sys, sys.pack(&x, lambda0), cfg.max_iter, 1e-3 * cfg.newton_tol * scale);
    let (x, lambda) = sys.unpack(&z);
    if !lambda.is_finite() || x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return None;
    }
    let lambda = Complex64::new(lambda, 0.0);
    let vector = canonical_vector(&x, m).ok()?;
    let res = residual(a, lambda, &vector).ok()?;
    (res <= cfg.newton_tol * scale).then_some(EigenPair {
        lambda,
        vector,
        residual: res,
    })
}

/// Projected descent of `sign * f(x)` on `Σ|x_i|^{2m} = 1` with Armijo
/// backtracking. `cps` must be conjugate partial-symmetric so that
/// `conj((A·x)_i)` is the complex gradient direction of the form.
fn descend(cps: &ComplexTensor, x0: &[Complex64], sign: f64, iters: usize) -> (Vec<Complex64>, f64) {
    let m = cps.order_half();
    let scale = tensor_scale(cps);
    let mut x = x0.to_vec();
    if normalize(&mut x, m).is_err() {
        x = vec![Complex64::new(1.0, 0.0); x0.len()];
        normalize(&mut x, m).expect("nonzero");
    }
    let value = |v: &[Complex64]| cps.eval_form(v).expect("length fixed").re;
    let mut q = value(&x);
    let mut step = 1.0 / scale;

    for _ in 0..iters {
        let cx = cps.apply_contraction(&x).expect("length fixed");
        let grad: Vec<Complex64> = x
            .iter()
            .zip(cx.iter())
            .map(|(xi, yi)| yi.conj() - xi * xi.norm().powi(2 * m as i32 - 2) * q)
            .collect();
        let gnorm2: f64 = grad.iter().map(|g| g.norm_sqr()).sum();
        if gnorm2.sqrt() <= 1e-9 * scale {
            break;
        }
        step *= 2.0;
        let mut accepted = false;
        for _ in 0..60 {
            let mut trial: Vec<Complex64> = x.iter().zip(&grad).map(|(xi, gi)| xi - gi * (sign * step)).collect();
            if normalize(&mut trial, m).is_ok() {
                let q_trial = value(&trial);
                if sign * q_trial <= sign * q - 1e-4 * step * 2.0 * m as f64 * gnorm2 {
                    x = trial;
                    q = q_trial;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (x, q)
}

/// One extremal search: descent then Newton polish. `None` if the polished
/// point does not satisfy the eigen-equations or lands on a worse critical value.
fn extremal_from(cps: &ComplexTensor, x0: &[Complex64], sign: f64, cfg: &SolverConfig) -> Option<EigenPair> {
    let scale = tensor_scale(cps);
    let (x, q) = descend(cps, x0, sign, 20 * cfg.max_iter);
    let pair = newton_from(cps, &x, cfg)?;
    (sign * pair.lambda.re <= sign * q + cfg.dedup_tol * scale).then_some(pair)
}

fn pick_extreme(pairs: Vec<Option<EigenPair>>, sign: f64) -> Option<EigenPair> {
    pairs
        .into_iter()
        .flatten()
        .min_by(|p, q| (sign * p.lambda.re).total_cmp(&(sign * q.lambda.re)))
}

/// Smallest and largest Ĥ-eigenvalue of the conjugate partial symmetrization of `a`.
pub fn extremal_eigenvalues(a: &ComplexTensor, cfg: &SolverConfig) -> Result<(EigenPair, EigenPair)> {
    cfg.validate()?;
    if !a.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let s = a.symmetrize();
    let n = s.dim();
    let run = |sign: f64| -> Vec<Option<EigenPair>> {
        (0..cfg.starts)
            .into_par_iter()
            .map(|k| {
                let x0 = random_start(&mut start_rng(cfg.rng_seed, k), n);
                extremal_from(&s, &x0, sign, cfg)
            })
            .collect()
    };
    let min = pick_extreme(run(1.0), 1.0);
    let max = pick_extreme(run(-1.0), -1.0);
    match (min, max) {
        (Some(lo), Some(hi)) => Ok((lo, hi)),
        _ => Err(Error::ConvergenceFailure { starts: cfg.starts }),
    }
}

/// Smallest Ĥ-eigenvalue of the symmetrization of `a`, with its eigenvector.
pub fn min_eigenvalue(a: &ComplexTensor, cfg: &SolverConfig) -> Result<EigenPair> {
    cfg.validate()?;
    if !a.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let s = a.symmetrize();
    let n = s.dim();
    let pairs = (0..cfg.starts)
        .into_par_iter()
        .map(|k| {
            let x0 = random_start(&mut start_rng(cfg.rng_seed, k), n);
            extremal_from(&s, &x0, 1.0, cfg)
        })
        .collect();
    pick_extreme(pairs, 1.0).ok_or(Error::ConvergenceFailure { starts: cfg.starts })
}

fn lex_key(v: &[Complex64]) -> Vec<f64> {
    v.iter().flat_map(|z| [z.re, z.im]).collect()
}

fn order_pairs(p: &EigenPair, q: &EigenPair) -> std::cmp::Ordering {
    p.lambda.re.total_cmp(&q.lambda.re).then_with(|| {
        lex_key(&p.vector)
            .iter()
            .zip(lex_key(&q.vector).iter())
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    })
}

/// Cluster sorted pairs by eigenvalue; keep the smallest-residual member of each.
fn dedup_by_lambda(mut pairs: Vec<EigenPair>, tol: f64) -> Vec<EigenPair> {
    pairs.sort_by(order_pairs);
    let mut clusters: Vec<Vec<EigenPair>> = Vec::new();
    for pair in pairs {
        match clusters.last_mut() {
            Some(cluster)
                if (pair.lambda.re - cluster.last().unwrap().lambda.re).abs()
                    <= tol * pair.lambda.re.abs().max(1.0) =>
            {
                cluster.push(pair)
            }
            _ => clusters.push(vec![pair]),
        }
    }
    clusters
        .into_iter()
        .map(|c| {
            c.into_iter()
                .min_by(|p, q| p.residual.total_cmp(&q.residual))
                .expect("clusters are nonempty")
        })
        .collect()
}

/// Best-effort enumeration of the distinct Ĥ-eigenvalues of `a` itself, sorted ascending.
pub fn enumerate_eigenvalues(a: &ComplexTensor, cfg: &SolverConfig) -> Result<Vec<EigenPair>> {
    cfg.validate()?;
    if !a.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let n = a.dim();
    let coordinate_starts = n.min(cfg.starts);
    let found: Vec<EigenPair> = (0..cfg.starts)
        .into_par_iter()
        .filter_map(|k| {
            let x0 = if k < coordinate_starts {
                let mut e = vec![Complex64::new(0.0, 0.0); n];
                e[k] = Complex64::new(1.0, 0.0);
                e
            } else {
                random_start(&mut start_rng(cfg.rng_seed, k), n)
            };
            newton_from(a, &x0, cfg)
        })
        .collect();
    Ok(dedup_by_lambda(found, cfg.dedup_tol))
}

/// Classical Hermitian eigendecomposition for `m = 1`. The Ĥ-equation
/// `Σ_j a_{ij̄} conj(x_j) = λ conj(x_i)` is the conjugate of `A w = λ w`,
/// so each returned vector is `conj(w)`.
pub fn matrix_eigen(a: &ComplexTensor) -> Result<Vec<EigenPair>> {
    if a.order_half() != 1 {
        return Err(Error::NotMatrix { order: a.order() });
    }
    if !a.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let n = a.dim();
    let mut mat = DMatrix::<Complex64>::zeros(n, n);
    for (key, v) in a.iter() {
        mat[(key[0], key[1])] = v;
    }
    let eig = nalgebra::SymmetricEigen::new(mat);
    let mut pairs = (0..n)
        .map(|k| {
            let w: Vec<Complex64> = eig.eigenvectors.column(k).iter().map(|z| z.conj()).collect();
            let vector = canonical_vector(&w, 1)?;
            let lambda = Complex64::new(eig.eigenvalues[k], 0.0);
            let residual = residual(a, lambda, &vector)?;
            Ok(EigenPair {
                lambda,
                vector,
                residual,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    pairs.sort_by(order_pairs);
    Ok(pairs)
}

/// Decide definiteness from the smallest eigenvalue of the symmetrization.
/// The decision tolerance is `dedup_tol` relative to the entry scale.
pub fn certify_pd_by_eigen(a: &ComplexTensor, cfg: &SolverConfig) -> Result<Certificate> {
    let pair = min_eigenvalue(a, cfg)?;
    let tol = cfg.dedup_tol * tensor_scale(a);
    let lambda_min = pair.lambda.re;
    let (verdict, witness) = if lambda_min > tol {
        (
            Verdict::PositiveDefinite,
            Witness::Eigen {
                lambda_min,
                vector: pair.vector,
            },
        )
    } else if lambda_min >= -tol {
        (
            Verdict::PositiveSemidefinite,
            Witness::Eigen {
                lambda_min,
                vector: pair.vector,
            },
        )
    } else {
        let value = a.eval_form(&pair.vector)?.re;
        (
            Verdict::IndefiniteOrNegative,
            Witness::NegativeVector {
                vector: pair.vector,
                value,
            },
        )
    };
    Ok(Certificate {
        verdict,
        rule: Rule::ExtremalEigenvalue,
        witness,
        slack: lambda_min,
    })
}
