//! Sufficient conditions for Hermitian positive (semi)definiteness.
//!
//! The three row-sum predicates are evaluated in the rearranged form
//! `(d_i - r_i) * d_j + w * (d_j - r_j) >= 0`, where `w` is `|a_{ij..j j..j}|`
//! for LLK and `r'_i` for LL. This is the textbook inequality with both sides
//! expanded, and keeps the implications DD => LLK => LL exact in floating point.

use serde::{Deserialize, Serialize};

use crate::eigen::{certify_pd_by_eigen, min_eigenvalue, SolverConfig};
use crate::error::{Error, Result};
use crate::inclusion::{eigen_lower_bound, row_sums, RowSums};
use crate::tensor::{ComplexTensor, ComplexVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    PositiveDefinite,
    PositiveSemidefinite,
    Inconclusive,
    IndefiniteOrNegative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Rule {
    Dd,
    StrictDd,
    Llk,
    StrictLlk,
    Ll,
    StrictLl,
    BlockCriterion,
    ExtremalEigenvalue,
}

/// Which predicate family a check uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Predicate {
    Dd,
    Llk,
    Ll,
}

impl Predicate {
    fn rule(self, strict: bool) -> Rule {
        match (self, strict) {
            (Predicate::Dd, false) => Rule::Dd,
            (Predicate::Dd, true) => Rule::StrictDd,
            (Predicate::Llk, false) => Rule::Llk,
            (Predicate::Llk, true) => Rule::StrictLlk,
            (Predicate::Ll, false) => Rule::Ll,
            (Predicate::Ll, true) => Rule::StrictLl,
        }
    }
}

/// Constants of the two-block criterion. `s` is 1-based: the leading block is
/// indices `1..=s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockData {
    pub s: usize,
    #[serde(rename = "K1")]
    pub k1: f64,
    #[serde(rename = "K2")]
    pub k2: f64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "N")]
    pub n_const: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// The predicate held; `indices` (1-based) is the tightest constraint.
    Tightest {
        indices: Vec<usize>,
    },
    /// The predicate failed at these 1-based indices.
    Failing {
        indices: Vec<usize>,
    },
    /// `f(A)(vector) = value < 0`.
    NegativeVector {
        vector: ComplexVector,
        value: f64,
    },
    /// Smallest eigenvalue of the symmetrization and its eigenvector.
    Eigen {
        lambda_min: f64,
        vector: ComplexVector,
    },
    Block(BlockData),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub rule: Rule,
    pub witness: Witness,
    /// Margin by which the deciding inequality held (negative if it failed).
    pub slack: f64,
}

const DIAG_IMAG_TOL: f64 = 1e-12;

fn real_diagonal(sums: &RowSums) -> Result<Vec<f64>> {
    sums.diag
        .iter()
        .enumerate()
        .map(|(i, d)| {
            if d.im.abs() <= DIAG_IMAG_TOL * (1.0 + d.norm()) {
                Ok(d.re)
            } else {
                Err(Error::NonRealDiagonal {
                    index: i + 1,
                    re: d.re,
                    im: d.im,
                })
            }
        })
        .collect()
}

/// Outcome of one predicate: minimum slack over all constraints and where it occurs.
#[derive(Clone, Debug, PartialEq)]
pub struct PredicateReport {
    pub holds: bool,
    pub slack: f64,
    /// 1-based index (DD, sign constraints) or index pair (pair constraints).
    pub worst: Vec<usize>,
}

fn track(worst: &mut (f64, Vec<usize>), slack: f64, at: &[usize]) {
    if slack < worst.0 || worst.1.is_empty() {
        *worst = (slack, at.iter().map(|i| i + 1).collect());
    }
}

/// Multiplies by `2^k` in steps that cannot overflow an intermediate.
fn scale_pow2(x: f64, mut k: i32) -> f64 {
    let mut out = x;
    while k != 0 {
        let step = k.clamp(-1000, 1000);
        out *= 2f64.powi(step);
        k -= step;
    }
    out
}

fn pow2_exponent(a: f64, b: f64) -> i32 {
    let m = a.abs().max(b.abs());
    if m == 0.0 {
        0
    } else {
        m.log2().floor() as i32
    }
}

/// Sign of `x*y + u*v`, robust to underflow of the products: `x, u` and
/// `y, v` are each rescaled by an exact power of two before multiplying.
fn sign_of_sum(x: f64, y: f64, u: f64, v: f64) -> f64 {
    let (ex, ey) = (pow2_exponent(x, u), pow2_exponent(y, v));
    let value = scale_pow2(x, -ex) * scale_pow2(y, -ey) + scale_pow2(u, -ex) * scale_pow2(v, -ey);
    if value > 0.0 {
        1.0
    } else if value < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Evaluates one predicate on `a` as given (no symmetrization).
pub fn evaluate_predicate(a: &ComplexTensor, which: Predicate, strict: bool) -> Result<PredicateReport> {
    let sums = row_sums(a);
    let d = real_diagonal(&sums)?;
    let n = a.dim();
    let m = a.order_half();
    let r = &sums.r;
    let mut worst = (f64::INFINITY, Vec::new());
    let accept = |sign: f64| if strict { sign > 0.0 } else { sign >= 0.0 };
    let mut holds = true;

    match which {
        Predicate::Dd => {
            for i in 0..n {
                track(&mut worst, d[i] - r[i], &[i]);
                holds &= accept(d[i] - r[i]);
            }
        }
        Predicate::Llk | Predicate::Ll => {
            for (i, &di) in d.iter().enumerate() {
                track(&mut worst, di, &[i]);
                holds &= accept(di);
            }
            for i in 0..n {
                for j in (0..n).filter(|&j| j != i) {
                    let w = match which {
                        Predicate::Llk => {
                            let mut key = vec![j; 2 * m];
                            key[0] = i;
                            a.get(&key).norm()
                        }
                        _ => sums.r_prime[i],
                    };
                    let slack = (d[i] - r[i]) * d[j] + w * (d[j] - r[j]);
                    track(&mut worst, slack, &[i, j]);
                    holds &= accept(sign_of_sum(d[i] - r[i], d[j], w, d[j] - r[j]));
                }
            }
        }
    }
    let (slack, worst) = worst;
    Ok(PredicateReport { holds, slack, worst })
}

pub fn is_diagonally_dominated(a: &ComplexTensor, strict: bool) -> Result<bool> {
    Ok(evaluate_predicate(a, Predicate::Dd, strict)?.holds)
}

pub fn is_llk_tensor(a: &ComplexTensor, strict: bool) -> Result<bool> {
    Ok(evaluate_predicate(a, Predicate::Llk, strict)?.holds)
}

pub fn is_ll_tensor(a: &ComplexTensor, strict: bool) -> Result<bool> {
    Ok(evaluate_predicate(a, Predicate::Ll, strict)?.holds)
}

/// How `certify_with` decides.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Row-sum predicates in increasing generality, then the eigenvalue solver.
    Auto,
    Only(Predicate),
    Eigen,
}

fn predicate_certificate(report: PredicateReport, which: Predicate, strict: bool) -> Certificate {
    Certificate {
        verdict: if strict {
            Verdict::PositiveDefinite
        } else {
            Verdict::PositiveSemidefinite
        },
        rule: which.rule(strict),
        witness: Witness::Tightest { indices: report.worst },
        slack: report.slack,
    }
}

/// Certificate for `A` from its conjugate partial symmetrization.
pub fn certify(a: &ComplexTensor, cfg: &SolverConfig) -> Result<Certificate> {
    certify_with(a, cfg, Method::Auto)
}

pub fn certify_with(a: &ComplexTensor, cfg: &SolverConfig, method: Method) -> Result<Certificate> {
    if !a.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let s = a.symmetrize();
    const ORDER: [Predicate; 3] = [Predicate::Dd, Predicate::Llk, Predicate::Ll];

    match method {
        Method::Eigen => certify_pd_by_eigen(&s, cfg),
        Method::Only(which) => {
            for strict in [true, false] {
                let report = evaluate_predicate(&s, which, strict)?;
                if report.holds {
                    return Ok(predicate_certificate(report, which, strict));
                }
            }
            let report = evaluate_predicate(&s, which, false)?;
            Ok(Certificate {
                verdict: Verdict::Inconclusive,
                rule: which.rule(false),
                witness: Witness::Failing { indices: report.worst },
                slack: report.slack,
            })
        }
        Method::Auto => {
            for which in ORDER {
                let report = evaluate_predicate(&s, which, true)?;
                if report.holds {
                    return Ok(predicate_certificate(report, which, true));
                }
            }
            for which in ORDER {
                let report = evaluate_predicate(&s, which, false)?;
                if report.holds {
                    // A non-strict rule only proves PSD; the solver may still prove PD.
                    return match certify_pd_by_eigen(&s, cfg) {
                        Ok(cert) if cert.verdict == Verdict::PositiveDefinite => Ok(cert),
                        _ => Ok(predicate_certificate(report, which, false)),
                    };
                }
            }
            certify_pd_by_eigen(&s, cfg)
        }
    }
}

/// `(2m)^n - (2m)^s - (2m)^(n-s)`, evaluated in floating point.
pub fn block_count_constant(m: usize, n: usize, s: usize) -> f64 {
    let base = (2 * m) as f64;
    base.powi(n as i32) - base.powi(s as i32) - base.powi((n - s) as i32)
}

fn is_mixed(key: &[usize], s0: usize) -> bool {
    key.iter().any(|&i| i < s0) && key.iter().any(|&i| i >= s0)
}

/// Two-block approximation criterion. `s` is 1-based; `k1`, `k2` are positive
/// lower bounds on the forms of the leading and trailing blocks.
pub fn block_criterion(a: &ComplexTensor, s: usize, k1: f64, k2: f64) -> Result<Certificate> {
    if !a.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let n = a.dim();
    if s == 0 || s >= n {
        return Err(Error::BadSplit { s, n });
    }
    if !(k1 > 0.0) {
        return Err(Error::NonpositiveBound { name: "K1", value: k1 });
    }
    if !(k2 > 0.0) {
        return Err(Error::NonpositiveBound { name: "K2", value: k2 });
    }
    let m = a.order_half();
    let k = a
        .iter()
        .filter(|(key, _)| is_mixed(key, s))
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max);
    let n_const = block_count_constant(m, n, s);
    let c = n_const.max(n_const.powi(2 * m as i32) * (k / k1).powi(2 * m as i32 - 1));
    let data = BlockData {
        s,
        k1,
        k2,
        k,
        n_const,
        c,
    };

    let verdict = if k == 0.0 {
        Verdict::PositiveDefinite
    } else if n_const <= 0.0 {
        // The constant degenerates and the bound says nothing.
        Verdict::Inconclusive
    } else if k2 / k >= c {
        Verdict::PositiveDefinite
    } else {
        Verdict::Inconclusive
    };
    Ok(Certificate {
        verdict,
        rule: Rule::BlockCriterion,
        witness: Witness::Block(data),
        slack: k2 - c * k,
    })
}

fn block_bound(block: &ComplexTensor, name: &'static str, cfg: &SolverConfig) -> Result<f64> {
    let lower = eigen_lower_bound(block)?;
    if lower > 0.0 {
        return Ok(lower);
    }
    let lambda = min_eigenvalue(block, cfg)?.lambda.re;
    if lambda > 0.0 {
        Ok(lambda)
    } else {
        Err(Error::NonpositiveBound { name, value: lambda })
    }
}

/// `block_criterion` with missing bounds computed from each block: the
/// row-sum lower bound when positive, otherwise the smallest eigenvalue.
pub fn block_criterion_auto(
    a: &ComplexTensor,
    s: usize,
    k1: Option<f64>,
    k2: Option<f64>,
    cfg: &SolverConfig,
) -> Result<Certificate> {
    if !a.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let n = a.dim();
    if s == 0 || s >= n {
        return Err(Error::BadSplit { s, n });
    }
    let k1 = match k1 {
        Some(v) => v,
        None => block_bound(&a.sub_tensor(0..s), "K1", cfg)?,
    };
    let k2 = match k2 {
        Some(v) => v,
        None => block_bound(&a.sub_tensor(s..n), "K2", cfg)?,
    };
    block_criterion(a, s, k1, k2)
}
