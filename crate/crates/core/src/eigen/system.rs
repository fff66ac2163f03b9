//! The eigen-equations as a real polynomial system, plus a Levenberg-Marquardt
//! polisher for it.
//!
//! Unknowns are `z = (Re x, Im x, λ)` with λ real. Residual rows are
//! `Re F_i`, `Im F_i`, `Σ|x_i|^{2m} - 1` and the gauge row `Im x_p`, where
//! `F_i = (A·x)_i - λ conj(x_i)^m x_i^{m-1}` and `p` is the chart index chosen
//! at the start of a run.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::tensor::ComplexTensor;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

pub(crate) struct EigenSystem<'a> {
    tensor: &'a ComplexTensor,
    m: usize,
    n: usize,
    gauge: usize,
}

impl<'a> EigenSystem<'a> {
    pub fn new(tensor: &'a ComplexTensor, gauge: usize) -> Self {
        EigenSystem {
            tensor,
            m: tensor.order_half(),
            n: tensor.dim(),
            gauge,
        }
    }

    pub fn unknowns(&self) -> usize {
        2 * self.n + 1
    }

    pub fn pack(&self, x: &[Complex64], lambda: f64) -> DVector<f64> {
        let n = self.n;
        DVector::from_fn(2 * n + 1, |k, _| {
            if k < n {
                x[k].re
            } else if k < 2 * n {
                x[k - n].im
            } else {
                lambda
            }
        })
    }

    pub fn unpack(&self, z: &DVector<f64>) -> (Vec<Complex64>, f64) {
        let n = self.n;
        let x = (0..n).map(|i| Complex64::new(z[i], z[n + i])).collect();
        (x, z[2 * n])
    }

    /// `conj(x)^m x^(m-1)`, which equals `conj(x) |x|^{2m-2}`.
    fn weight(&self, xi: Complex64) -> Complex64 {
        let m = self.m as i32;
        xi.conj().powi(m) * xi.powi(m - 1)
    }

    pub fn residual(&self, z: &DVector<f64>) -> DVector<f64> {
        let n = self.n;
        let (x, lambda) = self.unpack(z);
        let cx = self.tensor.apply_contraction(&x).expect("length fixed by construction");
        let mut r = DVector::zeros(2 * n + 2);
        for i in 0..n {
            let f = cx[i] - self.weight(x[i]) * lambda;
            r[i] = f.re;
            r[n + i] = f.im;
        }
        r[2 * n] = x.iter().map(|v| v.norm_sqr().powi(self.m as i32)).sum::<f64>() - 1.0;
        r[2 * n + 1] = x[self.gauge].im;
        r
    }

    pub fn jacobian(&self, z: &DVector<f64>) -> DMatrix<f64> {
        let n = self.n;
        let m = self.m;
        let (x, lambda) = self.unpack(z);
        let xc: Vec<Complex64> = x.iter().map(|v| v.conj()).collect();

        // d F_i / d x_p and d F_i / d conj(x_p), treating x and conj(x) as independent.
        let mut holo = vec![ZERO; n * n];
        let mut anti = vec![ZERO; n * n];
        let mut factors = vec![ZERO; 2 * m - 1];
        let mut prefix = vec![ZERO; 2 * m];
        for (key, a) in self.tensor.iter() {
            let i = key[0];
            for (slot, &idx) in key[1..].iter().enumerate() {
                factors[slot] = if slot + 1 < m { x[idx] } else { xc[idx] };
            }
            prefix[0] = Complex64::new(1.0, 0.0);
            for k in 0..factors.len() {
                prefix[k + 1] = prefix[k] * factors[k];
            }
            let mut suffix = Complex64::new(1.0, 0.0);
            for k in (0..factors.len()).rev() {
                let without = a * prefix[k] * suffix;
                let idx = key[k + 1];
                if k + 1 < m {
                    holo[i * n + idx] += without;
                } else {
                    anti[i * n + idx] += without;
                }
                suffix *= factors[k];
            }
        }
        let mi = m as i32;
        for i in 0..n {
            let d_holo = if m >= 2 {
                xc[i].powi(mi) * x[i].powi(mi - 2) * (m as f64 - 1.0)
            } else {
                ZERO
            };
            let d_anti = xc[i].powi(mi - 1) * x[i].powi(mi - 1) * m as f64;
            holo[i * n + i] -= d_holo * lambda;
            anti[i * n + i] -= d_anti * lambda;
        }

        let mut jac = DMatrix::zeros(2 * n + 2, 2 * n + 1);
        for i in 0..n {
            for p in 0..n {
                let d = holo[i * n + p];
                let e = anti[i * n + p];
                let du = d + e;
                let dv = Complex64::i() * (d - e);
                jac[(i, p)] = du.re;
                jac[(i, n + p)] = dv.re;
                jac[(n + i, p)] = du.im;
                jac[(n + i, n + p)] = dv.im;
            }
            let dl = -self.weight(x[i]);
            jac[(i, 2 * n)] = dl.re;
            jac[(n + i, 2 * n)] = dl.im;
        }
        for p in 0..n {
            let base = 2.0 * m as f64 * x[p].norm_sqr().powi(mi - 1);
            jac[(2 * n, p)] = base * x[p].re;
            jac[(2 * n, n + p)] = base * x[p].im;
        }
        jac[(2 * n + 1, n + self.gauge)] = 1.0;
        jac
    }
}

/// Damped Gauss-Newton (Levenberg-Marquardt) on the eigen system.
/// Returns the final unknowns; the caller judges convergence by residual.
pub(crate) fn polish(system: &EigenSystem<'_>, start: DVector<f64>, max_iter: usize, stop_tol: f64) -> DVector<f64> {
    let mut z = start;
    let mut r = system.residual(&z);
    let mut cost = r.norm_squared();
    let mut mu: Option<f64> = None;
    let dim = system.unknowns();

    for _ in 0..max_iter {
        if r.amax() <= stop_tol {
            break;
        }
        let jac = system.jacobian(&z);
        let jt = jac.transpose();
        let normal = &jt * &jac;
        let grad = &jt * &r;
        let damping = mu.get_or_insert_with(|| 1e-6 * (0..dim).map(|k| normal[(k, k)]).fold(1e-12, f64::max));

        let mut improved = false;
        for _ in 0..40 {
            let mut lhs = normal.clone();
            for k in 0..dim {
                lhs[(k, k)] += *damping;
            }
            let step = match lhs.cholesky() {
                Some(ch) => ch.solve(&(-&grad)),
                None => {
                    *damping *= 10.0;
                    continue;
                }
            };
            let candidate = &z + &step;
            let r_new = system.residual(&candidate);
            let cost_new = r_new.norm_squared();
            if cost_new.is_finite() && cost_new < cost {
                let tiny_step = step.norm() <= 1e-16 * (1.0 + z.norm());
                z = candidate;
                r = r_new;
                cost = cost_new;
                *damping = (*damping / 5.0).max(1e-30);
                improved = !tiny_step;
                break;
            }
            *damping *= 4.0;
            if *damping > 1e30 {
                break;
            }
        }
        if !improved {
            break;
        }
    }
    z
}
