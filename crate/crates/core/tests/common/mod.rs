#![allow(dead_code)]

use std::path::PathBuf;

use htensor::{Complex64, ComplexTensor};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join(name)
}

pub fn load(name: &str) -> ComplexTensor {
    htensor::io::read_tensor(&fixture(name)).unwrap()
}

pub fn all_keys(m: usize, n: usize) -> Vec<Vec<usize>> {
    let arity = 2 * m;
    (0..n.pow(arity as u32))
        .map(|mut flat| {
            let mut key = vec![0; arity];
            for slot in (0..arity).rev() {
                key[slot] = flat % n;
                flat /= n;
            }
            key
        })
        .collect()
}

pub fn swap_blocks(key: &[usize], m: usize) -> Vec<usize> {
    key[m..].iter().chain(&key[..m]).copied().collect()
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    c(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| gaussian(rng)).collect()
}

pub fn random_real_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| c(StandardNormal.sample(rng), 0.0)).collect()
}

/// Dense random tensor, each entry kept with probability `density`.
pub fn random_tensor(rng: &mut ChaCha8Rng, m: usize, n: usize, density: f64) -> ComplexTensor {
    let mut terms = Vec::new();
    for k in all_keys(m, n) {
        if rng.random::<f64>() < density {
            terms.push((k, gaussian(rng)));
        }
    }
    ComplexTensor::from_accumulated(m, n, terms)
}

/// `(A + A^H) / 2`, where `A^H` swaps the two index blocks and conjugates.
pub fn hermitian_part(a: &ComplexTensor) -> ComplexTensor {
    let m = a.order_half();
    let terms = a
        .iter()
        .flat_map(|(k, v)| [(k.to_vec(), v * 0.5), (swap_blocks(k, m), v.conj() * 0.5)]);
    ComplexTensor::from_accumulated(m, a.dim(), terms.collect::<Vec<_>>())
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, m: usize, n: usize, density: f64) -> ComplexTensor {
    hermitian_part(&random_tensor(rng, m, n, density))
}

/// Replaces every all-`i` diagonal entry with `values[i]`.
pub fn with_diagonal(a: &ComplexTensor, values: &[f64]) -> ComplexTensor {
    let m = a.order_half();
    let n = a.dim();
    let terms = a
        .iter()
        .filter(|(k, _)| !k.iter().all(|&i| i == k[0]))
        .map(|(k, v)| (k.to_vec(), v))
        .chain((0..n).map(|i| (vec![i; 2 * m], c(values[i], 0.0))));
    ComplexTensor::from_accumulated(m, n, terms.collect::<Vec<_>>())
}

pub fn random_unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    let v = random_vector(rng, n);
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// `g4 = -I_n` pattern, `h2 = I_r`, derivative blocks random with the
/// conjugate symmetries G needs, multiplied by `scale`.
pub fn random_ahz(rng: &mut ChaCha8Rng, n: usize, r: usize, scale: f64) -> htensor::AHZComponents {
    let zero = c(0.0, 0.0);
    let idx4 = |a: usize, b: usize, cc: usize, d: usize, k: usize| ((a * k + b) * k + cc) * k + d;
    let mut g4 = vec![zero; n.pow(4)];
    for i in 0..n {
        g4[idx4(i, i, i, i, n)] = c(-1.0, 0.0);
    }
    let h2 = (0..r * r)
        .map(|p| if p / r == p % r { c(1.0, 0.0) } else { zero })
        .collect();
    let mut comps = htensor::AHZComponents::new(n, r, g4, h2);

    let raw2: Vec<Complex64> = (0..n * n).map(|_| gaussian(rng)).collect();
    comps.hv2 = (0..n * n)
        .map(|p| (raw2[p] + raw2[(p % n) * n + p / n].conj()) * (0.5 * scale))
        .collect();

    let raw4: Vec<Complex64> = (0..n.pow(4)).map(|_| gaussian(rng)).collect();
    let mut hv4 = vec![zero; n.pow(4)];
    for p in 0..n {
        for q in 0..n {
            for s in 0..n {
                for t in 0..n {
                    hv4[idx4(p, q, s, t, n)] =
                        (raw4[idx4(p, q, s, t, n)] + raw4[idx4(q, p, t, s, n)].conj()) * (0.5 * scale);
                }
            }
        }
    }
    comps.hv4 = hv4;

    comps.hv3 = (0..r * n.pow(3)).map(|_| gaussian(rng) * scale).collect();

    let at = |a: usize, b: usize, i: usize, j: usize| ((a * r + b) * n + i) * n + j;
    let raw_ab: Vec<Complex64> = (0..r * r * n * n).map(|_| gaussian(rng)).collect();
    let mut hab2 = vec![zero; r * r * n * n];
    for a in 0..r {
        for b in 0..r {
            for i in 0..n {
                for j in 0..n {
                    hab2[at(a, b, i, j)] = (raw_ab[at(a, b, i, j)] + raw_ab[at(b, a, j, i)].conj()) * (0.5 * scale);
                }
            }
        }
    }
    comps.hab2 = hab2;
    comps
}
