//! Eigenvalue inclusion sets built from absolute row sums.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::ComplexTensor;

/// Absolute row sums of a tensor, split the ways the inclusion sets need them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowSums {
    /// Off-diagonal row sum `r_i`: every entry in row `i` except the all-`i` tuple.
    pub r: Vec<f64>,
    /// `r_minus_j[i][j] = r_i - |a_{i j..j j..j}|`; the diagonal `i == j` holds `r_i`.
    pub r_minus_j: Vec<Vec<f64>>,
    /// Row `i` restricted to tuples whose trailing indices all differ from `i`.
    pub r_prime: Vec<f64>,
    /// `r_i - r_prime_i`: off-diagonal tuples that mention `i` again.
    pub r_hat: Vec<f64>,
    #[serde(with = "crate::json::complex_seq")]
    pub diag: Vec<Complex64>,
}

/// A subset of the complex plane with a membership test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Region {
    Disk {
        #[serde(with = "crate::json::complex")]
        center: Complex64,
        radius: f64,
    },
    /// `{z : (|z - a| - shift) * |z - b| <= bound}`.
    Oval {
        #[serde(with = "crate::json::complex")]
        a: Complex64,
        #[serde(with = "crate::json::complex")]
        b: Complex64,
        shift: f64,
        bound: f64,
    },
    Union {
        parts: Vec<Region>,
    },
}

/// Axis-aligned box `[re_min, re_max] x [im_min, im_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl BoundingBox {
    fn around(center: Complex64, radius: f64) -> Self {
        BoundingBox {
            re_min: center.re - radius,
            re_max: center.re + radius,
            im_min: center.im - radius,
            im_max: center.im + radius,
        }
    }

    fn hull(self, other: BoundingBox) -> Self {
        BoundingBox {
            re_min: self.re_min.min(other.re_min),
            re_max: self.re_max.max(other.re_max),
            im_min: self.im_min.min(other.im_min),
            im_max: self.im_max.max(other.im_max),
        }
    }

    /// Grow each side by `fraction` of the larger extent (at least `fraction` absolute).
    pub fn inflate(self, fraction: f64) -> Self {
        let span = (self.re_max - self.re_min).max(self.im_max - self.im_min).max(1.0);
        let pad = fraction * span;
        BoundingBox {
            re_min: self.re_min - pad,
            re_max: self.re_max + pad,
            im_min: self.im_min - pad,
            im_max: self.im_max + pad,
        }
    }
}

impl Region {
    /// Exact evaluation of the defining inequalities (boundary included).
    pub fn contains(&self, z: Complex64) -> bool {
        self.contains_with_margin(z, 0.0)
    }

    /// Membership in the region grown by `eps`: every distance is shortened by `eps`
    /// before the inequality is checked. Useful for points computed in floating point.
    pub fn contains_with_margin(&self, z: Complex64, eps: f64) -> bool {
        match self {
            Region::Disk { center, radius } => (z - center).norm() <= radius + eps,
            Region::Oval { a, b, shift, bound } => {
                let left = (z - a).norm() - shift - eps;
                let right = ((z - b).norm() - eps).max(0.0);
                left * right <= *bound
            }
            Region::Union { parts } => parts.iter().any(|p| p.contains_with_margin(z, eps)),
        }
    }

    /// A finite box containing the region. `None` for an empty union.
    pub fn bounding_box(&self) -> Option<BoundingBox> {
        match self {
            Region::Disk { center, radius } => Some(BoundingBox::around(*center, *radius)),
            // Outside both disks below, each factor exceeds sqrt(bound).
            Region::Oval { a, b, shift, bound } => {
                let root = bound.max(0.0).sqrt();
                Some(BoundingBox::around(*a, shift + root).hull(BoundingBox::around(*b, root)))
            }
            Region::Union { parts } => parts.iter().filter_map(Region::bounding_box).reduce(BoundingBox::hull),
        }
    }
}

/// Computes all row-sum arrays in one pass over the stored entries.
pub fn row_sums(a: &ComplexTensor) -> RowSums {
    let n = a.dim();
    let mut r = vec![0.0; n];
    let mut r_prime = vec![0.0; n];
    let mut diag = vec![Complex64::new(0.0, 0.0); n];
    let mut pair = vec![vec![0.0; n]; n];

    for (key, v) in a.iter() {
        let i = key[0];
        let tail = &key[1..];
        let modulus = v.norm();
        if tail.iter().all(|&t| t == i) {
            diag[i] = v;
            continue;
        }
        r[i] += modulus;
        if tail.iter().all(|&t| t != i) {
            r_prime[i] += modulus;
        }
        if tail.iter().all(|&t| t == tail[0]) {
            pair[i][tail[0]] = modulus;
        }
    }

    let r_minus_j = (0..n).map(|i| (0..n).map(|j| r[i] - pair[i][j]).collect()).collect();
    let r_hat = r.iter().zip(&r_prime).map(|(t, p)| t - p).collect();
    RowSums {
        r,
        r_minus_j,
        r_prime,
        r_hat,
        diag,
    }
}

/// `|a_{i j..j j..j}|` recovered from the row sums.
pub(crate) fn pair_modulus(sums: &RowSums, i: usize, j: usize) -> f64 {
    (sums.r[i] - sums.r_minus_j[i][j]).max(0.0)
}

pub fn gershgorin_set(a: &ComplexTensor) -> Region {
    let sums = row_sums(a);
    Region::Union {
        parts: sums
            .diag
            .iter()
            .zip(&sums.r)
            .map(|(&center, &radius)| Region::Disk { center, radius })
            .collect(),
    }
}

fn ordered_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
}

pub fn llk_set(a: &ComplexTensor) -> Result<Region> {
    let n = a.dim();
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let sums = row_sums(a);
    Ok(Region::Union {
        parts: ordered_pairs(n)
            .map(|(i, j)| Region::Oval {
                a: sums.diag[i],
                b: sums.diag[j],
                shift: sums.r_minus_j[i][j],
                bound: pair_modulus(&sums, i, j) * sums.r[j],
            })
            .collect(),
    })
}

pub fn ll_set(a: &ComplexTensor) -> Result<Region> {
    let n = a.dim();
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let sums = row_sums(a);
    Ok(Region::Union {
        parts: ordered_pairs(n)
            .map(|(i, j)| Region::Oval {
                a: sums.diag[i],
                b: sums.diag[j],
                shift: sums.r_hat[i],
                bound: sums.r_prime[i] * sums.r[j],
            })
            .collect(),
    })
}

/// `min_i (a_{i..i i..i} - r_i)` on the symmetrization: a lower bound for every
/// eigenvalue of `S_A`.
pub fn eigen_lower_bound(a: &ComplexTensor) -> Result<f64> {
    if !a.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let sums = row_sums(&a.symmetrize());
    Ok(sums
        .diag
        .iter()
        .zip(&sums.r)
        .map(|(d, r)| d.re - r)
        .fold(f64::INFINITY, f64::min))
}
