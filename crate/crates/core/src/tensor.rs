//! Sparse 2m-th order, n-dimensional complex tensors.
//!
//! An entry is keyed by its full index tuple `(i_1..i_m, j_1..j_m)`: the first
//! `m` positions pair with `x`, the last `m` with `conj(x)`. Indices are
//! 1-based at the public construction boundary and 0-based everywhere else.

use std::collections::BTreeMap;
use std::ops::{Deref, DerefMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance on entry magnitudes used by the structural predicates.
pub const STRUCTURE_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// A length-n complex vector.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ComplexVector(pub Vec<Complex64>);

impl ComplexVector {
    pub fn zeros(n: usize) -> Self {
        ComplexVector(vec![ZERO; n])
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    /// `Σ |x_i|^p`.
    pub fn pow_sum(&self, p: i32) -> f64 {
        self.0.iter().map(|z| z.norm().powi(p)).sum()
    }
}

impl Deref for ComplexVector {
    type Target = [Complex64];
    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

impl DerefMut for ComplexVector {
    fn deref_mut(&mut self) -> &mut [Complex64] {
        &mut self.0
    }
}

impl From<Vec<Complex64>> for ComplexVector {
    fn from(v: Vec<Complex64>) -> Self {
        ComplexVector(v)
    }
}

impl FromIterator<Complex64> for ComplexVector {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        ComplexVector(iter.into_iter().collect())
    }
}

/// Immutable sparse complex tensor of order `2 * order_half` and dimension `dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexTensor {
    order_half: usize,
    dim: usize,
    entries: BTreeMap<Vec<usize>, Complex64>,
}

impl ComplexTensor {
    /// Builds a tensor from 1-based index tuples. Zero values are dropped.
    pub fn build<I>(order_half: usize, dim: usize, entry_list: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Complex64)>,
    {
        if order_half == 0 || dim == 0 {
            return Err(Error::EmptyShape { m: order_half, n: dim });
        }
        let arity = 2 * order_half;
        let mut entries = BTreeMap::new();
        let mut seen = std::collections::BTreeSet::new();
        for (tuple, value) in entry_list {
            if tuple.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: tuple.len(),
                    tuple,
                });
            }
            if let Some(&bad) = tuple.iter().find(|&&i| i == 0 || i > dim) {
                return Err(Error::IndexOutOfRange { tuple, index: bad, dim });
            }
            let key: Vec<usize> = tuple.iter().map(|i| i - 1).collect();
            if !seen.insert(key.clone()) {
                return Err(Error::DuplicateEntry(tuple));
            }
            if value != ZERO {
                entries.insert(key, value);
            }
        }
        Ok(ComplexTensor {
            order_half,
            dim,
            entries,
        })
    }

    pub fn zeros(order_half: usize, dim: usize) -> Self {
        ComplexTensor {
            order_half,
            dim,
            entries: BTreeMap::new(),
        }
    }

    /// Builds from 0-based keys, summing duplicates and dropping exact zeros.
    pub fn from_accumulated<I>(order_half: usize, dim: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<usize>, Complex64)>,
    {
        let mut entries: BTreeMap<Vec<usize>, Complex64> = BTreeMap::new();
        for (key, value) in terms {
            debug_assert_eq!(key.len(), 2 * order_half);
            *entries.entry(key).or_insert(ZERO) += value;
        }
        entries.retain(|_, v| *v != ZERO);
        ComplexTensor {
            order_half,
            dim,
            entries,
        }
    }

    /// The identity-pattern tensor: 1 on every all-equal tuple `(i..i, i..i)`.
    pub fn diagonal_identity(order_half: usize, dim: usize) -> Self {
        Self::from_accumulated(
            order_half,
            dim,
            (0..dim).map(|i| (vec![i; 2 * order_half], Complex64::new(1.0, 0.0))),
        )
    }

    pub fn order_half(&self) -> usize {
        self.order_half
    }

    pub fn order(&self) -> usize {
        2 * self.order_half
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Entry at a 0-based key; absent keys are zero.
    pub fn get(&self, key: &[usize]) -> Complex64 {
        self.entries.get(key).copied().unwrap_or(ZERO)
    }

    /// Stored entries with 0-based keys, in lexicographic key order.
    pub fn iter(&self) -> impl Iterator<Item = (&[usize], Complex64)> + '_ {
        self.entries.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    /// Stored entries with 1-based index tuples.
    pub fn entries_one_based(&self) -> Vec<(Vec<usize>, Complex64)> {
        self.iter()
            .map(|(k, v)| (k.iter().map(|i| i + 1).collect(), v))
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::from_accumulated(
            self.order_half,
            self.dim,
            self.iter().map(|(k, v)| (k.to_vec(), v * factor)),
        )
    }

    /// Entrywise `self + other`.
    pub fn add(&self, other: &ComplexTensor) -> Result<Self> {
        if self.order_half != other.order_half || self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(Self::from_accumulated(
            self.order_half,
            self.dim,
            self.iter().chain(other.iter()).map(|(k, v)| (k.to_vec(), v)),
        ))
    }

    /// The sub-tensor on the 0-based index range `range`, re-indexed from zero.
    pub fn sub_tensor(&self, range: std::ops::Range<usize>) -> Self {
        let offset = range.start;
        let dim = range.len();
        Self::from_accumulated(
            self.order_half,
            dim,
            self.iter()
                .filter(|(k, _)| k.iter().all(|i| range.contains(i)))
                .map(|(k, v)| (k.iter().map(|i| i - offset).collect(), v)),
        )
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_hermitian_with_tol(STRUCTURE_TOL)
    }

    /// `conj(a[I, J]) == a[J, I]` for every tuple. Checking each stored entry
    /// also covers absent/stored pairs, since a stored partner is checked itself.
    pub fn is_hermitian_with_tol(&self, tol: f64) -> bool {
        let m = self.order_half;
        self.iter().all(|(key, value)| {
            let partner = swap_blocks(key, m);
            (value.conj() - self.get(&partner)).norm() <= tol
        })
    }

    pub fn is_cps(&self) -> bool {
        self.is_cps_with_tol(STRUCTURE_TOL)
    }

    /// Hermitian and invariant under independent permutations of both blocks.
    pub fn is_cps_with_tol(&self, tol: f64) -> bool {
        if !self.is_hermitian_with_tol(tol) {
            return false;
        }
        let m = self.order_half;
        let perms = permutations(m);
        self.iter()
            .all(|(key, value)| block_images(key, m, &perms).all(|image| (self.get(&image) - value).norm() <= tol))
    }

    /// Conjugate partial symmetrization: the average of the tensor over all
    /// pairs of permutations of the `i`-block and the `j`-block.
    pub fn symmetrize(&self) -> Self {
        let m = self.order_half;
        let perms = permutations(m);
        let weight = 1.0 / (perms.len() * perms.len()) as f64;
        let terms: Vec<_> = self
            .iter()
            .flat_map(|(key, value)| {
                block_images(key, m, &perms)
                    .map(move |image| (image, value * weight))
                    .collect::<Vec<_>>()
            })
            .collect();
        Self::from_accumulated(m, self.dim, terms)
    }

    fn check_len(&self, x: &[Complex64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(())
    }

    /// `f(A)(x) = Σ a_{I J} x_{i_1}..x_{i_m} conj(x_{j_1})..conj(x_{j_m})`.
    pub fn eval_form(&self, x: &[Complex64]) -> Result<Complex64> {
        self.check_len(x)?;
        let m = self.order_half;
        let xc: Vec<Complex64> = x.iter().map(|z| z.conj()).collect();
        Ok(self
            .iter()
            .map(|(key, a)| {
                let holo: Complex64 = key[..m].iter().map(|&i| x[i]).product();
                let anti: Complex64 = key[m..].iter().map(|&j| xc[j]).product();
                a * holo * anti
            })
            .sum())
    }

    /// Contraction over every index but the first:
    /// `y_i = Σ a_{i i_2..i_m j_1..j_m} x_{i_2}..x_{i_m} conj(x_{j_1})..conj(x_{j_m})`.
    pub fn apply_contraction(&self, x: &[Complex64]) -> Result<ComplexVector> {
        self.check_len(x)?;
        let m = self.order_half;
        let xc: Vec<Complex64> = x.iter().map(|z| z.conj()).collect();
        let mut out = ComplexVector::zeros(self.dim);
        for (key, a) in self.iter() {
            let holo: Complex64 = key[1..m].iter().map(|&i| x[i]).product();
            let anti: Complex64 = key[m..].iter().map(|&j| xc[j]).product();
            out[key[0]] += a * holo * anti;
        }
        Ok(out)
    }
}

/// `(I, J) -> (J, I)`.
pub(crate) fn swap_blocks(key: &[usize], m: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(key.len());
    out.extend_from_slice(&key[m..]);
    out.extend_from_slice(&key[..m]);
    out
}

/// All permutations of `0..m`, identity first.
pub(crate) fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                extend(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(m), &mut vec![false; m], &mut out);
    out
}

/// Images of `key` under every (σ, τ) pair, with multiplicity.
fn block_images<'a>(key: &'a [usize], m: usize, perms: &'a [Vec<usize>]) -> impl Iterator<Item = Vec<usize>> + 'a {
    perms.iter().flat_map(move |sigma| {
        perms.iter().map(move |tau| {
            let mut image = Vec::with_capacity(2 * m);
            image.extend(sigma.iter().map(|&p| key[p]));
            image.extend(tau.iter().map(|&p| key[m + p]));
            image
        })
    })
}
