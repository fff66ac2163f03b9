//! Spectral analysis of Hermitian and conjugate partial-symmetric complex tensors.
//!
//! A tensor of order `2m` and dimension `n` is stored sparsely by its full index
//! tuple `(i_1..i_m, j_1..j_m)`. The first block is contracted against `x`, the
//! second against `conj(x)`.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` deliberately rejects NaN.

pub mod ahz;
pub mod certify;
pub mod cli;
pub mod curvature;
pub mod eigen;
pub mod error;
pub mod inclusion;
pub mod io;
pub mod json;
pub mod plot;
pub mod tensor;

pub use ahz::{ahz_assemble_g, ahz_default_bounds, ahz_lambda_threshold, AHZComponents};
pub use certify::{
    block_criterion, block_criterion_auto, certify, certify_with, is_diagonally_dominated, is_ll_tensor, is_llk_tensor,
    BlockData, Certificate, Method, Predicate, Rule, Verdict, Witness,
};
pub use curvature::{check_hsc_positive, cheung_lemma_check, curvature_to_tensor, hsc, CurvatureData};
pub use eigen::{
    certify_pd_by_eigen, eigenvalue_count_bound, enumerate_eigenvalues, extremal_eigenvalues, matrix_eigen,
    min_eigenvalue, residual, EigenPair, SolverConfig,
};
pub use error::{Error, Result};
pub use inclusion::{eigen_lower_bound, gershgorin_set, ll_set, llk_set, row_sums, BoundingBox, Region, RowSums};
pub use num_complex::Complex64;
pub use tensor::{ComplexTensor, ComplexVector};
