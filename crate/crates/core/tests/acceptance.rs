//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the target exits nonzero if any criterion fails. Runs without the libtest
//! harness so the lines are visible under a plain `cargo test`.

mod common;

use std::f64::consts::FRAC_PI_4;
use std::time::{Duration, Instant};

use common::*;
use htensor::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lambdas(pairs: &[EigenPair]) -> Vec<f64> {
    pairs.iter().map(|p| p.lambda.re).collect()
}

fn cps_spectrum() -> Outcome {
    let start = Instant::now();
    let a = load("cps_spectrum.json");
    let cfg = SolverConfig {
        starts: 500,
        ..SolverConfig::default()
    };
    let pairs = enumerate_eigenvalues(&a, &cfg).map_err(|e| e.to_string())?;
    let found = lambdas(&pairs);
    ensure(found.len() == 3, || format!("expected 3 eigenvalues, got {found:?}"))?;
    for (got, want) in found.iter().zip([0.0, 1.0, 2.0]) {
        ensure((got - want).abs() <= 1e-6, || format!("eigenvalues {found:?}"))?;
    }
    for p in &pairs {
        ensure(p.residual <= 1e-8, || {
            format!("residual {} at {}", p.residual, p.lambda)
        })?;
    }
    let r0 =
        residual(&a, c(0.0, 0.0), &[Complex64::from_polar(1.0, FRAC_PI_4), c(1.0, 0.0)]).map_err(|e| e.to_string())?;
    let r2 =
        residual(&a, c(2.0, 0.0), &[Complex64::from_polar(1.0, -FRAC_PI_4), c(1.0, 0.0)]).map_err(|e| e.to_string())?;
    ensure(r0 <= 1e-10 && r2 <= 1e-10, || {
        format!("family residuals {r0:e}, {r2:e}")
    })?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("eigenvalues {found:?} in {elapsed:.2?}"))
}

fn tridiagonal() -> Outcome {
    let a = load("tridiagonal.json");
    let pairs = matrix_eigen(&a).map_err(|e| e.to_string())?;
    let found = lambdas(&pairs);
    let want = [2.0 - 3f64.sqrt(), 2.0, 2.0 + 3f64.sqrt()];
    for (got, w) in found.iter().zip(want) {
        ensure((got - w).abs() <= 1e-10, || format!("eigenvalues {found:?}"))?;
    }
    let ger = gershgorin_set(&a);
    let llk = llk_set(&a).map_err(|e| e.to_string())?;
    let ll = ll_set(&a).map_err(|e| e.to_string())?;
    let z1 = c(2.0, 2.0);
    let z2 = c(2.0, 1.5);
    ensure(ger.contains(z1) && !llk.contains(z1), || {
        "2+2i not in K_ger \\ K_llk".into()
    })?;
    ensure(llk.contains(z2) && !ll.contains(z2), || {
        "2+1.5i not in K_llk \\ K_ll".into()
    })?;
    for &l in &found {
        let z = c(l, 0.0);
        ensure(ger.contains(z) && llk.contains(z) && ll.contains(z), || {
            format!("eigenvalue {l} escapes a set")
        })?;
    }
    Ok(format!("eigenvalues {found:?}, witnesses reproduced"))
}

fn real_positive_indefinite() -> Outcome {
    let a = load("real_positive_indefinite.json");
    let value = a.eval_form(&[c(0.0, 1.0), c(1.0, 0.0)]).map_err(|e| e.to_string())?;
    ensure(value == c(-2.0, 0.0), || format!("f(i, 1) = {value}"))?;
    let cert = certify(&a, &SolverConfig::default()).map_err(|e| e.to_string())?;
    ensure(cert.verdict == Verdict::IndefiniteOrNegative, || format!("{cert:?}"))?;
    let Witness::NegativeVector { vector, .. } = &cert.witness else {
        return Err(format!("unexpected witness {:?}", cert.witness));
    };
    let witness_value = a.eval_form(vector).map_err(|e| e.to_string())?.re;
    ensure(witness_value < 0.0, || format!("witness value {witness_value}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(212);
    let mut min_real = f64::INFINITY;
    for _ in 0..1000 {
        let x = random_real_vector(&mut rng, 2);
        min_real = min_real.min(a.eval_form(&x).unwrap().re);
    }
    ensure(min_real > 0.0, || format!("real form reached {min_real}"))?;
    Ok(format!(
        "f(i,1) = -2, witness value {witness_value:.3}, min over 1000 real vectors {min_real:.3e}"
    ))
}

fn dominance_classification() -> Outcome {
    let cfg = SolverConfig::default();
    let expected = [
        ("A", [true, true, true], Rule::StrictDd),
        ("B", [false, true, true], Rule::StrictLlk),
        ("C", [false, false, true], Rule::StrictLl),
    ];
    let mut notes = Vec::new();
    for (name, [dd, llk, ll], rule) in expected {
        let t = load(&format!("dominance_{name}.json"));
        let got = [
            is_diagonally_dominated(&t, true).map_err(|e| e.to_string())?,
            is_llk_tensor(&t, true).map_err(|e| e.to_string())?,
            is_ll_tensor(&t, true).map_err(|e| e.to_string())?,
        ];
        ensure(got == [dd, llk, ll], || format!("{name}: strict DD/LLK/LL = {got:?}"))?;
        let non_strict = [
            is_diagonally_dominated(&t, false).unwrap(),
            is_llk_tensor(&t, false).unwrap(),
        ];
        ensure(non_strict == [dd, llk], || format!("{name}: DD/LLK = {non_strict:?}"))?;
        let cert = certify(&t, &cfg).map_err(|e| e.to_string())?;
        ensure(cert.verdict == Verdict::PositiveDefinite && cert.rule == rule, || {
            format!("{name}: {cert:?}")
        })?;
        let lmin = matrix_eigen(&t).map_err(|e| e.to_string())?[0].lambda.re;
        ensure(lmin > 0.0, || format!("{name}: lambda_min {lmin}"))?;
        notes.push(format!("{name} via {rule:?} (lambda_min {lmin:.4})"));
    }
    Ok(notes.join(", "))
}

fn nesting_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cfg = SolverConfig {
        starts: 24,
        ..SolverConfig::default()
    };
    let mut checked_points = 0usize;
    let mut eigenvalues = 0usize;
    for case in 0..100 {
        let m = 1 + case % 2;
        let n = 2 + (case / 2) % 3;
        let base = random_hermitian(&mut rng, m, n, 0.6);
        let diag: Vec<f64> = (0..n).map(|_| rng.random_range(-4.0..4.0)).collect();
        let a = with_diagonal(&base, &diag);

        let ger = gershgorin_set(&a);
        let llk = llk_set(&a).map_err(|e| e.to_string())?;
        let ll = ll_set(&a).map_err(|e| e.to_string())?;
        let bb = ger.bounding_box().unwrap().inflate(0.1);
        for i in 0..200 {
            for j in 0..200 {
                let z = c(
                    bb.re_min + (bb.re_max - bb.re_min) * i as f64 / 199.0,
                    bb.im_min + (bb.im_max - bb.im_min) * j as f64 / 199.0,
                );
                let (in_ll, in_llk, in_ger) = (ll.contains(z), llk.contains(z), ger.contains(z));
                ensure(!in_ll || in_llk, || {
                    format!("case {case} (m={m}, n={n}): {z} in K_ll but not K_llk")
                })?;
                ensure(!in_llk || in_ger, || {
                    format!("case {case} (m={m}, n={n}): {z} in K_llk but not K_ger")
                })?;
                checked_points += 1;
            }
        }

        let s = a.symmetrize();
        let ll_s = ll_set(&s).map_err(|e| e.to_string())?;
        let margin = 1e-7 * s.max_abs().max(1.0);
        let pairs = enumerate_eigenvalues(&s, &cfg).map_err(|e| e.to_string())?;
        for p in &pairs {
            ensure(ll_s.contains_with_margin(p.lambda, margin), || {
                format!("case {case}: eigenvalue {} outside K_ll(S_A)", p.lambda)
            })?;
        }
        eigenvalues += pairs.len();
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{checked_points} grid points, {eigenvalues} eigenvalues contained, {elapsed:.2?}"
    ))
}

fn hierarchy_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut counts = [0usize; 3];
    let mut instances = 0usize;
    let mut check = |t: &ComplexTensor| -> std::result::Result<(), String> {
        for strict in [false, true] {
            let dd = is_diagonally_dominated(t, strict).map_err(|e| e.to_string())?;
            let llk = is_llk_tensor(t, strict).map_err(|e| e.to_string())?;
            let ll = is_ll_tensor(t, strict).map_err(|e| e.to_string())?;
            ensure(!dd || llk, || format!("DD but not LLK (strict={strict}): {t:?}"))?;
            ensure(!llk || ll, || format!("LLK but not LL (strict={strict}): {t:?}"))?;
            if !strict {
                counts[0] += usize::from(dd);
                counts[1] += usize::from(llk);
                counts[2] += usize::from(ll);
            }
        }
        instances += 1;
        Ok(())
    };

    for case in 0..1000 {
        let m = 1 + case % 3;
        let n = if m == 3 { 2 } else { 2 + (case / 3) % 3 };
        let t = random_hermitian(&mut rng, m, n, 0.5);
        let r = row_sums(&t).r;
        // Diagonal near r_i: exact boundary, one ulp either side, or a modest factor.
        let diag: Vec<f64> = r
            .iter()
            .map(|&ri| match rng.random_range(0..5) {
                0 => ri,
                1 => f64::from_bits(ri.to_bits() + 1),
                2 => f64::from_bits(ri.to_bits().saturating_sub(1)),
                3 => ri * rng.random_range(0.5..1.5),
                _ => ri * rng.random_range(0.9..3.0),
            })
            .collect();
        check(&with_diagonal(&t, &diag))?;
    }
    for name in ["A", "B", "C"] {
        check(&load(&format!("dominance_{name}.json")))?;
    }
    Ok(format!(
        "{instances} instances, no violations (non-strict DD/LLK/LL held on {}/{}/{})",
        counts[0], counts[1], counts[2]
    ))
}

fn matrix_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = SolverConfig::default();
    let mut worst = 0.0f64;
    for case in 0..200 {
        let n = 1 + case % 5;
        let a = random_hermitian(&mut rng, 1, n, 1.0);
        let classical = lambdas(&matrix_eigen(&a).map_err(|e| e.to_string())?);
        let found = lambdas(&enumerate_eigenvalues(&a, &cfg).map_err(|e| e.to_string())?);
        ensure(found.len() == classical.len(), || {
            format!("case {case}: {found:?} vs {classical:?}")
        })?;
        for (x, y) in found.iter().zip(&classical) {
            worst = worst.max((x - y).abs());
        }
        ensure(worst <= 1e-8, || format!("case {case}: {found:?} vs {classical:?}"))?;
    }
    Ok(format!("200 matrices, max deviation {worst:.2e}"))
}

fn block_constants() -> Outcome {
    let n_const = htensor::certify::block_count_constant(2, 2, 1);
    ensure(n_const == 8.0, || format!("N = {n_const}"))?;
    // Leading block a_{1111} = 1, trailing a_{2222} = 4096, cross entries of modulus <= 1.
    let a = ComplexTensor::build(
        2,
        2,
        vec![
            (vec![1, 1, 1, 1], c(1.0, 0.0)),
            (vec![2, 2, 2, 2], c(4096.0, 0.0)),
            (vec![1, 2, 1, 2], c(1.0, 0.0)),
            (vec![1, 1, 1, 2], c(0.6, 0.8)),
            (vec![1, 2, 1, 1], c(0.6, -0.8)),
        ],
    )
    .map_err(|e| e.to_string())?;
    let cert = block_criterion(&a, 1, 1.0, 4096.0).map_err(|e| e.to_string())?;
    let Witness::Block(data) = &cert.witness else {
        return Err(format!("{cert:?}"));
    };
    ensure(data.k == 1.0 && data.n_const == 8.0 && data.c == 4096.0, || {
        format!("{data:?}")
    })?;
    ensure(cert.verdict == Verdict::PositiveDefinite, || format!("{cert:?}"))?;
    let lmin = min_eigenvalue(&a, &SolverConfig::default())
        .map_err(|e| e.to_string())?
        .lambda
        .re;
    ensure(lmin > 0.0, || format!("lambda_min {lmin}"))?;
    Ok(format!("N = 8, C = 4096, certified; solver lambda_min = {lmin:.4}"))
}

fn curvature_suite() -> Outcome {
    let data = io::read_curvature(&fixture("constant_curvature.json")).map_err(|e| e.to_string())?;
    let a = curvature_to_tensor(&data);
    ensure(a.is_cps(), || "A_R is not CPS".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let v = random_vector(&mut rng, data.dim());
        let h = hsc(&data, &v).map_err(|e| e.to_string())?;
        ensure((h - 2.0).abs() <= 1e-12, || format!("hsc = {h}"))?;
    }
    let cfg = SolverConfig::default();
    let cert = check_hsc_positive(&data, &cfg).map_err(|e| e.to_string())?;
    ensure(cert.verdict == Verdict::PositiveDefinite, || format!("{cert:?}"))?;

    let neg = data.scaled(-1.0);
    let cert = check_hsc_positive(&neg, &cfg).map_err(|e| e.to_string())?;
    ensure(cert.verdict == Verdict::IndefiniteOrNegative, || format!("{cert:?}"))?;
    let Witness::NegativeVector { vector, .. } = &cert.witness else {
        return Err(format!("{cert:?}"));
    };
    let h = hsc(&neg, vector).map_err(|e| e.to_string())?;
    ensure(h < 0.0, || format!("witness hsc {h}"))?;

    let comps = random_ahz(&mut rng, 2, 2, 0.05);
    let (ga, gb) = (1.0, 2.0);
    let threshold = ahz_lambda_threshold(&comps, ga, gb).map_err(|e| e.to_string())?;
    for k in 0..10 {
        let lambda = threshold * (1.0 + k as f64 * k as f64);
        let ok = htensor::ahz::ahz_is_certified(&comps, lambda, ga, gb).map_err(|e| e.to_string())?;
        ensure(ok, || format!("not strictly DD at lambda {lambda} >= {threshold}"))?;
    }
    Ok(format!(
        "hsc = 2, negated witness hsc {h:.3}, AHZ threshold {threshold:.6}"
    ))
}

fn count_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let cfg = SolverConfig {
        starts: 100,
        ..SolverConfig::default()
    };
    let mut tensors = vec![
        load("cps_spectrum.json"),
        load("real_positive_indefinite.json"),
        load("tridiagonal.json"),
    ];
    for case in 0..30 {
        let m = 1 + case % 2;
        let n = 1 + (case / 2) % 3;
        tensors.push(random_hermitian(&mut rng, m, n, 0.7));
    }
    let mut most = 0.0f64;
    for t in &tensors {
        let count = enumerate_eigenvalues(t, &cfg).map_err(|e| e.to_string())?.len() as f64;
        let bound = eigenvalue_count_bound(t.dim(), t.order_half());
        ensure(count <= bound, || format!("{count} eigenvalues exceed bound {bound}"))?;
        most = most.max(count / bound);
    }
    Ok(format!("{} runs, largest count/bound ratio {most:.3}", tensors.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 two-dim CPS tensor spectrum {0, 1, 2}", cps_spectrum),
        ("2 Hermitian matrix spectrum and strict inclusions", tridiagonal),
        (
            "3 real-positive but not Hermitian-positive form",
            real_positive_indefinite,
        ),
        (
            "4 DD / LLK / LL classification of three matrices",
            dominance_classification,
        ),
        ("5 inclusion-set nesting and containment", nesting_suite),
        ("6 predicate hierarchy", hierarchy_suite),
        ("7 matrix case agrees with classical eigensolver", matrix_oracle),
        ("8 block criterion constants", block_constants),
        ("9 curvature suite", curvature_suite),
        ("10 eigenvalue count bound", count_bound),
    ];
    let mut failures = Vec::new();
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(reason) => {
                println!("FAIL criterion {name}: {reason}");
                failures.push(name);
            }
        }
    }
    if !failures.is_empty() {
        eprintln!("failed criteria: {failures:?}");
        std::process::exit(1);
    }
}
