//! Self-checks behind `milnor verify-paper`.
//!
//! Each check is independent and deterministic for a given seed; they run
//! on scoped threads and are reported in a fixed order.

use milnor_core::curvature::{levi_civita, ricci_in_frame, riemann};
use milnor_core::derivations::{derivation_basis, pattern_check, pattern_dimension};
use milnor_core::linalg::{symmetric_eigen, Matrix};
use milnor_core::reduction::{reduce, representative};
use milnor_core::sampling::{metric_in_orbit, random_automorphism, XorShift64Star};
use milnor_core::{
    classify_metric_with, closed_form_ricci, ricci_operator, sample_metric, Family, GramMatrix, LieAlgebra,
    RandomMetricSpec, Result, Signature,
};

use crate::report::{Check, VerifyReport};

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    /// Random metrics per family and dimension.
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            samples: 100,
            seed: 0,
            tol: milnor_core::DEFAULT_TOL,
        }
    }
}

type CheckFn = fn(&VerifyConfig) -> Result<(bool, String)>;

const CHECKS: [(&str, CheckFn); 8] = [
    ("closed-form Ricci", closed_form),
    ("connection and curvature values", curvature_values),
    ("reduction", reduction),
    ("Ricci signatures", signatures),
    ("coupled (x_2, x_n) block", coupled_block),
    ("solvsolitons", solvsolitons),
    ("no Einstein metrics", einstein),
    ("derivation algebra", derivations),
];

pub fn run(config: &VerifyConfig) -> VerifyReport {
    let results: Vec<Check> = std::thread::scope(|s| {
        let handles: Vec<_> = CHECKS
            .iter()
            .map(|&(name, f)| (name, s.spawn(move || f(config))))
            .collect();
        handles
            .into_iter()
            .map(|(name, h)| {
                let (passed, detail) = match h.join() {
                    Ok(Ok(r)) => r,
                    Ok(Err(e)) => (false, format!("error: {e}")),
                    Err(_) => (false, "check panicked".to_string()),
                };
                Check {
                    name: name.to_string(),
                    passed,
                    detail,
                }
            })
            .collect()
    });
    VerifyReport {
        passed: results.iter().all(|c| c.passed),
        checks: results,
    }
}

fn sample_seed(config: &VerifyConfig, f: Family, n: usize, i: usize) -> u64 {
    let tag = match f {
        Family::Rh2SumAbelian => 1u64,
        _ => 2,
    };
    config
        .seed
        .wrapping_add((tag << 48) | ((n as u64) << 32) | i as u64)
}

fn closed_form(_: &VerifyConfig) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for f in Family::SOLVABLE {
        for n in 3..=8 {
            for lam in [0.0, 0.5, 1.0, 2.0, 7.3] {
                let generic = ricci_in_frame(&LieAlgebra::milnor_model(f, n, lam)?);
                worst = worst.max(generic.max_abs_diff(&closed_form_ricci(f, n, lam)?.ric));
            }
        }
    }
    Ok((worst <= 1e-9, format!("max entry error {worst:.2e}")))
}

fn curvature_values(_: &VerifyConfig) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for n in 3..=8 {
        let last = n - 1;
        for lam in [0.0, 1.0, 2.0] {
            let q = lam * lam / 4.0;
            let a = LieAlgebra::milnor_model(Family::Rh2SumAbelian, n, lam)?;
            let ct = levi_civita(&a);
            let rt = riemann(&ct, &a);
            worst = worst
                .max((ct.get(0, 1, last) - lam / 2.0).abs())
                .max((ct.get(1, 1, 0) - 1.0).abs())
                .max((rt.get(0, 1, 1, 0) + 1.0 + 3.0 * q).abs())
                .max((rt.get(0, last, last, 0) - q).abs());
            let b = LieAlgebra::milnor_model(Family::RhLineSum, n, lam)?;
            let ct = levi_civita(&b);
            let rt = riemann(&ct, &b);
            worst = worst
                .max((ct.get(0, 1, last) + lam / 2.0).abs())
                .max((ct.get(last, last, 0) - 1.0).abs())
                .max((rt.get(0, 1, 1, 0) + 3.0 * q).abs())
                .max((rt.get(0, last, last, 0) + 1.0 - q).abs())
                .max((rt.get(1, 0, 0, last) - lam).abs());
        }
    }
    Ok((worst <= 1e-10, format!("max error {worst:.2e}")))
}

fn reduction(config: &VerifyConfig) -> Result<(bool, String)> {
    let mut worst_resid = 0.0f64;
    let mut worst_drift = 0.0f64;
    let mut count = 0usize;
    for f in Family::SOLVABLE {
        for n in 3..=6 {
            let alg = LieAlgebra::build_family(f, n)?;
            for i in 0..config.samples {
                let s = sample_seed(config, f, n, i);
                let gram = sample_metric(&RandomMetricSpec::new(s), n)?;
                let base = reduce(&alg, &gram)?;
                let mut rng = XorShift64Star::new(!s);
                let scaled = reduce(&alg, &gram.scaled(rng.uniform(0.1, 10.0))?)?;
                let pushed = reduce(&alg, &gram.pushed_forward(&random_automorphism(&mut rng, n)?)?)?;
                if base.lambda < 0.0 {
                    return Ok((false, format!("negative λ for seed {s}")));
                }
                let denom = base.lambda.max(1.0);
                worst_drift = worst_drift
                    .max((scaled.lambda - base.lambda).abs() / denom)
                    .max((pushed.lambda - base.lambda).abs() / denom);
                worst_resid = worst_resid
                    .max(base.residuals.orthonormality)
                    .max(base.residuals.bracket_pattern);
                count += 1;
            }
        }
    }
    Ok((
        worst_resid <= config.tol && worst_drift <= config.tol,
        format!("{count} metrics, residual {worst_resid:.2e}, λ drift {worst_drift:.2e}"),
    ))
}

fn signatures(config: &VerifyConfig) -> Result<(bool, String)> {
    let mut misses = 0usize;
    let mut count = 0usize;
    for f in Family::SOLVABLE {
        for n in 3..=6 {
            let alg = LieAlgebra::build_family(f, n)?;
            let (degenerate, generic) = Signature::family_pair(f, n)?;
            for i in 0..config.samples {
                let gram = sample_metric(&RandomMetricSpec::new(sample_seed(config, f, n, i)), n)?;
                let sig = ricci_operator(&alg, &gram)?.signature;
                misses += usize::from(sig != degenerate && sig != generic);
                count += 1;
            }
            let mut rng = XorShift64Star::new(sample_seed(config, f, n, usize::MAX >> 16));
            for lam in [0.0, 0.5, 2.0] {
                let sig = ricci_operator(&alg, &metric_in_orbit(&mut rng, n, lam)?)?.signature;
                let want = if lam == 0.0 { degenerate } else { generic };
                misses += usize::from(sig != want);
                count += 1;
            }
        }
    }
    Ok((misses == 0, format!("{count} metrics, {misses} unexpected signatures")))
}

fn coupled_block(_: &VerifyConfig) -> Result<(bool, String)> {
    // 2A = 2·Ric restricted to span{x_2, x_n}; its characteristic polynomial
    // is t² + 2(n−2)t − λ²(λ² + (n−2)² + 1)
    let mut worst = 0.0f64;
    let mut signs_ok = true;
    for n in 3..=8 {
        for lam in [0.0, 1.0, 3.0] {
            let ric = ricci_in_frame(&LieAlgebra::milnor_model(Family::RhLineSum, n, lam)?);
            let last = n - 1;
            let two_a = Matrix::from_fn(2, 2, |i, j| {
                let idx = [1, last];
                2.0 * ric[(idx[i], idx[j])]
            });
            let m = (n - 2) as f64;
            let l2 = lam * lam;
            let constant = -l2 * (l2 + m * m + 1.0);
            let values = symmetric_eigen(&two_a)?.values;
            for mu in &values {
                worst = worst.max((mu * mu + 2.0 * m * mu + constant).abs() / (1.0 + constant.abs()));
            }
            signs_ok &= if lam > 0.0 {
                values[0] < 0.0 && values[1] > 0.0
            } else {
                values[0] < 0.0 && values[1].abs() < 1e-12
            };
        }
    }
    Ok((
        signs_ok && worst <= 1e-10,
        format!("eigenvalue signs {}, polynomial residual {worst:.2e}", if signs_ok { "ok" } else { "wrong" }),
    ))
}

fn solvsolitons(config: &VerifyConfig) -> Result<(bool, String)> {
    let mut mismatches = 0usize;
    let mut worst_c = 0.0f64;
    let mut count = 0usize;
    for f in Family::SOLVABLE {
        for n in 3..=8 {
            let alg = LieAlgebra::build_family(f, n)?;
            let der = derivation_basis(&alg)?;
            let cl = classify_metric_with(&alg, &der, &GramMatrix::identity(n), config.tol)?;
            let want = match f {
                Family::Rh2SumAbelian => -1.0,
                _ => -((n - 2) as f64),
            };
            mismatches += usize::from(!cl.verdict.is_solvsoliton);
            worst_c = worst_c.max((cl.verdict.c - want).abs());
            count += 1;
        }
        for n in 3..=6 {
            let alg = LieAlgebra::build_family(f, n)?;
            let der = derivation_basis(&alg)?;
            for i in 0..config.samples {
                let gram = sample_metric(&RandomMetricSpec::new(sample_seed(config, f, n, i)), n)?;
                let cl = classify_metric_with(&alg, &der, &gram, config.tol)?;
                mismatches += usize::from(cl.verdict.is_solvsoliton != (cl.lambda() == 0.0));
                count += 1;
            }
            let mut rng = XorShift64Star::new(sample_seed(config, f, n, usize::MAX >> 20));
            for lam in [0.0, 0.7] {
                let cl = classify_metric_with(&alg, &der, &metric_in_orbit(&mut rng, n, lam)?, config.tol)?;
                mismatches += usize::from(cl.verdict.is_solvsoliton != (lam == 0.0));
                count += 1;
            }
        }
    }
    Ok((
        mismatches == 0 && worst_c <= 1e-10,
        format!("{count} metrics, {mismatches} mismatches, canonical c error {worst_c:.2e}"),
    ))
}

fn einstein(config: &VerifyConfig) -> Result<(bool, String)> {
    let mut min_ratio = f64::INFINITY;
    for f in Family::SOLVABLE {
        for n in 3..=8 {
            let alg = LieAlgebra::build_family(f, n)?;
            let der = derivation_basis(&alg)?;
            let mut grams = vec![
                GramMatrix::from_group_element(&representative(n, 0.0))?,
                GramMatrix::from_group_element(&representative(n, 1.0))?,
            ];
            for i in 0..config.samples.min(50) {
                grams.push(sample_metric(&RandomMetricSpec::new(sample_seed(config, f, n, i)), n)?);
            }
            for g in &grams {
                let cl = classify_metric_with(&alg, &der, g, config.tol)?;
                min_ratio = min_ratio.min(cl.verdict.einstein_residual / cl.ric.frobenius_norm());
            }
        }
    }
    Ok((min_ratio > 1e-3, format!("min residual/‖Ric‖ {min_ratio:.3}")))
}

fn derivations(_: &VerifyConfig) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for f in Family::SOLVABLE {
        for n in 3..=8 {
            let alg = LieAlgebra::build_family(f, n)?;
            let basis = derivation_basis(&alg)?;
            if basis.len() != pattern_dimension(n) || !pattern_check(&alg, &basis)? {
                bad.push(format!("{f} n={n}"));
            }
        }
    }
    let detail = if bad.is_empty() {
        "dimension (n−2)² + n and pattern hold for n = 3..8".to_string()
    } else {
        format!("failed for {}", bad.join(", "))
    };
    Ok((bad.is_empty(), detail))
}
