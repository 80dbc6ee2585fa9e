//! Report types emitted by the subcommands.
//!
//! Every report serializes to JSON with `serde_json::to_string_pretty`;
//! parsing the output back into the same type and serializing again yields
//! identical bytes. Matrices are arrays of rows.

use std::fmt::Write as _;

use milnor_core::curvature::RicciReport;
use milnor_core::reduction::MilnorFrame;
use milnor_core::{Matrix, Signature};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::format::matrix_rows;

pub trait Report: Serialize + DeserializeOwned {
    fn to_text(&self) -> String;

    fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports contain only finite numbers");
        s.push('\n');
        s
    }
}

fn push_matrix(out: &mut String, rows: &[Vec<f64>]) {
    for row in rows {
        // rounds to zero at six places; avoids printing -0.000000
        let cells: Vec<String> = row
            .iter()
            .map(|&x| format!("{:>12.6}", if x.abs() < 5e-7 { 0.0 } else { x }))
            .collect();
        let _ = writeln!(out, "  {}", cells.join(" "));
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignatureTriple {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

impl From<Signature> for SignatureTriple {
    fn from(s: Signature) -> Self {
        Self {
            negative: s.negative,
            zero: s.zero,
            positive: s.positive,
        }
    }
}

impl std::fmt::Display for SignatureTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.negative, self.zero, self.positive)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub orthonormality: f64,
    pub bracket_pattern: f64,
    pub condition_number: f64,
    pub ill_conditioned: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReduceReport {
    pub family: String,
    pub dim: usize,
    pub lambda: f64,
    pub k: f64,
    /// Columns are the frame vectors `x_1, …, x_n`.
    pub frame: Vec<Vec<f64>>,
    pub automorphism: Vec<Vec<f64>>,
    pub residuals: Residuals,
}

impl ReduceReport {
    pub fn new(r: &MilnorFrame) -> Self {
        Self {
            family: r.family.name().to_string(),
            dim: r.frame.rows(),
            lambda: r.lambda,
            k: r.scale_k,
            frame: matrix_rows(&r.frame),
            automorphism: matrix_rows(&r.automorphism),
            residuals: Residuals {
                orthonormality: r.residuals.orthonormality,
                bracket_pattern: r.residuals.bracket_pattern,
                condition_number: r.residuals.condition_number,
                ill_conditioned: r.residuals.ill_conditioned,
            },
        }
    }
}

impl Report for ReduceReport {
    fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "family {}, n = {}", self.family, self.dim);
        let _ = writeln!(out, "λ = {}", self.lambda);
        let _ = writeln!(out, "k = {}", self.k);
        out.push_str("frame (columns x_1 … x_n):\n");
        push_matrix(&mut out, &self.frame);
        let r = &self.residuals;
        let _ = writeln!(
            out,
            "residuals: orthonormality {:.3e}, bracket pattern {:.3e}",
            r.orthonormality, r.bracket_pattern
        );
        let _ = writeln!(out, "cond(G) = {:.3e}", r.condition_number);
        if r.ill_conditioned {
            out.push_str("warning: metric is ill-conditioned, results may be inaccurate\n");
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub family: Option<String>,
    pub dim: usize,
    /// Present when the algebra is one of the two families.
    pub lambda: Option<f64>,
    pub ric: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
    pub signature: SignatureTriple,
    pub scalar_curvature: f64,
}

impl CurvatureReport {
    pub fn new(family: Option<String>, lambda: Option<f64>, r: &RicciReport) -> Self {
        Self {
            family,
            dim: r.ric.rows(),
            lambda,
            ric: matrix_rows(&r.ric),
            eigenvalues: r.eigenvalues.clone(),
            signature: r.signature.into(),
            scalar_curvature: r.scalar_curvature,
        }
    }
}

impl Report for CurvatureReport {
    fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.family {
            Some(f) => {
                let _ = writeln!(out, "family {f}, n = {}", self.dim);
            }
            None => {
                let _ = writeln!(out, "n = {}", self.dim);
            }
        }
        if let Some(l) = self.lambda {
            let _ = writeln!(out, "λ = {l}");
        }
        out.push_str("Ric:\n");
        push_matrix(&mut out, &self.ric);
        let eig: Vec<String> = self.eigenvalues.iter().map(|x| format!("{x:.6}")).collect();
        let _ = writeln!(out, "eigenvalues: {}", eig.join(" "));
        let _ = writeln!(out, "(-, 0, +) = {}", self.signature);
        let _ = writeln!(out, "scalar curvature = {}", self.scalar_curvature);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivationsReport {
    pub family: Option<String>,
    pub dim: usize,
    pub derivation_dim: usize,
    pub expected_dim: Option<usize>,
    pub pattern_ok: Option<bool>,
    /// Frobenius-orthonormal basis of `Der(g)`.
    pub basis: Vec<Vec<Vec<f64>>>,
}

impl DerivationsReport {
    pub fn new(
        family: Option<String>,
        dim: usize,
        basis: &[Matrix],
        expected_dim: Option<usize>,
        pattern_ok: Option<bool>,
    ) -> Self {
        Self {
            family,
            dim,
            derivation_dim: basis.len(),
            expected_dim,
            pattern_ok,
            basis: basis.iter().map(matrix_rows).collect(),
        }
    }
}

impl Report for DerivationsReport {
    fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dim Der = {}", self.derivation_dim);
        if let Some(e) = self.expected_dim {
            let _ = writeln!(out, "expected {e}");
        }
        if let Some(ok) = self.pattern_ok {
            let _ = writeln!(out, "pattern {}", if ok { "ok" } else { "violated" });
        }
        for (i, m) in self.basis.iter().enumerate() {
            let _ = writeln!(out, "\nD_{}", i + 1);
            for row in m {
                let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                out.push_str(&cells.join(" "));
                out.push('\n');
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolitonReport {
    pub family: String,
    pub dim: usize,
    pub lambda: f64,
    pub k: f64,
    pub is_solvsoliton: bool,
    /// Constant for `k⟨·,·⟩`.
    pub c: f64,
    /// Constant for the metric as given, `k · c`.
    pub c_unnormalized: f64,
    /// `D` in the reduced frame.
    pub derivation: Vec<Vec<f64>>,
    pub derivation_coeffs: Vec<f64>,
    pub residual: f64,
    pub is_einstein: bool,
    pub einstein_residual: f64,
    pub condition_number: f64,
    /// The verdict may be unreliable when set.
    pub ill_conditioned: bool,
}

impl Report for SolitonReport {
    fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "family {}, n = {}", self.family, self.dim);
        let _ = writeln!(out, "λ = {}, k = {}", self.lambda, self.k);
        if self.is_solvsoliton {
            let _ = writeln!(out, "solvsoliton: yes, Ric = cI + D with c = {}", self.c);
            out.push_str("D:\n");
            push_matrix(&mut out, &self.derivation);
        } else {
            out.push_str("solvsoliton: no\n");
        }
        let _ = writeln!(out, "residual {:.3e}", self.residual);
        let _ = writeln!(
            out,
            "einstein: {} (residual {:.3e})",
            if self.is_einstein { "yes" } else { "no" },
            self.einstein_residual
        );
        if self.ill_conditioned {
            let _ = writeln!(
                out,
                "warning: cond(G) = {:.3e}, the verdict may be unreliable",
                self.condition_number
            );
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignatureCount {
    pub signature: SignatureTriple,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub family: String,
    pub dim: usize,
    /// The two signatures the family admits, degenerate one first.
    pub expected: [SignatureTriple; 2],
    pub histogram: Vec<SignatureCount>,
    pub outside_expected: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub seed: u64,
    pub samples: usize,
    pub entries: Vec<SweepEntry>,
}

impl Report for SweepReport {
    fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} samples per entry, seed {}", self.samples, self.seed);
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{} n = {}: expected {} or {}",
                e.family, e.dim, e.expected[0], e.expected[1]
            );
            for h in &e.histogram {
                let _ = writeln!(out, "  (-, 0, +) = {}: {}", h.signature, h.count);
            }
            if e.outside_expected > 0 {
                let _ = writeln!(out, "  {} samples outside the expected pair", e.outside_expected);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report for VerifyReport {
    fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{} {}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        if failed == 0 {
            let _ = writeln!(out, "all {} checks pass", self.checks.len());
        } else {
            let _ = writeln!(out, "{failed} of {} checks fail", self.checks.len());
        }
        out
    }
}
