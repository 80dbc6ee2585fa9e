//! Reproducible random metrics.
//!
//! The generator is xorshift64* seeded through one round of splitmix64, so
//! every platform produces the same stream for a given seed:
//!
//! ```text
//! seed:  z = seed + 0x9E3779B97F4A7C15
//!        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!        state = z ^ (z >> 31)            (0 is replaced by 0x9E3779B97F4A7C15)
//! step:  x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27
//!        output = x * 0x2545F4914F6CDD1D  (wrapping)
//! f64:   (output >> 11) * 2⁻⁵³  in [0, 1)
//! ```

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::metric::GramMatrix;
use crate::reduction::representative;

#[derive(Clone, Debug)]
pub struct XorShift64Star {
    state: u64,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

impl XorShift64Star {
    pub fn new(seed: u64) -> Self {
        let mut z = seed.wrapping_add(GOLDEN);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        Self {
            state: if z == 0 { GOLDEN } else { z },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// Parameters for [`sample_metric`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomMetricSpec {
    pub seed: u64,
    /// Samples with a larger 2-norm condition number are redrawn.
    pub condition_cap: f64,
}

impl RandomMetricSpec {
    pub const DEFAULT_CAP: f64 = 1e7;

    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            condition_cap: Self::DEFAULT_CAP,
        }
    }
}

const MAX_DRAWS: usize = 64;

/// `G = AᵀA + εI` with `A` uniform in `[−1, 1)ⁿˣⁿ` and `ε = 10⁻⁶‖AᵀA‖_F`,
/// so `cond(G) ≤ 10⁶ + 1`. Deterministic for a fixed seed.
pub fn sample_metric(spec: &RandomMetricSpec, n: usize) -> Result<GramMatrix> {
    if n < 2 {
        return Err(Error::Dimension { dim: n, min: 2 });
    }
    if !(spec.condition_cap > 1.0) {
        return Err(Error::InvalidParameter("condition cap must exceed 1"));
    }
    let mut rng = XorShift64Star::new(spec.seed);
    for _ in 0..MAX_DRAWS {
        let a = Matrix::from_fn(n, n, |_, _| rng.uniform(-1.0, 1.0));
        let ata = &a.transpose() * &a;
        let eps = 1e-6 * ata.frobenius_norm();
        if eps == 0.0 {
            continue;
        }
        let g = ata.add(&Matrix::identity(n).scaled(eps)).symmetrized();
        let gram = match GramMatrix::new(g) {
            Ok(g) => g,
            Err(Error::NotPositiveDefinite) => continue,
            Err(e) => return Err(e),
        };
        if gram.condition_number()? < spec.condition_cap {
            return Ok(gram);
        }
    }
    Err(Error::NoConvergence("random metric sampler"))
}

/// Haar-like random orthogonal matrix (QR of a uniform matrix).
pub fn random_orthogonal(rng: &mut XorShift64Star, n: usize) -> Result<Matrix> {
    let a = Matrix::from_fn(n, n, |_, _| rng.uniform(-1.0, 1.0));
    Ok(linalg::qr(&a)?.0)
}

/// Random element of the identity component of `ℝ^×Aut(g)` for the two
/// families: positive `(1,1)` and `(2,2)` entries, free first column below the
/// diagonal, and a `(n−2)`-block `B` with `det B > 0`.
pub fn random_automorphism(rng: &mut XorShift64Star, n: usize) -> Result<Matrix> {
    if n < 3 {
        return Err(Error::Dimension { dim: n, min: 3 });
    }
    let mut m = Matrix::zeros(n, n);
    m[(0, 0)] = rng.uniform(0.5, 2.0);
    m[(1, 1)] = rng.uniform(0.5, 2.0);
    for i in 1..n {
        m[(i, 0)] = rng.uniform(-1.0, 1.0);
    }
    let mut b = Matrix::from_fn(n - 2, n - 2, |i, j| {
        let d = if i == j { 1.5 } else { 0.0 };
        d + rng.uniform(-0.5, 0.5)
    });
    if b.determinant()? < 0.0 {
        for i in 0..n - 2 {
            b[(i, 0)] = -b[(i, 0)];
        }
    }
    m.set_block(2, 2, &b);
    Ok(m)
}

/// The metric `(φ g_λ q).⟨·,·⟩₀` for a random automorphism `φ` and random
/// orthogonal `q`: a metric whose reduction must give `λ` back.
pub fn metric_in_orbit(rng: &mut XorShift64Star, n: usize, lambda: f64) -> Result<GramMatrix> {
    let phi = random_automorphism(rng, n)?;
    let q = random_orthogonal(rng, n)?;
    let g = &(&phi * &representative(n, lambda)) * &q;
    GramMatrix::from_group_element(&g)
}
