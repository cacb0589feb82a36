//! Smale α-theory certificates for approximate zeros of square systems.
//!
//! `β = ‖Df(x)⁻¹f(x)‖₂`, `γ` is bounded above by
//! `max_m ‖Df(x)⁻¹ Dᵐf(x)/m!‖_F^{1/(m−1)}` (Frobenius norm of the unfolded
//! m-linear map), and `α = β·γ`. A point is certified when `α < α₀`.
//!
//! All arithmetic is double precision except the residual `f(x)`, which goes
//! through [`crate::arith`]. The certificate is therefore numerical, not
//! rigorous; an interval backend would slot in at `evaluate_accurate`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{lu_decompose, vec_dist, vec_norm, CMatrix};
use crate::polysys::PolynomialSystem;

/// `(13 − 3√17)/4`.
pub const ALPHA_0: f64 = 0.157_670_780_786_754_5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub x: Vec<Complex64>,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub certified: bool,
}

impl Certificate {
    fn uncertifiable(x: &[Complex64]) -> Self {
        Self {
            x: x.to_vec(),
            alpha: f64::INFINITY,
            beta: f64::INFINITY,
            gamma: f64::INFINITY,
            certified: false,
        }
    }
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

/// `m! / Π mult!` for a sorted multiset: the number of orderings.
fn orderings(key: &[u32]) -> f64 {
    let mut weight = factorial(key.len());
    let mut run = 1;
    for w in key.windows(2) {
        if w[0] == w[1] {
            run += 1;
            weight /= run as f64;
        } else {
            run = 1;
        }
    }
    weight
}

/// `‖A·Dᵐf(x)/m!‖_F` where `A = Df(x)⁻¹`.
fn scaled_tensor_norm(s: &PolynomialSystem, a: &CMatrix, order: usize, x: &[Complex64]) -> Result<f64> {
    let n = s.n_vars();
    let mut columns: BTreeMap<Vec<u32>, Vec<Complex64>> = BTreeMap::new();
    for i in 0..s.n_polys() {
        if s.degrees()[i] < order {
            continue;
        }
        for (key, val) in s.derivative_tensor(i, order, x)? {
            let col = columns
                .entry(key)
                .or_insert_with(|| vec![Complex64::new(0.0, 0.0); n]);
            for (r, c) in col.iter_mut().enumerate() {
                *c += a[(r, i)] * val;
            }
        }
    }
    let scale = factorial(order);
    let sum: f64 = columns
        .iter()
        .map(|(key, col)| orderings(key) * col.iter().map(|z| z.norm_sqr()).sum::<f64>())
        .sum();
    Ok(sum.sqrt() / scale)
}

/// `(α, β, γ)` at `x`, or `None` when `Df(x)` is singular.
pub fn alpha_beta_gamma(s: &PolynomialSystem, x: &[Complex64]) -> Result<Option<(f64, f64, f64)>> {
    s.require_square()?;
    let jac = s.jacobian(x)?;
    let lu = lu_decompose(&jac)?;
    if lu.singular_pivot().is_some() {
        return Ok(None);
    }
    let fx = s.evaluate_accurate(x)?;
    let step = lu.solve(&fx)?;
    let beta = vec_norm(&step);
    let a = lu.inverse()?;
    let mut gamma: f64 = 0.0;
    for m in 2..=s.max_degree() {
        let norm = scaled_tensor_norm(s, &a, m, x)?;
        gamma = gamma.max(norm.powf(1.0 / (m - 1) as f64));
    }
    if !(beta.is_finite() && gamma.is_finite()) {
        return Ok(None);
    }
    Ok(Some((beta * gamma, beta, gamma)))
}

/// Certificate for `x`; errors only when `s` is not square or `x` has the
/// wrong length.
pub fn certify(s: &PolynomialSystem, x: &[Complex64]) -> Result<Certificate> {
    Ok(match alpha_beta_gamma(s, x)? {
        Some((alpha, beta, gamma)) => Certificate {
            x: x.to_vec(),
            alpha,
            beta,
            gamma,
            certified: alpha < ALPHA_0,
        },
        None => Certificate::uncertifiable(x),
    })
}

/// True when both points are certified and `‖x₁−x₂‖ > 2(β₁+β₂)`, so their
/// associated roots differ.
pub fn distinct(c1: &Certificate, c2: &Certificate) -> Result<bool> {
    if c1.x.len() != c2.x.len() {
        return Err(Error::Shape(format!(
            "certificates for {} and {} variables",
            c1.x.len(),
            c2.x.len()
        )));
    }
    if !(c1.certified && c2.certified) {
        return Ok(false);
    }
    Ok(vec_dist(&c1.x, &c2.x) > 2.0 * (c1.beta + c2.beta))
}

/// For a real system: the root of a certified point is real exactly when the
/// point and its conjugate are not certified distinct.
pub fn classify_real(s: &PolynomialSystem, cert: &Certificate) -> Result<bool> {
    if !s.has_real_coefficients() {
        return Err(Error::ComplexCoefficients);
    }
    if !cert.certified {
        return Err(Error::InvalidInput("realness needs a certified point".into()));
    }
    let conj = Certificate {
        x: cert.x.iter().map(|z| z.conj()).collect(),
        ..cert.clone()
    };
    Ok(!distinct(cert, &conj)?)
}
