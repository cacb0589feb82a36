//! Back-verification of solutions as points of the Grassmannian.
//!
//! A solution of a formulation determines the primal plane `H` (row space of
//! the primal chart) and one `n × (n−k)` dual matrix per dual chart, whose
//! columns should span the annihilator of `H`.

use num_complex::Complex64;
use serde::Serialize;

use crate::combinat::{lr_number, SchubertCondition, SchubertProblem};
use crate::error::{Error, Result};
use crate::flags::{dual_flag, Flag};
use crate::formulate::Formulation;
use crate::linalg::{
    nullspace, numeric_rank, orthonormal_rows, principal_angle_sine_bound, vec_norm, CMatrix,
};
use crate::solve::CONVERGED_RESIDUAL;

/// Default relative tolerance for membership rank tests.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct PlaneSolution {
    /// `k × n`; row space is the solution plane.
    pub h: CMatrix,
    /// `n × (n−k)` per dual chart.
    pub duals: Vec<CMatrix>,
    pub cluster: Option<usize>,
}

impl PlaneSolution {
    /// Largest `‖H·Kᵢ‖_F / (‖H‖_F‖Kᵢ‖_F)`.
    pub fn annihilation_residual(&self) -> f64 {
        self.duals
            .iter()
            .map(|k| {
                let prod = self.h.matmul(k).expect("chart shapes agree");
                prod.frobenius_norm() / (self.h.frobenius_norm() * k.frobenius_norm())
            })
            .fold(0.0, f64::max)
    }

    /// Largest principal-angle sine bound between the column span of a dual
    /// block and the numerical nullspace of `H`.
    pub fn nullspace_angle(&self, tol: f64) -> f64 {
        let kernel = nullspace(&self.h, tol).transpose();
        self.duals
            .iter()
            .map(|k| principal_angle_sine_bound(&k.transpose(), &kernel, tol))
            .fold(0.0, f64::max)
    }
}

/// Evaluates each chart block of `form` at `x`.
pub fn extract_planes(form: &Formulation, x: &[Complex64]) -> Result<PlaneSolution> {
    let residual = vec_norm(&form.system.evaluate_accurate(x)?);
    let tolerance = CONVERGED_RESIDUAL * (1.0 + vec_norm(x));
    if residual.is_nan() || residual > tolerance {
        return Err(Error::ResidualTooLarge { residual, tolerance });
    }
    Ok(PlaneSolution {
        h: form.primal().chart.evaluate(x)?,
        duals: form.duals().map(|b| b.chart.evaluate(x)).collect::<Result<_>>()?,
        cluster: None,
    })
}

/// `rank [H; F_{βᵢ}] ≤ βᵢ + k − i` for all `i`, on orthonormalized rows.
pub fn check_membership(h: &CMatrix, c: &SchubertCondition, f: &Flag, tol: f64) -> Result<bool> {
    let (n, k) = (c.n(), c.k());
    if h.rows() != k || h.cols() != n || f.n() != n {
        return Err(Error::Shape(format!(
            "{}×{} plane for a condition on Gr({k},{n})",
            h.rows(),
            h.cols()
        )));
    }
    let q = orthonormal_rows(h, tol);
    if q.rows() != k || numeric_rank(&q, tol) != k {
        return Err(Error::InvalidInput(format!("plane has numerical rank below {k}")));
    }
    for (idx, &b) in c.beta().iter().enumerate() {
        let bound = b + k - (idx + 1);
        if bound >= n.min(k + b) {
            continue;
        }
        let fb = orthonormal_rows(&f.subspace(b), tol);
        if numeric_rank(&q.vstack(&fb)?, tol) > bound {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership of `H^⊥` (computed numerically) in `X_{β^⊥} F^⊥`.
pub fn check_dual_membership(h: &CMatrix, c: &SchubertCondition, f: &Flag, tol: f64) -> Result<bool> {
    let kernel = nullspace(h, tol).transpose();
    check_membership(&kernel, &c.dual(), &dual_flag(f)?, tol)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceReport {
    /// `table[plane][condition]`.
    pub table: Vec<Vec<bool>>,
    pub all_pass: bool,
    pub count: usize,
    pub expected: u64,
    pub count_matches: bool,
}

impl InstanceReport {
    /// Rows are planes, columns conditions; `✓` for membership.
    pub fn render_table(&self, p: &SchubertProblem) -> String {
        let mut out = String::from("plane");
        for c in p.conditions() {
            out.push_str(&format!("\t{c}"));
        }
        out.push('\n');
        for (i, row) in self.table.iter().enumerate() {
            out.push_str(&(i + 1).to_string());
            for &ok in row {
                out.push_str(if ok { "\tok" } else { "\tFAIL" });
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "planes: {} / expected: {}; membership {}\n",
            self.count,
            self.expected,
            if self.all_pass { "pass" } else { "FAIL" }
        ));
        out
    }
}

pub fn verify_instance(
    p: &SchubertProblem,
    flags: &[Flag],
    planes: &[PlaneSolution],
    tol: f64,
) -> Result<InstanceReport> {
    if flags.len() != p.len() {
        return Err(Error::InvalidInput(format!(
            "{} flags for {} conditions",
            flags.len(),
            p.len()
        )));
    }
    let table: Vec<Vec<bool>> = planes
        .iter()
        .map(|plane| {
            p.conditions()
                .iter()
                .zip(flags)
                .map(|(c, f)| check_membership(&plane.h, c, f, tol).unwrap_or(false))
                .collect()
        })
        .collect();
    let expected = lr_number(p)?;
    let all_pass = table.iter().all(|row| row.iter().all(|&ok| ok));
    Ok(InstanceReport {
        count: planes.len(),
        count_matches: planes.len() as u64 == expected,
        expected,
        all_pass,
        table,
    })
}
