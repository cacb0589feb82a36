//! Total-degree homotopy continuation, Newton refinement, and endpoint
//! post-processing (certification, clustering, realness).
//!
//! `H(x,t) = (1−t)·f(x) + t·γ·g(x)` with `gᵢ = xᵢ^{dᵢ} − 1`, tracked from
//! `t = 1` to `t = 0` by an Euler predictor and Newton corrector with
//! adaptive step size. Paths are independent; with the `parallel` feature
//! they run on the rayon pool, and results are always ordered by path id.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::certify::{certify, classify_real, distinct, Certificate};
use crate::error::{Error, Result};
use crate::linalg::{lu_decompose, vec_dist, vec_norm, CMatrix};
use crate::polysys::{Monomial, Polynomial, PolynomialSystem};
use crate::rng::SeededRng;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Endpoints with `t` at or below this may finish on step underflow.
pub const ENDGAME_T: f64 = 1e-6;
/// Residual bound (relative to `1 + ‖x‖`) for a converged endpoint.
pub const CONVERGED_RESIDUAL: f64 = 1e-8;
/// Provisional clustering radius, relative to `1 + ‖x‖`.
pub const CLUSTER_RTOL: f64 = 1e-6;
/// Certified points with `β` above this (relative) get extra Newton steps.
pub const POLISH_RTOL: f64 = 1e-12;
const POLISH_ITERATIONS: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct TrackerOptions {
    pub initial_step: f64,
    pub min_step: f64,
    /// Step floor after a path first underflows `min_step`; equal to
    /// `min_step` disables the rescue.
    pub rescue_min_step: f64,
    pub max_corrections: usize,
    pub correction_tol: f64,
    pub divergence_norm: f64,
    pub end_iterations: usize,
    pub seed: u64,
    /// Upper bound on `Π dᵢ`; larger systems are refused.
    pub max_paths: u64,
    pub max_steps: usize,
}

impl Default for TrackerOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.05,
            min_step: 1e-7,
            rescue_min_step: 1e-10,
            max_corrections: 3,
            correction_tol: 1e-10,
            divergence_norm: 1e8,
            end_iterations: 5,
            seed: 0,
            max_paths: 1 << 20,
            max_steps: 100_000,
        }
    }
}

impl TrackerOptions {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = [
            self.initial_step,
            self.min_step,
            self.rescue_min_step,
            self.correction_tol,
            self.divergence_norm,
        ];
        if positive.iter().any(|v| !(v.is_finite() && *v > 0.0))
            || self.min_step >= self.initial_step
            || self.rescue_min_step > self.min_step
            || self.max_corrections == 0
        {
            return Err(Error::InvalidInput(format!("bad tracker options {self:?}")));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathStatus {
    Converged,
    Diverged,
    Failed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RawSolution {
    pub x: Vec<Complex64>,
    pub status: PathStatus,
    pub path_id: usize,
    /// Homotopy parameter where tracking stopped.
    pub t: f64,
    pub steps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Rayon pool when the `parallel` feature is enabled, sequential otherwise.
    Parallel,
}

/// `x_{j+1} = x_j − Df(x_j)⁻¹ f(x_j)`, `iters` times, with `f` evaluated in
/// the accurate kernel.
pub fn newton_refine(s: &PolynomialSystem, x0: &[Complex64], iters: usize) -> Result<Vec<Complex64>> {
    s.require_square()?;
    let mut x = x0.to_vec();
    for iterate in 0..iters {
        let lu = lu_decompose(&s.jacobian(&x)?)?;
        if lu.singular_pivot().is_some() {
            return Err(Error::SingularJacobian { iterate });
        }
        let dx = lu.solve(&s.evaluate_accurate(&x)?)?;
        x.iter_mut().zip(&dx).for_each(|(xi, d)| *xi -= d);
    }
    Ok(x)
}

/// `gᵢ = xᵢ^{dᵢ} − 1` and its `Π dᵢ` roots.
pub fn start_system(s: &PolynomialSystem) -> Result<(PolynomialSystem, Vec<Vec<Complex64>>)> {
    s.require_square()?;
    let start = StartSystem::new(s.degrees())?;
    let polys = s
        .degrees()
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            Polynomial::from_terms(vec![
                Monomial {
                    coeff: -ONE,
                    exponents: vec![],
                },
                Monomial {
                    coeff: ONE,
                    exponents: vec![(i as u32, d as u32)],
                },
            ])
        })
        .collect();
    let labels = (0..s.n_vars()).map(|i| format!("start{i}")).collect();
    let g = PolynomialSystem::new(s.n_vars(), polys, labels)?;
    let points = (0..start.count).map(|id| start.point(id)).collect();
    Ok((g, points))
}

struct StartSystem {
    degrees: Vec<usize>,
    count: u64,
}

impl StartSystem {
    fn new(degrees: &[usize]) -> Result<Self> {
        if degrees.contains(&0) {
            return Err(Error::InvalidInput(
                "start system for a constant polynomial".into(),
            ));
        }
        let count = degrees
            .iter()
            .try_fold(1u64, |acc, &d| acc.checked_mul(d as u64))
            .ok_or(Error::Overflow("total degree"))?;
        Ok(Self {
            degrees: degrees.to_vec(),
            count,
        })
    }

    /// Mixed-radix decoding of `id`, first coordinate fastest.
    fn point(&self, mut id: u64) -> Vec<Complex64> {
        self.degrees
            .iter()
            .map(|&d| {
                let j = id % d as u64;
                id /= d as u64;
                Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / d as f64)
            })
            .collect()
    }

    fn eval(&self, x: &[Complex64]) -> Vec<Complex64> {
        x.iter()
            .zip(&self.degrees)
            .map(|(z, &d)| z.powu(d as u32) - ONE)
            .collect()
    }

    fn diag(&self, x: &[Complex64]) -> Vec<Complex64> {
        x.iter()
            .zip(&self.degrees)
            .map(|(z, &d)| z.powu(d as u32 - 1) * d as f64)
            .collect()
    }
}

struct Homotopy<'a> {
    f: &'a PolynomialSystem,
    g: StartSystem,
    gamma: Complex64,
}

impl Homotopy<'_> {
    fn value(&self, x: &[Complex64], t: f64) -> Vec<Complex64> {
        let fx = self.f.evaluate(x).expect("length checked");
        let gx = self.g.eval(x);
        let a = Complex64::new(1.0 - t, 0.0);
        let b = self.gamma * t;
        fx.iter().zip(&gx).map(|(f, g)| a * f + b * g).collect()
    }

    fn jacobian(&self, x: &[Complex64], t: f64) -> CMatrix {
        let mut jac = self.f.jacobian(x).expect("length checked");
        let a = Complex64::new(1.0 - t, 0.0);
        for i in 0..jac.rows() {
            jac.scale_row(i, a);
        }
        let b = self.gamma * t;
        for (i, d) in self.g.diag(x).into_iter().enumerate() {
            jac[(i, i)] += b * d;
        }
        jac
    }

    /// `∂H/∂t = γg − f`.
    fn dt(&self, x: &[Complex64]) -> Vec<Complex64> {
        let fx = self.f.evaluate(x).expect("length checked");
        let gx = self.g.eval(x);
        fx.iter().zip(&gx).map(|(f, g)| self.gamma * g - f).collect()
    }

    /// Newton at fixed `t`; `Some(x)` when the last correction is below
    /// tolerance and the corrections contract.
    fn correct(&self, mut x: Vec<Complex64>, t: f64, opts: &TrackerOptions) -> Option<Vec<Complex64>> {
        let mut last = f64::INFINITY;
        for _ in 0..opts.max_corrections {
            let lu = lu_decompose(&self.jacobian(&x, t)).ok()?;
            if lu.singular_pivot().is_some() {
                return None;
            }
            let dx = lu.solve(&self.value(&x, t)).ok()?;
            x.iter_mut().zip(&dx).for_each(|(xi, d)| *xi -= d);
            let size = vec_norm(&dx);
            if !size.is_finite() || size > 0.5 * last {
                return None;
            }
            if size <= opts.correction_tol * (1.0 + vec_norm(&x)) {
                return Some(x);
            }
            last = size;
        }
        None
    }

    fn track(&self, path_id: usize, opts: &TrackerOptions) -> RawSolution {
        let mut x = self.g.point(path_id as u64);
        let mut t = 1.0;
        let mut h = opts.initial_step;
        let mut floor = opts.min_step;
        let mut streak = 0;
        let mut steps = 0;
        let finish = |x: Vec<Complex64>, status, t, steps| RawSolution {
            x,
            status,
            path_id,
            t,
            steps,
        };
        while t > 0.0 {
            if steps >= opts.max_steps {
                return finish(x, PathStatus::Failed, t, steps);
            }
            if vec_norm(&x) > opts.divergence_norm {
                return finish(x, PathStatus::Diverged, t, steps);
            }
            steps += 1;
            let h_eff = h.min(t);
            let t_next = if h_eff >= t { 0.0 } else { t - h_eff };
            let accepted = lu_decompose(&self.jacobian(&x, t))
                .ok()
                .filter(|lu| lu.singular_pivot().is_none())
                .and_then(|lu| lu.solve(&self.dt(&x)).ok())
                .and_then(|v| {
                    let pred: Vec<Complex64> = x.iter().zip(&v).map(|(xi, vi)| xi + vi * h_eff).collect();
                    self.correct(pred, t_next, opts)
                });
            match accepted {
                Some(next) => {
                    x = next;
                    t = t_next;
                    streak += 1;
                    if streak >= 3 {
                        h = (2.0 * h).min(opts.initial_step);
                        streak = 0;
                    }
                }
                None => {
                    h *= 0.5;
                    streak = 0;
                    if h < floor {
                        if floor > opts.rescue_min_step {
                            floor = opts.rescue_min_step;
                            continue;
                        }
                        if t <= ENDGAME_T {
                            break;
                        }
                        let status = if vec_norm(&x) > opts.divergence_norm.sqrt() {
                            PathStatus::Diverged
                        } else {
                            PathStatus::Failed
                        };
                        return finish(x, status, t, steps);
                    }
                }
            }
        }
        self.finish_endpoint(x, t, steps, path_id, opts)
    }

    fn finish_endpoint(
        &self,
        x: Vec<Complex64>,
        t: f64,
        steps: usize,
        path_id: usize,
        opts: &TrackerOptions,
    ) -> RawSolution {
        let refined = newton_refine(self.f, &x, opts.end_iterations)
            .ok()
            .filter(|y| y.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        let status = match &refined {
            Some(y) if is_converged(self.f, y) => PathStatus::Converged,
            _ if vec_norm(&x) > opts.divergence_norm.sqrt() => PathStatus::Diverged,
            _ => PathStatus::Failed,
        };
        let x = match (status, refined) {
            (PathStatus::Converged, Some(y)) => y,
            _ => x,
        };
        RawSolution {
            x,
            status,
            path_id,
            t,
            steps,
        }
    }
}

fn is_converged(s: &PolynomialSystem, x: &[Complex64]) -> bool {
    s.evaluate_accurate(x)
        .map(|r| vec_norm(&r) < CONVERGED_RESIDUAL * (1.0 + vec_norm(x)))
        .unwrap_or(false)
}

/// The seeded homotopy constant `γ` on the unit circle.
pub fn gamma_constant(seed: u64) -> Complex64 {
    SeededRng::new(seed).unit_complex()
}

pub fn track_all(s: &PolynomialSystem, opts: &TrackerOptions) -> Result<Vec<RawSolution>> {
    track_all_with(s, opts, Execution::Parallel)
}

pub fn track_all_with(
    s: &PolynomialSystem,
    opts: &TrackerOptions,
    execution: Execution,
) -> Result<Vec<RawSolution>> {
    s.require_square()?;
    opts.validate()?;
    let total = s
        .degrees()
        .iter()
        .try_fold(1u128, |acc, &d| acc.checked_mul(d as u128));
    if total.is_none_or(|t| t > opts.max_paths as u128) {
        let shown = total.map_or_else(|| "beyond 2^128".to_string(), |t| t.to_string());
        return Err(Error::InvalidInput(format!(
            "total degree {shown} exceeds the path limit {}",
            opts.max_paths
        )));
    }
    let g = StartSystem::new(s.degrees())?;
    let count = g.count as usize;
    let homotopy = Homotopy {
        f: s,
        g,
        gamma: gamma_constant(opts.seed),
    };
    let mut out = run_paths(&homotopy, count, opts, execution);
    out.sort_by_key(|r| r.path_id);
    Ok(out)
}

#[cfg(feature = "parallel")]
fn run_paths(
    h: &Homotopy<'_>,
    count: usize,
    opts: &TrackerOptions,
    execution: Execution,
) -> Vec<RawSolution> {
    use rayon::prelude::*;
    match execution {
        Execution::Parallel => (0..count).into_par_iter().map(|id| h.track(id, opts)).collect(),
        Execution::Sequential => (0..count).map(|id| h.track(id, opts)).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_paths(
    h: &Homotopy<'_>,
    count: usize,
    opts: &TrackerOptions,
    _execution: Execution,
) -> Vec<RawSolution> {
    (0..count).map(|id| h.track(id, opts)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Clusters {
    /// Cluster id per input point; `None` for uncertified points.
    pub assignment: Vec<Option<usize>>,
    /// Index of the representative of each cluster.
    pub representatives: Vec<usize>,
}

impl Clusters {
    pub fn count(&self) -> usize {
        self.representatives.len()
    }
}

/// Groups certified points: provisionally by distance `CLUSTER_RTOL`, then
/// merges any two groups whose representatives are not certified distinct.
pub fn deduplicate(certs: &[Certificate]) -> Result<Clusters> {
    let mut assignment = vec![None; certs.len()];
    let mut representatives: Vec<usize> = Vec::new();
    for (i, c) in certs.iter().enumerate() {
        if !c.certified {
            continue;
        }
        let radius = CLUSTER_RTOL * (1.0 + vec_norm(&c.x));
        let mut home = None;
        for (id, &r) in representatives.iter().enumerate() {
            if vec_dist(&certs[r].x, &c.x) <= radius || !distinct(&certs[r], c)? {
                home = Some(id);
                break;
            }
        }
        assignment[i] = Some(match home {
            Some(id) => id,
            None => {
                representatives.push(i);
                representatives.len() - 1
            }
        });
    }
    Ok(Clusters {
        assignment,
        representatives,
    })
}

/// One converged endpoint after refinement and certification.
#[derive(Clone, Debug, PartialEq)]
pub struct SolvedPoint {
    pub path_id: usize,
    pub certificate: Certificate,
    pub real: Option<bool>,
    pub cluster: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOutcome {
    pub paths: Vec<RawSolution>,
    /// Canonically ordered: by cluster representative, then by point, each
    /// compared lexicographically on coordinates rounded to 1e−9.
    pub solutions: Vec<SolvedPoint>,
    pub n_distinct: usize,
}

impl SolveOutcome {
    pub fn status_counts(&self) -> (usize, usize, usize) {
        let count = |s| self.paths.iter().filter(|p| p.status == s).count();
        (
            count(PathStatus::Converged),
            count(PathStatus::Diverged),
            count(PathStatus::Failed),
        )
    }

    pub fn n_real(&self) -> Option<usize> {
        let reps: Vec<&SolvedPoint> = self.representatives().collect();
        reps.iter()
            .map(|p| p.real)
            .collect::<Option<Vec<bool>>>()
            .map(|v| v.into_iter().filter(|&r| r).count())
    }

    /// The first point of each cluster, in cluster order.
    pub fn representatives(&self) -> impl Iterator<Item = &SolvedPoint> {
        let mut seen = vec![false; self.n_distinct];
        self.solutions.iter().filter(move |p| match p.cluster {
            Some(c) if !seen[c] => {
                seen[c] = true;
                true
            }
            _ => false,
        })
    }
}

/// Sort key: coordinates as integers in units of 1e−9.
pub fn rounded_key(x: &[Complex64]) -> Vec<(i64, i64)> {
    let r = |v: f64| (v * 1e9).round() as i64;
    x.iter().map(|z| (r(z.re), r(z.im))).collect()
}

/// A certified point converges quadratically, so a few more Newton steps
/// bring a coarse endpoint to full precision. Keeps `cert` unless the
/// refined point is certified with no larger `β`.
fn polish(s: &PolynomialSystem, cert: Certificate) -> Result<Certificate> {
    if !cert.certified || cert.beta <= POLISH_RTOL * (1.0 + vec_norm(&cert.x)) {
        return Ok(cert);
    }
    let Ok(x) = newton_refine(s, &cert.x, POLISH_ITERATIONS) else {
        return Ok(cert);
    };
    let refined = certify(s, &x)?;
    Ok(if refined.certified && refined.beta <= cert.beta {
        refined
    } else {
        cert
    })
}

/// Track, refine, certify, cluster, and (for real systems) classify realness.
pub fn solve_system(
    s: &PolynomialSystem,
    opts: &TrackerOptions,
    execution: Execution,
) -> Result<SolveOutcome> {
    let paths = track_all_with(s, opts, execution)?;
    let converged: Vec<&RawSolution> = paths
        .iter()
        .filter(|p| p.status == PathStatus::Converged)
        .collect();
    let certs: Vec<Certificate> = converged
        .iter()
        .map(|p| certify(s, &p.x).and_then(|c| polish(s, c)))
        .collect::<Result<_>>()?;
    let clusters = deduplicate(&certs)?;
    let real_system = s.has_real_coefficients();

    let rep_keys: Vec<Vec<(i64, i64)>> = clusters
        .representatives
        .iter()
        .map(|&i| rounded_key(&certs[i].x))
        .collect();
    let mut order: Vec<usize> = (0..clusters.count()).collect();
    order.sort_by(|&a, &b| rep_keys[a].cmp(&rep_keys[b]));
    let mut relabel = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        relabel[old] = new;
    }

    let mut solutions: Vec<SolvedPoint> = converged
        .iter()
        .zip(certs)
        .zip(&clusters.assignment)
        .map(|((p, cert), cluster)| {
            let real = if real_system && cert.certified {
                Some(classify_real(s, &cert)?)
            } else {
                None
            };
            Ok(SolvedPoint {
                path_id: p.path_id,
                certificate: cert,
                real,
                cluster: cluster.map(|c| relabel[c]),
            })
        })
        .collect::<Result<_>>()?;
    solutions.sort_by(|a, b| {
        let ca = a.cluster.unwrap_or(usize::MAX);
        let cb = b.cluster.unwrap_or(usize::MAX);
        ca.cmp(&cb)
            .then_with(|| rounded_key(&a.certificate.x).cmp(&rounded_key(&b.certificate.x)))
            .then_with(|| a.path_id.cmp(&b.path_id))
    });
    Ok(SolveOutcome {
        paths,
        solutions,
        n_distinct: clusters.count(),
    })
}
