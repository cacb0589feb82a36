use std::fs;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use schubert_core::certify::{certify as certify_point, ALPHA_0};
use schubert_core::combinat::lr_number;
use schubert_core::formulate::{formulate as build, Formulation, FormulationMode};
use schubert_core::io::{parse_index_list, Instance, ProblemFile, SolutionFile};
use schubert_core::polysys::PolynomialSystem;
use schubert_core::solve::{solve_system, Execution, PathStatus, TrackerOptions};
use schubert_core::verify::{extract_planes, verify_instance, PlaneSolution};
use schubert_core::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("no certified solutions, expected {expected}")]
    NoCertified { expected: u64 },
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(
                Error::SingularJacobian { .. } | Error::ResidualTooLarge { .. } | Error::FlagGeneration(_),
            )
            | CliError::NoCertified { .. }
            | CliError::Verification(_) => 3,
            _ => 2,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, format!("{contents}\n")).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_instance(path: &Path) -> Result<Instance, CliError> {
    Ok(ProblemFile::from_json(&read(path)?)?.to_instance()?)
}

fn build_formulation(
    inst: &Instance,
    form: &str,
    hypersurfaces: Option<&str>,
) -> Result<Formulation, CliError> {
    let mode: FormulationMode = form.parse()?;
    let hyp = hypersurfaces.map(parse_index_list).transpose()?;
    if hyp.is_some() && mode != FormulationMode::Hybrid {
        return Err(CliError::Usage(
            "--hypersurfaces applies to --form hybrid only".into(),
        ));
    }
    Ok(build(&inst.problem, &inst.flags, mode, hyp.as_deref())?)
}

pub fn count(problem: &Path) -> Result<(), CliError> {
    let p = ProblemFile::from_json(&read(problem)?)?.to_problem()?;
    println!("{}", lr_number(&p)?);
    Ok(())
}

pub fn formulate(
    problem: &Path,
    form: &str,
    hypersurfaces: Option<&str>,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let inst = load_instance(problem)?;
    let f = build_formulation(&inst, form, hypersurfaces)?;
    if let Some(out) = output {
        write(out, &f.to_json()?)?;
    }
    println!("{}", f.system.shape());
    Ok(())
}

#[derive(Serialize)]
struct PathEntry {
    path_id: usize,
    status: PathStatus,
    t: f64,
    steps: usize,
    norm: f64,
}

fn planes_of(form: &Formulation, sols: &SolutionFile) -> Result<Vec<PlaneSolution>, CliError> {
    let mut seen = std::collections::BTreeSet::new();
    let mut planes = Vec::new();
    for s in &sols.solutions {
        if let Some(c) = s.cluster {
            if seen.insert(c) {
                let mut plane = extract_planes(form, &s.point())?;
                plane.cluster = Some(c);
                planes.push(plane);
            }
        }
    }
    Ok(planes)
}

pub fn solve(
    problem: &Path,
    form: &str,
    hypersurfaces: Option<&str>,
    seed: u64,
    output: Option<&Path>,
    paths_report: Option<&Path>,
    tol: f64,
) -> Result<(), CliError> {
    let inst = load_instance(problem)?;
    let f = build_formulation(&inst, form, hypersurfaces)?;
    let outcome = solve_system(&f.system, &TrackerOptions::with_seed(seed), Execution::Parallel)?;
    let sols = SolutionFile::from_outcome(&f, seed, &outcome);
    if let Some(out) = output {
        write(out, &sols.to_json()?)?;
    }
    if let Some(out) = paths_report {
        let entries: Vec<PathEntry> = outcome
            .paths
            .iter()
            .map(|p| PathEntry {
                path_id: p.path_id,
                status: p.status,
                t: p.t,
                steps: p.steps,
                norm: schubert_core::linalg::vec_norm(&p.x),
            })
            .collect();
        write(out, &serde_json::to_string_pretty(&entries).map_err(Error::from)?)?;
    }

    let planes = planes_of(&f, &sols)?;
    let report = verify_instance(&inst.problem, &inst.flags, &planes, tol)?;
    let (conv, div, fail) = outcome.status_counts();
    let real = match outcome.n_real() {
        Some(r) if inst.flags_are_real() => r.to_string(),
        _ => "n/a".to_string(),
    };
    println!("system: {} ({} form)", f.system.shape(), f.mode);
    println!(
        "paths: {} (converged {conv}, diverged {div}, failed {fail})",
        outcome.paths.len()
    );
    println!(
        "distinct certified: {} / expected: {}; real: {real}",
        outcome.n_distinct, report.expected
    );
    println!("membership: {}", if report.all_pass { "pass" } else { "FAIL" });
    if outcome.n_distinct == 0 && report.expected > 0 {
        return Err(CliError::NoCertified {
            expected: report.expected,
        });
    }
    Ok(())
}

#[derive(Serialize)]
struct CertificateEntry {
    x: Vec<[f64; 2]>,
    alpha: Option<f64>,
    beta: Option<f64>,
    gamma: Option<f64>,
    certified: bool,
}

#[derive(Serialize)]
struct CertificateReport {
    alpha0: f64,
    certificates: Vec<CertificateEntry>,
    n_certified: usize,
}

pub fn certify(system: &Path, solutions: &Path, output: Option<&Path>) -> Result<(), CliError> {
    let s = PolynomialSystem::from_json(&read(system)?)?;
    s.require_square()?;
    let sols = SolutionFile::from_json(&read(solutions)?)?;
    let finite = |v: f64| v.is_finite().then_some(v);
    let certificates = sols
        .solutions
        .iter()
        .map(|entry| {
            let c = certify_point(&s, &entry.point())?;
            Ok(CertificateEntry {
                x: entry.x.clone(),
                alpha: finite(c.alpha),
                beta: finite(c.beta),
                gamma: finite(c.gamma),
                certified: c.certified,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let report = CertificateReport {
        alpha0: ALPHA_0,
        n_certified: certificates.iter().filter(|c| c.certified).count(),
        certificates,
    };
    let json = serde_json::to_string_pretty(&report).map_err(Error::from)?;
    match output {
        Some(out) => {
            write(out, &json)?;
            println!(
                "certified: {} / {}",
                report.n_certified,
                report.certificates.len()
            );
        }
        None => println!("{json}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifyReport {
    #[serde(flatten)]
    instance: schubert_core::verify::InstanceReport,
    annihilation_residual: Vec<f64>,
    nullspace_angle: Vec<f64>,
}

pub fn verify(problem: &Path, solutions: &Path, tol: f64, json: Option<&Path>) -> Result<(), CliError> {
    let inst = load_instance(problem)?;
    let sols = SolutionFile::from_json(&read(solutions)?)?;
    let hyp: Vec<usize> = sols.hypersurfaces.iter().map(|i| i.saturating_sub(1)).collect();
    let mode: FormulationMode = sols.formulation.parse()?;
    let f = build(&inst.problem, &inst.flags, mode, Some(&hyp))?;
    let planes = planes_of(&f, &sols)?;
    let instance = verify_instance(&inst.problem, &inst.flags, &planes, tol)?;
    print!("{}", instance.render_table(&inst.problem));
    let report = VerifyReport {
        annihilation_residual: planes.iter().map(PlaneSolution::annihilation_residual).collect(),
        nullspace_angle: planes.iter().map(|p| p.nullspace_angle(tol)).collect(),
        instance,
    };
    let worst_ann = report.annihilation_residual.iter().copied().fold(0.0, f64::max);
    let worst_angle = report.nullspace_angle.iter().copied().fold(0.0, f64::max);
    println!("max |H·K|: {worst_ann:.3e}; max principal-angle sine: {worst_angle:.3e}");
    if let Some(out) = json {
        write(out, &serde_json::to_string_pretty(&report).map_err(Error::from)?)?;
    }
    if !report.instance.all_pass {
        return Err(CliError::Verification(
            "a plane fails a Schubert condition".into(),
        ));
    }
    if !report.instance.count_matches {
        return Err(CliError::Verification(format!(
            "{} planes, expected {}",
            report.instance.count, report.instance.expected
        )));
    }
    Ok(())
}
