//! JSON problem files and solution files.
//!
//! Problem file:
//! ```json
//! {"n": 6, "k": 2, "conditions": [[3,6],[3,6],[3,6],[3,6]],
//!  "flags": {"type": "random-complex", "seed": 7}, "permutation": [1,2,3,4]}
//! ```
//! `flags` may also be `{"type": "explicit", "matrices": [...]}` with each
//! matrix either flat (`n²` entries `[re, im]`, row-major) or nested rows.
//! The optional permutation is 1-based and reorders conditions together with
//! their flags.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::certify::{Certificate, ALPHA_0};
use crate::combinat::SchubertProblem;
use crate::error::{Error, Result};
use crate::flags::Flag;
use crate::formulate::Formulation;
use crate::linalg::CMatrix;
use crate::rng::SeededRng;
use crate::solve::SolveOutcome;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum FlagSpec {
    RandomReal { seed: u64 },
    RandomComplex { seed: u64 },
    Explicit { matrices: Vec<MatrixJson> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixJson {
    Flat(Vec<[f64; 2]>),
    Nested(Vec<Vec<[f64; 2]>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub n: usize,
    pub k: usize,
    pub conditions: Vec<Vec<usize>>,
    pub flags: FlagSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Vec<usize>>,
}

/// A problem with one flag per condition.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub problem: SchubertProblem,
    pub flags: Vec<Flag>,
}

impl Instance {
    pub fn flags_are_real(&self) -> bool {
        self.flags.iter().all(Flag::is_real)
    }
}

/// Flag `i` is drawn from stream `i` of the seed.
pub fn generate_flags(n: usize, count: usize, seed: u64, real: bool) -> Result<Vec<Flag>> {
    (0..count)
        .map(|i| Flag::random(n, &mut SeededRng::with_stream(seed, i as u64), real))
        .collect()
}

fn matrix_from_json(m: &MatrixJson, n: usize) -> Result<CMatrix> {
    let c = |e: &[f64; 2]| Complex64::new(e[0], e[1]);
    match m {
        MatrixJson::Flat(entries) => {
            if entries.len() != n * n {
                return Err(Error::InvalidInput(format!(
                    "flag matrix has {} entries, expected {}",
                    entries.len(),
                    n * n
                )));
            }
            CMatrix::from_vec(n, n, entries.iter().map(c).collect())
        }
        MatrixJson::Nested(rows) => {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::InvalidInput(format!("flag matrix is not {n}×{n}")));
            }
            CMatrix::from_vec(n, n, rows.iter().flatten().map(c).collect())
        }
    }
}

impl ProblemFile {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("problem file: {e}")))
    }

    pub fn to_problem(&self) -> Result<SchubertProblem> {
        SchubertProblem::from_lists(self.n, self.k, &self.conditions)
    }

    pub fn to_instance(&self) -> Result<Instance> {
        let problem = self.to_problem()?;
        let flags = match &self.flags {
            FlagSpec::RandomReal { seed } => generate_flags(self.n, problem.len(), *seed, true)?,
            FlagSpec::RandomComplex { seed } => generate_flags(self.n, problem.len(), *seed, false)?,
            FlagSpec::Explicit { matrices } => {
                if matrices.len() != problem.len() {
                    return Err(Error::InvalidInput(format!(
                        "{} flag matrices for {} conditions",
                        matrices.len(),
                        problem.len()
                    )));
                }
                matrices
                    .iter()
                    .map(|m| Flag::new(matrix_from_json(m, self.n)?))
                    .collect::<Result<_>>()?
            }
        };
        match &self.permutation {
            None => Ok(Instance { problem, flags }),
            Some(perm) => {
                let order = perm
                    .iter()
                    .map(|&i| {
                        i.checked_sub(1)
                            .ok_or_else(|| Error::InvalidInput("permutation is 1-based".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let problem = problem.permuted(&order)?;
                let flags = order.iter().map(|&i| flags[i].clone()).collect();
                Ok(Instance { problem, flags })
            }
        }
    }
}

/// Parses a comma-separated list of 1-based indices and ranges (`1..6`,
/// `1-6`, `2,4`) into sorted 0-based indices.
pub fn parse_index_list(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidInput(format!("bad index list {s:?}"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (lo, hi) = match part.split_once("..").or_else(|| part.split_once('-')) {
            Some((a, b)) => (
                a.trim().parse::<usize>(),
                b.trim_start_matches('=').trim().parse::<usize>(),
            ),
            None => (part.parse(), part.parse()),
        };
        let (lo, hi) = (lo.map_err(|_| bad())?, hi.map_err(|_| bad())?);
        if lo == 0 || hi < lo {
            return Err(bad());
        }
        out.extend(lo - 1..hi);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

fn complex_pairs(x: &[Complex64]) -> Vec<[f64; 2]> {
    x.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionEntry {
    pub x: Vec<[f64; 2]>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub certified: bool,
    #[serde(default)]
    pub real: Option<bool>,
    #[serde(default)]
    pub cluster: Option<usize>,
}

impl SolutionEntry {
    pub fn from_certificate(c: &Certificate, real: Option<bool>, cluster: Option<usize>) -> Self {
        Self {
            x: complex_pairs(&c.x),
            alpha: finite(c.alpha),
            beta: finite(c.beta),
            gamma: finite(c.gamma),
            certified: c.certified,
            real,
            cluster,
        }
    }

    pub fn point(&self) -> Vec<Complex64> {
        self.x.iter().map(|e| Complex64::new(e[0], e[1])).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub formulation: String,
    /// 1-based hypersurface conditions of a hybrid formulation.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hypersurfaces: Vec<usize>,
    pub seed: u64,
    pub paths: usize,
    pub alpha0: f64,
    pub solutions: Vec<SolutionEntry>,
    pub n_distinct: usize,
}

impl SolutionFile {
    pub fn from_outcome(form: &Formulation, seed: u64, outcome: &SolveOutcome) -> Self {
        Self {
            formulation: form.mode.to_string(),
            hypersurfaces: form.hypersurfaces.iter().map(|i| i + 1).collect(),
            seed,
            paths: outcome.paths.len(),
            alpha0: ALPHA_0,
            solutions: outcome
                .solutions
                .iter()
                .map(|s| SolutionEntry::from_certificate(&s.certificate, s.real, s.cluster))
                .collect(),
            n_distinct: outcome.n_distinct,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("solution file: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX_SP: &str = r#"{"n":6,"k":2,"conditions":[[3,6],[3,6],[3,6],[3,6]],
        "flags":{"type":"random-complex","seed":7}}"#;

    #[test]
    fn parses_random_flags() {
        let inst = ProblemFile::from_json(EX_SP).unwrap().to_instance().unwrap();
        assert_eq!(inst.flags.len(), 4);
        assert!(!inst.flags_are_real());
        assert_ne!(inst.flags[0], inst.flags[1]);
        let again = ProblemFile::from_json(EX_SP).unwrap().to_instance().unwrap();
        assert_eq!(inst, again);
    }

    #[test]
    fn explicit_flags_flat_and_nested() {
        let id_flat: Vec<[f64; 2]> = (0..4)
            .map(|i| if i % 3 == 0 { [1.0, 0.0] } else { [0.0, 0.0] })
            .collect();
        let nested = vec![vec![[0.0, 0.0], [1.0, 0.0]], vec![[1.0, 0.0], [0.0, 0.0]]];
        let file = ProblemFile {
            n: 2,
            k: 1,
            conditions: vec![vec![1], vec![2]],
            flags: FlagSpec::Explicit {
                matrices: vec![MatrixJson::Flat(id_flat), MatrixJson::Nested(nested)],
            },
            permutation: Some(vec![2, 1]),
        };
        let json = serde_json::to_string(&file).unwrap();
        let inst = ProblemFile::from_json(&json).unwrap().to_instance().unwrap();
        assert!(inst.flags_are_real());
        assert_eq!(inst.flags[1].matrix(), &CMatrix::identity(2));
    }

    #[test]
    fn rejects_bad_files() {
        let bad = r#"{"n":6,"k":2,"conditions":[[3,6],[3,6],[3,6]],"flags":{"type":"random-real","seed":1}}"#;
        assert!(matches!(
            ProblemFile::from_json(bad).unwrap().to_problem(),
            Err(Error::NotASchubertProblem { sum: 6, expected: 8 })
        ));
        assert!(ProblemFile::from_json(r#"{"n":6}"#).is_err());
        let singular = r#"{"n":2,"k":1,"conditions":[[1],[1]],"flags":{"type":"explicit",
            "matrices":[[[1,0],[2,0],[2,0],[4,0]],[[1,0],[0,0],[0,0],[1,0]]]}}"#;
        assert!(ProblemFile::from_json(singular).unwrap().to_instance().is_err());
    }

    #[test]
    fn index_lists() {
        assert_eq!(parse_index_list("1..6").unwrap(), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(parse_index_list("1-3,5").unwrap(), vec![0, 1, 2, 4]);
        assert_eq!(parse_index_list("2,2").unwrap(), vec![1]);
        assert_eq!(parse_index_list("").unwrap(), Vec::<usize>::new());
        assert!(parse_index_list("0").is_err());
        assert!(parse_index_list("x").is_err());
    }

    #[test]
    fn non_finite_values_become_null() {
        let c = Certificate {
            x: vec![Complex64::new(1.0, 2.0)],
            alpha: f64::INFINITY,
            beta: f64::INFINITY,
            gamma: f64::INFINITY,
            certified: false,
        };
        let e = SolutionEntry::from_certificate(&c, None, None);
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(
            json,
            r#"{"x":[[1.0,2.0]],"alpha":null,"beta":null,"gamma":null,"certified":false,"real":null,"cluster":null}"#
        );
    }
}
