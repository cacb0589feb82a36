use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not a Schubert problem: Σ|β| = {sum} ≠ k(n−k) = {expected}")]
    NotASchubertProblem { sum: usize, expected: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("singular matrix (pivot {pivot})")]
    Singular { pivot: usize },

    #[error("singular Jacobian at Newton iterate {iterate}")]
    SingularJacobian { iterate: usize },

    #[error("flags not in general position: F_{index} ∩ F'_{complement} has dimension {dimension}")]
    GeneralPosition {
        index: usize,
        complement: usize,
        dimension: usize,
    },

    #[error("infeasible condition pair at positions ({first}, {second}){}", suggestion_text(.suggestion))]
    InfeasiblePair {
        first: usize,
        second: usize,
        /// 1-based permutation of the conditions that makes every pairing feasible.
        suggestion: Option<Vec<usize>>,
    },

    #[error("X_β E ∩ X_γ E' is empty for β = {beta}, γ = {gamma}")]
    EmptyIntersection { beta: String, gamma: String },

    #[error("system not square: {n_polys} equations in {n_vars} variables")]
    NotSquare { n_polys: usize, n_vars: usize },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("residual {residual:e} exceeds tolerance {tolerance:e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },

    #[error("system has non-real coefficients")]
    ComplexCoefficients,

    #[error("could not generate a nonsingular flag after {0} attempts")]
    FlagGeneration(usize),

    #[error("json: {0}")]
    Json(String),
}

fn suggestion_text(suggestion: &Option<Vec<usize>>) -> String {
    match suggestion {
        Some(p) => {
            let p: Vec<String> = p.iter().map(|i| i.to_string()).collect();
            format!("; reorder conditions as [{}]", p.join(","))
        }
        None => "; no reordering makes every pair feasible".to_string(),
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
