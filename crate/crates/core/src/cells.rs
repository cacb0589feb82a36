//! Local coordinates on Schubert cells.
//!
//! A [`PatternMatrix`] is the `k × n` shape of `M_β` or `M_β^γ`: fixed zeros,
//! fixed ones, and free entries numbered in row-major order. Multiplying a
//! pattern by a basis matrix (a flag, or the transform `g` of two flags)
//! yields an [`AffineMatrix`] whose entries are affine-linear in the free
//! variables.

use num_complex::Complex64;

use crate::combinat::{feasible_pair, SchubertCondition};
use crate::error::{Error, Result};
use crate::flags::{dual_flag, general_position_transform, Flag};
use crate::linalg::CMatrix;
use crate::polysys::Polynomial;
use crate::rng::SeededRng;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cell {
    Zero,
    One,
    Var(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<Cell>,
    n_vars: usize,
}

impl PatternMatrix {
    fn from_rule(rows: usize, cols: usize, rule: impl Fn(usize, usize) -> Cell) -> Self {
        let mut cells = Vec::with_capacity(rows * cols);
        let mut next = 0u32;
        for i in 0..rows {
            for j in 0..cols {
                let cell = match rule(i, j) {
                    Cell::Var(_) => {
                        next += 1;
                        Cell::Var(next - 1)
                    }
                    other => other,
                };
                cells.push(cell);
            }
        }
        Self {
            rows,
            cols,
            cells,
            n_vars: next as usize,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// 0-based `(row, col)`.
    pub fn cell(&self, i: usize, j: usize) -> Cell {
        self.cells[i * self.cols + j]
    }

    /// Free positions in variable order, 1-based as in matrix notation.
    pub fn free_positions(&self) -> Vec<(usize, usize)> {
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| matches!(self.cell(i, j), Cell::Var(_)))
            .map(|(i, j)| (i + 1, j + 1))
            .collect()
    }

    /// 1-based positions of the fixed ones.
    pub fn one_positions(&self) -> Vec<(usize, usize)> {
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| self.cell(i, j) == Cell::One)
            .map(|(i, j)| (i + 1, j + 1))
            .collect()
    }

    /// The numeric matrix with variable `v` replaced by `values[v]`.
    pub fn with_values(&self, values: &[Complex64]) -> Result<CMatrix> {
        if values.len() != self.n_vars {
            return Err(Error::Shape(format!(
                "{} values for {} chart variables",
                values.len(),
                self.n_vars
            )));
        }
        let data = self
            .cells
            .iter()
            .map(|c| match *c {
                Cell::Zero => ZERO,
                Cell::One => ONE,
                Cell::Var(v) => values[v as usize],
            })
            .collect();
        CMatrix::from_vec(self.rows, self.cols, data)
    }
}

/// `M_β`: `m_{i,βⱼ} = δᵢⱼ`, `m_{i,j} = 0` for `j > βᵢ`, free otherwise.
pub fn pattern_single(c: &SchubertCondition) -> PatternMatrix {
    let beta = c.beta();
    PatternMatrix::from_rule(c.k(), c.n(), |i, j| {
        let col = j + 1;
        if let Some(owner) = beta.iter().position(|&b| b == col) {
            if owner == i {
                Cell::One
            } else {
                Cell::Zero
            }
        } else if col > beta[i] {
            Cell::Zero
        } else {
            Cell::Var(0)
        }
    })
}

/// `M_β^γ`: row `i` supported on `[n+1−γ_{k+1−i}, βᵢ]` with a one at `βᵢ`.
pub fn pattern_pair(b: &SchubertCondition, g: &SchubertCondition) -> Result<PatternMatrix> {
    if (b.n(), b.k()) != (g.n(), g.k()) {
        return Err(Error::InvalidInput(format!(
            "conditions {b} and {g} live on different Grassmannians"
        )));
    }
    if !feasible_pair(b, g) {
        return Err(Error::EmptyIntersection {
            beta: b.to_string(),
            gamma: g.to_string(),
        });
    }
    let (n, k) = (b.n(), b.k());
    let beta = b.beta();
    let gamma = g.beta();
    Ok(PatternMatrix::from_rule(k, n, |i, j| {
        let col = j + 1;
        let lo = n + 1 - gamma[k - 1 - i];
        if col == beta[i] {
            Cell::One
        } else if col < lo || col > beta[i] {
            Cell::Zero
        } else {
            Cell::Var(0)
        }
    }))
}

/// `c₀ + Σ c_v x_v` with variables sorted by id.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct AffineExpr {
    pub constant: Complex64,
    pub linear: Vec<(u32, Complex64)>,
}

impl AffineExpr {
    pub fn evaluate(&self, x: &[Complex64]) -> Complex64 {
        self.linear
            .iter()
            .fold(self.constant, |acc, &(v, c)| acc + c * x[v as usize])
    }

    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::affine(self.constant, &self.linear)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AffineMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<AffineExpr>,
}

impl AffineMatrix {
    pub fn constant(m: &CMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: m
                .as_slice()
                .iter()
                .map(|&c| AffineExpr {
                    constant: c,
                    linear: Vec::new(),
                })
                .collect(),
        }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<AffineExpr>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}×{cols} affine matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &AffineExpr {
        &self.entries[i * self.cols + j]
    }

    pub fn transpose(&self) -> AffineMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.entry(i, j).clone());
            }
        }
        AffineMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Sorted, deduplicated variable ids referenced by any entry.
    pub fn variables(&self) -> Vec<u32> {
        let mut vars: Vec<u32> = self
            .entries
            .iter()
            .flat_map(|e| e.linear.iter().map(|&(v, _)| v))
            .collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    pub fn evaluate(&self, x: &[Complex64]) -> Result<CMatrix> {
        if let Some(&v) = self.variables().last() {
            if v as usize >= x.len() {
                return Err(Error::Shape(format!(
                    "chart references x{v} but the point has {} coordinates",
                    x.len()
                )));
            }
        }
        CMatrix::from_vec(
            self.rows,
            self.cols,
            self.entries.iter().map(|e| e.evaluate(x)).collect(),
        )
    }
}

/// `pattern · basis` with variable `v` renamed to `v + var_offset`.
pub fn instantiate_pattern(p: &PatternMatrix, basis: &CMatrix, var_offset: usize) -> Result<AffineMatrix> {
    if basis.rows() != p.cols() {
        return Err(Error::Shape(format!(
            "pattern with {} columns against a {}×{} basis",
            p.cols(),
            basis.rows(),
            basis.cols()
        )));
    }
    let n = basis.cols();
    let mut entries = Vec::with_capacity(p.rows() * n);
    for i in 0..p.rows() {
        for j in 0..n {
            let mut e = AffineExpr::default();
            for c in 0..p.cols() {
                let b = basis[(c, j)];
                match p.cell(i, c) {
                    Cell::Zero => {}
                    Cell::One => e.constant += b,
                    Cell::Var(v) => {
                        if b != ZERO {
                            e.linear.push((v + var_offset as u32, b));
                        }
                    }
                }
            }
            entries.push(e);
        }
    }
    Ok(AffineMatrix {
        rows: p.rows(),
        cols: n,
        entries,
    })
}

/// `M·F` for a chart pattern and a flag: parametrizes an open subset of the
/// Schubert variety of the pattern's condition relative to `f`.
pub fn instantiate_primal(p: &PatternMatrix, f: &Flag, var_offset: usize) -> Result<AffineMatrix> {
    instantiate_pattern(p, f.matrix(), var_offset)
}

/// The `n × (n−k)` dual chart: `(M_{β^⊥} · F^⊥)ᵀ`, whose column space runs
/// over an open subset of the annihilators of `X_β F`.
pub fn instantiate_dual(c: &SchubertCondition, f: &Flag, var_offset: usize) -> Result<AffineMatrix> {
    let pattern = pattern_single(&c.dual());
    Ok(instantiate_pattern(&pattern, dual_flag(f)?.matrix(), var_offset)?.transpose())
}

/// The `n × (n−k)` dual pair chart: `(M_{β^⊥}^{γ^⊥} · g)ᵀ` where `g` moves the
/// coordinate flags to `(F_β^⊥, F_γ^⊥)`.
pub fn instantiate_dual_pair(
    b: &SchubertCondition,
    g: &SchubertCondition,
    fb: &Flag,
    fg: &Flag,
    var_offset: usize,
) -> Result<AffineMatrix> {
    let pattern = pattern_pair(&b.dual(), &g.dual())?;
    let transform = general_position_transform(&dual_flag(fb)?, &dual_flag(fg)?)?;
    Ok(instantiate_pattern(&pattern, &transform, var_offset)?.transpose())
}

/// The primal pair chart `M_β^γ · g` with `g` moving `(E, E')` to `(fb, fg)`.
pub fn instantiate_primal_pair(
    b: &SchubertCondition,
    g: &SchubertCondition,
    fb: &Flag,
    fg: &Flag,
    var_offset: usize,
) -> Result<AffineMatrix> {
    let pattern = pattern_pair(b, g)?;
    let transform = general_position_transform(fb, fg)?;
    instantiate_pattern(&pattern, &transform, var_offset)
}

/// The pattern with its free entries drawn uniformly from the unit square.
pub fn sample_cell_point(p: &PatternMatrix, rng: &mut SeededRng) -> CMatrix {
    let values: Vec<Complex64> = (0..p.n_vars()).map(|_| rng.complex_square()).collect();
    p.with_values(&values).expect("value count matches pattern")
}
