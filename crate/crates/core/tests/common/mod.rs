#![allow(dead_code)]

use num_complex::Complex64;
use schubert_core::cells::{pattern_pair, pattern_single, Cell, PatternMatrix};
use schubert_core::combinat::{SchubertCondition, SchubertProblem};
use schubert_core::flags::{dual_flag, general_position_transform, Flag};
use schubert_core::formulate::{ChartRole, Formulation};
use schubert_core::linalg::{lu_decompose, nullspace, CMatrix};
use schubert_core::polysys::PolynomialSystem;
use schubert_core::rng::SeededRng;
use schubert_testkit::{NaivePoly, NaiveSystem};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub fn ex_sp() -> SchubertProblem {
    SchubertProblem::from_lists(6, 2, &vec![vec![3, 6]; 4]).unwrap()
}

pub fn random_matrix(rows: usize, cols: usize, rng: &mut SeededRng) -> CMatrix {
    let data = (0..rows * cols).map(|_| rng.complex_square()).collect();
    CMatrix::from_vec(rows, cols, data).unwrap()
}

pub fn random_point(n: usize, rng: &mut SeededRng) -> Vec<Complex64> {
    (0..n).map(|_| rng.complex_square()).collect()
}

/// The same system in the term-list form of the test kit.
pub fn to_naive(s: &PolynomialSystem) -> NaiveSystem {
    NaiveSystem {
        n_vars: s.n_vars(),
        polys: s
            .polys()
            .iter()
            .map(|p| NaivePoly {
                terms: p
                    .terms()
                    .iter()
                    .map(|m| {
                        (
                            m.coeff,
                            m.exponents.iter().map(|&(v, e)| (v as usize, e)).collect(),
                        )
                    })
                    .collect(),
            })
            .collect(),
    }
}

/// Flags for which the row space of `h` satisfies every condition of `p`:
/// a random basis of `h` is written into rows `β₁, …, β_k` of a random matrix.
pub fn planted_flags(p: &SchubertProblem, h: &CMatrix, rng: &mut SeededRng) -> Vec<Flag> {
    let (n, k) = (p.n(), p.k());
    p.conditions()
        .iter()
        .map(|c| {
            let basis = random_matrix(k, k, rng).matmul(h).unwrap();
            let mut m = random_matrix(n, n, rng);
            for (i, &b) in c.beta().iter().enumerate() {
                m.row_mut(b - 1).copy_from_slice(basis.row(i));
            }
            Flag::new(m).unwrap()
        })
        .collect()
}

/// Values of the free entries of `pattern` such that `pattern(values)·basis`
/// has the row space of `target`: row `i` is the vector of the target that
/// vanishes on the zero cells of row `i`, scaled to 1 at its fixed one.
pub fn pattern_coordinates(pattern: &PatternMatrix, basis: &CMatrix, target: &CMatrix) -> Vec<Complex64> {
    let q = target
        .matmul(&lu_decompose(basis).unwrap().inverse().unwrap())
        .unwrap();
    let (r, n) = (pattern.rows(), pattern.cols());
    let mut normalized = CMatrix::zeros(r, n);
    for i in 0..r {
        let zeros: Vec<usize> = (0..n).filter(|&j| pattern.cell(i, j) == Cell::Zero).collect();
        let one = (0..n)
            .find(|&j| pattern.cell(i, j) == Cell::One)
            .expect("one per row");
        let mut restricted = CMatrix::zeros(zeros.len(), r);
        for (row, &j) in zeros.iter().enumerate() {
            for c in 0..r {
                restricted[(row, c)] = q[(c, j)];
            }
        }
        let a = nullspace(&restricted, 1e-10);
        assert_eq!(a.cols(), 1, "target is outside the chart");
        let coeffs = a.column(0);
        let pivot: Complex64 = coeffs.iter().enumerate().map(|(c, &v)| v * q[(c, one)]).sum();
        for j in 0..n {
            let v: Complex64 = coeffs.iter().enumerate().map(|(c, &w)| w * q[(c, j)]).sum();
            normalized[(i, j)] = v / pivot;
        }
    }
    let values: Vec<Complex64> = pattern
        .free_positions()
        .iter()
        .map(|&(i, j)| normalized[(i - 1, j - 1)])
        .collect();
    let rebuilt = pattern.with_values(&values).unwrap();
    assert!(rebuilt.max_abs_diff(&normalized) < 1e-8 * (1.0 + normalized.max_abs()));
    values
}

/// Chart coordinates of the plane `h` in every block of `form`.
pub fn chart_coordinates(form: &Formulation, flags: &[Flag], h: &CMatrix) -> Vec<Complex64> {
    let p = &form.problem;
    let (n, k) = (p.n(), p.k());
    let conds = p.conditions();
    let kernel = nullspace(h, 1e-12).transpose();
    let mut x = vec![ZERO; form.system.n_vars()];
    for block in &form.blocks {
        let (pattern, basis, target) = match (block.role, block.conditions.as_slice()) {
            (ChartRole::Primal, []) => (
                pattern_single(&SchubertCondition::full(n, k).unwrap()),
                CMatrix::identity(n),
                h,
            ),
            (ChartRole::Primal, &[a]) => (pattern_single(&conds[a]), flags[a].matrix().clone(), h),
            (ChartRole::Primal, &[a, b]) => (
                pattern_pair(&conds[a], &conds[b]).unwrap(),
                general_position_transform(&flags[a], &flags[b]).unwrap(),
                h,
            ),
            (ChartRole::Dual, &[a]) => (
                pattern_single(&conds[a].dual()),
                dual_flag(&flags[a]).unwrap().matrix().clone(),
                &kernel,
            ),
            (ChartRole::Dual, &[a, b]) => (
                pattern_pair(&conds[a].dual(), &conds[b].dual()).unwrap(),
                general_position_transform(&dual_flag(&flags[a]).unwrap(), &dual_flag(&flags[b]).unwrap())
                    .unwrap(),
                &kernel,
            ),
            other => panic!("unexpected block {other:?}"),
        };
        let values = pattern_coordinates(&pattern, &basis, target);
        x[block.vars.clone()].copy_from_slice(&values);
    }
    x
}

/// A random Schubert problem on Gr(k, n) with `n` in `4..=max_n` and at
/// least two nontrivial conditions.
pub fn random_problem(rng: &mut SeededRng, max_n: usize) -> SchubertProblem {
    loop {
        let n = 4 + (rng.next_u64() % (max_n as u64 - 3)) as usize;
        let k = 1 + (rng.next_u64() % (n as u64 - 1)) as usize;
        let all: Vec<SchubertCondition> = schubert_core::combinat::all_conditions(n, k)
            .into_iter()
            .filter(|c| c.codim() >= 1)
            .collect();
        let mut left = k * (n - k);
        let mut conds = Vec::new();
        while left > 0 {
            let fitting: Vec<&SchubertCondition> = all.iter().filter(|c| c.codim() <= left).collect();
            let c = fitting[(rng.next_u64() % fitting.len() as u64) as usize].clone();
            left -= c.codim();
            conds.push(c);
        }
        if conds.len() >= 2 {
            return SchubertProblem::new(n, k, conds).unwrap();
        }
    }
}

/// A random condition on Gr(k, n) with `n ≤ max_n`.
pub fn random_condition(rng: &mut SeededRng, max_n: usize) -> SchubertCondition {
    let n = 2 + (rng.next_u64() % (max_n as u64 - 1)) as usize;
    let k = 1 + (rng.next_u64() % (n as u64 - 1)) as usize;
    let all = schubert_core::combinat::all_conditions(n, k);
    all[(rng.next_u64() % all.len() as u64) as usize].clone()
}
