//! Polynomial formulations of Schubert problem instances.
//!
//! * [`minor_system`]: determinantal rank conditions on a chart (overdetermined).
//! * [`primal_dual`]: one primal chart `M_{β¹}` and one dual chart per remaining
//!   condition, tied together by `M·Nᵢ = 0`.
//! * [`paired`]: primal chart on the pair `(β¹, β²)`, dual charts on the pairs
//!   `(β³, β⁴), …`, with a single dual chart closing an odd list.
//! * [`hybrid`]: as `paired` on the non-hypersurface conditions, plus one
//!   determinant per hypersurface condition on the primal chart.
//!
//! Every square formulation records its chart blocks so solutions can be
//! mapped back to a `k`-plane and its annihilators.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cells::{
    instantiate_dual, instantiate_dual_pair, instantiate_pattern, instantiate_primal,
    instantiate_primal_pair, pattern_single, AffineMatrix,
};
use crate::combinat::{feasible_pair, SchubertCondition, SchubertProblem};
use crate::error::{Error, Result};
use crate::flags::{coordinate_flag, Flag};
use crate::linalg::CMatrix;
use crate::polysys::{Exponents, Polynomial, PolynomialSystem};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Largest `ℓ` for which an infeasible pairing triggers a search for a
/// feasible reordering.
pub const MAX_REORDER_SEARCH: usize = 10;

fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `Σᵢ C(n, βᵢ+k−i+1) · C(k+βᵢ, βᵢ+k−i+1)`.
pub fn minor_count(c: &SchubertCondition) -> u128 {
    let (n, k) = (c.n(), c.k());
    c.beta()
        .iter()
        .enumerate()
        .map(|(idx, &b)| {
            let a = b + k - (idx + 1) + 1;
            binomial(n, a) * binomial(k + b, a)
        })
        .sum()
}

/// Determinants of square submatrices of a matrix of polynomials, by Laplace
/// expansion along the rows in order, memoized on the remaining column set.
struct LaplaceExpander<'a> {
    rows: Vec<&'a [Polynomial]>,
    memo: HashMap<u64, Polynomial>,
}

impl<'a> LaplaceExpander<'a> {
    fn new(rows: Vec<&'a [Polynomial]>) -> Self {
        Self {
            rows,
            memo: HashMap::new(),
        }
    }

    /// Determinant of the rows `depth..` restricted to the columns in `mask`.
    fn minor(&mut self, depth: usize, mask: u64) -> Polynomial {
        if depth == self.rows.len() {
            return Polynomial::constant(Complex64::new(1.0, 0.0));
        }
        if let Some(p) = self.memo.get(&mask) {
            return p.clone();
        }
        let mut acc = Polynomial::zero();
        let mut sign = 1.0;
        let mut bits = mask;
        while bits != 0 {
            let col = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let entry = &self.rows[depth][col];
            if !entry.is_zero() {
                let sub = self.minor(depth + 1, mask & !(1u64 << col));
                if !sub.is_zero() {
                    acc = acc.add(&entry.mul(&sub).scale(Complex64::new(sign, 0.0)));
                }
            }
            sign = -sign;
        }
        self.memo.insert(mask, acc.clone());
        acc
    }
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < size - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, size, cur, out);
            cur.pop();
        }
    }
    rec(0, n, size, &mut cur, &mut out);
    out
}

/// Rows of `[chart; rows of f]` as polynomials.
fn stacked_rows(chart: &AffineMatrix, f: &CMatrix, flag_rows: usize) -> Vec<Vec<Polynomial>> {
    let mut rows: Vec<Vec<Polynomial>> = (0..chart.rows())
        .map(|i| {
            (0..chart.cols())
                .map(|j| chart.entry(i, j).to_polynomial())
                .collect()
        })
        .collect();
    for r in 0..flag_rows {
        rows.push(f.row(r).iter().map(|&z| Polynomial::constant(z)).collect());
    }
    rows
}

/// The determinantal system `rank [chart; F_{βᵢ}] ≤ βᵢ+k−i`, i = 1..k, as all
/// `(βᵢ+k−i+1)`-minors. Indices whose bound is vacuous are skipped.
pub fn minor_system(
    chart: &AffineMatrix,
    c: &SchubertCondition,
    f: &Flag,
    n_vars: usize,
) -> Result<PolynomialSystem> {
    let (n, k) = (c.n(), c.k());
    if chart.rows() != k || chart.cols() != n || f.n() != n {
        return Err(Error::Shape(format!(
            "chart {}×{} and flag on C^{} for a condition on Gr({k},{n})",
            chart.rows(),
            chart.cols(),
            f.n()
        )));
    }
    if chart.variables().last().is_some_and(|&v| v as usize >= n_vars) {
        return Err(Error::Shape("chart variables exceed n_vars".into()));
    }
    let mut system = PolynomialSystem::empty(n_vars);
    for (idx, &b) in c.beta().iter().enumerate() {
        let i = idx + 1;
        let a = b + k - i + 1;
        let height = k + b;
        if a > height.min(n) {
            continue;
        }
        let rows = stacked_rows(chart, f.matrix(), b);
        let col_sets = subsets(n, a);
        for row_set in subsets(height, a) {
            let mut expander = LaplaceExpander::new(row_set.iter().map(|&r| rows[r].as_slice()).collect());
            for cols in &col_sets {
                let mask = cols.iter().fold(0u64, |m, &j| m | (1 << j));
                let minor = expander.minor(0, mask);
                system.push(minor, format!("rank[{c}] i={i} rows={row_set:?} cols={cols:?}"));
            }
        }
    }
    Ok(system)
}

/// `det [chart; first n−k rows of f]`: the single equation of a hypersurface
/// condition.
pub fn hypersurface_determinant(chart: &AffineMatrix, f: &Flag) -> Result<Polynomial> {
    let (k, n) = (chart.rows(), chart.cols());
    if f.n() != n {
        return Err(Error::Shape(format!(
            "chart on C^{n} against a flag on C^{}",
            f.n()
        )));
    }
    let rows = stacked_rows(chart, f.matrix(), n - k);
    let mut expander = LaplaceExpander::new(rows.iter().map(Vec::as_slice).collect());
    Ok(expander.minor(0, (1u64 << n) - 1))
}

/// Entries of the product `M·N` as polynomials, row-major; identically zero
/// entries are dropped. `M` and `N` must use disjoint variables.
pub fn bilinear_block(
    m: &AffineMatrix,
    nmat: &AffineMatrix,
    n_vars: usize,
    label: &str,
) -> Result<PolynomialSystem> {
    if m.cols() != nmat.rows() {
        return Err(Error::Shape(format!(
            "{}×{} times {}×{}",
            m.rows(),
            m.cols(),
            nmat.rows(),
            nmat.cols()
        )));
    }
    let mv: BTreeSet<u32> = m.variables().into_iter().collect();
    if nmat.variables().iter().any(|v| mv.contains(v)) {
        return Err(Error::InvalidInput(
            "primal and dual charts share variables".into(),
        ));
    }
    let max_var = mv.iter().chain(nmat.variables().iter()).max().copied();
    if max_var.is_some_and(|v| v as usize >= n_vars) {
        return Err(Error::Shape("chart variables exceed n_vars".into()));
    }
    let mut system = PolynomialSystem::empty(n_vars);
    for i in 0..m.rows() {
        for j in 0..nmat.cols() {
            let mut map: std::collections::BTreeMap<Exponents, Complex64> = Default::default();
            for c in 0..m.cols() {
                let a = m.entry(i, c);
                let b = nmat.entry(c, j);
                *map.entry(Vec::new()).or_insert(ZERO) += a.constant * b.constant;
                for &(v, cv) in &a.linear {
                    *map.entry(vec![(v, 1)]).or_insert(ZERO) += cv * b.constant;
                    for &(w, cw) in &b.linear {
                        let key = if v < w {
                            vec![(v, 1), (w, 1)]
                        } else {
                            vec![(w, 1), (v, 1)]
                        };
                        *map.entry(key).or_insert(ZERO) += cv * cw;
                    }
                }
                for &(w, cw) in &b.linear {
                    *map.entry(vec![(w, 1)]).or_insert(ZERO) += a.constant * cw;
                }
            }
            let p = Polynomial::from_map(map);
            if !p.is_zero() {
                system.push(p, format!("{label}[{},{}]", i + 1, j + 1));
            }
        }
    }
    Ok(system)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartRole {
    Primal,
    Dual,
}

/// One chart of a formulation. Condition and flag indices are 0-based
/// positions in the (possibly permuted) problem.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartBlock {
    pub role: ChartRole,
    pub conditions: Vec<usize>,
    pub vars: std::ops::Range<usize>,
    pub chart: AffineMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormulationMode {
    Full,
    Paired,
    Hybrid,
}

impl fmt::Display for FormulationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormulationMode::Full => "full",
            FormulationMode::Paired => "paired",
            FormulationMode::Hybrid => "hybrid",
        })
    }
}

impl std::str::FromStr for FormulationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Self::Full),
            "paired" => Ok(Self::Paired),
            "hybrid" => Ok(Self::Hybrid),
            other => Err(Error::InvalidInput(format!(
                "unknown formulation {other:?} (expected full, paired or hybrid)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Formulation {
    pub mode: FormulationMode,
    pub system: PolynomialSystem,
    pub blocks: Vec<ChartBlock>,
    /// 0-based indices of conditions imposed by a determinant.
    pub hypersurfaces: Vec<usize>,
    pub problem: SchubertProblem,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ChartBlockJson {
    pub role: ChartRole,
    /// 1-based condition positions.
    pub conditions: Vec<usize>,
    /// Half-open variable range `[start, end)`.
    pub vars: [usize; 2],
    pub rows: usize,
    pub cols: usize,
}

impl Formulation {
    pub fn primal(&self) -> &ChartBlock {
        &self.blocks[0]
    }

    pub fn duals(&self) -> impl Iterator<Item = &ChartBlock> {
        self.blocks.iter().skip(1)
    }

    pub fn chart_blocks_json(&self) -> Vec<ChartBlockJson> {
        self.blocks
            .iter()
            .map(|b| ChartBlockJson {
                role: b.role,
                conditions: b.conditions.iter().map(|i| i + 1).collect(),
                vars: [b.vars.start, b.vars.end],
                rows: b.chart.rows(),
                cols: b.chart.cols(),
            })
            .collect()
    }

    /// Polynomial-system JSON with the chart layout under `chart_blocks`.
    pub fn to_json(&self) -> Result<String> {
        let mut value = serde_json::to_value(&self.system)?;
        let obj = value.as_object_mut().expect("system serializes to an object");
        obj.insert("mode".into(), serde_json::to_value(self.mode)?);
        obj.insert(
            "hypersurfaces".into(),
            serde_json::to_value(self.hypersurfaces.iter().map(|i| i + 1).collect::<Vec<_>>())?,
        );
        obj.insert(
            "chart_blocks".into(),
            serde_json::to_value(self.chart_blocks_json())?,
        );
        Ok(serde_json::to_string(&value)?)
    }
}

fn check_flags(p: &SchubertProblem, flags: &[Flag]) -> Result<()> {
    if flags.len() != p.len() {
        return Err(Error::InvalidInput(format!(
            "{} flags for {} conditions",
            flags.len(),
            p.len()
        )));
    }
    if let Some(f) = flags.iter().find(|f| f.n() != p.n()) {
        return Err(Error::Shape(format!(
            "flag on C^{} for a problem on C^{}",
            f.n(),
            p.n()
        )));
    }
    Ok(())
}

fn square_or_err(system: &PolynomialSystem) -> Result<()> {
    system.require_square()
}

/// Square bilinear system in `(M_{β¹}, N_{β²}, …, N_{β^ℓ})`:
/// `k(n−k)(ℓ−1)` equations and variables.
pub fn primal_dual(p: &SchubertProblem, flags: &[Flag]) -> Result<Formulation> {
    check_flags(p, flags)?;
    if p.len() < 2 {
        return Err(Error::InvalidInput(
            "the primal-dual formulation needs ℓ ≥ 2".into(),
        ));
    }
    let conds = p.conditions();
    let primal_pattern = pattern_single(&conds[0]);
    let primal = instantiate_primal(&primal_pattern, &flags[0], 0)?;
    let mut offset = primal_pattern.n_vars();
    let mut blocks = vec![ChartBlock {
        role: ChartRole::Primal,
        conditions: vec![0],
        vars: 0..offset,
        chart: primal,
    }];
    for (i, (c, f)) in conds.iter().zip(flags).enumerate().skip(1) {
        let chart = instantiate_dual(c, f, offset)?;
        let width = p.dim() - c.codim();
        blocks.push(ChartBlock {
            role: ChartRole::Dual,
            conditions: vec![i],
            vars: offset..offset + width,
            chart,
        });
        offset += width;
    }
    let system = assemble(&blocks, offset, &[], flags)?;
    square_or_err(&system)?;
    Ok(Formulation {
        mode: FormulationMode::Full,
        system,
        blocks,
        hypersurfaces: Vec::new(),
        problem: p.clone(),
    })
}

/// Square bilinear system in `(M_{β¹}^{β²}, N_{β³}^{β⁴}, …)`:
/// `⌊(ℓ−1)/2⌋·k(n−k)` equations and variables.
pub fn paired(p: &SchubertProblem, flags: &[Flag]) -> Result<Formulation> {
    build_paired(p, flags, &[], FormulationMode::Paired)
}

/// `paired` on the conditions outside `hypersurfaces` (0-based), plus one
/// determinant on the primal chart for every hypersurface condition.
pub fn hybrid(p: &SchubertProblem, flags: &[Flag], hypersurfaces: &[usize]) -> Result<Formulation> {
    build_paired(p, flags, hypersurfaces, FormulationMode::Hybrid)
}

/// Dispatches on `mode`. For `Hybrid`, `hypersurfaces = None` selects every
/// condition that is the hypersurface condition.
pub fn formulate(
    p: &SchubertProblem,
    flags: &[Flag],
    mode: FormulationMode,
    hypersurfaces: Option<&[usize]>,
) -> Result<Formulation> {
    match mode {
        FormulationMode::Full => primal_dual(p, flags),
        FormulationMode::Paired => paired(p, flags),
        FormulationMode::Hybrid => {
            let all: Vec<usize> = (0..p.len())
                .filter(|&i| p.conditions()[i].is_hypersurface())
                .collect();
            hybrid(p, flags, hypersurfaces.unwrap_or(&all))
        }
    }
}

fn build_paired(
    p: &SchubertProblem,
    flags: &[Flag],
    hypersurfaces: &[usize],
    mode: FormulationMode,
) -> Result<Formulation> {
    check_flags(p, flags)?;
    let conds = p.conditions();
    let mut hyp: Vec<usize> = hypersurfaces.to_vec();
    hyp.sort_unstable();
    hyp.dedup();
    for &h in &hyp {
        if h >= conds.len() {
            return Err(Error::InvalidInput(format!(
                "hypersurface index {} out of range 1..={}",
                h + 1,
                conds.len()
            )));
        }
        if !conds[h].is_hypersurface() {
            return Err(Error::InvalidInput(format!(
                "condition {} = {} is not the hypersurface condition (codimension {})",
                h + 1,
                conds[h],
                conds[h].codim()
            )));
        }
    }
    let rest: Vec<usize> = (0..conds.len()).filter(|i| !hyp.contains(i)).collect();
    if let Some((a, b)) = first_infeasible_pair(conds, &rest) {
        return Err(Error::InfeasiblePair {
            first: a + 1,
            second: b + 1,
            suggestion: suggest_order(conds, &rest),
        });
    }

    let (n, k) = (p.n(), p.k());
    let dim = p.dim();
    let mut blocks = Vec::new();
    let mut offset;
    match rest.as_slice() {
        [] => {
            let pattern = pattern_single(&SchubertCondition::full(n, k)?);
            offset = pattern.n_vars();
            blocks.push(ChartBlock {
                role: ChartRole::Primal,
                conditions: vec![],
                vars: 0..offset,
                chart: instantiate_pattern(&pattern, coordinate_flag(n).matrix(), 0)?,
            });
        }
        [only] => {
            let pattern = pattern_single(&conds[*only]);
            offset = pattern.n_vars();
            blocks.push(ChartBlock {
                role: ChartRole::Primal,
                conditions: vec![*only],
                vars: 0..offset,
                chart: instantiate_primal(&pattern, &flags[*only], 0)?,
            });
        }
        [a, b, ..] => {
            let chart = instantiate_primal_pair(&conds[*a], &conds[*b], &flags[*a], &flags[*b], 0)?;
            offset = dim - conds[*a].codim() - conds[*b].codim();
            blocks.push(ChartBlock {
                role: ChartRole::Primal,
                conditions: vec![*a, *b],
                vars: 0..offset,
                chart,
            });
        }
    }
    for group in rest.get(2..).unwrap_or(&[]).chunks(2) {
        let (chart, width) = match *group {
            [a, b] => (
                instantiate_dual_pair(&conds[a], &conds[b], &flags[a], &flags[b], offset)?,
                dim - conds[a].codim() - conds[b].codim(),
            ),
            [a] => (
                instantiate_dual(&conds[a], &flags[a], offset)?,
                dim - conds[a].codim(),
            ),
            _ => unreachable!("chunks(2)"),
        };
        blocks.push(ChartBlock {
            role: ChartRole::Dual,
            conditions: group.to_vec(),
            vars: offset..offset + width,
            chart,
        });
        offset += width;
    }
    let system = assemble(&blocks, offset, &hyp, flags)?;
    square_or_err(&system)?;
    Ok(Formulation {
        mode,
        system,
        blocks,
        hypersurfaces: hyp,
        problem: p.clone(),
    })
}

fn assemble(
    blocks: &[ChartBlock],
    n_vars: usize,
    hypersurfaces: &[usize],
    flags: &[Flag],
) -> Result<PolynomialSystem> {
    let primal = &blocks[0].chart;
    let mut system = PolynomialSystem::empty(n_vars);
    for (idx, dual) in blocks.iter().enumerate().skip(1) {
        system.extend(bilinear_block(primal, &dual.chart, n_vars, &format!("MN{idx}"))?);
    }
    for &h in hypersurfaces {
        let det = hypersurface_determinant(primal, &flags[h])?;
        system.push(det, format!("det[condition {}]", h + 1));
    }
    Ok(system)
}

fn pair_ok(conds: &[SchubertCondition], a: usize, b: usize, dual: bool) -> bool {
    if dual {
        feasible_pair(&conds[a].dual(), &conds[b].dual())
    } else {
        feasible_pair(&conds[a], &conds[b])
    }
}

/// First positional pair `(primal pair, then dual pairs)` that is infeasible.
fn first_infeasible_pair(conds: &[SchubertCondition], order: &[usize]) -> Option<(usize, usize)> {
    order
        .chunks(2)
        .enumerate()
        .filter(|(_, g)| g.len() == 2)
        .find(|&(i, g)| !pair_ok(conds, g[0], g[1], i > 0))
        .map(|(_, g)| (g[0], g[1]))
}

/// Backtracking search over orderings of `slots` (positions into `conds`) for
/// one whose positional pairs are all feasible. Returns a 1-based permutation
/// of the whole condition list that keeps every position outside `slots`.
pub fn suggest_order(conds: &[SchubertCondition], slots: &[usize]) -> Option<Vec<usize>> {
    if slots.len() > MAX_REORDER_SEARCH {
        return None;
    }
    fn search(conds: &[SchubertCondition], pool: &mut Vec<usize>, chosen: &mut Vec<usize>) -> bool {
        if pool.len() <= 1 {
            chosen.append(pool);
            return true;
        }
        let dual = !chosen.is_empty();
        let mut tried: Vec<(&SchubertCondition, &SchubertCondition)> = Vec::new();
        for i in 0..pool.len() {
            for j in 0..pool.len() {
                if i == j {
                    continue;
                }
                let (a, b) = (pool[i], pool[j]);
                if tried.contains(&(&conds[a], &conds[b])) || !pair_ok(conds, a, b, dual) {
                    continue;
                }
                tried.push((&conds[a], &conds[b]));
                let saved = pool.clone();
                pool.retain(|&x| x != a && x != b);
                chosen.push(a);
                chosen.push(b);
                if search(conds, pool, chosen) {
                    return true;
                }
                chosen.truncate(chosen.len() - 2);
                *pool = saved;
            }
        }
        false
    }
    let mut pool = slots.to_vec();
    let mut chosen = Vec::new();
    if !search(conds, &mut pool, &mut chosen) {
        return None;
    }
    let mut perm: Vec<usize> = (0..conds.len()).collect();
    for (&slot, &src) in slots.iter().zip(&chosen) {
        perm[slot] = src;
    }
    Some(perm.into_iter().map(|i| i + 1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::{pattern_pair, AffineExpr};
    use crate::flags::{opposite_flag, random_flag};
    use crate::rng::SeededRng;

    fn ex_sp() -> SchubertProblem {
        SchubertProblem::from_lists(6, 2, &vec![vec![3, 6]; 4]).unwrap()
    }

    fn gr39() -> SchubertProblem {
        let mut lists = vec![vec![6, 8, 9]; 6];
        lists.extend(vec![vec![4, 8, 9]; 4]);
        SchubertProblem::from_lists(9, 3, &lists).unwrap()
    }

    fn flags(p: &SchubertProblem, seed: u64) -> Vec<Flag> {
        (0..p.len())
            .map(|i| random_flag(p.n(), seed * 100 + i as u64, false).unwrap())
            .collect()
    }

    fn cond(n: usize, k: usize, beta: &[usize]) -> SchubertCondition {
        SchubertCondition::new(n, k, beta.to_vec()).unwrap()
    }

    #[test]
    fn minor_counts() {
        assert_eq!(minor_count(&cond(6, 2, &[3, 6])), 6);
        assert_eq!(minor_count(&SchubertCondition::full(7, 3).unwrap()), 0);
    }

    #[test]
    fn ex_sp_minor_equations() {
        let c = cond(6, 2, &[3, 6]);
        let chart = instantiate_primal_pair(&c, &c, &coordinate_flag(6), &opposite_flag(6), 0).unwrap();
        let mut total = PolynomialSystem::empty(4);
        for seed in [3, 4] {
            let f = random_flag(6, seed, false).unwrap();
            let s = minor_system(&chart, &c, &f, 4).unwrap();
            assert_eq!(s.n_polys(), 6);
            total.extend(s);
        }
        assert_eq!(total.n_polys(), 12);
        assert!(total.max_degree() <= 2);
        assert_eq!(total.n_vars(), 4);
    }

    #[test]
    fn vacuous_condition_has_no_minors() {
        let c = SchubertCondition::full(5, 2).unwrap();
        let chart = instantiate_primal(&pattern_single(&c), &coordinate_flag(5), 0).unwrap();
        let s = minor_system(&chart, &c, &random_flag(5, 1, false).unwrap(), 6).unwrap();
        assert_eq!(s.n_polys(), 0);
    }

    #[test]
    fn cell_points_satisfy_their_minors() {
        let mut rng = SeededRng::new(11);
        for seed in 0..10 {
            let c = cond(7, 3, &[2, 5, 7]);
            let f = random_flag(7, seed, false).unwrap();
            let pattern = pattern_single(&c);
            let chart = instantiate_primal(&pattern, &f, 0).unwrap();
            let s = minor_system(&chart, &c, &f, pattern.n_vars()).unwrap();
            let x: Vec<Complex64> = (0..pattern.n_vars()).map(|_| rng.complex_square()).collect();
            let r = s.evaluate(&x).unwrap();
            assert!(r.iter().all(|z| z.norm() < 1e-9));
        }
    }

    #[test]
    fn bilinear_product_matches_numeric() {
        let mut rng = SeededRng::new(2);
        let c = cond(6, 2, &[3, 6]);
        let f1 = random_flag(6, 1, false).unwrap();
        let f2 = random_flag(6, 2, false).unwrap();
        let m = instantiate_primal(&pattern_single(&c), &f1, 0).unwrap();
        let nm = instantiate_dual(&c, &f2, 6).unwrap();
        let s = bilinear_block(&m, &nm, 12, "MN").unwrap();
        assert_eq!(s.n_polys(), 8);
        let x: Vec<Complex64> = (0..12).map(|_| rng.complex_square()).collect();
        let prod = &m.evaluate(&x).unwrap() * &nm.evaluate(&x).unwrap();
        let vals = s.evaluate(&x).unwrap();
        for (v, p) in vals.iter().zip(prod.as_slice()) {
            assert!((v - p).norm() < 1e-12);
        }
        assert!(matches!(
            bilinear_block(&m, &m.transpose(), 12, "x"),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn constant_annihilating_blocks_are_empty() {
        let h = CMatrix::from_real_rows(&[&[1.0, 0.0, 0.0]]);
        let k = CMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        let s = bilinear_block(&AffineMatrix::constant(&h), &AffineMatrix::constant(&k), 0, "c").unwrap();
        assert_eq!(s.n_polys(), 0);
    }

    #[test]
    fn x_plus_y_for_the_full_chart() {
        // [X : I_k] against [I_{n−k} ; Y] gives exactly x_ij + y_ij
        let (n, k) = (5, 2);
        let full = SchubertCondition::full(n, k).unwrap();
        let m = instantiate_primal(&pattern_single(&full), &coordinate_flag(n), 0).unwrap();
        let d = n - k;
        let one = Complex64::new(1.0, 0.0);
        let mut entries = Vec::new();
        for r in 0..n {
            for c in 0..d {
                entries.push(if r < d {
                    AffineExpr {
                        constant: if r == c { one } else { ZERO },
                        linear: vec![],
                    }
                } else {
                    let i = r - d;
                    AffineExpr {
                        constant: ZERO,
                        linear: vec![((k * d + i * d + c) as u32, one)],
                    }
                });
            }
        }
        let nm = AffineMatrix::from_entries(n, d, entries).unwrap();
        let s = bilinear_block(&m, &nm, 2 * k * d, "XY").unwrap();
        assert_eq!(s.n_polys(), k * d);
        for (idx, p) in s.polys().iter().enumerate() {
            let (i, j) = (idx / d, idx % d);
            let want = Polynomial::affine(
                ZERO,
                &[((i * d + j) as u32, one), ((k * d + i * d + j) as u32, one)],
            );
            assert_eq!(p, &want);
        }
    }

    #[test]
    fn ex_sp_shapes() {
        let p = ex_sp();
        let f = flags(&p, 1);
        let pd = primal_dual(&p, &f).unwrap();
        assert_eq!(pd.system.shape().to_string(), "(24, 24, {2:24})");
        let pr = paired(&p, &f).unwrap();
        assert_eq!(pr.system.shape().to_string(), "(8, 8, {2:8})");
        assert_eq!(pr.blocks.len(), 2);
        assert_eq!(pr.blocks[1].vars, 4..8);
    }

    #[test]
    fn gr39_shapes() {
        let p = gr39();
        let f = flags(&p, 2);
        assert_eq!(
            primal_dual(&p, &f).unwrap().system.shape().to_string(),
            "(162, 162, {2:162})"
        );
        assert_eq!(
            paired(&p, &f).unwrap().system.shape().to_string(),
            "(72, 72, {2:72})"
        );
        let h = hybrid(&p, &f, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(h.system.shape().to_string(), "(24, 24, {2:18, 3:6})");
    }

    #[test]
    fn odd_number_of_conditions() {
        let p = SchubertProblem::from_lists(5, 2, &[vec![2, 5], vec![2, 5], vec![2, 5]]).unwrap();
        let f = flags(&p, 3);
        let pr = paired(&p, &f).unwrap();
        assert_eq!(pr.system.n_polys(), 6);
        assert!(pr.system.is_square());
        assert_eq!(pr.blocks[1].conditions, vec![2]);
    }

    #[test]
    fn hybrid_with_no_hypersurfaces_is_paired() {
        let p = ex_sp();
        let f = flags(&p, 4);
        let h = hybrid(&p, &f, &[]).unwrap();
        let pr = paired(&p, &f).unwrap();
        assert_eq!(h.system, pr.system);
    }

    #[test]
    fn hybrid_rejects_non_box_conditions() {
        let p = ex_sp();
        let f = flags(&p, 5);
        assert!(matches!(hybrid(&p, &f, &[0]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn infeasible_pairing_suggests_reordering() {
        // Gr(2,4): (1,4) and (2,3) both have codimension 2 but the pair is empty
        let p = SchubertProblem::from_lists(4, 2, &[vec![1, 4], vec![2, 3]]).unwrap();
        assert!(!feasible_pair(&p.conditions()[0], &p.conditions()[1]));
        let f = flags(&p, 6);
        match paired(&p, &f) {
            Err(Error::InfeasiblePair {
                first,
                second,
                suggestion,
            }) => {
                assert_eq!((first, second), (1, 2));
                assert_eq!(suggestion, None);
            }
            other => panic!("{other:?}"),
        }
        // a feasible order exists once a third condition can take the other slot
        let conds = vec![
            cond(4, 2, &[1, 4]),
            cond(4, 2, &[1, 4]),
            cond(4, 2, &[3, 4]),
            cond(4, 2, &[3, 4]),
        ];
        let order = suggest_order(&conds, &[0, 1, 2, 3]).unwrap();
        let sorted: Vec<usize> = {
            let mut o = order.clone();
            o.sort();
            o
        };
        assert_eq!(sorted, vec![1, 2, 3, 4]);
        let idx: Vec<usize> = order.iter().map(|i| i - 1).collect();
        assert!(first_infeasible_pair(&conds, &idx).is_none());
    }

    #[test]
    fn full_square_law_random_problems() {
        let mut rng = SeededRng::new(77);
        let mut built = 0;
        while built < 40 {
            let n = 3 + (rng.next_u64() % 4) as usize;
            let k = 1 + (rng.next_u64() % (n as u64 - 1)) as usize;
            let Some(p) = random_problem(n, k, &mut rng) else {
                continue;
            };
            let f = flags(&p, built as u64);
            let form = primal_dual(&p, &f).unwrap();
            let want = p.dim() * (p.len() - 1);
            assert_eq!((form.system.n_vars(), form.system.n_polys()), (want, want));
            built += 1;
        }
    }

    pub(crate) fn random_problem(n: usize, k: usize, rng: &mut SeededRng) -> Option<SchubertProblem> {
        let all = crate::combinat::all_conditions(n, k);
        let dim = k * (n - k);
        let mut conds = Vec::new();
        let mut total = 0;
        for _ in 0..50 {
            if total == dim {
                break;
            }
            let c = &all[(rng.next_u64() % all.len() as u64) as usize];
            if c.codim() > 0 && total + c.codim() <= dim {
                total += c.codim();
                conds.push(c.clone());
            }
        }
        if total != dim || conds.len() < 2 {
            return None;
        }
        SchubertProblem::new(n, k, conds).ok()
    }

    #[test]
    fn pattern_pair_is_used_for_primal_block() {
        let c = cond(6, 2, &[3, 6]);
        let pat = pattern_pair(&c, &c).unwrap();
        let chart = instantiate_primal_pair(&c, &c, &coordinate_flag(6), &opposite_flag(6), 0).unwrap();
        assert_eq!(chart.variables().len(), pat.n_vars());
    }
}
