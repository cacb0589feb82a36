//! Schubert conditions on `Gr(k, n)`, their duals and codimensions, and the
//! Littlewood–Richardson count of solutions to a Schubert problem.
//!
//! Conditions are stored 1-indexed: `beta[i]` is an element of `{1, …, n}`.
//! Partitions are stored as weakly decreasing row lengths of a Young diagram
//! inside the `k × (n−k)` box, row 0 first.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SchubertCondition {
    n: usize,
    k: usize,
    beta: Vec<usize>,
}

impl SchubertCondition {
    pub fn new(n: usize, k: usize, beta: Vec<usize>) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::InvalidInput(format!("need 0 < k < n, got k={k}, n={n}")));
        }
        if beta.len() != k {
            return Err(Error::InvalidInput(format!(
                "condition {beta:?} has {} entries, expected k={k}",
                beta.len()
            )));
        }
        if beta[0] < 1 || beta[k - 1] > n || beta.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(format!(
                "condition {beta:?} is not strictly increasing in [1,{n}]"
            )));
        }
        Ok(Self { n, k, beta })
    }

    /// The trivial condition `(n−k+1, …, n)`: all of `Gr(k, n)`.
    pub fn full(n: usize, k: usize) -> Result<Self> {
        Self::new(n, k, (n - k + 1..=n).collect())
    }

    /// The hypersurface condition `(n−k, n−k+2, …, n)`.
    pub fn hypersurface(n: usize, k: usize) -> Result<Self> {
        let mut beta: Vec<usize> = (n - k + 1..=n).collect();
        beta[0] -= 1;
        Self::new(n, k, beta)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// 1-indexed entries.
    pub fn beta(&self) -> &[usize] {
        &self.beta
    }

    /// `k(n−k) − Σᵢ(βᵢ − i)`.
    pub fn codim(&self) -> usize {
        let free: usize = self.beta.iter().enumerate().map(|(i, &b)| b - (i + 1)).sum();
        self.k * (self.n - self.k) - free
    }

    /// `β^⊥ = (j | n+1−j ∉ β)`, a condition on `Gr(n−k, n)`.
    pub fn dual(&self) -> SchubertCondition {
        let n = self.n;
        let mut beta: Vec<usize> = (1..=n)
            .filter(|j| !self.beta.contains(j))
            .map(|j| n + 1 - j)
            .collect();
        beta.sort_unstable();
        SchubertCondition {
            n,
            k: n - self.k,
            beta,
        }
    }

    /// `λᵢ = n−k+i−βᵢ`.
    pub fn to_partition(&self) -> Partition {
        let parts = self
            .beta
            .iter()
            .enumerate()
            .map(|(i, &b)| self.n - self.k + i + 1 - b)
            .collect();
        Partition::new(parts)
    }

    pub fn is_hypersurface(&self) -> bool {
        self.codim() == 1
    }
}

impl fmt::Display for SchubertCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.beta.iter().map(|b| b.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn codim(c: &SchubertCondition) -> usize {
    c.codim()
}

pub fn dual_condition(c: &SchubertCondition) -> SchubertCondition {
    c.dual()
}

pub fn condition_to_partition(c: &SchubertCondition) -> Partition {
    c.to_partition()
}

/// `X_β E ∩ X_γ E'` is nonempty iff `n+1−γ_{k+1−i} ≤ βᵢ` for all `i`.
pub fn feasible_pair(b: &SchubertCondition, g: &SchubertCondition) -> bool {
    if (b.n, b.k) != (g.n, g.k) {
        return false;
    }
    let (n, k) = (b.n, b.k);
    (0..k).all(|i| n < g.beta[k - 1 - i] + b.beta[i])
}

/// True iff the codimensions sum to `k(n−k)`; errors when conditions live on
/// different Grassmannians.
pub fn validate_problem(n: usize, k: usize, conditions: &[SchubertCondition]) -> Result<bool> {
    if let Some(c) = conditions.iter().find(|c| (c.n, c.k) != (n, k)) {
        return Err(Error::InvalidInput(format!(
            "condition {c} lives on Gr({},{}), expected Gr({k},{n})",
            c.k, c.n
        )));
    }
    let sum: usize = conditions.iter().map(SchubertCondition::codim).sum();
    Ok(sum == k * (n - k))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchubertProblem {
    n: usize,
    k: usize,
    conditions: Vec<SchubertCondition>,
}

impl SchubertProblem {
    pub fn new(n: usize, k: usize, conditions: Vec<SchubertCondition>) -> Result<Self> {
        if conditions.is_empty() {
            return Err(Error::InvalidInput(
                "a Schubert problem needs ≥ 1 condition".into(),
            ));
        }
        if !validate_problem(n, k, &conditions)? {
            return Err(Error::NotASchubertProblem {
                sum: conditions.iter().map(SchubertCondition::codim).sum(),
                expected: k * (n - k),
            });
        }
        Ok(Self { n, k, conditions })
    }

    /// Builds from raw 1-indexed lists.
    pub fn from_lists(n: usize, k: usize, lists: &[Vec<usize>]) -> Result<Self> {
        let conditions = lists
            .iter()
            .map(|b| SchubertCondition::new(n, k, b.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, k, conditions)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `dim Gr(k, n)`.
    pub fn dim(&self) -> usize {
        self.k * (self.n - self.k)
    }

    pub fn conditions(&self) -> &[SchubertCondition] {
        &self.conditions
    }

    pub fn len(&self) -> usize {
        self.conditions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    /// Reorders conditions; `order` is a 0-based permutation.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        check_permutation(order, self.len())?;
        Ok(Self {
            n: self.n,
            k: self.k,
            conditions: order.iter().map(|&i| self.conditions[i].clone()).collect(),
        })
    }
}

pub(crate) fn check_permutation(order: &[usize], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    if order.len() != len {
        return Err(Error::InvalidInput(format!(
            "permutation has {} entries, expected {len}",
            order.len()
        )));
    }
    for &i in order {
        if i >= len || seen[i] {
            return Err(Error::InvalidInput(format!("{order:?} is not a permutation")));
        }
        seen[i] = true;
    }
    Ok(())
}

/// Weakly decreasing list of row lengths; trailing zeros are kept so that a
/// partition coming from a condition has exactly `k` parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn fits_in_box(&self, rows: usize, cols: usize) -> bool {
        self.parts.iter().skip(rows).all(|&p| p == 0) && self.parts.first().is_none_or(|&p| p <= cols)
    }

    fn trimmed(&self) -> Vec<usize> {
        let mut p = self.parts.clone();
        while p.last() == Some(&0) {
            p.pop();
        }
        p
    }
}

/// Expansion of a product of Schur classes in the basis of partitions
/// fitting in a `rows × cols` box, with row lengths padded to `rows`.
pub type SchurExpansion = BTreeMap<Vec<usize>, u64>;

/// `s_λ · s_μ` truncated to the `rows × cols` box, computed by enumerating
/// Littlewood–Richardson tableaux of shape `ν/λ` and content `μ`.
pub fn lr_product(lambda: &[usize], mu: &[usize], rows: usize, cols: usize) -> Result<SchurExpansion> {
    let mut shape = vec![0usize; rows];
    for (i, &p) in lambda.iter().enumerate() {
        if p == 0 {
            continue;
        }
        if i >= rows || p > cols {
            return Ok(SchurExpansion::new());
        }
        shape[i] = p;
    }
    let content: Vec<usize> = mu.iter().copied().filter(|&m| m > 0).collect();
    let mut out = SchurExpansion::new();
    // counts[letter][row]: number of entries `letter` placed in `row`
    let mut counts = vec![vec![0usize; rows]; content.len()];
    let mut filler = LrFiller {
        rows,
        cols,
        content: &content,
        counts: &mut counts,
        out: &mut out,
    };
    filler.place_letter(0, &mut shape)?;
    Ok(out)
}

struct LrFiller<'a> {
    rows: usize,
    cols: usize,
    content: &'a [usize],
    counts: &'a mut Vec<Vec<usize>>,
    out: &'a mut SchurExpansion,
}

impl LrFiller<'_> {
    fn place_letter(&mut self, letter: usize, shape: &mut Vec<usize>) -> Result<()> {
        if letter == self.content.len() {
            let entry = self.out.entry(shape.clone()).or_insert(0);
            *entry = entry.checked_add(1).ok_or(Error::Overflow("LR coefficient"))?;
            return Ok(());
        }
        let before = shape.clone();
        self.place_row(letter, 0, self.content[letter], 0, &before, shape)
    }

    /// Chooses how many copies of `letter` go into `row`, top to bottom.
    /// `placed` counts copies already put in rows above.
    fn place_row(
        &mut self,
        letter: usize,
        row: usize,
        remaining: usize,
        placed: usize,
        before: &[usize],
        shape: &mut Vec<usize>,
    ) -> Result<()> {
        if remaining == 0 {
            return self.place_letter(letter + 1, shape);
        }
        if row == self.rows {
            return Ok(());
        }
        // horizontal strip: stay weakly left of the row above as it was before this letter
        let limit = if row == 0 { self.cols } else { before[row - 1] };
        let room = limit.saturating_sub(before[row]);
        // lattice word: copies of `letter` through this row may not exceed
        // copies of `letter − 1` in the rows strictly above
        let lattice_cap = if letter == 0 {
            usize::MAX
        } else {
            let above: usize = self.counts[letter - 1][..row].iter().sum();
            above.saturating_sub(placed)
        };
        let max_here = room.min(remaining).min(lattice_cap);
        for a in (0..=max_here).rev() {
            shape[row] = before[row] + a;
            self.counts[letter][row] = a;
            self.place_row(letter, row + 1, remaining - a, placed + a, before, shape)?;
        }
        shape[row] = before[row];
        self.counts[letter][row] = 0;
        Ok(())
    }
}

/// `N(𝛃)`: coefficient of the full box in the product of the conditions'
/// Schur classes, multiplied left to right.
pub fn lr_number(p: &SchubertProblem) -> Result<u64> {
    let (rows, cols) = (p.k, p.n - p.k);
    let mut acc = SchurExpansion::new();
    acc.insert(vec![0; rows], 1);
    for c in &p.conditions {
        let mu = c.to_partition().trimmed();
        let mut next = SchurExpansion::new();
        for (lambda, &coeff) in &acc {
            for (nu, mult) in lr_product(lambda, &mu, rows, cols)? {
                let add = coeff.checked_mul(mult).ok_or(Error::Overflow("LR number"))?;
                let slot = next.entry(nu).or_insert(0);
                *slot = slot.checked_add(add).ok_or(Error::Overflow("LR number"))?;
            }
        }
        acc = next;
    }
    Ok(acc.get(&vec![cols; rows]).copied().unwrap_or(0))
}

/// Every strictly increasing `k`-subset of `{1,…,n}`, lexicographically.
pub fn all_conditions(n: usize, k: usize) -> Vec<SchubertCondition> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<SchubertCondition>) {
        if cur.len() == k {
            out.push(SchubertCondition {
                n,
                k,
                beta: cur.clone(),
            });
            return;
        }
        for v in start..=n {
            if n - v + 1 < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    if k > 0 && k < n {
        rec(1, n, k, &mut current, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cond(n: usize, k: usize, beta: &[usize]) -> SchubertCondition {
        SchubertCondition::new(n, k, beta.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_conditions() {
        assert!(SchubertCondition::new(6, 2, vec![3, 3]).is_err());
        assert!(SchubertCondition::new(6, 2, vec![0, 3]).is_err());
        assert!(SchubertCondition::new(6, 2, vec![3, 7]).is_err());
        assert!(SchubertCondition::new(6, 2, vec![3]).is_err());
        assert!(SchubertCondition::new(6, 6, vec![1, 2, 3, 4, 5, 6]).is_err());
    }

    #[test]
    fn codimensions() {
        assert_eq!(cond(6, 2, &[3, 6]).codim(), 2);
        assert_eq!(SchubertCondition::full(9, 4).unwrap().codim(), 0);
        assert_eq!(cond(7, 3, &[2, 5, 7]).codim(), 4);
        assert_eq!(cond(5, 2, &[1, 2]).codim(), 6);
        assert_eq!(SchubertCondition::hypersurface(9, 3).unwrap().codim(), 1);
    }

    #[test]
    fn duals() {
        assert_eq!(cond(6, 2, &[3, 6]).dual(), cond(6, 4, &[2, 3, 5, 6]));
        for n in 2..=8 {
            for k in 1..n {
                for c in all_conditions(n, k) {
                    let d = c.dual();
                    assert_eq!(d.dual(), c);
                    assert_eq!(d.codim(), c.codim());
                }
            }
        }
    }

    #[test]
    fn partitions() {
        assert_eq!(cond(6, 2, &[3, 6]).to_partition().parts(), &[2, 0]);
        assert_eq!(
            SchubertCondition::hypersurface(7, 3)
                .unwrap()
                .to_partition()
                .parts(),
            &[1, 0, 0]
        );
        assert_eq!(cond(9, 3, &[4, 8, 9]).to_partition().parts(), &[3, 0, 0]);
        for c in all_conditions(7, 3) {
            let p = c.to_partition();
            assert_eq!(p.weight(), c.codim());
            assert!(p.fits_in_box(3, 4));
        }
    }

    #[test]
    fn validation() {
        let c = cond(6, 2, &[3, 6]);
        assert!(validate_problem(6, 2, &vec![c.clone(); 4]).unwrap());
        assert!(!validate_problem(6, 2, &vec![c.clone(); 3]).unwrap());
        let other = cond(7, 2, &[3, 7]);
        assert!(matches!(
            validate_problem(6, 2, &[c.clone(), other]),
            Err(Error::InvalidInput(_))
        ));
        let box9 = SchubertCondition::hypersurface(9, 3).unwrap();
        let three = cond(9, 3, &[4, 8, 9]);
        let mut conds = vec![box9; 6];
        conds.extend(vec![three; 4]);
        assert!(validate_problem(9, 3, &conds).unwrap());
        assert_eq!(
            SchubertProblem::new(6, 2, vec![c; 3]),
            Err(Error::NotASchubertProblem { sum: 6, expected: 8 })
        );
    }

    #[test]
    fn feasibility() {
        assert!(feasible_pair(&cond(7, 3, &[2, 5, 7]), &cond(7, 3, &[3, 5, 7])));
        assert!(feasible_pair(&cond(6, 2, &[3, 6]), &cond(6, 2, &[3, 6])));
        // |β|+|γ| = 6+2 > 4
        assert!(!feasible_pair(&cond(4, 2, &[1, 2]), &cond(4, 2, &[2, 4])));
        for n in 3..=7 {
            for k in 1..n {
                let all = all_conditions(n, k);
                for b in &all {
                    for g in &all {
                        assert_eq!(feasible_pair(b, g), feasible_pair(g, b));
                        if b.codim() + g.codim() > k * (n - k) {
                            assert!(!feasible_pair(b, g));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn small_lr_products() {
        // s1 · s1 = s2 + s11
        let p = lr_product(&[1], &[1], 2, 2).unwrap();
        assert_eq!(p.get(&vec![2, 0]), Some(&1));
        assert_eq!(p.get(&vec![1, 1]), Some(&1));
        assert_eq!(p.len(), 2);
        // s21 · s21 in a big box contains 2·s321
        let p = lr_product(&[2, 1], &[2, 1], 4, 4).unwrap();
        assert_eq!(p.get(&vec![3, 2, 1, 0]), Some(&2));
        assert_eq!(p.values().sum::<u64>(), 8);
        // truncation
        let p = lr_product(&[2], &[1], 1, 2).unwrap();
        assert_eq!(p.len(), 0);
    }

    #[test]
    fn lr_numbers() {
        let sp = SchubertProblem::from_lists(6, 2, &vec![vec![3, 6]; 4]).unwrap();
        assert_eq!(lr_number(&sp).unwrap(), 3);
        let g24 = SchubertProblem::from_lists(4, 2, &vec![vec![2, 4]; 4]).unwrap();
        assert_eq!(lr_number(&g24).unwrap(), 2);
        let point = SchubertProblem::from_lists(7, 3, &[vec![1, 2, 3]]).unwrap();
        assert_eq!(lr_number(&point).unwrap(), 1);
        let mut lists = vec![vec![6, 8, 9]; 6];
        lists.extend(vec![vec![4, 8, 9]; 4]);
        let big = SchubertProblem::from_lists(9, 3, &lists).unwrap();
        assert_eq!(lr_number(&big).unwrap(), 437);
    }

    #[test]
    fn lr_number_symmetric_under_reordering() {
        let lists = vec![
            vec![3, 6],
            vec![4, 6],
            vec![4, 6],
            vec![4, 5],
            vec![4, 6],
            vec![4, 6],
        ];
        let p = SchubertProblem::from_lists(6, 2, &lists).unwrap();
        let base = lr_number(&p).unwrap();
        for order in [[5, 4, 3, 2, 1, 0], [3, 0, 1, 5, 2, 4], [1, 3, 5, 0, 2, 4]] {
            assert_eq!(lr_number(&p.permuted(&order).unwrap()).unwrap(), base);
        }
    }

    #[test]
    fn enumerate_conditions() {
        assert_eq!(all_conditions(6, 2).len(), 15);
        assert_eq!(all_conditions(8, 4).len(), 70);
        assert_eq!(all_conditions(3, 1)[0], cond(3, 1, &[1]));
    }
}
