//! Sparse multivariate polynomial systems with complex coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::arith::DdComplex;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Coefficients below this magnitude are dropped after combining like terms.
pub const COEFF_DROP: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Sorted `(variable, exponent)` pairs with exponents ≥ 1.
pub type Exponents = Vec<(u32, u32)>;

#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub coeff: Complex64,
    pub exponents: Exponents,
}

impl Monomial {
    pub fn degree(&self) -> usize {
        self.exponents.iter().map(|&(_, e)| e as usize).sum()
    }

    fn value(&self, x: &[Complex64]) -> Complex64 {
        self.exponents
            .iter()
            .fold(self.coeff, |acc, &(v, e)| acc * pow(x[v as usize], e))
    }
}

#[inline]
fn pow(z: Complex64, e: u32) -> Complex64 {
    match e {
        1 => z,
        2 => z * z,
        _ => z.powu(e),
    }
}

/// A polynomial as a canonical list of monomials (ordered by exponent
/// vector, like terms combined, no tiny coefficients).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Polynomial {
    terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_map(BTreeMap::from([(Vec::new(), c)]))
    }

    /// `c₀ + Σ c_v x_v`.
    pub fn affine(constant: Complex64, linear: &[(u32, Complex64)]) -> Self {
        let mut map = BTreeMap::new();
        map.insert(Vec::new(), constant);
        for &(v, c) in linear {
            *map.entry(vec![(v, 1)]).or_insert(ZERO) += c;
        }
        Self::from_map(map)
    }

    pub fn from_map(map: BTreeMap<Exponents, Complex64>) -> Self {
        let terms = map
            .into_iter()
            .filter(|(_, c)| c.norm() >= COEFF_DROP)
            .map(|(exponents, coeff)| Monomial { coeff, exponents })
            .collect();
        Self { terms }
    }

    /// Keeps terms exactly as given; used when reading serialized systems.
    pub fn from_terms(terms: Vec<Monomial>) -> Self {
        Self { terms }
    }

    fn to_map(&self) -> BTreeMap<Exponents, Complex64> {
        let mut map = BTreeMap::new();
        for t in &self.terms {
            *map.entry(t.exponents.clone()).or_insert(ZERO) += t.coeff;
        }
        map
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn max_var(&self) -> Option<u32> {
        self.terms
            .iter()
            .flat_map(|t| t.exponents.iter().map(|&(v, _)| v))
            .max()
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut map = self.to_map();
        for t in &other.terms {
            *map.entry(t.exponents.clone()).or_insert(ZERO) += t.coeff;
        }
        Self::from_map(map)
    }

    pub fn scale(&self, s: Complex64) -> Polynomial {
        Self::from_map(self.to_map().into_iter().map(|(e, c)| (e, c * s)).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut map: BTreeMap<Exponents, Complex64> = BTreeMap::new();
        for a in &self.terms {
            for b in &other.terms {
                *map.entry(merge_exponents(&a.exponents, &b.exponents))
                    .or_insert(ZERO) += a.coeff * b.coeff;
            }
        }
        Self::from_map(map)
    }

    pub fn evaluate(&self, x: &[Complex64]) -> Complex64 {
        self.terms.iter().map(|t| t.value(x)).sum()
    }

    fn evaluate_accurate(&self, x: &[DdComplex]) -> DdComplex {
        let mut acc = DdComplex::ZERO;
        for t in &self.terms {
            let mut term = DdComplex::from_c64(t.coeff);
            for &(v, e) in &t.exponents {
                for _ in 0..e {
                    term = term * x[v as usize];
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// Adds `∂f/∂x_v` into `row` (length `n_vars`).
    fn accumulate_gradient(&self, x: &[Complex64], row: &mut [Complex64]) {
        for t in &self.terms {
            for (idx, &(v, e)) in t.exponents.iter().enumerate() {
                let mut d = t.coeff * e as f64;
                if e > 1 {
                    d *= pow(x[v as usize], e - 1);
                }
                for (other, &(w, f)) in t.exponents.iter().enumerate() {
                    if other != idx {
                        d *= pow(x[w as usize], f);
                    }
                }
                row[v as usize] += d;
            }
        }
    }

    /// Nonzero entries of the order-`m` derivative tensor at `x`, keyed by
    /// sorted variable multisets: `∂ᵐf / ∂x_{j₁}⋯∂x_{jₘ}`.
    pub fn derivative_tensor(&self, order: usize, x: &[Complex64]) -> BTreeMap<Vec<u32>, Complex64> {
        let mut out = BTreeMap::new();
        for t in &self.terms {
            if t.degree() < order {
                continue;
            }
            let mut taken = vec![0u32; t.exponents.len()];
            sub_multisets(t, order, 0, &mut taken, x, &mut out);
        }
        out.retain(|_, c| *c != ZERO);
        out
    }
}

fn sub_multisets(
    t: &Monomial,
    remaining: usize,
    pos: usize,
    taken: &mut Vec<u32>,
    x: &[Complex64],
    out: &mut BTreeMap<Vec<u32>, Complex64>,
) {
    if pos == t.exponents.len() {
        if remaining > 0 {
            return;
        }
        let mut key = Vec::new();
        let mut value = t.coeff;
        for (&(v, e), &s) in t.exponents.iter().zip(taken.iter()) {
            for j in 0..s {
                key.push(v);
                value *= (e - j) as f64;
            }
            if e > s {
                value *= pow(x[v as usize], e - s);
            }
        }
        *out.entry(key).or_insert(ZERO) += value;
        return;
    }
    let e = t.exponents[pos].1 as usize;
    for s in 0..=e.min(remaining) {
        taken[pos] = s as u32;
        sub_multisets(t, remaining - s, pos + 1, taken, x, out);
    }
    taken[pos] = 0;
}

fn merge_exponents(a: &[(u32, u32)], b: &[(u32, u32)]) -> Exponents {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialSystem {
    n_vars: usize,
    polys: Vec<Polynomial>,
    degrees: Vec<usize>,
    labels: Vec<String>,
}

/// `(n_vars, n_polys, degree histogram)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemShape {
    pub n_vars: usize,
    pub n_polys: usize,
    pub degrees: BTreeMap<usize, usize>,
}

impl fmt::Display for SystemShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hist: Vec<String> = self.degrees.iter().map(|(d, c)| format!("{d}:{c}")).collect();
        write!(f, "({}, {}, {{{}}})", self.n_vars, self.n_polys, hist.join(", "))
    }
}

/// Second derivatives of a system: constant Hessians when every polynomial
/// has degree ≤ 2, otherwise the highest degree, with tensors available
/// pointwise through [`PolynomialSystem::derivative_tensor`].
#[derive(Clone, Debug, PartialEq)]
pub enum SecondDerivatives {
    Constant(Vec<CMatrix>),
    PointDependent { max_degree: usize },
}

impl PolynomialSystem {
    pub fn new(n_vars: usize, polys: Vec<Polynomial>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != polys.len() {
            return Err(Error::InvalidInput(format!(
                "{} labels for {} polynomials",
                labels.len(),
                polys.len()
            )));
        }
        for (i, p) in polys.iter().enumerate() {
            if let Some(v) = p.max_var() {
                if v as usize >= n_vars {
                    return Err(Error::InvalidInput(format!(
                        "polynomial {i} references x{v} but n_vars = {n_vars}"
                    )));
                }
            }
            if p.terms.iter().any(|t| t.exponents.iter().any(|&(_, e)| e == 0)) {
                return Err(Error::InvalidInput(format!("polynomial {i} has a zero exponent")));
            }
        }
        let degrees = polys.iter().map(Polynomial::degree).collect();
        Ok(Self {
            n_vars,
            polys,
            degrees,
            labels,
        })
    }

    pub fn empty(n_vars: usize) -> Self {
        Self {
            n_vars,
            polys: Vec::new(),
            degrees: Vec::new(),
            labels: Vec::new(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_polys(&self) -> usize {
        self.polys.len()
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_square(&self) -> bool {
        self.n_vars == self.polys.len()
    }

    pub fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                n_polys: self.polys.len(),
                n_vars: self.n_vars,
            })
        }
    }

    pub fn has_real_coefficients(&self) -> bool {
        self.polys
            .iter()
            .all(|p| p.terms.iter().all(|t| t.coeff.im == 0.0))
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn push(&mut self, poly: Polynomial, label: impl Into<String>) {
        assert!(poly.max_var().is_none_or(|v| (v as usize) < self.n_vars));
        self.degrees.push(poly.degree());
        self.polys.push(poly);
        self.labels.push(label.into());
    }

    /// Appends the polynomials of `other`, which must use the same variables.
    pub fn extend(&mut self, other: PolynomialSystem) {
        assert_eq!(self.n_vars, other.n_vars);
        self.polys.extend(other.polys);
        self.degrees.extend(other.degrees);
        self.labels.extend(other.labels);
    }

    /// Term-wise sum of two systems of equal shape.
    pub fn add(&self, other: &PolynomialSystem) -> Result<PolynomialSystem> {
        if self.n_vars != other.n_vars || self.n_polys() != other.n_polys() {
            return Err(Error::Shape("adding systems of different shapes".into()));
        }
        let polys = self
            .polys
            .iter()
            .zip(&other.polys)
            .map(|(a, b)| a.add(b))
            .collect();
        PolynomialSystem::new(self.n_vars, polys, self.labels.clone())
    }

    /// Every polynomial multiplied by `s`.
    pub fn scale(&self, s: Complex64) -> PolynomialSystem {
        let polys = self.polys.iter().map(|p| p.scale(s)).collect();
        PolynomialSystem::new(self.n_vars, polys, self.labels.clone()).expect("same variables")
    }

    fn check_len(&self, x: &[Complex64]) -> Result<()> {
        if x.len() != self.n_vars {
            return Err(Error::Shape(format!(
                "point of length {} for {} variables",
                x.len(),
                self.n_vars
            )));
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(x)?;
        Ok(self.polys.iter().map(|p| p.evaluate(x)).collect())
    }

    /// `f(x)` accumulated in double-double arithmetic, then rounded.
    pub fn evaluate_accurate(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(x)?;
        let xd: Vec<DdComplex> = x.iter().map(|&z| DdComplex::from_c64(z)).collect();
        Ok(self
            .polys
            .iter()
            .map(|p| p.evaluate_accurate(&xd).to_c64())
            .collect())
    }

    pub fn jacobian(&self, x: &[Complex64]) -> Result<CMatrix> {
        self.check_len(x)?;
        let mut jac = CMatrix::zeros(self.polys.len(), self.n_vars);
        for (i, p) in self.polys.iter().enumerate() {
            p.accumulate_gradient(x, jac.row_mut(i));
        }
        Ok(jac)
    }

    pub fn second_derivatives(&self) -> SecondDerivatives {
        if self.max_degree() > 2 {
            return SecondDerivatives::PointDependent {
                max_degree: self.max_degree(),
            };
        }
        let origin = vec![ZERO; self.n_vars];
        let hessians = self
            .polys
            .iter()
            .map(|p| {
                let mut h = CMatrix::zeros(self.n_vars, self.n_vars);
                for (key, val) in p.derivative_tensor(2, &origin) {
                    let (a, b) = (key[0] as usize, key[1] as usize);
                    h[(a, b)] = val;
                    h[(b, a)] = val;
                }
                h
            })
            .collect();
        SecondDerivatives::Constant(hessians)
    }

    /// Order-`m` derivative tensor of polynomial `poly` at `x`.
    pub fn derivative_tensor(
        &self,
        poly: usize,
        order: usize,
        x: &[Complex64],
    ) -> Result<BTreeMap<Vec<u32>, Complex64>> {
        self.check_len(x)?;
        Ok(self.polys[poly].derivative_tensor(order, x))
    }

    pub fn shape(&self) -> SystemShape {
        let mut degrees = BTreeMap::new();
        for &d in &self.degrees {
            *degrees.entry(d).or_insert(0) += 1;
        }
        SystemShape {
            n_vars: self.n_vars,
            n_polys: self.polys.len(),
            degrees,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

// JSON: {"n_vars": V, "polys": [[[re, im, {"var": exp, …}], …], …], "labels": […]}

struct ExponentMap<'a>(&'a [(u32, u32)]);

impl Serialize for ExponentMap<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for &(v, e) in self.0 {
            map.serialize_entry(&v.to_string(), &e)?;
        }
        map.end()
    }
}

struct OwnedExponents(Exponents);

impl<'de> Deserialize<'de> for OwnedExponents {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = OwnedExponents;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from variable index to exponent")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut out: Exponents = Vec::new();
                while let Some((key, exp)) = access.next_entry::<String, u32>()? {
                    let var: u32 = key
                        .parse()
                        .map_err(|_| de::Error::custom(format!("bad variable key {key:?}")))?;
                    if exp == 0 {
                        return Err(de::Error::custom("exponent must be ≥ 1"));
                    }
                    out.push((var, exp));
                }
                out.sort_unstable();
                if out.windows(2).any(|w| w[0].0 == w[1].0) {
                    return Err(de::Error::custom("repeated variable in monomial"));
                }
                Ok(OwnedExponents(out))
            }
        }
        deserializer.deserialize_map(V)
    }
}

#[derive(Serialize)]
struct SystemOut<'a> {
    n_vars: usize,
    polys: Vec<Vec<(f64, f64, ExponentMap<'a>)>>,
    labels: &'a [String],
}

#[derive(Deserialize)]
struct SystemIn {
    n_vars: usize,
    polys: Vec<Vec<(f64, f64, OwnedExponents)>>,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

impl Serialize for PolynomialSystem {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SystemOut {
            n_vars: self.n_vars,
            polys: self
                .polys
                .iter()
                .map(|p| {
                    p.terms
                        .iter()
                        .map(|t| (t.coeff.re, t.coeff.im, ExponentMap(&t.exponents)))
                        .collect()
                })
                .collect(),
            labels: &self.labels,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PolynomialSystem {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = SystemIn::deserialize(deserializer)?;
        let polys: Vec<Polynomial> = raw
            .polys
            .into_iter()
            .map(|terms| {
                Polynomial::from_terms(
                    terms
                        .into_iter()
                        .map(|(re, im, e)| Monomial {
                            coeff: Complex64::new(re, im),
                            exponents: e.0,
                        })
                        .collect(),
                )
            })
            .collect();
        let labels = raw
            .labels
            .unwrap_or_else(|| (0..polys.len()).map(|i| format!("f{i}")).collect());
        PolynomialSystem::new(raw.n_vars, polys, labels).map_err(de::Error::custom)
    }
}
