//! Newton's method in fixed-point arithmetic with 340 fractional bits
//! (about 100 decimal digits), on big integers.
//!
//! Double-precision inputs convert exactly, so a root computed here is a
//! reference against which double-precision errors can be measured.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::naive::NaiveSystem;

pub const FRAC_BITS: usize = 340;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixed(BigInt);

impl Fixed {
    pub fn zero() -> Self {
        Fixed(BigInt::zero())
    }

    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite input {x}");
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        let m = BigInt::from(mant) * sign;
        let shift = e + FRAC_BITS as i64;
        Fixed(if shift >= 0 {
            m << shift as usize
        } else {
            m >> (-shift) as usize
        })
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.0.bits() as i64;
        let drop = (bits - 64).max(0);
        let top = (&self.0 >> drop as usize).to_f64().unwrap_or(f64::NAN);
        top * 2f64.powi((drop - FRAC_BITS as i64) as i32)
    }

    fn add(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 + &o.0)
    }

    fn sub(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 - &o.0)
    }

    fn mul(&self, o: &Fixed) -> Fixed {
        Fixed((&self.0 * &o.0) >> FRAC_BITS)
    }

    fn div(&self, o: &Fixed) -> Fixed {
        Fixed((&self.0 << FRAC_BITS) / &o.0)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn abs(&self) -> Fixed {
        Fixed(self.0.abs())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigComplex {
    pub re: Fixed,
    pub im: Fixed,
}

impl BigComplex {
    pub fn zero() -> Self {
        Self {
            re: Fixed::zero(),
            im: Fixed::zero(),
        }
    }

    pub fn from_c64(z: Complex64) -> Self {
        Self {
            re: Fixed::from_f64(z.re),
            im: Fixed::from_f64(z.im),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    fn add(&self, o: &Self) -> Self {
        Self {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    fn sub(&self, o: &Self) -> Self {
        Self {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    fn mul(&self, o: &Self) -> Self {
        Self {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    fn norm_sqr(&self) -> Fixed {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    fn div(&self, o: &Self) -> Option<Self> {
        let d = o.norm_sqr();
        if d.is_zero() {
            return None;
        }
        let conj = Self {
            re: o.re.clone(),
            im: Fixed(-o.im.0.clone()),
        };
        let num = self.mul(&conj);
        Some(Self {
            re: num.re.div(&d),
            im: num.im.div(&d),
        })
    }

    fn magnitude(&self) -> Fixed {
        self.re.abs().add(&self.im.abs())
    }
}

fn pow(z: &BigComplex, e: u32) -> BigComplex {
    let mut out = BigComplex::from_c64(Complex64::new(1.0, 0.0));
    for _ in 0..e {
        out = out.mul(z);
    }
    out
}

fn evaluate(sys: &NaiveSystem, x: &[BigComplex]) -> Vec<BigComplex> {
    sys.polys
        .iter()
        .map(|p| {
            p.terms.iter().fold(BigComplex::zero(), |acc, (c, exps)| {
                let term = exps
                    .iter()
                    .fold(BigComplex::from_c64(*c), |t, &(v, e)| t.mul(&pow(&x[v], e)));
                acc.add(&term)
            })
        })
        .collect()
}

fn jacobian(sys: &NaiveSystem, x: &[BigComplex]) -> Vec<Vec<BigComplex>> {
    sys.polys
        .iter()
        .map(|p| {
            let mut row = vec![BigComplex::zero(); sys.n_vars];
            for (c, exps) in &p.terms {
                for (i, &(v, e)) in exps.iter().enumerate() {
                    let mut d = BigComplex::from_c64(*c * e as f64);
                    d = d.mul(&pow(&x[v], e - 1));
                    for (j, &(w, f)) in exps.iter().enumerate() {
                        if j != i {
                            d = d.mul(&pow(&x[w], f));
                        }
                    }
                    row[v] = row[v].add(&d);
                }
            }
            row
        })
        .collect()
}

/// Gaussian elimination with partial pivoting; `None` on an exactly zero pivot.
fn solve(mut a: Vec<Vec<BigComplex>>, mut b: Vec<BigComplex>) -> Option<Vec<BigComplex>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].magnitude().0.cmp(&a[j][col].magnitude().0))?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        if a[col][col].magnitude().is_zero() {
            return None;
        }
        for row in col + 1..n {
            let factor = a[row][col].div(&a[col][col])?;
            if factor.magnitude().is_zero() {
                continue;
            }
            let (upper, lower) = a.split_at_mut(row);
            for (target, pivot_entry) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *target = target.sub(&factor.mul(pivot_entry));
            }
            let t = factor.mul(&b[col]);
            b[row] = b[row].sub(&t);
        }
    }
    let mut x = vec![BigComplex::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in row + 1..n {
            acc = acc.sub(&a[row][k].mul(&x[k]));
        }
        x[row] = acc.div(&a[row][row])?;
    }
    Some(x)
}

/// `iters` Newton steps from `x0` in extended precision.
pub fn newton_extended(sys: &NaiveSystem, x0: &[Complex64], iters: usize) -> Option<Vec<BigComplex>> {
    assert_eq!(sys.polys.len(), sys.n_vars, "square systems only");
    let mut x: Vec<BigComplex> = x0.iter().map(|&z| BigComplex::from_c64(z)).collect();
    for _ in 0..iters {
        let dx = solve(jacobian(sys, &x), evaluate(sys, &x))?;
        x = x.iter().zip(&dx).map(|(a, d)| a.sub(d)).collect();
    }
    Some(x)
}

/// `‖root − x‖₂`, with the difference formed exactly.
pub fn distance(root: &[BigComplex], x: &[Complex64]) -> f64 {
    root.iter()
        .zip(x)
        .map(|(r, &z)| r.sub(&BigComplex::from_c64(z)).to_c64().norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `‖f(root)‖₂` evaluated in extended precision.
pub fn residual_norm(sys: &NaiveSystem, root: &[BigComplex]) -> f64 {
    evaluate(sys, root)
        .iter()
        .map(|v| v.to_c64().norm_sqr())
        .sum::<f64>()
        .sqrt()
}
