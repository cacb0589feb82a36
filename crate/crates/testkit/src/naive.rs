//! Term-by-term polynomial evaluation and finite-difference derivatives.

use num_complex::Complex64;

/// `Σ c · Π x_v^e`, with variables as plain indices.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NaivePoly {
    pub terms: Vec<(Complex64, Vec<(usize, u32)>)>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct NaiveSystem {
    pub n_vars: usize,
    pub polys: Vec<NaivePoly>,
}

impl NaivePoly {
    pub fn evaluate(&self, x: &[Complex64]) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (c, exps) in &self.terms {
            let mut term = *c;
            for &(v, e) in exps {
                for _ in 0..e {
                    term *= x[v];
                }
            }
            total += term;
        }
        total
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(_, e)| e.iter().map(|&(_, p)| p).sum())
            .max()
            .unwrap_or(0)
    }
}

impl NaiveSystem {
    pub fn evaluate(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n_vars);
        self.polys.iter().map(|p| p.evaluate(x)).collect()
    }

    /// Central differences with step `h` along each coordinate (real
    /// direction; the polynomials are holomorphic).
    pub fn jacobian_fd(&self, x: &[Complex64], h: f64) -> Vec<Vec<Complex64>> {
        let mut jac = vec![vec![Complex64::new(0.0, 0.0); self.n_vars]; self.polys.len()];
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        for v in 0..self.n_vars {
            xp[v] = x[v] + h;
            xm[v] = x[v] - h;
            let fp = self.evaluate(&xp);
            let fm = self.evaluate(&xm);
            for (row, (a, b)) in jac.iter_mut().zip(fp.iter().zip(&fm)) {
                row[v] = (a - b) / (2.0 * h);
            }
            xp[v] = x[v];
            xm[v] = x[v];
        }
        jac
    }

    /// Third mixed difference `∂³f/∂x_a∂x_b∂x_c` by a centered stencil of
    /// eight points.
    pub fn third_difference(&self, poly: usize, x: &[Complex64], idx: [usize; 3], h: f64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for mask in 0..8u32 {
            let mut y = x.to_vec();
            let mut sign = 1.0;
            for (bit, &v) in idx.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    y[v] += h;
                } else {
                    y[v] -= h;
                    sign = -sign;
                }
            }
            total += self.polys[poly].evaluate(&y) * sign;
        }
        total / (8.0 * h * h * h)
    }
}
