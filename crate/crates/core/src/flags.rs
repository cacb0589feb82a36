//! Complete flags in `Cⁿ`, stored as an `n × n` matrix whose first `ℓ` rows
//! span `F_ℓ`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, intersect_rowspaces, lu_decompose, vec_norm, CMatrix};
use crate::rng::SeededRng;

const MAX_ATTEMPTS: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct Flag {
    matrix: CMatrix,
    real: bool,
}

impl Flag {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() < 2 {
            return Err(Error::Shape(format!(
                "flag matrix must be n×n with n ≥ 2, got {}×{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if let Some(pivot) = lu_decompose(&matrix)?.singular_pivot() {
            return Err(Error::Singular { pivot });
        }
        let real = matrix.is_real();
        Ok(Self { matrix, real })
    }

    /// Draws entries from `rng` (real: uniform on [−1,1); complex: uniform on
    /// the unit square), redrawing on the improbable singular outcome.
    pub fn random(n: usize, rng: &mut SeededRng, real: bool) -> Result<Self> {
        for _ in 0..MAX_ATTEMPTS {
            let data = (0..n * n)
                .map(|_| {
                    if real {
                        Complex64::new(rng.symmetric(), 0.0)
                    } else {
                        rng.complex_square()
                    }
                })
                .collect();
            if let Ok(flag) = Flag::new(CMatrix::from_vec(n, n, data)?) {
                return Ok(flag);
            }
        }
        Err(Error::FlagGeneration(MAX_ATTEMPTS))
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    /// Basis of `F_ℓ` as the first `ℓ` rows.
    pub fn subspace(&self, dim: usize) -> CMatrix {
        self.matrix.top_rows(dim)
    }
}

/// `E_•`: `E_ℓ = ⟨e₁,…,e_ℓ⟩`.
pub fn coordinate_flag(n: usize) -> Flag {
    Flag {
        matrix: CMatrix::identity(n),
        real: true,
    }
}

/// `E'_•`: `E'_ℓ = ⟨e_n,…,e_{n+1−ℓ}⟩`.
pub fn opposite_flag(n: usize) -> Flag {
    let id = CMatrix::identity(n);
    Flag {
        matrix: id.select_rows((0..n).rev()),
        real: true,
    }
}

pub fn random_flag(n: usize, seed: u64, real: bool) -> Result<Flag> {
    Flag::random(n, &mut SeededRng::new(seed), real)
}

/// `F^⊥`: rows of `(F⁻¹)ᵀ` in reverse order, so that the first `ℓ` rows span
/// the annihilator of `F_{n−ℓ}`.
pub fn dual_flag(f: &Flag) -> Result<Flag> {
    let n = f.n();
    let it = linalg::inverse_transpose(&f.matrix)?;
    Ok(Flag {
        matrix: it.select_rows((0..n).rev()),
        real: f.real,
    })
}

/// The change of basis `g` with `F = E·g` and `F' = E'·g`: row `i` spans
/// `F_i ∩ F'_{n+1−i}`, normalized to unit length.
pub fn general_position_transform(f: &Flag, fp: &Flag) -> Result<CMatrix> {
    let n = f.n();
    if fp.n() != n {
        return Err(Error::Shape(format!("flags on C^{n} and C^{}", fp.n())));
    }
    let mut g = CMatrix::zeros(n, n);
    for i in 1..=n {
        let line = intersect_rowspaces(&f.subspace(i), &fp.subspace(n + 1 - i))?;
        if line.rows() != 1 {
            return Err(Error::GeneralPosition {
                index: i,
                complement: n + 1 - i,
                dimension: line.rows(),
            });
        }
        let norm = vec_norm(line.row(0));
        for (dst, src) in g.row_mut(i - 1).iter_mut().zip(line.row(0)) {
            *dst = src / norm;
        }
    }
    Ok(g)
}
