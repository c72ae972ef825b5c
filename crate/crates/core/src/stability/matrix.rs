use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::eigen::{hessenberg_eigenvalues, DenseMatrix};
use crate::error::{Error, Result};
use crate::lattice::ClassSystem;
use crate::scalar::Real;
use crate::stability::charpoly::{char_poly, CharPolyValue};

/// Inclusive window `[m, n]` of class offsets kept by a Galerkin truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub m: i64,
    pub n: i64,
}

impl Window {
    pub const fn new(m: i64, n: i64) -> Self {
        Window { m, n }
    }

    pub const fn symmetric(half_width: i64) -> Self {
        Window {
            m: -half_width,
            n: half_width,
        }
    }

    pub fn size(&self) -> usize {
        (self.n - self.m + 1).max(0) as usize
    }

    pub fn contains(&self, k: i64) -> bool {
        self.m <= k && k <= self.n
    }

    pub fn shifted(&self, by: i64) -> Self {
        Window::new(self.m + by, self.n + by)
    }

    /// Offsets `-n..=-m`, the window seen from the reversed class.
    pub fn reversed(&self) -> Self {
        Window::new(-self.n, -self.m)
    }
}

/// The tridiagonal truncation `A_m^n` of one class: row `k` has `+ρ_{k+1}`
/// in column `k+1` and `−ρ_{k−1}` in column `k−1`, zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedClassMatrix<T> {
    pub window: Window,
    pub class: ClassSystem<T>,
    /// `super_diag[i]` sits at `(i, i+1)` and equals `ρ_{m+i+1}`.
    pub super_diag: Vec<T>,
    /// `sub_diag[i]` sits at `(i+1, i)` and equals `−ρ_{m+i}`.
    pub sub_diag: Vec<T>,
}

pub fn build_truncated_matrix<T: Real>(
    class: &ClassSystem<T>,
    window: Window,
) -> Result<TruncatedClassMatrix<T>> {
    if window.m >= window.n || window.size() < 3 {
        return Err(Error::WindowTooSmall {
            m: window.m,
            n: window.n,
        });
    }
    let super_diag = (window.m..window.n).map(|k| class.rho(k + 1)).collect();
    let sub_diag = (window.m..window.n).map(|k| -class.rho(k)).collect();
    Ok(TruncatedClassMatrix {
        window,
        class: class.clone(),
        super_diag,
        sub_diag,
    })
}

impl<T: Real> TruncatedClassMatrix<T> {
    pub fn size(&self) -> usize {
        self.window.size()
    }

    /// Entry at row offset `row` and column offset `col`, both labelled `m..=n`.
    pub fn entry(&self, row: i64, col: i64) -> T {
        if !self.window.contains(row) || !self.window.contains(col) {
            return T::zero();
        }
        let i = (row - self.window.m) as usize;
        if col == row + 1 {
            self.super_diag[i]
        } else if col + 1 == row {
            self.sub_diag[i - 1]
        } else {
            T::zero()
        }
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let mut d = DenseMatrix::zeros(self.size());
        for i in 0..self.size() - 1 {
            d.set(i, i + 1, self.super_diag[i]);
            d.set(i + 1, i, self.sub_diag[i]);
        }
        d
    }

    /// Eigenvalues of `alpha · A_m^n`.
    pub fn eigenvalues(&self, alpha: T) -> Result<Vec<Complex<T>>> {
        let n = self.size();
        if alpha == T::zero() {
            return Ok(vec![Complex::new(T::zero(), T::zero()); n]);
        }
        let mut out = Vec::with_capacity(n);
        // A vanishing product b_i c_i makes the matrix block triangular; the
        // spectrum is the union of the diagonal blocks' spectra.
        let mut start = 0;
        for i in 0..=n - 1 {
            let split = i == n - 1 || self.super_diag[i] * self.sub_diag[i] == T::zero();
            if split {
                out.extend(self.block_eigenvalues(start, i)?);
                start = i + 1;
            }
        }
        Ok(out.into_iter().map(|z| z * alpha).collect())
    }

    /// Block rows/cols `lo..=hi`, all off-diagonal products nonzero. The
    /// diagonal similarity giving `|b_i| = |c_i|` is applied directly from
    /// the products, so no cumulative scale can overflow.
    fn block_eigenvalues(&self, lo: usize, hi: usize) -> Result<Vec<Complex<T>>> {
        let size = hi - lo + 1;
        if size == 1 {
            return Ok(vec![Complex::new(T::zero(), T::zero())]);
        }
        let mut h = DenseMatrix::zeros(size);
        for i in 0..size - 1 {
            let b = self.super_diag[lo + i];
            let c = self.sub_diag[lo + i];
            let mag = (b * c).abs().sqrt();
            h.set(i, i + 1, mag.copysign(b));
            h.set(i + 1, i, mag.copysign(c));
        }
        hessenberg_eigenvalues(h).map_err(|e| match e {
            Error::NoConvergence { .. } => Error::NoConvergence {
                size: self.size(),
                window: Some((self.window.m, self.window.n)),
            },
            other => other,
        })
    }

    /// `det(xI − A_m^n)` via the three-term recursion.
    pub fn char_poly(&self, x: T) -> CharPolyValue<T> {
        char_poly(self.window, x, |k| self.class.rho(k))
    }
}
