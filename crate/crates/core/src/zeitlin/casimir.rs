//! Clock-and-shift representation of the sine algebra and the Casimirs
//! `C_n = Tr(Wⁿ)/(2N+1)`, `W = Σ ω_k T_k`.
//!
//! `T_k` is the monomial matrix with `T_k[r][c] = q^{2k₁r − k₁k₂}` where
//! `r ≡ c + k₂ (mod 2N+1)` and `q = e^{iε}`, i.e. `q^{−k₁k₂} g^{k₁} h^{k₂}`
//! with clock `g = diag(q^{2j})` and shift `h e_j = e_{j+1}`. Then
//! `T_k† = T_{−k}`, `T_k` depends on `k` only modulo `2N+1`, and
//! `[T_k, T_l] = 2i sin(ε k×l) T_{k+l}`.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::ModeIndex;
use crate::scalar::{int, lit, Real};
use crate::zeitlin::truncation::{TruncatedState, TruncationSpec};

/// Pairs checked by [`ClockShift::new`].
pub const COMMUTATOR_CHECK_PAIRS: usize = 50;
const COMMUTATOR_CHECK_SEED: u64 = 0x5eed;

#[derive(Debug, Clone)]
pub struct ClockShift<T> {
    trunc: TruncationSpec<T>,
    /// `q^j`, `j = 0..2N`.
    powers: Vec<Complex<T>>,
    /// Constant `c` in `[T_k, T_l] = c sin(ε k×l) T_{k+l}`.
    pub commutator_constant: Complex<T>,
}

type Dense<T> = Vec<Complex<T>>;

impl<T: Real> ClockShift<T> {
    /// Builds the representation and checks the commutation relations on
    /// [`COMMUTATOR_CHECK_PAIRS`] pseudo-random pairs.
    pub fn new(trunc: &TruncationSpec<T>) -> Result<Self> {
        let m = trunc.modulus();
        let powers = (0..m)
            .map(|j| Complex::from_polar(T::one(), trunc.epsilon * int::<T>(j)))
            .collect();
        let mut rep = ClockShift {
            trunc: *trunc,
            powers,
            commutator_constant: Complex::new(T::zero(), T::zero()),
        };
        rep.commutator_constant = rep.validate_commutators(COMMUTATOR_CHECK_PAIRS, COMMUTATOR_CHECK_SEED)?;
        Ok(rep)
    }

    pub fn dim(&self) -> usize {
        self.trunc.modulus() as usize
    }

    fn phase(&self, k: ModeIndex, row: i64) -> Complex<T> {
        let m = self.trunc.modulus();
        self.powers[(2 * k.k1 * row - k.k1 * k.k2).rem_euclid(m) as usize]
    }

    /// Column holding the nonzero entry of row `row` of `T_k`.
    fn column(&self, k: ModeIndex, row: i64) -> i64 {
        (row - k.k2).rem_euclid(self.trunc.modulus())
    }

    /// Dense row-major `T_k`.
    pub fn generator(&self, k: ModeIndex) -> Dense<T> {
        let d = self.dim();
        let mut out = vec![Complex::new(T::zero(), T::zero()); d * d];
        for r in 0..d as i64 {
            let c = self.column(k, r);
            out[r as usize * d + c as usize] = self.phase(k, r);
        }
        out
    }

    /// `W = Σ_k ω_k T_k`, Hermitian for states satisfying reality.
    pub fn embed(&self, state: &TruncatedState<T>) -> Dense<T> {
        let d = self.dim();
        let mut w = vec![Complex::new(T::zero(), T::zero()); d * d];
        for k in self.trunc.modes() {
            let v = state.omega[self.trunc.index(k)];
            if v.norm_sqr() == T::zero() {
                continue;
            }
            for r in 0..d as i64 {
                let c = self.column(k, r);
                let idx = r as usize * d + c as usize;
                w[idx] = w[idx] + v * self.phase(k, r);
            }
        }
        w
    }

    /// Checks `[T_k, T_l] = c sin(ε k×l) T_{k+l}` for one global `c` and
    /// returns it.
    pub fn validate_commutators(&self, pairs: usize, seed: u64) -> Result<Complex<T>> {
        let n = self.trunc.n as i64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tol = lit::<T>(1e-10).max(T::epsilon() * lit::<T>(1e3));
        let mut constant: Option<Complex<T>> = None;
        let mut checked = 0;
        while checked < pairs {
            let mut draw = || ModeIndex::new(rng.gen_range(-n..=n), rng.gen_range(-n..=n));
            let (k, l) = (draw(), draw());
            checked += 1;
            let tk = self.generator(k);
            let tl = self.generator(l);
            let comm: Dense<T> = matmul(&tk, &tl, self.dim())
                .iter()
                .zip(matmul(&tl, &tk, self.dim()))
                .map(|(a, b)| *a - b)
                .collect();
            let s = (self.trunc.epsilon * int::<T>(self.trunc.cross_reduced(k, l))).sin();
            let target = self.generator(self.trunc.wrap(k + l));
            if s.abs() < lit::<T>(1e-3) {
                if s == T::zero() && max_abs(&comm) > tol {
                    return Err(Error::Representation(format!(
                        "[T_{k}, T_{l}] should vanish but has entries of size {}",
                        max_abs(&comm)
                    )));
                }
                continue;
            }
            // The target is monomial; read the ratio off any nonzero entry.
            let idx = target.iter().position(|z| z.norm_sqr() > T::zero()).unwrap();
            let c = comm[idx] / (target[idx] * s);
            let c = *constant.get_or_insert(c);
            let residual = comm
                .iter()
                .zip(&target)
                .fold(T::zero(), |m, (a, b)| m.max((*a - *b * (c * s)).norm()));
            if residual > tol {
                return Err(Error::Representation(format!(
                    "[T_{k}, T_{l}] differs from c sin(ε k×l) T_(k+l) by {residual}"
                )));
            }
        }
        constant.ok_or_else(|| Error::Representation("no pair with nonzero bracket sampled".into()))
    }

    /// `C_n = Tr(Wⁿ)/(2N+1)` for `n = 2..=max_n`.
    pub fn casimirs(&self, state: &TruncatedState<T>, max_n: usize) -> Result<Vec<T>> {
        let d = self.dim();
        if max_n < 2 || max_n > d {
            return Err(Error::InvalidParameter(format!(
                "Casimir order must lie in [2, {d}], got {max_n}"
            )));
        }
        let w = self.embed(state);
        let scale = T::one() / int::<T>(d as i64);
        let tol = lit::<T>(1e-10).max(T::epsilon() * lit::<T>(1e3));
        let c2 = trace_of_product(&w, &w, d).re * scale;
        let mut out = Vec::with_capacity(max_n - 1);
        let mut power = w.clone();
        for n in 2..=max_n {
            // Tr(W^n) = Tr(W^{n-1} W) without forming W^n.
            let tr = trace_of_product(&power, &w, d) * scale;
            let magnitude = c2.abs().powf(int::<T>(n as i64) / lit::<T>(2.0)).max(T::one());
            if tr.im.abs() > tol * magnitude {
                return Err(Error::Representation(format!(
                    "C_{n} has imaginary part {}; the state violates reality",
                    tr.im
                )));
            }
            out.push(tr.re);
            if n < max_n {
                power = matmul(&power, &w, d);
            }
        }
        Ok(out)
    }
}

/// `C_n` of one state; builds and validates the representation on each call.
pub fn casimir<T: Real>(state: &TruncatedState<T>, n: usize, trunc: &TruncationSpec<T>) -> Result<T> {
    let rep = ClockShift::new(trunc)?;
    Ok(*rep.casimirs(state, n)?.last().unwrap())
}

fn matmul<T: Real>(a: &[Complex<T>], b: &[Complex<T>], d: usize) -> Dense<T> {
    let mut out = vec![Complex::new(T::zero(), T::zero()); d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = a[i * d + k];
            if aik.norm_sqr() == T::zero() {
                continue;
            }
            for j in 0..d {
                out[i * d + j] = out[i * d + j] + aik * b[k * d + j];
            }
        }
    }
    out
}

fn trace_of_product<T: Real>(a: &[Complex<T>], b: &[Complex<T>], d: usize) -> Complex<T> {
    let mut tr = Complex::new(T::zero(), T::zero());
    for i in 0..d {
        for k in 0..d {
            tr = tr + a[i * d + k] * b[k * d + i];
        }
    }
    tr
}

fn max_abs<T: Real>(a: &[Complex<T>]) -> T {
    a.iter().fold(T::zero(), |m, z| m.max(z.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::DomainSpec;

    #[test]
    fn commutator_constant_is_two_i() {
        for n in [2, 3, 8] {
            let t = TruncationSpec::new(n, 1.0).unwrap();
            let rep = ClockShift::new(&t).unwrap();
            assert!((rep.commutator_constant - Complex::new(0.0, 2.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn generators_are_unitary_and_adjoint_pairs() {
        let t = TruncationSpec::<f64>::new(3, 1.0).unwrap();
        let rep = ClockShift::new(&t).unwrap();
        let d = rep.dim();
        for k in t.modes() {
            let a = rep.generator(k);
            let b = rep.generator(-k);
            for r in 0..d {
                for c in 0..d {
                    assert!((a[r * d + c].conj() - b[c * d + r]).norm() < 1e-14);
                }
            }
            // Tr(T_k T_l) = (2N+1) δ_{k+l,0}
            let tr = trace_of_product(&a, &b, d);
            assert!((tr - Complex::new(d as f64, 0.0)).norm() < 1e-12);
            assert!(trace_of_product(&a, &a, d).norm() < 1e-12);
        }
    }

    #[test]
    fn casimir_examples() {
        let t = TruncationSpec::<f64>::new(3, 1.0).unwrap();
        let zero = TruncatedState::zeros(&t);
        assert_eq!(casimir(&zero, 4, &t).unwrap(), 0.0);
        let gamma = 1.3;
        let spec = DomainSpec::new(1.0, ModeIndex::new(2, 1), gamma).unwrap();
        let eq = TruncatedState::equilibrium(&spec, &t).unwrap();
        assert!((casimir(&eq, 2, &t).unwrap() - 2.0 * gamma * gamma).abs() < 1e-12);
        // C₂ is Σ|ω_k|² for any state.
        let r = TruncatedState::random(&t, 1.0, 4);
        let direct: f64 = r.omega.iter().map(|z| z.norm_sqr()).sum();
        assert!((casimir(&r, 2, &t).unwrap() - direct).abs() < 1e-12);
        assert!(casimir(&r, 1, &t).is_err());
        assert!(casimir(&r, 8, &t).is_err());
    }

    #[test]
    fn casimirs_are_conserved_by_the_vector_field() {
        // d/dt C_n = 0 along the exact flow: check with a centred difference.
        let t = TruncationSpec::<f64>::new(3, 1.7).unwrap();
        let rep = ClockShift::new(&t).unwrap();
        let s = TruncatedState::random(&t, 1.0, 21);
        let f = crate::zeitlin::truncation::vector_field(&s, &t);
        let h = 1e-5;
        let plus = rep.casimirs(&s.add(&f.scaled(h)), 5).unwrap();
        let minus = rep.casimirs(&s.add(&f.scaled(-h)), 5).unwrap();
        let base = rep.casimirs(&s, 5).unwrap();
        for i in 0..plus.len() {
            let rate = (plus[i] - minus[i]) / (2.0 * h);
            assert!(rate.abs() < 1e-7 * base[1].abs().max(1.0), "C_{} rate {rate}", i + 2);
        }
    }
}
