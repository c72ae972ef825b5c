use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{weighted_norm_sq, DomainSpec, ModeIndex};
use crate::scalar::{int, lit, Real};

/// Mode cutoff `N` of the sine-bracket truncation: modes live on
/// `D_N = {−N..N}²` with indices taken modulo `2N+1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationSpec<T> {
    pub n: usize,
    pub kappa: T,
    /// `2π / (2N+1)`.
    pub epsilon: T,
}

impl<T: Real> TruncationSpec<T> {
    pub fn new(n: usize, kappa: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("mode cutoff N must be at least 1".into()));
        }
        if !(kappa > T::zero()) || !kappa.is_finite() {
            return Err(Error::InvalidParameter(format!("kappa must be positive and finite, got {kappa}")));
        }
        let epsilon = T::TAU() / int::<T>(2 * n as i64 + 1);
        Ok(TruncationSpec { n, kappa, epsilon })
    }

    /// `2N+1`.
    pub fn modulus(&self) -> i64 {
        2 * self.n as i64 + 1
    }

    /// Number of stored coefficients, `(2N+1)²`, the zero mode included.
    pub fn len(&self) -> usize {
        let m = self.modulus() as usize;
        m * m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, k: ModeIndex) -> bool {
        k.max_abs() <= self.n as i64
    }

    fn wrap_component(&self, x: i64) -> i64 {
        let m = self.modulus();
        let n = self.n as i64;
        (x + n).rem_euclid(m) - n
    }

    /// Componentwise reduction into `{−N..N}`.
    pub fn wrap(&self, k: ModeIndex) -> ModeIndex {
        ModeIndex::new(self.wrap_component(k.k1), self.wrap_component(k.k2))
    }

    /// Storage slot of a mode of `D_N`.
    pub fn index(&self, k: ModeIndex) -> usize {
        let n = self.n as i64;
        ((k.k1 + n) * self.modulus() + (k.k2 + n)) as usize
    }

    pub fn mode(&self, index: usize) -> ModeIndex {
        let m = self.modulus();
        let n = self.n as i64;
        let i = index as i64;
        ModeIndex::new(i / m - n, i % m - n)
    }

    /// All modes of `D_N` except the origin, in storage order.
    pub fn modes(&self) -> impl Iterator<Item = ModeIndex> + '_ {
        (0..self.len()).map(|i| self.mode(i)).filter(|k| !k.is_zero())
    }

    /// One representative of each conjugate pair `{k, −k}`: `k₁ > 0`, or `k₁ = 0, k₂ > 0`.
    pub fn pair_representatives(&self) -> impl Iterator<Item = ModeIndex> + '_ {
        self.modes().filter(|k| k.k1 > 0 || (k.k1 == 0 && k.k2 > 0))
    }

    /// `k × l` reduced into `{−N..N}`; the sine only sees it modulo `2N+1`.
    pub fn cross_reduced(&self, k: ModeIndex, l: ModeIndex) -> i64 {
        self.wrap_component(k.cross(l))
    }

    pub fn structure_constant(&self, k: ModeIndex, l: ModeIndex) -> T {
        structure_constant(k, l, self)
    }

    /// `1/|k|_κ²`, zero at the origin.
    pub fn inverse_laplacian(&self, k: ModeIndex) -> T {
        if k.is_zero() {
            T::zero()
        } else {
            weighted_norm_sq(k, self.kappa).recip()
        }
    }
}

/// `κ sin(ε k×l) / ε`.
pub fn structure_constant<T: Real>(k: ModeIndex, l: ModeIndex, trunc: &TruncationSpec<T>) -> T {
    let c = trunc.cross_reduced(k, l);
    if c == 0 {
        return T::zero();
    }
    trunc.kappa * (trunc.epsilon * int::<T>(c)).sin() / trunc.epsilon
}

/// Fourier coefficients `ω_k`, `k ∈ D_N`, of a truncated vorticity field.
/// The slot of the origin is kept at zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedState<T> {
    pub n: usize,
    pub time: T,
    /// Dense storage in [`TruncationSpec::index`] order.
    pub omega: Vec<Complex<T>>,
}

impl<T: Real> TruncatedState<T> {
    pub fn zeros(trunc: &TruncationSpec<T>) -> Self {
        TruncatedState {
            n: trunc.n,
            time: T::zero(),
            omega: vec![Complex::new(T::zero(), T::zero()); trunc.len()],
        }
    }

    /// `ω_{±p} = Γ`, all else zero.
    pub fn equilibrium(spec: &DomainSpec<T>, trunc: &TruncationSpec<T>) -> Result<Self> {
        if !trunc.contains(spec.p) {
            return Err(Error::ModeOutsideLattice(spec.p));
        }
        let mut s = Self::zeros(trunc);
        s.set_pair(trunc, spec.p, Complex::new(spec.gamma, T::zero()));
        Ok(s)
    }

    /// Random state with `|ω_k| ≤ amplitude/|k|_κ` and uniform phases.
    pub fn random(trunc: &TruncationSpec<T>, amplitude: T, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = Self::zeros(trunc);
        let reps: Vec<ModeIndex> = trunc.pair_representatives().collect();
        for k in reps {
            let r: f64 = rng.gen();
            let theta: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
            let scale = amplitude * trunc.inverse_laplacian(k).sqrt();
            let v = Complex::from_polar(lit::<T>(r) * scale, lit::<T>(theta));
            s.set_pair(trunc, k, v);
        }
        s
    }

    fn check(&self, trunc: &TruncationSpec<T>) {
        debug_assert_eq!(self.n, trunc.n, "state and truncation disagree on N");
    }

    pub fn get(&self, trunc: &TruncationSpec<T>, k: ModeIndex) -> Complex<T> {
        self.check(trunc);
        self.omega[trunc.index(trunc.wrap(k))]
    }

    /// Sets `ω_k = v` and `ω_{−k} = conj v`. Ignored for the origin.
    pub fn set_pair(&mut self, trunc: &TruncationSpec<T>, k: ModeIndex, v: Complex<T>) {
        self.check(trunc);
        let k = trunc.wrap(k);
        if k.is_zero() {
            return;
        }
        let i = trunc.index(k);
        let j = trunc.index(-k);
        self.omega[i] = v;
        self.omega[j] = v.conj();
    }

    /// `max |ω_{−k} − conj ω_k|`.
    pub fn reality_defect(&self, trunc: &TruncationSpec<T>) -> T {
        trunc.modes().fold(T::zero(), |m, k| {
            let d = self.omega[trunc.index(-k)] - self.omega[trunc.index(k)].conj();
            m.max(d.norm())
        })
    }

    /// Replaces each pair by its conjugate-symmetric part and zeroes the origin.
    pub fn enforce_reality(&mut self, trunc: &TruncationSpec<T>) {
        let half = lit::<T>(0.5);
        for k in trunc.pair_representatives() {
            let i = trunc.index(k);
            let j = trunc.index(-k);
            let v = (self.omega[i] + self.omega[j].conj()) * half;
            self.omega[i] = v;
            self.omega[j] = v.conj();
        }
        let o = trunc.index(ModeIndex::new(0, 0));
        self.omega[o] = Complex::new(T::zero(), T::zero());
    }

    /// Euclidean norm over all modes.
    pub fn norm(&self) -> T {
        self.omega.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn distance(&self, other: &Self) -> T {
        self.omega
            .iter()
            .zip(&other.omega)
            .map(|(a, b)| (*a - *b).norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    pub fn scaled(&self, c: T) -> Self {
        TruncatedState {
            n: self.n,
            time: self.time,
            omega: self.omega.iter().map(|z| *z * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        TruncatedState {
            n: self.n,
            time: self.time,
            omega: self.omega.iter().zip(&other.omega).map(|(a, b)| *a + *b).collect(),
        }
    }
}

/// `ω̇_k = Σ_j [κ sin(ε k×j)/ε] ω_{−j} ω_{k+j} / |j|_κ²`, indices wrapped.
pub fn vector_field<T: Real>(state: &TruncatedState<T>, trunc: &TruncationSpec<T>) -> TruncatedState<T> {
    let modes: Vec<ModeIndex> = trunc.modes().collect();
    let psi: Vec<(ModeIndex, Complex<T>)> = modes
        .iter()
        .map(|&j| (j, state.get(trunc, -j) * trunc.inverse_laplacian(j)))
        .filter(|(_, v)| v.norm_sqr() > T::zero())
        .collect();
    let mut out = TruncatedState::zeros(trunc);
    out.time = state.time;
    for &k in &modes {
        let mut acc = Complex::new(T::zero(), T::zero());
        for &(j, pj) in &psi {
            let c = structure_constant(k, j, trunc);
            if c != T::zero() {
                acc = acc + pj * state.get(trunc, k + j) * c;
            }
        }
        out.omega[trunc.index(k)] = acc;
    }
    out
}

/// Vector field of the single-pair Hamiltonian `ω_k ω_{−k} / |k|_κ²`.
pub fn pair_vector_field<T: Real>(
    state: &TruncatedState<T>,
    k: ModeIndex,
    trunc: &TruncationSpec<T>,
) -> TruncatedState<T> {
    let w = trunc.inverse_laplacian(k);
    let psi = state.get(trunc, -k) * w;
    let psi_bar = state.get(trunc, k) * w;
    let mut out = TruncatedState::zeros(trunc);
    out.time = state.time;
    for j in trunc.modes() {
        let s = structure_constant(j, k, trunc);
        if s == T::zero() {
            continue;
        }
        let v = (psi * state.get(trunc, j + k) - psi_bar * state.get(trunc, j - k)) * s;
        out.omega[trunc.index(j)] = v;
    }
    out
}

/// `H = ½ Σ |ω_k|² / |k|_κ²`.
pub fn hamiltonian<T: Real>(state: &TruncatedState<T>, trunc: &TruncationSpec<T>) -> T {
    let sum: T = trunc
        .modes()
        .map(|k| state.omega[trunc.index(k)].norm_sqr() * trunc.inverse_laplacian(k))
        .sum();
    sum * lit::<T>(0.5)
}

/// Equilibrium `ω_{±p} = Γ` plus a conjugate-symmetric perturbation with
/// modulus uniform in `[0, δ]` and uniform phase on every other pair. The
/// generator is ChaCha8 seeded from `seed`.
pub fn perturbed_equilibrium<T: Real>(
    spec: &DomainSpec<T>,
    trunc: &TruncationSpec<T>,
    delta: T,
    seed: u64,
) -> Result<TruncatedState<T>> {
    if !(delta >= T::zero()) || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!("delta must be nonnegative, got {delta}")));
    }
    let mut s = TruncatedState::equilibrium(spec, trunc)?;
    if delta == T::zero() {
        return Ok(s);
    }
    let p = spec.p;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reps: Vec<ModeIndex> = trunc.pair_representatives().collect();
    for k in reps {
        let r: f64 = rng.gen();
        let theta: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
        if k == p || k == -p {
            continue;
        }
        s.set_pair(trunc, k, Complex::from_polar(delta * lit::<T>(r), lit::<T>(theta)));
    }
    Ok(s)
}

/// Real vorticity `Ω(x) = Σ ω_k exp(i(k₁x₁ + κk₂x₂))` sampled at
/// `x₁ = 2πi/r`, `x₂ = 2πj/(κr)`; `grid[i][j]`.
pub fn vorticity_grid<T: Real>(
    state: &TruncatedState<T>,
    trunc: &TruncationSpec<T>,
    resolution: usize,
) -> Result<Vec<Vec<T>>> {
    if resolution == 0 {
        return Err(Error::InvalidParameter("grid resolution must be positive".into()));
    }
    let n = trunc.n as i64;
    let m = trunc.modulus() as usize;
    // e^{i k x_i} for k ∈ −N..N; the κ in κk₂x₂ cancels against x₂'s 1/κ.
    let phases: Vec<Vec<Complex<T>>> = (0..resolution)
        .map(|i| {
            let x = T::TAU() * int::<T>(i as i64) / int::<T>(resolution as i64);
            (-n..=n).map(|k| Complex::from_polar(T::one(), x * int::<T>(k))).collect()
        })
        .collect();
    let mut grid = vec![vec![T::zero(); resolution]; resolution];
    let mut imag_residue = T::zero();
    let mut scale = T::zero();
    let mut row = vec![Complex::new(T::zero(), T::zero()); m];
    for (i, e1) in phases.iter().enumerate() {
        // row[k₂] = Σ_{k₁} ω_k e^{i k₁ x₁}
        for (b, slot) in row.iter_mut().enumerate() {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (a, ph) in e1.iter().enumerate() {
                acc = acc + state.omega[a * m + b] * *ph;
            }
            *slot = acc;
        }
        for (j, e2) in phases.iter().enumerate() {
            let v: Complex<T> = row.iter().zip(e2).fold(Complex::new(T::zero(), T::zero()), |s, (r, p)| s + *r * *p);
            imag_residue = imag_residue.max(v.im.abs());
            scale = scale.max(v.re.abs());
            grid[i][j] = v.re;
        }
    }
    let rel = lit::<T>(1e-10).max(T::epsilon() * lit::<T>(1e3));
    if imag_residue > rel * scale.max(T::one()) {
        return Err(Error::InvalidParameter(format!(
            "state violates reality: grid imaginary residue {imag_residue}"
        )));
    }
    Ok(grid)
}

/// Sufficient condition for energy-Casimir stability of the truncated
/// dynamics at `p = (p₁, 0)`: `gcd(2N+1, p₁) = 1` and `κ ≥ |p₁|`. A true
/// result means stability seen in simulation may be a truncation artifact.
pub fn wrapped_casimir_stability_probe<T: Real>(spec: &DomainSpec<T>, trunc: &TruncationSpec<T>) -> Result<bool> {
    if spec.p.k2 != 0 {
        return Err(Error::InvalidParameter(format!("probe requires p = (p1, 0), got {}", spec.p)));
    }
    let p1 = spec.p.k1.abs();
    let coprime = num_integer::gcd(trunc.modulus(), p1) == 1;
    Ok(coprime && spec.kappa >= int::<T>(p1))
}

/// Coupling of the linearisation on the class line `a + ℤp` in the
/// truncated dynamics: `Γκ sin(ε a×p)/ε`, the sine deformation of `α`.
pub fn truncated_class_coupling<T: Real>(spec: &DomainSpec<T>, trunc: &TruncationSpec<T>, a: ModeIndex) -> T {
    spec.gamma * structure_constant(a, spec.p, trunc)
}
