//! Fourier lattice geometry for shear equilibria on the rectangular torus
//! `[0, 2π) × [0, 2π/κ)`.
//!
//! Modes are integer vectors `k`, weighted by `|k|_κ² = k₁² + κ²k₂²`. The
//! equilibrium `Ω* = 2Γ cos(p₁x₁ + κp₂x₂)` occupies the pair `±p`; its
//! linearisation splits into classes, lines `{a + kp}` parallel to `p`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{int, lit, Real};

/// Integer Fourier mode label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct ModeIndex {
    pub k1: i64,
    pub k2: i64,
}

impl ModeIndex {
    pub const ZERO: ModeIndex = ModeIndex { k1: 0, k2: 0 };

    pub const fn new(k1: i64, k2: i64) -> Self {
        ModeIndex { k1, k2 }
    }

    pub fn is_zero(self) -> bool {
        self.k1 == 0 && self.k2 == 0
    }

    /// Planar cross product `a₁b₂ − a₂b₁`.
    pub fn cross(self, other: ModeIndex) -> i64 {
        self.k1 * other.k2 - self.k2 * other.k1
    }

    /// Componentwise swap `(k₁, k₂) ↦ (k₂, k₁)`.
    pub fn swapped(self) -> ModeIndex {
        ModeIndex::new(self.k2, self.k1)
    }

    pub fn max_abs(self) -> i64 {
        self.k1.abs().max(self.k2.abs())
    }
}

impl From<[i64; 2]> for ModeIndex {
    fn from(v: [i64; 2]) -> Self {
        ModeIndex::new(v[0], v[1])
    }
}

impl From<ModeIndex> for [i64; 2] {
    fn from(k: ModeIndex) -> Self {
        [k.k1, k.k2]
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.k1, self.k2)
    }
}

impl Add for ModeIndex {
    type Output = ModeIndex;
    fn add(self, rhs: ModeIndex) -> ModeIndex {
        ModeIndex::new(self.k1 + rhs.k1, self.k2 + rhs.k2)
    }
}

impl Sub for ModeIndex {
    type Output = ModeIndex;
    fn sub(self, rhs: ModeIndex) -> ModeIndex {
        ModeIndex::new(self.k1 - rhs.k1, self.k2 - rhs.k2)
    }
}

impl Neg for ModeIndex {
    type Output = ModeIndex;
    fn neg(self) -> ModeIndex {
        ModeIndex::new(-self.k1, -self.k2)
    }
}

impl Mul<ModeIndex> for i64 {
    type Output = ModeIndex;
    fn mul(self, rhs: ModeIndex) -> ModeIndex {
        ModeIndex::new(self * rhs.k1, self * rhs.k2)
    }
}

/// Torus aspect `κ`, equilibrium wave vector `p` and amplitude `Γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec<T> {
    pub kappa: T,
    pub p: ModeIndex,
    pub gamma: T,
}

impl<T: Real> DomainSpec<T> {
    pub fn new(kappa: T, p: ModeIndex, gamma: T) -> Result<Self> {
        if !(kappa > T::zero()) || !kappa.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "kappa must be a positive finite number, got {kappa}"
            )));
        }
        if p.is_zero() {
            return Err(Error::InvalidParameter("p must be nonzero".into()));
        }
        if !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma must be finite, got {gamma}")));
        }
        Ok(DomainSpec { kappa, p, gamma })
    }

    /// `|p|_κ²`, the squared semi-axis of the unstable ellipse.
    pub fn p_norm_sq(&self) -> T {
        weighted_norm_sq(self.p, self.kappa)
    }

    /// `(a·b)_κ = a₁b₁ + κ²a₂b₂`.
    pub fn weighted_dot(&self, a: ModeIndex, b: ModeIndex) -> T {
        int::<T>(a.k1 * b.k1) + self.kappa * self.kappa * int::<T>(a.k2 * b.k2)
    }

    /// Same equilibrium with Γ replaced.
    pub fn with_gamma(&self, gamma: T) -> Self {
        DomainSpec { gamma, ..*self }
    }
}

/// Position of a lattice point relative to the unstable ellipse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EllipseRegion {
    Interior,
    Boundary,
    Exterior,
}

/// `k₁² + κ²k₂²`.
pub fn weighted_norm_sq<T: Real>(k: ModeIndex, kappa: T) -> T {
    int::<T>(k.k1 * k.k1) + kappa * kappa * int::<T>(k.k2 * k.k2)
}

/// Classifies `k` against `|x|_κ < |p|_κ`. Points within a relative
/// [`Real::boundary_tolerance`] of the boundary are never interior.
pub fn ellipse_region<T: Real>(k: ModeIndex, spec: &DomainSpec<T>) -> EllipseRegion {
    let pn = spec.p_norm_sq();
    let kn = weighted_norm_sq(k, spec.kappa);
    let tol = T::boundary_tolerance() * pn;
    if (kn - pn).abs() <= tol {
        EllipseRegion::Boundary
    } else if kn < pn {
        EllipseRegion::Interior
    } else {
        EllipseRegion::Exterior
    }
}

/// `ρ_k = 1/|p|_κ² − 1/|k|_κ²`, snapped to zero on the ellipse boundary.
pub fn rho<T: Real>(k: ModeIndex, spec: &DomainSpec<T>) -> Result<T> {
    if k.is_zero() {
        return Err(Error::ZeroMode);
    }
    Ok(rho_unchecked(k, spec))
}

fn rho_unchecked<T: Real>(k: ModeIndex, spec: &DomainSpec<T>) -> T {
    if ellipse_region(k, spec) == EllipseRegion::Boundary {
        return T::zero();
    }
    spec.p_norm_sq().recip() - weighted_norm_sq(k, spec.kappa).recip()
}

/// `a × p = 0`: the class is a line through the origin and its coupling vanishes.
pub fn is_trivial_class(a: ModeIndex, p: ModeIndex) -> bool {
    a.cross(p) == 0
}

/// Position of `a` against the half-open slab `−|p|_κ² < 2(a·p)_κ ≤ |p|_κ²`:
/// negative below, zero inside, positive above.
fn slab_position<T: Real>(a: ModeIndex, spec: &DomainSpec<T>) -> i8 {
    let pn = spec.p_norm_sq();
    let s = lit::<T>(2.0) * spec.weighted_dot(a, spec.p);
    let tol = T::boundary_tolerance() * pn;
    if s <= -pn + tol {
        -1
    } else if s > pn + tol {
        1
    } else {
        0
    }
}

/// Whether `a` belongs to the set `A` of class representatives.
pub fn is_representative<T: Real>(a: ModeIndex, spec: &DomainSpec<T>) -> bool {
    slab_position(a, spec) == 0
}

/// The unique `a + k*p` lying in `A`.
pub fn class_representative<T: Real>(a: ModeIndex, spec: &DomainSpec<T>) -> ModeIndex {
    let pn = spec.p_norm_sq();
    let s = lit::<T>(2.0) * spec.weighted_dot(a, spec.p);
    // s(a + kp) = s(a) + 2k|p|², so the slab is hit at k = floor((|p|² − s) / 2|p|²).
    let guess = ((pn - s) / (lit::<T>(2.0) * pn)).floor();
    let mut k = guess.to_i64().unwrap_or(0);
    let mut rep = a + k * spec.p;
    // Roundoff can leave the guess one slab off.
    for _ in 0..4 {
        match slab_position(rep, spec) {
            0 => break,
            pos => {
                k -= i64::from(pos);
                rep = a + k * spec.p;
            }
        }
    }
    rep
}

/// All nonzero lattice points strictly inside the unstable ellipse, sorted.
pub fn lattice_points_in_ellipse<T: Real>(spec: &DomainSpec<T>) -> Vec<ModeIndex> {
    let pn = spec.p_norm_sq().sqrt();
    let b1 = pn.ceil().to_i64().unwrap_or(0);
    let b2 = (pn / spec.kappa).ceil().to_i64().unwrap_or(0);
    let mut out = Vec::new();
    for k1 in -b1..=b1 {
        for k2 in -b2..=b2 {
            let k = ModeIndex::new(k1, k2);
            if !k.is_zero() && ellipse_region(k, spec) == EllipseRegion::Interior {
                out.push(k);
            }
        }
    }
    out
}

/// One linearised subsystem: the modes `a + kp`, `k ∈ ℤ`, with coupling
/// `α = Γκ(a × p)` and coefficients `ρ_k = ρ_{a+kp}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSystem<T> {
    pub a: ModeIndex,
    pub spec: DomainSpec<T>,
    pub alpha: T,
    /// Offsets `k` with `a + kp` strictly inside the unstable ellipse, ascending.
    pub interior_offsets: Vec<i64>,
}

impl<T: Real> ClassSystem<T> {
    /// The class through `a`, labelled by `a` itself (no reduction into `A`).
    pub fn new(a: ModeIndex, spec: &DomainSpec<T>) -> Self {
        let alpha = spec.gamma * spec.kappa * int::<T>(a.cross(spec.p));
        let interior_offsets = interior_offsets(a, spec);
        ClassSystem {
            a,
            spec: *spec,
            alpha,
            interior_offsets,
        }
    }

    /// The class through `a`, labelled by its representative in `A`.
    pub fn from_representative(a: ModeIndex, spec: &DomainSpec<T>) -> Self {
        Self::new(class_representative(a, spec), spec)
    }

    pub fn mode(&self, offset: i64) -> ModeIndex {
        self.a + offset * self.spec.p
    }

    /// `ρ_{a+kp}`. The mean mode is excluded from the dynamics, so a trivial
    /// class passing through the origin gets a zero coefficient there.
    pub fn rho(&self, offset: i64) -> T {
        let k = self.mode(offset);
        if k.is_zero() {
            T::zero()
        } else {
            rho_unchecked(k, &self.spec)
        }
    }

    pub fn is_trivial(&self) -> bool {
        is_trivial_class(self.a, self.spec.p)
    }

    /// Limit of `ρ_k` as `k → ±∞`.
    pub fn rho_limit(&self) -> T {
        self.spec.p_norm_sq().recip()
    }
}

fn interior_offsets<T: Real>(a: ModeIndex, spec: &DomainSpec<T>) -> Vec<i64> {
    // |a + kp|² = |p|²k² + 2(a·p)k + |a|², below |p|² between the two roots.
    let pn = spec.p_norm_sq();
    let b = lit::<T>(2.0) * spec.weighted_dot(a, spec.p);
    let c = weighted_norm_sq(a, spec.kappa) - pn;
    let disc = b * b - lit::<T>(4.0) * pn * c;
    if disc < T::zero() {
        return Vec::new();
    }
    let root = disc.sqrt();
    let two_a = lit::<T>(2.0) * pn;
    let lo = ((-b - root) / two_a).floor().to_i64().unwrap_or(0) - 1;
    let hi = ((-b + root) / two_a).ceil().to_i64().unwrap_or(0) + 1;
    (lo..=hi)
        .filter(|&k| {
            let m = a + k * spec.p;
            !m.is_zero() && ellipse_region(m, spec) == EllipseRegion::Interior
        })
        .collect()
}

/// Nontrivial classes meeting the unstable ellipse, each labelled by its
/// representative in `A`, sorted by representative. Every other class has
/// `ρ_k ≥ 0` throughout and only imaginary spectrum.
pub fn enumerate_unstable_candidate_classes<T: Real>(spec: &DomainSpec<T>) -> Vec<ClassSystem<T>> {
    let reps: BTreeSet<ModeIndex> = lattice_points_in_ellipse(spec)
        .into_iter()
        .filter(|k| !is_trivial_class(*k, spec.p))
        .map(|k| class_representative(k, spec))
        .collect();
    reps.into_iter().map(|a| ClassSystem::new(a, spec)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(p: (i64, i64), kappa: f64) -> DomainSpec<f64> {
        DomainSpec::new(kappa, ModeIndex::new(p.0, p.1), 1.0).unwrap()
    }

    #[test]
    fn weighted_norm_examples() {
        assert_eq!(weighted_norm_sq(ModeIndex::new(3, 1), 2.0), 13.0);
        assert_eq!(weighted_norm_sq(ModeIndex::new(0, 0), 0.37), 0.0);
        assert_eq!(weighted_norm_sq(ModeIndex::new(3, 0), 4.0), 9.0);
    }

    #[test]
    fn rho_examples() {
        let s = spec((2, 0), 1.0);
        assert_eq!(rho(ModeIndex::new(2, 0), &s).unwrap(), 0.0);
        assert_eq!(rho(ModeIndex::new(-2, 0), &s).unwrap(), 0.0);
        assert!((rho(ModeIndex::new(0, 1), &s).unwrap() + 0.75).abs() < 1e-15);
        let expected = 0.25 - 1.0 / 17.0;
        assert!((rho(ModeIndex::new(4, 1), &s).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.191176).abs() < 1e-6);
        assert!(matches!(rho(ModeIndex::ZERO, &s), Err(Error::ZeroMode)));
        // ±p is exactly zero even when κ is irrational.
        let s = spec((3, 1), 2f64.sqrt());
        assert_eq!(rho(ModeIndex::new(3, 1), &s).unwrap(), 0.0);
    }

    #[test]
    fn representative_examples() {
        let s = spec((2, 0), 1.0);
        assert_eq!(class_representative(ModeIndex::new(2, 0), &s), ModeIndex::ZERO);
        assert_eq!(class_representative(ModeIndex::new(5, 1), &s), ModeIndex::new(1, 1));
        // Brute-force scan for membership, as the independent check.
        let a = ModeIndex::new(5, 1);
        let hits: Vec<_> = (-10..=10)
            .map(|k| a + k * s.p)
            .filter(|m| {
                let v = 2.0 * s.weighted_dot(*m, s.p);
                -4.0 < v && v <= 4.0
            })
            .collect();
        assert_eq!(hits, vec![ModeIndex::new(1, 1)]);
        // The tie 2(a·p)_κ = |p|_κ² belongs to A.
        assert!(is_representative(ModeIndex::new(1, 0), &s));
        assert!(!is_representative(ModeIndex::new(-1, 0), &s));
    }

    #[test]
    fn trivial_class_examples() {
        assert!(is_trivial_class(ModeIndex::new(6, 2), ModeIndex::new(3, 1)));
        assert!(!is_trivial_class(ModeIndex::new(1, 0), ModeIndex::new(3, 1)));
        assert!(is_trivial_class(ModeIndex::ZERO, ModeIndex::new(3, 1)));
    }

    #[test]
    fn ellipse_point_examples() {
        assert_eq!(lattice_points_in_ellipse(&spec((3, 1), 2.0)).len(), 16);
        assert!(lattice_points_in_ellipse(&spec((1, 0), 1.0)).is_empty());
        let pts = lattice_points_in_ellipse(&spec((2, 0), 1.0));
        let mut brute = Vec::new();
        for k1 in -2i64..=2 {
            for k2 in -2i64..=2 {
                if (k1, k2) != (0, 0) && k1 * k1 + k2 * k2 < 4 {
                    brute.push(ModeIndex::new(k1, k2));
                }
            }
        }
        assert_eq!(pts, brute);
        assert_eq!(pts.len(), 8);
    }

    #[test]
    fn candidate_class_examples() {
        assert!(enumerate_unstable_candidate_classes(&spec((3, 0), 4.0)).is_empty());
        assert!(enumerate_unstable_candidate_classes(&spec((1, 0), 1.0)).is_empty());
        let classes = enumerate_unstable_candidate_classes(&spec((2, 0), 1.0));
        assert!(classes.iter().any(|c| c.a == ModeIndex::new(0, 1)));
        for c in &classes {
            assert!(!c.is_trivial());
            assert!(is_representative(c.a, &c.spec));
            assert!(!c.interior_offsets.is_empty());
        }
    }

    #[test]
    fn class_alpha_and_rho_limit() {
        let s = spec((2, 0), 1.0);
        let c = ClassSystem::new(ModeIndex::new(0, 1), &s);
        assert_eq!(c.alpha, -2.0);
        assert_eq!(c.interior_offsets, vec![0]);
        for k in [-50i64, -7, 3, 12, 80] {
            let bound = 1.0 / weighted_norm_sq(c.mode(k), s.kappa);
            assert!((c.rho(k) - c.rho_limit()).abs() <= bound + 1e-15);
        }
        let two = ClassSystem::new(ModeIndex::new(1, 0), &spec((1, 1), 1.0));
        assert_eq!(two.interior_offsets, vec![-1, 0]);
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(DomainSpec::new(0.0, ModeIndex::new(1, 0), 1.0).is_err());
        assert!(DomainSpec::new(-1.0, ModeIndex::new(1, 0), 1.0).is_err());
        assert!(DomainSpec::new(1.0, ModeIndex::ZERO, 1.0).is_err());
        assert!(DomainSpec::new(f64::NAN, ModeIndex::new(1, 0), 1.0).is_err());
    }
}
