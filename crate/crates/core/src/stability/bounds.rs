use serde::{Deserialize, Serialize};

use crate::lattice::{ellipse_region, ClassSystem, DomainSpec, EllipseRegion};
use crate::scalar::{lit, Real};

/// Which neighbour pair enters the bound: `ρ₁, ρ₂` (forward) or `ρ₋₁, ρ₋₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Forward,
    Backward,
}

/// Lower bound on a real eigenvalue of every truncation of a class with a
/// single interior mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaStar<T> {
    pub value: T,
    /// Class offset of the interior mode; offsets in the bound are relative to it.
    pub center: i64,
    pub orientation: Orientation,
}

impl<T: Real> LambdaStar<T> {
    /// Smallest window (in class offsets) for which the bound is guaranteed.
    pub fn minimal_window(&self) -> (i64, i64) {
        match self.orientation {
            Orientation::Forward => (self.center, self.center + 2),
            Orientation::Backward => (self.center - 2, self.center),
        }
    }
}

/// `λ* = sqrt(−ρ₁(ρ₀ + ρ₂))`, offsets taken from the class's unique interior
/// mode. Absent unless that mode is unique, every other `ρ_k` is strictly
/// positive, and `ρ₀ + ρ₂ < 0` in at least one orientation; when both
/// orientations qualify the larger bound is returned.
pub fn lambda_star<T: Real>(class: &ClassSystem<T>) -> Option<LambdaStar<T>> {
    if class.is_trivial() || class.interior_offsets.len() != 1 {
        return None;
    }
    let center = class.interior_offsets[0];
    if has_boundary_mode(class) {
        return None;
    }
    let r = |k: i64| class.rho(center + k);
    let r0 = r(0);
    if r0 >= T::zero() {
        return None;
    }
    let candidate = |near: T, far: T, orientation| {
        let s = r0 + far;
        if near > T::zero() && s < T::zero() {
            Some(LambdaStar {
                value: (-near * s).sqrt(),
                center,
                orientation,
            })
        } else {
            None
        }
    };
    let fwd = candidate(r(1), r(2), Orientation::Forward);
    let bwd = candidate(r(-1), r(-2), Orientation::Backward);
    match (fwd, bwd) {
        (Some(f), Some(b)) => Some(if b.value > f.value { b } else { f }),
        (f, b) => f.or(b),
    }
}

/// Whether some mode of the class lies on the ellipse boundary (`ρ = 0`).
fn has_boundary_mode<T: Real>(class: &ClassSystem<T>) -> bool {
    let spec = &class.spec;
    // Only offsets within a couple of steps of the interior can reach the boundary.
    let lo = class.interior_offsets.first().copied().unwrap_or(0) - 3;
    let hi = class.interior_offsets.last().copied().unwrap_or(0) + 3;
    (lo..=hi).any(|k| {
        let m = class.mode(k);
        !m.is_zero() && ellipse_region(m, spec) == EllipseRegion::Boundary
    })
}

/// `sqrt(3(κ²+1)) / (2(2−√3))`.
pub fn instability_bound_threshold<T: Real>(kappa: T) -> T {
    let three = lit::<T>(3.0);
    (three * (kappa * kappa + T::one())).sqrt() / (lit::<T>(2.0) * (lit::<T>(2.0) - three.sqrt()))
}

/// Sufficient condition `|p|_κ > sqrt(3(κ²+1)) / (2(2−√3))` for a class
/// satisfying the `λ*` hypotheses to exist.
pub fn instability_bound_check<T: Real>(spec: &DomainSpec<T>) -> bool {
    spec.p_norm_sq().sqrt() > instability_bound_threshold(spec.kappa)
}

/// Imaginary segment `i[lower, upper]` carrying the essential spectrum of `αM`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EssentialInterval<T> {
    pub lower: T,
    pub upper: T,
}

impl<T: Real> EssentialInterval<T> {
    pub fn contains_imag(&self, im: T, slack: T) -> bool {
        im >= self.lower - slack && im <= self.upper + slack
    }

    pub fn half_width(&self) -> T {
        self.upper
    }
}

/// `±2|α| / |p|_κ²`.
pub fn essential_spectrum_interval<T: Real>(class: &ClassSystem<T>) -> EssentialInterval<T> {
    let half = lit::<T>(2.0) * class.alpha.abs() / class.spec.p_norm_sq();
    EssentialInterval {
        lower: -half,
        upper: half,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ModeIndex;

    fn spec(p: (i64, i64), kappa: f64, gamma: f64) -> DomainSpec<f64> {
        DomainSpec::new(kappa, ModeIndex::new(p.0, p.1), gamma).unwrap()
    }

    #[test]
    fn lambda_star_worked_example() {
        let c = ClassSystem::new(ModeIndex::new(0, 1), &spec((2, 0), 1.0, 1.0));
        let ls = lambda_star(&c).unwrap();
        let rho1: f64 = 0.05;
        let rho2 = 0.25 - 1.0 / 17.0;
        let expected = (rho1 * (0.75 - rho2)).sqrt();
        assert!((ls.value - expected).abs() < 1e-14);
        assert!((ls.value - 0.167156).abs() < 1e-6);
        assert_eq!(ls.center, 0);
    }

    #[test]
    fn lambda_star_absent_cases() {
        // Two interior points.
        let c = ClassSystem::new(ModeIndex::new(1, 0), &spec((1, 1), 1.0, 1.0));
        assert_eq!(c.interior_offsets.len(), 2);
        assert!(c.rho(-1) < 0.0);
        assert!(lambda_star(&c).is_none());
        // Fully exterior class.
        let c = ClassSystem::new(ModeIndex::new(0, 3), &spec((2, 0), 1.0, 1.0));
        assert!(lambda_star(&c).is_none());
        // Trivial class.
        let c = ClassSystem::new(ModeIndex::new(1, 0), &spec((2, 0), 1.0, 1.0));
        assert!(lambda_star(&c).is_none());
    }

    #[test]
    fn instability_bound_examples() {
        assert!((instability_bound_threshold(1.0f64) - 4.570810086342819).abs() < 1e-12);
        assert!((instability_bound_threshold(2.0f64) - 7.227085312457099).abs() < 1e-12);
        assert!(instability_bound_check(&spec((5, 0), 1.0, 1.0)));
        assert!(!instability_bound_check(&spec((1, 0), 1.0, 1.0)));
        assert!(!instability_bound_check(&spec((3, 1), 2.0, 1.0)));
        // Squared form: p₁² + κ²p₂² > 3(κ²+1) / (4(7 − 4√3)).
        for kappa in [0.3, 1.0, 2.5] {
            let t = instability_bound_threshold(kappa);
            let sq = 3.0 * (kappa * kappa + 1.0) / (4.0 * (7.0 - 4.0 * 3f64.sqrt()));
            assert!((t * t - sq).abs() < 1e-9 * sq);
        }
    }

    #[test]
    fn essential_interval_examples() {
        let c = ClassSystem::new(ModeIndex::new(0, 1), &spec((2, 0), 1.0, 1.0));
        let e = essential_spectrum_interval(&c);
        assert_eq!((e.lower, e.upper), (-1.0, 1.0));
        let trivial = ClassSystem::new(ModeIndex::new(4, 0), &spec((2, 0), 1.0, 1.0));
        let e = essential_spectrum_interval(&trivial);
        assert_eq!((e.lower, e.upper), (0.0, 0.0));
        let doubled = ClassSystem::new(ModeIndex::new(0, 1), &spec((2, 0), 1.0, 2.0));
        assert_eq!(essential_spectrum_interval(&doubled).upper, 2.0);
    }
}
