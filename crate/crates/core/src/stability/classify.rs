use num_complex::Complex;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{
    enumerate_unstable_candidate_classes, lattice_points_in_ellipse, ClassSystem, DomainSpec, ModeIndex,
};
use crate::scalar::{lit, Real};
use crate::stability::bounds::{essential_spectrum_interval, lambda_star, EssentialInterval, LambdaStar};
use crate::stability::matrix::{build_truncated_matrix, Window};
use crate::stability::spectrum::{
    cluster, hausdorff_distance, max_real_part, non_imaginary, non_imaginary_threshold, spectral_radius, Cluster,
    CLUSTER_REL,
};

/// Spectrum of one truncated class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSpectrum<T> {
    pub representative: ModeIndex,
    pub alpha: T,
    pub interior_offsets: Vec<i64>,
    pub window: Window,
    /// Eigenvalues of `α A_m^n`.
    pub eigenvalues: Vec<Complex<T>>,
    pub essential: EssentialInterval<T>,
    pub lambda_star: Option<LambdaStar<T>>,
    pub max_real_part: T,
}

pub fn class_spectrum<T: Real>(class: &ClassSystem<T>, window: Window) -> Result<ClassSpectrum<T>> {
    let matrix = build_truncated_matrix(class, window)?;
    let eigenvalues = matrix.eigenvalues(class.alpha)?;
    Ok(ClassSpectrum {
        representative: class.a,
        alpha: class.alpha,
        interior_offsets: class.interior_offsets.clone(),
        window,
        max_real_part: max_real_part(&eigenvalues),
        eigenvalues,
        essential: essential_spectrum_interval(class),
        lambda_star: lambda_star(class),
    })
}

/// Class spectra computed in parallel, returned in input order.
pub fn class_spectra<T: Real>(classes: &[ClassSystem<T>], window: Window) -> Result<Vec<ClassSpectrum<T>>> {
    classes.par_iter().map(|c| class_spectrum(c, window)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Verdict<T> {
    /// No nontrivial class meets the unstable ellipse.
    LinearlyStable,
    /// `witness` is the class representative with the largest growth rate.
    LinearlyUnstable {
        witness: ModeIndex,
        max_real_part: T,
        lambda_star: Option<T>,
    },
    Inconclusive,
}

impl<T> Verdict<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::LinearlyStable => "LinearlyStable",
            Verdict::LinearlyUnstable { .. } => "LinearlyUnstable",
            Verdict::Inconclusive => "Inconclusive",
        }
    }

    pub fn is_stable(&self) -> bool {
        matches!(self, Verdict::LinearlyStable)
    }

    pub fn is_unstable(&self) -> bool {
        matches!(self, Verdict::LinearlyUnstable { .. })
    }
}

/// Counts of lattice points and of the discrete spectrum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscreteCounts {
    /// Nonzero lattice points strictly inside the unstable ellipse.
    pub nu: usize,
    pub nu_with_origin: usize,
    /// Non-imaginary eigenvalues over all classes, with multiplicity.
    pub with_multiplicity: usize,
    pub distinct_locations: usize,
    pub cluster_sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport<T> {
    pub spec: DomainSpec<T>,
    pub window: Window,
    pub tol: T,
    pub classes: Vec<ClassSpectrum<T>>,
    /// Widest essential segment over the candidate classes.
    pub essential: EssentialInterval<T>,
    pub verdict: Verdict<T>,
    pub counts: DiscreteCounts,
    pub discrete_clusters: Vec<Cluster<T>>,
}

impl<T: Real> SpectrumReport<T> {
    pub fn all_eigenvalues(&self) -> Vec<Complex<T>> {
        self.classes.iter().flat_map(|c| c.eigenvalues.iter().copied()).collect()
    }
}

/// `[−w, w]` with `w = max(50, 3·span)`, `span` the largest number of
/// interior offsets in any candidate class.
pub fn default_window<T: Real>(spec: &DomainSpec<T>) -> Window {
    let span = enumerate_unstable_candidate_classes(spec)
        .iter()
        .map(|c| c.interior_offsets.len() as i64)
        .max()
        .unwrap_or(0);
    Window::symmetric(50.max(3 * span))
}

fn check_window<T: Real>(classes: &[ClassSystem<T>], window: Window) -> Result<()> {
    if window.m > -2 || window.n < 2 {
        return Err(Error::InvalidParameter(format!(
            "window [{}, {}] must satisfy m <= -2 and n >= 2",
            window.m, window.n
        )));
    }
    for c in classes {
        if !c.interior_offsets.iter().all(|&k| window.contains(k)) {
            return Err(Error::WindowDoesNotCover {
                m: window.m,
                n: window.n,
                class: c.a,
                offsets: c.interior_offsets.clone(),
            });
        }
    }
    Ok(())
}

/// Stability verdict and spectra for `Ω* = 2Γcos(p·x_κ)`.
///
/// The stable verdict is analytic: it is returned exactly when no nontrivial
/// class meets the unstable ellipse, and no spectra are computed. Otherwise
/// every candidate class is truncated to `window`; an eigenvalue with real
/// part above `tol`, or a class satisfying the `λ*` hypotheses, makes the
/// equilibrium linearly unstable.
pub fn classify_equilibrium<T: Real>(spec: &DomainSpec<T>, window: Window, tol: T) -> Result<SpectrumReport<T>> {
    let candidates = enumerate_unstable_candidate_classes(spec);
    let nu = lattice_points_in_ellipse(spec).len();
    if candidates.is_empty() {
        return Ok(SpectrumReport {
            spec: *spec,
            window,
            tol,
            classes: Vec::new(),
            essential: EssentialInterval {
                lower: T::zero(),
                upper: T::zero(),
            },
            verdict: Verdict::LinearlyStable,
            counts: DiscreteCounts {
                nu,
                nu_with_origin: nu + 1,
                with_multiplicity: 0,
                distinct_locations: 0,
                cluster_sizes: Vec::new(),
            },
            discrete_clusters: Vec::new(),
        });
    }
    check_window(&candidates, window)?;
    let classes = class_spectra(&candidates, window)?;

    let essential = classes.iter().fold(
        EssentialInterval {
            lower: T::zero(),
            upper: T::zero(),
        },
        |acc, c| {
            if c.essential.upper > acc.upper {
                c.essential
            } else {
                acc
            }
        },
    );

    let top = classes
        .iter()
        .max_by(|a, b| a.max_real_part.partial_cmp(&b.max_real_part).unwrap_or(std::cmp::Ordering::Equal))
        .expect("at least one class");
    let verdict = if top.max_real_part > tol {
        Verdict::LinearlyUnstable {
            witness: top.representative,
            max_real_part: top.max_real_part,
            lambda_star: top.lambda_star.map(|l| l.value),
        }
    } else if let Some(c) = classes.iter().find(|c| c.lambda_star.is_some()) {
        Verdict::LinearlyUnstable {
            witness: c.representative,
            max_real_part: c.max_real_part,
            lambda_star: c.lambda_star.map(|l| l.value),
        }
    } else {
        Verdict::Inconclusive
    };

    let (counts, discrete_clusters) = count_discrete(&classes, nu);
    Ok(SpectrumReport {
        spec: *spec,
        window,
        tol,
        classes,
        essential,
        verdict,
        counts,
        discrete_clusters,
    })
}

fn count_discrete<T: Real>(classes: &[ClassSpectrum<T>], nu: usize) -> (DiscreteCounts, Vec<Cluster<T>>) {
    let all: Vec<Complex<T>> = classes.iter().flat_map(|c| c.eigenvalues.iter().copied()).collect();
    let radius = spectral_radius(&all);
    let discrete = non_imaginary(&all, non_imaginary_threshold(radius));
    let clusters = cluster(&discrete, lit::<T>(CLUSTER_REL) * radius.max(T::one()));
    let counts = DiscreteCounts {
        nu,
        nu_with_origin: nu + 1,
        with_multiplicity: discrete.len(),
        distinct_locations: clusters.len(),
        cluster_sizes: clusters.iter().map(|c| c.size).collect(),
    };
    (counts, clusters)
}

/// Discrete-spectrum count set against the closed form `2(ν − 2gcd(p₁,p₂) + 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureRecord {
    pub nu: usize,
    pub nu_with_origin: usize,
    pub gcd: i64,
    /// `2(ν − 2gcd + 1)` with `ν` excluding the origin.
    pub conjectured: i64,
    /// The same formula with the origin counted in `ν`.
    pub conjectured_with_origin: i64,
    pub measured_with_multiplicity: usize,
    pub measured_distinct: usize,
}

impl ConjectureRecord {
    pub fn matches_formula(&self) -> bool {
        self.conjectured == self.measured_with_multiplicity as i64
    }
}

pub fn discrete_count_conjecture<T: Real>(spec: &DomainSpec<T>, window: Window, tol: T) -> Result<ConjectureRecord> {
    let report = classify_equilibrium(spec, window, tol)?;
    let gcd = spec.p.k1.gcd(&spec.p.k2);
    let nu = report.counts.nu as i64;
    Ok(ConjectureRecord {
        nu: report.counts.nu,
        nu_with_origin: report.counts.nu_with_origin,
        gcd,
        conjectured: 2 * (nu - 2 * gcd + 1),
        conjectured_with_origin: 2 * (nu + 1 - 2 * gcd + 1),
        measured_with_multiplicity: report.counts.with_multiplicity,
        measured_distinct: report.counts.distinct_locations,
    })
}

/// Definiteness of the energy-Casimir form once the Casimirs are fixed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticFormDiagnosis {
    pub definite: bool,
    /// Interior modes that are not integer multiples of `p`; along these the
    /// form is negative and no Casimir constraint removes the direction.
    pub witness_modes: Vec<ModeIndex>,
}

/// The Casimirs fix only the modes `kp`, so the form restricted to their
/// level sets is definite exactly when every interior lattice point is a
/// multiple of `p`.
pub fn energy_casimir_diagnosis<T: Real>(spec: &DomainSpec<T>) -> QuadraticFormDiagnosis {
    let p = spec.p;
    let is_multiple = |k: ModeIndex| {
        k.cross(p) == 0 && {
            let (num, den) = if p.k1 != 0 { (k.k1, p.k1) } else { (k.k2, p.k2) };
            num % den == 0
        }
    };
    let witness_modes: Vec<ModeIndex> = lattice_points_in_ellipse(spec)
        .into_iter()
        .filter(|&k| !is_multiple(k))
        .collect();
    QuadraticFormDiagnosis {
        definite: witness_modes.is_empty(),
        witness_modes,
    }
}

/// Hausdorff distances (relative to the reference spectral radius) between
/// the spectrum of class `(a, p, κ)` and its images under the lattice
/// symmetries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryDistances<T> {
    /// `(na, np, κ)`.
    pub scaled: T,
    /// `(−na, np, κ)`, compared on the reversed window.
    pub scaled_negated: T,
    /// `((a₂, a₁), (p₂, p₁), 1/κ)`.
    pub swapped: T,
}

impl<T: Real> SymmetryDistances<T> {
    pub fn max(&self) -> T {
        self.scaled.max(self.scaled_negated).max(self.swapped)
    }
}

pub fn spectrum_symmetry_distances<T: Real>(
    spec: &DomainSpec<T>,
    a: ModeIndex,
    n_scale: i64,
    window: Window,
) -> Result<SymmetryDistances<T>> {
    if n_scale == 0 {
        return Err(Error::InvalidParameter("symmetry scale must be nonzero".into()));
    }
    let spectrum = |a: ModeIndex, spec: &DomainSpec<T>, window: Window| -> Result<Vec<Complex<T>>> {
        let class = ClassSystem::new(a, spec);
        build_truncated_matrix(&class, window)?.eigenvalues(class.alpha)
    };
    let reference = spectrum(a, spec, window)?;
    let scale = spectral_radius(&reference);
    let rel = |other: &[Complex<T>]| {
        let d = hausdorff_distance(&reference, other);
        if scale > T::zero() {
            d / scale
        } else {
            d
        }
    };

    let scaled_spec = DomainSpec::new(spec.kappa, n_scale * spec.p, spec.gamma)?;
    let scaled = spectrum(n_scale * a, &scaled_spec, window)?;
    let scaled_negated = spectrum(-n_scale * a, &scaled_spec, window.reversed())?;
    let swapped_spec = DomainSpec::new(spec.kappa.recip(), spec.p.swapped(), spec.gamma)?;
    let swapped = spectrum(a.swapped(), &swapped_spec, window)?;

    Ok(SymmetryDistances {
        scaled: rel(&scaled),
        scaled_negated: rel(&scaled_negated),
        swapped: rel(&swapped),
    })
}

/// Whether all three symmetry images reproduce the class spectrum within `tol`.
pub fn spectrum_symmetry_check<T: Real>(
    spec: &DomainSpec<T>,
    a: ModeIndex,
    n_scale: i64,
    window: Window,
    tol: T,
) -> Result<bool> {
    Ok(spectrum_symmetry_distances(spec, a, n_scale, window)?.max() < tol)
}

/// Largest eigenvalue real part over the candidate classes, each truncated
/// to the offsets whose modes fit in the box `|k₁|, |k₂| ≤ half_width`.
pub fn boxed_growth_rate<T: Real>(spec: &DomainSpec<T>, half_width: i64) -> Result<T> {
    let mut best = T::zero();
    for class in enumerate_unstable_candidate_classes(spec) {
        let inside: Vec<i64> = (-4 * half_width - 4..=4 * half_width + 4)
            .filter(|&k| class.mode(k).max_abs() <= half_width)
            .collect();
        let (Some(&m), Some(&n)) = (inside.first(), inside.last()) else {
            continue;
        };
        if n - m + 1 < 3 {
            continue;
        }
        let eigs = build_truncated_matrix(&class, Window::new(m, n))?.eigenvalues(class.alpha)?;
        best = best.max(max_real_part(&eigs));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(p: (i64, i64), kappa: f64) -> DomainSpec<f64> {
        DomainSpec::new(kappa, ModeIndex::new(p.0, p.1), 1.0).unwrap()
    }

    #[test]
    fn stable_examples() {
        for (p, kappa) in [((3, 0), 4.0), ((1, 0), 1.0), ((0, 2), 0.4)] {
            let r = classify_equilibrium(&spec(p, kappa), Window::symmetric(50), 1e-8).unwrap();
            assert!(r.verdict.is_stable(), "{p:?} {kappa}");
            assert_eq!(r.counts.with_multiplicity, 0);
        }
    }

    #[test]
    fn unstable_example_has_lambda_star_witness() {
        let r = classify_equilibrium(&spec((2, 0), 1.0), Window::symmetric(30), 1e-8).unwrap();
        assert!(r.verdict.is_unstable());
        let c = r.classes.iter().find(|c| c.representative == ModeIndex::new(0, 1)).unwrap();
        let ls = c.lambda_star.unwrap().value;
        let real_max = c.eigenvalues.iter().filter(|z| z.im.abs() < 1e-12).map(|z| z.re).fold(f64::MIN, f64::max);
        assert!(real_max >= 2.0 * ls);
    }

    #[test]
    fn window_must_cover_interior() {
        let s = spec((2, 0), 1.0);
        assert!(classify_equilibrium(&s, Window::new(-1, 5), 1e-8).is_err());
        assert!(classify_equilibrium(&s, Window::new(-5, 1), 1e-8).is_err());
    }

    #[test]
    fn energy_casimir_examples() {
        assert!(energy_casimir_diagnosis(&spec((1, 0), 1.0)).definite);
        let d = energy_casimir_diagnosis(&spec((2, 0), 3.0));
        assert!(!d.definite);
        assert!(d.witness_modes.contains(&ModeIndex::new(1, 0)));
        let d = energy_casimir_diagnosis(&spec((1, 0), 0.5));
        assert!(!d.definite);
        assert!(d.witness_modes.contains(&ModeIndex::new(0, 1)));
        assert!(d.witness_modes.contains(&ModeIndex::new(0, -1)));
        assert!(energy_casimir_diagnosis(&spec((3, 0), 4.0)).witness_modes.len() == 4);
    }

    #[test]
    fn symmetry_examples() {
        let s = spec((2, 0), 1.0);
        assert!(spectrum_symmetry_check(&s, ModeIndex::new(0, 1), 2, Window::symmetric(20), 1e-8).unwrap());
        let s31 = spec((3, 1), 2.0);
        for a in [ModeIndex::new(1, 0), ModeIndex::new(0, 1), ModeIndex::new(-1, 1)] {
            let d = spectrum_symmetry_distances(&s31, a, -3, Window::symmetric(25)).unwrap();
            assert!(d.max() < 1e-8, "{a}: {d:?}");
        }
        // Trivial class: all spectra vanish.
        let d = spectrum_symmetry_distances(&s, ModeIndex::new(3, 0), 3, Window::symmetric(10)).unwrap();
        assert_eq!(d.max(), 0.0);
        assert!(spectrum_symmetry_distances(&s, ModeIndex::new(0, 1), 0, Window::symmetric(10)).is_err());
    }

    #[test]
    fn default_window_is_at_least_fifty() {
        assert_eq!(default_window(&spec((3, 1), 2.0)), Window::symmetric(50));
    }
}
