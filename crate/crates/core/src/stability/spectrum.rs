//! Bookkeeping on computed spectra: the discrete / essential split,
//! clustering of repeated eigenvalues, and set distances.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::{lit, Real};

/// Relative threshold on `|Re λ|` above which an eigenvalue counts as
/// discrete (non-imaginary). Scaled by `max(1, spectral radius)`.
pub const NON_IMAGINARY_REL: f64 = 1e-6;

/// Relative clustering radius for counting distinct eigenvalue locations.
pub const CLUSTER_REL: f64 = 1e-6;

pub fn spectral_radius<T: Real>(eigs: &[Complex<T>]) -> T {
    eigs.iter().fold(T::zero(), |m, z| m.max(z.norm()))
}

pub fn max_real_part<T: Real>(eigs: &[Complex<T>]) -> T {
    eigs.iter().fold(T::neg_infinity(), |m, z| m.max(z.re))
}

pub fn max_abs_real_part<T: Real>(eigs: &[Complex<T>]) -> T {
    eigs.iter().fold(T::zero(), |m, z| m.max(z.re.abs()))
}

/// `|Re λ|` cutoff for a spectrum of the given radius.
pub fn non_imaginary_threshold<T: Real>(radius: T) -> T {
    lit::<T>(NON_IMAGINARY_REL) * radius.max(T::one())
}

pub fn non_imaginary<T: Real>(eigs: &[Complex<T>], threshold: T) -> Vec<Complex<T>> {
    eigs.iter().copied().filter(|z| z.re.abs() > threshold).collect()
}

pub fn imaginary<T: Real>(eigs: &[Complex<T>], threshold: T) -> Vec<Complex<T>> {
    eigs.iter().copied().filter(|z| z.re.abs() <= threshold).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cluster<T> {
    pub center: Complex<T>,
    pub size: usize,
}

/// Single-linkage clusters at the given absolute radius, ordered by
/// (real, imaginary) part of their centres.
pub fn cluster<T: Real>(eigs: &[Complex<T>], radius: T) -> Vec<Cluster<T>> {
    let n = eigs.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (eigs[i] - eigs[j]).norm() <= radius {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Complex<T>, usize)> = Vec::new();
    for i in 0..n {
        let root = find(&mut label, i);
        match groups.iter_mut().find(|g| g.0 == root) {
            Some(g) => {
                g.1 = g.1 + eigs[i];
                g.2 += 1;
            }
            None => groups.push((root, eigs[i], 1)),
        }
    }
    let mut out: Vec<Cluster<T>> = groups
        .into_iter()
        .map(|(_, sum, size)| Cluster {
            center: sum / T::from_usize(size).unwrap(),
            size,
        })
        .collect();
    out.sort_by(|a, b| {
        a.center
            .re
            .partial_cmp(&b.center.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.center.im.partial_cmp(&b.center.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    out
}

/// Hausdorff distance between two finite point sets in the complex plane.
pub fn hausdorff_distance<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    if a.is_empty() && b.is_empty() {
        return T::zero();
    }
    if a.is_empty() || b.is_empty() {
        return T::infinity();
    }
    let directed = |x: &[Complex<T>], y: &[Complex<T>]| {
        x.iter().fold(T::zero(), |worst, p| {
            let nearest = y.iter().fold(T::infinity(), |m, q| m.min((*p - *q).norm()));
            worst.max(nearest)
        })
    };
    directed(a, b).max(directed(b, a))
}

/// Largest distance from any `λ` to the nearest of `−λ`, `conj λ`, `−conj λ`
/// in the set, i.e. the defect of the Hamiltonian four-fold symmetry.
pub fn hamiltonian_symmetry_defect<T: Real>(eigs: &[Complex<T>]) -> T {
    let nearest = |target: Complex<T>| eigs.iter().fold(T::infinity(), |m, q| m.min((target - *q).norm()));
    eigs.iter().fold(T::zero(), |worst, z| {
        let d = nearest(-*z).max(nearest(z.conj())).max(nearest(-z.conj()));
        worst.max(d)
    })
}

/// Largest gap between consecutive sorted values.
pub fn max_gap<T: Real>(values: &[T]) -> T {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    v.windows(2).fold(T::zero(), |m, w| m.max(w[1] - w[0]))
}
