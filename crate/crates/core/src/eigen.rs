//! Dense eigenvalues of real nonsymmetric matrices.
//!
//! Parlett–Reinsch balancing, Gaussian-elimination reduction to upper
//! Hessenberg form, then the Francis double-shift QR iteration with
//! exceptional shifts. Eigenvalues only; no vectors are accumulated.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn scaled(&self, s: T) -> Self {
        DenseMatrix {
            n: self.n,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }
}

/// Eigenvalues of a general real matrix. Conjugate pairs appear adjacently
/// with the positive imaginary part first.
pub fn eigenvalues<T: Real>(matrix: &DenseMatrix<T>) -> Result<Vec<Complex<T>>> {
    let mut a = matrix.clone();
    balance(&mut a);
    reduce_to_hessenberg(&mut a);
    hessenberg_eigenvalues(a)
}

/// Diagonal similarity that equalises row and column norms, in powers of two.
pub fn balance<T: Real>(a: &mut DenseMatrix<T>) {
    let n = a.n;
    let radix = lit::<T>(2.0);
    let sqrdx = radix * radix;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = T::zero();
            let mut c = T::zero();
            for j in 0..n {
                if j != i {
                    c += a.get(j, i).abs();
                    r += a.get(i, j).abs();
                }
            }
            if c == T::zero() || r == T::zero() {
                continue;
            }
            let s = c + r;
            let mut f = T::one();
            let mut g = r / radix;
            while c < g {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while c > g {
                f /= radix;
                c /= sqrdx;
            }
            if (c + r) / f < lit::<T>(0.95) * s {
                done = false;
                let ginv = f.recip();
                for j in 0..n {
                    a.set(i, j, a.get(i, j) * ginv);
                }
                for j in 0..n {
                    a.set(j, i, a.get(j, i) * f);
                }
            }
        }
    }
}

/// In-place reduction to upper Hessenberg form by stabilised elementary
/// similarity transformations. Entries below the subdiagonal are zeroed.
pub fn reduce_to_hessenberg<T: Real>(a: &mut DenseMatrix<T>) {
    let n = a.n;
    if n < 3 {
        return;
    }
    for m in 1..n - 1 {
        let mut x = T::zero();
        let mut piv = m;
        for j in m..n {
            if a.get(j, m - 1).abs() > x.abs() {
                x = a.get(j, m - 1);
                piv = j;
            }
        }
        if piv != m {
            for j in (m - 1)..n {
                let t = a.get(piv, j);
                a.set(piv, j, a.get(m, j));
                a.set(m, j, t);
            }
            for j in 0..n {
                let t = a.get(j, piv);
                a.set(j, piv, a.get(j, m));
                a.set(j, m, t);
            }
        }
        if x != T::zero() {
            for i in (m + 1)..n {
                let mut y = a.get(i, m - 1);
                if y != T::zero() {
                    y /= x;
                    a.set(i, m - 1, T::zero());
                    for j in m..n {
                        a.set(i, j, a.get(i, j) - y * a.get(m, j));
                    }
                    for j in 0..n {
                        a.set(j, m, a.get(j, m) + y * a.get(j, i));
                    }
                }
            }
        }
    }
    for i in 2..n {
        for j in 0..i - 1 {
            a.set(i, j, T::zero());
        }
    }
}

const MAX_ITERATIONS: usize = 60;

/// Eigenvalues of an upper Hessenberg matrix by the Francis double-shift QR
/// iteration.
pub fn hessenberg_eigenvalues<T: Real>(mut a: DenseMatrix<T>) -> Result<Vec<Complex<T>>> {
    let n = a.n;
    let mut wr = vec![T::zero(); n];
    let mut wi = vec![T::zero(); n];
    if n == 0 {
        return Ok(Vec::new());
    }
    let eps = T::epsilon();
    let mut anorm = T::zero();
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a.get(i, j).abs();
        }
    }
    if anorm == T::zero() {
        return Ok(vec![Complex::new(T::zero(), T::zero()); n]);
    }

    // Active block is rows/cols l..=nn.
    let mut nn = n as isize - 1;
    let mut t = T::zero();
    while nn >= 0 {
        let mut its = 0usize;
        loop {
            let nu = nn as usize;
            // Look for a negligible subdiagonal element.
            let mut l = nu;
            while l > 0 {
                let mut s = a.get(l - 1, l - 1).abs() + a.get(l, l).abs();
                if s == T::zero() {
                    s = anorm;
                }
                if a.get(l, l - 1).abs() <= eps * s {
                    a.set(l, l - 1, T::zero());
                    break;
                }
                l -= 1;
            }
            let mut x = a.get(nu, nu);
            if l == nu {
                // One root found.
                wr[nu] = x + t;
                wi[nu] = T::zero();
                nn -= 1;
                break;
            }
            let mut y = a.get(nu - 1, nu - 1);
            let mut w = a.get(nu, nu - 1) * a.get(nu - 1, nu);
            if l + 1 == nu {
                // Two roots found.
                let p = lit::<T>(0.5) * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                x += t;
                if q >= T::zero() {
                    let z = p + z.copysign(p);
                    wr[nu - 1] = x + z;
                    wr[nu] = x + z;
                    if z != T::zero() {
                        wr[nu] = x - w / z;
                    }
                    wi[nu - 1] = T::zero();
                    wi[nu] = T::zero();
                } else {
                    wr[nu - 1] = x + p;
                    wr[nu] = x + p;
                    wi[nu - 1] = z;
                    wi[nu] = -z;
                }
                nn -= 2;
                break;
            }

            if its == MAX_ITERATIONS {
                return Err(Error::NoConvergence { size: n, window: None });
            }
            if its > 0 && its % 10 == 0 {
                // Exceptional shift.
                t += x;
                for i in 0..=nu {
                    a.set(i, i, a.get(i, i) - x);
                }
                let s = a.get(nu, nu - 1).abs() + a.get(nu - 1, nu - 2).abs();
                x = lit::<T>(0.75) * s;
                y = x;
                w = lit::<T>(-0.4375) * s * s;
            }
            its += 1;

            // Form the shift and look for two consecutive small subdiagonals.
            let mut m = nu - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a.get(m, m);
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a.get(m + 1, m) + a.get(m, m + 1);
                q = a.get(m + 1, m + 1) - z - rr - ss;
                r = a.get(m + 2, m + 1);
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a.get(m, m - 1).abs() * (q.abs() + r.abs());
                let v = p.abs() * (a.get(m - 1, m - 1).abs() + z.abs() + a.get(m + 1, m + 1).abs());
                if u <= eps * v {
                    break;
                }
                m -= 1;
            }
            for i in m..nu - 1 {
                a.set(i + 2, i, T::zero());
                if i != m {
                    a.set(i + 2, i - 1, T::zero());
                }
            }

            // Double QR step on rows l..=nu and columns m..=nu.
            let mut xk = T::zero();
            for k in m..nu {
                if k != m {
                    p = a.get(k, k - 1);
                    q = a.get(k + 1, k - 1);
                    r = T::zero();
                    if k + 1 != nu {
                        r = a.get(k + 2, k - 1);
                    }
                    xk = p.abs() + q.abs() + r.abs();
                    if xk != T::zero() {
                        p /= xk;
                        q /= xk;
                        r /= xk;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s == T::zero() {
                    continue;
                }
                if k == m {
                    if l != m {
                        a.set(k, k - 1, -a.get(k, k - 1));
                    }
                } else {
                    a.set(k, k - 1, -s * xk);
                }
                p += s;
                let xx = p / s;
                let yy = q / s;
                let zz = r / s;
                q /= p;
                r /= p;
                for j in k..=nu {
                    let mut pp = a.get(k, j) + q * a.get(k + 1, j);
                    if k + 1 != nu {
                        pp += r * a.get(k + 2, j);
                        a.set(k + 2, j, a.get(k + 2, j) - pp * zz);
                    }
                    a.set(k + 1, j, a.get(k + 1, j) - pp * yy);
                    a.set(k, j, a.get(k, j) - pp * xx);
                }
                let mmin = if nu < k + 3 { nu } else { k + 3 };
                for i in l..=mmin {
                    let mut pp = xx * a.get(i, k) + yy * a.get(i, k + 1);
                    if k + 1 != nu {
                        pp += zz * a.get(i, k + 2);
                        a.set(i, k + 2, a.get(i, k + 2) - pp * r);
                    }
                    a.set(i, k + 1, a.get(i, k + 1) - pp * q);
                    a.set(i, k, a.get(i, k) - pp);
                }
            }
        }
    }
    Ok(wr.into_iter().zip(wi).map(|(re, im)| Complex::new(re, im)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<Complex<f64>>) -> Vec<Complex<f64>> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn diagonal_and_triangular() {
        let m = DenseMatrix::from_fn(4, |i, j| if j >= i { (i + 1) as f64 * if i == j { 1.0 } else { 0.3 } } else { 0.0 });
        let ev = sorted(eigenvalues(&m).unwrap());
        for (i, e) in ev.iter().enumerate() {
            assert!((e.re - (i + 1) as f64).abs() < 1e-12);
            assert_eq!(e.im, 0.0);
        }
    }

    #[test]
    fn rotation_block() {
        let m = DenseMatrix::<f64>::from_fn(2, |i, j| match (i, j) {
            (0, 1) => -2.0,
            (1, 0) => 2.0,
            _ => 1.0,
        });
        let ev = eigenvalues(&m).unwrap();
        assert!(ev.iter().all(|e| (e.re - 1.0).abs() < 1e-14 && (e.im.abs() - 2.0).abs() < 1e-14));
    }

    #[test]
    fn companion_matrix_roots() {
        // x^4 - 10x^3 + 35x^2 - 50x + 24 = (x-1)(x-2)(x-3)(x-4)
        let coeffs = [24.0, -50.0, 35.0, -10.0];
        let m = DenseMatrix::from_fn(4, |i, j| {
            if j == 3 {
                -coeffs[i]
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        let ev = sorted(eigenvalues(&m).unwrap());
        for (i, e) in ev.iter().enumerate() {
            assert!((e.re - (i + 1) as f64).abs() < 1e-10, "{ev:?}");
            assert!(e.im.abs() < 1e-10);
        }
    }

    #[test]
    fn skew_symmetric_tridiagonal_is_imaginary() {
        let n = 40;
        let m = DenseMatrix::from_fn(n, |i, j| {
            if j == i + 1 {
                1.0
            } else if i == j + 1 {
                -1.0
            } else {
                0.0
            }
        });
        let ev = eigenvalues(&m).unwrap();
        let mut ims: Vec<f64> = ev.iter().map(|e| e.im).collect();
        ims.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut exact: Vec<f64> = (1..=n).map(|j| 2.0 * (j as f64 * std::f64::consts::PI / (n + 1) as f64).cos()).collect();
        exact.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in ims.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(ev.iter().all(|e| e.re.abs() < 1e-12));
    }

    #[test]
    fn trace_and_conjugate_pairs_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [1usize, 2, 3, 7, 25] {
            let m = DenseMatrix::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
            let ev = eigenvalues(&m).unwrap();
            let trace: f64 = (0..n).map(|i| m.get(i, i)).sum();
            let sum: f64 = ev.iter().map(|e| e.re).sum();
            assert!((trace - sum).abs() < 1e-10);
            let imsum: f64 = ev.iter().map(|e| e.im).sum();
            assert!(imsum.abs() < 1e-10);
        }
    }

    #[test]
    fn zero_matrix() {
        let ev = eigenvalues(&DenseMatrix::<f64>::zeros(5)).unwrap();
        assert_eq!(ev.len(), 5);
        assert!(ev.iter().all(|e| e.re == 0.0 && e.im == 0.0));
    }

    #[test]
    fn single_precision_works() {
        let m = DenseMatrix::<f32>::from_fn(3, |i, j| if i == j { i as f32 + 1.0 } else { 0.0 });
        let ev = eigenvalues(&m).unwrap();
        let mut re: Vec<f32> = ev.iter().map(|e| e.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((re[2] - 3.0).abs() < 1e-5);
    }
}
