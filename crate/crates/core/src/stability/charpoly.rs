//! Characteristic polynomial of `A_m^n` by the tridiagonal determinant
//! recursion `P_m^j(x) = x P_m^{j−1}(x) + ρ_j ρ_{j−1} P_m^{j−2}(x)`.
//!
//! Alongside `P` the same recursion is run on absolute values, giving a
//! magnitude `Q ≥ |P|`. `P/Q` is a scale-free residual: at a computed root it
//! is of order `n·ε`. Both are rescaled by powers of two as they grow, so
//! windows of several hundred modes neither overflow nor underflow.

use num_complex::Complex;

use crate::scalar::Real;
use crate::stability::matrix::Window;

const RESCALE_BITS: i32 = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharPolyValue<T> {
    /// `P = mantissa · 2^exponent`.
    pub mantissa: T,
    pub exponent: i32,
    /// `P/Q`, in `[-1, 1]`.
    pub normalized: T,
}

impl<T: Real> CharPolyValue<T> {
    /// `P` as a plain number; may overflow to infinity for huge windows.
    pub fn value(&self) -> T {
        self.mantissa * T::from_f64(2f64.powi(self.exponent)).unwrap_or(T::infinity())
    }

    pub fn sign(&self) -> i8 {
        if self.mantissa > T::zero() {
            1
        } else if self.mantissa < T::zero() {
            -1
        } else {
            0
        }
    }
}

/// `det(xI − A_m^n)` where `A` is built from `rho(k)`, `k ∈ [m, n]`.
pub fn char_poly<T: Real>(window: Window, x: T, rho: impl Fn(i64) -> T) -> CharPolyValue<T> {
    recurse(window, x, x.abs(), rho)
}

/// `|P(x)| / Q(|x| + s)` with `s = max |ρ_k|`, the scale of the matrix
/// entries. Unlike [`CharPolyValue::normalized`] it stays meaningful where
/// `Q(|x|)` itself vanishes (the zero root of odd sizes): a point at distance
/// `d` from a simple root scores about `d/s`.
pub fn char_poly_residual<T: Real>(window: Window, x: T, rho: impl Fn(i64) -> T) -> T {
    let s = (window.m..=window.n).fold(T::zero(), |acc, k| acc.max(rho(k).abs()));
    let v = recurse(window, x, x.abs() + s, rho);
    v.normalized.abs()
}

/// Runs the recursion for `P` at `x` and for `Q` at `y ≥ 0`.
fn recurse<T: Real>(window: Window, x: T, y: T, rho: impl Fn(i64) -> T) -> CharPolyValue<T> {
    let big = T::from_f64(2f64.powi(RESCALE_BITS)).unwrap();
    let small = big.recip();
    // (P, Q) at j-2 and j-1, starting from P_m^{m-1} = 1, P_m^m = x.
    let (mut p_prev, mut q_prev) = (T::one(), T::one());
    let (mut p_cur, mut q_cur) = (x, y);
    let mut exponent = 0i32;
    let mut rho_prev = rho(window.m);
    for j in window.m + 1..=window.n {
        let rho_j = rho(j);
        let c = rho_j * rho_prev;
        let p_next = x * p_cur + c * p_prev;
        let q_next = y * q_cur + c.abs() * q_prev;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        rho_prev = rho_j;
        if q_cur > big {
            p_prev *= small;
            q_prev *= small;
            p_cur *= small;
            q_cur *= small;
            exponent += RESCALE_BITS;
        } else if q_cur > T::zero() && q_cur < small && q_prev < small {
            p_prev *= big;
            q_prev *= big;
            p_cur *= big;
            q_cur *= big;
            exponent -= RESCALE_BITS;
        }
    }
    let normalized = if q_cur == T::zero() {
        T::zero()
    } else {
        p_cur / q_cur
    };
    CharPolyValue {
        mantissa: p_cur,
        exponent,
        normalized,
    }
}

/// Same recursion at a complex argument; returns the normalized residual
/// `|P(z)| / Q(|z|)`.
pub fn char_poly_complex_residual<T: Real>(window: Window, z: Complex<T>, rho: impl Fn(i64) -> T) -> T {
    let big = T::from_f64(2f64.powi(RESCALE_BITS)).unwrap();
    let small = big.recip();
    let zabs = z.norm();
    let one = Complex::new(T::one(), T::zero());
    let (mut p_prev, mut q_prev) = (one, T::one());
    let (mut p_cur, mut q_cur) = (z, zabs);
    let mut rho_prev = rho(window.m);
    for j in window.m + 1..=window.n {
        let rho_j = rho(j);
        let c = rho_j * rho_prev;
        let p_next = z * p_cur + p_prev * c;
        let q_next = zabs * q_cur + c.abs() * q_prev;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        rho_prev = rho_j;
        if q_cur > big {
            p_prev = p_prev * small;
            p_cur = p_cur * small;
            q_prev *= small;
            q_cur *= small;
        } else if q_cur > T::zero() && q_cur < small && q_prev < small {
            p_prev = p_prev * big;
            p_cur = p_cur * big;
            q_prev *= big;
            q_cur *= big;
        }
    }
    if q_cur == T::zero() {
        T::zero()
    } else {
        p_cur.norm() / q_cur
    }
}

/// Real roots of `P_m^n` in `[lo, hi]` located by sign changes on a uniform
/// grid of `samples` intervals and refined by bisection to width `tol`.
/// Roots of even multiplicity produce no sign change and are missed.
pub fn bisect_real_roots<T: Real>(
    window: Window,
    rho: impl Fn(i64) -> T,
    lo: T,
    hi: T,
    samples: usize,
    tol: T,
) -> Vec<T> {
    let eval = |x: T| char_poly(window, x, &rho).sign();
    let n = T::from_usize(samples).unwrap();
    let mut roots = Vec::new();
    let mut x0 = lo;
    let mut s0 = eval(x0);
    for i in 1..=samples {
        let x1 = lo + (hi - lo) * T::from_usize(i).unwrap() / n;
        let s1 = eval(x1);
        if s0 == 0 {
            roots.push(x0);
        } else if s1 != 0 && s0 != s1 {
            let (mut a, mut b) = (x0, x1);
            while b - a > tol {
                let mid = (a + b) / (T::one() + T::one());
                if mid <= a || mid >= b {
                    break;
                }
                let sm = eval(mid);
                if sm == 0 {
                    a = mid;
                    b = mid;
                } else if sm == s0 {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            roots.push((a + b) / (T::one() + T::one()));
        }
        x0 = x1;
        s0 = s1;
    }
    if s0 == 0 {
        roots.push(x0);
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho_example(k: i64) -> f64 {
        // a = (0,1), p = (2,0), κ = 1
        0.25 - 1.0 / ((2 * k) * (2 * k) + 1) as f64
    }

    #[test]
    fn two_by_two_closed_form() {
        for x in [-2.0, -0.3, 0.0, 0.7, 5.0] {
            let w = Window::new(3, 4);
            let got = char_poly(w, x, rho_example).value();
            let want = x * x + rho_example(3) * rho_example(4);
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn leading_term_dominates() {
        let w = Window::new(-6, 6);
        let x = 1e6;
        let v = char_poly(w, x, rho_example);
        let ratio = v.value() / x.powi(13);
        assert!((ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn matches_dense_determinant() {
        // Determinant of xI − A by Gaussian elimination with partial pivoting.
        let w = Window::new(-3, 4);
        let n = w.size();
        for x in [-0.4, 0.01, 0.3, 1.5] {
            let mut m = vec![vec![0.0; n]; n];
            for i in 0..n {
                m[i][i] = x;
                let k = w.m + i as i64;
                if i + 1 < n {
                    m[i][i + 1] = -rho_example(k + 1);
                    m[i + 1][i] = rho_example(k);
                }
            }
            let mut det = 1.0;
            for c in 0..n {
                let piv = (c..n).max_by(|&a, &b| m[a][c].abs().partial_cmp(&m[b][c].abs()).unwrap()).unwrap();
                if piv != c {
                    m.swap(piv, c);
                    det = -det;
                }
                det *= m[c][c];
                for r in c + 1..n {
                    let f = m[r][c] / m[c][c];
                    for j in c..n {
                        m[r][j] -= f * m[c][j];
                    }
                }
            }
            let got = char_poly(w, x, rho_example).value();
            assert!((got - det).abs() < 1e-12 * det.abs().max(1e-3), "{got} vs {det}");
        }
    }

    #[test]
    fn rescaling_survives_large_windows() {
        let w = Window::symmetric(400);
        let v = char_poly(w, 3.0, rho_example);
        assert!(v.mantissa.is_finite() && v.exponent > 0);
        assert!(v.normalized.abs() <= 1.0);
        let tiny = char_poly(w, 1e-3f64, |_| 1e-4);
        assert!(tiny.mantissa.is_finite() && tiny.mantissa != 0.0);
        assert!(tiny.exponent < 0);
    }

    #[test]
    fn residual_handles_the_structural_zero_root() {
        let w = Window::new(-2, 2);
        assert_eq!(char_poly(w, 0.0, rho_example).value(), 0.0);
        let v = char_poly(w, 1e-19, rho_example);
        assert!(v.normalized.abs() > 1e-3);
        assert!(char_poly_residual(w, 1e-19, rho_example) < 1e-15);
        assert!(char_poly_residual(w, 0.5, rho_example) > 1e-3);
    }

    #[test]
    fn bisection_finds_lambda_star_bracket() {
        let w = Window::new(-4, 6);
        let roots = bisect_real_roots(w, rho_example, -2.0, 2.0, 4000, 1e-13);
        let lambda_star = (-rho_example(1) * (rho_example(0) + rho_example(2))).sqrt();
        assert!(roots.iter().any(|&r| r >= lambda_star));
        for r in roots {
            assert!(char_poly(w, r, rho_example).normalized.abs() < 1e-8);
        }
    }
}
