//! Power-series and lag-polynomial helpers shared by the filter modules.
//!
//! Lag polynomials follow the Box-Jenkins convention throughout the crate:
//! an AR coefficient vector `[phi_1, .., phi_p]` stands for
//! `Phi(L) = 1 - phi_1 L - ... - phi_p L^p`, and an MA vector
//! `[theta_1, .., theta_q]` for `Theta(L) = 1 + theta_1 L + ... + theta_q L^q`.

/// Truncated product of two power series, keeping the first `n` coefficients.
pub fn convolve_trunc(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (i, &ai) in a.iter().enumerate().take(n) {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(n - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// First `n` coefficients of the reciprocal series `1 / A(z)`.
///
/// Requires `A(0) = 1` (the caller normalises); the recursion is
/// `B_0 = 1`, `B_j = -sum_{i=1..=j} A_i B_{j-i}`.
pub fn invert_series(a: &[f64], n: usize) -> Vec<f64> {
    debug_assert!((a[0] - 1.0).abs() < 1e-14, "series must have unit constant term");
    let mut b = vec![0.0; n];
    b[0] = 1.0;
    for j in 1..n {
        let mut acc = 0.0;
        for i in 1..=j.min(a.len() - 1) {
            acc += a[i] * b[j - i];
        }
        b[j] = -acc;
    }
    b
}

/// First `n` coefficients of the generalized binomial series `(1 + x z)^alpha`.
pub fn binomial_series(alpha: f64, x: f64, n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n];
    c[0] = 1.0;
    for j in 1..n {
        c[j] = c[j - 1] * x * (alpha - (j as f64 - 1.0)) / j as f64;
    }
    c
}

/// `Phi(L) = 1 - sum phi_i L^i` as an explicit coefficient vector.
pub fn ar_polynomial(phi: &[f64]) -> Vec<f64> {
    let mut p = vec![0.0; phi.len() + 1];
    p[0] = 1.0;
    for (i, &c) in phi.iter().enumerate() {
        p[i + 1] = -c;
    }
    p
}

/// `Theta(L) = 1 + sum theta_i L^i` as an explicit coefficient vector.
pub fn ma_polynomial(theta: &[f64]) -> Vec<f64> {
    let mut p = vec![0.0; theta.len() + 1];
    p[0] = 1.0;
    for (i, &c) in theta.iter().enumerate() {
        p[i + 1] = c;
    }
    p
}

/// `|P(e^{-i omega})|^2` for a real lag polynomial given by its coefficients.
pub fn squared_modulus_at(coeffs: &[f64], omega: f64) -> f64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for (j, &c) in coeffs.iter().enumerate() {
        let phase = omega * j as f64;
        re += c * phase.cos();
        im -= c * phase.sin();
    }
    re * re + im * im
}

/// Whether every root of the polynomial `c_0 + c_1 z + ... + c_n z^n` lies
/// strictly outside the circle of radius `1 + margin`.
///
/// Uses the Schur-Cohn reduction on the reciprocal polynomial, so no
/// eigenvalue machinery is needed. Degenerate leading coefficients are
/// trimmed first (a shorter polynomial has fewer roots, all accounted for).
pub fn roots_outside_unit_circle(coeffs: &[f64], margin: f64) -> bool {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.len() > 1 && c.last().copied().unwrap_or(0.0).abs() < 1e-300 {
        c.pop();
    }
    let n = c.len() - 1;
    if n == 0 {
        return true; // constant polynomial: no roots
    }
    // roots of P outside radius r  <=>  roots of z^n P(r/z) inside unit disk.
    // z^n P(r/z) has coefficients a_k = c_{n-k} r^{n-k}.
    let r = 1.0 + margin;
    let mut a: Vec<f64> = (0..=n).map(|k| c[n - k] * r.powi((n - k) as i32)).collect();
    loop {
        let deg = a.len() - 1;
        if deg == 0 {
            return true;
        }
        let lead = a[deg];
        let tail = a[0];
        if tail.abs() >= lead.abs() {
            return false;
        }
        // one Schur-Cohn step: q(z) = (lead * a(z) - tail * rev(a)(z)) / z
        let mut next = vec![0.0; deg];
        for k in 1..=deg {
            next[k - 1] = lead * a[k] - tail * a[deg - k];
        }
        a = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn convolution_matches_hand_product() {
        // (1 + 2z)(1 - z + z^2) = 1 + z - z^2 + 2z^3
        let got = convolve_trunc(&[1.0, 2.0], &[1.0, -1.0, 1.0], 4);
        assert_eq!(got, vec![1.0, 1.0, -1.0, 2.0]);
    }

    #[test]
    fn inversion_is_a_right_inverse() {
        let a = vec![1.0, -0.5, 0.25, -0.1];
        let b = invert_series(&a, 32);
        let prod = convolve_trunc(&a, &b, 32);
        assert_relative_eq!(prod[0], 1.0, epsilon = 1e-14);
        for &v in &prod[1..] {
            assert!(v.abs() < 1e-12, "residual {v}");
        }
    }

    #[test]
    fn binomial_geometric_series() {
        // (1 - z)^{-1} = 1 + z + z^2 + ...
        let c = binomial_series(-1.0, -1.0, 6);
        for &v in &c {
            assert_relative_eq!(v, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn root_location_ar1() {
        // 1 - 0.5 z has root at 2: outside.
        assert!(roots_outside_unit_circle(&[1.0, -0.5], 1e-8));
        // 1 - 1.5 z has root at 2/3: inside.
        assert!(!roots_outside_unit_circle(&[1.0, -1.5], 1e-8));
        // root exactly on the circle fails the strict check
        assert!(!roots_outside_unit_circle(&[1.0, -1.0], 1e-8));
    }

    #[test]
    fn root_location_ar2() {
        // (1 - 0.9z)(1 - 0.8z) = 1 - 1.7z + 0.72z^2: roots 1/0.9, 1/0.8 outside.
        assert!(roots_outside_unit_circle(&[1.0, -1.7, 0.72], 1e-8));
        // (1 - 1.1z)(1 - 0.5z): one root inside.
        assert!(!roots_outside_unit_circle(&[1.0, -1.6, 0.55], 1e-8));
    }

    #[test]
    fn squared_modulus_white_noise() {
        assert_relative_eq!(squared_modulus_at(&[1.0], 0.7), 1.0);
        // |1 - e^{-i pi}|^2 = 4
        assert_relative_eq!(squared_modulus_at(&[1.0, -1.0], std::f64::consts::PI), 4.0, epsilon = 1e-12);
    }
}
