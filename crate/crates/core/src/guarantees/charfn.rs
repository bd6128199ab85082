use num_complex::Complex64;

/// Characteristic function of U[−w, w]: `sin(wu)/(wu)`.
pub fn char_fn_uniform_width(u: f64, half_width: f64) -> f64 {
    let x = half_width * u;
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Characteristic function of U[−1/2, 1/2]: `sin(u/2)/(u/2)`.
pub fn char_fn_uniform(u: f64) -> f64 {
    char_fn_uniform_width(u, 0.5)
}

/// `(1/P_max)·Σ_{k<P_max} e^{jku}`, the characteristic function of a uniform
/// chirp index. Evaluated as the explicit sum.
pub fn char_fn_discrete_uniform(u: f64, p_max: usize) -> Complex64 {
    if p_max == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let s: Complex64 = (0..p_max).map(|k| Complex64::from_polar(1.0, k as f64 * u)).sum();
    s / p_max as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn known_values() {
        assert_eq!(char_fn_uniform(0.0), 1.0);
        assert!(char_fn_uniform(2.0 * PI).abs() < 1e-15);
        assert!((char_fn_uniform(PI) - 2.0 / PI).abs() < 1e-15);
        assert!((char_fn_discrete_uniform(0.0, 32) - 1.0).norm() < 1e-15);
        assert!(char_fn_discrete_uniform(PI, 2).norm() < 1e-15);
        for k in 1..32 {
            assert!(char_fn_discrete_uniform(2.0 * PI * k as f64 / 32.0, 32).norm() < 1e-12);
        }
    }
}
