//! Modified Bessel function of the second kind, order one.

/// Euler–Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `K₁(x)` for `x > 0`. Power series up to `x = 2`, trapezoidal quadrature of
/// `∫₀^∞ e^{−x cosh t} cosh t dt` above. Returns NaN for `x ≤ 0`.
pub fn bessel_k1(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NAN;
    }
    if x <= 2.0 {
        series(x)
    } else {
        quadrature(x)
    }
}

fn series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    // term_k = q^k / (k! (k+1)!)
    let mut term = 1.0;
    let mut i1 = 0.0;
    let mut psi_sum = 0.0;
    // ψ(k+1) and ψ(k+2)
    let mut psi1 = -EULER_GAMMA;
    let mut psi2 = 1.0 - EULER_GAMMA;
    for k in 0..60 {
        i1 += term;
        psi_sum += (psi1 + psi2) * term;
        let kf = k as f64;
        psi1 += 1.0 / (kf + 1.0);
        psi2 += 1.0 / (kf + 2.0);
        term *= q / ((kf + 1.0) * (kf + 2.0));
        if term < 1e-18 * i1 {
            break;
        }
    }
    let i1 = 0.5 * x * i1;
    1.0 / x + i1 * (0.5 * x).ln() - 0.25 * x * psi_sum
}

fn quadrature(x: f64) -> f64 {
    // Integrand relative to e^{−x}; its width shrinks like 1/√x.
    let h = (0.5 / x.sqrt()).min(0.1);
    let f = |t: f64| (-x * (t.cosh() - 1.0)).exp() * t.cosh();
    let mut sum = 0.5 * f(0.0);
    let mut k = 1;
    loop {
        let v = f(k as f64 * h);
        sum += v;
        if v < 1e-18 * sum {
            break;
        }
        k += 1;
    }
    sum * h * (-x).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branches_agree_at_seam() {
        for x in [1.8, 2.0, 2.2, 3.0] {
            let (s, q) = (series(x), quadrature(x));
            assert!(((s - q) / q).abs() < 1e-12, "x={x}: {s} vs {q}");
        }
    }
}
