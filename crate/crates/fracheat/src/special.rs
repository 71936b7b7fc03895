//! Gamma function and the scalar kernel identities: the operator
//! normalization constants, the negative-order gamma tail integral, and the
//! closed-form time-kernel integral that drives the far-field estimates.

use crate::error::{Error, Result};
use crate::order::FracOrder;
use crate::rules::{self, GaussRule};
use crate::scalar::Real;

/// Lanczos coefficients (g = 7, 9 terms), the classic GSL set.
const LANCZOS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// Gamma function. Arguments in `(-1, 0)` use the recurrence
/// `Gamma(z) = Gamma(z + 1) / z`; the Lanczos core handles `z >= 0.5` and
/// anything below `-1` falls back to the reflection formula.
pub fn gamma<T: Real>(x: T) -> T {
    if x >= T::lit(0.5) {
        lanczos(x)
    } else if x > -T::one() && x != T::zero() {
        gamma(x + T::one()) / x
    } else {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        let pi = T::PI();
        pi / ((pi * x).sin() * lanczos(T::one() - x))
    }
}

fn lanczos<T: Real>(x: T) -> T {
    let x = x - T::one();
    let mut t = T::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        t += T::lit(c) / (x + T::from_count(i));
    }
    let w = x + T::lit(7.5);
    (T::lit(2.0) * T::PI()).sqrt() * w.powf(x + T::lit(0.5)) * (-w).exp() * t
}

/// `|Gamma(-s)|` for `0 < s < 1`, via `Gamma(-s) = -Gamma(1 - s) / s`.
pub fn abs_gamma_neg<T: Real>(s: FracOrder<T>) -> T {
    gamma(T::one() - s.get()) / s.get()
}

fn check_dim(n: usize) -> Result<()> {
    if (1..=3).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "dimension n = {n} not supported (expected 1, 2 or 3)"
        )))
    }
}

/// `(4 pi)^{n/2}`.
pub fn four_pi_pow<T: Real>(n: usize) -> T {
    (T::lit(4.0) * T::PI()).powf(T::from_count(n) * T::lit(0.5))
}

/// Normalization constant of the singular-integral operator:
/// `C_{n,s} = 1 / ((4 pi)^{n/2} |Gamma(-s)|)`.
pub fn normalization_c<T: Real>(n: usize, s: FracOrder<T>) -> Result<T> {
    check_dim(n)?;
    Ok((four_pi_pow::<T>(n) * abs_gamma_neg(s)).recip())
}

/// Normalization constant of the fundamental solution:
/// `A_{n,s} = 1 / ((4 pi)^{n/2} Gamma(s))`.
pub fn normalization_a<T: Real>(n: usize, s: FracOrder<T>) -> Result<T> {
    check_dim(n)?;
    Ok((four_pi_pow::<T>(n) * gamma(s.get())).recip())
}

/// Adaptive quadrature of `integral_0^inf (e^{-lambda tau} - 1) tau^{-1-s} dtau`.
///
/// The contract (checked by tests) is equality with `Gamma(-s) lambda^s`,
/// which is negative. The integrable endpoint is handled by geometric
/// grading; the far tail beyond `tau1 = 45/lambda` is added in closed form as
/// `-tau1^{-s}/s` (the surviving `-1` part; the exponential part is below
/// `e^{-45}`). Node doubling guards the panel quadrature.
pub fn gamma_tail_identity<T: Real>(lambda: T, s: FracOrder<T>) -> Result<T> {
    if lambda < T::zero() {
        return Err(Error::InvalidParameter("lambda must be >= 0".into()));
    }
    if lambda == T::zero() {
        return Ok(T::zero());
    }
    let sv = s.get();
    let tau0 = (T::lit(1e-40) / lambda).max(T::min_positive_value() * T::lit(1e6));
    let tau1 = T::lit(45.0) / lambda;
    let panels = rules::geometric_panels(tau0, tau1, T::lit(2.0), None);
    let eval = |rule: &GaussRule<T>| -> T {
        let mut acc = T::zero();
        for &(a, b) in &panels {
            acc += rule.integrate(a, b, |tau| {
                (-lambda * tau).exp_m1() * tau.powf(-T::one() - sv)
            });
        }
        acc - tau1.powf(-sv) / sv
    };
    richardson(16, eval, T::lit(1e-8))
}

/// Quadrature of `integral_0^inf e^{-r^2/(4 sigma)} sigma^{-(n/2+1+s)} dsigma`.
///
/// Equals `4^{n/2+s} Gamma(n/2+s) r^{-(n+2s)}` exactly; the quadrature value
/// is returned so tests can confront it with the closed form.
pub fn time_kernel_integral<T: Real>(r: T, n: usize, s: FracOrder<T>) -> Result<T> {
    check_dim(n)?;
    if r <= T::zero() {
        return Err(Error::InvalidParameter("r must be > 0".into()));
    }
    let beta = T::from_count(n) * T::lit(0.5) + T::one() + s.get();
    // below sigma_lo the exponential underflows; above, extend until the
    // crude power tail bound is negligible against the accumulated value
    let sigma_lo = r * r / T::lit(4.0 * 745.0);
    let eval = |rule: &GaussRule<T>| -> T {
        let mut acc = T::zero();
        let mut lo = sigma_lo;
        let ratio = T::lit(2.0);
        loop {
            let hi = lo * ratio;
            acc += rule.integrate(lo, hi, |sig| {
                (-r * r / (T::lit(4.0) * sig)).exp() * sig.powf(-beta)
            });
            lo = hi;
            if lo > r * r {
                let tail = lo.powf(T::one() - beta) / (beta - T::one());
                if tail < T::lit(1e-12) * acc.abs() {
                    break;
                }
            }
        }
        acc
    };
    richardson(16, eval, T::lit(1e-10))
}

/// Ratio `e^{-r^2/(4 sigma)} / sigma^{n/2+1+s} * (r^{n+2+2s} + sigma^{n/2+1+s})`
/// at a single point of the comparison inequality.
pub fn kernel_comparison_ratio<T: Real>(r: T, sigma: T, n: usize, s: FracOrder<T>) -> Result<T> {
    check_dim(n)?;
    if sigma <= T::zero() {
        return Err(Error::InvalidParameter("sigma must be > 0".into()));
    }
    let nf = T::from_count(n);
    let beta = nf * T::lit(0.5) + T::one() + s.get();
    let lhs = (-r * r / (T::lit(4.0) * sigma)).exp() * sigma.powf(-beta);
    Ok(lhs * (r.powf(nf + T::lit(2.0) + T::lit(2.0) * s.get()) + sigma.powf(beta)))
}

/// Supremum of [`kernel_comparison_ratio`] over a log-spaced `(r, sigma)`
/// sweep of `[lo, hi]^2`.
pub fn kernel_comparison_sweep<T: Real>(
    n: usize,
    s: FracOrder<T>,
    lo: T,
    hi: T,
    steps: usize,
) -> Result<T> {
    let mut max = T::zero();
    let llo = lo.ln();
    let lhi = hi.ln();
    for i in 0..steps {
        let fi = T::from_count(i) / T::from_count(steps - 1);
        let r = (llo + (lhi - llo) * fi).exp();
        for j in 0..steps {
            let fj = T::from_count(j) / T::from_count(steps - 1);
            let sigma = (llo + (lhi - llo) * fj).exp();
            let v = kernel_comparison_ratio(r, sigma, n, s)?;
            if v > max {
                max = v;
            }
        }
    }
    Ok(max)
}

/// Run `eval` with `m` and `2m` Gauss–Legendre nodes per panel; accept when
/// the two agree to `rel_tol` (relative, with a tiny absolute floor),
/// refining once more before giving up.
fn richardson<T: Real, F: Fn(&GaussRule<T>) -> T>(m: usize, eval: F, rel_tol: T) -> Result<T> {
    let mut nodes = m;
    let mut prev = eval(&rules::legendre(nodes));
    for _ in 0..3 {
        nodes *= 2;
        let next = eval(&rules::legendre(nodes));
        let delta = (next - prev).abs();
        if delta <= rel_tol * next.abs().max(T::lit(1e-300)) + T::lit(1e-300) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::DidNotConverge {
        delta: T::to_f64(&prev).unwrap_or(f64::NAN),
        tol: rel_tol.to_f64().unwrap_or(f64::NAN),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::frac;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const SQRT_PI: f64 = 1.7724538509055160273;

    #[test]
    fn gamma_reference_points() {
        assert_relative_eq!(gamma(1.0), 1.0, max_relative = 1e-13);
        assert_relative_eq!(gamma(5.0), 24.0, max_relative = 1e-13);
        assert_relative_eq!(gamma(0.5), SQRT_PI, max_relative = 1e-13);
        assert_relative_eq!(gamma(1.5), 0.5 * SQRT_PI, max_relative = 1e-13);
        // recurrence oracle: Gamma(-1/2) = Gamma(1/2)/(-1/2) = -2 sqrt(pi)
        assert_relative_eq!(gamma(-0.5), -2.0 * SQRT_PI, max_relative = 1e-12);
        assert_relative_eq!(gamma(-0.25), -4.901666809860711, max_relative = 1e-12);
        assert_relative_eq!(gamma(-0.75), -4.834146544295877, max_relative = 1e-12);
    }

    proptest! {
        // reflection identity as an independent consistency oracle:
        // Gamma(-s) Gamma(1+s) sin(pi s) = -pi
        #[test]
        fn gamma_reflection_consistency(s in 0.05f64..0.95) {
            let lhs = gamma(-s) * gamma(1.0 + s) * (std::f64::consts::PI * s).sin();
            prop_assert!((lhs + std::f64::consts::PI).abs() < 1e-10);
        }
    }

    #[test]
    fn normalization_constants() {
        // frozen from the defining formulas with Gamma(1/2) = sqrt(pi)
        let s = frac::<f64>(0.5);
        assert_relative_eq!(
            normalization_c(1, s).unwrap(),
            1.0 / (4.0 * std::f64::consts::PI),
            max_relative = 1e-13
        );
        // (4 pi)^1 * 2 sqrt(pi) = 8 pi^{3/2}
        assert_relative_eq!(
            normalization_c(2, s).unwrap(),
            1.0 / (8.0 * std::f64::consts::PI.powf(1.5)),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            normalization_a(1, s).unwrap(),
            1.0 / (2.0 * std::f64::consts::PI),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            normalization_a(3, s).unwrap(),
            1.0 / ((4.0 * std::f64::consts::PI).powf(1.5) * SQRT_PI),
            max_relative = 1e-13
        );
        assert_relative_eq!(normalization_a(3, s).unwrap(), 0.012665147955292222, max_relative = 1e-9);
        assert!(normalization_c(4, s).is_err());
    }

    proptest! {
        #[test]
        fn normalizations_positive(n in 1usize..=3, sv in 0.05f64..0.95) {
            let s = frac::<f64>(sv);
            prop_assert!(normalization_c(n, s).unwrap() > 0.0);
            prop_assert!(normalization_a(n, s).unwrap() > 0.0);
        }
    }

    #[test]
    fn gamma_tail_reference_values() {
        let s = frac::<f64>(0.5);
        assert_eq!(gamma_tail_identity(0.0, s).unwrap(), 0.0);
        // Gamma(-1/2) = -2 sqrt(pi)
        assert_relative_eq!(
            gamma_tail_identity(1.0, s).unwrap(),
            -2.0 * SQRT_PI,
            max_relative = 1e-7
        );
        // Gamma(-s) lambda^s at lambda = 4
        assert_relative_eq!(
            gamma_tail_identity(4.0, s).unwrap(),
            -4.0 * SQRT_PI,
            max_relative = 1e-7
        );
    }

    #[test]
    fn gamma_tail_scaling_constant_in_lambda() {
        // g(lambda)/lambda^s constant to better than 1e-6 relative
        for sv in [0.25, 0.5, 0.75] {
            let s = frac::<f64>(sv);
            let base = gamma_tail_identity(1.0, s).unwrap();
            for lam in [0.5, 1.0, 2.0, 4.0, 8.0] {
                let v = gamma_tail_identity(lam, s).unwrap() / lam.powf(sv);
                assert_relative_eq!(v, base, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn time_kernel_closed_form_sweep() {
        // 36-case sweep against 4^{n/2+s} Gamma(n/2+s) r^{-(n+2s)}
        for n in 1usize..=3 {
            for sv in [0.25, 0.5, 0.75] {
                for r in [0.5f64, 1.0, 2.0, 4.0] {
                    let s = frac::<f64>(sv);
                    let got = time_kernel_integral(r, n, s).unwrap();
                    let a = n as f64 / 2.0 + sv;
                    let exact = 4f64.powf(a) * gamma(a) * r.powf(-(n as f64 + 2.0 * sv));
                    assert_relative_eq!(got, exact, max_relative = 1e-8);
                }
            }
        }
    }

    #[test]
    fn time_kernel_named_values() {
        let s = frac::<f64>(0.5);
        // substitution oracle u = r^2/(4 sigma): 4 * Gamma(1) * 2^{-2} = 1
        assert_relative_eq!(time_kernel_integral(2.0, 1, s).unwrap(), 1.0, max_relative = 1e-9);
        // 4^{3/2} Gamma(3/2) = 4 sqrt(pi)
        assert_relative_eq!(
            time_kernel_integral(1.0, 2, s).unwrap(),
            4.0 * SQRT_PI,
            max_relative = 1e-9
        );
        assert!(time_kernel_integral(-1.0, 1, s).is_err());
        // monotone decrease to zero for growing r
        let mut prev = f64::INFINITY;
        for r in [1.0, 2.0, 4.0, 8.0, 16.0] {
            let v = time_kernel_integral(r, 1, s).unwrap();
            assert!(v < prev && v > 0.0);
            prev = v;
        }
    }

    #[test]
    fn kernel_comparison_properties() {
        let s = frac::<f64>(0.5);
        // r = 0: e^0 * sigma^{-beta} * sigma^{beta} = 1 exactly
        assert_relative_eq!(kernel_comparison_ratio(0.0, 1.0, 1, s).unwrap(), 1.0);
        assert_relative_eq!(kernel_comparison_ratio(0.0, 3.7, 2, s).unwrap(), 1.0);
        // exponential beats power as sigma -> 0 at fixed r
        let v = kernel_comparison_ratio(1.0, 1e-6, 1, s).unwrap();
        assert!(v < 1e-30);
        // the sweep has a finite supremum
        let max = kernel_comparison_sweep(1, s, 1e-3, 1e3, 60).unwrap();
        assert!(max.is_finite() && max > 1.0);
    }
}
