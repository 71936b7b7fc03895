//! Gaussian quadrature rules (Legendre, Hermite, Jacobi) computed by the
//! Golub–Welsch eigenvalue method, plus panel helpers used by the singular
//! integrators.
//!
//! Nodes and weights come from the symmetric tridiagonal Jacobi matrix of the
//! orthogonal-polynomial recurrence; weights are `mu0 * v0^2` with `v0` the
//! first component of the normalized eigenvector.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::gamma;

/// A one-dimensional Gaussian rule. For Hermite the weights already contain
/// the `exp(-x^2)` factor; for the shifted Jacobi rule they contain the
/// `u^beta` endpoint singularity.
#[derive(Debug, Clone)]
pub struct GaussRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussRule<T> {
    /// Integrate `f` over `[a, b]` treating the rule as a reference rule on
    /// `[-1, 1]`.
    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        let half = T::lit(0.5);
        let mid = (a + b) * half;
        let rad = (b - a) * half;
        let mut acc = T::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + rad * x);
        }
        acc * rad
    }
}

/// QL algorithm with implicit shifts on a symmetric tridiagonal matrix,
/// tracking only the first row of the eigenvector matrix.
///
/// `d` holds the diagonal, `e` the subdiagonal (`e[i]` couples `i` and
/// `i+1`); on return `d` holds eigenvalues and `z` the first components.
fn tridiag_ql<T: Real>(d: &mut [T], e: &mut [T], z: &mut [T]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let eps = T::epsilon();
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::InvalidParameter(
                    "tridiagonal eigensolver failed to converge".into(),
                ));
            }
            let two = T::lit(2.0);
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            let denom = g + r.copysign(if g >= T::zero() { T::one() } else { -T::one() });
            g = d[m] - d[l] + e[l] / denom;
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();
            let mut underflowed = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflowed {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

/// Build a rule from recurrence coefficients: diagonal `a`, subdiagonal `b`
/// (length `n-1`), and zeroth moment `mu0` of the weight.
fn golub_welsch<T: Real>(a: Vec<T>, b: Vec<T>, mu0: T) -> Result<GaussRule<T>> {
    let n = a.len();
    let mut d = a;
    let mut e = vec![T::zero(); n];
    e[..n - 1].copy_from_slice(&b);
    let mut z = vec![T::zero(); n];
    z[0] = T::one();
    tridiag_ql(&mut d, &mut e, &mut z)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let nodes: Vec<T> = order.iter().map(|&i| d[i]).collect();
    let weights: Vec<T> = order.iter().map(|&i| mu0 * z[i] * z[i]).collect();
    Ok(GaussRule { nodes, weights })
}

/// Gauss–Legendre rule on `[-1, 1]`.
pub fn legendre<T: Real>(n: usize) -> GaussRule<T> {
    assert!(n >= 1);
    let a = vec![T::zero(); n];
    let b: Vec<T> = (1..n)
        .map(|k| {
            let kf = T::from_count(k);
            kf / (T::lit(4.0) * kf * kf - T::one()).sqrt()
        })
        .collect();
    golub_welsch(a, b, T::lit(2.0)).expect("legendre rule")
}

/// Gauss–Hermite rule for `exp(-x^2)` on the whole line. The weights sum to
/// `sqrt(pi)` and the node set is symmetric about zero.
pub fn hermite<T: Real>(n: usize) -> GaussRule<T> {
    assert!(n >= 1);
    let a = vec![T::zero(); n];
    let b: Vec<T> = (1..n)
        .map(|k| (T::from_count(k) * T::lit(0.5)).sqrt())
        .collect();
    let mut rule = golub_welsch(a, b, T::PI().sqrt()).expect("hermite rule");
    // Enforce exact symmetry of the computed nodes; odd moments then cancel
    // pairwise without roundoff.
    let m = rule.nodes.len();
    for i in 0..m / 2 {
        let x = (rule.nodes[m - 1 - i] - rule.nodes[i]) * T::lit(0.5);
        rule.nodes[m - 1 - i] = x;
        rule.nodes[i] = -x;
        let w = (rule.weights[i] + rule.weights[m - 1 - i]) * T::lit(0.5);
        rule.weights[i] = w;
        rule.weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        rule.nodes[m / 2] = T::zero();
    }
    rule
}

/// Gauss–Jacobi rule for `integral_0^1 u^beta g(u) du` with `beta > -1`:
/// returns nodes in `(0, 1)` and weights absorbing the `u^beta` factor.
pub fn jacobi_unit<T: Real>(n: usize, beta: T) -> Result<GaussRule<T>> {
    assert!(n >= 1);
    if beta <= -T::one() {
        return Err(Error::InvalidParameter("jacobi beta must exceed -1".into()));
    }
    let alpha = T::zero();
    let two = T::lit(2.0);
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n.saturating_sub(1));
    a.push((beta - alpha) / (alpha + beta + two));
    for k in 1..n {
        let kf = T::from_count(k);
        let s2 = two * kf + alpha + beta;
        a.push((beta * beta - alpha * alpha) / (s2 * (s2 + two)));
        let num = T::lit(4.0) * kf * (kf + alpha) * (kf + beta) * (kf + alpha + beta);
        let den = s2 * s2 * (s2 + T::one()) * (s2 - T::one());
        b.push((num / den).sqrt());
    }
    // mu0 = 2^{alpha+beta+1} Gamma(alpha+1) Gamma(beta+1) / Gamma(alpha+beta+2)
    let mu0 = two.powf(alpha + beta + T::one()) * gamma(alpha + T::one()) * gamma(beta + T::one())
        / gamma(alpha + beta + two);
    let rule = golub_welsch(a, b, mu0)?;
    // Map [-1,1] with weight (1+x)^beta onto [0,1] with weight u^beta:
    // u = (1+x)/2 and the weight rescales by 2^{-(beta+1)}.
    let scale = two.powf(-(beta + T::one()));
    Ok(GaussRule {
        nodes: rule.nodes.iter().map(|&x| (x + T::one()) * T::lit(0.5)).collect(),
        weights: rule.weights.iter().map(|&w| w * scale).collect(),
    })
}

/// Split `[a, b]` (0 < a < b) into geometrically growing panels with the
/// given ratio, each further capped at `max_len` (for oscillatory
/// integrands). Returns panel endpoints.
pub fn geometric_panels<T: Real>(a: T, b: T, ratio: T, max_len: Option<T>) -> Vec<(T, T)> {
    debug_assert!(a > T::zero() && b > a && ratio > T::one());
    let mut panels = Vec::new();
    let mut lo = a;
    while lo < b {
        let mut hi = (lo * ratio).min(b);
        if let Some(cap) = max_len {
            if hi - lo > cap {
                hi = lo + cap;
            }
        }
        panels.push((lo, hi));
        lo = hi;
    }
    panels
}

/// Composite Gauss–Legendre integration of `f` over `[a, b]` with
/// `panels` equal subdivisions.
pub fn integrate_composite<T: Real, F: FnMut(T) -> T>(
    rule: &GaussRule<T>,
    a: T,
    b: T,
    panels: usize,
    mut f: F,
) -> T {
    let width = (b - a) / T::from_count(panels.max(1));
    let mut acc = T::zero();
    for p in 0..panels.max(1) {
        let lo = a + width * T::from_count(p);
        acc += rule.integrate(lo, lo + width, &mut f);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn legendre_five_points_match_reference() {
        // Literature values for the 5-point rule on [-1, 1].
        let rule = legendre::<f64>(5);
        let nodes = [
            -0.906179845938664,
            -0.538469310105683,
            0.0,
            0.538469310105683,
            0.906179845938664,
        ];
        let weights = [
            0.236926885056189,
            0.478628670499366,
            0.568888888888889,
            0.478628670499366,
            0.236926885056189,
        ];
        for i in 0..5 {
            assert_relative_eq!(rule.nodes[i], nodes[i], epsilon = 1e-12);
            assert_relative_eq!(rule.weights[i], weights[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let rule = legendre::<f64>(16);
        // degree 31 is the highest exactly integrable by 16 nodes
        for k in [0usize, 3, 10, 31] {
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            let got = rule.integrate(-1.0, 1.0, |x| x.powi(k as i32));
            assert_relative_eq!(got, exact, epsilon = 1e-13, max_relative = 1e-13);
        }
    }

    #[test]
    fn hermite_three_points_match_reference() {
        let rule = hermite::<f64>(3);
        let r = (1.5f64).sqrt();
        let spi = std::f64::consts::PI.sqrt();
        assert_relative_eq!(rule.nodes[0], -r, epsilon = 1e-13);
        assert_relative_eq!(rule.nodes[1], 0.0, epsilon = 1e-13);
        assert_relative_eq!(rule.nodes[2], r, epsilon = 1e-13);
        assert_relative_eq!(rule.weights[1], 2.0 * spi / 3.0, epsilon = 1e-13);
        assert_relative_eq!(rule.weights[0], spi / 6.0, epsilon = 1e-13);
    }

    #[test]
    fn hermite_moments() {
        let rule = hermite::<f64>(24);
        let spi = std::f64::consts::PI.sqrt();
        // integral e^{-x^2} x^{2m} dx = sqrt(pi) (2m-1)!! / 2^m
        let mut exact = spi;
        for m in 0..12usize {
            let got: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&x, &w)| w * x.powi(2 * m as i32))
                .sum();
            assert_relative_eq!(got, exact, max_relative = 1e-12);
            exact *= (2 * m + 1) as f64 / 2.0;
        }
        // nodes are exactly symmetric so odd moments vanish identically
        let odd: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&x, &w)| w * x.powi(3))
            .sum();
        assert!(odd.abs() < 1e-15, "odd moment {odd}");
    }

    #[test]
    fn jacobi_unit_moments() {
        for s in [0.25f64, 0.5, 0.75] {
            let beta = s - 1.0;
            let rule = jacobi_unit::<f64>(12, beta).unwrap();
            for k in 0..8usize {
                let got: f64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&u, &w)| w * u.powi(k as i32))
                    .sum();
                let exact = 1.0 / (s + k as f64);
                assert_relative_eq!(got, exact, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn panels_cover_interval() {
        let panels = geometric_panels::<f64>(1e-4, 10.0, 2.0, Some(0.5));
        assert!((panels[0].0 - 1e-4).abs() < 1e-18);
        assert!((panels.last().unwrap().1 - 10.0).abs() < 1e-12);
        for w in panels.windows(2) {
            assert_eq!(w[0].1, w[1].0);
            assert!(w[0].1 - w[0].0 <= 0.5 + 1e-12);
        }
    }
}
