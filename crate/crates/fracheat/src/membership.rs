//! Numerical membership test for the slowly increasing function space: the
//! weighted integral of `|u|` against
//! `1 / (1 + |x|^{n+2+2s} + |t|^{n/2+1+s})` over parabolic dyadic shells
//! `max(|x|, sqrt(|t|)) in (lambda, 2 lambda]`. The field is a member when
//! the shell contributions decrease geometrically; the decision uses the
//! ratio of the last two shells with a 0.05 tolerance band around 1.

use crate::error::{Error, Result};
use crate::field::{AnalyticField, Shape, SpaceTimeField};
use crate::order::FracOrder;
use crate::rules::{self, GaussRule};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Member,
    NonMember,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MembershipReport<T> {
    pub verdict: Membership,
    /// weighted integral over the full truncation box
    pub integral_estimate: T,
    /// contribution of each dyadic shell, innermost box first
    pub shell_contributions: Vec<T>,
    /// ratio of the last two shells
    pub last_ratio: T,
    pub ratio_tolerance: T,
}

/// Decide membership of `field` in the weighted space by integrating
/// `|u| * weight` over `|x| <= r_max`, `|t| <= r_max^2` on a log-graded
/// mesh and testing the dyadic-shell trend. `r_max` must exceed 1 and is
/// rounded up to the next power of two.
pub fn membership_l2ss<T: Real>(
    field: &AnalyticField<T>,
    n: usize,
    s: FracOrder<T>,
    r_max: T,
) -> Result<MembershipReport<T>> {
    if !(1..=3).contains(&n) {
        return Err(Error::InvalidParameter("dimension must be 1..=3".into()));
    }
    if !(r_max > T::one()) {
        return Err(Error::InvalidParameter("r_max must exceed 1".into()));
    }
    let shells = r_max.log2().ceil().to_f64().unwrap() as usize;
    let spatial_osc = match &field.shape {
        Shape::CosWave { xi, .. } => xi[..n].iter().map(|&c| c * c).sum::<T>().sqrt(),
        _ => T::zero(),
    };
    let temporal_osc = field.time_osc_rate();

    let mut contributions = Vec::with_capacity(shells + 1);
    // innermost parabolic box max(|x|, sqrt|t|) <= 1
    contributions.push(box_integral(
        field, n, s, T::zero(), T::one(), T::zero(), T::one(), spatial_osc, temporal_osc,
    ));
    let mut lambda = T::one();
    for _ in 0..shells {
        let next = lambda * T::lit(2.0);
        // shell = {lambda < max(|x|, sqrt|t|) <= 2 lambda}, split into the
        // spatial annulus (full time range) and the inner cylinder with the
        // outer time annulus
        let p1 = box_integral(
            field, n, s, lambda, next, T::zero(), next * next, spatial_osc, temporal_osc,
        );
        let p2 = box_integral(
            field, n, s, T::zero(), lambda, lambda * lambda, next * next, spatial_osc,
            temporal_osc,
        );
        contributions.push(p1 + p2);
        lambda = next;
    }

    let total: T = contributions.iter().copied().sum();
    let k = contributions.len();
    let tol = T::lit(0.05);
    let last = contributions[k - 1];
    let prev = contributions[k - 2];
    let ratio = if prev > T::zero() { last / prev } else { T::zero() };
    let verdict = if ratio < T::one() - tol {
        Membership::Member
    } else if ratio > T::one() + tol {
        Membership::NonMember
    } else {
        Membership::Inconclusive
    };
    Ok(MembershipReport {
        verdict,
        integral_estimate: total,
        shell_contributions: contributions,
        last_ratio: ratio,
        ratio_tolerance: tol,
    })
}

/// Weighted integral of `|u|` over `r in (r_lo, r_hi], |t| in (t_lo, t_hi]`
/// with `r = |x|`; radial-angular in space, symmetric in time.
#[allow(clippy::too_many_arguments)]
fn box_integral<T: Real>(
    field: &AnalyticField<T>,
    n: usize,
    s: FracOrder<T>,
    r_lo: T,
    r_hi: T,
    t_lo: T,
    t_hi: T,
    spatial_osc: T,
    temporal_osc: T,
) -> T {
    let gl = rules::legendre::<T>(10);
    let sphere = sphere_rule::<T>(n, 48);
    let sv = s.get();
    let nf = T::from_count(n);
    let wt_pow_x = nf + T::lit(2.0) + T::lit(2.0) * sv;
    let wt_pow_t = nf * T::lit(0.5) + T::one() + sv;

    let cap = |osc: T| {
        if osc > T::zero() {
            Some(T::lit(1.5) / osc)
        } else {
            None
        }
    };
    let r_panels = split_panels(r_lo, r_hi, cap(spatial_osc));
    let t_panels = split_panels(t_lo, t_hi, cap(temporal_osc));

    let mut acc = T::zero();
    let mut xbuf = [T::zero(); crate::field::MAX_DIM];
    for &(ra, rb) in &r_panels {
        for &(ta, tb) in &t_panels {
            acc += gl.integrate(ra, rb, |r| {
                let area = match n {
                    1 => T::one(),
                    2 => r,
                    _ => r * r,
                };
                gl.integrate(ta, tb, |tau| {
                    let weight = (T::one() + r.powf(wt_pow_x) + tau.powf(wt_pow_t)).recip();
                    // angular average of |u| at radius r, both time signs
                    let mut ang = T::zero();
                    for (dir, w) in &sphere {
                        for i in 0..n {
                            xbuf[i] = r * dir[i];
                        }
                        ang += *w
                            * (field.value(&xbuf[..n], tau).abs()
                                + field.value(&xbuf[..n], -tau).abs());
                    }
                    weight * area * ang
                })
            });
        }
    }
    acc
}

/// Equal-width panels; shells are single octaves so geometric grading is
/// unnecessary, but oscillatory fields cap the panel length.
fn split_panels<T: Real>(lo: T, hi: T, cap: Option<T>) -> Vec<(T, T)> {
    let span = hi - lo;
    let base = 4usize;
    let count = match cap {
        Some(c) if c > T::zero() => {
            let needed = (span / c).to_f64().unwrap_or(0.0).ceil() as usize;
            needed.max(base).min(4096)
        }
        _ => base,
    };
    let width = span / T::from_count(count);
    (0..count)
        .map(|i| (lo + width * T::from_count(i), lo + width * T::from_count(i + 1)))
        .collect()
}

/// Unit-sphere cubature: direction/weight pairs whose weights sum to the
/// sphere measure. Two points for n=1, trapezoid on the circle for n=2,
/// Gauss x trapezoid product for n=3.
fn sphere_rule<T: Real>(n: usize, azimuth: usize) -> Vec<([T; 3], T)> {
    match n {
        1 => vec![
            ([T::one(), T::zero(), T::zero()], T::one()),
            ([-T::one(), T::zero(), T::zero()], T::one()),
        ],
        2 => {
            let m = azimuth;
            let w = T::lit(2.0) * T::PI() / T::from_count(m);
            (0..m)
                .map(|j| {
                    let th = T::lit(2.0) * T::PI() * T::from_count(j) / T::from_count(m);
                    ([th.cos(), th.sin(), T::zero()], w)
                })
                .collect()
        }
        _ => {
            let gl: GaussRule<T> = rules::legendre(12);
            let m = azimuth / 2;
            let wphi = T::lit(2.0) * T::PI() / T::from_count(m);
            let mut out = Vec::with_capacity(12 * m);
            for (&c, &wc) in gl.nodes.iter().zip(&gl.weights) {
                let sin_th = (T::one() - c * c).sqrt();
                for j in 0..m {
                    let phi = T::lit(2.0) * T::PI() * T::from_count(j) / T::from_count(m);
                    out.push(([sin_th * phi.cos(), sin_th * phi.sin(), c], wc * wphi));
                }
            }
            out
        }
    }
}
