//! Closed-form space-time fields, the trait the operators act on, and the
//! field mini-language parser.
//!
//! The operators need more than pointwise values: the near-field correction
//! wants `(d/dt - Laplacian) u` at the evaluation point, and the far-field
//! truncation wants to know how the Gaussian space-average of the field
//! behaves at large time offsets. [`SpaceTimeField`] carries exactly that.

use crate::error::{Error, Result};
use crate::order::FracOrder;
use crate::scalar::Real;
use crate::special::abs_gamma_neg;
use crate::symbol::Side;

pub const MAX_DIM: usize = 3;

/// Effective support of a field: a ball in space (or all of space) times a
/// time interval. For Gaussian-class fields this is a truncation box whose
/// exterior values are below `~1e-31` relative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportBox<T> {
    pub space_radius: Option<T>,
    pub t_lo: T,
    pub t_hi: T,
}

/// A function on `R^n x R` with the side information the singular
/// integrators need. `x.len()` is the spatial dimension.
pub trait SpaceTimeField<T: Real>: Sync {
    fn value(&self, x: &[T], t: T) -> T;

    /// `du/dt` at `(x, t)`; the default uses central differences,
    /// closed-form fields override with the exact expression.
    fn time_deriv(&self, x: &[T], t: T) -> T {
        let ht = T::lit(5e-6);
        let two = T::lit(2.0);
        (self.value(x, t + ht) - self.value(x, t - ht)) / (two * ht)
    }

    /// Spatial Laplacian at `(x, t)`; default by second differences.
    fn laplacian(&self, x: &[T], t: T) -> T {
        let hx = T::lit(1.2e-4);
        let two = T::lit(2.0);
        let mut lap = T::zero();
        let center = self.value(x, t);
        let mut xb = [T::zero(); MAX_DIM];
        xb[..x.len()].copy_from_slice(x);
        for i in 0..x.len() {
            let xi = x[i];
            xb[i] = xi + hx;
            let up = self.value(&xb[..x.len()], t);
            xb[i] = xi - hx;
            let dn = self.value(&xb[..x.len()], t);
            xb[i] = xi;
            lap += (up - two * center + dn) / (hx * hx);
        }
        lap
    }

    /// `(d/dt - Laplacian) u` at `(x, t)`.
    fn heat_deriv(&self, x: &[T], t: T) -> T {
        self.time_deriv(x, t) - self.laplacian(x, t)
    }

    /// Limit of the Gaussian space-average of the field as the time offset
    /// grows (0 for decaying fields, the constant for constants, `x_i` for
    /// the degree-one monomial). Subtracting it analytically in the tail
    /// makes the operator annihilate constants exactly.
    fn mean_limit(&self, _x: &[T], _t: T) -> T {
        T::zero()
    }

    /// Bound on the truncated tail
    /// `|1/|Gamma(-s)| * integral_Sigma^inf sigma^{-1-s} (M(sigma) - mean_limit) dsigma|`
    /// where `M` is the Gaussian space-average of the field at time offset
    /// `sigma` into the past (`Side::Left`) or future (`Side::Right`).
    fn tail_bound(&self, x: &[T], t: T, sigma: T, s: FracOrder<T>, side: Side) -> T;

    /// Largest temporal frequency of the field (caps quadrature panel
    /// lengths for oscillatory integrands).
    fn time_osc_rate(&self) -> T {
        T::zero()
    }

    /// Width of the sharpest temporal structure of the field, when it has
    /// one (Gaussian time scale, bump transition width). Quadrature panels
    /// are capped at this length so the feature is always resolved.
    fn time_feature_scale(&self) -> Option<T> {
        None
    }

    /// Width of the sharpest spatial structure. Together with
    /// [`SpaceTimeField::support_hint`] this switches the spatial average
    /// from Hermite nodes (exact Gaussian weight, good while the kernel is
    /// wider than the field) to direct panels over the support once the
    /// kernel width `2 sqrt(sigma)` outgrows the field's features.
    fn space_feature_scale(&self) -> Option<T> {
        None
    }

    fn support_hint(&self) -> Option<SupportBox<T>> {
        None
    }
}

impl<T: Real, F: SpaceTimeField<T> + ?Sized> SpaceTimeField<T> for &F {
    fn value(&self, x: &[T], t: T) -> T {
        (**self).value(x, t)
    }
    fn time_deriv(&self, x: &[T], t: T) -> T {
        (**self).time_deriv(x, t)
    }
    fn laplacian(&self, x: &[T], t: T) -> T {
        (**self).laplacian(x, t)
    }
    fn heat_deriv(&self, x: &[T], t: T) -> T {
        (**self).heat_deriv(x, t)
    }
    fn mean_limit(&self, x: &[T], t: T) -> T {
        (**self).mean_limit(x, t)
    }
    fn tail_bound(&self, x: &[T], t: T, sigma: T, s: FracOrder<T>, side: Side) -> T {
        (**self).tail_bound(x, t, sigma, s, side)
    }
    fn time_osc_rate(&self) -> T {
        (**self).time_osc_rate()
    }
    fn time_feature_scale(&self) -> Option<T> {
        (**self).time_feature_scale()
    }
    fn space_feature_scale(&self) -> Option<T> {
        (**self).space_feature_scale()
    }
    fn support_hint(&self) -> Option<SupportBox<T>> {
        (**self).support_hint()
    }
}

/// Shapes of the built-in closed-form fields.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape<T> {
    /// `c`
    Constant { c: T },
    /// `cos(xi . x + rho t + phase)`
    CosWave { xi: [T; MAX_DIM], rho: T, phase: T },
    /// `exp(-a (|x|^2 + t^2))`
    Gaussian { a: T },
    /// smooth cutoff, `-1` on `B_{r1} x [-t1, t1]`, `0` outside
    /// `B_{r2} x (-t2, t2)`, C-infinity in between
    Bump { r1: T, r2: T, t1: T, t2: T },
    /// `x_axis` (0-based axis)
    Monomial { axis: usize },
    /// `exp(-ax |x|^2) exp(-at t^2)`
    SchwartzProduct { ax: T, at: T },
}

/// A built-in field: a [`Shape`] with a scalar multiplier.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticField<T> {
    pub shape: Shape<T>,
    pub scale: T,
}

impl<T: Real> AnalyticField<T> {
    pub fn new(shape: Shape<T>) -> Self {
        AnalyticField { shape, scale: T::one() }
    }

    pub fn scaled(shape: Shape<T>, scale: T) -> Self {
        AnalyticField { shape, scale }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(Shape::Constant { c: T::lit(c) })
    }

    pub fn coswave(xi: f64, rho: f64) -> Self {
        let mut v = [T::zero(); MAX_DIM];
        v[0] = T::lit(xi);
        Self::new(Shape::CosWave { xi: v, rho: T::lit(rho), phase: T::zero() })
    }

    pub fn gaussian(a: f64) -> Self {
        Self::new(Shape::Gaussian { a: T::lit(a) })
    }

    pub fn bump(r1: f64, r2: f64, t1: f64, t2: f64) -> Self {
        Self::new(Shape::Bump {
            r1: T::lit(r1),
            r2: T::lit(r2),
            t1: T::lit(t1),
            t2: T::lit(t2),
        })
    }

    pub fn monomial(axis: usize) -> Self {
        Self::new(Shape::Monomial { axis })
    }

    pub fn schwartz(ax: f64, at: f64) -> Self {
        Self::new(Shape::SchwartzProduct { ax: T::lit(ax), at: T::lit(at) })
    }

    /// Analytic membership in the slowly increasing space: true for all
    /// built-ins except the degree-one monomial, which is a member iff
    /// `s > 1/2`.
    pub fn is_member_l2ss(&self, s: FracOrder<T>) -> bool {
        match self.shape {
            Shape::Monomial { .. } => s.get() > T::lit(0.5),
            _ => true,
        }
    }

    fn xi_dot<'a>(xi: &[T; MAX_DIM], x: &'a [T]) -> T {
        xi.iter().zip(x).map(|(&a, &b)| a * b).sum()
    }

    fn xi_norm_sq(xi: &[T; MAX_DIM], n: usize) -> T {
        xi[..n].iter().map(|&a| a * a).sum()
    }
}

/// C-infinity step: 1 for `u <= 0`, 0 for `u >= 1`, built from
/// `k(v) = exp(-1/v)`. Returns `(f, f', f'')`.
fn smooth_fall<T: Real>(u: T) -> (T, T, T) {
    if u <= T::zero() {
        return (T::one(), T::zero(), T::zero());
    }
    if u >= T::one() {
        return (T::zero(), T::zero(), T::zero());
    }
    let a = kexp(T::one() - u);
    let b = kexp(u);
    // d/du k(1-u) = -k'(1-u)
    let ap = -kexp_d1(T::one() - u);
    let bp = kexp_d1(u);
    let app = kexp_d2(T::one() - u);
    let bpp = kexp_d2(u);
    let d = a.0 + b.0;
    let dp = ap + bp;
    // f = A/D with the A'A cancellation done symbolically:
    // f' = (A'B - AB')/D^2, f'' = (A''B - AB'')/D^2 - 2 D'(A'B - AB')/D^3
    let cross1 = ap * b.0 - a.0 * bp;
    let cross2 = app * b.0 - a.0 * bpp;
    let f = a.0 / d;
    let f1 = cross1 / (d * d);
    let f2 = cross2 / (d * d) - T::lit(2.0) * dp * cross1 / (d * d * d);
    (f, f1, f2)
}

// k, k', k'' for k(v) = exp(-1/v); guarded so the power factors never meet
// an underflowed exponential as inf * 0
fn kexp<T: Real>(v: T) -> (T,) {
    if v <= T::lit(1e-3) {
        (T::zero(),)
    } else {
        ((-v.recip()).exp(),)
    }
}
fn kexp_d1<T: Real>(v: T) -> T {
    if v <= T::lit(1e-3) {
        T::zero()
    } else {
        (-v.recip()).exp() / (v * v)
    }
}
fn kexp_d2<T: Real>(v: T) -> T {
    if v <= T::lit(1e-3) {
        T::zero()
    } else {
        let iv = v.recip();
        (-iv).exp() * (iv * iv * iv * iv - T::lit(2.0) * iv * iv * iv)
    }
}

/// Radial profile of the bump in one coordinate (space uses `|x|`, time
/// `|t|`): value, first and second derivative with respect to the radius.
fn bump_profile<T: Real>(r: T, lo: T, hi: T) -> (T, T, T) {
    let w = hi - lo;
    let (f, f1, f2) = smooth_fall((r - lo) / w);
    (f, f1 / w, f2 / (w * w))
}

impl<T: Real> SpaceTimeField<T> for AnalyticField<T> {
    fn value(&self, x: &[T], t: T) -> T {
        let v = match &self.shape {
            Shape::Constant { c } => *c,
            Shape::CosWave { xi, rho, phase } => {
                (Self::xi_dot(xi, x) + *rho * t + *phase).cos()
            }
            Shape::Gaussian { a } => {
                let r2: T = x.iter().map(|&c| c * c).sum();
                (-*a * (r2 + t * t)).exp()
            }
            Shape::Bump { r1, r2, t1, t2 } => {
                let r: T = x.iter().map(|&c| c * c).sum::<T>().sqrt();
                let (xs, _, _) = bump_profile(r, *r1, *r2);
                let (ts, _, _) = bump_profile(t.abs(), *t1, *t2);
                -xs * ts
            }
            Shape::Monomial { axis } => x[*axis],
            Shape::SchwartzProduct { ax, at } => {
                let r2: T = x.iter().map(|&c| c * c).sum();
                (-*ax * r2 - *at * t * t).exp()
            }
        };
        self.scale * v
    }

    fn time_deriv(&self, x: &[T], t: T) -> T {
        let two = T::lit(2.0);
        let v = match &self.shape {
            Shape::Constant { .. } | Shape::Monomial { .. } => T::zero(),
            Shape::CosWave { xi, rho, phase } => {
                let theta = Self::xi_dot(xi, x) + *rho * t + *phase;
                -*rho * theta.sin()
            }
            Shape::Gaussian { a } => {
                let r2: T = x.iter().map(|&c| c * c).sum();
                -two * *a * t * (-*a * (r2 + t * t)).exp()
            }
            Shape::SchwartzProduct { ax, at } => {
                let r2: T = x.iter().map(|&c| c * c).sum();
                -two * *at * t * (-*ax * r2 - *at * t * t).exp()
            }
            Shape::Bump { r1, r2, t1, t2 } => {
                let r: T = x.iter().map(|&c| c * c).sum::<T>().sqrt();
                let (xs, _, _) = bump_profile(r, *r1, *r2);
                let (_, ts1, _) = bump_profile(t.abs(), *t1, *t2);
                let sgn = if t >= T::zero() { T::one() } else { -T::one() };
                -xs * ts1 * sgn
            }
        };
        self.scale * v
    }

    fn laplacian(&self, x: &[T], t: T) -> T {
        let n = T::from_count(x.len());
        let two = T::lit(2.0);
        let four = T::lit(4.0);
        let v = match &self.shape {
            Shape::Constant { .. } | Shape::Monomial { .. } => T::zero(),
            Shape::CosWave { xi, rho, phase } => {
                let theta = Self::xi_dot(xi, x) + *rho * t + *phase;
                -Self::xi_norm_sq(xi, x.len()) * theta.cos()
            }
            Shape::Gaussian { a } => {
                let r2: T = x.iter().map(|&c| c * c).sum();
                (-two * *a * n + four * *a * *a * r2) * (-*a * (r2 + t * t)).exp()
            }
            Shape::SchwartzProduct { ax, at } => {
                let r2: T = x.iter().map(|&c| c * c).sum();
                (-two * *ax * n + four * *ax * *ax * r2) * (-*ax * r2 - *at * t * t).exp()
            }
            Shape::Bump { r1, r2, t1, t2 } => {
                let r: T = x.iter().map(|&c| c * c).sum::<T>().sqrt();
                let (_, xs1, xs2) = bump_profile(r, *r1, *r2);
                let (ts, _, _) = bump_profile(t.abs(), *t1, *t2);
                // u = -X(r) W(t); the radial laplacian X'' + (n-1) X'/r
                // vanishes on both plateaus (r1 > 0 keeps r away from 0)
                if xs1 == T::zero() && xs2 == T::zero() {
                    T::zero()
                } else {
                    -(xs2 + (n - T::one()) * xs1 / r) * ts
                }
            }
        };
        self.scale * v
    }

    fn mean_limit(&self, x: &[T], _t: T) -> T {
        match &self.shape {
            Shape::Constant { c } => self.scale * *c,
            Shape::Monomial { axis } => self.scale * x[*axis],
            Shape::CosWave { xi, rho, phase } => {
                if Self::xi_norm_sq(xi, x.len()) == T::zero() && *rho == T::zero() {
                    self.scale * phase.cos()
                } else {
                    T::zero()
                }
            }
            _ => T::zero(),
        }
    }

    fn tail_bound(&self, x: &[T], t: T, sigma: T, s: FracOrder<T>, side: Side) -> T {
        let g = abs_gamma_neg(s);
        let sv = s.get();
        let base = sigma.powf(-sv) / (sv * g);
        let amp = self.scale.abs();
        match &self.shape {
            Shape::Constant { .. } | Shape::Monomial { .. } => T::zero(),
            Shape::CosWave { xi, rho, .. } => {
                let q = Self::xi_norm_sq(xi, x.len());
                if q == T::zero() && *rho == T::zero() {
                    T::zero()
                } else if q > T::zero() {
                    // |M(sigma)| <= e^{-sigma q}
                    let direct = (-sigma * q).exp() * base;
                    let ibp = (-sigma * q).exp() * sigma.powf(-T::one() - sv) / (q * g);
                    amp * direct.min(ibp)
                } else {
                    // pure time oscillation: integration by parts in sigma
                    let ibp = T::lit(2.0) * sigma.powf(-T::one() - sv) / (rho.abs() * g);
                    amp * base.min(ibp)
                }
            }
            Shape::Gaussian { a } => {
                let d = match side {
                    Side::Left => sigma - t,
                    Side::Right => sigma + t,
                }
                .max(T::zero());
                amp * (-*a * d * d).exp() * base
            }
            Shape::SchwartzProduct { at, .. } => {
                let d = match side {
                    Side::Left => sigma - t,
                    Side::Right => sigma + t,
                }
                .max(T::zero());
                amp * (-*at * d * d).exp() * base
            }
            Shape::Bump { t2, .. } => {
                let gone = match side {
                    Side::Left => sigma >= t + *t2,
                    Side::Right => sigma >= *t2 - t,
                };
                if gone {
                    T::zero()
                } else {
                    amp * base
                }
            }
        }
    }

    fn time_osc_rate(&self) -> T {
        match &self.shape {
            Shape::CosWave { rho, .. } => rho.abs(),
            _ => T::zero(),
        }
    }

    fn time_feature_scale(&self) -> Option<T> {
        match &self.shape {
            Shape::Gaussian { a } => Some(T::lit(0.5) / a.sqrt()),
            Shape::SchwartzProduct { at, .. } => Some(T::lit(0.5) / at.sqrt()),
            Shape::Bump { t1, t2, .. } => Some((*t2 - *t1) * T::lit(0.5)),
            _ => None,
        }
    }

    fn space_feature_scale(&self) -> Option<T> {
        match &self.shape {
            Shape::Gaussian { a } => Some(T::lit(0.5) / a.sqrt()),
            Shape::SchwartzProduct { ax, .. } => Some(T::lit(0.5) / ax.sqrt()),
            Shape::Bump { r1, r2, .. } => Some((*r2 - *r1) * T::lit(0.5)),
            _ => None,
        }
    }

    fn support_hint(&self) -> Option<SupportBox<T>> {
        // Gaussian boxes are truncated where the factor drops below e^{-72}
        let reach = |a: T| (T::lit(72.0) / a).sqrt();
        match &self.shape {
            Shape::Bump { r2, t2, .. } => Some(SupportBox {
                space_radius: Some(*r2),
                t_lo: -*t2,
                t_hi: *t2,
            }),
            Shape::Gaussian { a } => Some(SupportBox {
                space_radius: Some(reach(*a)),
                t_lo: -reach(*a),
                t_hi: reach(*a),
            }),
            Shape::SchwartzProduct { ax, at } => Some(SupportBox {
                space_radius: Some(reach(*ax)),
                t_lo: -reach(*at),
                t_hi: reach(*at),
            }),
            _ => None,
        }
    }
}

/// Linear combination of fields; metadata composes by linearity.
pub struct Combo<T, F> {
    pub terms: Vec<(T, F)>,
}

impl<T: Real, F: SpaceTimeField<T>> SpaceTimeField<T> for Combo<T, F> {
    fn value(&self, x: &[T], t: T) -> T {
        self.terms.iter().map(|(c, f)| *c * f.value(x, t)).sum()
    }
    fn time_deriv(&self, x: &[T], t: T) -> T {
        self.terms.iter().map(|(c, f)| *c * f.time_deriv(x, t)).sum()
    }
    fn laplacian(&self, x: &[T], t: T) -> T {
        self.terms.iter().map(|(c, f)| *c * f.laplacian(x, t)).sum()
    }
    fn mean_limit(&self, x: &[T], t: T) -> T {
        self.terms.iter().map(|(c, f)| *c * f.mean_limit(x, t)).sum()
    }
    fn tail_bound(&self, x: &[T], t: T, sigma: T, s: FracOrder<T>, side: Side) -> T {
        self.terms
            .iter()
            .map(|(c, f)| c.abs() * f.tail_bound(x, t, sigma, s, side))
            .sum()
    }
    fn time_osc_rate(&self) -> T {
        self.terms
            .iter()
            .map(|(_, f)| f.time_osc_rate())
            .fold(T::zero(), T::max)
    }
    fn time_feature_scale(&self) -> Option<T> {
        self.terms
            .iter()
            .filter_map(|(_, f)| f.time_feature_scale())
            .fold(None, |acc, v| Some(acc.map_or(v, |a: T| a.min(v))))
    }
    fn space_feature_scale(&self) -> Option<T> {
        self.terms
            .iter()
            .filter_map(|(_, f)| f.space_feature_scale())
            .fold(None, |acc, v| Some(acc.map_or(v, |a: T| a.min(v))))
    }
}

/// Space-time translate of a field: `u(x - dx, t - dt)`.
pub struct Shifted<T, F> {
    pub inner: F,
    pub dx: [T; MAX_DIM],
    pub dt: T,
}

impl<T: Real, F: SpaceTimeField<T>> Shifted<T, F> {
    fn back(&self, x: &[T]) -> [T; MAX_DIM] {
        let mut y = [T::zero(); MAX_DIM];
        for i in 0..x.len() {
            y[i] = x[i] - self.dx[i];
        }
        y
    }
}

impl<T: Real, F: SpaceTimeField<T>> SpaceTimeField<T> for Shifted<T, F> {
    fn value(&self, x: &[T], t: T) -> T {
        let y = self.back(x);
        self.inner.value(&y[..x.len()], t - self.dt)
    }
    fn time_deriv(&self, x: &[T], t: T) -> T {
        let y = self.back(x);
        self.inner.time_deriv(&y[..x.len()], t - self.dt)
    }
    fn laplacian(&self, x: &[T], t: T) -> T {
        let y = self.back(x);
        self.inner.laplacian(&y[..x.len()], t - self.dt)
    }
    fn mean_limit(&self, x: &[T], t: T) -> T {
        let y = self.back(x);
        self.inner.mean_limit(&y[..x.len()], t - self.dt)
    }
    fn tail_bound(&self, x: &[T], t: T, sigma: T, s: FracOrder<T>, side: Side) -> T {
        let y = self.back(x);
        self.inner.tail_bound(&y[..x.len()], t - self.dt, sigma, s, side)
    }
    fn time_osc_rate(&self) -> T {
        self.inner.time_osc_rate()
    }
    fn time_feature_scale(&self) -> Option<T> {
        self.inner.time_feature_scale()
    }
    fn space_feature_scale(&self) -> Option<T> {
        self.inner.space_feature_scale()
    }
    fn support_hint(&self) -> Option<SupportBox<T>> {
        let shift_norm = self.dx.iter().map(|&c| c * c).sum::<T>().sqrt();
        self.inner.support_hint().map(|b| SupportBox {
            space_radius: b.space_radius.map(|r| r + shift_norm),
            t_lo: b.t_lo + self.dt,
            t_hi: b.t_hi + self.dt,
        })
    }
}

// ------------------------------------------------------------------
// mini-language parser: kind '(' key '=' number {',' key '=' number} ')'
// ------------------------------------------------------------------

fn parse_err(token: &str, reason: &str) -> Error {
    Error::FieldParse { token: token.to_string(), reason: reason.to_string() }
}

/// Parse a field spec such as `coswave(xi=1,rho=1,phase=0)` or
/// `bump(r1=1,r2=2,t1=1,t2=4)`. Every kind accepts an optional
/// `scale=<real>` multiplier.
pub fn parse_field<T: Real>(spec: &str) -> Result<AnalyticField<T>> {
    let spec = spec.trim();
    let open = spec.find('(').ok_or_else(|| parse_err(spec, "missing `(`"))?;
    if !spec.ends_with(')') {
        return Err(parse_err(spec, "missing closing `)`"));
    }
    let kind = &spec[..open];
    let body = &spec[open + 1..spec.len() - 1];
    let mut kv: Vec<(String, f64)> = Vec::new();
    if !body.trim().is_empty() {
        for pair in body.split(',') {
            let mut it = pair.splitn(2, '=');
            let key = it.next().unwrap_or("").trim();
            let val = it
                .next()
                .ok_or_else(|| parse_err(pair.trim(), "expected key=value"))?
                .trim();
            if key.is_empty() {
                return Err(parse_err(pair.trim(), "empty key"));
            }
            let num: f64 = val
                .parse()
                .map_err(|_| parse_err(val, "not a number"))?;
            kv.push((key.to_string(), num));
        }
    }
    let mut take = |key: &str| -> Option<f64> {
        kv.iter()
            .position(|(k, _)| k == key)
            .map(|i| kv.remove(i).1)
    };
    let scale = take("scale").unwrap_or(1.0);
    let require = |opt: Option<f64>, key: &str| -> Result<f64> {
        opt.ok_or_else(|| parse_err(key, "required key missing"))
    };
    let shape = match kind {
        "constant" => Shape::Constant { c: T::lit(require(take("c"), "c")?) },
        "coswave" => {
            let mut xi = [T::zero(); MAX_DIM];
            if let Some(v) = take("xi") {
                xi[0] = T::lit(v);
            }
            for (i, name) in ["xi1", "xi2", "xi3"].iter().enumerate() {
                if let Some(v) = take(name) {
                    xi[i] = T::lit(v);
                }
            }
            Shape::CosWave {
                xi,
                rho: T::lit(take("rho").unwrap_or(0.0)),
                phase: T::lit(take("phase").unwrap_or(0.0)),
            }
        }
        "gaussian" => {
            let a = require(take("a"), "a")?;
            if a <= 0.0 {
                return Err(parse_err("a", "gaussian rate must be positive"));
            }
            Shape::Gaussian { a: T::lit(a) }
        }
        "bump" => {
            let r1 = require(take("r1"), "r1")?;
            let r2 = require(take("r2"), "r2")?;
            let t1 = require(take("t1"), "t1")?;
            let t2 = require(take("t2"), "t2")?;
            if !(0.0 < r1 && r1 < r2 && 0.0 < t1 && t1 < t2) {
                return Err(parse_err("bump", "need 0 < r1 < r2 and 0 < t1 < t2"));
            }
            Shape::Bump {
                r1: T::lit(r1),
                r2: T::lit(r2),
                t1: T::lit(t1),
                t2: T::lit(t2),
            }
        }
        "monomial" => {
            let axis = require(take("axis"), "axis")? as i64;
            if !(1..=MAX_DIM as i64).contains(&axis) {
                return Err(parse_err("axis", "axis must be 1, 2 or 3"));
            }
            Shape::Monomial { axis: axis as usize - 1 }
        }
        "schwartz_product" => {
            let ax = require(take("ax"), "ax")?;
            let at = require(take("at"), "at")?;
            if ax <= 0.0 || at <= 0.0 {
                return Err(parse_err("ax", "rates must be positive"));
            }
            Shape::SchwartzProduct { ax: T::lit(ax), at: T::lit(at) }
        }
        other => return Err(parse_err(other, "unknown field kind")),
    };
    if let Some((k, _)) = kv.first() {
        return Err(parse_err(k, "unknown key for this field kind"));
    }
    Ok(AnalyticField::scaled(shape, T::lit(scale)))
}
