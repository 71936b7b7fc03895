//! The causal fundamental solution
//! `G(x,t) = A_{n,s} e^{-|x|^2/(4t)} / t^{n/2+1-s}` for `t > 0` (zero
//! otherwise), the forced-equation solver `u = G * f` by direct
//! convolution, and the truncated-source machinery behind the decay
//! profiles.
//!
//! The convolution uses the same similarity substitution as the operator
//! quadrature: with `sigma = t - tau`, `y = x - 2 sqrt(sigma) z`,
//!
//! ```text
//! u(x,t) = 1/Gamma(s) * integral_0^inf sigma^{s-1} Mf(sigma) dsigma,
//! Mf(sigma) = pi^{-n/2} integral e^{-|z|^2} f(x - 2 sqrt(sigma) z, t - sigma) dz
//! ```
//!
//! The `sigma^{s-1}` endpoint singularity is absorbed by a Jacobi-weighted
//! rule on the first panel; the spatial average is Hermite while the kernel
//! is narrower than the source's features and switches to direct panels
//! over the support once it is wider.

use crate::error::{Error, Result};
use crate::field::{AnalyticField, SpaceTimeField, SupportBox, MAX_DIM};
use crate::order::FracOrder;
use crate::quadrature::{apply_single, OperatorParams};
use crate::rules::{self, GaussRule};
use crate::scalar::Real;
use crate::special::{abs_gamma_neg, gamma, normalization_a};
use crate::symbol::Side;
use std::collections::HashMap;
use std::sync::RwLock;

/// Floor below which the `t -> 0+, x = 0` blow-up of the kernel is reported
/// as infinity rather than evaluated.
const T_FLOOR: f64 = 1e-30;

/// The fundamental solution with its normalization `A_{n,s}`.
#[derive(Debug, Clone, Copy)]
pub struct GreensKernel<T: Real> {
    pub n: usize,
    pub s: FracOrder<T>,
    pub a: T,
}

impl<T: Real> GreensKernel<T> {
    pub fn new(n: usize, s: FracOrder<T>) -> Result<Self> {
        Ok(GreensKernel { n, s, a: normalization_a(n, s)? })
    }

    /// Pointwise kernel value; exactly zero for `t <= 0`, infinity flag in
    /// the `x = 0, t < 1e-30` corner.
    pub fn eval_g(&self, x: &[T], t: T) -> T {
        if t <= T::zero() {
            return T::zero();
        }
        let r2: T = x.iter().map(|&c| c * c).sum();
        if t < T::lit(T_FLOOR) && r2 == T::zero() {
            return T::infinity();
        }
        let nf = T::from_count(self.n);
        let expo = nf * T::lit(0.5) + T::one() - self.s.get();
        self.a * (-r2 / (T::lit(4.0) * t)).exp() * t.powf(-expo)
    }

    /// Spatial mass `integral G(x, t) dx`, evaluated with Hermite nodes
    /// (the Gaussian weight is exact); equals `t^{s-1} / Gamma(s)`.
    pub fn space_mass(&self, t: T, nodes: usize) -> T {
        if t <= T::zero() {
            return T::zero();
        }
        let hz: GaussRule<T> = rules::hermite(nodes);
        let wsum: T = hz.weights.iter().copied().sum();
        let nf = T::from_count(self.n);
        let expo = nf * T::lit(0.5) + T::one() - self.s.get();
        let jac = (T::lit(2.0) * t.sqrt()).powf(nf);
        self.a * t.powf(-expo) * jac * wsum.powf(nf)
    }
}

/// Anything convolvable against the kernel: an evaluation plus the box that
/// carries (effectively) all of its mass.
pub trait Source<T: Real>: Sync {
    fn eval(&self, x: &[T], t: T) -> T;
    fn support(&self) -> SupportBox<T>;
    fn time_feature_scale(&self) -> Option<T> {
        None
    }
    fn space_feature_scale(&self) -> Option<T> {
        None
    }
}

impl<T: Real, S: Source<T> + ?Sized> Source<T> for &S {
    fn eval(&self, x: &[T], t: T) -> T {
        (**self).eval(x, t)
    }
    fn support(&self) -> SupportBox<T> {
        (**self).support()
    }
    fn time_feature_scale(&self) -> Option<T> {
        (**self).time_feature_scale()
    }
    fn space_feature_scale(&self) -> Option<T> {
        (**self).space_feature_scale()
    }
}

/// C2 quintic smoothstep cutoff: 1 for `u <= 0`, 0 for `u >= 1`.
pub fn quintic_fall<T: Real>(u: T) -> T {
    if u <= T::zero() {
        T::one()
    } else if u >= T::one() {
        T::zero()
    } else {
        let u2 = u * u;
        let u3 = u2 * u;
        T::one() - (T::lit(6.0) * u2 - T::lit(15.0) * u + T::lit(10.0)) * u3
    }
}

/// A forcing term for the solver: a closed-form field, its truncation by
/// the radial/temporal smoothsteps (1 on the half-radius set, 0 outside
/// `B_R x (-R^2, R^2)`), or a constant-in-space time slab.
#[derive(Debug, Clone)]
pub enum SourceSpec<T> {
    Plain(AnalyticField<T>),
    Truncated { field: AnalyticField<T>, radius: T },
    TimeSlab { level: T, t_lo: T, t_hi: T },
}

impl<T: Real> SourceSpec<T> {
    pub fn plain(field: AnalyticField<T>) -> Result<Self> {
        if field.support_hint().is_none() {
            return Err(Error::InvalidParameter(
                "plain sources must decay (gaussian-class or bump); truncate otherwise".into(),
            ));
        }
        Ok(SourceSpec::Plain(field))
    }

    pub fn truncated(field: AnalyticField<T>, radius: T) -> Result<Self> {
        if !(radius > T::zero()) {
            return Err(Error::InvalidParameter("truncation radius must be positive".into()));
        }
        Ok(SourceSpec::Truncated { field, radius })
    }

    /// Cutoff factor `phi_R(x) eta_R(t)` of the truncated variant.
    pub fn cutoff(radius: T, x: &[T], t: T) -> T {
        let half = radius * T::lit(0.5);
        let r: T = x.iter().map(|&c| c * c).sum::<T>().sqrt();
        let r2 = radius * radius;
        let half_t = r2 * T::lit(0.5);
        quintic_fall((r - half) / half) * quintic_fall((t.abs() - half_t) / half_t)
    }
}

impl<T: Real> Source<T> for SourceSpec<T> {
    fn eval(&self, x: &[T], t: T) -> T {
        match self {
            SourceSpec::Plain(f) => f.value(x, t),
            SourceSpec::Truncated { field, radius } => {
                let c = Self::cutoff(*radius, x, t);
                if c == T::zero() {
                    T::zero()
                } else {
                    field.value(x, t) * c
                }
            }
            SourceSpec::TimeSlab { level, t_lo, t_hi } => {
                if t > *t_lo && t < *t_hi {
                    *level
                } else {
                    T::zero()
                }
            }
        }
    }

    fn support(&self) -> SupportBox<T> {
        match self {
            SourceSpec::Plain(f) => f.support_hint().expect("plain source must decay"),
            SourceSpec::Truncated { field, radius } => {
                let r2 = *radius * *radius;
                match field.support_hint() {
                    Some(b) => SupportBox {
                        space_radius: Some(
                            b.space_radius.map_or(*radius, |r| r.min(*radius)),
                        ),
                        t_lo: b.t_lo.max(-r2),
                        t_hi: b.t_hi.min(r2),
                    },
                    None => SupportBox { space_radius: Some(*radius), t_lo: -r2, t_hi: r2 },
                }
            }
            SourceSpec::TimeSlab { t_lo, t_hi, .. } => {
                SupportBox { space_radius: None, t_lo: *t_lo, t_hi: *t_hi }
            }
        }
    }

    fn time_feature_scale(&self) -> Option<T> {
        match self {
            SourceSpec::Plain(f) => f.time_feature_scale(),
            SourceSpec::Truncated { field, radius } => {
                let cut = *radius * *radius * T::lit(0.25);
                Some(field.time_feature_scale().map_or(cut, |v| v.min(cut)))
            }
            SourceSpec::TimeSlab { t_lo, t_hi, .. } => Some((*t_hi - *t_lo) * T::lit(0.25)),
        }
    }

    fn space_feature_scale(&self) -> Option<T> {
        match self {
            SourceSpec::Plain(f) => f.space_feature_scale(),
            SourceSpec::Truncated { field, radius } => {
                let cut = *radius * T::lit(0.25);
                Some(field.space_feature_scale().map_or(cut, |v| v.min(cut)))
            }
            SourceSpec::TimeSlab { .. } => None,
        }
    }
}

/// Discretization controls for the convolution.
#[derive(Debug, Clone)]
pub struct ConvolveControls<T> {
    pub jacobi_nodes: usize,
    pub time_nodes: usize,
    pub space_nodes: usize,
    /// double all node families once and reject if the value moves by more
    /// than 1e-6 relative / 1e-8 absolute
    pub check: bool,
    /// evaluate with this support box instead of the source's own (used to
    /// compare sources of different truncation radii on identical nodes)
    pub support_override: Option<SupportBox<T>>,
}

impl<T: Real> Default for ConvolveControls<T> {
    fn default() -> Self {
        ConvolveControls {
            jacobi_nodes: 16,
            time_nodes: 12,
            space_nodes: 24,
            check: true,
            support_override: None,
        }
    }
}

/// Convolve the source with the kernel at one point:
/// `u(x,t) = integral integral G(x-y, t-tau) f(y, tau) dy dtau`.
pub fn convolve<T: Real, S: Source<T>>(
    source: &S,
    kernel: &GreensKernel<T>,
    x: &[T],
    t: T,
    ctrl: &ConvolveControls<T>,
) -> Result<T> {
    let v1 = convolve_pass(source, kernel, x, t, ctrl, 1);
    if !ctrl.check {
        return Ok(v1);
    }
    let v2 = convolve_pass(source, kernel, x, t, ctrl, 2);
    let tol = T::lit(1e-8).max(T::lit(1e-6) * v2.abs());
    if (v2 - v1).abs() <= tol {
        Ok(v2)
    } else {
        let v3 = convolve_pass(source, kernel, x, t, ctrl, 4);
        let tol = T::lit(1e-8).max(T::lit(1e-6) * v3.abs());
        if (v3 - v2).abs() <= tol {
            Ok(v3)
        } else {
            Err(Error::DidNotConverge {
                delta: (v3 - v2).abs().to_f64().unwrap_or(f64::NAN),
                tol: tol.to_f64().unwrap_or(f64::NAN),
            })
        }
    }
}

fn convolve_pass<T: Real, S: Source<T>>(
    source: &S,
    kernel: &GreensKernel<T>,
    x: &[T],
    t: T,
    ctrl: &ConvolveControls<T>,
    refine: usize,
) -> T {
    let sup = ctrl.support_override.unwrap_or_else(|| source.support());
    let sigma_hi = t - sup.t_lo;
    if sigma_hi <= T::zero() {
        return T::zero(); // causal: no source mass in the past
    }
    let sigma_lo = (t - sup.t_hi).max(T::zero());
    let n = kernel.n;
    let s = kernel.s.get();
    let hz: GaussRule<T> = rules::hermite(ctrl.space_nodes * refine);
    let space_scale = source.space_feature_scale();
    // route switch: Hermite nodes resolve the source while the kernel is
    // narrower than its features, direct support panels afterwards
    let switch = match (space_scale, sup.space_radius) {
        (Some(scale), Some(_)) => Some(scale * scale * T::lit(0.25)),
        _ => None,
    };
    let mean = |sig: T| -> T {
        match (switch, space_scale, sup.space_radius) {
            (Some(sw), Some(scale), Some(radius)) if sig > sw => direct_space_mean(
                source,
                x,
                t - sig,
                sig,
                n,
                radius,
                scale * T::lit(0.5),
                (ctrl.space_nodes / 3).max(6) * refine,
            ),
            _ => hermite_mean(source, x, t - sig, sig, n, &hz),
        }
    };

    let cap = source.time_feature_scale();
    let mut acc = T::zero();
    let mut panel_lo = sigma_lo;
    if sigma_lo == T::zero() {
        // Jacobi-weighted first panel absorbs the sigma^{s-1} endpoint;
        // it ends no later than the route switch so its nodes stay on a
        // single quadrature route
        let mut first = sigma_hi.min(T::one());
        if let Some(sw) = switch {
            if sw < first {
                first = sw;
            }
        }
        let ju = rules::jacobi_unit(ctrl.jacobi_nodes * refine, s - T::one())
            .expect("jacobi rule");
        let mut jacc = T::zero();
        for (&u, &w) in ju.nodes.iter().zip(&ju.weights) {
            jacc += w * mean(first * u);
        }
        acc += first.powf(s) * jacc;
        panel_lo = first;
    }
    if panel_lo < sigma_hi {
        let gl: GaussRule<T> = rules::legendre(ctrl.time_nodes * refine);
        // split the panel chain at the route switch so no panel mixes the
        // two spatial-average routes
        let mut segments: Vec<(T, T)> = Vec::new();
        match switch {
            Some(sw) if sw > panel_lo && sw < sigma_hi => {
                segments.push((panel_lo, sw));
                segments.push((sw, sigma_hi));
            }
            _ => segments.push((panel_lo, sigma_hi)),
        }
        for (seg_lo, seg_hi) in segments {
            for (a, b) in rules::geometric_panels(seg_lo, seg_hi, T::lit(2.0), cap) {
                acc += gl.integrate(a, b, |sig| sig.powf(s - T::one()) * mean(sig));
            }
        }
    }
    acc / gamma(s)
}

/// Hermite form of the source mean: exact Gaussian weight, right while the
/// kernel is narrower than the source's features.
fn hermite_mean<T: Real, S: Source<T>>(
    source: &S,
    x: &[T],
    tau: T,
    sigma: T,
    n: usize,
    hz: &GaussRule<T>,
) -> T {
    let shift = T::lit(2.0) * sigma.sqrt();
    let m = hz.nodes.len();
    let total = m.pow(n as u32);
    let mut acc = T::zero();
    let mut pos = [T::zero(); MAX_DIM];
    for flat in 0..total {
        let mut rest = flat;
        let mut w = T::one();
        for i in 0..n {
            let k = rest % m;
            rest /= m;
            w = w * hz.weights[k];
            pos[i] = x[i] - shift * hz.nodes[k];
        }
        acc += w * source.eval(&pos[..n], tau);
    }
    acc / T::PI().powf(T::from_count(n) * T::lit(0.5))
}

fn direct_space_mean<T: Real, S: Source<T>>(
    source: &S,
    x: &[T],
    tau: T,
    sigma: T,
    n: usize,
    radius: T,
    scale: T,
    nodes: usize,
) -> T {
    let rule = rules::legendre::<T>(nodes);
    let panels = ((radius * T::lit(2.0) / scale).to_f64().unwrap_or(8.0).ceil() as usize)
        .clamp(2, 256);
    let width = radius * T::lit(2.0) / T::from_count(panels);
    let mut axis: Vec<(T, T)> = Vec::with_capacity(panels * nodes);
    for p in 0..panels {
        let lo = -radius + width * T::from_count(p);
        let mid = lo + width * T::lit(0.5);
        let rad = width * T::lit(0.5);
        for (&xn, &wn) in rule.nodes.iter().zip(&rule.weights) {
            axis.push((mid + rad * xn, wn * rad));
        }
    }
    let m = axis.len();
    let total = m.pow(n as u32);
    let inv4sig = (T::lit(4.0) * sigma).recip();
    let mut acc = T::zero();
    let mut pos = [T::zero(); MAX_DIM];
    for flat in 0..total {
        let mut rest = flat;
        let mut w = T::one();
        for p in pos.iter_mut().take(n) {
            let (y, wy) = axis[rest % m];
            rest /= m;
            *p = y;
            w = w * wy;
        }
        let mut dist2 = T::zero();
        for i in 0..n {
            let d = pos[i] - x[i];
            dist2 += d * d;
        }
        acc += w * (-dist2 * inv4sig).exp() * source.eval(&pos[..n], tau);
    }
    acc * (T::lit(4.0) * T::PI() * sigma).powf(-T::from_count(n) * T::lit(0.5))
}

/// `u = G * f` as a field, with a concurrent memo cache so nested
/// quadrature can re-evaluate it cheaply. Inner convolutions run
/// single-pass; accuracy control belongs to the outer consumer.
pub struct ConvolvedField<'a, T: Real, S: Source<T>> {
    pub source: &'a S,
    pub kernel: GreensKernel<T>,
    pub ctrl: ConvolveControls<T>,
    cache: RwLock<HashMap<[u64; MAX_DIM + 1], u64>>,
}

impl<'a, T: Real, S: Source<T>> ConvolvedField<'a, T, S> {
    pub fn new(source: &'a S, kernel: GreensKernel<T>, mut ctrl: ConvolveControls<T>) -> Self {
        ctrl.check = false;
        ConvolvedField { source, kernel, ctrl, cache: RwLock::new(HashMap::new()) }
    }

    fn key(x: &[T], t: T) -> [u64; MAX_DIM + 1] {
        let mut k = [0u64; MAX_DIM + 1];
        for (i, &c) in x.iter().enumerate() {
            k[i] = c.to_f64().unwrap().to_bits();
        }
        k[MAX_DIM] = t.to_f64().unwrap().to_bits();
        k
    }
}

impl<'a, T: Real, S: Source<T>> SpaceTimeField<T> for ConvolvedField<'a, T, S> {
    fn value(&self, x: &[T], t: T) -> T {
        let key = Self::key(x, t);
        if let Some(bits) = self.cache.read().unwrap().get(&key) {
            return T::lit(f64::from_bits(*bits));
        }
        let v = convolve_pass(self.source, &self.kernel, x, t, &self.ctrl, 1);
        self.cache
            .write()
            .unwrap()
            .insert(key, v.to_f64().unwrap().to_bits());
        v
    }

    fn tail_bound(&self, _x: &[T], t: T, sigma: T, s: FracOrder<T>, side: Side) -> T {
        match side {
            Side::Left => {
                // u vanishes identically before the source's past horizon
                let horizon = t - self.source.support().t_lo;
                if sigma >= horizon {
                    T::zero()
                } else {
                    let sv = s.get();
                    sigma.powf(-sv) / (sv * abs_gamma_neg(s))
                }
            }
            // future side unbounded; report the crude envelope
            Side::Right => {
                let sv = s.get();
                sigma.powf(-sv) / (sv * abs_gamma_neg(s))
            }
        }
    }

    fn time_feature_scale(&self) -> Option<T> {
        self.source.time_feature_scale()
    }
}

/// Maximum relative defect `|L u - f| / max |f|` of the convolution
/// solution `u = G * f` against the forcing at the given points, where `L`
/// is the pointwise left-operator quadrature.
pub fn greens_inversion_residual<T: Real, S: Source<T>>(
    source: &S,
    kernel: &GreensKernel<T>,
    params: &OperatorParams<T>,
    ctrl: &ConvolveControls<T>,
    points: &[(Vec<T>, T)],
) -> Result<T> {
    // the operator integrand is itself a (cached) convolution, so the outer
    // evaluation runs single-pass; the 5e-2 residual budget owns the noise
    let u = ConvolvedField::new(source, *kernel, ctrl.clone());
    let mut worst = T::zero();
    let mut fmax = T::zero();
    let mut defects = Vec::with_capacity(points.len());
    for (x, t) in points {
        let lu = apply_single(&u, x, *t, params, Side::Left).value;
        let f = source.eval(x, *t);
        defects.push((lu - f).abs());
        fmax = fmax.max(f.abs());
    }
    let denom = fmax.max(T::lit(1e-12));
    for d in defects {
        worst = worst.max(d / denom);
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileDirection {
    Space,
    Time,
}

/// Decay data of the truncated-source solution along one direction:
/// pointwise samples of `u = G * f_R` and the uniform-in-time kernel
/// envelope that dominates them (power `-(n-2s)` in space for `n > 2s`,
/// `-(1-s)` in time).
#[derive(Debug, Clone)]
pub struct DecayProfile<T> {
    pub magnitudes: Vec<T>,
    pub positions: Vec<(Vec<T>, T)>,
    pub values: Vec<T>,
    pub envelope: Vec<T>,
}

pub fn vr_decay_profile<T: Real>(
    source: &SourceSpec<T>,
    kernel: &GreensKernel<T>,
    direction: ProfileDirection,
    magnitudes: &[T],
    ctrl: &ConvolveControls<T>,
) -> Result<DecayProfile<T>> {
    let sup = source.support();
    let radius = sup.space_radius.ok_or_else(|| {
        Error::InvalidParameter("decay profiles need a spatially truncated source".into())
    })?;
    let n = kernel.n;
    let s = kernel.s.get();
    let nf = T::from_count(n);
    if direction == ProfileDirection::Space && nf <= T::lit(2.0) * s {
        return Err(Error::InvalidParameter(
            "spatial envelope requires n > 2s".into(),
        ));
    }
    let m_sup = source_sup_estimate(source, n, radius, sup.t_lo, sup.t_hi);
    let gl = rules::legendre::<T>(24);

    let mut positions = Vec::new();
    let mut values = Vec::new();
    let mut envelope = Vec::new();
    for &m in magnitudes {
        let (x, t): (Vec<T>, T) = match direction {
            ProfileDirection::Space => {
                let mut x = vec![T::zero(); n];
                x[0] = m * radius;
                (x, T::zero())
            }
            ProfileDirection::Time => (vec![T::zero(); n], m * radius * radius),
        };
        let v = convolve(source, kernel, &x, t, ctrl)?;
        let env = match direction {
            ProfileDirection::Space => {
                // A * 4^{n/2-s} Gamma(n/2-s) * M * integral_{B_R} |x-y|^{2s-n} dy
                let c = kernel.a
                    * T::lit(4.0).powf(nf * T::lit(0.5) - s)
                    * gamma(nf * T::lit(0.5) - s)
                    * m_sup;
                c * ball_riesz_integral(&x, radius, n, T::lit(2.0) * s - nf, &gl)
            }
            ProfileDirection::Time => {
                // A (4 pi)^{n/2} M * integral_{t_lo}^{t_hi} (t-tau)^{s-1} dtau
                let c = kernel.a
                    * (T::lit(4.0) * T::PI()).powf(nf * T::lit(0.5))
                    * m_sup;
                c * gl.integrate(sup.t_lo, sup.t_hi, |tau| (t - tau).powf(s - T::one()))
            }
        };
        positions.push((x, t));
        values.push(v);
        envelope.push(env);
    }
    Ok(DecayProfile { magnitudes: magnitudes.to_vec(), positions, values, envelope })
}

/// `integral_{B_R} |x - y|^{p} dy` for a point outside the ball, by radial
/// times spherical quadrature (p negative).
fn ball_riesz_integral<T: Real>(
    x: &[T],
    radius: T,
    n: usize,
    p: T,
    gl: &GaussRule<T>,
) -> T {
    match n {
        1 => gl.integrate(-radius, radius, |y| (x[0] - y).abs().powf(p)),
        2 => gl.integrate(T::zero(), radius, |r| {
            let mut ang = T::zero();
            let m = 64usize;
            for j in 0..m {
                let th = T::lit(2.0) * T::PI() * T::from_count(j) / T::from_count(m);
                let dx = x[0] - r * th.cos();
                let dy = x[1] - r * th.sin();
                ang += (dx * dx + dy * dy).sqrt().powf(p);
            }
            r * ang * T::lit(2.0) * T::PI() / T::from_count(m)
        }),
        _ => gl.integrate(T::zero(), radius, |r| {
            // exploit radial symmetry of |x - y| about the x-axis
            let mut acc = T::zero();
            let m = 32usize;
            for j in 0..m {
                let th = T::PI() * (T::from_count(j) + T::lit(0.5)) / T::from_count(m);
                let dx = x[0] - r * th.cos();
                let rho = r * th.sin();
                let d = (dx * dx + rho * rho + x[1] * x[1] + x[2] * x[2]).sqrt();
                acc += d.powf(p) * th.sin() * T::PI() / T::from_count(m);
            }
            r * r * acc * T::lit(2.0) * T::PI()
        }),
    }
}

/// Sampled supremum of `|f|` over the support box (17 points per axis).
fn source_sup_estimate<T: Real, S: Source<T>>(
    source: &S,
    n: usize,
    radius: T,
    t_lo: T,
    t_hi: T,
) -> T {
    let steps = 17usize;
    let mut sup = T::zero();
    let mut x = [T::zero(); MAX_DIM];
    let total = steps.pow(n as u32);
    for it in 0..steps {
        let t = t_lo
            + (t_hi - t_lo) * T::from_count(it) / T::from_count(steps - 1);
        for flat in 0..total {
            let mut rest = flat;
            for xi in x.iter_mut().take(n) {
                let i = rest % steps;
                rest /= steps;
                *xi = -radius
                    + radius * T::lit(2.0) * T::from_count(i) / T::from_count(steps - 1);
            }
            sup = sup.max(source.eval(&x[..n], t).abs());
        }
    }
    sup
}
