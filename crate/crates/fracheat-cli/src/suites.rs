//! Verification suite runners: each composes library operations into a
//! [`VerificationReport`] with one record per check.

use crate::config::RunConfig;
use fracheat::equivalence::{
    pde_residual, solve_integral_equation, Lattice, NonlinearSource, SourceKind,
};
use fracheat::field::parse_field;
use fracheat::greens::{greens_inversion_residual, ConvolveControls, GreensKernel, SourceSpec};
use fracheat::membership::{membership_l2ss, Membership};
use fracheat::quadrature::apply_left;
use fracheat::report::{CheckRecord, VerificationReport};
use fracheat::symbol::{complex_power_symbol, Side, SymbolPoint};
use fracheat::verify::{
    counterexample_sharpness, decay_estimate_check, reduction_check, ReductionKind, RemoteCtrl,
};
use fracheat::{Error, Result};
use serde_json::json;

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<VerificationReport> {
    match name {
        "symbol" => symbol_suite(cfg),
        "decay" => decay_suite(cfg),
        "counterexample" => counterexample_suite(cfg),
        "reduction" => reduction_suite(cfg),
        "greens" => greens_suite(cfg),
        "membership" => membership_suite(cfg),
        "equivalence" => equivalence_suite(cfg),
        other => Err(bad(format!("unknown suite `{other}`"))),
    }
}

/// Plane-wave eigenrelation: quadrature against
/// `Re[(i rho + |xi|^2)^s e^{i theta}]`.
fn symbol_suite(cfg: &RunConfig) -> Result<VerificationReport> {
    let n = cfg.dim();
    if n != 1 {
        return Err(bad("symbol suite runs in one space dimension"));
    }
    let pairs = cfg.pairs.clone().unwrap_or_else(|| vec![[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]);
    let s_values = cfg.s_values.clone().unwrap_or_else(|| vec![0.25, 0.5, 0.75]);
    let tol = cfg.tolerance.unwrap_or(1e-3);
    let points: [(f64, f64); 2] = [(0.0, 0.0), (0.3, -0.2)];
    let mut checks = Vec::new();
    for sv in &s_values {
        let s = fracheat::FracOrder64::new(*sv)?;
        let mut params = cfg.operator_params()?;
        params.s = s;
        for [xi, rho] in &pairs {
            let field = fracheat::AnalyticField64::coswave(*xi, *rho);
            let sym = complex_power_symbol(&SymbolPoint::new(vec![*xi], *rho), s, Side::Left);
            let mut rec = CheckRecord::new(&format!("eigenrelation_xi{xi}_rho{rho}_s{sv}"))
                .param("s", json!(sv))
                .param("xi", json!(xi))
                .param("rho", json!(rho))
                .tolerance("relative_error", tol);
            let mut worst = 0.0f64;
            for (x, t) in points {
                let got = apply_left(&field, &[x], t, &params)?.value;
                let theta = xi * x + rho * t;
                let want = sym.re * theta.cos() - sym.im * theta.sin();
                let rel = (got - want).abs() / want.abs().max(1e-9);
                worst = worst.max(rel);
                rec = rec.sample(vec![x, t], got);
            }
            rec = rec.fit("max_relative_error", worst).target("max_relative_error", 0.0);
            checks.push(rec.passed(worst < tol));
        }
    }
    // optional discrete shadow on a periodic grid: the symbol annihilates
    // exactly the constant mode, and the kernel projection is the mean
    if let Some(g) = &cfg.grid {
        let grid = fracheat::grid::SpaceTimeGrid::new(n, g.l_x, g.l_t, g.n_x, g.n_t)?;
        let s = cfg.order()?;
        let constant = fracheat::grid::SampledField::sample(
            grid,
            &fracheat::AnalyticField64::constant(3.0),
        );
        let annihilated = fracheat::spectral::apply_symbol(&constant, s, Side::Left);
        let worst_const = annihilated.values.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        let mixed_field = fracheat::field::Combo {
            terms: vec![
                (1.0, fracheat::AnalyticField64::constant(2.0)),
                (1.0, fracheat::AnalyticField64::coswave(1.0, 1.0)),
            ],
        };
        let mixed = fracheat::grid::SampledField::sample(grid, &mixed_field);
        let proj = fracheat::spectral::solve_homogeneous_projection(&mixed, s);
        let proj_err = (proj.values[0] - mixed.mean()).norm();
        let residual = fracheat::spectral::apply_symbol(&proj, s, Side::Left).l2_norm();
        let pass = worst_const == 0.0 && proj_err < 1e-10 && residual < 1e-10;
        checks.push(
            CheckRecord::new("discrete_kernel")
                .param("grid_n", json!(g.n_x))
                .fit("constant_residual", worst_const)
                .fit("projection_error", proj_err)
                .fit("projected_symbol_residual", residual)
                .tolerance("residual", 1e-10)
                .passed(pass),
        );
    }
    Ok(VerificationReport::new("symbol", checks))
}

fn decay_suite(cfg: &RunConfig) -> Result<VerificationReport> {
    let spec = cfg.field.clone().unwrap_or_else(|| "schwartz_product(ax=1,at=1)".into());
    let phi: fracheat::AnalyticField64 = parse_field(&spec)?;
    let s = cfg.order()?;
    let n = cfg.dim();
    let rays = cfg.ray_specs()?;
    let reports = decay_estimate_check(&phi, n, s, &rays, &RemoteCtrl::default())?;
    let checks = reports
        .into_iter()
        .map(|r| {
            let mut rec = CheckRecord::new(&format!("decay_{:?}", r.family).to_lowercase())
                .param("s", json!(s.get()))
                .param("n", json!(n))
                .param("field", json!(spec))
                .param("two_sided", json!(r.two_sided))
                .fit("exponent", r.fitted_exponent)
                .target("exponent", r.target_exponent)
                .tolerance("exponent", r.tolerance)
                .passed(r.pass);
            for (m, v) in r.magnitudes.iter().zip(&r.values) {
                rec = rec.sample(vec![*m], *v);
            }
            rec
        })
        .collect();
    Ok(VerificationReport::new("decay", checks))
}

fn counterexample_suite(cfg: &RunConfig) -> Result<VerificationReport> {
    let s = cfg.order()?;
    let n = cfg.dim();
    let bump = match &cfg.bump {
        Some(b) => {
            parse_field(&format!("bump(r1={},r2={},t1={},t2={})", b.r1, b.r2, b.t1, b.t2))?
        }
        None => fracheat::AnalyticField64::bump(1.0, 2.0, 1.0, 4.0),
    };
    let mags = cfg.magnitudes.clone().unwrap_or_else(|| vec![100.0, 1000.0, 10000.0]);
    let r = counterexample_sharpness(n, s, &bump, &mags, &RemoteCtrl::default())?;
    let mut rec = CheckRecord::new("weighted_ratio_on_parabola")
        .param("s", json!(s.get()))
        .param("n", json!(n))
        .fit("trend_slope", r.fitted_exponent)
        .fit("ratio_floor", r.lower_bound_ratio_min.unwrap_or(0.0))
        .target("trend_slope", 0.0)
        .tolerance("trend_slope", r.tolerance)
        .passed(r.pass);
    for (m, v) in r.magnitudes.iter().zip(&r.values) {
        rec = rec.sample(vec![*m], *v);
    }
    Ok(VerificationReport::new("counterexample", vec![rec]))
}

fn reduction_suite(cfg: &RunConfig) -> Result<VerificationReport> {
    let s = cfg.order()?;
    let params = cfg.operator_params()?;
    let kinds: Vec<ReductionKind> = match &cfg.kinds {
        None => vec![
            ReductionKind::SpaceToFracLap,
            ReductionKind::TimeToMarchaud,
            ReductionKind::SToOne,
        ],
        Some(list) => list
            .iter()
            .map(|k| match k.as_str() {
                "space_to_fraclap" => Ok(ReductionKind::SpaceToFracLap),
                "time_to_marchaud" => Ok(ReductionKind::TimeToMarchaud),
                "s_to_one" => Ok(ReductionKind::SToOne),
                other => Err(bad(format!("unknown reduction kind `{other}`"))),
            })
            .collect::<Result<_>>()?,
    };
    let mut checks = Vec::new();
    for kind in kinds {
        let rep = reduction_check(kind, s, &params)?;
        let (threshold, pass) = match kind {
            ReductionKind::SToOne => {
                let errs: Vec<f64> = rep.cases.iter().map(|c| c.relative_error).collect();
                let monotone = errs.windows(2).all(|w| w[1] < w[0]);
                (5e-2, monotone && *errs.last().unwrap() < 5e-2)
            }
            _ => (1e-3, rep.max_relative_error < 1e-3),
        };
        let mut rec = CheckRecord::new(&format!("{:?}", kind).to_lowercase())
            .param("s", json!(s.get()))
            .fit("max_relative_error", rep.max_relative_error)
            .target("max_relative_error", 0.0)
            .tolerance("max_relative_error", threshold)
            .passed(pass);
        for (i, case) in rep.cases.iter().enumerate() {
            rec = rec.sample(vec![i as f64], case.relative_error);
        }
        checks.push(rec);
    }
    Ok(VerificationReport::new("reduction", checks))
}

fn greens_suite(cfg: &RunConfig) -> Result<VerificationReport> {
    let s = cfg.order()?;
    let n = cfg.dim();
    let kernel = GreensKernel::new(n, s)?;
    let params = cfg.operator_params()?;
    let spec = cfg
        .field
        .clone()
        .unwrap_or_else(|| "bump(r1=1,r2=2,t1=1,t2=4,scale=-1)".into());
    let field: fracheat::AnalyticField64 = parse_field(&spec)?;
    let source = match cfg.radius {
        Some(r) => SourceSpec::truncated(field, r)?,
        None => SourceSpec::plain(field)?,
    };
    let pts: Vec<(Vec<f64>, f64)> = vec![
        (vec![0.0], 0.0),
        (vec![0.5], 0.5),
        (vec![-0.5], -0.3),
        (vec![0.25], 0.8),
        (vec![-0.8], 0.2),
    ];
    let tol = cfg.tolerance.unwrap_or(5e-2);
    let residual =
        greens_inversion_residual(&source, &kernel, &params, &ConvolveControls::default(), &pts)?;
    let inv = CheckRecord::new("inversion_residual")
        .param("s", json!(s.get()))
        .param("n", json!(n))
        .param("source", json!(spec))
        .fit("max_relative_residual", residual)
        .target("max_relative_residual", 0.0)
        .tolerance("max_relative_residual", tol)
        .passed(residual < tol);
    // mass law: integral G(x, t) dx = t^{s-1} / Gamma(s)
    let mut mass = CheckRecord::new("space_mass_law")
        .param("s", json!(s.get()))
        .tolerance("relative_error", 1e-6);
    let mut worst = 0.0f64;
    for t in [0.25, 1.0, 4.0] {
        let got = kernel.space_mass(t, 24);
        let want = t.powf(s.get() - 1.0) / fracheat::special::gamma(s.get());
        worst = worst.max(((got - want) / want).abs());
        mass = mass.sample(vec![t], got);
    }
    mass = mass.fit("max_relative_error", worst).target("max_relative_error", 0.0);
    let mass = mass.passed(worst < 1e-6);
    Ok(VerificationReport::new("greens", vec![inv, mass]))
}

fn membership_suite(cfg: &RunConfig) -> Result<VerificationReport> {
    let spec = cfg.field.clone().unwrap_or_else(|| "monomial(axis=1)".into());
    let field: fracheat::AnalyticField64 = parse_field(&spec)?;
    let s = cfg.order()?;
    let n = cfg.dim();
    let r_max = cfg.r_max.unwrap_or(64.0);
    let report = membership_l2ss(&field, n, s, r_max)?;
    let verdict_str = match report.verdict {
        Membership::Member => "member",
        Membership::NonMember => "nonmember",
        Membership::Inconclusive => "inconclusive",
    };
    let pass = match &cfg.expected {
        Some(e) => e == verdict_str,
        None => report.verdict != Membership::Inconclusive,
    };
    let mut rec = CheckRecord::new("membership")
        .param("s", json!(s.get()))
        .param("n", json!(n))
        .param("field", json!(spec))
        .param("verdict", json!(verdict_str))
        .param("expected", json!(cfg.expected))
        .fit("last_shell_ratio", report.last_ratio)
        .fit("integral_estimate", report.integral_estimate)
        .tolerance("ratio_band", report.ratio_tolerance)
        .passed(pass);
    for (i, c) in report.shell_contributions.iter().enumerate() {
        rec = rec.sample(vec![i as f64], *c);
    }
    Ok(VerificationReport::new("membership", vec![rec]))
}

fn equivalence_suite(cfg: &RunConfig) -> Result<VerificationReport> {
    let s = cfg.order()?;
    let n = cfg.dim();
    let kernel = GreensKernel::new(n, s)?;
    let params = cfg.operator_params()?;
    let spec = cfg
        .field
        .clone()
        .unwrap_or_else(|| "bump(r1=1,r2=2,t1=1,t2=4,scale=-1)".into());
    let forcing: fracheat::AnalyticField64 = parse_field(&spec)?;
    let radius = cfg.radius.unwrap_or(2.0);
    let kind = match cfg.kind.as_deref().unwrap_or("pure") {
        "pure" => SourceKind::PureForcing,
        "contraction" => SourceKind::Contraction { kappa: cfg.kappa.unwrap_or(0.2) },
        other => return Err(bad(format!("unknown forcing kind `{other}`"))),
    };
    let src = NonlinearSource::new(forcing, kind, radius)?;
    let lattice = match &cfg.lattice {
        Some(l) => Lattice::new(n, l.half_x, l.half_t, l.nx, l.nt)?,
        None => Lattice::new(n, radius, radius * radius, 17, 25)?,
    };
    let tol = cfg.tolerance.unwrap_or(1e-6);
    let max_iter = cfg.max_iter.unwrap_or(50);
    let state =
        solve_integral_equation(&src, &kernel, lattice, tol, max_iter, &ConvolveControls::default())?;
    let mut conv = CheckRecord::new("picard_convergence")
        .param("s", json!(s.get()))
        .param("kind", json!(cfg.kind.as_deref().unwrap_or("pure")))
        .param("radius", json!(radius))
        .fit("iterations", state.iterations as f64);
    for (i, d) in state.diff_norms.iter().enumerate() {
        conv = conv.sample(vec![i as f64], *d);
    }
    let conv_pass = match kind {
        SourceKind::PureForcing => state.iterations == 1,
        SourceKind::Contraction { .. } => {
            let ratios_ok = state
                .diff_norms
                .windows(2)
                .all(|w| w[0] <= 1e-12 || w[1] / w[0] < 0.9);
            conv = conv.fit(
                "contraction_constant",
                state.contraction_constant.unwrap_or(f64::NAN),
            );
            ratios_ok
        }
    };
    let conv = conv.tolerance("diff_ratio", 0.9).passed(conv_pass);
    let pts: Vec<(Vec<f64>, f64)> =
        vec![(vec![0.0], 0.0), (vec![0.5], 0.5), (vec![-0.4], -0.3)];
    let res_tol = match kind {
        SourceKind::PureForcing => 5e-2,
        SourceKind::Contraction { .. } => 1e-1,
    };
    let residual =
        pde_residual(&state, &src, &kernel, &params, &ConvolveControls::default(), &pts)?;
    let res = CheckRecord::new("pde_residual")
        .param("s", json!(s.get()))
        .fit("max_relative_residual", residual)
        .target("max_relative_residual", 0.0)
        .tolerance("max_relative_residual", res_tol)
        .passed(residual < res_tol);
    Ok(VerificationReport::new("equivalence", vec![conv, res]))
}
