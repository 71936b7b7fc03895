//! Acceptance suite: every release criterion as a runnable check at its
//! stated tolerance, one printed pass/fail line per criterion
//! (`cargo test --test acceptance -- --nocapture` to see them).

use fracheat::equivalence::{
    pde_residual, solve_integral_equation, Lattice, NonlinearSource, SourceKind,
};
use fracheat::field::{AnalyticField, Shape, SupportBox};
use fracheat::greens::{
    greens_inversion_residual, ConvolveControls, GreensKernel, SourceSpec,
};
use fracheat::grid::{SampledField, SpaceTimeGrid};
use fracheat::membership::{membership_l2ss, Membership};
use fracheat::quadrature::{
    adjointness_residual, apply_left, OperatorParams, PairingBox,
};
use fracheat::special::{gamma, gamma_tail_identity, time_kernel_integral};
use fracheat::spectral::{apply_symbol, solve_homogeneous_projection};
use fracheat::symbol::{complex_power_symbol, Side, SymbolPoint};
use fracheat::verify::{
    counterexample_sharpness, decay_estimate_check, RaySpec, ReductionKind, RemoteCtrl,
    reduction_check,
};
use fracheat::{frac, FracOrder64};

type F = AnalyticField<f64>;

fn conclude(criterion: usize, name: &str, pass: bool, detail: String) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {criterion} ({name}): {detail}");
    assert!(pass, "criterion {criterion} ({name}) failed: {detail}");
}

#[test]
fn criterion_1_symbol_identity() {
    // plane-wave eigenrelation, relative error < 1e-3 across orders
    let mut worst = 0.0f64;
    for sv in [0.25, 0.5, 0.75] {
        let s = frac::<f64>(sv);
        let params = OperatorParams::new(1, s);
        for (xi, rho) in [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0)] {
            let field = F::coswave(xi, rho);
            let sym = complex_power_symbol(&SymbolPoint::new(vec![xi], rho), s, Side::Left);
            for (x, t) in [(0.0, 0.0), (0.3, -0.2)] {
                let got = apply_left(&field, &[x], t, &params).unwrap().value;
                let theta = xi * x + rho * t;
                let want = sym.re * theta.cos() - sym.im * theta.sin();
                worst = worst.max((got - want).abs() / want.abs().max(1e-9));
            }
        }
    }
    conclude(1, "symbol identity", worst < 1e-3, format!("max relative error {worst:.2e} (tolerance 1e-3)"));
}

#[test]
fn criterion_2_reduction_identities() {
    let s = frac::<f64>(0.5);
    let params = OperatorParams::new(1, s);
    let space = reduction_check(ReductionKind::SpaceToFracLap, s, &params)
        .unwrap()
        .max_relative_error;
    let time = reduction_check(ReductionKind::TimeToMarchaud, s, &params)
        .unwrap()
        .max_relative_error;
    let ladder = reduction_check(ReductionKind::SToOne, s, &params).unwrap();
    let errs: Vec<f64> = ladder.cases.iter().map(|c| c.relative_error).collect();
    let monotone = errs.windows(2).all(|w| w[1] < w[0]);
    let final_err = *errs.last().unwrap();
    let pass = space < 1e-3 && time < 1e-3 && monotone && final_err < 5e-2;
    conclude(
        2,
        "reduction identities",
        pass,
        format!(
            "space {space:.2e}, time {time:.2e} (tol 1e-3); s->1 errors {errs:?} end below 5e-2"
        ),
    );
}

#[test]
fn criterion_3_gamma_and_time_kernel_identities() {
    let mut worst_gamma = 0.0f64;
    for sv in [0.25, 0.5, 0.75] {
        let s = frac::<f64>(sv);
        for lam in [0.5, 1.0, 2.0, 4.0, 8.0] {
            let got = gamma_tail_identity(lam, s).unwrap();
            let want = gamma(-sv) * lam.powf(sv);
            worst_gamma = worst_gamma.max(((got - want) / want).abs());
        }
    }
    let mut worst_kernel = 0.0f64;
    for n in 1usize..=3 {
        for sv in [0.25, 0.5, 0.75] {
            for r in [0.5, 1.0, 2.0, 4.0] {
                let s = frac::<f64>(sv);
                let got = time_kernel_integral(r, n, s).unwrap();
                let a = n as f64 / 2.0 + sv;
                let want = 4f64.powf(a) * gamma(a) * r.powf(-(n as f64 + 2.0 * sv));
                worst_kernel = worst_kernel.max(((got - want) / want).abs());
            }
        }
    }
    let pass = worst_gamma < 1e-6 && worst_kernel < 1e-8;
    conclude(
        3,
        "gamma tail and time-kernel closed forms",
        pass,
        format!("gamma tail {worst_gamma:.2e} (tol 1e-6), 36-case kernel sweep {worst_kernel:.2e} (tol 1e-8)"),
    );
}

#[test]
fn criterion_4_decay_exponents() {
    let phi = F::schwartz(1.0, 1.0);
    let mut lines = Vec::new();
    let mut pass = true;
    for n in [1usize, 2] {
        let s = frac::<f64>(0.5);
        let reports =
            decay_estimate_check(&phi, n, s, &RaySpec::defaults(), &RemoteCtrl::default())
                .unwrap();
        let time_target = n as f64 / 2.0 + 1.5;
        let space_target = n as f64 + 3.0;
        let t_fit = reports[0].fitted_exponent;
        let x_fit = reports[1].fitted_exponent;
        pass &= (t_fit + time_target).abs() <= 0.15 && (x_fit + space_target).abs() <= 0.15;
        lines.push(format!(
            "n={n}: time {t_fit:.3} (target {:.1}), space {x_fit:.3} (target {:.1})",
            -time_target, -space_target
        ));
    }
    conclude(4, "decay envelope exponents", pass, format!("{} within +-0.15", lines.join("; ")));
}

#[test]
fn criterion_5_sharpness_counterexample() {
    let bump = F::bump(1.0, 2.0, 1.0, 4.0);
    let r = counterexample_sharpness(
        1,
        frac(0.5),
        &bump,
        &[100.0, 1000.0, 10000.0],
        &RemoteCtrl::default(),
    )
    .unwrap();
    let floor = r.lower_bound_ratio_min.unwrap();
    let pass = floor > 0.0 && r.fitted_exponent.abs() <= 0.05 && r.pass;
    conclude(
        5,
        "sharpness on the parabola",
        pass,
        format!("weighted-ratio floor {floor:.3e} > 0, log-trend slope {:.4} in [-0.05, 0.05]", r.fitted_exponent),
    );
}

#[test]
fn criterion_6_greens_inversion_and_mass_law() {
    let s = frac::<f64>(0.5);
    let kernel = GreensKernel::new(1, s).unwrap();
    let source = SourceSpec::plain(F::scaled(
        Shape::Bump { r1: 1.0, r2: 2.0, t1: 1.0, t2: 4.0 },
        -1.0,
    ))
    .unwrap();
    let params = OperatorParams::new(1, s);
    let pts: Vec<(Vec<f64>, f64)> = vec![
        (vec![0.0], 0.0),
        (vec![0.5], 0.5),
        (vec![-0.5], -0.3),
        (vec![0.25], 0.8),
        (vec![-0.8], 0.2),
    ];
    let residual =
        greens_inversion_residual(&source, &kernel, &params, &ConvolveControls::default(), &pts)
            .unwrap();
    let mut worst_mass = 0.0f64;
    for t in [0.25, 1.0, 4.0] {
        let got = kernel.space_mass(t, 24);
        let want = t.powf(-0.5) / gamma(0.5);
        worst_mass = worst_mass.max(((got - want) / want).abs());
    }
    let pass = residual < 5e-2 && worst_mass < 1e-6;
    conclude(
        6,
        "fundamental-solution inversion",
        pass,
        format!("inversion residual {residual:.3e} (tol 5e-2), mass law defect {worst_mass:.2e} (tol 1e-6)"),
    );
}

#[test]
fn criterion_7_integral_equation_forward_direction() {
    let s = frac::<f64>(0.5);
    let kernel = GreensKernel::new(1, s).unwrap();
    let params = OperatorParams::new(1, s);
    let positive_bump =
        || F::scaled(Shape::Bump { r1: 1.0, r2: 2.0, t1: 1.0, t2: 4.0 }, -1.0);

    // pure forcing: solve then check the pseudo-differential equation
    let src = NonlinearSource::new(positive_bump(), SourceKind::PureForcing, 2.0).unwrap();
    let lat = Lattice::new(1, 2.0, 4.0, 17, 25).unwrap();
    let state =
        solve_integral_equation(&src, &kernel, lat, 1e-6, 20, &ConvolveControls::default())
            .unwrap();
    let pts: Vec<(Vec<f64>, f64)> = vec![
        (vec![0.0], 0.0),
        (vec![0.5], 0.5),
        (vec![-0.4], -0.3),
        (vec![0.2], 0.7),
        (vec![-0.6], 0.1),
    ];
    let residual =
        pde_residual(&state, &src, &kernel, &params, &ConvolveControls::default(), &pts)
            .unwrap();

    // monotonicity in the truncation radius on a common lattice
    let wide = Lattice::new(1, 8.0, 64.0, 9, 17).unwrap();
    let common = ConvolveControls {
        support_override: Some(SupportBox {
            space_radius: Some(8.0),
            t_lo: -64.0,
            t_hi: 64.0,
        }),
        ..ConvolveControls::default()
    };
    let mut monotone = true;
    let mut prev: Option<Vec<f64>> = None;
    for radius in [2.0, 4.0, 8.0] {
        let src =
            NonlinearSource::new(F::gaussian(0.25), SourceKind::PureForcing, radius).unwrap();
        let st = solve_integral_equation(&src, &kernel, wide, 1e-7, 5, &common).unwrap();
        if let Some(p) = &prev {
            monotone &= p.iter().zip(&st.values).all(|(a, b)| *a <= b + 1e-14);
        }
        prev = Some(st.values);
    }

    // contraction case: recorded difference ratios below 0.9
    let csrc =
        NonlinearSource::new(positive_bump(), SourceKind::Contraction { kappa: 0.2 }, 2.0)
            .unwrap();
    let cstate =
        solve_integral_equation(&csrc, &kernel, lat, 1e-7, 50, &ConvolveControls::default())
            .unwrap();
    let max_ratio = cstate
        .diff_norms
        .windows(2)
        .filter(|w| w[0] > 1e-12)
        .map(|w| w[1] / w[0])
        .fold(0.0f64, f64::max);

    let pass = residual < 5e-2 && monotone && max_ratio < 0.9;
    conclude(
        7,
        "integral-equation forward direction",
        pass,
        format!(
            "pde residual {residual:.3e} (tol 5e-2); radius-monotonicity {monotone}; contraction ratio {max_ratio:.3} < 0.9"
        ),
    );
}

#[test]
fn criterion_8_discrete_kernel_and_membership_split() {
    // spectral side: exactly the constant mode is annihilated
    let grid = SpaceTimeGrid::new(
        1,
        2.0 * std::f64::consts::PI,
        2.0 * std::f64::consts::PI,
        16,
        16,
    )
    .unwrap();
    let s = frac::<f64>(0.5);
    let constant = SampledField::sample(grid, &F::constant(3.0));
    let annihilated = apply_symbol(&constant, s, Side::Left);
    let const_residual = annihilated.values.iter().map(|v| v.norm()).fold(0.0f64, f64::max);

    let state = std::cell::Cell::new(0xD1B54A32D192ED03u64);
    let nextf = || {
        let v = state
            .get()
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        state.set(v);
        (v >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let noisy = SampledField::from_fn(grid, |_, _| num_complex::Complex::new(nextf(), nextf()));
    let mean = noisy.mean();
    let proj = solve_homogeneous_projection(&noisy, s);
    let proj_is_mean = (proj.values[0] - mean).norm() < 1e-14
        && proj.values.iter().all(|v| *v == proj.values[0]);
    let proj_residual = apply_symbol(&proj, s, Side::Left).l2_norm();

    // membership case split for the degree-one monomial
    let lo = membership_l2ss(&F::monomial(0), 1, frac(0.35), 64.0).unwrap();
    let hi = membership_l2ss(&F::monomial(0), 1, frac(0.65), 64.0).unwrap();
    let split_ok =
        lo.verdict == Membership::NonMember && hi.verdict == Membership::Member;

    let pass =
        const_residual == 0.0 && proj_is_mean && proj_residual < 1e-10 && split_ok;
    conclude(
        8,
        "discrete kernel and membership split",
        pass,
        format!(
            "constant-mode residual {const_residual:.1e} (exact), projection-is-mean {proj_is_mean}, projected symbol residual {proj_residual:.1e} (tol 1e-10), monomial nonmember@0.35 member@0.65 {split_ok}"
        ),
    );
}

#[test]
fn criterion_9_adjointness() {
    let s = frac::<f64>(0.5);
    let params = OperatorParams::new(1, s);
    let pbox = PairingBox { half_x: 6.0, half_t: 6.0, panels_per_axis: 6, nodes_per_panel: 5 };
    let phi = F::gaussian(1.0);
    let mut details = Vec::new();
    let mut pass = true;
    for (name, u) in [
        ("constant", F::constant(1.0)),
        ("gaussian", F::gaussian(1.0)),
        ("coswave", F::coswave(1.0, 1.0)),
    ] {
        let r = adjointness_residual(&u, &phi, &params, &pbox).unwrap();
        pass &= r < 1e-2;
        details.push(format!("{name} {r:.2e}"));
    }
    conclude(
        9,
        "duality pairing",
        pass,
        format!("residuals {} (tolerance 1e-2)", details.join(", ")),
    );
}
