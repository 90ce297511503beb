//! Acceptance suite: one test per criterion, each printing a PASS line
//! (visible with `cargo test -- --nocapture`). Run with
//! `cargo test -p epdt-cli --test acceptance`.

use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use epdt_core::extreal::ExtReal;
use epdt_core::kato::{kato_lemma_check, kato_simulate, sample_admissible};
use epdt_core::kernel::{
    kernel_e, kernel_e_original, kernel_e_transformed, kernel_k0, KernelPoint,
};
use epdt_core::linear1d::{
    representation_vs_fd_error, solve_fd_oracle, solve_representation, LinearProblem, SourceTerm,
    SpaceProfile,
};
use epdt_core::model::{
    delta, delta_invariance_check, phi_ell, strauss_exponent, strauss_exponent_shifted,
    ModelParams,
};
use epdt_core::radon::{radon_hyperplane, radon_laplacian_residual, radon_radial, RadialFunction};
use epdt_core::semilinear::{
    default_test_bank, lifespan_sweep, solve_semilinear, u_ode_residual, weak_form_residual,
    SemilinearProblem, SolveOptions,
};
use epdt_core::special::{euler_transform_identity_check, gauss_2f1_val};
use epdt_core::iteration;

fn pass(n: u32, name: &str) {
    println!("acceptance criterion {n} ({name}): PASS");
}

#[test]
fn c01_exponent_suite() {
    // p_Str(3, 0) = 1 + sqrt(2) to 1e-12.
    let p = strauss_exponent(3.0, 0.0).unwrap_finite();
    assert!((p - (1.0 + 2f64.sqrt())).abs() <= 1e-12);

    // Shifted identity and Eq.-residual over a 50-point parameter grid.
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    while checked < 50 {
        let ell = rng.gen_range(-0.9..2.5);
        let mu: f64 = rng.gen_range(0.0..5.0);
        let max_nu2 = (mu - 1.0) * (mu - 1.0) / 4.0;
        let nu2 = rng.gen_range(0.0..=max_nu2.max(1e-12));
        let n = rng.gen_range(1..5usize);
        let params = ModelParams::new(ell, mu, nu2, n, 1.0).unwrap();
        let shifted = strauss_exponent_shifted(&params);
        let direct = strauss_exponent(n as f64 + mu / (ell + 1.0), ell);
        match (shifted, direct) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => {
                assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
                // Residual of the shifted quadratic at its root.
                let lp1 = ell + 1.0;
                let nf = n as f64;
                let qa = 0.5 * (nf - 1.0) * lp1 + 0.5 * (ell + mu);
                let qb = -(0.5 * (nf + 1.0) * lp1 + 0.5 * (mu - 3.0 * ell));
                let res = qa * a * a + qb * a - lp1;
                assert!(res.abs() <= 1e-12, "residual {res}");
            }
            (a, b) => assert_eq!(a, b),
        }
        checked += 1;
    }
    pass(1, "exponent suite");
}

#[test]
fn c02_delta_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let mu = rng.gen_range(0.0..6.0);
        let nu2 = rng.gen_range(0.0..4.0);
        let theta = rng.gen_range(-3.0..3.0);
        let (_, _, d_t) = delta_invariance_check(mu, nu2, theta);
        let d = delta(mu, nu2);
        assert!((d_t - d).abs() <= 1e-12, "{d_t} vs {d}");
    }
    pass(2, "delta invariance");
}

#[test]
fn c03_hypergeometric() {
    // F(1,1;2;z) = -ln(1-z)/z to 1e-10 on z = 0.1..0.9.
    for i in 1..=9 {
        let z = i as f64 / 10.0;
        let f = gauss_2f1_val(1.0, 1.0, 2.0, z).unwrap();
        let exact = -(1.0 - z).ln() / z;
        assert!((f - exact).abs() <= 1e-10 * exact.abs(), "z = {z}");
    }
    // Euler transformation on the kernel family a = b in {gamma, 1-gamma}, c = 1.
    for &delta_val in &[0.0f64, 0.25, 1.0, 4.0] {
        for &ell in &[0.0, 1.0] {
            let gamma = 0.5 - delta_val.sqrt() / (2.0 * (ell + 1.0));
            for a in [gamma, 1.0 - gamma] {
                for j in 0..9 {
                    let z = 0.1 * j as f64;
                    let (lhs, rhs) = euler_transform_identity_check(a, a, 1.0, z).unwrap();
                    assert!(
                        (lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0),
                        "a = {a}, z = {z}"
                    );
                }
            }
        }
    }
    pass(3, "hypergeometric");
}

#[test]
fn c04_kernel_reduction() {
    // d'Alembert case: E = 1/2 and K0 = 0 on 1000 random cone-interior points.
    let params = ModelParams::new(0.0, 0.0, 0.0, 1, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let t: f64 = rng.gen_range(1.0..6.0);
        let b = rng.gen_range(1.0..t.max(1.0 + 1e-9));
        let reach = t - b;
        let y = rng.gen_range(-1.0..1.0) * reach;
        let pt = KernelPoint::new(t, 0.0, b, y).unwrap();
        let e = kernel_e(&pt, &params).unwrap();
        assert!((e - 0.5).abs() <= 1e-12, "E = {e} at t={t}, b={b}, y={y}");

        let reach1 = t - 1.0;
        let y1 = rng.gen_range(-1.0..1.0) * reach1;
        let k0 = kernel_k0(t, 0.0, y1, &params).unwrap();
        assert!(k0.abs() <= 1e-12, "K0 = {k0} at t={t}, y={y1}");
    }

    // Transformed/original equality within 1e-9 for delta in {0, 1/4, 1, 4}.
    for &(mu, nu2) in &[(1.0, 0.0), (1.5, 0.0), (2.0, 0.0), (3.0, 0.0)] {
        for &ell in &[0.0, 0.8] {
            let p = ModelParams::new(ell, mu, nu2, 1, 1.0).unwrap();
            for i in 1..8 {
                let t = 1.0 + 0.5 * i as f64;
                for j in 0..6 {
                    let b = 1.0 + (t - 1.0) * 0.16 * j as f64;
                    let reach = phi_ell(t, ell) - phi_ell(b, ell);
                    for k in 0..5 {
                        let y = reach * 0.24 * k as f64;
                        let pt = KernelPoint::new(t, 0.0, b, y).unwrap();
                        let orig = kernel_e_original(&pt, &p).unwrap();
                        let trans = kernel_e_transformed(&pt, &p).unwrap();
                        assert!(
                            (orig - trans).abs() <= 1e-9 * orig.abs().max(1e-30),
                            "mu={mu} ell={ell} t={t} b={b} y={y}: {orig} vs {trans}"
                        );
                    }
                }
            }
        }
    }
    pass(4, "kernel reduction");
}

#[test]
fn c05_representation_vs_fd() {
    let sets = [
        (0.0, 0.0, 0.0),
        (0.0, 2.0, 0.0),
        (1.0, 0.0, 0.0),
        (0.0, 3.0, 1.0),  // delta = 0
        (-0.5, 1.0, 0.0), // ell = -1/2, delta = 0
    ];
    let dx = 1.0 / 400.0;
    for &(ell, mu, nu2) in &sets {
        let params = ModelParams::new(ell, mu, nu2, 1, 1.0).unwrap();
        let prob = LinearProblem::new(
            params,
            SpaceProfile::bump(1.0, 1.0),
            SpaceProfile::bump(1.0, 0.5),
            SourceTerm::Zero,
            3.5,
        )
        .unwrap();
        let max_speed: f64 = if ell >= 0.0 { 3.5f64.powf(ell) } else { 1.0 };
        let dt = 0.4 * dx / max_speed;
        let fd = solve_fd_oracle(&prob, dx, dt, &[3.0]).unwrap();
        let (t, snap) = &fd.snapshots[0];
        let err = representation_vs_fd_error(&prob, snap, *t, 33).unwrap();
        assert!(
            err <= 2e-3,
            "(ell={ell}, mu={mu}, nu2={nu2}): rel Linf = {err}"
        );
        println!("  c05 (ell={ell}, mu={mu}, nu2={nu2}): rel Linf = {err:.3e}");
    }

    // Second-order convergence of the FD oracle against the representation.
    let params = ModelParams::new(0.0, 2.0, 0.0, 1, 1.0).unwrap();
    let prob = LinearProblem::new(
        params,
        SpaceProfile::bump(1.0, 1.0),
        SpaceProfile::bump(1.0, 0.5),
        SourceTerm::Zero,
        3.5,
    )
    .unwrap();
    let mut errs = Vec::new();
    for &dxc in &[1.0 / 100.0, 1.0 / 200.0] {
        let fd = solve_fd_oracle(&prob, dxc, 0.4 * dxc, &[3.0]).unwrap();
        let (t, snap) = &fd.snapshots[0];
        errs.push(representation_vs_fd_error(&prob, snap, *t, 33).unwrap());
    }
    let ratio = errs[0] / errs[1];
    assert!((3.0..=5.0).contains(&ratio), "halving ratio {ratio}");
    println!("  c05 convergence ratio: {ratio:.3}");
    pass(5, "representation vs FD oracle");
}

#[test]
fn c06_kato_lemma() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut applicable = 0usize;
    let mut drawn = 0usize;
    let mut doubling_checked = 0usize;
    while applicable < 50 && drawn < 500 {
        let prob = sample_admissible(&mut rng);
        drawn += 1;
        let report = kato_lemma_check(&prob, 1e12).unwrap();
        if !report.applicable() {
            continue;
        }
        applicable += 1;
        assert_eq!(
            report.bound_satisfied,
            Some(true),
            "2T1 bound violated for {prob:?}: {report:?}"
        );
        // Threshold-doubling stability on a subsample.
        if doubling_checked < 8 {
            if let ExtReal::Finite(t1) = report.blowup_time {
                let (t2, _) = kato_simulate(&prob, 4.0 * report.thresholds.t1 + 2.0, 2e12).unwrap();
                let t2 = t2.unwrap_finite();
                assert!(
                    (t2 - t1).abs() / t1 < 1e-2,
                    "threshold doubling moved T: {t1} -> {t2}"
                );
                doubling_checked += 1;
            }
        }
    }
    assert!(
        applicable >= 50,
        "only {applicable} applicable problems out of {drawn} draws"
    );
    println!("  c06: {applicable}/{drawn} applicable, all satisfied T <= 2 T1");
    pass(6, "Kato comparison lemma");
}

#[test]
fn c07_radon() {
    // Ball indicator, n = 3, rho = 0.5: pi (1 - rho^2), radial vs oracle.
    let ball = RadialFunction::from_fn(|r| if r <= 1.0 { 1.0 } else { 0.0 }, 1.0, 3);
    let rho = 0.5;
    let exact = std::f64::consts::PI * (1.0 - rho * rho);
    let fast = radon_radial(&ball, rho).unwrap();
    let slow = radon_hyperplane(&ball, rho).unwrap();
    assert!((fast - exact).abs() <= 1e-6 * exact, "radial: {fast}");
    assert!((slow - exact).abs() <= 1e-6 * exact, "oracle: {slow}");
    assert!((fast - slow).abs() <= 1e-6 * exact, "routes disagree");

    // Laplacian identity for smooth bumps, n in {2, 3, 4}.
    for n in 2..=4usize {
        let f = RadialFunction::from_fn(
            |r| {
                if r >= 1.0 {
                    0.0
                } else {
                    (1.0 - r * r).powi(3)
                }
            },
            1.0,
            n,
        );
        let nf = n as f64;
        let lap = RadialFunction::from_fn(
            move |r| {
                let s2 = r * r;
                if s2 >= 1.0 {
                    0.0
                } else {
                    let w = 1.0 - s2;
                    -6.0 * w * w * nf + 24.0 * s2 * w
                }
            },
            1.0,
            n,
        );
        let grid: Vec<f64> = (0..8).map(|i| 0.08 + 0.1 * i as f64).collect();
        let res = radon_laplacian_residual(&f, &lap, &grid, 5e-3).unwrap();
        assert!(res <= 1e-3, "n = {n}: Laplacian identity residual {res}");
        println!("  c07 n={n}: Laplacian residual {res:.3e}");
    }
    pass(7, "Radon transform");
}

#[test]
fn c08_semilinear_consistency() {
    let params = ModelParams::new(0.0, 2.0, 0.0, 1, 1.0).unwrap();
    let p_crit = strauss_exponent_shifted(&params).unwrap_finite();
    let prob = SemilinearProblem::new(
        params,
        p_crit,
        1.0,
        SpaceProfile::bump(1.0, 1.0),
        SpaceProfile::bump(1.0, 1.0),
    )
    .unwrap();

    // Nonlinearity off: match the linear representation within 2e-3.
    let mut opts = SolveOptions::new(2.0, 1.0 / 200.0);
    opts.nonlinearity = false;
    let run = solve_semilinear(&prob, &opts).unwrap();
    let (t_end, last) = run.snapshots.last().unwrap();
    let lin = LinearProblem::new(
        params,
        prob.u0.clone(),
        prob.u1.clone(),
        SourceTerm::Zero,
        2.5,
    )
    .unwrap();
    let mut max_diff = 0.0f64;
    let mut max_ref = 0.0f64;
    for i in 0..33 {
        let x = -2.0 + 4.0 * i as f64 / 32.0;
        let u_rep = solve_representation(&lin, *t_end, x).unwrap();
        let u_fd = last.eval(x);
        max_diff = max_diff.max((u_fd - u_rep).abs());
        max_ref = max_ref.max(u_rep.abs());
    }
    let lin_err = max_diff / max_ref;
    assert!(lin_err <= 2e-3, "linear-regime error {lin_err}");
    println!("  c08 linear-regime error: {lin_err:.3e}");

    // U-ODE residual decays at second order.
    let mut ode_res = Vec::new();
    for &dx in &[0.02, 0.01] {
        let mut o = SolveOptions::new(1.5, dx);
        o.fixed_dt = Some(0.25 * dx);
        let r = solve_semilinear(&prob, &o).unwrap();
        ode_res.push(u_ode_residual(&r, &params));
    }
    let ode_ratio = ode_res[0] / ode_res[1];
    assert!(
        (3.0..=5.0).contains(&ode_ratio),
        "U-ODE ratio {ode_ratio} ({ode_res:?})"
    );
    println!("  c08 U-ODE residual ratio: {ode_ratio:.3}");

    // Weak-form residual decays at second order.
    let mut weak_res = Vec::new();
    for &dx in &[0.04, 0.02] {
        let mut o = SolveOptions::new(1.8, dx);
        o.fixed_dt = Some(0.25 * dx);
        o.store_frames = true;
        let r = solve_semilinear(&prob, &o).unwrap();
        let bank = default_test_bank(1.8, 1.5);
        weak_res.push(weak_form_residual(&r, &prob, &bank).unwrap());
    }
    assert!(weak_res[1] <= 1e-2, "weak residual {weak_res:?}");
    let weak_ratio = weak_res[0] / weak_res[1];
    assert!(
        (3.0..=5.0).contains(&weak_ratio),
        "weak-form ratio {weak_ratio} ({weak_res:?})"
    );
    println!("  c08 weak-form residual ratio: {weak_ratio:.3}");
    pass(8, "semilinear consistency");
}

#[test]
fn c09_lifespan_sweep() {
    let params = ModelParams::new(0.0, 2.0, 0.0, 1, 1.0).unwrap();
    let p_crit = strauss_exponent_shifted(&params).unwrap_finite();
    let prob = SemilinearProblem::new(
        params,
        p_crit,
        1.0,
        SpaceProfile::bump(1.0, 1.0),
        SpaceProfile::bump(1.0, 4.0),
    )
    .unwrap();
    let eps_grid: Vec<f64> = (0..8).map(|i| 0.4 + 1.2 * i as f64 / 7.0).collect();
    let opts = SolveOptions::new(400.0, 0.02);
    let (records, fit) = lifespan_sweep(&prob, &eps_grid, &opts, 4).unwrap();
    assert!(fit.complete, "every epsilon must blow up: {records:?}");
    for w in records.windows(2) {
        let t0 = w[0].t_numeric.unwrap_finite();
        let t1 = w[1].t_numeric.unwrap_finite();
        assert!(
            t0 > t1,
            "lifespan not strictly decreasing: T({}) = {t0}, T({}) = {t1}",
            w[0].eps,
            w[1].eps
        );
    }
    assert!(fit.slope > 0.0, "fitted slope {}", fit.slope);
    println!(
        "  c09: T from {:.3} (eps 0.4) to {:.3} (eps 1.6), slope {:.4}",
        records[0].t_numeric.unwrap_finite(),
        records[7].t_numeric.unwrap_finite(),
        fit.slope
    );
    pass(9, "lifespan sweep");
}

#[test]
fn c10_iteration_machinery() {
    let params = ModelParams::new(0.0, 2.0, 0.0, 1, 1.0).unwrap();
    let p = strauss_exponent_shifted(&params).unwrap_finite();
    let cfg = iteration::IterationConfig::with_defaults(params, p).unwrap();

    let mut state = iteration::initial_state(&cfg);
    for j in 0..=30 {
        let a_c = iteration::a_j_closed(j, &cfg);
        let alpha_c = iteration::alpha_j_closed(j, &cfg);
        assert!((state.a_j - a_c).abs() <= 1e-12 * a_c.abs());
        assert!((state.alpha_j - alpha_c).abs() <= 1e-12 * alpha_c.abs());
        if j <= 25 {
            let lb = iteration::log_b_closed_form(j, &cfg);
            assert!(
                (state.log_b_j - lb).abs() <= 1e-10 * lb.abs().max(1.0),
                "log B_{j}"
            );
        }
        state = iteration::sequence_step(&state, &cfg);
    }

    for j in 0..=15 {
        for &(t, eps) in &[(50.0, 0.4), (1e3, 0.9), (1e6, 1.5)] {
            let a = iteration::k_j_log(j, t, eps, &cfg).unwrap();
            let b = iteration::k_j_log_product(j, t, eps, &cfg).unwrap();
            assert!(
                (a - b).abs() <= 1e-10 * a.abs().max(1.0),
                "K_j forms: j={j}, t={t}, eps={eps}"
            );
        }
    }

    // Divergence of K_j when L >= 1.
    let eps = 0.8;
    let t = iteration::t0_of_eps(eps, &cfg) * 1.5;
    assert!(iteration::l_function(t, eps, &cfg).unwrap() >= 1.0);
    let k30 = iteration::k_j_log(30, t, eps, &cfg).unwrap();
    let k10 = iteration::k_j_log(10, t, eps, &cfg).unwrap();
    assert!(k30 > k10 && k30 > 1e8, "K_j must diverge: {k10} -> {k30}");
    pass(10, "iteration machinery");
}

#[test]
fn c11_cli_determinism() {
    let bin = env!("CARGO_BIN_EXE_epdt-lab");
    let tmp = std::env::temp_dir().join(format!("epdt_acc_{}", std::process::id()));
    let cfg_path = tmp.join("run.toml");
    std::fs::create_dir_all(&tmp).unwrap();
    std::fs::write(
        &cfg_path,
        "config_version = 1\n\n[model]\nell = 0.0\nmu = 2.0\nnu2 = 0.0\nn = 1\nradius = 1.0\n\n[kato]\ndraws = 25\n",
    )
    .unwrap();

    let run = |out: &std::path::Path, sub: &str| {
        let status = Command::new(bin)
            .args([
                sub,
                "--config",
                cfg_path.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
                "--seed",
                "99",
            ])
            .status()
            .expect("binary runs");
        assert!(status.success(), "{sub} failed");
    };
    let (out1, out2) = (tmp.join("a"), tmp.join("b"));
    for out in [&out1, &out2] {
        run(out, "exponents");
        run(out, "kato");
        run(out, "iterate");
    }
    let mut names: Vec<String> = std::fs::read_dir(&out1)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert!(names.len() >= 5, "expected several artifacts, got {names:?}");
    for name in &names {
        let a = std::fs::read(out1.join(name)).unwrap();
        let b = std::fs::read(out2.join(name)).unwrap();
        assert_eq!(a, b, "outputs differ for {name}");
    }
    std::fs::remove_dir_all(&tmp).ok();
    println!("  c11: {} artifacts byte-identical across reruns", names.len());
    pass(11, "CLI determinism");
}
