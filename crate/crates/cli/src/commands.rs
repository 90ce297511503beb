//! The experiment subcommands. Each one validates its inputs, runs the
//! corresponding library machinery and writes deterministic CSV/JSON
//! artifacts named from the config slug.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use epdt_core::extreal::ExtReal;
use epdt_core::iteration::{
    self, lifespan_bound, IterationConfig, IterationConstants,
};
use epdt_core::kato::{kato_lemma_check, sample_admissible_in, KatoRanges};
use epdt_core::linear1d::{
    representation_vs_fd_error, solve_fd_oracle, solve_representation, LinearProblem,
    SourceTerm, SpaceProfile,
};
use epdt_core::model::strauss_exponent_shifted;
use epdt_core::radon::{radon_hyperplane, radon_radial, RadialFunction};
use epdt_core::semilinear::{
    lifespan_sweep, solve_semilinear, u_ode_residual, u_representation_check, SemilinearProblem,
    SolveOptions,
};
use epdt_core::{Error, Result};

use crate::config::RunConfig;

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = fs::File::create(path)
        .map_err(|e| Error::InvalidParams(format!("cannot create {}: {e}", path.display())))?;
    f.write_all(text.as_bytes())
        .map_err(|e| Error::InvalidParams(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidParams(format!("json: {e}")))?;
    text.push('\n');
    write_text(path, &text)
}

fn ext_to_json(v: ExtReal) -> Value {
    match v {
        ExtReal::Finite(x) => json!(x),
        ExtReal::Infinite => json!("+inf"),
    }
}

/// Critical exponents and spectral constants as a JSON report.
pub fn cmd_exponents(cfg: &RunConfig, out: &Path) -> Result<PathBuf> {
    let params = cfg.model_params()?;
    let sc = params.constants()?;
    let report = json!({
        "model": { "ell": params.ell, "mu": params.mu, "nu2": params.nu2,
                   "n": params.n, "radius": params.radius },
        "delta": sc.delta,
        "r1": sc.r1,
        "r2": sc.r2,
        "gamma": sc.gamma,
        "c": sc.c,
        "p_strauss_shifted": ext_to_json(sc.p_strauss_shifted),
        "p_fujita_shifted": ext_to_json(sc.p_fujita_shifted),
        "p_blowup_sup": ext_to_json(sc.p_blowup_sup),
    });
    let path = out.join(format!("exponents_{}.json", cfg.slug()));
    write_json(&path, &report)?;
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    Ok(path)
}

/// Representation-vs-FD cross-validation run; emits a solution CSV and an
/// error-norm JSON with a pass/fail verdict.
pub fn cmd_linear(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let params = cfg.model_params()?;
    let lb = &cfg.linear;
    if params.n != 1 {
        return Err(Error::InvalidParams(
            "linear cross-validation requires n = 1".into(),
        ));
    }
    let prob = LinearProblem::new(
        params,
        SpaceProfile::bump(params.radius, lb.u0_amplitude),
        SpaceProfile::bump(params.radius, lb.u1_amplitude),
        SourceTerm::Zero,
        lb.t_end + 0.5,
    )?;
    let max_speed = if params.ell >= 0.0 {
        (lb.t_end + 0.5).powf(params.ell)
    } else {
        1.0
    };
    let dt = 0.4 * lb.dx / max_speed;
    let fd = solve_fd_oracle(&prob, lb.dx, dt, &[lb.t_end])?;
    let (t_end, last) = fd.snapshots.first().expect("requested snapshot");

    let mut csv = String::from("t,x,u_representation,u_fd\n");
    let reach = params.radius + epdt_core::model::amplitude(*t_end, params.ell)?;
    for i in 0..lb.samples {
        let x = -reach + 2.0 * reach * i as f64 / (lb.samples - 1) as f64;
        let u_rep = solve_representation(&prob, *t_end, x)?;
        let u_fd = last.eval(x);
        csv.push_str(&format!("{t_end},{x},{u_rep},{u_fd}\n"));
    }
    let err = representation_vs_fd_error(&prob, last, *t_end, lb.samples)?;
    let csv_path = out.join(format!("linear_{}.csv", cfg.slug()));
    write_text(&csv_path, &csv)?;
    let summary = json!({
        "t_end": t_end,
        "dx": lb.dx,
        "dt": dt,
        "relative_linf_error": err,
        "tolerance": lb.tolerance,
        "pass": err <= lb.tolerance,
    });
    let json_path = out.join(format!("linear_{}_summary.json", cfg.slug()));
    write_json(&json_path, &summary)?;
    println!(
        "linear cross-validation: rel Linf = {err:.3e} ({})",
        if err <= lb.tolerance { "pass" } else { "FAIL" }
    );
    Ok(vec![csv_path, json_path])
}

/// Monte-Carlo verification of the comparison lemma; emits one CSV row per
/// draw and a summary JSON.
pub fn cmd_kato(cfg: &RunConfig, out: &Path, seed: u64) -> Result<Vec<PathBuf>> {
    let kb = &cfg.kato;
    if kb.draws == 0 {
        return Err(Error::InvalidParams("kato.draws must be positive".into()));
    }
    if !(kb.p_min > 1.0 && kb.p_max > kb.p_min && kb.b_min > 0.0 && kb.b_max > kb.b_min) {
        return Err(Error::InvalidParams("bad kato sampling ranges".into()));
    }
    let ranges = KatoRanges {
        mu_max: kb.mu_max,
        p_min: kb.p_min,
        p_max: kb.p_max,
        b_min: kb.b_min,
        b_max: kb.b_max,
        a_span: kb.a_span,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut csv =
        String::from("draw,mu,nu2,p,q,a,big_b,k,k0,t0_tilde,t1,blowup_time,applicable,bound_satisfied\n");
    let mut applicable = 0usize;
    let mut satisfied = 0usize;
    for draw in 0..kb.draws {
        let prob = sample_admissible_in(&mut rng, &ranges);
        let report = kato_lemma_check(&prob, kb.blowup_threshold)?;
        let bt = match report.blowup_time {
            ExtReal::Finite(t) => format!("{t}"),
            ExtReal::Infinite => "+inf".to_string(),
        };
        let bound = match report.bound_satisfied {
            Some(true) => "true",
            Some(false) => "false",
            None => "",
        };
        if report.applicable() {
            applicable += 1;
            if report.bound_satisfied == Some(true) {
                satisfied += 1;
            }
        }
        csv.push_str(&format!(
            "{draw},{},{},{},{},{},{},{},{},{},{},{bt},{},{bound}\n",
            prob.mu,
            prob.nu2,
            prob.p,
            prob.q,
            prob.a,
            prob.b,
            prob.k,
            report.thresholds.k0,
            report.thresholds.t0_tilde,
            report.thresholds.t1,
            report.applicable(),
        ));
    }
    let csv_path = out.join(format!("kato_{}_seed{seed}.csv", cfg.slug()));
    write_text(&csv_path, &csv)?;
    let summary = json!({
        "draws": kb.draws,
        "seed": seed,
        "applicable": applicable,
        "bound_satisfied": satisfied,
        "all_applicable_satisfied": applicable == satisfied,
    });
    let json_path = out.join(format!("kato_{}_seed{seed}_summary.json", cfg.slug()));
    write_json(&json_path, &summary)?;
    println!(
        "kato monte carlo: {applicable}/{} applicable, {satisfied} satisfied the 2T1 bound",
        kb.draws
    );
    Ok(vec![csv_path, json_path])
}

/// Radon transform profile (ϱ, ℛ[f](ϱ)) with the optional hyperplane
/// oracle column.
pub fn cmd_radon(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let params = cfg.model_params()?;
    let rb = &cfg.radon;
    if params.n < 2 {
        return Err(Error::InvalidParams("radon requires n >= 2".into()));
    }
    if rb.rho_points < 2 {
        return Err(Error::InvalidParams("radon.rho_points must be >= 2".into()));
    }
    let r = params.radius;
    let f = match rb.profile.as_str() {
        "bump" => RadialFunction::from_fn(
            move |x| {
                let s = x / r;
                if s >= 1.0 {
                    0.0
                } else {
                    (1.0 - s * s).powi(3)
                }
            },
            r,
            params.n,
        ),
        "ball" => RadialFunction::from_fn(move |x| if x <= r { 1.0 } else { 0.0 }, r, params.n),
        other => {
            return Err(Error::InvalidParams(format!(
                "unknown radon profile '{other}' (expected bump | ball)"
            )))
        }
    };
    let with_oracle = rb.with_oracle && params.n <= 4;
    let mut csv = if with_oracle {
        String::from("rho,radon_radial,radon_hyperplane\n")
    } else {
        String::from("rho,radon_radial\n")
    };
    for i in 0..rb.rho_points {
        let rho = r * i as f64 / (rb.rho_points - 1) as f64;
        let fast = radon_radial(&f, rho)?;
        if with_oracle {
            let slow = radon_hyperplane(&f, rho)?;
            csv.push_str(&format!("{rho},{fast},{slow}\n"));
        } else {
            csv.push_str(&format!("{rho},{fast}\n"));
        }
    }
    let csv_path = out.join(format!("radon_{}_{}.csv", cfg.slug(), rb.profile));
    write_text(&csv_path, &csv)?;
    println!("radon profile written to {}", csv_path.display());
    Ok(vec![csv_path])
}

/// Lifespan sweep over an ε grid at the critical power, with the
/// ln T vs ε^{−p(p−1)} fit.
pub fn cmd_blowup_sweep(cfg: &RunConfig, out: &Path, jobs: usize) -> Result<Vec<PathBuf>> {
    let params = cfg.model_params()?;
    let sb = &cfg.sweep;
    let p = if sb.p > 0.0 {
        sb.p
    } else {
        strauss_exponent_shifted(&params).finite().ok_or_else(|| {
            Error::InvalidParams(
                "model has no finite critical exponent; set sweep.p explicitly".into(),
            )
        })?
    };
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail validation
    let bad_grid = sb.eps_count < 2 || !(sb.eps_min > 0.0) || !(sb.eps_max > sb.eps_min);
    if bad_grid {
        return Err(Error::InvalidParams("bad sweep eps grid".into()));
    }
    let prob = SemilinearProblem::new(
        params,
        p,
        sb.eps_min,
        SpaceProfile::bump(params.radius, sb.u0_amplitude),
        SpaceProfile::bump(params.radius, sb.u1_amplitude),
    )?;
    let eps_grid: Vec<f64> = (0..sb.eps_count)
        .map(|i| sb.eps_min + (sb.eps_max - sb.eps_min) * i as f64 / (sb.eps_count - 1) as f64)
        .collect();
    let mut opts = SolveOptions::new(sb.t_max, sb.dx);
    opts.blowup_threshold = sb.blowup_threshold;
    let (records, fit) = lifespan_sweep(&prob, &eps_grid, &opts, jobs)?;

    let mut csv = String::from("eps,t_numeric,blew_up,final_sup,dt_min\n");
    for r in &records {
        let t = match r.t_numeric {
            ExtReal::Finite(t) => format!("{t}"),
            ExtReal::Infinite => "+inf".to_string(),
        };
        csv.push_str(&format!(
            "{},{t},{},{},{}\n",
            r.eps, r.blew_up, r.final_sup, r.dt_min
        ));
    }
    let csv_path = out.join(format!("sweep_{}.csv", cfg.slug()));
    write_text(&csv_path, &csv)?;
    let monotone = records.windows(2).all(|w| {
        w[0].t_numeric.to_f64() >= w[1].t_numeric.to_f64()
    });
    let summary = json!({
        "p": p,
        "t_max": sb.t_max,
        "dx": sb.dx,
        "complete": fit.complete,
        "monotone_nonincreasing": monotone,
        "fit_slope": fit.slope,
        "fit_intercept": fit.intercept,
        "fit_max_abs_residual": fit.max_abs_residual,
    });
    let json_path = out.join(format!("sweep_{}_fit.json", cfg.slug()));
    write_json(&json_path, &summary)?;

    // U(t) series and residual report for the smallest epsilon, on a short
    // fixed-step window where the residual stencils are meaningful.
    let mut series_prob = prob.clone();
    series_prob.eps = eps_grid[0];
    let mut series_opts = SolveOptions::new(1.5f64.min(sb.t_max), sb.dx);
    series_opts.fixed_dt = Some(0.25 * sb.dx);
    let run = solve_semilinear(&series_prob, &series_opts)?;
    let mut series_csv = String::from("t,u_avg,lp_p,sup\n");
    for i in 0..run.series.times.len() {
        series_csv.push_str(&format!(
            "{},{},{},{}\n",
            run.series.times[i], run.series.u_avg[i], run.series.lp_p[i], run.series.sup[i]
        ));
    }
    let series_path = out.join(format!("sweep_{}_useries.csv", cfg.slug()));
    write_text(&series_path, &series_csv)?;
    let residuals = json!({
        "eps": series_prob.eps,
        "dx": sb.dx,
        "dt": 0.25 * sb.dx,
        "u_ode_residual": u_ode_residual(&run, &params),
        "u_representation_discrepancy": u_representation_check(&run, &series_prob)?,
    });
    let residual_path = out.join(format!("sweep_{}_residuals.json", cfg.slug()));
    write_json(&residual_path, &residuals)?;

    println!(
        "lifespan sweep: {} records, slope {:.4}, monotone: {monotone}",
        records.len(),
        fit.slope
    );
    Ok(vec![csv_path, json_path, series_path, residual_path])
}

/// Iteration sequences table and the lifespan-bound curve.
pub fn cmd_iterate(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let params = cfg.model_params()?;
    let ib = &cfg.iterate;
    let p = if ib.p > 0.0 {
        ib.p
    } else {
        strauss_exponent_shifted(&params).finite().ok_or_else(|| {
            Error::InvalidParams(
                "model has no finite critical exponent; set iterate.p explicitly".into(),
            )
        })?
    };
    let consts = IterationConstants::default();
    let alpha0 = if ib.alpha0 > 0.0 {
        ib.alpha0
    } else {
        2.0 * (consts.t2.powf(params.ell + 1.0) - 1.0) + 1.0
    };
    let iter_cfg = IterationConfig::new(params, p, ib.theta, ib.a0, alpha0, consts)?;

    let mut csv = String::from("j,a_j,alpha_j,log_b_j,beta_j,beta_tilde_j,sigma_j\n");
    let mut state = iteration::initial_state(&iter_cfg);
    for _ in 0..=ib.j_max {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            state.j, state.a_j, state.alpha_j, state.log_b_j, state.beta_j,
            state.beta_tilde_j, state.sigma_j
        ));
        state = iteration::sequence_step(&state, &iter_cfg);
    }
    let seq_path = out.join(format!("iterate_{}_sequences.csv", cfg.slug()));
    write_text(&seq_path, &csv)?;

    let mut bound_csv = String::from("eps,lifespan_bound\n");
    for i in 0..ib.eps_count {
        let eps =
            ib.eps_min + (ib.eps_max - ib.eps_min) * i as f64 / (ib.eps_count.max(2) - 1) as f64;
        let b = match lifespan_bound(eps, &iter_cfg) {
            ExtReal::Finite(v) => format!("{v}"),
            ExtReal::Infinite => "+inf".to_string(),
        };
        bound_csv.push_str(&format!("{eps},{b}\n"));
    }
    let bound_path = out.join(format!("iterate_{}_lifespan_bound.csv", cfg.slug()));
    write_text(&bound_path, &bound_csv)?;

    let summary = json!({
        "p": p,
        "theta": ib.theta,
        "a0": ib.a0,
        "alpha0": alpha0,
        "e1": iter_cfg.e1,
        "e2": iter_cfg.e2,
        "j_max": ib.j_max,
    });
    let json_path = out.join(format!("iterate_{}_summary.json", cfg.slug()));
    write_json(&json_path, &summary)?;
    println!("iteration tables written for p = {p}");
    Ok(vec![seq_path, bound_path, json_path])
}
