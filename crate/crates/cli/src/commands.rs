//! Command implementations: each subcommand reads its config blocks, runs
//! the corresponding core pipeline, and writes CSV/JSON artifacts plus a
//! manifest into the output directory.

use crate::config::{CriticalBlock, ExperimentConfig, KernelsBlock};
use fkpp_core::critical::{find_tangency, scan_sup_alpha, CriticalPoint, KernelFamily};
use fkpp_core::dispersion::{alpha, alpha_deps, check_assumptions, decay_horizon};
use fkpp_core::evolution::{integrate, Target};
use fkpp_core::fields::TrigSeries;
use fkpp_core::scaling;
use fkpp_core::stability::spectrum;
use fkpp_core::stationary::{asymptotic_seed, continue_branch, solve_branch_point};
use fkpp_core::uniqueness;
use fkpp_core::{Kernel, ModelParams};
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Debug)]
pub enum CliError {
    /// exit code 2
    Config(String),
    /// exit code 3, with the failing stage named
    Solver { stage: String, message: String },
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Serialize)]
struct Step {
    name: String,
    status: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    version: &'a str,
    subcommand: &'a str,
    config_sha256: &'a str,
    seed: u64,
    wall_time_ms: u128,
    steps: &'a [Step],
}

pub struct Context {
    pub cfg: ExperimentConfig,
    pub base_dir: PathBuf,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub verbose: bool,
    steps: Vec<Step>,
}

impl Context {
    pub fn new(
        cfg: ExperimentConfig,
        base_dir: PathBuf,
        out_dir: PathBuf,
        seed: u64,
        verbose: bool,
    ) -> CliResult<Self> {
        std::fs::create_dir_all(&out_dir)
            .map_err(|e| CliError::Config(format!("cannot create {}: {e}", out_dir.display())))?;
        Ok(Self {
            cfg,
            base_dir,
            out_dir,
            seed,
            verbose,
            steps: Vec::new(),
        })
    }

    /// Runs a named pipeline stage; failure is recorded and mapped to exit 3.
    fn step<T>(&mut self, name: &str, f: impl FnOnce() -> Result<T, String>) -> CliResult<T> {
        if self.verbose {
            eprintln!("[fkpp] {name}...");
        }
        match f() {
            Ok(v) => {
                self.steps.push(Step {
                    name: name.into(),
                    status: "ok".into(),
                });
                Ok(v)
            }
            Err(message) => {
                self.steps.push(Step {
                    name: name.into(),
                    status: format!("failed: {message}"),
                });
                Err(CliError::Solver {
                    stage: name.into(),
                    message,
                })
            }
        }
    }

    fn write(&mut self, filename: &str, content: &str) -> CliResult<()> {
        let path = self.out_dir.join(filename);
        let res = std::fs::write(&path, content).map_err(|e| e.to_string());
        self.step(&format!("write {filename}"), || res)
    }

    pub fn write_manifest(&self, subcommand: &str, config_sha256: &str, wall_time_ms: u128) {
        let manifest = Manifest {
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            config_sha256,
            seed: self.seed,
            wall_time_ms,
            steps: &self.steps,
        };
        let text = to_json(&manifest);
        let _ = std::fs::write(self.out_dir.join("manifest.json"), text);
    }

    // --- config accessors (exit code 2 on missing/invalid blocks) ---

    fn model(&self) -> CliResult<ModelParams> {
        self.cfg
            .model
            .build()
            .map_err(|e| CliError::Config(format!("model: {e}")))
    }

    fn kernels(&self) -> CliResult<(Kernel, Kernel)> {
        let block: &KernelsBlock = self
            .cfg
            .kernels
            .as_ref()
            .ok_or_else(|| CliError::Config("missing `kernels` block".into()))?;
        let ap = block
            .a_plus
            .build(&self.base_dir)
            .map_err(|e| CliError::Config(format!("kernels.a_plus: {e}")))?;
        let am = block
            .a_minus
            .build(&self.base_dir)
            .map_err(|e| CliError::Config(format!("kernels.a_minus: {e}")))?;
        Ok((ap, am))
    }

    fn critical_block(&self) -> CliResult<&CriticalBlock> {
        self.cfg
            .critical
            .as_ref()
            .ok_or_else(|| CliError::Config("missing `critical` block".into()))
    }

    fn tangency(&mut self) -> CliResult<(ModelParams, KernelFamily, CriticalPoint, Kernel)> {
        let params = self.model()?;
        let block = self.critical_block()?;
        let family = block.family.build();
        let range = (block.h_min, block.h_max);
        let crit = self.step("tangency", || {
            find_tangency(&params, &family, range).map_err(|e| e.to_string())
        })?;
        let am = family
            .a_minus(crit.h_c)
            .map_err(|e| CliError::Config(format!("critical family: {e}")))?;
        Ok((params, family, crit, am))
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    s.push('\n');
    s
}

fn dispersion_csv(
    params: &ModelParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
) -> Result<String, String> {
    let ep = params.at_eps(0.0);
    let p_max = decay_horizon(&ep, a_plus, a_minus, params.kappa_plus / 2.0)
        .map_err(|e| e.to_string())?;
    let n = 4000;
    let mut csv = String::from("p,alpha,alpha_deps\n");
    for i in 0..=n {
        let p = p_max * i as f64 / n as f64;
        let a = alpha(&ep, a_plus, a_minus, p).map_err(|e| e.to_string())?;
        let d = alpha_deps(&ep, a_plus, a_minus, p).map_err(|e| e.to_string())?;
        writeln!(csv, "{p},{a},{d}").unwrap();
    }
    Ok(csv)
}

pub fn analyze(ctx: &mut Context) -> CliResult<()> {
    let params = ctx.model()?;
    let (ap, am) = ctx.kernels()?;
    let csv = ctx.step("dispersion curve", || dispersion_csv(&params, &ap, &am))?;
    ctx.write("dispersion.csv", &csv)?;

    let report = ctx.step("assumption report", || {
        let ep = params.at_eps(0.0);
        let p_max =
            decay_horizon(&ep, &ap, &am, params.kappa_plus / 2.0).map_err(|e| e.to_string())?;
        let grid: Vec<f64> = (0..=200_000).map(|i| p_max * i as f64 / 200_000.0).collect();
        let (sup, argmax) = scan_sup_alpha(&params, &ap, &am, &grid).map_err(|e| e.to_string())?;
        let rep = check_assumptions(&params, &ap, &am, argmax).map_err(|e| e.to_string())?;
        Ok(json!({
            "sup_alpha": sup,
            "p_at_sup": argmax,
            "assumption_report": rep,
        }))
    })?;
    ctx.write("analyze.json", &to_json(&report))
}

pub fn critical(ctx: &mut Context) -> CliResult<()> {
    let (params, family, crit, am) = ctx.tangency()?;
    ctx.write("critical.json", &to_json(&crit))?;
    let csv = ctx.step("dispersion curve", || {
        dispersion_csv(&params, &family.a_plus, &am)
    })?;
    ctx.write("dispersion.csv", &csv)
}

pub fn branch(ctx: &mut Context) -> CliResult<()> {
    let (params, family, crit, am) = ctx.tangency()?;
    let block = ctx
        .cfg
        .branch
        .as_ref()
        .ok_or_else(|| CliError::Config("missing `branch` block".into()))?;
    if block.eps_grid.is_empty() {
        return Err(CliError::Config("branch.eps_grid must be non-empty".into()));
    }
    let (eps_grid, delta, n) = (block.eps_grid.clone(), block.delta, block.n);
    let points = ctx.step("continuation", || {
        continue_branch(&params, &family.a_plus, &am, &crit, &eps_grid, delta, n)
            .map_err(|e| e.to_string())
    })?;
    let mut csv = String::from(
        "eps,delta,amplitude_measured,amplitude_predicted,residual_norm,newton_iters\n",
    );
    for bp in &points {
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            bp.eps,
            bp.delta,
            bp.amplitude_measured,
            bp.amplitude_predicted,
            bp.residual_norm,
            bp.newton_iters
        )
        .unwrap();
    }
    ctx.write("branch.csv", &csv)?;
    ctx.write("branch.json", &to_json(&points))
}

pub fn stability(ctx: &mut Context) -> CliResult<()> {
    let (params, family, crit, am) = ctx.tangency()?;
    let block = ctx
        .cfg
        .stability
        .as_ref()
        .ok_or_else(|| CliError::Config("missing `stability` block".into()))?;
    let (eps, delta, n) = (block.eps, block.delta, block.n);
    let bp = ctx.step("branch point", || {
        let seed = asymptotic_seed(&params, &family.a_plus, &am, &crit, eps, delta, n)
            .map_err(|e| e.to_string())?;
        solve_branch_point(&seed, &params, &family.a_plus, &am, &crit, eps, delta)
            .map_err(|e| e.to_string())
    })?;
    let rep = ctx.step("spectrum", || {
        spectrum(&bp.field, &params.at_eps(eps), &family.a_plus, &am).map_err(|e| e.to_string())
    })?;
    let mut csv = String::from("re,im\n");
    for (re, im) in &rep.eigenvalues {
        writeln!(csv, "{re},{im}").unwrap();
    }
    ctx.write("eigenvalues.csv", &csv)?;
    ctx.write("stability.json", &to_json(&rep))
}

pub fn evolve(ctx: &mut Context) -> CliResult<()> {
    let (params, family, crit, am) = ctx.tangency()?;
    let block = ctx
        .cfg
        .evolve
        .as_ref()
        .ok_or_else(|| CliError::Config("missing `evolve` block".into()))?;
    let (eps, t_max, dt, n) = (block.eps, block.t_max, block.dt, block.n);
    let (amp, noise) = (block.initial_amplitude, block.noise_amplitude);
    let seed_u64 = ctx.seed;
    let bp = ctx.step("branch point", || {
        let seed = asymptotic_seed(&params, &family.a_plus, &am, &crit, eps, 0.0, n)
            .map_err(|e| e.to_string())?;
        solve_branch_point(&seed, &params, &family.a_plus, &am, &crit, eps, 0.0)
            .map_err(|e| e.to_string())
    })?;
    let out = ctx.step("time integration", || {
        let mut v0 = TrigSeries::zeros(n, crit.k_c);
        v0.cos[1] = amp;
        if noise != 0.0 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed_u64);
            for j in 2..=n {
                v0.cos[j] = noise * rng.gen_range(-1.0..1.0);
                v0.sin[j] = noise * rng.gen_range(-1.0..1.0);
            }
        }
        integrate(
            &v0,
            &params.at_eps(eps),
            &family.a_plus,
            &am,
            t_max,
            dt,
            &Target::Field(bp.field.clone()),
        )
        .map_err(|e| e.to_string())
    })?;
    let mut csv = String::from("t,distance\n");
    for (t, d) in &out.distance_history {
        writeln!(csv, "{t},{d}").unwrap();
    }
    ctx.write("evolve.csv", &csv)?;
    ctx.write("evolve.json", &to_json(&out))
}

pub fn limit(ctx: &mut Context) -> CliResult<()> {
    let params = ctx.model()?;
    let (ap, am) = ctx.kernels()?;
    let block = ctx
        .cfg
        .limit
        .as_ref()
        .ok_or_else(|| CliError::Config("missing `limit` block".into()))?;
    if block.sigma_list.is_empty() {
        return Err(CliError::Config("limit.sigma_list must be non-empty".into()));
    }
    let sigmas = block.sigma_list.clone();
    let local = ctx.step("local tangency", || {
        scaling::local_quantities(&params, &am).map_err(|e| e.to_string())
    })?;
    let rows = ctx.step("sigma continuation", || {
        scaling::convergence_study(&params, &ap, &am, &sigmas).map_err(|e| e.to_string())
    })?;
    let mut csv = String::from(
        "sigma,k_c_sigma,kappa_sigma,d_eps,d2_k,omega,omega_theta2_minus_omega1\n",
    );
    for r in &rows {
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            r.sigma, r.k_c_sigma, r.kappa_sigma, r.d_eps, r.d2_k, r.omega,
            r.omega_theta2_minus_omega1
        )
        .unwrap();
    }
    ctx.write("limit.csv", &csv)?;
    // least-squares slope of ln kappa(sigma) against ln sigma
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.kappa_sigma.abs() > 0.0)
        .map(|r| (r.sigma.ln(), r.kappa_sigma.abs().ln()))
        .collect();
    let rate = fit_slope(&pts);
    let payload = json!({
        "local": local,
        "rows": rows,
        "kappa_convergence_rate": rate,
    });
    ctx.write("limit.json", &to_json(&payload))
}

fn fit_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        None
    } else {
        Some((n * sxy - sx * sy) / denom)
    }
}

pub fn uniqueness_cmd(ctx: &mut Context) -> CliResult<()> {
    let params = ctx.model()?;
    let (ap, am) = ctx.kernels()?;
    let block = ctx
        .cfg
        .uniqueness
        .as_ref()
        .ok_or_else(|| CliError::Config("missing `uniqueness` block".into()))?;
    let periods = block.periods.clone();
    let report = ctx.step("certificates", || {
        let dominance = uniqueness::check_dominance(&params, &ap, &am);
        let linf = match uniqueness::linf_uniqueness_radius(&params, &ap, &am) {
            Ok(r) => json!({ "radius": r }),
            Err(e) => json!({ "radius": null, "reason": e.to_string() }),
        };
        let mut per_period = Vec::new();
        for &p in &periods {
            let gamma = uniqueness::gamma_p(&params, &ap, &am, p).map_err(|e| e.to_string())?;
            let i_p = uniqueness::i_p_bound(&am, p).map_err(|e| e.to_string())?;
            let l2 = match uniqueness::l2_uniqueness_radius(&params, &ap, &am, p) {
                Ok(r) => json!({ "radius": r }),
                Err(e) => json!({ "radius": null, "reason": e.to_string() }),
            };
            per_period.push(json!({
                "p": p,
                "gamma_p": gamma,
                "i_p_minus": i_p,
                "l2_radius": l2,
            }));
        }
        Ok(json!({
            "dominance": dominance,
            "linf_radius": linf,
            "per_period": per_period,
        }))
    })?;
    ctx.write("uniqueness.json", &to_json(&report))
}

pub fn sweep(ctx: &mut Context) -> CliResult<()> {
    let model = &ctx.cfg.model;
    let (kp, km) = (model.kappa_plus, model.kappa_minus);
    let block = ctx
        .cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("missing `sweep` block".into()))?;
    if block.m_values.is_empty() || block.h_values.is_empty() {
        return Err(CliError::Config("sweep grids must be non-empty".into()));
    }
    let family_kind = ctx.critical_block()?.family;
    let mut tasks = Vec::new();
    for &m in &block.m_values {
        for &h in &block.h_values {
            tasks.push((m, h));
        }
    }
    let rows: Vec<Result<String, String>> = ctx.step("sweep", || {
        Ok(tasks
            .par_iter()
            .map(|&(m, h)| -> Result<String, String> {
                let family = family_kind.build();
                let params = ModelParams::new(kp, km, m).map_err(|e| e.to_string())?;
                let am = family.a_minus(h).map_err(|e| e.to_string())?;
                let ep = params.at_eps(0.0);
                let p_max = decay_horizon(&ep, &family.a_plus, &am, kp / 2.0)
                    .map_err(|e| e.to_string())?;
                let n = 40_000;
                let grid: Vec<f64> = (0..=n).map(|i| p_max * i as f64 / n as f64).collect();
                let (sup, argmax) =
                    scan_sup_alpha(&params, &family.a_plus, &am, &grid).map_err(|e| e.to_string())?;
                Ok(format!("{m},{h},{sup},{argmax}\n"))
            })
            .collect())
    })?;
    let mut csv = String::from("m,h,sup_alpha,p_at_sup\n");
    for row in rows {
        match row {
            Ok(line) => csv.push_str(&line),
            Err(message) => {
                ctx.steps.push(Step {
                    name: "sweep row".into(),
                    status: format!("failed: {message}"),
                });
                return Err(CliError::Solver {
                    stage: "sweep row".into(),
                    message,
                });
            }
        }
    }
    ctx.write("sweep.csv", &csv)
}

/// Dispatches a subcommand name to its implementation.
pub fn run(ctx: &mut Context, subcommand: &str) -> CliResult<()> {
    match subcommand {
        "analyze" => analyze(ctx),
        "critical" => critical(ctx),
        "branch" => branch(ctx),
        "stability" => stability(ctx),
        "evolve" => evolve(ctx),
        "limit" => limit(ctx),
        "uniqueness" => uniqueness_cmd(ctx),
        "sweep" => sweep(ctx),
        other => Err(CliError::Config(format!("unknown subcommand {other}"))),
    }
}
