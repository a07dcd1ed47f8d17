use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use harness::config::{parse_initial, parse_mode};
use harness::io::{depois_csv, partitions_csv, read_traces, report_csv, report_json, traces_csv, traces_manifest};
use harness::rng::{replicate, substream};
use harness::{initial_state, run_suites, ExperimentConfig, SUITES};
use ip_core::fmt_real;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ipd", version, about = "Interval-partition diffusions: simulation and validation")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Flat key = value configuration file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    replicas: Option<usize>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Pathwise evolution traces.
    Simulate {
        #[arg(long)]
        mode: Option<String>,
        /// Block list `0.5,0.5`, `pdip-zero`, `pdip-half` or `exp-pdip:RHO`.
        #[arg(long)]
        initial: Option<String>,
        #[arg(long)]
        levels: Option<String>,
    },
    /// Draws from the transition kernel at one level.
    KernelSample {
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        initial: Option<String>,
        #[arg(long)]
        level: f64,
    },
    /// Up-down Chinese restaurant chain started from an ordered CRP seating.
    Crp {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        t: f64,
    },
    /// De-Poissonize traces written by `simulate`.
    Depois {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        u: String,
    },
    /// Evaluate a closed form.
    Eval {
        #[arg(long)]
        form: String,
        /// `k=v,k=v`
        #[arg(long, default_value = "")]
        params: String,
        /// One or more comma-separated points.
        #[arg(long)]
        at: String,
    },
    /// Run validation suites; exit status 0 iff every check passes.
    Validate {
        /// Repeatable; defaults to the configured suite or all suites.
        #[arg(long)]
        suite: Vec<String>,
        /// Keep suite runtimes in the JSON report.
        #[arg(long)]
        runtime: bool,
    },
}

fn floats(s: &str) -> anyhow::Result<Vec<f64>> {
    s.split(',').map(|t| t.trim().parse::<f64>().with_context(|| format!("bad number {t:?}"))).collect()
}

fn load_config(g: &Global) -> anyhow::Result<ExperimentConfig> {
    let mut c = match &g.config {
        Some(p) => ExperimentConfig::parse(&std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = g.seed {
        c.seed = s;
    }
    if g.replicas.is_some() {
        c.replicas = g.replicas;
    }
    if g.threads.is_some() {
        c.threads = g.threads;
    }
    if g.out.is_some() {
        c.out = g.out.clone();
    }
    c.validate()?;
    Ok(c)
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn apply_overrides(c: &mut ExperimentConfig, mode: Option<&str>, initial: Option<&str>) -> anyhow::Result<()> {
    if let Some(m) = mode {
        c.mode = parse_mode(m).with_context(|| format!("bad mode {m:?}"))?;
    }
    if let Some(i) = initial {
        c.initial = parse_initial(i).with_context(|| format!("bad initial partition {i:?}"))?;
    }
    c.validate()?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let mut cfg = load_config(&cli.global)?;
    if let Some(t) = cfg.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let out = cfg.out.clone();
    match cli.cmd {
        Cmd::Simulate { mode, initial, levels } => {
            apply_overrides(&mut cfg, mode.as_deref(), initial.as_deref())?;
            if let Some(l) = levels {
                cfg.levels = floats(&l)?;
                cfg.validate()?;
            }
            let params = cfg.evolve_params();
            let traces = replicate(cfg.seed, "simulate", cfg.replicas.unwrap_or(1), |_, r| {
                let beta = initial_state(&cfg.initial, cfg.eps, r)?;
                Ok::<_, anyhow::Error>(skewer_evolve::evolve(&beta, cfg.mode, &cfg.levels, &params, r)?)
            })
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?;
            emit(out.as_deref(), &traces_csv(&traces))?;
            if let Some(p) = &out {
                std::fs::write(p.with_extension("json"), traces_manifest(&traces, cfg.seed)?)?;
            }
        }
        Cmd::KernelSample { mode, initial, level } => {
            apply_overrides(&mut cfg, mode.as_deref(), initial.as_deref())?;
            let kp = cfg.kernel_params();
            let parts = replicate(cfg.seed, "kernel-sample", cfg.replicas.unwrap_or(1), |_, r| {
                let beta = initial_state(&cfg.initial, cfg.eps, r)?;
                Ok::<_, anyhow::Error>(match cfg.mode {
                    skewer_evolve::Mode::Type1 => kernel_lab::sample_kernel_type1(&beta, level, &kp, r)?,
                    skewer_evolve::Mode::Type0 => kernel_lab::sample_kernel_type0(&beta, level, &kp, r)?,
                })
            })
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?;
            emit(out.as_deref(), &partitions_csv(&parts))?;
            if let Some(p) = &out {
                let body: Vec<String> = parts.iter().map(ip_core::to_json).collect();
                std::fs::write(p.with_extension("json"), format!("[{}]\n", body.join(",")))?;
            }
        }
        Cmd::Crp { alpha, theta, n, t } => {
            let params = crp_chain::CrpParams::new(alpha, theta)?;
            let mut r = substream(cfg.seed, "crp", 0);
            let mut state = crp_chain::CrpState::new(crp_chain::ordered_crp(n, params, &mut r), params)?;
            state.record_genealogy();
            let traj = state.run(t, &mut r)?;
            emit(out.as_deref(), &traj.to_csv())?;
            if let Some(p) = &out {
                let g: Vec<_> = state
                    .genealogy()
                    .unwrap_or_default()
                    .iter()
                    .map(|l| serde_json::json!({"id": l.id, "parent": l.parent, "born": l.born, "died": l.died}))
                    .collect();
                std::fs::write(p.with_extension("json"), serde_json::to_string_pretty(&g)? + "\n")?;
            }
        }
        Cmd::Depois { input, u } => {
            let u = floats(&u)?;
            let csv_text = std::fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let man = input.with_extension("json");
            let manifest = std::fs::read_to_string(&man).with_context(|| format!("reading {}", man.display()))?;
            let traces = read_traces(&csv_text, &manifest)?;
            let rows = traces
                .iter()
                .enumerate()
                .map(|(i, t)| Ok((i, depois::depoissonize(t, &u)?)))
                .collect::<anyhow::Result<Vec<_>>>()?;
            for (i, d) in &rows {
                if d.truncated {
                    eprintln!("replica {i}: trace ends before u = {}", u[d.u.len()]);
                }
            }
            emit(out.as_deref(), &depois_csv(&rows))?;
        }
        Cmd::Eval { form, params, at } => {
            let mut p = BTreeMap::new();
            for kv in params.split(',').filter(|s| !s.trim().is_empty()) {
                let (k, v) = kv.split_once('=').with_context(|| format!("expected k=v, got {kv:?}"))?;
                p.insert(k.trim().to_string(), v.trim().parse::<f64>().with_context(|| format!("bad value {v:?}"))?);
            }
            let f = kernel_lab::closed_form(&form, &p)?;
            let mut text = String::new();
            for x in floats(&at)? {
                text.push_str(&fmt_real(f.eval(x)));
                text.push('\n');
            }
            emit(out.as_deref(), &text)?;
        }
        Cmd::Validate { suite, runtime } => {
            let names: Vec<String> = if !suite.is_empty() {
                suite
            } else if let Some(s) = &cfg.suite {
                vec![s.clone()]
            } else {
                SUITES.iter().map(|s| s.to_string()).collect()
            };
            for s in &names {
                if !SUITES.contains(&s.as_str()) {
                    bail!("unknown suite {s:?}; known: {}", SUITES.join(", "));
                }
            }
            let outcomes = run_suites(&names, &cfg)?;
            for o in &outcomes {
                for r in &o.reports {
                    println!("{}", r.line());
                }
                for ob in &o.observations {
                    println!("info {}/{}: {:.6} (n {})", o.suite, ob.id, ob.value, ob.n);
                }
            }
            if let Some(p) = &out {
                std::fs::write(p, report_json(&outcomes, runtime))?;
                std::fs::write(p.with_extension("csv"), report_csv(&outcomes))?;
            }
            return Ok(outcomes.iter().all(|o| o.passed()));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
