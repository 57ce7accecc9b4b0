//! `covermech` command-line driver.

mod mechanisms;
mod report;
mod run;
mod sources;
mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use covermech::instance::{sparsity_gamma, to_json, validate_vc_instance, Instance};
use covermech::par::Exec;
use covermech::ufl::{run_ufl_mechanism, UflOptions};
use covermech::verify::frugality_ratio_estimate;
use covermech::VcInstance;

use mechanisms::{run_mechanism, MechanismKind, MechanismSpec, Scaling};
use sources::{expand_paths, gadget_instance, load_ufl, load_vc, ring_ufl, Named, RandomVcSpec};
use verify::{Check, Target, VerifyConfig};

/// Truthful covering mechanisms: generate instances, run mechanisms and check their guarantees.
#[derive(Parser)]
#[command(name = "covermech", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance as JSON.
    Gen(GenArgs),
    /// Run a vertex-cover mechanism (or `ufl`) over instances and emit one row per run.
    Run(RunArgs),
    /// Run the facility-location mechanism on one instance and print the outcome distribution.
    RunUfl(RunUflArgs),
    /// Check game-theoretic and approximation guarantees; exits 1 if a hard check fails.
    Verify(VerifyArgs),
    /// Payment benchmark of an instance, optionally with a mechanism's payments or a ratio search.
    Frugality(FrugalityArgs),
    /// Summarise `run` CSV files per mechanism.
    Report(ReportArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "source")]
struct GenSource {
    /// Lower-bound gadget on 2N nodes with unit costs.
    #[arg(long, value_name = "N")]
    gadget: Option<usize>,
    /// Random vertex cover: n=.. p=.. [r=1] [seed=0].
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE")]
    random: Option<Vec<String>>,
    /// Random facility location: facilities=.. clients=.. [agents=2] [dims=1] [seed=0].
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE")]
    ufl: Option<Vec<String>>,
    /// Facility location on a ring with fractional LP optima: k=.. [agents=2] [seed=0].
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE")]
    ring: Option<Vec<String>>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    source: GenSource,
    /// Output file (default: stdout).
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Mechanism: ax, bx, rdim, minor, threehop or ufl.
    #[arg(value_name = "MECHANISM")]
    positional: Option<String>,
    #[arg(long, short)]
    mechanism: Option<String>,
    /// Node scaling for ax/bx.
    #[arg(long = "x", value_enum, default_value_t = Scaling::Ones)]
    scaling: Scaling,
    /// Sparsity parameter for minor/threehop (default: the graph's maximum density).
    #[arg(long)]
    gamma: Option<f64>,
    /// Mechanism seed; with --runs K the seeds are SEED..SEED+K.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    runs: u64,
    /// Instance files or directories of *.json files.
    #[arg(long, num_args = 1..)]
    instance: Vec<PathBuf>,
    /// Random instances: n=.. p=.. [r=1] [seed=0]; with --count K the instance seeds are seed..seed+K.
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE")]
    random: Option<Vec<String>>,
    #[arg(long, default_value_t = 1)]
    count: u64,
    /// Gadget instance on 2N nodes.
    #[arg(long, value_name = "N")]
    gadget: Option<usize>,
    /// Skip the payment benchmark columns.
    #[arg(long)]
    no_nu: bool,
    /// Decompose facility-location optima by enumeration.
    #[arg(long)]
    fallback_enum: bool,
    /// Append a wall-time column (makes output run-dependent).
    #[arg(long)]
    timing: bool,
    /// Emit a JSON array instead of CSV.
    #[arg(long)]
    json: bool,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunUflArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Decompose over all facility subsets instead of generating columns.
    #[arg(long)]
    fallback_enum: bool,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    target: Target,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "wmon")]
    checks: Vec<Check>,
    #[arg(long, default_value_t = 1000)]
    probes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "x", value_enum, default_value_t = Scaling::Ones)]
    scaling: Scaling,
    #[arg(long)]
    gamma: Option<f64>,
    /// Largest sampled instance size.
    #[arg(long, default_value_t = 8)]
    max_n: usize,
    /// Largest sampled ownership dimension.
    #[arg(long, default_value_t = 2)]
    max_r: usize,
    /// Also check the regression fixtures of the target.
    #[arg(long)]
    fixtures: bool,
    /// Fail on WMON witnesses even for targets known to violate it.
    #[arg(long)]
    strict: bool,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FrugalityArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Attach this mechanism's payments to the report.
    #[arg(long, short)]
    mechanism: Option<MechanismKind>,
    #[arg(long = "x", value_enum, default_value_t = Scaling::Ones)]
    scaling: Scaling,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Search cost vectors on the instance's graph for a large payment ratio.
    #[arg(long)]
    estimate: bool,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 50)]
    climb: usize,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(path: Option<&Path>, v: &serde_json::Value) -> Result<()> {
    let mut out = output(path)?;
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn cmd_gen(a: &GenArgs) -> Result<()> {
    let s = &a.source;
    let inst = if let Some(n) = s.gadget {
        Instance::Vc(gadget_instance(n)?)
    } else if let Some(w) = &s.random {
        Instance::Vc(RandomVcSpec::parse(w)?.generate()?)
    } else if let Some(w) = &s.ufl {
        Instance::Ufl(sources::generate_ufl(w)?)
    } else if let Some(w) = &s.ring {
        Instance::Ufl(ring_ufl(w)?)
    } else {
        unreachable!("clap requires one source")
    };
    match &inst {
        Instance::Vc(v) => {
            let report = validate_vc_instance(v);
            if !report.is_ok() {
                bail!(
                    "generated instance is invalid: {}",
                    report.issues.join("; ")
                );
            }
            eprintln!(
                "n={} m={} agents={} r={} gamma={}",
                v.graph().n(),
                v.graph().m(),
                v.ownership().agent_count(),
                v.ownership().dimension(),
                sparsity_gamma(v.graph())
            );
        }
        Instance::Ufl(u) => {
            let bad = u.metric_violations(1e-9);
            if !bad.is_empty() {
                bail!("generated instance is not metric: {}", bad.join("; "));
            }
            eprintln!(
                "facilities={} clients={} agents={}",
                u.facility_count(),
                u.clients(),
                u.agent_count()
            );
        }
    }
    let mut out = output(a.out.as_deref())?;
    writeln!(out, "{}", to_json(&inst))?;
    out.flush()?;
    Ok(())
}

fn vc_sources(a: &RunArgs) -> Result<Vec<Named<VcInstance>>> {
    let mut v = Vec::new();
    for p in expand_paths(&a.instance)? {
        v.push(load_vc(&p)?);
    }
    if let Some(w) = &a.random {
        let base = RandomVcSpec::parse(w)?;
        for k in 0..a.count {
            let spec = RandomVcSpec {
                seed: base.seed + k,
                ..base
            };
            v.push(Named {
                id: spec.id(),
                instance: spec.generate()?,
            });
        }
    }
    if let Some(n) = a.gadget {
        v.push(Named {
            id: format!("gadget-{n}"),
            instance: gadget_instance(n)?,
        });
    }
    if v.is_empty() {
        bail!("no instances: give --instance, --random or --gadget");
    }
    Ok(v)
}

fn cmd_run(a: &RunArgs) -> Result<()> {
    let name = match (&a.positional, &a.mechanism) {
        (Some(p), Some(m)) if p != m => bail!("mechanism given twice ({p} and {m})"),
        (Some(m), _) | (None, Some(m)) => m.clone(),
        (None, None) => bail!("no mechanism given"),
    };
    let seeds: Vec<u64> = (a.seed..a.seed + a.runs.max(1)).collect();
    let rows = if name == "ufl" {
        let mut jobs = Vec::new();
        for p in expand_paths(&a.instance)? {
            let n = load_ufl(&p)?;
            jobs.extend(seeds.iter().map(|&s| (n.id.clone(), n.instance.clone(), s)));
        }
        if jobs.is_empty() {
            bail!("the ufl mechanism needs --instance files");
        }
        run::collect_rows(&jobs, |(id, inst, s)| {
            run::ufl_row(id, inst, *s, a.fallback_enum, a.timing)
        })?
    } else {
        let kind = MechanismKind::parse(&name)?;
        let sources = vc_sources(a)?;
        let jobs: Vec<(&Named<VcInstance>, MechanismSpec)> = sources
            .iter()
            .flat_map(|n| {
                seeds.iter().map(move |&seed| {
                    (
                        n,
                        MechanismSpec {
                            kind,
                            scaling: a.scaling,
                            gamma: a.gamma,
                            seed,
                        },
                    )
                })
            })
            .collect();
        run::collect_rows(&jobs, |(n, spec)| {
            run::vc_row(&n.id, &n.instance, spec, !a.no_nu, a.timing)
        })?
    };
    let mut out = output(a.out.as_deref())?;
    run::write_rows(&mut out, &rows, a.json, a.timing)?;
    out.flush()?;
    Ok(())
}

fn cmd_run_ufl(a: &RunUflArgs) -> Result<()> {
    let n = load_ufl(&a.instance)?;
    let res = run_ufl_mechanism(
        &n.instance,
        a.seed,
        UflOptions {
            enumerate: a.fallback_enum,
            ..Default::default()
        },
    )?;
    let agents = n.instance.agent_count();
    let v = json!({
        "instance": n.id,
        "seed": a.seed,
        "expected_cost": res.expected_cost(),
        "expected_payments": (0..agents).map(|i| res.expected_payment(i)).collect::<Vec<_>>(),
        "sampled_outcome": res.sampled_outcome(),
        "result": res,
    });
    write_json(a.out.as_deref(), &v)
}

fn cmd_verify(a: &VerifyArgs) -> Result<bool> {
    let cfg = VerifyConfig {
        target: a.target,
        checks: a.checks.clone(),
        probes: a.probes,
        seed: a.seed,
        scaling: a.scaling,
        gamma: a.gamma,
        max_n: a.max_n,
        max_r: a.max_r,
        fixtures: a.fixtures,
        strict: a.strict,
    };
    let (report, pass) = verify::run_verify(&cfg)?;
    write_json(a.out.as_deref(), &report)?;
    Ok(pass)
}

fn cmd_frugality(a: &FrugalityArgs) -> Result<()> {
    let n = load_vc(&a.instance)?;
    let inst = &n.instance;
    let mut report = covermech::verify::frugality_nu(inst.graph(), &inst.node_costs())?;
    let mut v = json!({"instance": n.id});
    if let Some(kind) = a.mechanism {
        let spec = MechanismSpec {
            kind,
            scaling: a.scaling,
            gamma: a.gamma,
            seed: a.seed,
        };
        report = report.with_payment(
            run_mechanism(&spec, inst, Exec::default())?
                .result
                .total_payment(),
        );
        if a.estimate {
            let mech = |i: &VcInstance| Ok(run_mechanism(&spec, i, Exec::Sequential)?.result);
            let est = frugality_ratio_estimate(
                &mech,
                inst.graph(),
                a.trials,
                a.climb,
                a.seed,
                Exec::default(),
            )?;
            v["estimate"] = json!({"lower_bound": true, "search": est});
        }
    } else if a.estimate {
        bail!("--estimate needs --mechanism");
    }
    v["benchmark"] = serde_json::to_value(&report)?;
    write_json(a.out.as_deref(), &v)
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("COVERMECH_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .with_context(|| format!("COVERMECH_THREADS={v:?} is not a number"))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n.max(1))
        .build_global()?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Gen(a) => cmd_gen(a).map(|()| true),
        Command::Run(a) => cmd_run(a).map(|()| true),
        Command::RunUfl(a) => cmd_run_ufl(a).map(|()| true),
        Command::Verify(a) => cmd_verify(a),
        Command::Frugality(a) => cmd_frugality(a).map(|()| true),
        Command::Report(a) => {
            let mut out = output(a.out.as_deref())?;
            report::run_report(&a.inputs, &mut out)?;
            out.flush()?;
            Ok(true)
        }
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
