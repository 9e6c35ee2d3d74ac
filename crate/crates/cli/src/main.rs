use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hrc_core::model::cost::{safety_cost_terms, task_cost_terms};
use hrc_core::model::{safety_cost, task_cost, total_cost};
use hrc_core::sim::{self, Mode, Scenario, TraceFormat, CASE_STUDY};
use hrc_core::solver::{extract_policy, value_iteration, SolveOptions, SolveReport, SweepMode};
use hrc_core::transition::CommitOverride;
use hrc_core::{Decision, Error, FactoredState, ModelConfig, Policy, DEFAULT_CONFIG};

const EXIT_VALIDATION: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;
const EXIT_ABORTED: u8 = 4;

/// Solve and simulate the human-robot collaboration POMDP.
#[derive(Parser)]
#[command(name = "hrc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run value iteration and write the optimal policy.
    Solve {
        #[command(flatten)]
        model: ModelArgs,
        /// Policy file to write.
        #[arg(long)]
        out: PathBuf,
        /// Back up states on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Execute a policy against a scenario and write the trace.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        /// Scenario file [default: built-in three-task case study].
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Policy file produced by `solve`.
        #[arg(long)]
        policy: PathBuf,
        /// Trace file to write [default: stdout].
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the scenario mode.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Trace format.
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Print the index, cost breakdown and successors of one state.
    InspectState {
        #[command(flatten)]
        model: ModelArgs,
        /// Policy file; its action is used for the successor listing.
        #[arg(long)]
        policy: Option<PathBuf>,
        /// Decision for the successor listing when no policy is given.
        #[arg(long)]
        decision: Option<String>,
        /// The 11 state fields in canonical order, separated by spaces or commas.
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        state: Vec<String>,
    },
    /// Check a config (and optionally a scenario) without solving.
    ValidateConfig {
        #[command(flatten)]
        model: ModelArgs,
        /// Scenario file to check against the config.
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Print the built-in config and case-study scenario and exit.
        #[arg(long)]
        print_defaults: bool,
    },
    /// Summarise a policy file.
    ShowPolicy {
        /// Policy file produced by `solve`.
        #[arg(long)]
        policy: PathBuf,
        /// Config to check the policy against.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ModelArgs {
    /// Model config file [default: built-in defaults].
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the discount factor.
    #[arg(long)]
    gamma: Option<f64>,
    /// Overrides the convergence tolerance.
    #[arg(long)]
    eta: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Mdp,
    Pomdp,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Table,
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_validation() {
            EXIT_VALIDATION
        } else {
            EXIT_ABORTED
        };
        Failure {
            code,
            error: e.into(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = match error.downcast_ref::<Error>() {
            Some(e) if !e.is_validation() => EXIT_ABORTED,
            _ => EXIT_VALIDATION,
        };
        Failure { code, error }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve {
            model,
            out,
            sequential,
        } => cmd_solve(&model, &out, sequential),
        Command::Simulate {
            model,
            scenario,
            policy,
            out,
            seed,
            mode,
            format,
        } => cmd_simulate(
            &model,
            scenario.as_deref(),
            &policy,
            out.as_deref(),
            seed,
            mode,
            format,
        ),
        Command::InspectState {
            model,
            policy,
            decision,
            state,
        } => cmd_inspect_state(&model, policy.as_deref(), decision.as_deref(), &state),
        Command::ValidateConfig {
            model,
            scenario,
            print_defaults,
        } => cmd_validate_config(&model, scenario.as_deref(), print_defaults),
        Command::ShowPolicy { policy, config } => cmd_show_policy(&policy, config.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn load_config(args: &ModelArgs) -> Result<ModelConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => ModelConfig::from_path(path)?,
        None => ModelConfig::default(),
    };
    if let Some(g) = args.gamma {
        cfg.params.gamma = g;
    }
    if let Some(e) = args.eta {
        cfg.params.eta = e;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_solve(args: &ModelArgs, out: &Path, sequential: bool) -> CmdResult {
    let cfg = load_config(args)?;
    let tm = cfg.build_transition_model()?;
    let mode = if sequential {
        SweepMode::Sequential
    } else {
        SweepMode::Parallel
    };
    let opts = SolveOptions::new(cfg.params.eta, cfg.params.max_sweeps).with_mode(mode);
    let (table, report) = value_iteration(&tm, &opts);
    println!("states: {}", report.states);
    println!("sweeps: {}", report.sweeps);
    println!("final residual: {:e}", report.final_residual);
    if let Some(r) = SolveReport::residual_at(&table, 20) {
        println!("residual at sweep 20: {r:e}");
    }
    println!("wall time: {:.3}s", report.wall_time.as_secs_f64());
    if !report.converged {
        return Err(Failure {
            code: EXIT_NOT_CONVERGED,
            error: anyhow!(
                "no convergence within {} sweeps (residual {:e}, eta {:e})",
                report.sweeps,
                report.final_residual,
                cfg.params.eta
            ),
        });
    }
    let actions = extract_policy(&tm, &table.values, mode);
    let policy = Policy::new(actions, cfg.provenance())?;
    policy.save(out)?;
    println!(
        "policy: {} ({})",
        out.display(),
        policy.provenance.hash_hex()
    );
    Ok(())
}

fn cmd_simulate(
    args: &ModelArgs,
    scenario: Option<&Path>,
    policy_path: &Path,
    out: Option<&Path>,
    seed: Option<u64>,
    mode: Option<ModeArg>,
    format: FormatArg,
) -> CmdResult {
    let cfg = load_config(args)?;
    let mut sc = match scenario {
        Some(path) => Scenario::from_path(path)?,
        None => Scenario::case_study(),
    };
    if let Some(seed) = seed {
        sc.seed = seed;
    }
    if let Some(m) = mode {
        sc.mode = match m {
            ModeArg::Mdp => Mode::Mdp,
            ModeArg::Pomdp => Mode::Pomdp,
        };
    }
    sc.validate(&cfg.params)?;
    let policy = Policy::load_for(policy_path, &cfg.provenance())?;
    let tm = cfg.build_transition_model()?;
    let trace = sim::run(&sc, &policy, &tm, &cfg.observation)?;
    let format = match format {
        FormatArg::Csv => TraceFormat::Csv,
        FormatArg::Table => TraceFormat::Table,
    };
    let text = trace.emit(format);
    match out {
        Some(path) => write_atomic(path, text.as_bytes())
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    // Keep stdout clean for the trace when it goes there.
    let summary = sim::summarize(&trace);
    if out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut f = fs::File::create(&tmp)?;
    f.write_all(bytes)?;
    f.sync_all()?;
    fs::rename(&tmp, path)
}

fn parse_state(raw: &[String]) -> Result<Vec<i64>, anyhow::Error> {
    raw.iter()
        .flat_map(|s| s.split(','))
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<i64>()
                .with_context(|| format!("`{s}` is not an integer"))
        })
        .collect()
}

fn cmd_inspect_state(
    args: &ModelArgs,
    policy_path: Option<&Path>,
    decision: Option<&str>,
    raw: &[String],
) -> CmdResult {
    let cfg = load_config(args)?;
    let p = &cfg.params;
    let values = parse_state(raw)?;
    let s = FactoredState::from_values(&values, p)?;
    let tm = cfg.build_transition_model()?;
    let index = tm.space().encode(&s)?;
    println!("state: {s}");
    println!("index: {}", index.0);
    let f1 = task_cost_terms(&s, p);
    let f2 = safety_cost_terms(&s, p);
    println!("f1 terms: {}", join(&f1));
    println!("f1: {}", task_cost(&s, p));
    println!("f2 terms: {}", join(&f2));
    println!("f2: {}", safety_cost(&s, p));
    println!("J: {} (k1 = {}, k2 = {})", total_cost(&s, p), p.k1, p.k2);

    let action = match (policy_path, decision) {
        (Some(path), _) => {
            let policy = Policy::load_for(path, &cfg.provenance())?;
            let a = policy.action(index.0);
            println!("policy action: {a}");
            Some(a)
        }
        (None, Some(d)) => Some(d.parse::<Decision>()?),
        (None, None) => None,
    };
    if let Some(d) = action {
        let mut succ = Vec::new();
        tm.successors_into(&s, d, CommitOverride::Model, &mut succ);
        println!("successors under {d}:");
        for (i, prob) in succ {
            println!("  {} {:.6}", tm.space().state_at(i), prob);
        }
    }
    Ok(())
}

fn join(v: &[f64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_validate_config(
    args: &ModelArgs,
    scenario: Option<&Path>,
    print_defaults: bool,
) -> CmdResult {
    if print_defaults {
        println!("# ---- config ----");
        print!("{DEFAULT_CONFIG}");
        println!("# ---- scenario ----");
        print!("{CASE_STUDY}");
        return Ok(());
    }
    let cfg = load_config(args)?;
    if let Some(path) = scenario {
        Scenario::from_path(path)?.validate(&cfg.params)?;
    }
    let provenance = cfg.provenance();
    println!(
        "ok: {} states, model hash {}",
        provenance.states(),
        provenance.hash_hex()
    );
    Ok(())
}

fn cmd_show_policy(path: &Path, config: Option<&Path>) -> CmdResult {
    let policy = match config {
        Some(c) => Policy::load_for(path, &ModelConfig::from_path(c)?.provenance())?,
        None => Policy::load(path)?,
    };
    println!("states: {}", policy.len());
    let radices: Vec<String> = policy
        .provenance
        .radices
        .iter()
        .map(u32::to_string)
        .collect();
    println!("radices: [{}]", radices.join(","));
    println!("model hash: {}", policy.provenance.hash_hex());
    let mut counts = [0usize; Decision::COUNT];
    for a in &policy.actions {
        counts[*a as usize] += 1;
    }
    for d in Decision::ALL {
        println!("{d:>3} {}", counts[d as usize]);
    }
    Ok(())
}
