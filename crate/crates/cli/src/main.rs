use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wavegen_cli::{execute, parse_config, Command, Overrides, Result};

/// Wave generation solvers and grid convergence studies.
#[derive(Parser)]
#[command(name = "wavegen", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Courant ratio dt/dx.
    #[arg(long)]
    courant: Option<f64>,
    /// Final time.
    #[arg(long)]
    tf: Option<f64>,
    /// Cell count; `validate` accepts a comma separated list of coarse levels.
    #[arg(long, value_delimiter = ',')]
    nx: Vec<usize>,
    /// Extra `key=value` override of the command's config section.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Args)]
struct Regime {
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dimensional shallow water run with a sinusoidal wave maker.
    RunSwe {
        #[command(flatten)]
        common: Common,
    },
    /// Dimensionless Boussinesq-Abbott run.
    RunBoussinesq {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        regime: Regime,
    },
    /// Solitary wave profile.
    MakeSoliton {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        regime: Regime,
        #[arg(long)]
        zeta_max: Option<f64>,
    },
    /// Grid convergence study of one scenario.
    Validate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        regime: Regime,
        /// gaussian, soliton or sinusoidal.
        #[arg(long)]
        scenario: Option<String>,
        /// Worker threads for the coarse runs.
        #[arg(long)]
        parallel: Option<usize>,
    },
}

fn overrides(command: Command, common: &Common, regime: Option<&Regime>) -> Result<Overrides> {
    // `--set` first so that dedicated flags win
    let mut o = Overrides::default();
    for s in &common.set {
        o.parse_assignment(s)?;
    }
    if let Some(r) = regime {
        if let Some(v) = r.eps {
            o.set("eps", v);
        }
        if let Some(v) = r.mu {
            o.set("mu", v);
        }
    }
    if let Some(v) = common.courant {
        o.set("courant", v);
    }
    if let Some(v) = common.tf {
        o.set("t_final", v);
    }
    if !common.nx.is_empty() {
        if command == Command::Validate {
            let list: Vec<toml::Value> = common.nx.iter().map(|n| toml::Value::Integer(*n as i64)).collect();
            o.set("coarse_nx", list);
        } else if let [n] = common.nx[..] {
            o.set("n_x", n as i64);
        } else {
            return Err(wavegen_cli::CliError::Config(format!(
                "{} takes a single --nx value",
                command.name()
            )));
        }
    }
    Ok(o)
}

fn run(cli: Cli) -> Result<()> {
    let (command, common, o) = match &cli.command {
        Cmd::RunSwe { common } => (Command::RunSwe, common, overrides(Command::RunSwe, common, None)?),
        Cmd::RunBoussinesq { common, regime } => (
            Command::RunBoussinesq,
            common,
            overrides(Command::RunBoussinesq, common, Some(regime))?,
        ),
        Cmd::MakeSoliton { common, regime, zeta_max } => {
            let mut o = overrides(Command::MakeSoliton, common, Some(regime))?;
            if let Some(v) = zeta_max {
                o.set("zeta_max", *v);
            }
            (Command::MakeSoliton, common, o)
        }
        Cmd::Validate {
            common,
            regime,
            scenario,
            parallel,
        } => {
            let mut o = overrides(Command::Validate, common, Some(regime))?;
            if let Some(s) = scenario {
                o.set("scenario", s.as_str());
            }
            if let Some(n) = parallel {
                o.set("parallel", *n as i64);
            }
            (Command::Validate, common, o)
        }
    };
    let cfg = parse_config(common.config.as_deref(), command, &o)?;
    let outcome = execute(&cfg, &common.out)?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    for f in &outcome.files {
        println!("{}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
