use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use cli_experiments::{run_sweep, verify_suite, SweepConfig, VerifyOptions};
use eisenstein::{eisenstein_eval_with, EvalOptions, SpectralParameter};
use fuchsian_enum::{counting_functions, Enumerator, GroupPresentation};
use hyperbolic_core::UpperHalfPoint;
use serde_json::json;
use surface_families::{basepoint, glue_chain, BasepointSpec, ChainFamilySpec};

/// Eisenstein series on degenerating hyperbolic surfaces.
#[derive(Parser)]
#[command(name = "pinch", version)]
struct Cli {
    /// Worker threads; the default uses every core.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate E(z, s) with a tail estimate.
    Eval {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value = "2")]
        s: String,
        #[arg(long, default_value_t = 1e-8)]
        rel_tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count orbit points near z and below the horocycle.
    Count {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a degeneration sweep from a JSON config and fit exponents.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// CSV path; the fits go next to it. Overrides the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant battery.
    Verify {
        /// JSON verification options.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Also write the report as JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Target {
    /// `modular`, `gamma2`, `gamma-infinity` or a group file.
    #[arg(long, conflicts_with = "family", required_unless_present = "family")]
    group: Option<String>,
    /// Builtin family name or spec file.
    #[arg(long)]
    family: Option<String>,
    /// Pinching length override, `label=L`; repeatable.
    #[arg(long = "length")]
    lengths: Vec<String>,
    /// Point as `x,y` or `x+yi`.
    #[arg(long, conflicts_with = "basepoint", required_unless_present = "basepoint")]
    z: Option<String>,
    /// Family basepoint, e.g. `thick:S2` or `collar:gamma1:0.5:S2`.
    #[arg(long, requires = "family")]
    basepoint: Option<String>,
}

impl Target {
    fn resolve(&self) -> Result<(GroupPresentation, UpperHalfPoint)> {
        if let Some(name) = &self.group {
            let g = match name.as_str() {
                "modular" => GroupPresentation::modular(),
                "gamma2" => GroupPresentation::gamma2_normalized(),
                "gamma-infinity" => GroupPresentation::gamma_infinity(),
                path => GroupPresentation::parse(&std::fs::read_to_string(path).with_context(|| path.to_string())?)?,
            };
            let z = self.z.as_deref().ok_or_else(|| anyhow!("--z is required with --group"))?;
            return Ok((g, z.parse()?));
        }
        let mut spec = ChainFamilySpec::load(self.family.as_deref().expect("clap requires one"))?;
        for kv in &self.lengths {
            let (label, l) = kv.split_once('=').ok_or_else(|| anyhow!("--length wants label=L, got {kv}"))?;
            spec.set_length(label, l.parse().with_context(|| kv.clone())?)?;
        }
        let inst = glue_chain(&spec)?;
        let z = match (&self.z, &self.basepoint) {
            (Some(z), _) => z.parse()?,
            (None, Some(b)) => basepoint(&inst, &b.parse::<BasepointSpec>()?)?,
            (None, None) => bail!("--z or --basepoint is required"),
        };
        Ok((inst.group, z))
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| p.display().to_string()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cmd: Cmd) -> Result<bool> {
    match cmd {
        Cmd::Eval { target, s, rel_tol, out } => {
            let (g, z) = target.resolve()?;
            let s: SpectralParameter = s.parse()?;
            let opts = EvalOptions::default();
            let en = Enumerator::new(&g, opts.enumeration)?;
            let v = eisenstein_eval_with(&en, z, s, rel_tol, &opts)?;
            let j = json!({
                "z": [z.re, z.im],
                "s": [s.sigma, s.tau],
                "E": [v.value.re, v.value.im],
                "tail": v.tail_bound,
                "T_trunc": v.truncation_radius,
                "n_cosets": v.cosets_used,
                "complete": v.complete,
            });
            emit(&(serde_json::to_string_pretty(&j)? + "\n"), &out)?;
            Ok(v.complete)
        }
        Cmd::Count { target, t, out } => {
            let (g, z) = target.resolve()?;
            let en = Enumerator::new(&g, Default::default())?;
            let table = en.enumerate(z, t + 2.0)?;
            let (pz, ph) = counting_functions(&table, t)?;
            let (pz1, _) = counting_functions(&table, t + 1.0)?;
            let j = json!({ "z": [z.re, z.im], "t": t, "pi_z": pz, "pi_h": ph, "pi_z_next": pz1 });
            emit(&(serde_json::to_string_pretty(&j)? + "\n"), &out)?;
            Ok(table.complete)
        }
        Cmd::Sweep { config, out } => {
            let mut cfg = SweepConfig::load(&config).with_context(|| config.display().to_string())?;
            if let Some(p) = out {
                cfg.output_path = Some(p.display().to_string());
            }
            let report = run_sweep(&cfg)?;
            if cfg.output_path.is_none() {
                print!("{}", report.csv_string());
            }
            for f in &report.fits {
                let slope = f.fit.map_or("none".to_string(), |x| format!("{:.3} ± {:.3}", x.slope, x.stderr));
                eprintln!(
                    "{} s={} {}: slope {slope} in [{}, {}] ± {}: {}",
                    f.varied,
                    f.s,
                    f.basepoint,
                    f.bracket.lower,
                    f.bracket.upper,
                    f.bracket.tol,
                    if f.in_bracket { "yes" } else { "NO" }
                );
            }
            let failed = report.failed_rows();
            if failed > 0 {
                eprintln!("{failed} of {} rows failed", report.rows.len());
            }
            Ok(failed == 0)
        }
        Cmd::Verify { config, out } => {
            let opts: VerifyOptions = match &config {
                Some(p) => serde_json::from_str(&std::fs::read_to_string(p).with_context(|| p.display().to_string())?)?,
                None => VerifyOptions::default(),
            };
            let report = verify_suite(&opts);
            print!("{}", report.to_text());
            if let Some(p) = out {
                std::fs::write(&p, report.to_json()).with_context(|| p.display().to_string())?;
            }
            Ok(report.passed())
        }
    }
}

fn main() -> Result<ExitCode> {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n);
    }
    pool.build_global()?;
    Ok(if run(cli.cmd)? { ExitCode::SUCCESS } else { ExitCode::from(2) })
}
