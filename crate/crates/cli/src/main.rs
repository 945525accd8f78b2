use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lindim::oracle::DEFAULT_SEED;
use lindim::picard::{CremonaMove, ReductionVerdict};
use lindim::{
    apolarity_dimension, cones_h0, cones_h1, cremona_reduce, cycle_multiplicity_probe,
    interpolation_dimension, truncated_series, weyl_base_locus, ContainmentPolicy,
    CremonaReduction, LinearSystem, MultiIndex, OracleConfig, PicardClass,
};
use lindim_cli::report::class_string;
use lindim_cli::sweep::{vdim_i64, PRESETS};
use lindim_cli::{
    analyze, preset, render_analysis, run_sweep, Cache, CacheRecord, Checks, CliError, Family,
    PointCount, SweepSpec, SweepSummary,
};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "lindim",
    version,
    about = "Dimensions of linear systems with multiple points"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct SystemArgs {
    /// Dimension of the projective space.
    #[arg(short = 'n')]
    n: u32,
    /// Degree.
    #[arg(short = 'd')]
    d: u32,
    /// Multiplicities, e.g. `5,5,5,4` or `3x9`.
    #[arg(short = 'm', long = "mults", default_value = "")]
    mults: String,
}

impl SystemArgs {
    fn system(&self) -> lindim::Result<LinearSystem> {
        LinearSystem::parse(self.n, self.d, &self.mults)
    }
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, env = "LINDIM_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    trials: u32,
    /// Size of the random primes.
    #[arg(long, default_value_t = 62)]
    prime_bits: u32,
}

impl OracleArgs {
    fn config(&self) -> OracleConfig {
        OracleConfig {
            prime_bits: self.prime_bits,
            trials: self.trials,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Dimensions, base locus and cohomology of one system.
    Analyze {
        #[command(flatten)]
        system: SystemArgs,
        /// Also measure the actual dimension.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        oracle_args: OracleArgs,
        #[arg(long, default_value = "point-deletion")]
        policy: ContainmentPolicy,
        /// Search the Weyl orbit this deep for divisorial base components.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run a family of systems through the oracle and check the predictions.
    Sweep {
        /// One of triple-p3, triple-p4, triple-p5, degree10-p3.
        #[arg(long, conflicts_with_all = ["n", "d", "mult", "s"])]
        preset: Option<String>,
        /// Range such as `3`, `3..6` or `3..=6`.
        #[arg(short = 'n')]
        n: Option<String>,
        #[arg(short = 'd')]
        d: Option<String>,
        /// The common multiplicity.
        #[arg(short = 'm', long = "mult")]
        mult: Option<u32>,
        /// Point counts; `lo..` runs until the system is empty.
        #[arg(short = 's', default_value = "1..")]
        s: String,
        /// Comma-separated checks, `all` or `none`.
        #[arg(long, default_value = "all")]
        checks: String,
        /// Worker threads, 0 for one per core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[command(flatten)]
        oracle_args: OracleArgs,
        #[arg(long, default_value = "point-deletion")]
        policy: ContainmentPolicy,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Cremona reduction trace and Weyl-orbit base components.
    Cremona {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// List orbit elements meeting the class non-positively.
        #[arg(long)]
        weyl: bool,
        /// Apply one transformation at these points (1-based labels)
        /// instead of reducing.
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Actual dimension by rank computations over random primes.
    Oracle {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        oracle_args: OracleArgs,
        /// Also compute it from the powers of linear forms.
        #[arg(long)]
        apolarity: bool,
        /// Vanishing order along the span of these points (1-based labels).
        #[arg(long, value_delimiter = ',')]
        probe: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Truncated Hilbert series of powers of general linear forms.
    Froberg {
        #[arg(short = 'n')]
        n: u32,
        /// Generator degrees.
        #[arg(long, value_delimiter = ',', requires = "top")]
        degrees: Option<Vec<u32>>,
        /// Last degree to compute.
        #[arg(short = 'D')]
        top: Option<usize>,
        /// Use the generator degrees `d + 1 - m_i` of this system instead.
        #[arg(short = 'd', conflicts_with = "degrees")]
        d: Option<u32>,
        #[arg(short = 'm', long = "mults", default_value = "")]
        mults: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Cohomology of `L_{n,d}(d^s)`.
    Cones {
        #[arg(short = 'n')]
        n: u32,
        #[arg(short = 'd')]
        d: u32,
        #[arg(short = 's')]
        s: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

fn parse_range(text: &str) -> Result<(u32, Option<u32>), CliError> {
    let bad = || CliError::Spec(format!("bad range `{text}`"));
    let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad());
    if let Some((lo, hi)) = text.split_once("..") {
        let lo = num(lo)?;
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        if hi.trim().is_empty() {
            return Ok((lo, None));
        }
        Ok((lo, Some(num(hi)?)))
    } else {
        let v = num(text)?;
        Ok((v, Some(v)))
    }
}

fn closed_range(text: &str) -> Result<(u32, u32), CliError> {
    match parse_range(text)? {
        (lo, Some(hi)) => Ok((lo, hi)),
        _ => Err(CliError::Spec(format!("range `{text}` needs an upper end"))),
    }
}

fn print_json(v: &impl serde::Serialize) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn print_record_row(out: &mut impl Write, rec: &CacheRecord) -> io::Result<()> {
    let vdim = vdim_i64(&rec.system)
        .map(|v| v.to_string())
        .unwrap_or_else(|| "huge".into());
    writeln!(
        out,
        "{:<28} {:>8} {:>8} {:>8}  {}",
        rec.system.to_string(),
        vdim,
        rec.report.ldim,
        rec.oracle.dim,
        rec.report.classification
    )
}

fn print_summary_table(out: &mut impl Write, s: &SweepSummary) -> io::Result<()> {
    writeln!(
        out,
        "\n{} systems, {} computed, {} from cache",
        s.total, s.computed, s.reused
    )?;
    for (k, v) in &s.counts {
        writeln!(out, "  {k}: {v}")?;
    }
    let list = |v: &[LinearSystem]| {
        v.iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    writeln!(out, "special: {}", list(&s.special))?;
    writeln!(out, "linearly special: {}", list(&s.linearly_special))?;
    if !s.policy_disagreements.is_empty() {
        writeln!(
            out,
            "policy-dependent ldim: {}",
            list(&s.policy_disagreements)
        )?;
    }
    for v in &s.violations {
        writeln!(out, "VIOLATION {} {}: {}", v.check, v.system, v.detail)?;
    }
    Ok(())
}

fn sweep_spec(
    preset_name: Option<String>,
    n: Option<String>,
    d: Option<String>,
    mult: Option<u32>,
    s: &str,
) -> Result<SweepSpec, CliError> {
    if let Some(name) = preset_name {
        return preset(&name).ok_or_else(|| {
            CliError::Spec(format!(
                "unknown preset `{name}`, expected one of {}",
                PRESETS.join(", ")
            ))
        });
    }
    let missing = |f: &str| CliError::Spec(format!("`{f}` is required without --preset"));
    let n_range = closed_range(&n.ok_or_else(|| missing("-n"))?)?;
    let d_range = closed_range(&d.ok_or_else(|| missing("-d"))?)?;
    let m = mult.ok_or_else(|| missing("-m"))?;
    let s = match parse_range(s)? {
        (lo, Some(hi)) => PointCount::Range {
            lo: lo as usize,
            hi: hi as usize,
        },
        (lo, None) => PointCount::UntilEmpty {
            from: lo as usize,
            max: 4096,
        },
    };
    Ok(SweepSpec::new(
        "custom",
        Family::Homogeneous {
            n_range,
            d_range,
            m,
            s,
        },
    ))
}

fn single_move(class: &PicardClass, labels: &[usize]) -> Result<CremonaReduction, CliError> {
    let subset = MultiIndex::from_labels(labels, class.s())?;
    let c = class.cremona_defect(subset.indices())?;
    let result = class.cremona(subset.indices())?;
    let verdict = if result.degree() < 0 {
        ReductionVerdict::NegativeDegree
    } else {
        ReductionVerdict::Reduced
    };
    Ok(CremonaReduction {
        start: class.clone(),
        reduced: result.clone(),
        moves: vec![CremonaMove::Cremona { subset, c, result }],
        verdict,
    })
}

/// `Ok(true)` when a sweep found violations.
fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.cmd {
        Cmd::Analyze {
            system,
            oracle,
            oracle_args,
            policy,
            depth,
            format,
        } => {
            let sys = system.system()?;
            let cfg = oracle_args.config();
            let a = analyze(&sys, policy, oracle.then_some(&cfg), depth)?;
            match format {
                Format::Json => print_json(&a)?,
                Format::Table => print!("{}", render_analysis(&a)),
            }
        }
        Cmd::Sweep {
            preset,
            n,
            d,
            mult,
            s,
            checks,
            jobs,
            cache,
            oracle_args,
            policy,
            format,
        } => {
            let mut spec = sweep_spec(preset, n, d, mult, &s)?;
            spec.checks = Checks::parse(&checks)?;
            spec.parallelism = jobs;
            spec.oracle = oracle_args.config();
            spec.policy = policy;
            let mut cache = match cache {
                Some(p) => Cache::open(p)?,
                None => Cache::in_memory(),
            };
            let (records, summary) = run_sweep(&spec, &mut cache)?;
            let mut out = io::stdout().lock();
            match format {
                Format::Json => {
                    for r in &records {
                        serde_json::to_writer(&mut out, r)?;
                        writeln!(out)?;
                    }
                    serde_json::to_writer(&mut out, &json!({ "summary": summary }))?;
                    writeln!(out)?;
                }
                Format::Table => {
                    writeln!(
                        out,
                        "{:<28} {:>8} {:>8} {:>8}  classification",
                        "system", "vdim", "ldim", "dim"
                    )?;
                    for r in &records {
                        print_record_row(&mut out, r)?;
                    }
                    print_summary_table(&mut out, &summary)?;
                }
            }
            return Ok(!summary.violations.is_empty());
        }
        Cmd::Cremona {
            system,
            depth,
            weyl,
            subset,
            format,
        } => {
            let sys = system.system()?;
            let class = PicardClass::from_system(&sys);
            let red = match subset {
                Some(labels) => single_move(&class, &labels)?,
                None => cremona_reduce(&class),
            };
            let orbit = if weyl {
                Some(weyl_base_locus(&class, depth, false)?)
            } else {
                None
            };
            match format {
                Format::Json => print_json(&json!({ "reduction": red, "weyl": orbit }))?,
                Format::Table => {
                    println!("start    {}", class_string(&red.start));
                    for mv in &red.moves {
                        match mv {
                            CremonaMove::Cremona { subset, c, result } => {
                                let l: Vec<String> =
                                    subset.labels().iter().map(usize::to_string).collect();
                                println!(
                                    "cremona  {}  at {{{}}}, c = {c}",
                                    class_string(result),
                                    l.join(",")
                                );
                            }
                            CremonaMove::Normalize { result } => {
                                println!("clamp    {}", class_string(result));
                            }
                        }
                    }
                    println!("verdict  {:?}", red.verdict);
                    for c in orbit.iter().flatten() {
                        println!(
                            "weyl     {}  depth {}  mult {}",
                            class_string(&c.class),
                            c.depth,
                            c.mult
                        );
                    }
                }
            }
        }
        Cmd::Oracle {
            system,
            oracle_args,
            apolarity,
            probe,
            format,
        } => {
            let sys = system.system()?;
            let cfg = oracle_args.config();
            let interp = interpolation_dimension(&sys, &cfg)?;
            let apo = if apolarity {
                Some(apolarity_dimension(&sys, &cfg)?)
            } else {
                None
            };
            let probe = match probe {
                Some(labels) => {
                    let idx = MultiIndex::from_labels(&labels, sys.s())?;
                    Some(cycle_multiplicity_probe(&sys, &idx, &cfg)?)
                }
                None => None,
            };
            match format {
                Format::Json => print_json(&json!({
                    "system": sys,
                    "config": cfg,
                    "interpolation": interp,
                    "apolarity": apo,
                    "probe": probe,
                }))?,
                Format::Table => {
                    println!("system         {sys}");
                    println!(
                        "interpolation  {} (per trial {:?})",
                        interp.dim, interp.per_trial
                    );
                    if let Some(a) = apo {
                        println!("apolarity      {} (per trial {:?})", a.dim, a.per_trial);
                    }
                    if let Some(p) = probe {
                        println!("probe          {p}");
                    }
                }
            }
        }
        Cmd::Froberg {
            n,
            degrees,
            top,
            d,
            mults,
            format,
        } => {
            let (degrees, top) = match (degrees, d) {
                (Some(deg), _) => (deg, top.expect("clap enforces -D")),
                (None, Some(d)) => {
                    let sys = LinearSystem::parse(n, d, &mults)?;
                    (
                        lindim::froberg::apolar_degrees(&sys)?,
                        top.unwrap_or(d as usize),
                    )
                }
                (None, None) => {
                    return Err(CliError::Spec(
                        "give --degrees with -D, or -d with -m".into(),
                    ))
                }
            };
            let series = truncated_series(n, &degrees, top);
            match format {
                Format::Json => print_json(&series)?,
                Format::Table => {
                    let join = |v: &[num_bigint::BigInt]| {
                        v.iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    };
                    println!("raw        [{}]", join(&series.raw));
                    println!("truncated  [{}]", join(&series.coefficients));
                }
            }
        }
        Cmd::Cones { n, d, s, format } => {
            let h0 = cones_h0(n, d, s)?;
            let h1 = cones_h1(n, d, s)?;
            match format {
                Format::Json => print_json(&json!({
                    "n": n,
                    "d": d,
                    "s": s,
                    "h0": lindim::system::bigint_json::Wrap(&h0),
                    "h1": lindim::system::bigint_json::Wrap(&h1),
                }))?,
                Format::Table => println!("h0 {h0}\nh1 {h1}"),
            }
        }
    }
    Ok(false)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("lindim: {e}");
            ExitCode::from(2)
        }
    }
}
