use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dihedral_core::obstruction::enum_cap_from_env;
use dihedral_core::report::{self, render_text, render_twist_text, twist_family, AnalyzeOptions, KnotRecord, XiOptions};
use dihedral_core::scan::{scan_path, ScanRow};
use dihedral_core::{parse_matrix, parse_vector, selftest, SeifertMatrix, SigmaW};

#[derive(Parser)]
#[command(name = "dihedral", version, about = "Dihedral quotients, linking forms, and ribbon obstructions of knots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one Seifert matrix.
    Analyze(AnalyzeArgs),
    /// Analyze every row of a CSV (name,seifert) or JSON-lines table.
    Scan(ScanArgs),
    /// Tabulate the twist knots K_m at n = 3.
    Twist(TwistArgs),
    /// List the characteristic classes of a Seifert matrix mod n.
    Charknots(CharknotsArgs),
    /// Run the built-in regression table.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// Modulus to analyze; repeatable. Defaults to every odd divisor of the determinant.
    #[arg(long = "n")]
    n: Vec<u64>,
    /// Largest modulus chosen automatically.
    #[arg(long, default_value_t = 99)]
    n_max: u64,
    /// Enumeration cap; overrides DIHEDRAL_ENUM_CAP.
    #[arg(long)]
    enum_cap: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

impl Common {
    fn options(&self) -> AnalyzeOptions {
        AnalyzeOptions {
            n_list: (!self.n.is_empty()).then(|| self.n.clone()),
            n_max: self.n_max,
            enum_cap: self.enum_cap.unwrap_or_else(enum_cap_from_env),
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Seifert matrix in brace, JSON, or grid form.
    #[arg(long)]
    matrix: String,
    #[arg(long, default_value = "K")]
    name: String,
    #[command(flatten)]
    common: Common,
    /// Surface class of the characteristic knot, enabling the Xi block.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Seifert matrix of the characteristic knot itself; the unknot when omitted.
    #[arg(long, requires = "beta")]
    beta_seifert: Option<String>,
    #[arg(long, default_value_t = 3, requires = "beta")]
    xi_n: u64,
    /// Exact signature of the 4-manifold W.
    #[arg(long, allow_hyphen_values = true, group = "sigma", requires = "beta")]
    sigma_w: Option<i64>,
    /// Signature of W known up to sign.
    #[arg(long, group = "sigma", requires = "beta")]
    sigma_w_pm: Option<u64>,
    /// Only a bound |sigma(W)| <= B is known.
    #[arg(long, group = "sigma", requires = "beta")]
    sigma_w_bound: Option<u64>,
    /// Rank of H1 of the irregular dihedral cover, for the ribbon test.
    #[arg(long, requires = "beta")]
    rank_h1: Option<u64>,
}

#[derive(Args)]
struct ScanArgs {
    path: PathBuf,
    #[command(flatten)]
    common: Common,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct TwistArgs {
    #[arg(long, default_value_t = -10, allow_hyphen_values = true)]
    from: i64,
    #[arg(long, default_value_t = 10, allow_hyphen_values = true)]
    to: i64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct CharknotsArgs {
    #[arg(long)]
    matrix: String,
    #[arg(long = "n")]
    n: u64,
    #[arg(long)]
    enum_cap: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn matrix(text: &str) -> Result<SeifertMatrix> {
    parse_matrix(text).with_context(|| format!("invalid Seifert matrix {text:?}"))
}

fn analyze(args: &AnalyzeArgs, out: &mut impl Write) -> Result<()> {
    let mut opts = args.common.options();
    if let Some(beta) = &args.beta {
        let sigma_w = match (args.sigma_w, args.sigma_w_pm, args.sigma_w_bound) {
            (Some(s), _, _) => SigmaW::Exact(s),
            (_, Some(s), _) => SigmaW::PlusMinus(s),
            (_, _, Some(b)) => SigmaW::Bounded(b),
            _ => bail!("--beta needs one of --sigma-w, --sigma-w-pm, --sigma-w-bound"),
        };
        opts.xi = Some(XiOptions {
            n: args.xi_n,
            beta: parse_vector(beta).with_context(|| format!("invalid --beta {beta:?}"))?,
            v_beta: args.beta_seifert.as_deref().map(matrix).transpose()?.unwrap_or_else(SeifertMatrix::unknot),
            sigma_w,
            rank_h1: args.rank_h1,
        });
    }
    let record = KnotRecord {
        name: args.name.clone(),
        seifert: matrix(&args.matrix)?,
        source: "command line".into(),
    };
    let r = report::analyze(&record, &opts)?;
    match args.common.format {
        Format::Json => writeln!(out, "{}", r.to_json_pretty())?,
        Format::Text => write!(out, "{}", render_text(&r))?,
    }
    Ok(())
}

fn scan(args: &ScanArgs, out: &mut impl Write) -> Result<()> {
    let rows = scan_path(&args.path, &args.common.options(), args.jobs)?;
    for row in rows {
        match (args.common.format, &row) {
            (Format::Json, _) => writeln!(out, "{}", row.to_json())?,
            (Format::Text, ScanRow::Report(r)) => writeln!(out, "{}", render_text(r))?,
            (Format::Text, ScanRow::Error(e)) => writeln!(
                out,
                "row {} ({}): error: {}\n",
                e.row,
                e.name.as_deref().unwrap_or("unnamed"),
                e.error
            )?,
        }
    }
    Ok(())
}

fn twist(args: &TwistArgs, out: &mut impl Write) -> Result<()> {
    if args.from > args.to {
        bail!("empty range {}..={}", args.from, args.to);
    }
    let rows = twist_family(args.from..=args.to);
    match args.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?,
        Format::Text => write!(out, "{}", render_twist_text(&rows))?,
    }
    Ok(())
}

fn charknots(args: &CharknotsArgs, out: &mut impl Write) -> Result<()> {
    let opts = AnalyzeOptions {
        n_list: Some(vec![args.n]),
        enum_cap: args.enum_cap.unwrap_or_else(enum_cap_from_env),
        ..Default::default()
    };
    let record = KnotRecord {
        name: "K".into(),
        seifert: matrix(&args.matrix)?,
        source: "command line".into(),
    };
    let r = report::analyze(&record, &opts)?;
    let ch = &r.blocks[0].characteristic;
    match args.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(ch)?)?,
        Format::Text => {
            if let Some(note) = &ch.note {
                writeln!(out, "{note}")?;
            }
            for o in &ch.orbits {
                writeln!(
                    out,
                    "beta = ({})  orbit {}  form {} = {} mod {}  {}",
                    o.beta.join(","),
                    o.orbit_size,
                    o.form_value,
                    o.form_mod_n2,
                    args.n * args.n,
                    if o.criterion { "zero-framed" } else { "not zero-framed" }
                )?;
            }
            writeln!(out, "{} classes, {} up to units", ch.count.unwrap_or(0), ch.orbits.len())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match &cli.command {
        Command::Analyze(a) => analyze(a, &mut out),
        Command::Scan(a) => scan(a, &mut out),
        Command::Twist(a) => twist(a, &mut out),
        Command::Charknots(a) => charknots(a, &mut out),
        Command::Selftest => {
            let checks = selftest::run();
            let _ = write!(out, "{}", selftest::render_table(&checks));
            if checks.iter().all(|c| c.passed()) {
                return ExitCode::SUCCESS;
            }
            return ExitCode::from(2);
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
