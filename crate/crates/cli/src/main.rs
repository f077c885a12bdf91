use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use twisted_qp::characters::{CharacterObject, CharacterRequest, Method};
use twisted_qp::json::{self, SeriesMeta};
use twisted_qp::quasiparticle::{visit_basis, BasisKind, ChargeCap};
use twisted_qp::rational::{format_rational, parse_rational, qi, Q};
use twisted_qp::verification::{default_suite, Check, CheckStatus, VerificationReport, CHECK_NAMES};
use twisted_qp::{Error, GradedSeries, RectangularWeight, RootSeries, TwistedRootDatum};

#[derive(Parser, Debug)]
#[command(name = "twisted-qp", version, about = "Quasi-particle bases and characters for A_{2l-1}^(2) and D_{l+1}^(2)")]
struct Cli {
    /// Worker threads for the parallel sums (output does not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Folded root datum: Gram matrix, mu, special node, orbit table.
    Datum {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate a character as a truncated series.
    Char {
        #[arg(long, value_parser = parse_object)]
        object: CharacterObject,
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long, value_parser = parse_q)]
        qmax: Q,
        #[arg(long, value_enum, default_value_t = MethodArg::Formula)]
        method: MethodArg,
        /// Parafermionic only: keep the color grading.
        #[arg(long)]
        track_colors: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Stream basis monomials as JSON lines.
    Enumerate {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Largest charge, or `inf`.
        #[arg(long, value_parser = parse_cap)]
        cap: ChargeCap,
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long, value_parser = parse_q)]
        qmax: Q,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a named check, or `all` for the full suite.
    Verify {
        #[arg(long, value_parser = parse_check_name)]
        check: String,
        #[arg(long, value_parser = parse_series)]
        series: Option<RootSeries>,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        k0: Option<u32>,
        #[arg(long)]
        kj: Option<u32>,
        #[arg(long, value_parser = parse_q)]
        qmax: Option<Q>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Debug)]
struct AlgebraArgs {
    #[arg(long, value_parser = parse_series)]
    series: RootSeries,
    #[arg(long)]
    rank: usize,
}

#[derive(Args, Debug)]
struct WeightArgs {
    #[arg(long, default_value_t = 1)]
    k0: u32,
    #[arg(long, default_value_t = 0)]
    kj: u32,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write to this file (atomically) instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    Formula,
    Enumerate,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum KindArg {
    Standard,
    Verma,
}

fn parse_q(s: &str) -> Result<Q, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_series(s: &str) -> Result<RootSeries, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_object(s: &str) -> Result<CharacterObject, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_cap(s: &str) -> Result<ChargeCap, String> {
    if s == "inf" {
        return Ok(ChargeCap::Unbounded);
    }
    s.parse::<u32>().map(ChargeCap::Finite).map_err(|_| format!("cap must be a nonnegative integer or `inf`, got `{s}`"))
}

fn parse_check_name(s: &str) -> Result<String, String> {
    if s == "all" || s == "corollary-all-roots" || CHECK_NAMES.contains(&s) {
        Ok(s.to_string())
    } else {
        Err(format!("unknown check `{s}` (expected all, corollary-all-roots or one of {})", CHECK_NAMES.join(", ")))
    }
}

/// Failure modes, each with its exit code.
enum Failure {
    Usage(String),
    Precision(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InsufficientPrecision { .. } => Failure::Precision(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let rendered = e.to_string();
            eprintln!("{}", rendered.lines().next().unwrap_or("usage error"));
            return ExitCode::from(2);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot set up {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Precision(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Datum { algebra, output } => {
            let datum = TwistedRootDatum::build(algebra.series, algebra.rank)?;
            let text = match output.format {
                Format::Json => json::datum_to_json(&datum) + "\n",
                Format::Text => datum_text(&datum),
            };
            emit(&output, &text)?;
            Ok(0)
        }
        Command::Char { object, algebra, weight, qmax, method, track_colors, output } => {
            let datum = TwistedRootDatum::build(algebra.series, algebra.rank)?;
            let w = RectangularWeight::new(weight.k0, weight.kj)?;
            let mut req = CharacterRequest::new(datum, w, object, qmax);
            req.track_colors = track_colors;
            req.method = match method {
                MethodArg::Formula => Method::Formula,
                MethodArg::Enumerate => Method::Enumerate,
            };
            let series = req.evaluate()?;
            let meta = SeriesMeta {
                series: algebra.series.to_string(),
                rank: algebra.rank,
                k0: w.k0,
                kj: w.kj,
                object: object.name().to_string(),
                qmax: format_rational(&qmax),
                denominator: series.denominator(),
            };
            let text = match output.format {
                Format::Json => json::series_to_json(&series, meta) + "\n",
                Format::Text => series_text(&series, &meta),
            };
            emit(&output, &text)?;
            Ok(0)
        }
        Command::Enumerate { kind, cap, algebra, weight, qmax, output } => {
            let datum = TwistedRootDatum::build(algebra.series, algebra.rank)?;
            let w = RectangularWeight::new(weight.k0, weight.kj)?;
            if qmax < Q::from_integer(0) {
                return Err(Failure::Usage(format!("qmax must be nonnegative, got {qmax}")));
            }
            let kind = match kind {
                KindArg::Standard => BasisKind::Standard,
                KindArg::Verma => BasisKind::Verma,
            };
            with_sink(&output, |sink| {
                let mut result = Ok(());
                visit_basis(&datum, &w, kind, cap, qmax, |m| {
                    if result.is_ok() {
                        let line = match output.format {
                            Format::Json => json::monomial_to_json(m),
                            Format::Text => format!("{}\t{}", format_rational(&m.total_energy()), m),
                        };
                        result = writeln!(sink, "{line}");
                    }
                });
                result
            })?;
            Ok(0)
        }
        Command::Verify { check, series, rank, k0, kj, qmax, seed, trials, output } => {
            let checks = select_checks(&check, series, rank, k0, kj, qmax, seed, trials)?;
            let mut reports = Vec::new();
            for c in &checks {
                reports.push(c.run()?);
            }
            let text: String = reports
                .iter()
                .map(|r| match output.format {
                    Format::Json => json::report_to_json(r) + "\n",
                    Format::Text => format!("{r}\n"),
                })
                .collect();
            emit(&output, &text)?;
            Ok(exit_code(&reports))
        }
    }
}

fn exit_code(reports: &[VerificationReport]) -> u8 {
    if reports.iter().any(|r| r.status == CheckStatus::Fail) {
        1
    } else if reports.iter().any(|r| r.status == CheckStatus::InsufficientPrecision) {
        3
    } else {
        0
    }
}

/// Builds the list of checks: the suite entries of the named check, narrowed
/// and overridden by whichever parameters were given.
#[allow(clippy::too_many_arguments)]
fn select_checks(
    name: &str,
    series: Option<RootSeries>,
    rank: Option<usize>,
    k0: Option<u32>,
    kj: Option<u32>,
    qmax: Option<Q>,
    seed: Option<u64>,
    trials: Option<usize>,
) -> Result<Vec<Check>, Failure> {
    let weight = match (k0, kj) {
        (None, None) => None,
        (a, b) => Some(RectangularWeight::new(a.unwrap_or(0), b.unwrap_or(0))?),
    };
    let custom = series.is_some() || rank.is_some();
    let s = series.unwrap_or(RootSeries::A);
    let l = rank.unwrap_or(2);
    let level_weights = |k: u32| -> Vec<RectangularWeight> {
        match weight {
            Some(w) => vec![w],
            None => RectangularWeight::all_of_level(k),
        }
    };
    let mut out = Vec::new();
    let series_list = if custom { vec![s] } else { vec![RootSeries::A, RootSeries::D] };
    match name {
        "all" => return Ok(default_suite()),
        "corollary" | "corollary-all-roots" | "verma" => {
            let q = qmax.unwrap_or(if name == "verma" { qi(4) } else { qi(5) });
            for series in series_list {
                out.push(match name {
                    "corollary" => Check::Corollary { series, rank: l, qmax: q },
                    "verma" => Check::Verma { series, rank: l, qmax: q },
                    _ => Check::CorollaryAllRoots { series, rank: l, qmax: q },
                });
            }
        }
        "psp" => {
            let q = qmax.unwrap_or(qi(4));
            let levels: Vec<u32> = if weight.is_some() { vec![0] } else { vec![1, 2] };
            for series in series_list {
                for &k in &levels {
                    for weight in level_weights(k) {
                        out.push(Check::Psp { series, rank: l, weight, qmax: q });
                    }
                }
            }
        }
        "para" => {
            let q = qmax.unwrap_or(qi(3));
            for series in series_list {
                for weight in level_weights(2) {
                    out.push(Check::Para { series, rank: l, weight, qmax: q });
                }
            }
        }
        "para-examples" => out.push(Check::ParaExamples { qmax: qmax.unwrap_or(qi(4)) }),
        "level-one" => out.push(Check::LevelOne { qmax: qmax.unwrap_or(qi(3)) }),
        "std-examples" => out.push(Check::StandardExamples { qmax: qmax.unwrap_or(qi(1)) }),
        "minsum" => out.push(Check::Minsum { seed: seed.unwrap_or(42), trials: trials.unwrap_or(500) }),
        other => return Err(Failure::Usage(format!("unknown check `{other}`"))),
    }
    Ok(out)
}

fn datum_text(d: &TwistedRootDatum) -> String {
    let row = |v: &[Q]| v.iter().map(format_rational).collect::<Vec<_>>().join(" ");
    let mut s = format!("series {} rank {} (finite rank {})\n", d.series, d.l, d.rk_g);
    s += "gram0:\n";
    for r in &d.gram0 {
        s += &format!("  {}\n", row(r));
    }
    s += &format!("mu = ({})\n", row(&d.mu).replace(' ', ", "));
    s += &format!("j_node = {}\n", d.j_node());
    s += &format!("gamma = ({})\n", row(&d.gamma_coords).replace(' ', ", "));
    s += "orbits (a ; halfnorm):\n";
    for o in d.orbit_projections() {
        let a: Vec<String> = o.a.iter().map(ToString::to_string).collect();
        s += &format!("  ({}) ; {}\n", a.join(", "), format_rational(&o.halfnorm));
    }
    s
}

fn series_text(series: &GradedSeries, meta: &SeriesMeta) -> String {
    let mut s = format!(
        "# {}{} {} k0={} kj={} qmax={} denominator={}\n",
        meta.series, meta.rank, meta.object, meta.k0, meta.kj, meta.qmax, meta.denominator
    );
    for (e, c) in series.iter() {
        let y: Vec<String> = e.y.iter().map(format_rational).collect();
        s += &format!("{}\t{}\t{}\n", format_rational(&e.q), y.join(" "), c);
    }
    s
}

fn emit(output: &OutputArgs, text: &str) -> io::Result<()> {
    with_sink(output, |sink| sink.write_all(text.as_bytes()))
}

/// Runs `f` against standard output, or against a temporary file that is
/// renamed over `--out` once `f` succeeds.
fn with_sink<F>(output: &OutputArgs, f: F) -> io::Result<()>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match &output.out {
        None => {
            let stdout = io::stdout();
            let mut lock = io::BufWriter::new(stdout.lock());
            f(&mut lock)?;
            lock.flush()
        }
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            {
                let mut w = io::BufWriter::new(tmp.as_file_mut());
                f(&mut w)?;
                w.flush()?;
            }
            tmp.persist(path).map_err(|e| e.error)?;
            Ok(())
        }
    }
}
