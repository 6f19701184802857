use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use spreadlab::suites::{self, parse_window, ModelKind, RunConfig, RunReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

/// Run distributional-symmetry check suites against a model.
#[derive(Debug, Parser)]
#[command(name = "spreadlab", version)]
struct Cli {
    /// monoid, monotone, qdeformed, boolean or car
    model: Option<String>,

    #[arg(long = "model", conflicts_with = "model")]
    model_flag: Option<String>,

    /// Suite to run; repeat for several. Default: all suites of the model.
    #[arg(long = "suite", visible_alias = "check")]
    suites: Vec<String>,

    /// Index window `lo..hi` (inclusive)
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,

    #[arg(long)]
    depth: Option<usize>,

    /// Deformation parameter in (-1, 1)
    #[arg(long, allow_hyphen_values = true)]
    q: Option<f64>,

    #[arg(long)]
    tol: Option<f64>,

    /// Number of random samples for sampled suites
    #[arg(long)]
    samples: Option<usize>,

    #[arg(long)]
    seed: Option<u64>,

    #[arg(long, value_enum)]
    format: Option<Format>,

    /// Directory for the report file
    #[arg(long)]
    out: Option<PathBuf>,

    /// Key = value settings file; command-line flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,

    /// Evaluate samples within a suite in parallel
    #[arg(long)]
    parallel: bool,

    /// Two-point function constant (car)
    #[arg(long = "C")]
    c: Option<f64>,

    /// Two-point function diagonal (car)
    #[arg(long)]
    diag: Option<f64>,
}

struct Settings {
    config: RunConfig,
    format: Format,
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = match resolve(cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("spreadlab: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match suites::run(&settings.config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("spreadlab: {e}");
            return ExitCode::from(2);
        }
    };
    let rendered = render(&report, settings.format);
    print!("{rendered}");
    if let Some(dir) = &settings.out {
        if let Err(e) = write_report(dir, &report, settings.format, &rendered) {
            eprintln!("spreadlab: cannot write report: {e}");
            return ExitCode::from(2);
        }
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn render(report: &RunReport, format: Format) -> String {
    match format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
        Format::Csv => report.to_csv(),
    }
}

fn write_report(dir: &Path, report: &RunReport, format: Format, rendered: &str) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let ext = match format {
        Format::Json => "json",
        Format::Text => "txt",
        Format::Csv => "csv",
    };
    fs::write(dir.join(format!("{}-report.{ext}", report.model)), rendered)
}

fn resolve(cli: Cli) -> Result<Settings, String> {
    let file = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            text.parse::<toml::Table>().map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => toml::Table::new(),
    };
    let model = cli
        .model
        .or(cli.model_flag)
        .or_else(|| file_str(&file, "model"))
        .ok_or("no model given; expected one of monoid, monotone, qdeformed, boolean, car")?;
    let model: ModelKind = model.parse().map_err(|e: spreadlab::Error| e.to_string())?;

    let mut config = RunConfig::new(model);
    apply_file(&mut config, &file)?;

    if !cli.suites.is_empty() {
        config.suites = cli.suites;
    }
    if let Some(w) = cli.window {
        config.window = Some(parse_window(&w).map_err(|e| e.to_string())?);
    }
    config.depth = cli.depth.or(config.depth);
    config.q = cli.q.or(config.q);
    config.tol = cli.tol.unwrap_or(config.tol);
    config.samples = cli.samples.or(config.samples);
    config.seed = cli.seed.unwrap_or(config.seed);
    config.parallel |= cli.parallel;
    config.c = cli.c.unwrap_or(config.c);
    config.diag = cli.diag.unwrap_or(config.diag);
    config.validate().map_err(|e| e.to_string())?;

    let format = match cli.format {
        Some(f) => f,
        None => match file_str(&file, "format") {
            Some(s) => Format::from_str(&s, true)?,
            None => Format::Json,
        },
    };
    let out = cli.out.or_else(|| file_str(&file, "out").map(PathBuf::from));
    Ok(Settings { config, format, out })
}

fn file_str(file: &toml::Table, key: &str) -> Option<String> {
    file.get(key).and_then(|v| v.as_str()).map(str::to_owned)
}

fn apply_file(config: &mut RunConfig, file: &toml::Table) -> Result<(), String> {
    for (key, value) in file {
        let bad = || format!("config key `{key}` has an invalid value `{value}`");
        match key.as_str() {
            "model" | "format" | "out" => {}
            "suite" | "suites" | "check" => {
                config.suites = match value {
                    toml::Value::String(s) => vec![s.clone()],
                    toml::Value::Array(items) => {
                        items.iter().map(|v| v.as_str().map(str::to_owned).ok_or_else(bad)).collect::<Result<_, _>>()?
                    }
                    _ => return Err(bad()),
                }
            }
            "window" => config.window = Some(parse_window(value.as_str().ok_or_else(bad)?).map_err(|e| e.to_string())?),
            "depth" => config.depth = Some(usize::try_from(value.as_integer().ok_or_else(bad)?).map_err(|_| bad())?),
            "q" => config.q = Some(as_float(value).ok_or_else(bad)?),
            "tol" => config.tol = as_float(value).ok_or_else(bad)?,
            "samples" => config.samples = Some(usize::try_from(value.as_integer().ok_or_else(bad)?).map_err(|_| bad())?),
            "seed" => config.seed = u64::try_from(value.as_integer().ok_or_else(bad)?).map_err(|_| bad())?,
            "parallel" => config.parallel = value.as_bool().ok_or_else(bad)?,
            "C" | "c" => config.c = as_float(value).ok_or_else(bad)?,
            "diag" => config.diag = as_float(value).ok_or_else(bad)?,
            _ => return Err(format!("unknown config key `{key}`")),
        }
    }
    Ok(())
}

fn as_float(v: &toml::Value) -> Option<f64> {
    v.as_float().or_else(|| v.as_integer().map(|i| i as f64))
}
