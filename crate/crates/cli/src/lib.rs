//! Command-line front end: argument parsing, input loading and output
//! writing around the report builders in [`analysis`].

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use geosym::report::digest;
use geosym::{
    generate, parse_csv, write_report, write_signals_csv, AnalysisReport, ChannelTable, CsvOptions,
    Error, Format, GeneratorKind, GeneratorSpec, MeasureKind, MeasureOptions64, Product,
    ReportOutput, Result, SignConvention, SurrogateParams,
};

pub mod analysis;

use analysis::{NetworkSpec, Settings, SimulationSettings};

#[derive(Parser, Debug)]
#[command(
    name = "geosym",
    version,
    about = "Geometric symbolization of time series"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Symbol strings, peaks/troughs and configuration histograms
    Symbolize(AnalysisArgs),
    /// Transition matrices and block sums
    Transitions {
        #[command(flatten)]
        args: AnalysisArgs,
        /// Also emit one matrix per window
        #[arg(long)]
        windowed: bool,
    },
    /// Windowed measures
    Measure {
        #[command(flatten)]
        args: AnalysisArgs,
        /// Comma-separated measures (semantic_entropy, permutation_entropy,
        /// information_power, spectral_power, ep_ratio)
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "semantic_entropy,permutation_entropy,information_power,spectral_power,ep_ratio"
        )]
        measure: Vec<MeasureKind>,
    },
    /// Windowed entropy, power and their ratio with the minimum location
    Ratio(AnalysisArgs),
    /// Integrate an oscillator network and report phases, r(t) and S_i
    Simulate(SimulateArgs),
    /// Write a synthetic signal as CSV
    Generate(GenerateArgs),
}

#[derive(Args, Debug, Clone)]
pub struct MeasureFlags {
    /// Dead band for difference signs
    #[arg(long, default_value_t = 0.0)]
    pub tau: f64,
    /// Window length in seconds
    #[arg(long = "window-s", default_value_t = 2.0)]
    pub window_s: f64,
    /// Hop between window starts in seconds
    #[arg(long = "hop-s", default_value_t = 2.0)]
    pub hop_s: f64,
    /// Windows with less information power get an undefined ratio
    #[arg(long = "eps-power", default_value_t = geosym::measures::DEFAULT_EPS_POWER)]
    pub eps_power: f64,
    /// Difference product used for information power (left|right)
    #[arg(long, default_value = "left")]
    pub product: Product,
}

#[derive(Args, Debug, Clone)]
pub struct OutputFlags {
    /// Report format (json|csv)
    #[arg(long, default_value = "json")]
    pub format: Format,
    /// Output file (json) or directory (csv); standard output if omitted
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct AnalysisArgs {
    /// CSV file with one column per channel
    pub input: PathBuf,
    /// Sample rate in Hz, unless the file has a `# fs=` line
    #[arg(long)]
    pub fs: Option<f64>,
    /// Fail on malformed rows instead of skipping them
    #[arg(long)]
    pub strict: bool,
    #[command(flatten)]
    pub measures: MeasureFlags,
    #[command(flatten)]
    pub output: OutputFlags,
}

#[derive(Args, Debug, Clone)]
pub struct SimulateArgs {
    /// JSON network: explicit fields or {oscillators, coupling, seed, frequency_sigma}
    pub network: PathBuf,
    /// Integration step in seconds
    #[arg(long, default_value_t = geosym::kuramoto::DEFAULT_DT)]
    pub dt: f64,
    /// Simulated time in seconds
    #[arg(long, conflicts_with = "steps")]
    pub duration: Option<f64>,
    /// Number of integration steps (default 50 s worth)
    #[arg(long)]
    pub steps: Option<usize>,
    /// Coupling sign (standard|paper); overrides the network file
    #[arg(long)]
    pub convention: Option<SignConvention>,
    /// Seed for seeded networks; overrides the network file
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub measures: MeasureFlags,
    #[command(flatten)]
    pub output: OutputFlags,
}

#[derive(clap::ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
#[value(rename_all = "snake_case")]
pub enum KindArg {
    Constant,
    Ramp,
    Sine,
    Triangle,
    WhiteNoise,
    Ar1,
    SeizureSurrogate,
}

#[derive(Args, Debug, Clone)]
pub struct GenerateArgs {
    #[arg(long, value_enum, required_unless_present = "spec")]
    pub kind: Option<KindArg>,
    /// JSON generator spec instead of --kind and its parameters
    #[arg(long, conflicts_with = "kind")]
    pub spec: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of channels; channel k uses seed + k
    #[arg(long, default_value_t = 1)]
    pub channels: usize,
    #[arg(long, default_value_t = 256.0)]
    pub fs: f64,
    #[arg(long, conflicts_with = "samples")]
    pub duration: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub value: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub start: Option<f64>,
    /// Increment per sample
    #[arg(long, allow_negative_numbers = true)]
    pub slope: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub amplitude: Option<f64>,
    #[arg(long = "frequency-hz")]
    pub frequency_hz: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub phase: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub low: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub high: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub coefficient: Option<f64>,
    /// Output CSV file; standard output if omitted
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl MeasureFlags {
    fn settings(&self) -> Settings {
        Settings {
            options: MeasureOptions64 {
                tau: self.tau,
                eps_power: self.eps_power,
                product: self.product,
                ..Default::default()
            },
            window_s: self.window_s,
            hop_s: self.hop_s,
        }
    }
}

fn load_table(args: &AnalysisArgs) -> Result<(ChannelTable, String)> {
    let bytes = std::fs::read(&args.input)?;
    let text = String::from_utf8(bytes)
        .map_err(|_| Error::InvalidInput(format!("{} is not UTF-8", args.input.display())))?;
    let opts = CsvOptions {
        sample_rate: args.fs,
        strict: args.strict,
    };
    let table = parse_csv(&text, &args.input.display().to_string(), &opts)?;
    Ok((table, digest(text.as_bytes())))
}

fn emit_report(report: &AnalysisReport, flags: &OutputFlags, out: &mut dyn Write) -> Result<()> {
    match write_report(report, flags.format)? {
        ReportOutput::Json(bytes) => match &flags.output {
            Some(path) => std::fs::write(path, bytes)?,
            None => out.write_all(&bytes)?,
        },
        ReportOutput::Csv(files) => match &flags.output {
            Some(dir) => {
                std::fs::create_dir_all(dir)?;
                for (name, bytes) in files {
                    std::fs::write(dir.join(name), bytes)?;
                }
            }
            None => {
                for (name, bytes) in files {
                    writeln!(out, "# file: {name}")?;
                    out.write_all(&bytes)?;
                }
            }
        },
    }
    Ok(())
}

fn require(name: &str, v: Option<f64>) -> Result<f64> {
    v.ok_or_else(|| Error::Usage(format!("--kind needs --{name}")))
}

fn generator_spec(args: &GenerateArgs, kind: KindArg) -> Result<GeneratorSpec> {
    let kind = match kind {
        KindArg::Constant => GeneratorKind::Constant {
            value: args.value.unwrap_or(0.0),
        },
        KindArg::Ramp => GeneratorKind::Ramp {
            start: args.start.unwrap_or(0.0),
            slope: args.slope.unwrap_or(1.0),
        },
        KindArg::Sine => GeneratorKind::Sine {
            amplitude: args.amplitude.unwrap_or(1.0),
            frequency_hz: require("frequency-hz", args.frequency_hz)?,
            phase: args.phase.unwrap_or(0.0),
        },
        KindArg::Triangle => GeneratorKind::Triangle {
            low: args.low.unwrap_or(0.0),
            high: args.high.unwrap_or(1.0),
        },
        KindArg::WhiteNoise => GeneratorKind::WhiteNoise {
            sigma: args.sigma.unwrap_or(1.0),
        },
        KindArg::Ar1 => GeneratorKind::Ar1 {
            coefficient: require("coefficient", args.coefficient)?,
            sigma: args.sigma.unwrap_or(1.0),
        },
        KindArg::SeizureSurrogate => {
            let d = SurrogateParams::default();
            GeneratorKind::SeizureSurrogate(SurrogateParams {
                noise_sigma: args.sigma.unwrap_or(d.noise_sigma),
                ar_coefficient: args.coefficient.unwrap_or(d.ar_coefficient),
                amplitude: args.amplitude.unwrap_or(d.amplitude),
                frequency_hz: args.frequency_hz.unwrap_or(d.frequency_hz),
                ..d
            })
        }
    };
    let default_duration = if kind_is_surrogate(&kind) { 20.0 } else { 10.0 };
    Ok(match args.samples {
        Some(n) => GeneratorSpec::new(kind, args.fs, n),
        None => {
            GeneratorSpec::with_duration(kind, args.fs, args.duration.unwrap_or(default_duration))
        }
    }
    .seed(args.seed))
}

fn kind_is_surrogate(kind: &GeneratorKind) -> bool {
    matches!(kind, GeneratorKind::SeizureSurrogate(_))
}

fn run_generate(args: &GenerateArgs, out: &mut dyn Write) -> Result<()> {
    let spec = match (&args.spec, args.kind) {
        (Some(path), _) => GeneratorSpec::from_json(&std::fs::read_to_string(path)?)?,
        (None, Some(kind)) => generator_spec(args, kind)?,
        (None, None) => return Err(Error::Usage("either --kind or --spec is required".into())),
    };
    if args.channels == 0 {
        return Err(Error::Usage("--channels must be at least 1".into()));
    }
    let signals = (0..args.channels as u64)
        .map(|k| {
            let s = generate(&spec.seed(spec.seed.wrapping_add(k)))?;
            Ok(if args.channels == 1 {
                s
            } else {
                let label = format!("{}_{k}", s.label());
                s.with_label(label)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let bytes = write_signals_csv(&signals)?;
    match &args.output {
        Some(path) => std::fs::write(path, bytes)?,
        None => out.write_all(&bytes)?,
    }
    Ok(())
}

fn run_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let text = std::fs::read_to_string(&args.network)?;
    let spec = NetworkSpec::from_json(&text)?;
    let steps = match (args.steps, args.duration) {
        (Some(n), _) => n,
        (None, Some(d)) => (d / args.dt).round() as usize,
        (None, None) => (50.0 / args.dt).round() as usize,
    };
    let sim = SimulationSettings {
        dt: args.dt,
        steps,
        seed: args.seed,
        convention: args.convention,
    };
    let report = analysis::simulate_report(
        &spec,
        Some(digest(text.as_bytes())),
        &args.measures.settings(),
        &sim,
    )?;
    emit_report(&report, &args.output, out)
}

fn dispatch(command: &Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Symbolize(a) => {
            let (table, d) = load_table(a)?;
            let report = analysis::symbolize_report(&table, Some(d), &a.measures.settings())?;
            emit_report(&report, &a.output, out)
        }
        Command::Transitions { args: a, windowed } => {
            let (table, d) = load_table(a)?;
            let report =
                analysis::transitions_report(&table, Some(d), &a.measures.settings(), *windowed)?;
            emit_report(&report, &a.output, out)
        }
        Command::Measure { args: a, measure } => {
            let (table, d) = load_table(a)?;
            let report =
                analysis::measure_report(&table, Some(d), &a.measures.settings(), measure)?;
            emit_report(&report, &a.output, out)
        }
        Command::Ratio(a) => {
            let (table, d) = load_table(a)?;
            let report = analysis::ratio_report(&table, Some(d), &a.measures.settings())?;
            emit_report(&report, &a.output, out)
        }
        Command::Simulate(a) => run_simulate(a, out),
        Command::Generate(a) => run_generate(a, out),
    }
}

/// Runs one command line. Returns 0 on success, 1 on data errors and 2 on
/// usage errors; diagnostics go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                2
            } else {
                // --help and --version
                let _ = write!(out, "{e}");
                0
            };
            return code;
        }
    };
    match dispatch(&cli.command, out).and_then(|()| Ok(out.flush()?)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    }
}

/// Convenience for tests: run and capture both streams.
pub fn run_captured<I, T>(args: I) -> (i32, Vec<u8>, Vec<u8>)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(args, &mut out, &mut err);
    (code, out, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn version_goes_to_stdout() {
        let (code, out, err) = run_captured(["geosym", "--version"]);
        assert_eq!(code, 0);
        assert!(String::from_utf8(out).unwrap().starts_with("geosym "));
        assert!(err.is_empty());
    }

    #[test]
    fn generator_defaults() {
        let cli =
            Cli::try_parse_from(["geosym", "generate", "--kind", "seizure_surrogate"]).unwrap();
        let Command::Generate(args) = cli.command else {
            panic!()
        };
        let spec = generator_spec(&args, args.kind.unwrap()).unwrap();
        assert_eq!(spec, GeneratorSpec::seizure_surrogate(0));
    }
}
