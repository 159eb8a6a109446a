use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use xyquench::ensemble::{energy_density, Occupancy};
use xyquench::entanglement::{mu_min_1, mu_min_2, partial_transpose};
use xyquench::oracle::{finite_chain_correlators, midpoint_thermalization_temperature, symmetric_eigenvalues, FiniteChainSpec};
use xyquench::output::{correlators_record, scan_svg, thermalization_record, witness_record, write_scan_csv, Record};
use xyquench::{
    analyze_with_threshold, nn_correlators, reduced_density_matrix, run_scan, thermalization_temperature, AxisRange,
    CorrelatorSet, Error, ModeWeight, ModelParams, QuadratureSpec, QuenchSpec, ScanConfig,
    DEFAULT_DETECTION_THRESHOLD,
};

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "xyquench", version, about = "GGE vs. thermal entanglement after quenches in the XY chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Nearest-neighbor correlators of one state.
    Correlators(PointArgs),
    /// Partial-transpose minima, negativity and detecting witness.
    Witness(WitnessArgs),
    /// Thermalization temperature of a quench.
    Tth(TthArgs),
    /// Scan of the (h0, h) plane.
    Scan(ScanArgs),
    /// Cross-check the production path against the independent references.
    OracleCheck(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct QuadArgs {
    /// Relative quadrature tolerance.
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Absolute quadrature tolerance.
    #[arg(long)]
    abs_tol: Option<f64>,
    /// Maximum number of step halvings.
    #[arg(long)]
    max_refinements: Option<usize>,
}

impl QuadArgs {
    fn apply(&self, mut spec: QuadratureSpec) -> QuadratureSpec {
        if let Some(v) = self.rel_tol {
            spec.rel_tol = v;
        }
        if let Some(v) = self.abs_tol {
            spec.abs_tol = v;
        }
        if let Some(v) = self.max_refinements {
            spec.max_refinements = v;
        }
        spec
    }

    fn spec(&self) -> QuadratureSpec {
        self.apply(QuadratureSpec::default())
    }
}

#[derive(Args)]
#[group(id = "ensemble", multiple = false)]
struct EnsembleArgs {
    /// Ground state.
    #[arg(long)]
    ground: bool,
    /// Gibbs state at this temperature.
    #[arg(long, value_name = "T", allow_hyphen_values = true)]
    temperature: Option<f64>,
    /// GGE after a quench from (GAMMA0, H0).
    #[arg(long, num_args = 2, value_names = ["GAMMA0", "H0"], allow_hyphen_values = true)]
    quench: Option<Vec<f64>>,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long, allow_hyphen_values = true)]
    gamma: f64,
    #[arg(long, allow_hyphen_values = true)]
    h: f64,
    #[command(flatten)]
    ensemble: EnsembleArgs,
    #[command(flatten)]
    quad: QuadArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long, allow_hyphen_values = true, required_unless_present = "from_correlators")]
    gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "from_correlators")]
    h: Option<f64>,
    #[command(flatten)]
    ensemble: EnsembleArgs,
    /// Analyze a synthetic state given as 'sxsx,sysy,szsz,sz'.
    #[arg(long, value_name = "SXSX,SYSY,SZSZ,SZ", allow_hyphen_values = true, conflicts_with_all = ["gamma", "h", "ensemble"])]
    from_correlators: Option<String>,
    /// Values of mu below this count as detection.
    #[arg(long, default_value_t = DEFAULT_DETECTION_THRESHOLD, allow_hyphen_values = true)]
    threshold: f64,
    #[command(flatten)]
    quad: QuadArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct TthArgs {
    #[arg(long, allow_hyphen_values = true)]
    gamma: f64,
    #[arg(long, allow_hyphen_values = true)]
    h: f64,
    #[arg(long, allow_hyphen_values = true)]
    gamma0: f64,
    #[arg(long, allow_hyphen_values = true)]
    h0: f64,
    #[command(flatten)]
    quad: QuadArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn parse_range(s: &str) -> Result<AxisRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(format!("expected lo:hi:n, got '{s}'"));
    };
    let lo: f64 = lo.parse().map_err(|e| format!("lo: {e}"))?;
    let hi: f64 = hi.parse().map_err(|e| format!("hi: {e}"))?;
    let n: usize = n.parse().map_err(|e| format!("n: {e}"))?;
    AxisRange::new(lo, hi, n).map_err(|e| e.to_string())
}

#[derive(Args)]
struct ScanArgs {
    /// TOML file with the scan configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma0: Option<f64>,
    #[arg(long, value_name = "LO:HI:N", value_parser = parse_range, allow_hyphen_values = true)]
    h0_range: Option<AxisRange>,
    #[arg(long, value_name = "LO:HI:N", value_parser = parse_range, allow_hyphen_values = true)]
    h_range: Option<AxisRange>,
    #[arg(long, allow_hyphen_values = true)]
    threshold: Option<f64>,
    #[command(flatten)]
    quad: QuadArgs,
    /// CSV destination; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also render both region maps as SVG.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, env = "QW_THREADS")]
    threads: Option<usize>,
    /// No progress counter on standard error.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct OracleArgs {
    /// Chain length for the finite-size comparison.
    #[arg(long, default_value_t = 2048)]
    sites: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

enum Failure {
    Usage(String),
    Numerical(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::ParamsMismatch { .. } => Failure::Usage(e.to_string()),
            e => Failure::Numerical(e),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn emit(record: &Record, format: Format) {
    match format {
        Format::Json => println!("{}", record.to_json()),
        Format::Csv => print!("{}", record.to_csv()),
    }
}

fn weight(params: &ModelParams, e: &EnsembleArgs) -> Result<ModeWeight, Failure> {
    if e.ground {
        return Ok(ModeWeight::GroundState);
    }
    if let Some(t) = e.temperature {
        return Ok(ModeWeight::thermal(t)?);
    }
    if let Some(q) = &e.quench {
        let pre = ModelParams::new(q[0], q[1])?;
        return Ok(ModeWeight::Gge(QuenchSpec::new(pre, *params)));
    }
    Err(Failure::Usage("one of --ground, --temperature or --quench is required".into()))
}

fn point_correlators(gamma: f64, h: f64, e: &EnsembleArgs, quad: &QuadArgs) -> Result<CorrelatorSet, Failure> {
    let params = ModelParams::new(gamma, h)?;
    let spec = quad.spec();
    spec.validate()?;
    let w = weight(&params, e)?;
    Ok(nn_correlators(&params, &w, &spec)?)
}

fn cmd_correlators(a: PointArgs) -> CmdResult {
    let c = point_correlators(a.gamma, a.h, &a.ensemble, &a.quad)?;
    emit(&correlators_record(&c), a.format);
    Ok(())
}

fn parse_correlators(s: &str) -> Result<CorrelatorSet, Failure> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Usage(format!("--from-correlators: {e}")))?;
    let [sxsx, sysy, szsz, sz] = v[..] else {
        return Err(Failure::Usage(format!("--from-correlators needs 4 values, got {}", v.len())));
    };
    Ok(CorrelatorSet::from_spin_correlations(sxsx, sysy, szsz, sz))
}

fn cmd_witness(a: WitnessArgs) -> CmdResult {
    let c = match (&a.from_correlators, a.gamma, a.h) {
        (Some(s), _, _) => parse_correlators(s)?,
        (None, Some(g), Some(h)) => point_correlators(g, h, &a.ensemble, &a.quad)?,
        _ => return Err(Failure::Usage("--gamma and --h are required".into())),
    };
    let r = analyze_with_threshold(&c, a.threshold)?;
    emit(&witness_record(&r), a.format);
    Ok(())
}

fn cmd_tth(a: TthArgs) -> CmdResult {
    let q = QuenchSpec::new(ModelParams::new(a.gamma0, a.h0)?, ModelParams::new(a.gamma, a.h)?);
    let spec = a.quad.spec();
    spec.validate()?;
    let th = thermalization_temperature(&q, &spec)?;
    let signed = energy_density(&q.post, &Occupancy::SignedQuench(q), &spec)?;
    emit(&thermalization_record(&th, signed), a.format);
    Ok(())
}

fn scan_config(a: &ScanArgs) -> Result<ScanConfig, Failure> {
    let mut c = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            let mut c: ScanConfig = toml::from_str(&text).map_err(|e| Failure::Usage(format!("config: {e}")))?;
            if let Some(g) = a.gamma {
                c.gamma = g;
            }
            c
        }
        None => ScanConfig::new(a.gamma.ok_or_else(|| Failure::Usage("--gamma or --config is required".into()))?),
    };
    if a.gamma0.is_some() {
        c.gamma0 = a.gamma0;
    }
    if let Some(r) = a.h0_range {
        c.h0_range = r;
    }
    if let Some(r) = a.h_range {
        c.h_range = r;
    }
    if let Some(t) = a.threshold {
        c.detection_threshold = t;
    }
    c.quadrature = a.quad.apply(c.quadrature);
    c.validate()?;
    Ok(c)
}

fn io_failure(path: &std::path::Path, e: io::Error) -> Failure {
    Failure::Usage(format!("cannot write {}: {e}", path.display()))
}

fn cmd_scan(a: ScanArgs) -> CmdResult {
    let config = scan_config(&a)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = a.threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be positive".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| Failure::Usage(format!("thread pool: {e}")))?;
    let cols = config.h_range.n;
    let rows = config.h0_range.n;
    let quiet = a.quiet;
    let scan = pool.install(|| {
        run_scan(&config, |done, _| {
            if !quiet && done % cols == 0 {
                eprint!("\rrows {}/{rows}", done / cols);
            }
        })
    })?;
    if !quiet {
        eprintln!();
    }
    match &a.out {
        Some(path) => {
            let f = File::create(path).map_err(|e| io_failure(path, e))?;
            write_scan_csv(BufWriter::new(f), &scan)?;
        }
        None => write_scan_csv(io::stdout().lock(), &scan)?,
    }
    if let Some(path) = &a.svg {
        std::fs::write(path, scan_svg(&scan)).map_err(|e| io_failure(path, e))?;
    }
    let failed = scan.failures();
    if failed > 0 {
        eprintln!("{failed} of {} cells failed; see the status column", scan.cells.len());
    }
    Ok(())
}

fn cmd_oracle_check(a: OracleArgs) -> CmdResult {
    let chain = FiniteChainSpec::new(a.sites)?;
    let spec = QuadratureSpec::default();
    let mp = |g, h| ModelParams::new(g, h);
    let points = [mp(1.0, 0.0)?, mp(0.5, 0.5)?, mp(0.3, 1.4)?, mp(0.8, 0.2)?];
    let quenches = [
        QuenchSpec::new(mp(1.0, 0.0)?, mp(1.0, 2.0)?),
        QuenchSpec::new(mp(0.5, 0.3)?, mp(0.5, 1.6)?),
        QuenchSpec::new(mp(0.9, 1.5)?, mp(0.4, 0.6)?),
    ];
    let mut chain_dev: f64 = 0.0;
    let mut pt_dev: f64 = 0.0;
    let mut states = Vec::new();
    for p in &points {
        for w in [ModeWeight::GroundState, ModeWeight::thermal(0.7)?] {
            states.push((*p, w));
        }
    }
    for q in &quenches {
        states.push((q.post, ModeWeight::Gge(*q)));
    }
    for (p, w) in &states {
        let c = nn_correlators(p, w, &spec)?;
        let f = finite_chain_correlators(p, w, chain)?;
        chain_dev = chain_dev.max(c.max_abs_diff(&f));
        let ev = symmetric_eigenvalues(&partial_transpose(&reduced_density_matrix(&c)))?;
        pt_dev = pt_dev.max((ev[0] - mu_min_1(&c).min(mu_min_2(&c))).abs());
    }
    let mut tth_dev: f64 = 0.0;
    for q in &quenches {
        let t = thermalization_temperature(q, &spec)?.temperature.value();
        let m = midpoint_thermalization_temperature(q, 200_000);
        tth_dev = tth_dev.max(((t - m) / m).abs());
    }
    let record = Record::default()
        .real("sites", a.sites as f64)
        .real("max_finite_chain_deviation", chain_dev)
        .real("max_eigenvalue_deviation", pt_dev)
        .real("max_tth_relative_deviation", tth_dev);
    emit(&record, a.format);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.command {
        Command::Correlators(a) => cmd_correlators(a),
        Command::Witness(a) => cmd_witness(a),
        Command::Tth(a) => cmd_tth(a),
        Command::Scan(a) => cmd_scan(a),
        Command::OracleCheck(a) => cmd_oracle_check(a),
    };
    let _ = io::stdout().flush();
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_NUMERICAL)
        }
    }
}
