use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qring_cli::commands::convert::ConvertSpec;
use qring_cli::commands::levels::LevelsSpec;
use qring_cli::commands::sweep::{SweepSpec, Swept};
use qring_cli::commands::wavefunction::WavefunctionSpec;
use qring_cli::commands::{self, Report};
use qring_cli::config::FileConfig;
use qring_cli::output::{write_table, Format, DEFAULT_DIGITS, FULL_DIGITS};
use qring_cli::units::{Direction, MaterialParams, PhysicalConstants, Quantity};
use qring_cli::CliError;
use qring_core::RingParams;

/// Exit status when output was written but some levels or cells are missing
/// or out of tolerance.
const EXIT_INCOMPLETE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qring",
    version,
    about = "Energy levels of a quantum ring with spin-orbit coupling in a magnetic field"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lowest levels at a single parameter point.
    Levels {
        #[command(flatten)]
        point: PointArgs,
        /// Angular momenta, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0", allow_hyphen_values = true)]
        m: Vec<i32>,
        /// Number of levels per m.
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// One-dimensional parameter sweep in long format.
    Sweep {
        /// Swept parameter.
        #[arg(long, value_enum)]
        over: Swept,
        #[arg(long, allow_hyphen_values = true)]
        start: f64,
        #[arg(long)]
        stop: f64,
        #[arg(long)]
        step: f64,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_delimiter = ',', default_value = "0", allow_hyphen_values = true)]
        m: Vec<i32>,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Convert between dimensionless and physical units.
    Convert {
        #[arg(allow_hyphen_values = true)]
        value: f64,
        #[arg(long, value_enum)]
        quantity: Quantity,
        #[arg(long, value_enum, default_value = "to-physical")]
        direction: Direction,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Dump u(r) and u'(r) of one normalized level.
    Wavefunction {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m: i32,
        /// Radial index, 1 for the lowest level.
        #[arg(long, default_value_t = 1)]
        level: usize,
        /// Outer end of the grid; defaults to where the tail is negligible.
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        points: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Recompute the 24-cell reference table and compare.
    Table1 {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args, Clone, Copy)]
struct PointArgs {
    /// Well depth.
    #[arg(long, default_value_t = 400.0)]
    v: f64,
    /// Spin-orbit strength.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Magnetic field.
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    /// Inner radius relative to the outer one.
    #[arg(long, default_value_t = 0.5)]
    ri: f64,
}

impl PointArgs {
    fn params(&self, m: i32) -> Result<RingParams, CliError> {
        RingParams::new(m, self.v, self.a, self.b, self.ri).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Args, Clone)]
struct CommonArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Cross-check against the finite-difference solver and append deviation columns.
    #[arg(long)]
    oracle: bool,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, env = "QRING_THREADS")]
    threads: Option<usize>,
    /// Print 17 significant digits instead of 6.
    #[arg(long)]
    full_precision: bool,
    /// Physical constants: rounded or codata.
    #[arg(long)]
    constants: Option<String>,
    /// key = value file with mass_ratio, g_factor, rho_o, constants.
    #[arg(long)]
    config: Option<PathBuf>,
    /// M_eff / M_e.
    #[arg(long)]
    mass_ratio: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    g_factor: Option<f64>,
    /// Outer radius in nm.
    #[arg(long)]
    rho_o: Option<f64>,
}

struct Material {
    params: MaterialParams,
    constants: PhysicalConstants,
    /// True when a config file or material flag was given.
    supplied: bool,
}

impl CommonArgs {
    fn material(&self) -> Result<Material, CliError> {
        let file = match &self.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let flags = FileConfig {
            mass_ratio: self.mass_ratio,
            g_factor: self.g_factor,
            rho_o: self.rho_o,
            constants: self.constants.as_deref().map(str::parse).transpose()?,
        };
        let merged = file.overridden_by(&flags);
        Ok(Material {
            params: merged.material_over(MaterialParams::GAAS)?,
            constants: merged.constants.unwrap_or(PhysicalConstants::ROUNDED),
            supplied: self.config.is_some() || !flags.is_empty(),
        })
    }

    fn digits(&self) -> usize {
        if self.full_precision {
            FULL_DIGITS
        } else {
            DEFAULT_DIGITS
        }
    }
}

fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Levels { point, m, n, common } => {
            let mat = common.material()?;
            commands::levels::run(&LevelsSpec {
                params: point.params(0)?,
                m_list: m.clone(),
                n_levels: *n,
                zeeman_scale: mat.params.zeeman_scale(),
                physical: mat.supplied.then_some((mat.params, mat.constants)),
                oracle: common.oracle,
            })
        }
        Command::Sweep {
            over,
            start,
            stop,
            step,
            point,
            m,
            n,
            common,
        } => {
            let mat = common.material()?;
            commands::sweep::run(&SweepSpec {
                swept: *over,
                start: *start,
                stop: *stop,
                step: *step,
                fixed: RingParams {
                    m: 0,
                    v: point.v,
                    a: point.a,
                    b: point.b,
                    r_i: point.ri,
                },
                m_list: m.clone(),
                n_levels: *n,
                zeeman_scale: mat.params.zeeman_scale(),
                oracle: common.oracle,
            })
        }
        Command::Convert {
            value,
            quantity,
            direction,
            common,
        } => {
            let mat = common.material()?;
            commands::convert::run(&ConvertSpec {
                value: *value,
                direction: *direction,
                quantity: *quantity,
                material: mat.params,
                constants: mat.constants,
            })
        }
        Command::Wavefunction {
            point,
            m,
            level,
            r_max,
            points,
            common,
        } => commands::wavefunction::run(&WavefunctionSpec {
            params: point.params(*m)?,
            n: *level,
            r_max: *r_max,
            points: *points,
            oracle: common.oracle,
        }),
        Command::Table1 { common } => commands::table1::run(common.oracle),
    }
}

fn common(command: &Command) -> &CommonArgs {
    match command {
        Command::Levels { common, .. }
        | Command::Sweep { common, .. }
        | Command::Convert { common, .. }
        | Command::Wavefunction { common, .. }
        | Command::Table1 { common } => common,
    }
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let common = common(&cli.command);
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = common.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
    let report = pool.install(|| execute(&cli.command))?;

    let digits = common.digits();
    match &common.output {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            write_table(&report.table, common.format, digits, &mut out)?;
            out.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            write_table(&report.table, common.format, digits, &mut out)?;
            out.flush()?;
        }
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) if report.ok() => ExitCode::SUCCESS,
        Ok(report) => {
            for f in &report.failures {
                eprintln!("qring: {f}");
            }
            ExitCode::from(EXIT_INCOMPLETE)
        }
        Err(e) => {
            eprintln!("qring: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
