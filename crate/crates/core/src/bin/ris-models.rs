use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ris_models::linear::InPlanePoint;
use ris_models::mimo::{assemble_mimo, dft_grid};
use ris_models::reproduce::{reproduce, ReproduceOptions, FIGURES};
use ris_models::scenario::{
    ConfigSpec, GeometrySpec, GridSpec, IncidentSpec, ObservationSpec, OutputFormat, OutputSpec, PlanarGridSpec,
    RandomMode, Scenario, WaveSpec,
};
use ris_models::sweep::{configure, fmt_float, run_sweep};
use ris_models::{Error, Result};

/// Physical-optics scattering models for reconfigurable intelligent surfaces.
#[derive(Parser)]
#[command(name = "ris-models", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for random phase draws and Monte Carlo.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (or directory for `reproduce`); stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Monte Carlo trial count.
    #[arg(long, global = true)]
    trials: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Bistatic RCS of one rectangular patch along a principal-plane cut.
    PatchRcs {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[command(flatten)]
        inc: SphericalIncidence,
        #[command(flatten)]
        cut: Cut,
    },
    /// Scattered field of a rectangular planar array.
    ArrayField {
        #[arg(long)]
        nx: usize,
        #[arg(long)]
        ny: usize,
        #[arg(long)]
        dx: f64,
        #[arg(long)]
        dy: f64,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[command(flatten)]
        inc: SphericalIncidence,
        #[command(flatten)]
        cut: Cut,
    },
    /// In-plane field of a linear RIS.
    LinearField {
        #[command(flatten)]
        ris: LinearArgs,
        #[command(flatten)]
        grid: Grid,
    },
    /// Emit the factored matrix model of a linear RIS as JSON.
    Mimo {
        #[command(flatten)]
        ris: LinearArgs,
        /// Observe on the regular sine grid with this many points.
        #[arg(long, conflicts_with_all = ["start", "stop", "count"])]
        dft: Option<usize>,
        #[command(flatten)]
        grid: Grid,
    },
    /// Emit the cell weights a scenario's configuration scheme produces.
    Configure { scenario: PathBuf },
    /// Evaluate a scenario file over its observation grid.
    Sweep { scenario: PathBuf },
    /// Regenerate a figure's data and manifest (`all` for every figure).
    Reproduce { figure: String },
}

#[derive(Args)]
struct SphericalIncidence {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    theta_i: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phi_i: f64,
    #[arg(long, default_value_t = 1.0)]
    wavelength: f64,
}

#[derive(Args)]
struct Cut {
    /// Cut plane; negative theta lies at phi + 180°.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phi_s: f64,
    #[command(flatten)]
    grid: Grid,
}

#[derive(Args)]
struct Grid {
    #[arg(long, default_value_t = -90.0, allow_hyphen_values = true)]
    start: f64,
    #[arg(long, default_value_t = 90.0, allow_hyphen_values = true)]
    stop: f64,
    #[arg(long, default_value_t = 181)]
    count: usize,
    /// Observation radius in wavelengths.
    #[arg(long)]
    radius: Option<f64>,
}

#[derive(Args)]
struct LinearArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    spacing: f64,
    #[arg(long, default_value_t = 0.01)]
    area: f64,
    #[arg(long, default_value_t = 0.0)]
    b: f64,
    /// Incident angle in degrees; repeat for several waves.
    #[arg(long = "theta-i", required = true, allow_hyphen_values = true)]
    theta_i: Vec<f64>,
    /// Amplitude per incident wave (default 1 each).
    #[arg(long)]
    amplitude: Vec<f64>,
    /// Phase-compensate from the first to the second angle, in degrees.
    #[arg(long, num_args = 2, value_names = ["THETA_I", "THETA_S"], allow_hyphen_values = true)]
    steer: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    wavelength: f64,
}

impl Grid {
    fn spec(&self) -> GridSpec {
        GridSpec {
            start_deg: self.start,
            stop_deg: self.stop,
            count: self.count,
        }
    }
}

fn base_scenario(
    wavelength: f64,
    geometry: GeometrySpec,
    incident: Vec<IncidentSpec>,
    observation: ObservationSpec,
) -> Scenario {
    Scenario {
        wave: WaveSpec {
            wavelength,
            ..Default::default()
        },
        geometry,
        incident,
        observation,
        config: ConfigSpec::None,
        output: OutputSpec::default(),
        base_dir: None,
        defaults_applied: Vec::new(),
    }
}

fn spherical_scenario(geometry: GeometrySpec, inc: &SphericalIncidence, cut: &Cut) -> Result<Scenario> {
    let scn = base_scenario(
        inc.wavelength,
        geometry,
        vec![IncidentSpec {
            theta_deg: inc.theta_i,
            phi_deg: Some(inc.phi_i),
            amplitude: 1.0,
        }],
        ObservationSpec {
            radius: Some(cut.grid.radius.unwrap_or(100.0) * inc.wavelength),
            phi_deg: Some(cut.phi_s),
            grid: Some(cut.grid.spec()),
            phi_grid: None,
            points: None,
        },
    );
    scn.validate()?;
    Ok(scn)
}

fn linear_scenario(args: &LinearArgs, seed: Option<u64>, grid: &Grid) -> Result<Scenario> {
    if !args.amplitude.is_empty() && args.amplitude.len() != args.theta_i.len() {
        return Err(Error::InvalidArgument(format!(
            "{} amplitudes for {} incident angles",
            args.amplitude.len(),
            args.theta_i.len()
        )));
    }
    let incident = args
        .theta_i
        .iter()
        .enumerate()
        .map(|(k, &t)| IncidentSpec {
            theta_deg: t,
            phi_deg: None,
            amplitude: args.amplitude.get(k).copied().unwrap_or(1.0),
        })
        .collect();
    let mut scn = base_scenario(
        args.wavelength,
        GeometrySpec::Linear {
            n: args.n,
            spacing: args.spacing,
            b: args.b,
            a: None,
            area: Some(args.area),
            phases_deg: None,
        },
        incident,
        ObservationSpec {
            radius: Some(grid.radius.unwrap_or(100.0) * args.wavelength),
            phi_deg: None,
            grid: Some(grid.spec()),
            phi_grid: None,
            points: None,
        },
    );
    scn.config = match (&args.steer, seed) {
        (Some(_), Some(_)) => return Err(Error::InvalidArgument("--steer and --seed are exclusive".into())),
        (Some(s), None) => ConfigSpec::Compensate {
            theta_i_deg: s[0],
            theta_s_deg: s[1],
        },
        (None, Some(seed)) => ConfigSpec::Random {
            seed,
            mode: RandomMode::Draw,
            trials: 1000,
        },
        (None, None) => ConfigSpec::None,
    };
    scn.validate()?;
    Ok(scn)
}

fn emit(out: Option<&PathBuf>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn apply_overrides(scn: &mut Scenario, seed: Option<u64>, trials: Option<u64>) {
    if let ConfigSpec::Random { seed: s, trials: t, .. } = &mut scn.config {
        if let Some(seed) = seed {
            *s = seed;
        }
        if let Some(trials) = trials {
            *t = trials;
        }
    }
}

fn weights_output(scn: &Scenario, format: OutputFormat) -> Result<Vec<u8>> {
    let cfg = configure(scn)?;
    match format {
        OutputFormat::Json => {
            let mut v = serde_json::to_vec_pretty(&cfg)?;
            v.push(b'\n');
            Ok(v)
        }
        OutputFormat::Csv => {
            let mut s = String::from("n,area,phase_deg,re,im\n");
            for (k, c) in cfg.ris.cells().iter().enumerate() {
                let w = c.weight();
                let row = [c.area, c.phase_shift().to_degrees(), w.re, w.im]
                    .map(fmt_float)
                    .join(",");
                s.push_str(&format!("{k},{row}\n"));
            }
            Ok(s.into_bytes())
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let format = cli.format;
    let out = cli.out.as_ref();
    let sweep_out = |scn: &Scenario| -> Result<()> {
        let res = run_sweep(scn)?;
        let fmt = format.unwrap_or(scn.output.format);
        let target = out
            .cloned()
            .or_else(|| scn.output.path.as_ref().map(|p| scn.resolve_path(p)));
        emit(target.as_ref(), &res.render(fmt)?)
    };
    match &cli.command {
        Command::PatchRcs { a, b, inc, cut } => {
            let geometry = GeometrySpec::Patch {
                a: *a,
                b: *b,
                area: None,
            };
            sweep_out(&spherical_scenario(geometry, inc, cut)?)?;
        }
        Command::ArrayField {
            nx,
            ny,
            dx,
            dy,
            a,
            b,
            inc,
            cut,
        } => {
            let geometry = GeometrySpec::Planar {
                grid: Some(PlanarGridSpec {
                    nx: *nx,
                    ny: *ny,
                    dx: *dx,
                    dy: *dy,
                    a: *a,
                    b: *b,
                    area: None,
                }),
                cells: None,
            };
            sweep_out(&spherical_scenario(geometry, inc, cut)?)?;
        }
        Command::LinearField { ris, grid } => {
            sweep_out(&linear_scenario(ris, cli.seed, grid)?)?;
        }
        Command::Mimo { ris, dft, grid } => {
            let scn = linear_scenario(ris, cli.seed, grid)?;
            let array = configure(&scn)?.ris;
            let points: Vec<InPlanePoint> = match dft {
                Some(n) => {
                    let r = scn.radius();
                    dft_grid(*n).into_iter().map(|t| InPlanePoint::new(r, t)).collect()
                }
                None => scn.in_plane_points(),
            };
            let angles: Vec<f64> = ris.theta_i.iter().map(|t| t.to_radians()).collect();
            let sys = assemble_mimo(&array, &angles, &points)?;
            let mut text = sys.to_json()?.into_bytes();
            text.push(b'\n');
            emit(out, &text)?;
        }
        Command::Configure { scenario } => {
            let mut scn = Scenario::load(scenario)?;
            apply_overrides(&mut scn, cli.seed, cli.trials);
            emit(out, &weights_output(&scn, format.unwrap_or(scn.output.format))?)?;
        }
        Command::Sweep { scenario } => {
            let mut scn = Scenario::load(scenario)?;
            apply_overrides(&mut scn, cli.seed, cli.trials);
            if let (Some(_), ConfigSpec::Random { mode, .. }) = (cli.trials, &mut scn.config) {
                if *mode == RandomMode::Draw {
                    *mode = RandomMode::MonteCarlo;
                }
            }
            scn.validate()?;
            sweep_out(&scn)?;
        }
        Command::Reproduce { figure } => {
            let mut opts = ReproduceOptions {
                out_dir: out.cloned().unwrap_or_else(|| PathBuf::from(".")),
                seed: cli.seed,
                ..Default::default()
            };
            if let Some(t) = cli.trials {
                opts.trials = t;
            }
            let figures: Vec<&str> = if figure == "all" {
                FIGURES.to_vec()
            } else {
                vec![figure.as_str()]
            };
            let mut ok = true;
            for fig in figures {
                let manifest = reproduce(fig, &opts)?;
                for c in &manifest.checks {
                    eprintln!(
                        "{fig}: {} {}: observed {} (expected {}, tol {})",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.name,
                        c.observed,
                        c.expected,
                        c.tolerance
                    );
                }
                ok &= manifest.all_checks_passed;
            }
            return Ok(ok);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
