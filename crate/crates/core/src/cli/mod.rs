//! Command-line frontend: one subcommand per dataset, JSON configuration with
//! flag overrides, CSV/SVG outputs and a metadata sidecar for replay.

mod commands;
mod config;
mod csv;
mod svg;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use bandedge::noise::JunctionRates;
use bandedge::phonon::PhononFamily;
use bandedge::Error;

use commands::Bundle;
use config::*;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "bandedge", version, about = "Band-edge dispersion, decay and noise datasets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
    /// Also write SVG renderings.
    #[arg(long)]
    svg: bool,
}

#[derive(Args)]
struct WireFlags {
    /// Wire radius in c/ω_p.
    #[arg(long = "R")]
    radius: Option<f64>,
    #[arg(long)]
    eps_inf: Option<f64>,
    #[arg(long)]
    eps_o: Option<f64>,
    /// Drude relaxation time in 1/ω_p; omit for a lossless metal.
    #[arg(long)]
    tau: Option<f64>,
}

#[derive(Args)]
struct SweepFlags {
    #[arg(long)]
    k_min: Option<f64>,
    #[arg(long)]
    k_max: Option<f64>,
    /// Wavevector samples per branch.
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Args)]
struct OmegaFlags {
    #[arg(long, allow_negative_numbers = true)]
    omega_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    omega_max: Option<f64>,
    #[arg(long)]
    omega_points: Option<usize>,
}

#[derive(Args)]
struct RateFlags {
    #[arg(long = "gammaL", allow_negative_numbers = true)]
    gamma_l: Option<f64>,
    #[arg(long = "gammaR", allow_negative_numbers = true)]
    gamma_r: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Plasmon branches of the wire.
    Dispersion {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        wire: WireFlags,
        #[command(flatten)]
        sweep: SweepFlags,
        /// Angular orders, comma separated.
        #[arg(long, value_delimiter = ',')]
        modes: Option<Vec<u32>>,
    },
    /// Spontaneous-emission rate against emitter frequency.
    SeRate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        wire: WireFlags,
        #[command(flatten)]
        sweep: SweepFlags,
        #[arg(long, value_delimiter = ',')]
        modes: Option<Vec<u32>>,
        #[arg(long)]
        omega0_min: Option<f64>,
        #[arg(long)]
        omega0_max: Option<f64>,
        #[arg(long)]
        omega0_points: Option<usize>,
    },
    /// Exciton amplitude near a band edge.
    Decay {
        #[command(flatten)]
        common: Common,
        /// Detunings in β, comma separated; one trace each.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        deltas: Option<Vec<f64>>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        coupling: Option<f64>,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
    },
    /// Current-noise spectrum of the junction.
    Noise {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        rates: RateFlags,
        #[command(flatten)]
        omega: OmegaFlags,
        #[arg(long, allow_negative_numbers = true)]
        delta: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, value_enum)]
        backend: Option<BackendFlag>,
    },
    /// Noise spectrum over a detuning grid.
    NoiseMap {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        rates: RateFlags,
        #[command(flatten)]
        omega: OmegaFlags,
        #[arg(long, allow_negative_numbers = true)]
        delta_min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        delta_max: Option<f64>,
        #[arg(long)]
        delta_points: Option<usize>,
        #[arg(long, value_enum)]
        backend: Option<BackendFlag>,
    },
    /// Noise spectrum with a delayed second dot.
    Retard {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        rates: RateFlags,
        #[command(flatten)]
        omega: OmegaFlags,
        #[arg(long)]
        gamma0: Option<f64>,
        /// Sets the separation so that γ₀τ takes this value.
        #[arg(long)]
        gamma_tau: Option<f64>,
        /// Exciton frequency over γ₀, fixing the propagation phase.
        #[arg(long)]
        ratio: Option<f64>,
        /// Propagation phase; overrides the ratio.
        #[arg(long)]
        theta: Option<f64>,
    },
    /// Elastic modes of a free slab.
    Phonon {
        #[command(flatten)]
        common: Common,
        /// Longitudinal over transverse sound velocity.
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long)]
        width: Option<f64>,
        #[arg(long)]
        branches: Option<usize>,
        #[arg(long)]
        q_max: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, value_delimiter = ',', value_enum)]
        families: Option<Vec<FamilyFlag>>,
    },
    /// Rerun from a metadata sidecar.
    Replay {
        sidecar: PathBuf,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum BackendFlag {
    Quadratic,
    Numeric,
}

impl From<BackendFlag> for Backend {
    fn from(b: BackendFlag) -> Self {
        match b {
            BackendFlag::Quadratic => Backend::Quadratic,
            BackendFlag::Numeric => Backend::Numeric,
        }
    }
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum FamilyFlag {
    Dilatational,
    Flexural,
}

impl From<FamilyFlag> for PhononFamily {
    fn from(f: FamilyFlag) -> Self {
        match f {
            FamilyFlag::Dilatational => PhononFamily::Dilatational,
            FamilyFlag::Flexural => PhononFamily::Flexural,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Sidecar {
    command: String,
    resolved_config: serde_json::Value,
    version: String,
    wall_time: f64,
}

enum Failure {
    Config(String),
    Solver(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Config(_) => 2,
            Failure::Solver(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Solver(m) | Failure::Io(m) => m,
        }
    }
}

fn module_of(command: &str) -> &'static str {
    match command {
        "dispersion" => "plasmon_dispersion",
        "se-rate" => "emission",
        "decay" => "bandedge_dynamics",
        "noise" | "noise-map" => "transport_noise",
        "retard" => "retardation",
        "phonon" => "phonon_slab",
        _ => "cli",
    }
}

/// Solver failures exit with 3; anything else the library rejects is a
/// configuration problem.
fn classify(command: &str, e: Error) -> Failure {
    let debug = format!("{e:?}");
    let variant: String = debug.chars().take_while(|c| c.is_alphanumeric()).collect();
    let msg = format!("{}: {variant}: {e}", module_of(command));
    if e.is_solver_failure() {
        Failure::Solver(msg)
    } else {
        Failure::Config(msg)
    }
}

trait RunConfig: Serialize + DeserializeOwned + Default {
    fn validate(&self) -> bandedge::Result<()>;
    fn output(&mut self) -> &mut Output;
    /// May fill in derived values so the sidecar records them.
    fn run(&mut self) -> bandedge::Result<Bundle>;
}

macro_rules! run_config {
    ($ty:ty, $run:path) => {
        impl RunConfig for $ty {
            fn validate(&self) -> bandedge::Result<()> {
                <$ty>::validate(self)
            }
            fn output(&mut self) -> &mut Output {
                &mut self.output
            }
            fn run(&mut self) -> bandedge::Result<Bundle> {
                $run(self)
            }
        }
    };
}

run_config!(DispersionConfig, commands::dispersion);
run_config!(DecayConfig, commands::decay);
run_config!(NoiseConfig, commands::noise);
run_config!(NoiseMapConfig, commands::noise_map_run);
run_config!(RetardConfig, commands::retard);
run_config!(PhononConfig, commands::phonon);

impl RunConfig for SeRateConfig {
    fn validate(&self) -> bandedge::Result<()> {
        SeRateConfig::validate(self)
    }
    fn output(&mut self) -> &mut Output {
        &mut self.output
    }
    fn run(&mut self) -> bandedge::Result<Bundle> {
        let (bundle, grid) = commands::se_rate(self)?;
        self.omega0 = Some(grid);
        Ok(bundle)
    }
}

fn load<T: RunConfig>(path: Option<&Path>) -> Result<T, Failure> {
    let Some(path) = path else { return Ok(T::default()) };
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Config(format!("config {}: {e}", path.display())))
}

fn apply_common<T: RunConfig>(cfg: &mut T, common: &Common) {
    if let Some(dir) = &common.out {
        cfg.output().dir = dir.clone();
    }
    if common.svg {
        cfg.output().svg = true;
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn apply_wire(w: &mut Wire, f: &WireFlags) {
    set(&mut w.radius, f.radius);
    set(&mut w.drude.eps_inf, f.eps_inf);
    set(&mut w.outer.eps_o, f.eps_o);
    if f.tau.is_some() {
        w.drude.tau = f.tau;
    }
}

fn apply_sweep(s: &mut Sweep, f: &SweepFlags) {
    set(&mut s.k_min, f.k_min);
    set(&mut s.k_max, f.k_max);
    set(&mut s.points, f.points);
}

fn apply_omega(g: &mut Grid, f: &OmegaFlags) {
    set(&mut g.min, f.omega_min);
    set(&mut g.max, f.omega_max);
    set(&mut g.points, f.omega_points);
}

fn apply_rates(r: &mut JunctionRates, f: &RateFlags) {
    set(&mut r.gamma_l, f.gamma_l);
    set(&mut r.gamma_r, f.gamma_r);
}

fn execute<T: RunConfig>(command: &str, mut cfg: T) -> Result<(), Failure> {
    cfg.validate().map_err(|e| classify(command, e))?;
    let start = Instant::now();
    let bundle = cfg.run().map_err(|e| classify(command, e))?;
    let wall_time = start.elapsed().as_secs_f64();
    let resolved_config = serde_json::to_value(&cfg).map_err(|e| Failure::Config(format!("cannot record config: {e}")))?;
    let sidecar = Sidecar { command: command.into(), resolved_config, version: VERSION.into(), wall_time };
    let text = serde_json::to_string_pretty(&sidecar).map_err(|e| Failure::Config(format!("cannot record config: {e}")))? + "\n";

    let dir = PathBuf::from(&cfg.output().dir);
    let io = |p: &Path, e: std::io::Error| Failure::Io(format!("cannot write {}: {e}", p.display()));
    std::fs::create_dir_all(&dir).map_err(|e| io(&dir, e))?;
    let sidecar_name = format!("{command}.json");
    for (name, contents) in bundle.files.iter().chain(std::iter::once(&(sidecar_name, text))) {
        let path = dir.join(name);
        std::fs::write(&path, contents).map_err(|e| io(&path, e))?;
        println!("wrote {}", path.display());
    }
    for note in &bundle.notes {
        println!("{note}");
    }
    Ok(())
}

fn replay(path: &Path, out: Option<String>) -> Result<(), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let sidecar: Sidecar = serde_json::from_str(&text).map_err(|e| Failure::Config(format!("sidecar {}: {e}", path.display())))?;
    if sidecar.version != VERSION {
        eprintln!("warning: sidecar written by version {}, replaying with {VERSION}", sidecar.version);
    }
    fn typed<T: RunConfig>(command: &str, value: serde_json::Value, out: Option<String>) -> Result<(), Failure> {
        let mut cfg: T = serde_json::from_value(value).map_err(|e| Failure::Config(format!("resolved_config: {e}")))?;
        if let Some(dir) = out {
            cfg.output().dir = dir;
        }
        execute(command, cfg)
    }
    let (command, value) = (sidecar.command.as_str(), sidecar.resolved_config);
    match command {
        "dispersion" => typed::<DispersionConfig>(command, value, out),
        "se-rate" => typed::<SeRateConfig>(command, value, out),
        "decay" => typed::<DecayConfig>(command, value, out),
        "noise" => typed::<NoiseConfig>(command, value, out),
        "noise-map" => typed::<NoiseMapConfig>(command, value, out),
        "retard" => typed::<RetardConfig>(command, value, out),
        "phonon" => typed::<PhononConfig>(command, value, out),
        other => Err(Failure::Config(format!("sidecar names unknown command `{other}`"))),
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Dispersion { common, wire, sweep, modes } => {
            let mut cfg: DispersionConfig = load(common.config.as_deref())?;
            apply_common(&mut cfg, &common);
            apply_wire(&mut cfg.wire, &wire);
            apply_sweep(&mut cfg.sweep, &sweep);
            set(&mut cfg.modes, modes);
            execute("dispersion", cfg)
        }
        Command::SeRate { common, wire, sweep, modes, omega0_min, omega0_max, omega0_points } => {
            let mut cfg: SeRateConfig = load(common.config.as_deref())?;
            apply_common(&mut cfg, &common);
            apply_wire(&mut cfg.wire, &wire);
            apply_sweep(&mut cfg.sweep, &sweep);
            set(&mut cfg.modes, modes);
            match (omega0_min, omega0_max) {
                (Some(min), Some(max)) => {
                    let points = omega0_points.unwrap_or(cfg.omega0_points);
                    cfg.omega0 = Some(Grid { min, max, points });
                }
                (None, None) => {
                    if let Some(p) = omega0_points {
                        cfg.omega0_points = p;
                        if let Some(g) = &mut cfg.omega0 {
                            g.points = p;
                        }
                    }
                }
                _ => return Err(Failure::Config("--omega0-min and --omega0-max go together".into())),
            }
            execute("se-rate", cfg)
        }
        Command::Decay { common, deltas, gamma, coupling, t_max, dt } => {
            let mut cfg: DecayConfig = load(common.config.as_deref())?;
            apply_common(&mut cfg, &common);
            set(&mut cfg.deltas, deltas);
            set(&mut cfg.edge.gamma, gamma);
            set(&mut cfg.edge.coupling, coupling);
            set(&mut cfg.t_max, t_max);
            set(&mut cfg.dt, dt);
            execute("decay", cfg)
        }
        Command::Noise { common, rates, omega, delta, gamma, backend } => {
            let mut cfg: NoiseConfig = load(common.config.as_deref())?;
            apply_common(&mut cfg, &common);
            apply_rates(&mut cfg.rates, &rates);
            apply_omega(&mut cfg.omega, &omega);
            set(&mut cfg.delta, delta);
            set(&mut cfg.edge.gamma, gamma);
            set(&mut cfg.backend, backend.map(Backend::from));
            execute("noise", cfg)
        }
        Command::NoiseMap { common, rates, omega, delta_min, delta_max, delta_points, backend } => {
            let mut cfg: NoiseMapConfig = load(common.config.as_deref())?;
            apply_common(&mut cfg, &common);
            apply_rates(&mut cfg.rates, &rates);
            apply_omega(&mut cfg.omega, &omega);
            set(&mut cfg.delta.min, delta_min);
            set(&mut cfg.delta.max, delta_max);
            set(&mut cfg.delta.points, delta_points);
            set(&mut cfg.backend, backend.map(Backend::from));
            execute("noise-map", cfg)
        }
        Command::Retard { common, rates, omega, gamma0, gamma_tau, ratio, theta } => {
            let mut cfg: RetardConfig = load(common.config.as_deref())?;
            apply_common(&mut cfg, &common);
            apply_rates(&mut cfg.rates, &rates);
            apply_omega(&mut cfg.omega, &omega);
            let d = &mut cfg.dots;
            set(&mut d.gamma_0, gamma0);
            if let Some(product) = gamma_tau {
                d.r = product * d.v / d.gamma_0;
            }
            if ratio.is_some() {
                d.omega0_over_gamma0 = ratio;
                d.theta = None;
            }
            if theta.is_some() {
                d.theta = theta;
            }
            execute("retard", cfg)
        }
        Command::Phonon { common, kappa, width, branches, q_max, points, families } => {
            let mut cfg: PhononConfig = load(common.config.as_deref())?;
            apply_common(&mut cfg, &common);
            if let Some(k) = kappa {
                cfg.slab.c_l = k * cfg.slab.c_t;
            }
            set(&mut cfg.slab.w, width);
            set(&mut cfg.branches, branches);
            set(&mut cfg.range.q_max, q_max);
            set(&mut cfg.range.points, points);
            set(&mut cfg.families, families.map(|f| f.into_iter().map(PhononFamily::from).collect()));
            execute("phonon", cfg)
        }
        Command::Replay { sidecar, out } => replay(&sidecar, out),
    }
}

/// Parses arguments, runs the subcommand and returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    }
}
