use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hfcav::app::{self, GreenPoint};
use hfcav::config::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "hfcav", version, about = "Thermal shifts and widths of H/D/T hyperfine lines between metallic mirrors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// key = value file, applied before the flags
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// any config key, e.g. --set material.Au.omega_p_ev=8.9 (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    isotope: Option<String>,
    /// upper state label F,M
    #[arg(long)]
    upper: Option<String>,
    #[arg(long)]
    lower: Option<String>,
    #[arg(long)]
    metal: Option<String>,
    /// mirror separation a, um
    #[arg(long)]
    width_um: Option<f64>,
    /// distance to the first mirror, um
    #[arg(long)]
    x_um: Option<f64>,
    /// metal layer thickness w, um
    #[arg(long)]
    layer_um: Option<f64>,
    #[arg(long)]
    substrate: Option<String>,
    #[arg(long = "temperature", short = 'T')]
    temperature: Option<f64>,
    #[arg(long)]
    rrr: Option<f64>,
    #[arg(long = "field", short = 'B', value_name = "GAUSS")]
    field: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Shift and half-width of one configuration
    Shift(Common),
    /// Shift versus x, T, RRR or w, written as CSV
    Sweep {
        #[command(flatten)]
        common: Common,
        /// x | T | RRR | w
        #[arg(long)]
        variable: Option<String>,
        #[arg(long)]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        /// CSV path; stdout when absent
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Scattering Green tensor diagonal at a real frequency or Matsubara index
    Greens {
        #[command(flatten)]
        common: Common,
        /// angular frequency, rad/s
        #[arg(long, conflicts_with = "matsubara")]
        omega: Option<f64>,
        #[arg(long)]
        matsubara: Option<usize>,
    },
    /// Free-space thermal shift and width
    Freespace(Common),
}

fn load(c: &Common) -> hfcav::Result<RunConfig> {
    let mut cfg = match &c.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let flags = [
        ("isotope", c.isotope.clone()),
        ("transition.upper", c.upper.clone()),
        ("transition.lower", c.lower.clone()),
        ("cavity.metal", c.metal.clone()),
        ("cavity.width_um", c.width_um.map(|v| v.to_string())),
        ("cavity.x_um", c.x_um.map(|v| v.to_string())),
        ("cavity.layer_thickness_um", c.layer_um.map(|v| v.to_string())),
        ("cavity.substrate", c.substrate.clone()),
        ("temperature_K", c.temperature.map(|v| v.to_string())),
        ("RRR", c.rrr.map(|v| v.to_string())),
        ("B_gauss", c.field.map(|v| v.to_string())),
    ];
    for s in &c.set {
        cfg.apply_assignment(s)?;
    }
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.set(k, &v)?;
        }
    }
    Ok(cfg)
}

fn run(cli: Cli) -> hfcav::Result<()> {
    match cli.command {
        Command::Shift(c) => {
            let cfg = load(&c)?;
            let r = app::run_shift(&cfg)?;
            print!("{}", app::format_shift(&cfg, &r));
        }
        Command::Sweep {
            common,
            variable,
            from,
            to,
            points,
            output,
        } => {
            let mut cfg = load(&common)?;
            let flags = [
                ("sweep.variable", variable),
                ("sweep.from", from.map(|v| v.to_string())),
                ("sweep.to", to.map(|v| v.to_string())),
                ("sweep.points", points.map(|v| v.to_string())),
            ];
            for (k, v) in flags {
                if let Some(v) = v {
                    cfg.set(k, &v)?;
                }
            }
            if let Some(p) = output {
                cfg.output_path = Some(p);
            }
            match cfg.output_path.clone() {
                Some(p) => {
                    let rows = app::sweep_to_file(&cfg, &p)?;
                    eprintln!("wrote {} rows to {}", rows.len(), p.display());
                }
                None => {
                    let rows = app::run_sweep(&cfg)?;
                    app::write_csv(&rows, std::io::stdout().lock())?;
                }
            }
        }
        Command::Greens { common, omega, matsubara } => {
            let cfg = load(&common)?;
            let at = match (omega, matsubara) {
                (Some(w), _) => GreenPoint::Omega(w),
                (None, Some(n)) => GreenPoint::Matsubara(n),
                (None, None) => {
                    let iso = cfg.isotope()?;
                    GreenPoint::Omega(2.0 * std::f64::consts::PI * iso.nu_hfs)
                }
            };
            print!("{}", app::run_greens(&cfg, at)?);
        }
        Command::Freespace(c) => {
            let cfg = load(&c)?;
            print!("{}", app::run_freespace(&cfg)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
