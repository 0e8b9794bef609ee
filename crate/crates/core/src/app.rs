//! The four front-end commands, as library functions returning text or rows.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::config::RunConfig;
use crate::constants::{HBAR, K_B};
use crate::engine::{free_space_transition_shift, Engine, TransitionResult};
use crate::error::{invalid, Result};
use crate::green::{cavity_scatter_diag, cavity_scatter_diag_imagfreq, STATIC_XI};

use std::f64::consts::PI;

/// Shift and width of the configured transition between the mirrors.
pub fn run_shift(cfg: &RunConfig) -> Result<TransitionResult> {
    cfg.validate()?;
    let (up, lo) = cfg.states()?;
    let engine = Engine::cavity(&cfg.isotope()?, cfg.b_gauss, cfg.geometry()?)?;
    engine.transition(&up, &lo)
}

pub fn format_shift(cfg: &RunConfig, r: &TransitionResult) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} {} -> {}  {} a={} um x={} um w={} um on {}  T={} K RRR={} B={} G",
        cfg.isotope,
        r.upper,
        r.lower,
        cfg.metal,
        cfg.width_um,
        cfg.x_um(),
        cfg.layer_thickness_um,
        cfg.substrate,
        cfg.temperature_k,
        cfg.rrr,
        cfg.b_gauss
    );
    let _ = writeln!(s, "line frequency      {:.6} Hz", r.frequency);
    let _ = writeln!(s, "res|H               {:.6e} Hz", r.res_h);
    let _ = writeln!(s, "nonres|H            {:.6e} Hz", r.nonres_h);
    let _ = writeln!(s, "nonres|E            {:.6e} Hz", r.nonres_e);
    let _ = writeln!(s, "free space|H        {:.6e} Hz", r.free_space_h);
    let _ = writeln!(s, "free space|E        {:.6e} Hz", r.free_space_e);
    let _ = writeln!(s, "delta nu            {:.6e} Hz", r.delta_nu);
    let _ = writeln!(s, "half width          {:.6e} kHz", r.half_width / 1e3);
    s
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub delta_nu: f64,
    pub half_width_khz: f64,
    pub res_h: f64,
    pub nonres_h: f64,
    pub nonres_e: f64,
}

impl SweepRow {
    fn from_result(value: f64, r: &TransitionResult) -> Self {
        SweepRow {
            value,
            delta_nu: r.delta_nu,
            half_width_khz: r.half_width / 1e3,
            res_h: r.res_h,
            nonres_h: r.nonres_h,
            nonres_e: r.nonres_e,
        }
    }
}

/// All sweep points, evaluated in parallel, in input order.
pub fn run_sweep(cfg: &RunConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let Some(sweep) = &cfg.sweep else {
        return invalid("no sweep configured (set sweep.variable, sweep.from, sweep.to, sweep.points)");
    };
    let var = sweep.variable;
    sweep
        .values()
        .par_iter()
        .map(|&v| run_shift(&cfg.at(var, v)).map(|r| SweepRow::from_result(v, &r)))
        .collect()
}

pub const SWEEP_HEADER: [&str; 6] = ["sweep_value", "delta_nu_hz", "half_width_khz", "res_H", "nonres_H", "nonres_E"];

pub fn write_csv<W: std::io::Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record(
            [r.value, r.delta_nu, r.half_width_khz, r.res_h, r.nonres_h, r.nonres_e].map(|v| format!("{v:e}")),
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Runs the sweep and writes the CSV to `path`. Rows go to a sibling
/// `.partial` file first, so a failed run leaves no output behind.
pub fn sweep_to_file(cfg: &RunConfig, path: &Path) -> Result<Vec<SweepRow>> {
    let rows = run_sweep(cfg)?;
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    let written = fs::File::create(&tmp)
        .map_err(Into::into)
        .and_then(|f| write_csv(&rows, f))
        .and_then(|_| fs::rename(&tmp, path).map_err(Into::into));
    if written.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    written.map(|_| rows)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GreenPoint {
    /// real angular frequency, rad/s
    Omega(f64),
    Matsubara(usize),
}

pub fn run_greens(cfg: &RunConfig, at: GreenPoint) -> Result<String> {
    cfg.validate()?;
    let geom = cfg.geometry()?;
    let mut s = String::new();
    match at {
        GreenPoint::Omega(w) => {
            let g = cavity_scatter_diag(w, &geom)?;
            let _ = writeln!(s, "omega {w:.9e} rad/s");
            for (name, v) in [("E_xx", g.e_xx), ("E_yy", g.e_yy), ("H_xx", g.h_xx), ("H_yy", g.h_yy)] {
                let _ = writeln!(s, "{name}  {:+.9e} {:+.9e}i cm^-3", v.re, v.im);
            }
        }
        GreenPoint::Matsubara(n) => {
            let xi1 = 2.0 * PI * K_B * cfg.temperature_k / HBAR;
            let xi = if n == 0 { STATIC_XI } else { n as f64 * xi1 };
            let g = cavity_scatter_diag_imagfreq(xi, &geom)?;
            let _ = writeln!(s, "n {n} xi {xi:.9e} rad/s");
            for (name, v) in [("E_xx", g.e_xx), ("E_yy", g.e_yy), ("H_xx", g.h_xx), ("H_yy", g.h_yy)] {
                let _ = writeln!(s, "{name}  {v:+.9e} cm^-3");
            }
        }
    }
    Ok(s)
}

/// Free-space thermal shift (closed forms) and width of the transition.
pub fn run_freespace(cfg: &RunConfig) -> Result<String> {
    cfg.validate()?;
    let iso = cfg.isotope()?;
    let (up, lo) = cfg.states()?;
    let shift = free_space_transition_shift(&iso, &up, &lo, cfg.temperature_k)?;
    let engine = Engine::free_space(&iso, cfg.b_gauss, cfg.temperature_k)?;
    let r = engine.transition(&up, &lo)?;
    let mut s = String::new();
    let _ = writeln!(s, "{} {} -> {}  free space  T={} K B={} G", cfg.isotope, up, lo, cfg.temperature_k, cfg.b_gauss);
    let _ = writeln!(s, "zeeman              {:.6e} Hz", shift.zeeman);
    let _ = writeln!(s, "stark               {:.6e} Hz", shift.stark);
    let _ = writeln!(s, "total               {:.6e} Hz", shift.total());
    let _ = writeln!(s, "half width          {:.6e} Hz", r.half_width);
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_field_is_reported() {
        let c = RunConfig::from_text("B_gauss = 0").unwrap();
        let e = run_shift(&c).unwrap_err().to_string();
        assert!(e.contains("B > 0"), "{e}");
    }

    #[test]
    fn csv_layout() {
        let rows = [SweepRow {
            value: 0.5,
            delta_nu: 7.4,
            half_width_khz: 0.58,
            res_h: 7.4,
            nonres_h: -3e-6,
            nonres_e: -1e-4,
        }];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "sweep_value,delta_nu_hz,half_width_khz,res_H,nonres_H,nonres_E");
        assert_eq!(lines.next().unwrap(), "5e-1,7.4e0,5.8e-1,7.4e0,-3e-6,-1e-4");
        assert!(lines.next().is_none());
    }

    #[test]
    fn transparent_mirrors_report_free_space_only() {
        let c = RunConfig::from_text("cavity.metal = none").unwrap();
        let r = run_shift(&c).unwrap();
        assert_eq!((r.res_h, r.nonres_h, r.nonres_e), (0.0, 0.0, 0.0));
        assert_eq!(r.delta_nu, r.free_space_h + r.free_space_e);
        let out = run_greens(&c, GreenPoint::Omega(1e10)).unwrap();
        assert_eq!(out.matches("+0.000000000e0").count(), 8, "{out}");
    }
}
