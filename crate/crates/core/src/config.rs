//! Run configuration: flat `key = value` text with dotted keys. Later
//! assignments win, so command-line flags are applied after the file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use crate::atom::{HyperfineState, Isotope};
use crate::constants::{ev_to_rad_s, MICRON};
use crate::engine::clock_pair;
use crate::error::{Error, Result};
use crate::green::CavityGeometry;
use crate::material::MaterialRegistry;
use crate::mirror::build_mirror;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepVariable {
    /// atom-mirror distance, um
    X,
    /// temperature, K
    T,
    Rrr,
    /// layer thickness, um
    W,
}

impl FromStr for SweepVariable {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "x" => Ok(SweepVariable::X),
            "T" => Ok(SweepVariable::T),
            "RRR" => Ok(SweepVariable::Rrr),
            "w" => Ok(SweepVariable::W),
            _ => Err(format!("expected one of x, T, RRR, w, got `{s}`")),
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepVariable::X => "x",
            SweepVariable::T => "T",
            SweepVariable::Rrr => "RRR",
            SweepVariable::W => "w",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl Sweep {
    /// Evenly spaced values, both ends included.
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.from];
        }
        let step = (self.to - self.from) / (self.points - 1) as f64;
        (0..self.points).map(|i| self.from + step * i as f64).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaterialOverride {
    pub material: String,
    pub field: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub isotope: String,
    /// state labels; the clock pair when unset
    pub upper: Option<String>,
    pub lower: Option<String>,
    pub metal: String,
    pub width_um: f64,
    /// distance to the first mirror; a/2 when unset
    pub x_um: Option<f64>,
    pub layer_thickness_um: f64,
    pub substrate: String,
    pub temperature_k: f64,
    pub rrr: f64,
    pub b_gauss: f64,
    pub sweep: Option<Sweep>,
    pub output_path: Option<PathBuf>,
    pub overrides: Vec<MaterialOverride>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            isotope: "H".into(),
            upper: None,
            lower: None,
            metal: "Au".into(),
            width_um: 1.0,
            x_um: None,
            layer_thickness_um: 5.0,
            substrate: "Si".into(),
            temperature_k: 300.0,
            rrr: 10.0,
            b_gauss: 0.01,
            sweep: None,
            output_path: None,
            overrides: Vec::new(),
        }
    }
}

const OVERRIDE_FIELDS: [&str; 4] = ["omega_p_ev", "gamma_ev", "alpha_t", "t_debye"];

fn bad(key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        message: message.into(),
    }
}

fn number(key: &str, value: &str) -> Result<f64> {
    let v: f64 = value.parse().map_err(|_| bad(key, format!("`{value}` is not a number")))?;
    if !v.is_finite() {
        return Err(bad(key, "must be finite"));
    }
    Ok(v)
}

impl RunConfig {
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| bad("config", format!("cannot read {}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    /// Applies every `key = value` line; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(bad(&format!("line {}", n + 1), format!("expected key = value, got `{line}`")));
            };
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    /// Applies `key=value`, as given on the command line.
    pub fn apply_assignment(&mut self, s: &str) -> Result<()> {
        let (k, v) = s.split_once('=').ok_or_else(|| bad(s, "expected key=value"))?;
        self.set(k.trim(), v.trim())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "isotope" => self.isotope = value.to_string(),
            "transition.upper" => self.upper = Some(value.to_string()),
            "transition.lower" => self.lower = Some(value.to_string()),
            "cavity.metal" => self.metal = value.to_string(),
            "cavity.width_um" => self.width_um = number(key, value)?,
            "cavity.x_um" => self.x_um = Some(number(key, value)?),
            "cavity.layer_thickness_um" => self.layer_thickness_um = number(key, value)?,
            "cavity.substrate" => self.substrate = value.to_string(),
            "temperature_K" => self.temperature_k = number(key, value)?,
            "RRR" => self.rrr = number(key, value)?,
            "B_gauss" => self.b_gauss = number(key, value)?,
            "output_path" => self.output_path = Some(PathBuf::from(value)),
            "sweep.variable" => {
                let variable = value.parse().map_err(|m: String| bad(key, m))?;
                self.sweep_mut().variable = variable;
            }
            "sweep.from" => self.sweep_mut().from = number(key, value)?,
            "sweep.to" => self.sweep_mut().to = number(key, value)?,
            "sweep.points" => {
                self.sweep_mut().points = value.parse().map_err(|_| bad(key, format!("`{value}` is not a count")))?;
            }
            _ => {
                let parts: Vec<&str> = key.split('.').collect();
                match parts.as_slice() {
                    ["material", name, field] if OVERRIDE_FIELDS.contains(field) => {
                        self.overrides.retain(|o| !(o.material == *name && o.field == *field));
                        self.overrides.push(MaterialOverride {
                            material: name.to_string(),
                            field: field.to_string(),
                            value: number(key, value)?,
                        });
                    }
                    _ => return Err(bad(key, "unknown key")),
                }
            }
        }
        Ok(())
    }

    fn sweep_mut(&mut self) -> &mut Sweep {
        self.sweep.get_or_insert(Sweep {
            variable: SweepVariable::X,
            from: 0.0,
            to: 0.0,
            points: 1,
        })
    }

    pub fn x_um(&self) -> f64 {
        self.x_um.unwrap_or(0.5 * self.width_um)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("cavity.width_um", self.width_um),
            ("cavity.layer_thickness_um", self.layer_thickness_um),
            ("temperature_K", self.temperature_k),
            ("RRR", self.rrr),
        ];
        for (key, v) in positive {
            if !(v > 0.0) {
                return Err(bad(key, format!("must be positive, got {v}")));
            }
        }
        if self.b_gauss < 0.0 {
            return Err(bad("B_gauss", format!("must be non-negative, got {}", self.b_gauss)));
        }
        let x = self.x_um();
        if !(x > 0.0 && x < self.width_um) {
            return Err(bad("cavity.x_um", format!("need 0 < x < a = {} um, got {x}", self.width_um)));
        }
        self.isotope().map_err(|e| bad("isotope", e.to_string()))?;
        self.states()?;
        self.registry()?;
        if let Some(s) = &self.sweep {
            if s.points == 0 {
                return Err(bad("sweep.points", "need at least one point"));
            }
            for v in s.values() {
                let ok = match s.variable {
                    SweepVariable::X => v > 0.0 && v < self.width_um,
                    _ => v > 0.0,
                };
                if !ok {
                    return Err(bad("sweep.from", format!("{} = {v} is out of range", s.variable)));
                }
            }
        }
        Ok(())
    }

    pub fn isotope(&self) -> Result<Isotope> {
        Isotope::by_name(&self.isotope)
    }

    /// (upper, lower) of the transition.
    pub fn states(&self) -> Result<(HyperfineState, HyperfineState)> {
        let iso = self.isotope()?;
        let (up, lo) = clock_pair(&iso);
        let up = match &self.upper {
            Some(l) => HyperfineState::parse(&iso, l).map_err(|e| bad("transition.upper", e.to_string()))?,
            None => up,
        };
        let lo = match &self.lower {
            Some(l) => HyperfineState::parse(&iso, l).map_err(|e| bad("transition.lower", e.to_string()))?,
            None => lo,
        };
        if up == lo {
            return Err(bad("transition.lower", "upper and lower states coincide"));
        }
        Ok((up, lo))
    }

    /// The built-in materials with the configured overrides applied.
    pub fn registry(&self) -> Result<MaterialRegistry> {
        let mut reg = MaterialRegistry::builtin();
        for o in &self.overrides {
            let key = format!("material.{}.{}", o.material, o.field);
            let mut d = reg.metal(&o.material, 1.0).map_err(|e| bad(&key, e.to_string()))?;
            match o.field.as_str() {
                "omega_p_ev" => d.omega_p = ev_to_rad_s(o.value),
                "gamma_ev" => d.gamma_room = ev_to_rad_s(o.value),
                "alpha_t" => d.alpha_t = o.value,
                _ => d.t_debye = o.value,
            }
            reg.register(Arc::new(d));
        }
        Ok(reg)
    }

    pub fn geometry(&self) -> Result<CavityGeometry> {
        let reg = self.registry()?;
        let mirror = build_mirror(&reg, &self.metal, self.rrr, self.layer_thickness_um * MICRON, &self.substrate)?;
        CavityGeometry::symmetric(self.width_um * MICRON, self.x_um() * MICRON, mirror, self.temperature_k)
    }

    /// A copy with the sweep variable set to `v`.
    pub fn at(&self, variable: SweepVariable, v: f64) -> Self {
        let mut c = self.clone();
        match variable {
            SweepVariable::X => c.x_um = Some(v),
            SweepVariable::T => c.temperature_k = v,
            SweepVariable::Rrr => c.rrr = v,
            SweepVariable::W => c.layer_thickness_um = v,
        }
        c
    }
}
