//! Mirror materials: the Drude metals and the Si oscillator, behind a
//! common `Material` trait and a registry keyed by name.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::constants::{ev_to_rad_s, C};
use crate::error::{invalid, Error, Result};

pub const T_ROOM: f64 = 300.0;

pub trait Material: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    /// Relative permittivity at complex angular frequency `omega` (rad/s),
    /// temperature `t` (K).
    fn permittivity(&self, omega: Complex64, t: f64) -> Result<Complex64>;

    /// Permittivity on the imaginary axis, omega = i xi, xi > 0. Real.
    fn permittivity_imag(&self, xi: f64, t: f64) -> Result<f64> {
        Ok(self.permittivity(Complex64::new(0.0, xi), t)?.re)
    }

    fn as_drude(&self) -> Option<&Drude> {
        None
    }
}

/// eps = 1 - Omega_p^2 / (omega (omega + i gamma(T))).
#[derive(Clone, Debug, PartialEq)]
pub struct Drude {
    pub name: String,
    /// rad/s
    pub omega_p: f64,
    /// rad/s at 300 K
    pub gamma_room: f64,
    /// 1/K
    pub alpha_t: f64,
    pub t_debye: f64,
    pub rrr: f64,
}

impl Drude {
    pub fn from_ev(name: &str, omega_p_ev: f64, gamma_room_ev: f64, alpha_t: f64, t_debye: f64) -> Self {
        Drude {
            name: name.to_string(),
            omega_p: ev_to_rad_s(omega_p_ev),
            gamma_room: ev_to_rad_s(gamma_room_ev),
            alpha_t,
            t_debye,
            rrr: 1.0,
        }
    }

    pub fn with_rrr(mut self, rrr: f64) -> Self {
        self.rrr = rrr;
        self
    }

    /// max(gamma_room [1 + (T - 300) alpha], gamma_room / RRR).
    pub fn relaxation_frequency(&self, t: f64) -> f64 {
        let linear = self.gamma_room * (1.0 + (t - T_ROOM) * self.alpha_t);
        linear.max(self.gamma_room / self.rrr)
    }

    /// dc conductivity Omega_p^2 / (4 pi gamma), 1/s.
    pub fn conductivity(&self, t: f64) -> f64 {
        self.omega_p * self.omega_p / (4.0 * PI * self.relaxation_frequency(t))
    }

    /// c / (2 pi sqrt(nu sigma)) in cm, `nu` in Hz.
    pub fn skin_depth(&self, nu: f64, t: f64) -> f64 {
        C / (2.0 * PI * (nu * self.conductivity(t)).sqrt())
    }
}

impl Material for Drude {
    fn name(&self) -> &str {
        &self.name
    }

    fn permittivity(&self, omega: Complex64, t: f64) -> Result<Complex64> {
        if omega.norm() == 0.0 {
            return invalid(format!("Drude permittivity of {} is singular at zero frequency", self.name));
        }
        let g = self.relaxation_frequency(t);
        Ok(1.0 - self.omega_p * self.omega_p / (omega * (omega + Complex64::new(0.0, g))))
    }

    fn permittivity_imag(&self, xi: f64, t: f64) -> Result<f64> {
        if xi <= 0.0 {
            return invalid(format!("Drude permittivity of {} is singular at zero frequency", self.name));
        }
        let g = self.relaxation_frequency(t);
        Ok(1.0 + self.omega_p * self.omega_p / (xi * (xi + g)))
    }

    fn as_drude(&self) -> Option<&Drude> {
        Some(self)
    }
}

/// eps = eps_inf + omega_uv^2 (eps_0 - eps_inf) / (omega_uv^2 - omega^2 - i omega gamma).
#[derive(Clone, Debug, PartialEq)]
pub struct Oscillator {
    pub name: String,
    pub eps_inf: f64,
    pub eps_0: f64,
    pub omega_uv: f64,
    pub gamma: f64,
}

impl Oscillator {
    pub fn silicon() -> Self {
        Oscillator {
            name: "Si".into(),
            eps_inf: 1.035,
            eps_0: 11.67,
            omega_uv: 6.6e15,
            gamma: 1.52e12,
        }
    }
}

impl Material for Oscillator {
    fn name(&self) -> &str {
        &self.name
    }

    fn permittivity(&self, omega: Complex64, _t: f64) -> Result<Complex64> {
        let w2 = self.omega_uv * self.omega_uv;
        let den = w2 - omega * omega - Complex64::new(0.0, self.gamma) * omega;
        Ok(self.eps_inf + w2 * (self.eps_0 - self.eps_inf) / den)
    }

    fn permittivity_imag(&self, xi: f64, _t: f64) -> Result<f64> {
        let w2 = self.omega_uv * self.omega_uv;
        Ok(self.eps_inf + w2 * (self.eps_0 - self.eps_inf) / (w2 + xi * xi + xi * self.gamma))
    }
}

/// Vacuum, for a mirror whose layers are all removed.
#[derive(Clone, Debug)]
pub struct Vacuum;

impl Material for Vacuum {
    fn name(&self) -> &str {
        "vacuum"
    }

    fn permittivity(&self, _omega: Complex64, _t: f64) -> Result<Complex64> {
        Ok(Complex64::new(1.0, 0.0))
    }

    fn permittivity_imag(&self, _xi: f64, _t: f64) -> Result<f64> {
        Ok(1.0)
    }
}

/// Materials by name. The built-in table holds Au, Al, Ag, Pt, Si and
/// vacuum; more can be registered at run time.
#[derive(Clone, Debug)]
pub struct MaterialRegistry {
    entries: BTreeMap<String, Arc<dyn Material>>,
}

impl Default for MaterialRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl MaterialRegistry {
    pub fn empty() -> Self {
        MaterialRegistry { entries: BTreeMap::new() }
    }

    pub fn builtin() -> Self {
        let mut r = Self::empty();
        for d in builtin_metals() {
            r.register(Arc::new(d));
        }
        r.register(Arc::new(Oscillator::silicon()));
        r.register(Arc::new(Vacuum));
        r
    }

    pub fn register(&mut self, m: Arc<dyn Material>) {
        self.entries.insert(m.name().to_string(), m);
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    pub fn metal_names(&self) -> Vec<String> {
        self.entries
            .iter()
            .filter(|(_, m)| m.as_drude().is_some())
            .map(|(k, _)| k.clone())
            .collect()
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn Material>> {
        self.entries.get(name).cloned().ok_or_else(|| Error::Unknown {
            kind: "material",
            name: name.to_string(),
            known: self.names().join(", "),
        })
    }

    /// A registered Drude metal with its RRR replaced.
    pub fn metal(&self, name: &str, rrr: f64) -> Result<Drude> {
        match self.entries.get(name).and_then(|m| m.as_drude()) {
            Some(d) => Ok(d.clone().with_rrr(rrr)),
            None => Err(Error::Unknown {
                kind: "metal",
                name: name.to_string(),
                known: self.metal_names().join(", "),
            }),
        }
    }
}

/// Au, Al, Ag, Pt with room-temperature Drude parameters.
pub fn builtin_metals() -> Vec<Drude> {
    vec![
        Drude::from_ev("Au", 9.0, 0.035, 3.4e-3, 165.0),
        Drude::from_ev("Al", 11.5, 0.050, 4.3e-3, 428.0),
        Drude::from_ev("Ag", 9.014, 0.018, 4.0e-3, 225.0),
        Drude::from_ev("Pt", 4.89, 0.07, 3.9e-3, 240.0),
    ]
}
