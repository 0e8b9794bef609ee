//! Level shifts, transition rates and widths of ground hyperfine sub-levels
//! in free space or inside a cavity at temperature T.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::angular::HalfInteger;
use crate::atom::{transition_frequency, HyperfineState, Isotope};
use crate::constants::{BOHR_RADIUS, C, HBAR, H_PLANCK, K_B, M_E, FINE_STRUCTURE, RYDBERG};
use crate::dipole::magnetic::GroundManifold;
use crate::dipole::polarizability::{polarizability_difference, ElectricPolarizability};
use crate::error::{invalid, Error, Result};
use crate::green::{cavity_scatter, cavity_scatter_diag_imagfreq, free_space_im_diag, real_axis_spec, CavityGeometry, Field, ImagGreenDiag, STATIC_XI};
use crate::kernel::thermal_kernel;

/// Matsubara sums stop once xi_n min(x, a - x) / c exceeds this and the
/// running term is below `MATSUBARA_REL` of the accumulated sum.
pub const MATSUBARA_DECAY: f64 = 40.0;
pub const MATSUBARA_REL: f64 = 1e-10;
const MATSUBARA_BLOCK: usize = 32;
const MATSUBARA_LIMIT: usize = 2_000_000;

/// Per-state free-energy shift, erg.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ShiftBreakdown {
    pub abs_e: f64,
    pub em_e: f64,
    pub nonres_e: f64,
    pub abs_h: f64,
    pub em_h: f64,
    pub nonres_h: f64,
    pub free_space_e: f64,
    pub free_space_h: f64,
    /// Upper bound on |abs_e|, which is reported as zero.
    pub abs_e_bound: f64,
}

impl ShiftBreakdown {
    pub fn resonant_h(&self) -> f64 {
        self.abs_h + self.em_h
    }

    pub fn scattering(&self) -> f64 {
        self.abs_e + self.em_e + self.nonres_e + self.abs_h + self.em_h + self.nonres_h
    }

    pub fn total(&self) -> f64 {
        self.scattering() + self.free_space_e + self.free_space_h
    }
}

#[derive(Clone, Debug)]
pub struct TransitionResult {
    pub upper: HyperfineState,
    pub lower: HyperfineState,
    /// Unperturbed transition frequency, Hz.
    pub frequency: f64,
    pub res_h: f64,
    pub nonres_h: f64,
    pub nonres_e: f64,
    pub free_space_h: f64,
    pub free_space_e: f64,
    /// Net shift, Hz.
    pub delta_nu: f64,
    pub breakdown_upper: ShiftBreakdown,
    pub breakdown_lower: ShiftBreakdown,
    pub gamma_upper: f64,
    pub gamma_lower: f64,
    /// Gamma_upper + Gamma_lower, rad/s.
    pub half_width: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct MatsubaraTerm {
    pub n: usize,
    /// Frequency the term is evaluated at; STATIC_XI for n = 0.
    pub xi: f64,
    pub weight: f64,
    pub green: ImagGreenDiag,
}

fn bose(x: f64) -> f64 {
    1.0 / x.exp_m1()
}

// 1 / (1 - e^-x)
fn upward(x: f64) -> f64 {
    -1.0 / (-x).exp_m1()
}

fn dot(g: (f64, f64), v: [f64; 3]) -> f64 {
    g.0 * v[0] + g.1 * (v[1] + v[2])
}

fn re_dot(g: (Complex64, Complex64), v: [f64; 3]) -> f64 {
    g.0.re * v[0] + g.1.re * (v[1] + v[2])
}

/// Matsubara table of the scattering tensors, summed in blocks in parallel
/// and truncated deterministically.
pub fn matsubara_table(geom: &CavityGeometry) -> Result<Vec<MatsubaraTerm>> {
    let xi1 = 2.0 * PI * K_B * geom.t / HBAR;
    let l = geom.min_distance();
    let mut out = Vec::new();
    let mut acc = [0.0f64; 4];
    let mut start = 0;
    while start < MATSUBARA_LIMIT {
        let block: Vec<Result<MatsubaraTerm>> = (start..start + MATSUBARA_BLOCK)
            .into_par_iter()
            .map(|n| {
                let xi = if n == 0 { STATIC_XI } else { n as f64 * xi1 };
                Ok(MatsubaraTerm {
                    n,
                    xi,
                    weight: if n == 0 { 0.5 } else { 1.0 },
                    green: cavity_scatter_diag_imagfreq(xi, geom)?,
                })
            })
            .collect();
        for term in block {
            let term = term?;
            let g = term.green;
            let v = [g.e_xx, g.e_yy, g.h_xx, g.h_yy].map(f64::abs);
            for k in 0..4 {
                acc[k] += term.weight * v[k];
            }
            let decayed = term.n > 0 && term.xi * l / C > MATSUBARA_DECAY;
            let small = (0..4).all(|k| v[k] <= MATSUBARA_REL * acc[k]);
            out.push(term);
            if decayed && small {
                return Ok(out);
            }
        }
        start += MATSUBARA_BLOCK;
    }
    Err(Error::Series {
        what: "Matsubara sum",
    })
}

/// Shifts and rates for one isotope at fixed field and temperature.
pub struct Engine {
    pub manifold: GroundManifold,
    pub t: f64,
    pub cavity: Option<CavityGeometry>,
    // magnetic (xx, yy) scattering tensor at each |omega| in use
    resonant: Vec<(f64, (Complex64, Complex64))>,
    matsubara: Vec<MatsubaraTerm>,
    alpha: Vec<OnceLock<std::result::Result<ElectricPolarizability, String>>>,
}

impl std::fmt::Debug for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Engine")
            .field("iso", &self.manifold.iso.symbol())
            .field("b_field", &self.manifold.b_field)
            .field("t", &self.t)
            .field("cavity", &self.cavity)
            .field("matsubara_terms", &self.matsubara.len())
            .finish()
    }
}

impl Engine {
    pub fn free_space(iso: &Isotope, b_field: f64, t: f64) -> Result<Self> {
        Self::from_manifold(GroundManifold::new(iso, b_field), t, None)
    }

    pub fn cavity(iso: &Isotope, b_field: f64, geom: CavityGeometry) -> Result<Self> {
        let t = geom.t;
        Self::from_manifold(GroundManifold::new(iso, b_field), t, Some(geom))
    }

    pub fn from_manifold(manifold: GroundManifold, t: f64, cavity: Option<CavityGeometry>) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return invalid(format!("temperature must be positive, got {t}"));
        }
        if manifold.b_field < 0.0 || !manifold.b_field.is_finite() {
            return invalid(format!("magnetic field must be non-negative, got {}", manifold.b_field));
        }
        let n = manifold.len();
        let mut resonant = Vec::new();
        let mut matsubara = Vec::new();
        if let Some(geom) = &cavity {
            if (geom.t - t).abs() > 0.0 {
                return invalid("cavity temperature differs from the engine temperature");
            }
            let mut freqs: Vec<f64> = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    if a == b || manifold.mu_sq(a, b).iter().all(|&v| v == 0.0) {
                        continue;
                    }
                    let w = manifold.omega(a, b).abs();
                    if w == 0.0 {
                        return invalid(format!(
                            "{} and {} are degenerate at B = {} G; resonant cavity terms need B > 0",
                            manifold.states[a], manifold.states[b], manifold.b_field
                        ));
                    }
                    if !freqs.contains(&w) {
                        freqs.push(w);
                    }
                }
            }
            freqs.sort_by(f64::total_cmp);
            let spec = real_axis_spec();
            let values: Vec<Result<(Complex64, Complex64)>> =
                freqs.par_iter().map(|&w| cavity_scatter(Field::Magnetic, w, geom, &spec)).collect();
            for (w, v) in freqs.into_iter().zip(values) {
                resonant.push((w, v?));
            }
            matsubara = matsubara_table(geom)?;
        }
        let alpha = (0..n).map(|_| OnceLock::new()).collect();
        Ok(Engine {
            manifold,
            t,
            cavity,
            resonant,
            matsubara,
            alpha,
        })
    }

    pub fn iso(&self) -> &Isotope {
        &self.manifold.iso
    }

    pub fn kt(&self) -> f64 {
        K_B * self.t
    }

    pub fn matsubara_terms(&self) -> &[MatsubaraTerm] {
        &self.matsubara
    }

    pub fn index(&self, s: &HyperfineState) -> Result<usize> {
        self.manifold.index(s)
    }

    fn resonant_green(&self, w: f64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let w = w.abs();
        self.resonant.iter().find(|(k, _)| *k == w).map_or((zero, zero), |(_, g)| *g)
    }

    pub fn polarizability(&self, a: usize) -> Result<&ElectricPolarizability> {
        let iso = self.manifold.iso;
        let state = self.manifold.states[a];
        self.alpha[a]
            .get_or_init(|| ElectricPolarizability::new(&iso, &state).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| Error::InvalidArgument(e.clone()))
    }

    /// A for the transition a -> b, 1/s.
    pub fn rate(&self, a: usize, b: usize) -> Result<f64> {
        if a == b {
            return invalid("a rate needs two different states");
        }
        let m2 = self.manifold.mu_sq(a, b);
        let w_ab = -self.manifold.omega(a, b);
        if w_ab == 0.0 || m2.iter().all(|&v| v == 0.0) {
            return Ok(0.0);
        }
        let w = w_ab.abs();
        let g = self.resonant_green(w);
        let f0 = free_space_im_diag(w);
        let total = (g.0.im + f0) * m2[0] + (g.1.im + f0) * (m2[1] + m2[2]);
        let im = if w_ab < 0.0 { -total } else { total };
        Ok(2.0 / HBAR * upward(HBAR * w_ab / self.kt()) * im)
    }

    /// Total depopulation rate of state a, 1/s.
    pub fn depopulation_rate(&self, a: usize) -> Result<f64> {
        let mut g = 0.0;
        for b in 0..self.manifold.len() {
            if b != a {
                g += self.rate(a, b)?;
            }
        }
        Ok(g)
    }

    /// Free-space thermal shifts (electric, magnetic) of state a, erg.
    pub fn free_space_state_shift(&self, a: usize) -> Result<(f64, f64)> {
        let kt = self.kt();
        let pre = 2.0 / (3.0 * PI * C.powi(3)) * (kt / HBAR).powi(3);
        let mut h = 0.0;
        for b in 0..self.manifold.len() {
            if b == a {
                continue;
            }
            let m2: f64 = self.manifold.mu_sq(a, b).iter().sum();
            if m2 == 0.0 {
                continue;
            }
            let y = (self.manifold.energies[a] - self.manifold.energies[b]) / kt;
            h += pre * m2 * thermal_kernel(y)?;
        }
        // the L = 1 levels sit at y ~ 500, where F(y) -> 2 pi^4 / 15 y
        let tr: f64 = self.polarizability(a)?.static_value().iter().sum();
        let e = -2.0 * PI.powi(3) * HBAR / (45.0 * C.powi(3)) * (kt / HBAR).powi(4) * tr;
        Ok((e, h))
    }

    /// Cavity (scattering) and free-space shifts of state a.
    pub fn state_shift(&self, a: usize) -> Result<ShiftBreakdown> {
        let (free_space_e, free_space_h) = self.free_space_state_shift(a)?;
        let mut out = ShiftBreakdown {
            free_space_e,
            free_space_h,
            ..Default::default()
        };
        if self.cavity.is_none() {
            return Ok(out);
        }
        let kt = self.kt();
        for b in 0..self.manifold.len() {
            if b == a {
                continue;
            }
            let m2 = self.manifold.mu_sq(a, b);
            if m2.iter().all(|&v| v == 0.0) {
                continue;
            }
            let w = self.manifold.omega(a, b);
            let re = re_dot(self.resonant_green(w), m2);
            let x = HBAR * w.abs() / kt;
            if w > 0.0 {
                out.abs_h += re * bose(x);
            } else {
                out.em_h -= re * (bose(x) + 1.0);
            }
        }
        let alpha = self.polarizability(a)?;
        for term in &self.matsubara {
            let beta = self.manifold.beta_imag(a, term.xi)?;
            out.nonres_h += term.weight * dot(term.green.get(Field::Magnetic), beta);
            out.nonres_e += term.weight * dot(term.green.get(Field::Electric), alpha.at_imag(term.xi));
        }
        out.nonres_h = 0.0 - kt * out.nonres_h;
        out.nonres_e = 0.0 - kt * out.nonres_e;
        out.abs_e_bound = self.absorption_e_bound(a)?;
        Ok(out)
    }

    /// Bound on the virtual-absorption Stark term: every L = 1 level lies at
    /// least 3/4 Ry up, so the Bose factor caps it at e^{-3Ry/4kT} times the
    /// static near-field interaction.
    fn absorption_e_bound(&self, a: usize) -> Result<f64> {
        let Some(geom) = &self.cavity else { return Ok(0.0) };
        let tr: f64 = self.polarizability(a)?.static_value().iter().sum();
        let w_min = 0.75 * RYDBERG;
        let l = geom.min_distance();
        Ok(bose(w_min / self.kt()) * w_min * tr / l.powi(3))
    }

    /// Boltzmann populations of the ground manifold.
    pub fn boltzmann_weights(&self) -> Vec<f64> {
        let e = &self.manifold.energies;
        let lo = e.iter().cloned().fold(f64::INFINITY, f64::min);
        let w: Vec<f64> = e.iter().map(|&v| (-(v - lo) / self.kt()).exp()).collect();
        let z: f64 = w.iter().sum();
        w.into_iter().map(|v| v / z).collect()
    }

    /// Equilibrium Casimir-Polder free energy with Boltzmann-averaged
    /// polarizabilities, erg.
    pub fn equilibrium_energy(&self) -> Result<f64> {
        let p = self.boltzmann_weights();
        let mut total = 0.0;
        for term in self.matsubara.iter().rev() {
            let (mut alpha, mut beta) = ([0.0; 3], [0.0; 3]);
            for (a, pa) in p.iter().enumerate() {
                let al = self.polarizability(a)?.at_imag(term.xi);
                let be = self.manifold.beta_imag(a, term.xi)?;
                for k in 0..3 {
                    alpha[k] += pa * al[k];
                    beta[k] += pa * be[k];
                }
            }
            total += term.weight * (dot(term.green.get(Field::Electric), alpha) + dot(term.green.get(Field::Magnetic), beta));
        }
        Ok(-self.kt() * total)
    }

    /// Shift and width of the transition upper -> lower.
    pub fn transition(&self, upper: &HyperfineState, lower: &HyperfineState) -> Result<TransitionResult> {
        let iso = self.manifold.iso;
        let frequency = transition_frequency(&iso, upper, lower, self.manifold.b_field)?;
        let (a, b) = (self.index(upper)?, self.index(lower)?);
        let (sa, sb) = (self.state_shift(a)?, self.state_shift(b)?);
        let kt = self.kt();

        let mut nonres_e = 0.0;
        if self.cavity.is_some() {
            let (pa, pb) = (self.polarizability(a)?, self.polarizability(b)?);
            for term in &self.matsubara {
                nonres_e += term.weight * dot(term.green.get(Field::Electric), polarizability_difference(pa, pb, term.xi));
            }
            nonres_e *= kt / H_PLANCK;
            nonres_e = 0.0 - nonres_e;
        }
        let dtr: f64 = polarizability_difference(self.polarizability(a)?, self.polarizability(b)?, 0.0).iter().sum();
        let free_space_e = -2.0 * PI.powi(3) * HBAR / (45.0 * C.powi(3)) * (kt / HBAR).powi(4) * dtr / H_PLANCK;

        let res_h = (sa.resonant_h() - sb.resonant_h()) / H_PLANCK;
        let nonres_h = (sa.nonres_h - sb.nonres_h) / H_PLANCK;
        let free_space_h = (sa.free_space_h - sb.free_space_h) / H_PLANCK;
        let (ga, gb) = (self.depopulation_rate(a)?, self.depopulation_rate(b)?);
        Ok(TransitionResult {
            upper: *upper,
            lower: *lower,
            frequency,
            res_h,
            nonres_h,
            nonres_e,
            free_space_h,
            free_space_e,
            delta_nu: res_h + nonres_h + nonres_e + free_space_h + free_space_e,
            breakdown_upper: sa,
            breakdown_lower: sb,
            gamma_upper: ga,
            gamma_lower: gb,
            half_width: ga + gb,
        })
    }
}

/// Free-space thermal shift of the F = I + 1/2 -> I - 1/2 line, Hz, from the
/// closed forms: (Zeeman, Stark).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FreeSpaceShift {
    pub zeeman: f64,
    pub stark: f64,
}

impl FreeSpaceShift {
    pub fn total(&self) -> f64 {
        self.zeeman + self.stark
    }
}

/// -(2 pi / 9) alpha (k T / m c^2)^2 nu_HFS.
pub fn free_space_zeeman_closed_form(iso: &Isotope, t: f64) -> f64 {
    -2.0 * PI / 9.0 * FINE_STRUCTURE * (K_B * t / (M_E * C * C)).powi(2) * iso.nu_hfs
}

/// -(pi^2 a0^3 / 45 c^3) (k T / hbar)^4 Tr(Delta alpha) / a0^3.
pub fn free_space_stark(dalpha_trace: f64, t: f64) -> f64 {
    -PI * PI * BOHR_RADIUS.powi(3) / (45.0 * C.powi(3)) * (K_B * t / HBAR).powi(4) * dalpha_trace / BOHR_RADIUS.powi(3)
}

pub fn free_space_transition_shift(iso: &Isotope, upper: &HyperfineState, lower: &HyperfineState, t: f64) -> Result<FreeSpaceShift> {
    if upper == lower {
        return Err(Error::Degenerate(upper.to_string(), lower.to_string()));
    }
    if !(t > 0.0) {
        return invalid(format!("temperature must be positive, got {t}"));
    }
    let pa = ElectricPolarizability::new(iso, upper)?;
    let pb = ElectricPolarizability::new(iso, lower)?;
    let dtr: f64 = polarizability_difference(&pa, &pb, 0.0).iter().sum();
    let zeeman = if upper.f != lower.f {
        free_space_zeeman_closed_form(iso, t)
    } else {
        // within one F level the closed form does not apply; use the kernel
        let e = Engine::free_space(iso, 0.0, t)?;
        let (_, ha) = e.free_space_state_shift(e.index(upper)?)?;
        let (_, hb) = e.free_space_state_shift(e.index(lower)?)?;
        (ha - hb) / H_PLANCK
    };
    Ok(FreeSpaceShift {
        zeeman,
        stark: free_space_stark(dtr, t),
    })
}

/// The I + 1/2 -> I - 1/2 pair with the smallest |M_F| (M_F = 0 for H and T,
/// M_F = 1/2 for D).
pub fn clock_pair(iso: &Isotope) -> (HyperfineState, HyperfineState) {
    let m = if iso.spin.twice() % 2 == 0 { HalfInteger::HALF } else { HalfInteger::ZERO };
    let up = HyperfineState::new(iso, iso.upper_f(), m).expect("M within both F levels");
    let lo = HyperfineState::new(iso, iso.lower_f(), m).expect("M within both F levels");
    (up, lo)
}
