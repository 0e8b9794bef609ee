//! Magnetic moment mu = -g_J mu_B S + g_I mu_n I between ground hyperfine
//! sub-levels, in the zero-field coupled basis |F M>.

use num_complex::Complex64;

use crate::angular::HalfInteger;
use crate::atom::{breit_rabi_energy, enumerate_ground_manifold, HyperfineState, Isotope, G_J};
use crate::constants::{BOHR_MAGNETON, HBAR, NUCLEAR_MAGNETON};
use crate::error::{invalid, Result};

/// Cartesian components (x, y, z).
pub type VectorElement = [Complex64; 3];

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

fn delta(a: HalfInteger, b: HalfInteger) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

// <F Ma| F_i |F Mb>
fn f_ladder(f: HalfInteger, ma: HalfInteger, mb: HalfInteger) -> VectorElement {
    let (fv, mbv) = (f.value(), mb.value());
    let up = ((fv - mbv) * (fv + mbv + 1.0)).max(0.0).sqrt() * delta(ma, mb + HalfInteger::ONE);
    let down = ((fv + mbv) * (fv - mbv + 1.0)).max(0.0).sqrt() * delta(ma, mb - HalfInteger::ONE);
    [
        Complex64::new(0.5 * (up + down), 0.0),
        Complex64::new(0.0, -0.5 * (up - down)),
        Complex64::new(ma.value() * delta(ma, mb), 0.0),
    ]
}

// <I+1/2, Ma| S_i |I-1/2, Mb>
fn s_cross(i: f64, ma: HalfInteger, mb: HalfInteger) -> VectorElement {
    let m = mb.value();
    let d = 2.0 * (2.0 * i + 1.0);
    let up = ((i + m + 1.5) * (i + m + 0.5)).max(0.0).sqrt() / d * delta(ma, mb + HalfInteger::ONE);
    let down = ((i - m + 1.5) * (i - m + 0.5)).max(0.0).sqrt() / d * delta(ma, mb - HalfInteger::ONE);
    let z = -((i + 0.5).powi(2) - m * m).max(0.0).sqrt() / (2.0 * i + 1.0) * delta(ma, mb);
    [
        Complex64::new(up - down, 0.0),
        Complex64::new(0.0, -(up + down)),
        Complex64::new(z, 0.0),
    ]
}

/// <a| mu |b> in erg/G.
pub fn magnetic_dipole_element(iso: &Isotope, a: &HyperfineState, b: &HyperfineState) -> Result<VectorElement> {
    let check = |s: &HyperfineState| HyperfineState::new(iso, s.f, s.m).map(|t| t == *s).unwrap_or(false);
    if !check(a) || !check(b) {
        return invalid(format!("{a} or {b} is outside the ground manifold of {}", iso.symbol()));
    }
    let (gi, gj) = (iso.g_i * NUCLEAR_MAGNETON, G_J * BOHR_MAGNETON);
    let i = iso.i();
    if a.f == b.f {
        let ff = a.f.value() * (a.f.value() + 1.0);
        if ff == 0.0 {
            return Ok([ZERO; 3]);
        }
        let ii = i * (i + 1.0);
        let coef = gi * (ff - 0.75 + ii) / (2.0 * ff) - gj * (ff + 0.75 - ii) / (2.0 * ff);
        Ok(f_ladder(a.f, a.m, b.m).map(|c| c * coef))
    } else if a.f == iso.upper_f() {
        Ok(s_cross(i, a.m, b.m).map(|c| -c * (gj + gi)))
    } else {
        Ok(s_cross(i, b.m, a.m).map(|c| -c.conj() * (gj + gi)))
    }
}

/// Ground manifold at field B: states, Breit-Rabi energies and the moment
/// matrices.
#[derive(Clone, Debug)]
pub struct GroundManifold {
    pub iso: Isotope,
    pub b_field: f64,
    pub states: Vec<HyperfineState>,
    /// erg, measured from E_J of 1s.
    pub energies: Vec<f64>,
    mu: Vec<VectorElement>,
}

impl GroundManifold {
    pub fn new(iso: &Isotope, b_field: f64) -> Self {
        let states = enumerate_ground_manifold(iso);
        let energies = states.iter().map(|s| breit_rabi_energy(iso, s, b_field)).collect();
        let mut mu = Vec::with_capacity(states.len() * states.len());
        for a in &states {
            for b in &states {
                mu.push(magnetic_dipole_element(iso, a, b).expect("states from the manifold"));
            }
        }
        GroundManifold {
            iso: *iso,
            b_field,
            states,
            energies,
            mu,
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index(&self, s: &HyperfineState) -> Result<usize> {
        self.states
            .iter()
            .position(|t| t == s)
            .map_or_else(|| invalid(format!("{s} is not a ground state of {}", self.iso.symbol())), Ok)
    }

    pub fn mu(&self, a: usize, b: usize) -> VectorElement {
        self.mu[a * self.len() + b]
    }

    /// |<a|mu_i|b>|^2 per axis.
    pub fn mu_sq(&self, a: usize, b: usize) -> [f64; 3] {
        self.mu(a, b).map(|c| c.norm_sqr())
    }

    /// omega_ba = (E_b - E_a)/hbar.
    pub fn omega(&self, a: usize, b: usize) -> f64 {
        (self.energies[b] - self.energies[a]) / HBAR
    }

    /// Magnetic polarizability, diagonal part, at imaginary frequency i xi.
    /// Terms with omega_ba = 0 vanish for xi > 0; at xi = 0 they are a pole.
    pub fn beta_imag(&self, a: usize, xi: f64) -> Result<[f64; 3]> {
        let mut out = [0.0; 3];
        for b in 0..self.len() {
            if b == a {
                continue;
            }
            let w = self.omega(a, b);
            let m2 = self.mu_sq(a, b);
            if m2.iter().all(|&v| v == 0.0) {
                continue;
            }
            let den = w * w + xi * xi;
            if den == 0.0 {
                return Err(crate::Error::Pole { omega: 0.0 });
            }
            for k in 0..3 {
                out[k] += 2.0 / HBAR * m2[k] * w / den;
            }
        }
        Ok(out)
    }

    /// Magnetic polarizability at real frequency omega, diagonal part.
    pub fn beta_real(&self, a: usize, omega: f64) -> Result<[f64; 3]> {
        let mut out = [0.0; 3];
        for b in 0..self.len() {
            if b == a {
                continue;
            }
            let w = self.omega(a, b);
            let m2 = self.mu_sq(a, b);
            if m2.iter().all(|&v| v == 0.0) {
                continue;
            }
            if w - omega == 0.0 || w + omega == 0.0 {
                return Err(crate::Error::Pole { omega });
            }
            for k in 0..3 {
                out[k] += m2[k] / HBAR * (1.0 / (w - omega) + 1.0 / (w + omega));
            }
        }
        Ok(out)
    }
}
