//! Electric polarizability of ground sub-levels at imaginary frequency,
//! from the bound np series (n <= N_MAX plus an n^-3 tail) and the
//! continuum grid.
//!
//! Every transition frequency is split as omega = Omega + Delta, with Omega
//! the gross and fine structure part shared by all ground sub-levels and
//! Delta the small hyperfine remainder. Differences between sub-levels are
//! then formed line by line without subtracting two large sums.

use crate::angular::HalfInteger;
use crate::atom::{fine_structure_energy, hyperfine_offset, HyperfineState, Isotope};
use crate::constants::{BOHR_RADIUS, E_CHARGE, HBAR, RYDBERG};
use crate::dipole::electric::shell_weights;
use crate::dipole::radial::{continuum_radial, discrete_radial, ContinuumGrid};
use crate::error::Result;

pub const N_MAX: u32 = 30;

#[derive(Clone, Copy, Debug)]
struct Line {
    omega: f64,
    delta: f64,
    /// (2/hbar) |d_i|^2 per axis, cm^3 / s.
    strength: [f64; 3],
}

fn g(w: f64, xi: f64) -> f64 {
    w / (w * w + xi * xi)
}

// g(w + d) - g(w) without cancellation
fn dg(w: f64, d: f64, xi: f64) -> f64 {
    let x2 = xi * xi;
    let wd = w + d;
    d * (x2 - w * wd) / ((w * w + x2) * (wd * wd + x2))
}

impl Line {
    fn value(&self, xi: f64) -> [f64; 3] {
        let v = g(self.omega + self.delta, xi);
        self.strength.map(|s| s * v)
    }

    fn minus(&self, other: &Line, xi: f64) -> [f64; 3] {
        let base = g(self.omega, xi);
        let (da, db) = (dg(self.omega, self.delta, xi), dg(other.omega, other.delta, xi));
        let mut out = [0.0; 3];
        for k in 0..3 {
            out[k] = (self.strength[k] - other.strength[k]) * base + self.strength[k] * da - other.strength[k] * db;
        }
        out
    }
}

/// sum_{n > n0} n^-s by Euler-Maclaurin, accurate for n0 >= 20.
pub fn zeta_tail(s: f64, n0: u32) -> f64 {
    let n = n0 as f64;
    let from_n = n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s) + s * n.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * n.powf(-s - 3.0) / 720.0
        + s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * n.powf(-s - 5.0) / 30240.0;
    from_n - n.powf(-s)
}

fn add(acc: &mut [f64; 3], v: [f64; 3]) {
    for k in 0..3 {
        acc[k] += v[k];
    }
}

/// Richardson tail for shell sums t_n ~ (C + D/n^2)/n^3 beyond N_MAX.
fn series_tail(prev: [f64; 3], last: [f64; 3]) -> [f64; 3] {
    let (n1, n2) = ((N_MAX - 1) as f64, N_MAX as f64);
    let (z3, z5) = (zeta_tail(3.0, N_MAX), zeta_tail(5.0, N_MAX));
    let mut out = [0.0; 3];
    for k in 0..3 {
        let (s1, s2) = (prev[k] * n1.powi(3), last[k] * n2.powi(3));
        let d = (s1 - s2) / (1.0 / (n1 * n1) - 1.0 / (n2 * n2));
        let c = s2 - d / (n2 * n2);
        out[k] = c * z3 + d * z5;
    }
    out
}

#[derive(Clone, Debug)]
pub struct ElectricPolarizability {
    pub state: HyperfineState,
    shells: Vec<Vec<Line>>,
    continuum: Vec<Line>,
    // integrand at the grid end, for the k^-10 tail beyond it
    edge: Line,
    k_max: f64,
}

impl ElectricPolarizability {
    pub fn new(iso: &Isotope, state: &HyperfineState) -> Result<Self> {
        let half = HalfInteger::HALF;
        let e1 = fine_structure_energy(1, half);
        let own = hyperfine_offset(iso, 1, 0, half, state.f)?;
        let weights = shell_weights(iso, state);
        let unit = 2.0 / HBAR * (E_CHARGE * BOHR_RADIUS).powi(2);

        let mut shells = Vec::new();
        for n in 2..=N_MAX {
            let r2 = discrete_radial(n)?.powi(2);
            let mut lines = Vec::new();
            for (jb, fb, w) in &weights {
                let omega = (fine_structure_energy(n, *jb) - e1) / HBAR;
                let delta = (hyperfine_offset(iso, n, 1, *jb, *fb)? - own) / HBAR;
                lines.push(Line {
                    omega,
                    delta,
                    strength: w.map(|x| unit * r2 * x),
                });
            }
            shells.push(lines);
        }

        let grid = ContinuumGrid::get()?;
        let cont_line = |k: f64, r2w: f64| Line {
            omega: (RYDBERG * k * k - e1) / HBAR,
            delta: -own / HBAR,
            strength: [unit * r2w / 3.0; 3],
        };
        let continuum = grid
            .k
            .iter()
            .zip(&grid.weights)
            .zip(&grid.radial_sq)
            .map(|((&k, &w), &r2)| cont_line(k, r2 * w))
            .collect();
        let edge = cont_line(grid.k_max, continuum_radial(grid.k_max)?.powi(2));
        Ok(ElectricPolarizability {
            state: *state,
            shells,
            continuum,
            edge,
            k_max: grid.k_max,
        })
    }

    fn shell_sum(lines: &[Line], xi: f64) -> [f64; 3] {
        let mut acc = [0.0; 3];
        for l in lines {
            add(&mut acc, l.value(xi));
        }
        acc
    }

    /// Bound-state part, n <= N_MAX and the extrapolated tail.
    pub fn discrete(&self, xi: f64) -> [f64; 3] {
        let mut acc = [0.0; 3];
        for lines in &self.shells {
            add(&mut acc, Self::shell_sum(lines, xi));
        }
        let m = self.shells.len();
        let tail = series_tail(Self::shell_sum(&self.shells[m - 2], xi), Self::shell_sum(&self.shells[m - 1], xi));
        add(&mut acc, tail);
        acc
    }

    pub fn continuum(&self, xi: f64) -> [f64; 3] {
        let mut acc = Self::shell_sum(&self.continuum, xi);
        // integrand ~ k^-10 beyond the grid
        add(&mut acc, self.edge.value(xi).map(|v| v * self.k_max / 9.0));
        acc
    }

    /// Diagonal of alpha(i xi) in cm^3.
    pub fn at_imag(&self, xi: f64) -> [f64; 3] {
        let mut a = self.discrete(xi);
        add(&mut a, self.continuum(xi));
        a
    }

    pub fn static_value(&self) -> [f64; 3] {
        self.at_imag(0.0)
    }
}

/// alpha^(a)(i xi) - alpha^(b)(i xi), summed line by line.
pub fn polarizability_difference(a: &ElectricPolarizability, b: &ElectricPolarizability, xi: f64) -> [f64; 3] {
    let mut acc = [0.0; 3];
    let mut per_shell = Vec::with_capacity(a.shells.len());
    for (la, lb) in a.shells.iter().zip(&b.shells) {
        let mut s = [0.0; 3];
        for (x, y) in la.iter().zip(lb) {
            add(&mut s, x.minus(y, xi));
        }
        add(&mut acc, s);
        per_shell.push(s);
    }
    let m = per_shell.len();
    add(&mut acc, series_tail(per_shell[m - 2], per_shell[m - 1]));
    for (x, y) in a.continuum.iter().zip(&b.continuum) {
        add(&mut acc, x.minus(y, xi));
    }
    add(&mut acc, a.edge.minus(&b.edge, xi).map(|v| v * a.k_max / 9.0));
    acc
}

pub fn static_electric_polarizability(iso: &Isotope, state: &HyperfineState) -> Result<[f64; 3]> {
    Ok(ElectricPolarizability::new(iso, state)?.static_value())
}

/// Polarizability in units of a0^3.
pub fn reduced(alpha: [f64; 3]) -> [f64; 3] {
    alpha.map(|v| v / BOHR_RADIUS.powi(3))
}
