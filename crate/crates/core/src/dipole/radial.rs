//! Radial dipole integrals from the hydrogen ground state to the np and
//! εp (continuum) states, in units of the Bohr radius.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::quadrature::{gauss_legendre_10, integrate_complex, QuadSpec};
use crate::special::Kummer;

/// |<n p| r |1 s>| / a0 for a bound np state, n >= 2.
pub fn discrete_radial(n: u32) -> Result<f64> {
    if n < 2 {
        return invalid(format!("no p state with n = {n}"));
    }
    let nf = n as f64;
    let ln = 16f64.ln() + 0.5 * (7.0 * nf.ln() + (2.0 * nf - 5.0) * (nf - 1.0).ln() - (2.0 * nf + 5.0) * (nf + 1.0).ln());
    Ok(ln.exp())
}

/// I(k) = ∫_0^∞ x^4 exp(-(i + 1/k) x) Φ(2 + i/k; 4; 2 i x) dx,
/// k the continuum wavenumber in units of 1/a0.
pub fn continuum_integral(k: f64) -> Result<Complex64> {
    if !(k > 0.0) {
        return invalid(format!("continuum wavenumber must be positive, got {k}"));
    }
    let a = Complex64::new(2.0, 1.0 / k);
    let kummer = Kummer::new(a, Complex64::new(4.0, 0.0))?;
    let decay = Complex64::new(1.0 / k, 1.0);

    // envelope x^4 e^{-x/k} falls 16 decades below its peak at x = 4k
    let peak = 4.0 * (4.0 * k).ln() - 4.0;
    let mut upper = 40.0 * k;
    for _ in 0..8 {
        upper = k * (4.0 * upper.ln() - peak + 16.0 * 10f64.ln());
    }
    let width = k.min(2.0);
    let panels = (upper / width).ceil() as usize;
    let breaks: Vec<f64> = (0..=panels).map(|j| j as f64 * upper / panels as f64).collect();

    let mut failure = None;
    let value = integrate_complex(
        |x| match kummer.eval(Complex64::new(0.0, 2.0 * x)) {
            Ok(phi) => x.powi(4) * (-decay * x).exp() * phi,
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        &breaks,
        &QuadSpec {
            // roundoff floor: ∫|integrand| grows like k^3 while I(k) stays O(1)
            abs_tol: 1e-12 * k * k * k,
            ..QuadSpec::rel(1e-11)
        },
    );
    match failure {
        Some(e) => Err(e),
        None => value,
    }
}

/// |<εp, k| r |1 s>| / a0 with the continuum normalised in k.
pub fn continuum_radial(k: f64) -> Result<f64> {
    let i = continuum_integral(k)?;
    Ok(radial_from_integral(k, i))
}

pub(crate) fn radial_from_integral(k: f64, i: Complex64) -> f64 {
    let norm = ((k + 1.0 / k) / -(-2.0 * PI / k).exp_m1()).sqrt();
    4.0 / 3.0 / k.powi(4) * norm * i.norm()
}

/// Fixed quadrature nodes over the continuum with the squared radial
/// integral at each node. Integrals over k of smooth functions times R^2
/// become dot products with `weights`.
pub struct ContinuumGrid {
    pub k: Vec<f64>,
    pub weights: Vec<f64>,
    pub radial_sq: Vec<f64>,
    /// Upper end of the grid; beyond it R^2 falls off as k^-9.
    pub k_max: f64,
}

const PANELS: [f64; 17] = [
    0.0, 0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 9.0, 13.0, 17.0, 20.0,
];

impl ContinuumGrid {
    fn build() -> Result<Self> {
        let mut k = Vec::new();
        let mut weights = Vec::new();
        let (xs, ws) = gauss_legendre_10();
        for w in PANELS.windows(2) {
            let (c, h) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
            for (x, wt) in xs.iter().zip(ws) {
                for s in [-1.0, 1.0] {
                    k.push(c + s * h * x);
                    weights.push(h * wt);
                }
            }
        }
        let radial_sq = k
            .par_iter()
            .map(|&kk| continuum_radial(kk).map(|r| r * r))
            .collect::<Result<Vec<_>>>()?;
        Ok(ContinuumGrid {
            k,
            weights,
            radial_sq,
            k_max: *PANELS.last().unwrap(),
        })
    }

    /// Shared grid, computed on first use.
    pub fn get() -> Result<&'static ContinuumGrid> {
        static GRID: OnceLock<std::result::Result<ContinuumGrid, String>> = OnceLock::new();
        GRID.get_or_init(|| ContinuumGrid::build().map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| crate::Error::InvalidArgument(format!("continuum grid: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_known_values() {
        // <2p|r|1s> = 2^7 sqrt(6) / 3^5 ... as a magnitude 1.2902
        let r2 = discrete_radial(2).unwrap();
        assert!((r2 - 128.0 * 6f64.sqrt() / 243.0).abs() < 1e-14);
        assert!((discrete_radial(3).unwrap() - 0.516_689).abs() < 1e-6);
        assert!(discrete_radial(1).is_err());
    }

    #[test]
    fn discrete_large_n_scaling() {
        // R_n^2 n^3 tends to a constant
        let a = discrete_radial(200).unwrap().powi(2) * 200f64.powi(3);
        let b = discrete_radial(400).unwrap().powi(2) * 400f64.powi(3);
        assert!((a / b - 1.0).abs() < 1e-4);
    }

    // closed form of the same integral, derived by termwise Laplace
    // transformation of the Kummer series
    fn closed_form(k: f64) -> Complex64 {
        let i = Complex64::new(0.0, 1.0);
        let s = i + 1.0 / k;
        let a = Complex64::new(2.0, 1.0 / k);
        let z = 2.0 * i / s;
        let one = Complex64::new(1.0, 0.0);
        24.0 / s.powi(5) * ((-a - 1.0) * (one - z).ln()).exp() * (one - z + a * z / 4.0)
    }

    #[test]
    fn integral_matches_closed_form() {
        for k in [0.02, 0.3, 1.0, 2.5, 7.0, 18.0] {
            let q = continuum_integral(k).unwrap();
            let c = closed_form(k);
            assert!((q - c).norm() < 1e-9 * c.norm(), "k={k}: {q} {c}");
        }
    }

    #[test]
    fn matches_photoionization_oscillator_density() {
        // |R_k|^2 = (3/2) k (df/dE) / E_k with the textbook bound-free density
        for k in [0.1f64, 0.5, 1.0, 2.0, 5.0] {
            let eta = 1.0 / k;
            let dfde = 256.0 / 3.0 * (1.0 / (1.0 + k * k)).powi(4) * (-4.0 * eta * k.atan()).exp()
                / -(-2.0 * PI * eta).exp_m1();
            let oracle = (1.5 * k * dfde / ((1.0 + k * k) / 2.0)).sqrt();
            let r = continuum_radial(k).unwrap();
            assert!((r / oracle - 1.0).abs() < 1e-8, "k={k}: {r} {oracle}");
        }
    }

    #[test]
    fn threshold_joins_rydberg_series() {
        // R_k^2 / k tends to lim n^3 R_n^2 = 256 e^-4, approached as 1 - 11 k^2/3
        let limit = 256.0 * (-4f64).exp();
        let nlarge = discrete_radial(2000).unwrap().powi(2) * 2000f64.powi(3);
        assert!((nlarge / limit - 1.0).abs() < 1e-5);
        for k in [1e-2f64, 1e-3] {
            let r = continuum_radial(k).unwrap();
            assert!((r * r / k / limit - 1.0).abs() < 5.0 * k * k + 1e-8, "k={k}");
        }
        assert!(continuum_integral(0.0).is_err());
    }

    #[test]
    fn grid_nodes_cover_the_continuum() {
        let g = ContinuumGrid::get().unwrap();
        assert_eq!(g.k.len(), 160);
        let total: f64 = g.weights.iter().sum();
        assert!((total - g.k_max).abs() < 1e-12);
        assert!(g.radial_sq.iter().all(|&r| r > 0.0 && r.is_finite()));
    }
}
