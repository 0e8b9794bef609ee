//! Electric dipole elements between ground sub-levels and L = 1 levels.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::angular::{clebsch_gordan, triangle, wigner_6j, HalfInteger};
use crate::atom::{HyperfineState, Isotope};
use crate::constants::{BOHR_RADIUS, E_CHARGE};
use crate::dipole::magnetic::VectorElement;
use crate::dipole::radial::{continuum_radial, discrete_radial};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Shell {
    Bound(u32),
    /// Continuum wavenumber in units of 1/a0.
    Continuum(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExcitedLevel {
    pub shell: Shell,
    pub l: u32,
    pub j: HalfInteger,
    pub f: HalfInteger,
    pub m: HalfInteger,
}

/// <n 1 J_b; F_b M_b| C^1_q |1 0 1/2; F_a M_a>, which is nonzero only for
/// M_b = M_a + q.
pub fn angular_dipole_factor(
    iso: &Isotope,
    fa: HalfInteger,
    ma: HalfInteger,
    jb: HalfInteger,
    fb: HalfInteger,
    mb: HalfInteger,
    q: i32,
) -> f64 {
    let one = HalfInteger::ONE;
    let half = HalfInteger::HALF;
    let i = iso.spin;
    if mb != ma + HalfInteger::integer(q) || !triangle(one, half, jb) || !triangle(jb, i, fb) {
        return 0.0;
    }
    let phase_twice = 3 + i.twice() + fb.twice();
    debug_assert!(phase_twice % 2 == 0);
    let phase = if (phase_twice / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let six = wigner_6j(one, half, jb, i, fb, fa);
    let cg = clebsch_gordan(one, HalfInteger::integer(q), fa, ma, fb, mb);
    ((jb.twice() + 1) as f64 * (fa.twice() + 1) as f64 / 3.0).sqrt() * phase * six * cg
}

/// <b| x_i / r |a> assembled from the spherical components
/// x/r = (C_-1 - C_1)/sqrt2, y/r = i (C_-1 + C_1)/sqrt2, z/r = C_0.
pub fn cartesian_angular(iso: &Isotope, a: &HyperfineState, jb: HalfInteger, fb: HalfInteger, mb: HalfInteger) -> VectorElement {
    let c = |q| angular_dipole_factor(iso, a.f, a.m, jb, fb, mb, q);
    let (cm, c0, cp) = (c(-1), c(0), c(1));
    [
        Complex64::new(FRAC_1_SQRT_2 * (cm - cp), 0.0),
        Complex64::new(0.0, FRAC_1_SQRT_2 * (cm + cp)),
        Complex64::new(c0, 0.0),
    ]
}

/// d^{ab} = <a| d |b> in statC cm, for a ground sub-level a and an excited
/// level b. Zero unless L_b = 1.
pub fn electric_dipole_element(iso: &Isotope, a: &HyperfineState, b: &ExcitedLevel) -> Result<VectorElement> {
    if b.l != 1 {
        return Ok([Complex64::new(0.0, 0.0); 3]);
    }
    let radial = match b.shell {
        Shell::Bound(n) => discrete_radial(n)?,
        Shell::Continuum(k) => continuum_radial(k)?,
    };
    let ang = cartesian_angular(iso, a, b.j, b.f, b.m);
    Ok(ang.map(|z| -E_CHARGE * BOHR_RADIUS * radial * z.conj()))
}

/// Per-axis angular weights sum_{M_b} |<b| x_i/r |a>|^2 for each (J_b, F_b)
/// of the L = 1 shell. Summed over the shell they give 1/3 per axis.
pub fn shell_weights(iso: &Isotope, a: &HyperfineState) -> Vec<(HalfInteger, HalfInteger, [f64; 3])> {
    let mut out = Vec::new();
    for jb in [HalfInteger::HALF, HalfInteger::from_twice(3)] {
        let lo = (jb - iso.spin).abs();
        let mut fb = lo;
        while fb <= jb + iso.spin {
            let mut w = [0.0; 3];
            for mb in fb.projections() {
                let v = cartesian_angular(iso, a, jb, fb, mb);
                for k in 0..3 {
                    w[k] += v[k].norm_sqr();
                }
            }
            out.push((jb, fb, w));
            fb = fb + HalfInteger::ONE;
        }
    }
    out
}
