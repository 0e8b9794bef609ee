//! Scattering Green tensors at the atom's position inside a planar cavity,
//! on the real frequency axis and at imaginary frequencies.
//!
//! The k_par integral is written in the vacuum normal wavevector: on the
//! propagating branch u = k_x runs over [0, omega/c], on the evanescent
//! branch k_x = i kappa with kappa over [0, inf).

use std::cell::RefCell;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::constants::C;
use crate::error::{invalid, Error, Result};
use crate::mirror::{Polarization, Reflection, Reflector, Scalar};
use crate::quadrature::{integrate_breaks, QuadSpec};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Evanescent breakpoints in units of 1/min(x, a - x). Beyond the last one
/// the slowest exponential is below e^-120.
pub const EVANESCENT_BREAKS: [f64; 8] = [0.0, 1e-3, 1e-2, 0.1, 1.0, 5.0, 20.0, 60.0];

/// Frequency used for the n = 0 Matsubara term, where every model
/// permittivity is already at its static limit.
pub const STATIC_XI: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Electric,
    Magnetic,
}

#[derive(Clone)]
pub struct CavityGeometry {
    /// Width, cm.
    pub a: f64,
    /// Distance from mirror1, cm.
    pub x: f64,
    pub mirror1: Arc<dyn Reflector>,
    pub mirror2: Arc<dyn Reflector>,
    /// Kelvin, passed to the mirror materials.
    pub t: f64,
}

impl fmt::Debug for CavityGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CavityGeometry {{ a: {:e}, x: {:e}, mirror1: {}, mirror2: {}, t: {} }}",
            self.a,
            self.x,
            self.mirror1.label(),
            self.mirror2.label(),
            self.t
        )
    }
}

impl CavityGeometry {
    pub fn new(a: f64, x: f64, mirror1: Arc<dyn Reflector>, mirror2: Arc<dyn Reflector>, t: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return invalid(format!("cavity width must be positive, got {a}"));
        }
        if !(x > 0.0 && x < a) {
            return invalid(format!("atom position x = {x} cm must lie strictly inside (0, {a})"));
        }
        if !(t > 0.0 && t.is_finite()) {
            return invalid(format!("temperature must be positive, got {t}"));
        }
        Ok(CavityGeometry { a, x, mirror1, mirror2, t })
    }

    /// Identical mirrors on both sides.
    pub fn symmetric(a: f64, x: f64, mirror: Arc<dyn Reflector>, t: f64) -> Result<Self> {
        Self::new(a, x, mirror.clone(), mirror, t)
    }

    /// Same physical cavity seen from the other mirror.
    pub fn swapped(&self) -> Self {
        CavityGeometry {
            a: self.a,
            x: self.a - self.x,
            mirror1: self.mirror2.clone(),
            mirror2: self.mirror1.clone(),
            t: self.t,
        }
    }

    pub fn at(&self, x: f64) -> Result<Self> {
        Self::new(self.a, x, self.mirror1.clone(), self.mirror2.clone(), self.t)
    }

    pub fn min_distance(&self) -> f64 {
        self.x.min(self.a - self.x)
    }

    pub fn is_transparent(&self) -> bool {
        self.mirror1.is_transparent() && self.mirror2.is_transparent()
    }
}

/// Diagonal scattering components at coincidence, 1/cm^3. yy = zz.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GreenDiag {
    pub e_xx: Complex64,
    pub e_yy: Complex64,
    pub h_xx: Complex64,
    pub h_yy: Complex64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ImagGreenDiag {
    pub e_xx: f64,
    pub e_yy: f64,
    pub h_xx: f64,
    pub h_yy: f64,
}

impl ImagGreenDiag {
    pub fn get(&self, field: Field) -> (f64, f64) {
        match field {
            Field::Electric => (self.e_xx, self.e_yy),
            Field::Magnetic => (self.h_xx, self.h_yy),
        }
    }
}

impl GreenDiag {
    pub fn get(&self, field: Field) -> (Complex64, Complex64) {
        match field {
            Field::Electric => (self.e_xx, self.e_yy),
            Field::Magnetic => (self.h_xx, self.h_yy),
        }
    }
}

/// Im G^(0)_ii = 2 omega^3 / (3 c^3), same for E and H.
pub fn free_space_im_diag(omega: f64) -> f64 {
    2.0 * omega.powi(3) / (3.0 * C.powi(3))
}

pub fn real_axis_spec() -> QuadSpec {
    QuadSpec {
        rel_tol: 1e-9,
        component_floor: 1e-6,
        ..Default::default()
    }
}

pub fn imag_axis_spec() -> QuadSpec {
    QuadSpec {
        rel_tol: 1e-10,
        component_floor: 1e-6,
        ..Default::default()
    }
}

// components far below the perfect-mirror scale 1/L^3 need no relative
// accuracy of their own
fn geometric_floor(spec: &QuadSpec, l: f64) -> QuadSpec {
    QuadSpec {
        abs_tol: spec.abs_tol.max(spec.rel_tol * spec.component_floor / l.powi(3)),
        ..*spec
    }
}

// (s, p) for each mirror, with the magnetic swap applied
fn channel<T: Copy>(field: Field, s: T, p: T) -> (T, T) {
    match field {
        Field::Electric => (s, p),
        Field::Magnetic => (p, s),
    }
}

/// The k_par integrand bracket written out directly, before the measure:
/// (xx, yy). Kept as the reference for the rearranged form.
#[cfg(test)]
#[allow(clippy::too_many_arguments)]
fn bracket<T: Scalar>(q0sq: T, kz2: T, kpar2: T, r1: (T, T), r2: (T, T), e2a: T, ex: T, eax: T) -> (T, T) {
    let one = T::from(1.0);
    let half = T::from(0.5);
    let (s1, p1) = r1;
    let (s2, p2) = r2;
    let a_s = one - s1 * s2 * e2a;
    let a_p = one - p1 * p2 * e2a;
    let single_s = half * (s1 * ex + s2 * eax);
    let single_p = half * (p1 * ex + p2 * eax);
    let yy = (kz2 * p1 * p2 / a_p + q0sq * s1 * s2 / a_s) * e2a + (q0sq * single_s / a_s - kz2 * single_p / a_p);
    let xx = kpar2 * (p1 * p2 / a_p * e2a + single_p / a_p);
    (xx, yy)
}

/// e^{2 i k_x d} for d = a, x, a - x, each with e^{..} - 1 alongside.
#[derive(Clone, Copy)]
struct Phases<T> {
    e2a: T,
    ex: T,
    eax: T,
    m2a: T,
    mx: T,
    max: T,
}

fn expm1_complex(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        let mut term = z;
        let mut sum = z;
        for k in 2..12 {
            term = term * z / k as f64;
            sum += term;
        }
        sum
    } else {
        z.exp() - 1.0
    }
}

impl Phases<Complex64> {
    fn real_axis(kz: Complex64, a: f64, x: f64) -> Self {
        let arg = |d: f64| 2.0 * I * kz * d;
        let (za, zx, zax) = (arg(a), arg(x), arg(a - x));
        Phases {
            e2a: za.exp(),
            ex: zx.exp(),
            eax: zax.exp(),
            m2a: expm1_complex(za),
            mx: expm1_complex(zx),
            max: expm1_complex(zax),
        }
    }
}

impl Phases<f64> {
    fn imag_axis(kappa: f64, a: f64, x: f64) -> Self {
        let (za, zx, zax) = (-2.0 * kappa * a, -2.0 * kappa * x, -2.0 * kappa * (a - x));
        Phases {
            e2a: za.exp(),
            ex: zx.exp(),
            eax: zax.exp(),
            m2a: za.exp_m1(),
            mx: zx.exp_m1(),
            max: zax.exp_m1(),
        }
    }
}

/// One polarization channel: (R1 R2 e2a + S) / A and (R1 R2 e2a - S) / A,
/// with S = (R1 e^{2ik_x x} + R2 e^{2ik_x (a-x)}) / 2 and A = 1 - R1 R2 e2a.
///
/// When both mirrors sit near r = -1 (grazing incidence) or near r = +1
/// (static limit of a good conductor), A is built from the complements
/// 1 -+ r so that it keeps its relative accuracy as it goes to zero.
fn channel_terms<T: Scalar>(r1: Reflection<T>, r2: Reflection<T>, ph: &Phases<T>) -> (T, T) {
    let one = T::from(1.0);
    let two = T::from(2.0);
    let half = T::from(0.5);
    let near = |v: T| v.modulus() < 0.5;
    let short = ph.m2a.modulus() < 0.5;
    let complement = |d1: T, d2: T| {
        // R = -1 + d (or 1 - d): A = -(e2a - 1) + e2a (d1 + d2 - d1 d2),
        // and 1 + R e (or 1 - R e) = -(e - 1) + d e
        let a = -ph.m2a + ph.e2a * (d1 + d2 - d1 * d2);
        (a, half * ((-ph.mx + d1 * ph.ex) + (-ph.max + d2 * ph.eax)))
    };
    if short && near(r1.plus) && near(r2.plus) {
        let (a, one_plus_s) = complement(r1.plus, r2.plus);
        // R1 R2 e2a = 1 - A
        ((one_plus_s - a) / a, (two - one_plus_s - a) / a)
    } else if short && near(r1.minus) && near(r2.minus) {
        let (a, one_minus_s) = complement(r1.minus, r2.minus);
        ((two - one_minus_s - a) / a, (one_minus_s - a) / a)
    } else {
        let round = r1.r * r2.r * ph.e2a;
        let single = half * (r1.r * ph.ex + r2.r * ph.eax);
        let a = one - round;
        ((round + single) / a, (round - single) / a)
    }
}

/// (xx, yy) from both channels: yy = q0^2 N_s/A_s + k_x^2 M_p/A_p and
/// xx = k_par^2 N_p/A_p.
fn combine<T: Scalar>(q0sq: T, kz2: T, kpar2: T, s: (T, T), p: (T, T)) -> (T, T) {
    (kpar2 * p.0, q0sq * s.0 + kz2 * p.1)
}

// first error raised inside an integrand
struct Trap(RefCell<Option<Error>>);

impl Trap {
    fn new() -> Self {
        Trap(RefCell::new(None))
    }

    fn catch<T>(&self, r: Result<T>, fallback: T) -> T {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.0.borrow_mut().get_or_insert(e);
                fallback
            }
        }
    }

    fn check(self) -> Result<()> {
        match self.0.into_inner() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

type Channels<T> = (Reflection<T>, Reflection<T>);

fn pair(m: &dyn Reflector, field: Field, omega: Complex64, kz: Complex64, t: f64) -> Result<Channels<Complex64>> {
    let s = m.reflection_full(Polarization::S, omega, kz, t)?;
    let p = m.reflection_full(Polarization::P, omega, kz, t)?;
    Ok(channel(field, s, p))
}

fn pair_imag(m: &dyn Reflector, field: Field, xi: f64, kappa: f64, t: f64) -> Result<Channels<f64>> {
    let s = m.reflection_imag_full(Polarization::S, xi, kappa, t)?;
    let p = m.reflection_imag_full(Polarization::P, xi, kappa, t)?;
    Ok(channel(field, s, p))
}

/// (xx, yy) of the electric or magnetic scattering tensor at real omega.
pub fn cavity_scatter(field: Field, omega: f64, geom: &CavityGeometry, spec: &QuadSpec) -> Result<(Complex64, Complex64)> {
    if !(omega > 0.0 && omega.is_finite()) {
        return invalid(format!("real frequency must be positive, got {omega}"));
    }
    let zero = Complex64::new(0.0, 0.0);
    if geom.is_transparent() {
        return Ok((zero, zero));
    }
    let (a, x, t) = (geom.a, geom.x, geom.t);
    let q0 = omega / C;
    let q0sq = Complex64::new(q0 * q0, 0.0);
    let w = Complex64::new(omega, 0.0);
    let trap = Trap::new();

    let eval = |kz: Complex64, kpar2: Complex64| -> (Complex64, Complex64) {
        let blank = Reflection::from_r(zero);
        let (s1, p1) = trap.catch(pair(geom.mirror1.as_ref(), field, w, kz, t), (blank, blank));
        let (s2, p2) = trap.catch(pair(geom.mirror2.as_ref(), field, w, kz, t), (blank, blank));
        let ph = Phases::real_axis(kz, a, x);
        combine(q0sq, kz * kz, kpar2, channel_terms(s1, s2, &ph), channel_terms(p1, p2, &ph))
    };
    let pack = |xx: Complex64, yy: Complex64| [xx.re, xx.im, yy.re, yy.im];

    // one variable for both branches: t in [-q0, 0] is propagating with
    // u = -t and k dk / k_x = du; t >= 0 is evanescent with kappa = t and
    // k dk / k_x = -i dkappa, so the prefactor 2i becomes 2
    let l = geom.min_distance();
    let mut breaks = vec![-q0, -0.5 * q0];
    breaks.extend(EVANESCENT_BREAKS.iter().map(|b| b / l));
    let est = integrate_breaks(
        |t| {
            if t < 0.0 {
                let kz = Complex64::new(-t, 0.0);
                let (xx, yy) = eval(kz, Complex64::new((q0 * q0 - t * t).max(0.0), 0.0));
                pack(2.0 * I * xx, 2.0 * I * yy)
            } else {
                let kz = Complex64::new(0.0, t);
                let (xx, yy) = eval(kz, Complex64::new(q0 * q0 + t * t, 0.0));
                pack(2.0 * xx, 2.0 * yy)
            }
        },
        &breaks,
        &geometric_floor(spec, l),
    )?;
    trap.check()?;
    let v = est.value;
    Ok((Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3])))
}

/// (xx, yy) of the scattering tensor at omega = i xi. Real.
pub fn cavity_scatter_imag(field: Field, xi: f64, geom: &CavityGeometry, spec: &QuadSpec) -> Result<(f64, f64)> {
    if !(xi >= 0.0 && xi.is_finite()) {
        return invalid(format!("imaginary frequency must be non-negative, got {xi}"));
    }
    if geom.is_transparent() {
        return Ok((0.0, 0.0));
    }
    let xi = xi.max(STATIC_XI);
    let (a, x, t) = (geom.a, geom.x, geom.t);
    let q = xi / C;
    let trap = Trap::new();
    let f = |kappa: f64| {
        let blank = Reflection::from_r(0.0);
        let (s1, p1) = trap.catch(pair_imag(geom.mirror1.as_ref(), field, xi, kappa, t), (blank, blank));
        let (s2, p2) = trap.catch(pair_imag(geom.mirror2.as_ref(), field, xi, kappa, t), (blank, blank));
        let ph = Phases::imag_axis(kappa, a, x);
        // q0^2 = -q^2, k_x^2 = -kappa^2, k_par^2 = kappa^2 - q^2
        let (xx, yy) = combine(-q * q, -kappa * kappa, kappa * kappa - q * q, channel_terms(s1, s2, &ph), channel_terms(p1, p2, &ph));
        [2.0 * xx, 2.0 * yy]
    };
    let l = geom.min_distance();
    let breaks: Vec<f64> = EVANESCENT_BREAKS.iter().map(|b| q + b / l).collect();
    let est = integrate_breaks(f, &breaks, &geometric_floor(spec, l))?;
    trap.check()?;
    Ok((est.value[0], est.value[1]))
}

pub fn cavity_scatter_e_diag(omega: f64, geom: &CavityGeometry) -> Result<(Complex64, Complex64)> {
    cavity_scatter(Field::Electric, omega, geom, &real_axis_spec())
}

pub fn cavity_scatter_h_diag(omega: f64, geom: &CavityGeometry) -> Result<(Complex64, Complex64)> {
    cavity_scatter(Field::Magnetic, omega, geom, &real_axis_spec())
}

pub fn cavity_scatter_diag(omega: f64, geom: &CavityGeometry) -> Result<GreenDiag> {
    let (e_xx, e_yy) = cavity_scatter_e_diag(omega, geom)?;
    let (h_xx, h_yy) = cavity_scatter_h_diag(omega, geom)?;
    Ok(GreenDiag { e_xx, e_yy, h_xx, h_yy })
}

pub fn cavity_scatter_diag_imagfreq(xi: f64, geom: &CavityGeometry) -> Result<ImagGreenDiag> {
    let spec = imag_axis_spec();
    let (e_xx, e_yy) = cavity_scatter_imag(Field::Electric, xi, geom, &spec)?;
    let (h_xx, h_yy) = cavity_scatter_imag(Field::Magnetic, xi, geom, &spec)?;
    Ok(ImagGreenDiag { e_xx, e_yy, h_xx, h_yy })
}
