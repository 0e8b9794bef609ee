//! Planar mirrors: Fresnel coefficients, layered stacks on a substrate and
//! the idealised limits, all behind the `Reflector` trait.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::constants::C;
use crate::error::{invalid, Result};
use crate::material::{Material, MaterialRegistry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarization {
    S,
    P,
}

impl Polarization {
    pub fn other(self) -> Self {
        match self {
            Polarization::S => Polarization::P,
            Polarization::P => Polarization::S,
        }
    }
}

/// Square root on the branch Im >= 0.
pub fn kx_branch(z: Complex64) -> Complex64 {
    let r = z.sqrt();
    if r.im < 0.0 || (r.im == 0.0 && r.re < 0.0) {
        -r
    } else {
        r
    }
}

/// Normal wavevector sqrt(eps omega^2/c^2 - k_par^2).
pub fn normal_wavevector(eps: Complex64, omega: Complex64, k_par: Complex64) -> Complex64 {
    kx_branch(eps * omega * omega / (C * C) - k_par * k_par)
}

/// Arithmetic shared by the real- and imaginary-axis evaluations.
pub trait Scalar:
    Copy
    + fmt::Debug
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
    + From<f64>
{
    fn modulus(self) -> f64;
}

impl Scalar for f64 {
    fn modulus(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    fn modulus(self) -> f64 {
        self.norm()
    }
}

/// A reflection coefficient together with 1 + r and 1 - r, each kept to
/// full relative accuracy. Near grazing incidence or for a near-perfect
/// conductor r approaches -1 or +1 and the complements carry the physics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reflection<T> {
    pub r: T,
    pub plus: T,
    pub minus: T,
}

impl<T: Scalar> Reflection<T> {
    pub fn from_r(r: T) -> Self {
        let one = T::from(1.0);
        Reflection { r, plus: one + r, minus: one - r }
    }
}

/// Interface from medium a into medium b, normal wavevectors on the
/// Im >= 0 branch (or decay constants on the imaginary axis).
pub fn interface<T: Scalar>(pol: Polarization, eps_a: T, eps_b: T, ka: T, kb: T) -> Reflection<T> {
    let two = T::from(2.0);
    let (num_a, num_b) = match pol {
        Polarization::S => (ka, kb),
        Polarization::P => (eps_b * ka, eps_a * kb),
    };
    let den = num_a + num_b;
    Reflection {
        r: (num_a - num_b) / den,
        plus: two * num_a / den,
        minus: two * num_b / den,
    }
}

pub fn fresnel_from_k(pol: Polarization, eps_a: Complex64, eps_b: Complex64, ka: Complex64, kb: Complex64) -> Complex64 {
    interface(pol, eps_a, eps_b, ka, kb).r
}

pub fn fresnel_interface(pol: Polarization, eps_a: Complex64, eps_b: Complex64, omega: Complex64, k_par: Complex64) -> Complex64 {
    let ka = normal_wavevector(eps_a, omega, k_par);
    let kb = normal_wavevector(eps_b, omega, k_par);
    fresnel_from_k(pol, eps_a, eps_b, ka, kb)
}

/// Recursion through (eps, k, thickness) from the vacuum side down to the
/// substrate; `phase(k, w)` is the round-trip factor of a layer.
fn stack<T: Scalar>(pol: Polarization, media: &[(T, T, f64)], phase: impl Fn(T, f64) -> T) -> Reflection<T> {
    let one = T::from(1.0);
    let n = media.len();
    let (ea, ka, _) = media[n - 2];
    let (eb, kb, _) = media[n - 1];
    let mut r = interface(pol, ea, eb, ka, kb);
    for j in (0..n - 2).rev() {
        let (ea, ka, _) = media[j];
        let (eb, kb, wb) = media[j + 1];
        let top = interface(pol, ea, eb, ka, kb);
        let e = phase(kb, wb);
        let den = one + e * top.r * r.r;
        // 1 +- R = (1 +- r_top)(1 +- e R_below) / den
        r = Reflection {
            r: (top.r + e * r.r) / den,
            plus: top.plus * (one + e * r.r) / den,
            minus: top.minus * (one - e * r.r) / den,
        };
    }
    r
}

pub trait Reflector: Send + Sync + fmt::Debug {
    fn label(&self) -> String;

    /// R seen from vacuum at complex frequency omega, for a wave whose
    /// vacuum normal wavevector is `kz` (Im kz >= 0).
    fn reflection_full(&self, pol: Polarization, omega: Complex64, kz: Complex64, t: f64) -> Result<Reflection<Complex64>>;

    /// R at omega = i xi with vacuum decay constant kappa >= xi/c. Real.
    fn reflection_imag_full(&self, pol: Polarization, xi: f64, kappa: f64, t: f64) -> Result<Reflection<f64>>;

    fn reflection(&self, pol: Polarization, omega: Complex64, kz: Complex64, t: f64) -> Result<Complex64> {
        Ok(self.reflection_full(pol, omega, kz, t)?.r)
    }

    fn reflection_imag(&self, pol: Polarization, xi: f64, kappa: f64, t: f64) -> Result<f64> {
        Ok(self.reflection_imag_full(pol, xi, kappa, t)?.r)
    }

    /// Both polarizations at once, (R_s, R_p).
    fn reflection_pair(&self, omega: Complex64, kz: Complex64, t: f64) -> Result<(Complex64, Complex64)> {
        Ok((
            self.reflection(Polarization::S, omega, kz, t)?,
            self.reflection(Polarization::P, omega, kz, t)?,
        ))
    }

    fn reflection_pair_imag(&self, xi: f64, kappa: f64, t: f64) -> Result<(f64, f64)> {
        Ok((
            self.reflection_imag(Polarization::S, xi, kappa, t)?,
            self.reflection_imag(Polarization::P, xi, kappa, t)?,
        ))
    }

    /// Whether the mirror reflects nothing, so cavity terms vanish.
    fn is_transparent(&self) -> bool {
        false
    }
}

/// Layers (material, thickness in cm) from the vacuum side, on a
/// semi-infinite substrate.
#[derive(Clone, Debug)]
pub struct MirrorStack {
    pub layers: Vec<(Arc<dyn Material>, f64)>,
    pub substrate: Arc<dyn Material>,
}

impl MirrorStack {
    pub fn new(layers: Vec<(Arc<dyn Material>, f64)>, substrate: Arc<dyn Material>) -> Result<Self> {
        for (m, w) in &layers {
            if !(*w > 0.0) {
                return invalid(format!("layer of {} must have positive thickness, got {w}", m.name()));
            }
        }
        Ok(MirrorStack { layers, substrate })
    }

    pub fn single(metal: Arc<dyn Material>, thickness: f64, substrate: Arc<dyn Material>) -> Result<Self> {
        Self::new(vec![(metal, thickness)], substrate)
    }
}

impl Reflector for MirrorStack {
    fn label(&self) -> String {
        let mut s = String::new();
        for (m, w) in &self.layers {
            s.push_str(&format!("{}({:.3} um)/", m.name(), w * 1e4));
        }
        s.push_str(self.substrate.name());
        s
    }

    fn reflection_full(&self, pol: Polarization, omega: Complex64, kz: Complex64, t: f64) -> Result<Reflection<Complex64>> {
        let q2 = omega * omega / (C * C);
        // eps_m omega^2/c^2 - k_par^2 = (eps_m - 1) omega^2/c^2 + kz^2
        let wave = |eps: Complex64| kx_branch((eps - 1.0) * q2 + kz * kz);
        let mut media = vec![(Complex64::new(1.0, 0.0), kz, 0.0)];
        for (m, w) in &self.layers {
            let e = m.permittivity(omega, t)?;
            media.push((e, wave(e), *w));
        }
        let es = self.substrate.permittivity(omega, t)?;
        media.push((es, wave(es), 0.0));
        Ok(stack(pol, &media, |k, w| (Complex64::new(0.0, 2.0 * w) * k).exp()))
    }

    fn reflection_imag_full(&self, pol: Polarization, xi: f64, kappa: f64, t: f64) -> Result<Reflection<f64>> {
        // with k = i kappa the Fresnel forms keep their shape
        let q2 = xi * xi / (C * C);
        let decay = |eps: f64| (kappa * kappa + (eps - 1.0) * q2).sqrt();
        let mut media = vec![(1.0, kappa, 0.0)];
        for (m, w) in &self.layers {
            let e = m.permittivity_imag(xi, t)?;
            media.push((e, decay(e), *w));
        }
        let es = self.substrate.permittivity_imag(xi, t)?;
        media.push((es, decay(es), 0.0));
        Ok(stack(pol, &media, |k, w| (-2.0 * w * k).exp()))
    }
}

/// Perfect conductor, r_s = -1 and r_p = +1.
#[derive(Clone, Copy, Debug)]
pub struct IdealMirror;

impl IdealMirror {
    fn value(pol: Polarization) -> f64 {
        if pol == Polarization::S {
            -1.0
        } else {
            1.0
        }
    }
}

impl Reflector for IdealMirror {
    fn label(&self) -> String {
        "perfect".into()
    }

    fn reflection_full(&self, pol: Polarization, _omega: Complex64, _kz: Complex64, _t: f64) -> Result<Reflection<Complex64>> {
        Ok(Reflection::from_r(Complex64::new(Self::value(pol), 0.0)))
    }

    fn reflection_imag_full(&self, pol: Polarization, _xi: f64, _kappa: f64, _t: f64) -> Result<Reflection<f64>> {
        Ok(Reflection::from_r(Self::value(pol)))
    }
}

/// A mirror that reflects nothing.
#[derive(Clone, Copy, Debug)]
pub struct Transparent;

impl Reflector for Transparent {
    fn label(&self) -> String {
        "none".into()
    }

    fn reflection_full(&self, _pol: Polarization, _omega: Complex64, _kz: Complex64, _t: f64) -> Result<Reflection<Complex64>> {
        Ok(Reflection::from_r(Complex64::new(0.0, 0.0)))
    }

    fn reflection_imag_full(&self, _pol: Polarization, _xi: f64, _kappa: f64, _t: f64) -> Result<Reflection<f64>> {
        Ok(Reflection::from_r(0.0))
    }

    fn is_transparent(&self) -> bool {
        true
    }
}

/// Builds a mirror by name: `perfect`, `none`, or a registered metal as a
/// layer of `thickness` cm on `substrate`.
pub fn build_mirror(
    registry: &MaterialRegistry,
    name: &str,
    rrr: f64,
    thickness: f64,
    substrate: &str,
) -> Result<Arc<dyn Reflector>> {
    match name {
        "perfect" => Ok(Arc::new(IdealMirror)),
        "none" => Ok(Arc::new(Transparent)),
        _ => {
            let metal = registry.metal(name, rrr)?;
            let sub = registry.get(substrate)?;
            Ok(Arc::new(MirrorStack::single(Arc::new(metal), thickness, sub)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::Isotope;
    use crate::material::{Drude, Oscillator};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn au() -> Arc<dyn Material> {
        Arc::new(MaterialRegistry::builtin().metal("Au", 10.0).unwrap())
    }

    fn si() -> Arc<dyn Material> {
        Arc::new(Oscillator::silicon())
    }

    #[test]
    fn interface_limits() {
        let w = c(1e10, 0.0);
        let e = c(3.0, 0.2);
        for k in [0.0, 0.1, 0.5] {
            let kp = c(k, 0.0);
            assert_eq!(fresnel_interface(Polarization::S, e, e, w, kp).norm(), 0.0);
            assert_eq!(fresnel_interface(Polarization::P, e, e, w, kp).norm(), 0.0);
            let big = c(1e30, 1e30);
            let rs = fresnel_interface(Polarization::S, c(1.0, 0.0), big, w, kp);
            let rp = fresnel_interface(Polarization::P, c(1.0, 0.0), big, w, kp);
            assert!((rs + 1.0).norm() < 1e-9 && (rp - 1.0).norm() < 1e-9);
        }
        // normal incidence, direct substitution into the Fresnel forms
        let (ea, eb) = (c(1.0, 0.0), c(4.0, 1.0));
        let (na, nb) = (ea.sqrt(), eb.sqrt());
        let rs = fresnel_interface(Polarization::S, ea, eb, w, c(0.0, 0.0));
        let rp = fresnel_interface(Polarization::P, ea, eb, w, c(0.0, 0.0));
        assert!((rs - (na - nb) / (na + nb)).norm() < 1e-14);
        assert!((rp + rs).norm() < 1e-14);
    }

    #[test]
    fn thick_and_thin_layer_limits() {
        let w = 2.0 * PI * Isotope::HYDROGEN.nu_hfs;
        let om = c(w, 0.0);
        let kz = c(0.6 * w / C, 0.0);
        for pol in [Polarization::S, Polarization::P] {
            let thick = MirrorStack::single(au(), 1.0, si()).unwrap();
            let bare = MirrorStack::new(vec![], au()).unwrap();
            let r1 = thick.reflection(pol, om, kz, 300.0).unwrap();
            let r2 = bare.reflection(pol, om, kz, 300.0).unwrap();
            assert!((r1 - r2).norm() < 1e-12);
            let thin = MirrorStack::single(au(), 1e-16, si()).unwrap();
            let sub = MirrorStack::new(vec![], si()).unwrap();
            let r3 = thin.reflection(pol, om, kz, 300.0).unwrap();
            let r4 = sub.reflection(pol, om, kz, 300.0).unwrap();
            assert!((r3 - r4).norm() < 1e-6, "{r3} {r4}");
        }
    }

    #[test]
    fn imaginary_axis_matches_complex_evaluation() {
        let m = MirrorStack::single(au(), 3e-5, si()).unwrap();
        let xi = 2.4e14;
        for f in [1.0, 1.7, 40.0] {
            let kappa = f * xi / C;
            for pol in [Polarization::S, Polarization::P] {
                let a = m.reflection_imag(pol, xi, kappa, 300.0).unwrap();
                let b = m.reflection(pol, c(0.0, xi), c(0.0, kappa), 300.0).unwrap();
                assert!((b.re - a).abs() < 1e-10 && b.im.abs() < 1e-10, "{a} {b}");
            }
        }
    }

    #[test]
    fn complements_keep_accuracy() {
        let m = MirrorStack::single(au(), 5e-4, si()).unwrap();
        let w = c(1e5, 0.0);
        for pol in [Polarization::S, Polarization::P] {
            // grazing: r -> -1 and 1 + r is linear in kz
            for u in [1e-18, 1e-22, 1e-26] {
                let kz = c(u, 0.0);
                let r = m.reflection_full(pol, w, kz, 300.0).unwrap();
                let r2 = m.reflection_full(pol, w, kz * 2.0, 300.0).unwrap();
                assert!((r.r + 1.0).norm() < 1e-6 && r.plus.norm() > 0.0);
                assert!((r2.plus / r.plus - 2.0).norm() < 1e-6, "{:?} {:?}", r.plus, r2.plus);
            }
            for kz in [c(1e-6, 0.0), c(0.0, 30.0)] {
                let r = m.reflection_full(pol, c(1e10, 0.0), kz, 300.0).unwrap();
                assert!((r.plus - (1.0 + r.r)).norm() < 1e-12 && (r.minus - (1.0 - r.r)).norm() < 1e-12);
            }
        }
        // static limit on the imaginary axis: r_p -> 1 with 1 - r_p ~ 1/eps
        let r = m.reflection_imag_full(Polarization::P, 1e-3, 1e4, 300.0).unwrap();
        let r2 = m.reflection_imag_full(Polarization::P, 2e-3, 1e4, 300.0).unwrap();
        assert!(r.minus > 0.0 && r.minus < 1e-17);
        assert!((r2.minus / r.minus - 2.0).abs() < 1e-6, "{} {}", r.minus, r2.minus);
    }

    #[test]
    fn builder_names() {
        let r = MaterialRegistry::builtin();
        assert!(build_mirror(&r, "perfect", 1.0, 1e-4, "Si").is_ok());
        assert!(build_mirror(&r, "none", 1.0, 1e-4, "Si").unwrap().is_transparent());
        assert!(build_mirror(&r, "Cu", 1.0, 1e-4, "Si").is_err());
        assert!(build_mirror(&r, "Au", 1.0, -1.0, "Si").is_err());
        assert!(build_mirror(&r, "Au", 1.0, 5e-4, "Si").unwrap().label().starts_with("Au"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn passive_for_propagating_waves(idx in 0usize..4, frac in 0.0f64..1.0, lw in -1.0f64..1.0, lnu in 8.0f64..12.0) {
            let metals = crate::material::builtin_metals();
            let d: Drude = metals[idx].clone().with_rrr(10.0);
            let nu = 10f64.powf(lnu);
            let thickness = d.skin_depth(nu, 300.0) * 10f64.powf(lw);
            let m = MirrorStack::single(Arc::new(d), thickness, si()).unwrap();
            let w = 2.0 * PI * nu;
            let kz = c(frac.max(1e-6) * w / C, 0.0);
            for pol in [Polarization::S, Polarization::P] {
                let r = m.reflection(pol, c(w, 0.0), kz, 300.0).unwrap();
                prop_assert!(r.norm() <= 1.0 + 1e-12, "{}", r.norm());
            }
        }
    }
}
