//! Hydrogen isotopes: fine and hyperfine level energies, the ground-state
//! Zeeman manifold and the Breit-Rabi formula.

use std::fmt;

use crate::angular::{triangle, HalfInteger};
use crate::constants::{BOHR_MAGNETON, FINE_STRUCTURE, H_PLANCK, M_E, M_P, NUCLEAR_MAGNETON, RYDBERG};
use crate::error::{invalid, Error, Result};

/// Electron g-factor used throughout.
pub const G_J: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IsotopeName {
    H1,
    H2,
    H3,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Isotope {
    pub name: IsotopeName,
    pub spin: HalfInteger,
    /// Ground-state hyperfine splitting, Hz.
    pub nu_hfs: f64,
    pub g_i: f64,
    /// Electron to proton mass ratio entering mu_n and A_J.
    pub mass_ratio: f64,
}

impl Isotope {
    pub const HYDROGEN: Isotope = Isotope {
        name: IsotopeName::H1,
        spin: HalfInteger::HALF,
        nu_hfs: 1_420_405_751.768,
        g_i: 5.585_486,
        mass_ratio: M_E / M_P,
    };
    pub const DEUTERIUM: Isotope = Isotope {
        name: IsotopeName::H2,
        spin: HalfInteger::ONE,
        nu_hfs: 327_384_352.522,
        g_i: 0.857_407_3,
        mass_ratio: M_E / M_P,
    };
    pub const TRITIUM: Isotope = Isotope {
        name: IsotopeName::H3,
        spin: HalfInteger::HALF,
        nu_hfs: 1_516_701_470.773,
        g_i: 5.957_68,
        mass_ratio: M_E / M_P,
    };

    pub fn by_name(name: &str) -> Result<Isotope> {
        match name {
            "H" | "H1" | "1H" => Ok(Self::HYDROGEN),
            "D" | "H2" | "2H" => Ok(Self::DEUTERIUM),
            "T" | "H3" | "3H" => Ok(Self::TRITIUM),
            _ => Err(Error::Unknown {
                kind: "isotope",
                name: name.to_string(),
                known: "H, D, T".into(),
            }),
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self.name {
            IsotopeName::H1 => "H",
            IsotopeName::H2 => "D",
            IsotopeName::H3 => "T",
        }
    }

    pub fn i(&self) -> f64 {
        self.spin.value()
    }

    pub fn upper_f(&self) -> HalfInteger {
        self.spin + HalfInteger::HALF
    }

    pub fn lower_f(&self) -> HalfInteger {
        self.spin - HalfInteger::HALF
    }

    /// h nu_HFS in erg.
    pub fn hfs_energy(&self) -> f64 {
        H_PLANCK * self.nu_hfs
    }
}

/// Which zero-field level a Zeeman sub-level grows out of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Upper,
    Lower,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Upper => 1.0,
            Branch::Lower => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HyperfineState {
    pub f: HalfInteger,
    pub m: HalfInteger,
    pub branch: Branch,
}

impl HyperfineState {
    pub fn new(iso: &Isotope, f: HalfInteger, m: HalfInteger) -> Result<Self> {
        let branch = if f == iso.upper_f() {
            Branch::Upper
        } else if f == iso.lower_f() {
            Branch::Lower
        } else {
            return invalid(format!("F = {f} is not a ground level of {}", iso.symbol()));
        };
        if m.abs() > f || (f - m).twice() % 2 != 0 {
            return invalid(format!("M_F = {m} not allowed for F = {f}"));
        }
        Ok(HyperfineState { f, m, branch })
    }

    /// Parses labels like `1,0`, `(1,-1)` or `3/2,1/2`.
    pub fn parse(iso: &Isotope, label: &str) -> Result<Self> {
        let body = label.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = body.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return invalid(format!("state label `{label}` should read F,M"));
        }
        let f = parse_half(parts[0])?;
        let m = parse_half(parts[1])?;
        HyperfineState::new(iso, f, m)
    }
}

fn parse_half(s: &str) -> Result<HalfInteger> {
    let v = match s.split_once('/') {
        Some((num, "2")) => num
            .trim()
            .parse::<i32>()
            .map(HalfInteger::from_twice)
            .map_err(|_| Error::InvalidArgument(format!("bad quantum number `{s}`")))?,
        Some(_) => return invalid(format!("bad quantum number `{s}`")),
        None => {
            let x: f64 = s.parse().map_err(|_| Error::InvalidArgument(format!("bad quantum number `{s}`")))?;
            HalfInteger::from_f64(x)?
        }
    };
    Ok(v)
}

impl fmt::Display for HyperfineState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.f, self.m)
    }
}

/// E_J = -w0 [1/n^2 + (alpha^2/n^3)(1/(J+1/2) - 3/(4n))].
pub fn fine_structure_energy(n: u32, j: HalfInteger) -> f64 {
    let n = n as f64;
    let a2 = FINE_STRUCTURE * FINE_STRUCTURE;
    -RYDBERG * (1.0 / (n * n) + a2 / (n * n * n) * (1.0 / (j.value() + 0.5) - 0.75 / n))
}

/// K = F(F+1) - I(I+1) - J(J+1).
pub fn casimir_k(i: HalfInteger, j: HalfInteger, f: HalfInteger) -> f64 {
    let c = |x: HalfInteger| x.value() * (x.value() + 1.0);
    c(f) - c(i) - c(j)
}

/// Magnetic hyperfine constant in erg. The ground level uses the measured
/// splitting, excited shells the hydrogenic formula.
pub fn hyperfine_constant(iso: &Isotope, n: u32, l: u32, j: HalfInteger) -> f64 {
    if n == 1 && l == 0 {
        return iso.hfs_energy() / (iso.i() + 0.5);
    }
    let (jv, lv) = (j.value(), l as f64);
    let nf = n as f64;
    RYDBERG * iso.g_i * iso.mass_ratio * FINE_STRUCTURE * FINE_STRUCTURE / (nf * nf * nf) / (jv * (jv + 1.0) * (lv + 0.5))
}

/// Hyperfine shift A_J K / 2 of the level (n L J; F) relative to E_J.
/// The electric quadrupole term is not included (no B_J data for hydrogen).
pub fn hyperfine_offset(iso: &Isotope, n: u32, l: u32, j: HalfInteger, f: HalfInteger) -> Result<f64> {
    if n == 0 || l >= n {
        return invalid(format!("no level with n = {n}, L = {l}"));
    }
    let lh = HalfInteger::integer(l as i32);
    if !triangle(lh, HalfInteger::HALF, j) || !triangle(j, iso.spin, f) {
        return invalid(format!("inconsistent L = {l}, J = {j}, F = {f} for I = {}", iso.spin));
    }
    Ok(0.5 * hyperfine_constant(iso, n, l, j) * casimir_k(iso.spin, j, f))
}

/// E_F = E_J + A_J K / 2 in zero field.
pub fn zero_field_hyperfine_energy(iso: &Isotope, n: u32, l: u32, j: HalfInteger, f: HalfInteger) -> Result<f64> {
    Ok(fine_structure_energy(n, j) + hyperfine_offset(iso, n, l, j, f)?)
}

/// Effective g_F of a ground level from the Lande projection, with the
/// nuclear moment included. Energies are g_F mu_B B M_F.
pub fn g_factor(iso: &Isotope, f: HalfInteger) -> f64 {
    let ff = f.value() * (f.value() + 1.0);
    if ff == 0.0 {
        return 0.0;
    }
    let ii = iso.i() * (iso.i() + 1.0);
    let tau = (ff + 0.75 - ii) / (2.0 * ff);
    G_J * tau - iso.g_i * NUCLEAR_MAGNETON / BOHR_MAGNETON * (1.0 - tau)
}

pub fn weak_field_zeeman(iso: &Isotope, state: &HyperfineState, b: f64) -> f64 {
    g_factor(iso, state.f) * BOHR_MAGNETON * b * state.m.value()
}

/// The Breit-Rabi x parameter.
pub fn breit_rabi_x(iso: &Isotope, b: f64) -> f64 {
    (G_J * BOHR_MAGNETON + iso.g_i * NUCLEAR_MAGNETON) * b / iso.hfs_energy()
}

/// Ground-state energy in field `b` (gauss), measured from E_J of 1s.
pub fn breit_rabi_energy(iso: &Isotope, state: &HyperfineState, b: f64) -> f64 {
    let hv = iso.hfs_energy();
    let two_i1 = 2.0 * iso.i() + 1.0;
    let m = state.m.value();
    let x = breit_rabi_x(iso, b);
    let base = -hv / (2.0 * two_i1) - iso.g_i * NUCLEAR_MAGNETON * b * m;
    if state.m.abs() == iso.upper_f() {
        // stretched: the square root is exactly |1 +- x|, take it without the modulus
        base + 0.5 * hv * (1.0 + m.signum() * x)
    } else {
        base + state.branch.sign() * 0.5 * hv * (1.0 + 4.0 * m * x / two_i1 + x * x).sqrt()
    }
}

/// Transition frequency (Hz) of a -> a' in field `b`. Requires E_a > E_a'.
pub fn transition_frequency(iso: &Isotope, a: &HyperfineState, a2: &HyperfineState, b: f64) -> Result<f64> {
    let de = breit_rabi_energy(iso, a, b) - breit_rabi_energy(iso, a2, b);
    if a == a2 || de == 0.0 {
        return Err(Error::Degenerate(a.to_string(), a2.to_string()));
    }
    if de < 0.0 {
        return invalid(format!("{a} lies below {a2}; the upper state comes first"));
    }
    Ok(de / H_PLANCK)
}

/// All (F, M_F) of the ground manifold, upper level first, M_F ascending.
pub fn enumerate_ground_manifold(iso: &Isotope) -> Vec<HyperfineState> {
    let mut out = Vec::new();
    for f in [iso.upper_f(), iso.lower_f()] {
        let mut ms: Vec<_> = f.projections().collect();
        ms.reverse();
        for m in ms {
            out.push(HyperfineState::new(iso, f, m).expect("valid by construction"));
        }
    }
    out
}
