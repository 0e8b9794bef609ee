//! Physical constants in Gaussian units (CODATA 2018).

pub const HBAR: f64 = 1.054_571_817e-27;
pub const H_PLANCK: f64 = 2.0 * std::f64::consts::PI * HBAR;
pub const C: f64 = 2.997_924_58e10;
pub const K_B: f64 = 1.380_649e-16;
pub const E_CHARGE: f64 = 4.803_204_712_570_263e-10;
pub const M_E: f64 = 9.109_383_701_5e-28;
pub const M_P: f64 = 1.672_621_923_69e-24;
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-9;
pub const BOHR_MAGNETON: f64 = 9.274_010_078_3e-21;
pub const NUCLEAR_MAGNETON: f64 = 5.050_783_746_1e-24;
pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;
pub const EV: f64 = 1.602_176_634e-12;

/// Rydberg energy e^2 / (2 a0).
pub const RYDBERG: f64 = E_CHARGE * E_CHARGE / (2.0 * BOHR_RADIUS);

pub const MICRON: f64 = 1e-4;
pub const NANOMETER: f64 = 1e-7;

/// Frequency in rad/s of an energy given in eV.
pub fn ev_to_rad_s(ev: f64) -> f64 {
    ev * EV / HBAR
}

pub fn kelvin_to_erg(t: f64) -> f64 {
    K_B * t
}
