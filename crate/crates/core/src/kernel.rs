//! The thermal kernel
//!
//! F(y) = P ∫_0^∞ dx x^3/(e^x - 1) [1/(y + x) + 1/(y - x)]
//!
//! which carries the free-space thermal level shifts.

use std::f64::consts::PI;

use crate::error::Result;
use crate::quadrature::{pv_integrate, QuadSpec};

pub const SMALL_Y: f64 = 1e-3;
pub const LARGE_Y: f64 = 1e3;

fn planck(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x * x / x.exp_m1()
    }
}

pub fn small_y(y: f64) -> f64 {
    -PI * PI * y / 3.0
}

pub fn large_y(y: f64) -> f64 {
    let p2 = PI * PI;
    2.0 * p2 * p2 / (15.0 * y) + 16.0 * p2 * p2 * p2 / (63.0 * y * y * y)
}

/// Direct principal-value evaluation, valid for any y != 0.
pub fn thermal_kernel_direct(y: f64) -> Result<f64> {
    if y == 0.0 {
        return Ok(0.0);
    }
    let spec = QuadSpec::rel(1e-12);
    // 1/(y + x) + 1/(y - x) = 1/(x - (-y)) - 1/(x - y)
    let first = pv_integrate(planck, 0.0, f64::INFINITY, -y, &spec)?;
    let second = pv_integrate(planck, 0.0, f64::INFINITY, y, &spec)?;
    Ok(first - second)
}

/// F(y), switching to the leading asymptotic forms outside `[1e-3, 1e3]`.
pub fn thermal_kernel(y: f64) -> Result<f64> {
    let a = y.abs();
    if a < SMALL_Y {
        Ok(small_y(y))
    } else if a > LARGE_Y {
        Ok(large_y(a).copysign(y))
    } else {
        thermal_kernel_direct(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn matches_asymptotics_at_crossovers() {
        let lo = thermal_kernel_direct(SMALL_Y).unwrap();
        assert!((lo / small_y(SMALL_Y) - 1.0).abs() < 5e-3, "{lo}");
        let hi = thermal_kernel_direct(LARGE_Y).unwrap();
        assert!((hi / large_y(LARGE_Y) - 1.0).abs() < 5e-3, "{hi}");
    }

    #[test]
    fn smooth_across_crossovers() {
        for y in [SMALL_Y, LARGE_Y] {
            let inside = thermal_kernel(y * 0.999).unwrap();
            let outside = thermal_kernel(y * 1.001).unwrap();
            assert!((inside / outside - 1.0).abs() < 6e-3);
        }
    }

    #[test]
    fn brute_force_midrange() {
        // oracle: symmetric excision plus Richardson, independent of the folding
        let y = 2.3;
        let spec = QuadSpec::rel(1e-13);
        let regular = crate::quadrature::integrate(|x| planck(x) / (y + x), 0.0, 200.0, &spec).unwrap();
        let excised = |eps: f64| {
            let l = crate::quadrature::integrate(|x| planck(x) / (y - x), 0.0, y - eps, &spec).unwrap();
            let r = crate::quadrature::integrate(|x| planck(x) / (y - x), y + eps, 200.0, &spec).unwrap();
            l + r
        };
        let oracle = regular + 2.0 * excised(5e-5) - excised(1e-4);
        let v = thermal_kernel(y).unwrap();
        assert!((v - oracle).abs() < 1e-7 * v.abs(), "{v} {oracle}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn odd_in_y(ly in -4.0f64..4.0) {
            let y = 10f64.powf(ly);
            let p = thermal_kernel(y).unwrap();
            let m = thermal_kernel(-y).unwrap();
            prop_assert!((p + m).abs() <= 1e-10 * p.abs());
        }
    }
}
