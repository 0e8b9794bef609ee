//! Angular momentum algebra: half-integers, Clebsch-Gordan coefficients and
//! Wigner 6j symbols. Racah sums are carried out in exact rational
//! arithmetic and only the final square root is taken in floating point.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A non-negative or negative multiple of 1/2, stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInteger(i32);

impl HalfInteger {
    pub const ZERO: HalfInteger = HalfInteger(0);
    pub const HALF: HalfInteger = HalfInteger(1);
    pub const ONE: HalfInteger = HalfInteger(2);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInteger(twice)
    }

    pub const fn integer(n: i32) -> Self {
        HalfInteger(2 * n)
    }

    pub fn from_f64(v: f64) -> Result<Self> {
        let t = 2.0 * v;
        if (t - t.round()).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("{v} is not a multiple of 1/2")));
        }
        Ok(HalfInteger(t.round() as i32))
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn abs(self) -> Self {
        HalfInteger(self.0.abs())
    }

    /// Projections `j, j-1, ..., -j`.
    pub fn projections(self) -> impl Iterator<Item = HalfInteger> {
        let j = self.0;
        (0..=j.max(-1)).map(move |k| HalfInteger(j - 2 * k))
    }
}

impl fmt::Debug for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Add for HalfInteger {
    type Output = HalfInteger;
    fn add(self, o: Self) -> Self {
        HalfInteger(self.0 + o.0)
    }
}

impl Sub for HalfInteger {
    type Output = HalfInteger;
    fn sub(self, o: Self) -> Self {
        HalfInteger(self.0 - o.0)
    }
}

impl Neg for HalfInteger {
    type Output = HalfInteger;
    fn neg(self) -> Self {
        HalfInteger(-self.0)
    }
}

impl From<i32> for HalfInteger {
    fn from(n: i32) -> Self {
        HalfInteger::integer(n)
    }
}

/// Triangle condition for three angular momenta, including integrality of
/// the perimeter.
pub fn triangle(a: HalfInteger, b: HalfInteger, c: HalfInteger) -> bool {
    let (a, b, c) = (a.0, b.0, c.0);
    a >= 0 && b >= 0 && c >= 0 && c <= a + b && c >= (a - b).abs() && (a + b + c) % 2 == 0
}

fn factorial(n: i32) -> BigInt {
    debug_assert!(n >= 0);
    (2..=n as i64).fold(BigInt::one(), |acc, k| acc * k)
}

// twice-stored combination that must be an even number; returns its half
fn half_of(twice: i32) -> i32 {
    debug_assert!(twice % 2 == 0);
    twice / 2
}

fn signed_sqrt(square: &BigRational, sign_source: &BigRational) -> f64 {
    if sign_source.is_zero() {
        return 0.0;
    }
    let mag = square.to_f64().unwrap_or(f64::NAN).sqrt();
    if sign_source.is_negative() {
        -mag
    } else {
        mag
    }
}

/// `<j1 m1; j2 m2 | J M>` in the Condon-Shortley convention.
pub fn clebsch_gordan(
    j1: HalfInteger,
    m1: HalfInteger,
    j2: HalfInteger,
    m2: HalfInteger,
    j: HalfInteger,
    m: HalfInteger,
) -> f64 {
    if m1 + m2 != m || !triangle(j1, j2, j) {
        return 0.0;
    }
    for (jj, mm) in [(j1, m1), (j2, m2), (j, m)] {
        if mm.abs() > jj || (jj.0 + mm.0) % 2 != 0 {
            return 0.0;
        }
    }
    let (j1, m1, j2, m2, j, m) = (j1.0, m1.0, j2.0, m2.0, j.0, m.0);

    let mut pre = BigRational::from_integer(BigInt::from(j + 1));
    pre *= BigRational::new(
        factorial(half_of(j + j1 - j2)) * factorial(half_of(j - j1 + j2)) * factorial(half_of(j1 + j2 - j)),
        factorial(half_of(j1 + j2 + j) + 1),
    );
    pre *= BigRational::from_integer(
        factorial(half_of(j + m))
            * factorial(half_of(j - m))
            * factorial(half_of(j1 - m1))
            * factorial(half_of(j1 + m1))
            * factorial(half_of(j2 - m2))
            * factorial(half_of(j2 + m2)),
    );

    let kmin = 0.max(half_of(j2 - j - m1)).max(half_of(j1 - j + m2));
    let kmax = half_of(j1 + j2 - j).min(half_of(j1 - m1)).min(half_of(j2 + m2));
    let mut sum = BigRational::zero();
    for k in kmin..=kmax {
        let den = factorial(k)
            * factorial(half_of(j1 + j2 - j) - k)
            * factorial(half_of(j1 - m1) - k)
            * factorial(half_of(j2 + m2) - k)
            * factorial(half_of(j - j2 + m1) + k)
            * factorial(half_of(j - j1 - m2) + k);
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let square = pre * &sum * &sum;
    signed_sqrt(&square, &sum)
}

fn delta_squared(a: i32, b: i32, c: i32) -> BigRational {
    BigRational::new(
        factorial(half_of(a + b - c)) * factorial(half_of(a - b + c)) * factorial(half_of(-a + b + c)),
        factorial(half_of(a + b + c) + 1),
    )
}

/// Wigner 6j symbol `{j1 j2 j3; j4 j5 j6}`.
pub fn wigner_6j(
    j1: HalfInteger,
    j2: HalfInteger,
    j3: HalfInteger,
    j4: HalfInteger,
    j5: HalfInteger,
    j6: HalfInteger,
) -> f64 {
    if !(triangle(j1, j2, j3) && triangle(j1, j5, j6) && triangle(j4, j2, j6) && triangle(j4, j5, j3)) {
        return 0.0;
    }
    let (a, b, c, d, e, f) = (j1.0, j2.0, j3.0, j4.0, j5.0, j6.0);
    let pre = delta_squared(a, b, c) * delta_squared(a, e, f) * delta_squared(d, b, f) * delta_squared(d, e, c);

    let t1 = half_of(a + b + c);
    let t2 = half_of(a + e + f);
    let t3 = half_of(d + b + f);
    let t4 = half_of(d + e + c);
    let u1 = half_of(a + b + d + e);
    let u2 = half_of(b + c + e + f);
    let u3 = half_of(c + a + f + d);
    let tmin = t1.max(t2).max(t3).max(t4);
    let tmax = u1.min(u2).min(u3);
    let mut sum = BigRational::zero();
    for t in tmin..=tmax {
        let num = factorial(t + 1);
        let den = factorial(t - t1)
            * factorial(t - t2)
            * factorial(t - t3)
            * factorial(t - t4)
            * factorial(u1 - t)
            * factorial(u2 - t)
            * factorial(u3 - t);
        let term = BigRational::new(num, den);
        if t % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let square = pre * &sum * &sum;
    signed_sqrt(&square, &sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn h(twice: i32) -> HalfInteger {
        HalfInteger::from_twice(twice)
    }

    /// Coupled states |J M> expanded in |j1 m1>|j2 m2>, built by repeated
    /// lowering from the stretched state and Gram-Schmidt for each lower J
    /// (top component of <j1 j1; j2 J-j1|J J> chosen positive).
    fn ladder_oracle(j1: i32, j2: i32) -> std::collections::HashMap<(i32, i32), Vec<f64>> {
        let m1s: Vec<i32> = (0..=j1).map(|k| j1 - 2 * k).collect();
        let m2s: Vec<i32> = (0..=j2).map(|k| j2 - 2 * k).collect();
        let dim = m1s.len() * m2s.len();
        let idx = |m1: i32, m2: i32| ((j1 - m1) / 2) as usize * m2s.len() + ((j2 - m2) / 2) as usize;
        let lower = |v: &[f64]| {
            let mut out = vec![0.0; dim];
            for &m1 in &m1s {
                for &m2 in &m2s {
                    let c = v[idx(m1, m2)];
                    if c == 0.0 {
                        continue;
                    }
                    let (jj1, mm1) = (j1 as f64 / 2.0, m1 as f64 / 2.0);
                    let (jj2, mm2) = (j2 as f64 / 2.0, m2 as f64 / 2.0);
                    if m1 > -j1 {
                        out[idx(m1 - 2, m2)] += c * (jj1 * (jj1 + 1.0) - mm1 * (mm1 - 1.0)).sqrt();
                    }
                    if m2 > -j2 {
                        out[idx(m1, m2 - 2)] += c * (jj2 * (jj2 + 1.0) - mm2 * (mm2 - 1.0)).sqrt();
                    }
                }
            }
            let n = out.iter().map(|x| x * x).sum::<f64>().sqrt();
            out.iter().map(|x| x / n).collect::<Vec<_>>()
        };
        let mut states = std::collections::HashMap::new();
        let mut jj = j1 + j2;
        while jj >= (j1 - j2).abs() {
            // highest-weight vector for this J: orthogonal to all M = J states already built
            let mut top = vec![0.0; dim];
            let others: Vec<Vec<f64>> = states
                .iter()
                .filter(|((_, m), _)| *m == jj)
                .map(|(_, v): (&(i32, i32), &Vec<f64>)| v.clone())
                .collect();
            let basis: Vec<(i32, i32)> = m1s
                .iter()
                .flat_map(|&a| m2s.iter().map(move |&b| (a, b)))
                .filter(|(a, b)| a + b == jj)
                .collect();
            // start from the component with m1 = j1 and project out the others
            let (sa, sb) = *basis.iter().max_by_key(|(a, _)| *a).unwrap();
            top[idx(sa, sb)] = 1.0;
            for _ in 0..3 {
                for o in &others {
                    let d: f64 = top.iter().zip(o).map(|(x, y)| x * y).sum();
                    for (t, y) in top.iter_mut().zip(o) {
                        *t -= d * y;
                    }
                }
            }
            let n = top.iter().map(|x| x * x).sum::<f64>().sqrt();
            let sign = if top[idx(sa, sb)] < 0.0 { -1.0 } else { 1.0 };
            let mut v: Vec<f64> = top.iter().map(|x| sign * x / n).collect();
            let mut m = jj;
            loop {
                states.insert((jj, m), v.clone());
                if m == -jj {
                    break;
                }
                v = lower(&v);
                m -= 2;
            }
            jj -= 2;
        }
        states
    }

    #[test]
    fn known_values() {
        let v = clebsch_gordan(h(2), h(0), h(1), h(1), h(3), h(1));
        assert!((v - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let v = clebsch_gordan(h(1), h(1), h(1), h(-1), h(0), h(0));
        assert!((v - 0.5f64.sqrt()).abs() < 1e-15);
        let v = clebsch_gordan(h(1), h(-1), h(1), h(1), h(0), h(0));
        assert!((v + 0.5f64.sqrt()).abs() < 1e-15);
        let s = wigner_6j(h(1), h(1), h(2), h(1), h(1), h(0));
        assert!((s - 0.5).abs() < 1e-15);
    }

    #[test]
    fn selection_rules_give_zero() {
        assert_eq!(clebsch_gordan(h(2), h(2), h(2), h(2), h(2), h(2)), 0.0);
        assert_eq!(clebsch_gordan(h(2), h(0), h(2), h(0), h(6), h(0)), 0.0);
        assert_eq!(clebsch_gordan(h(2), h(0), h(2), h(0), h(2), h(0)), 0.0);
        assert_eq!(wigner_6j(h(2), h(2), h(6), h(2), h(2), h(2)), 0.0);
    }

    #[test]
    fn cg_matches_ladder_construction() {
        for (j1, j2) in [(1, 1), (2, 1), (2, 2), (3, 2), (4, 3), (3, 3), (4, 2)] {
            let states = ladder_oracle(j1, j2);
            let m2n = j2 + 1;
            for (&(jj, m), v) in &states {
                for k1 in 0..=j1 {
                    for k2 in 0..=j2 {
                        let (m1, mm2) = (j1 - 2 * k1, j2 - 2 * k2);
                        let want = v[k1 as usize * m2n as usize + k2 as usize];
                        let got = clebsch_gordan(h(j1), h(m1), h(j2), h(mm2), h(jj), h(m));
                        assert!((got - want).abs() < 1e-12, "j1={j1} j2={j2} J={jj} M={m} m1={m1}: {got} vs {want}");
                    }
                }
            }
        }
    }

    /// 6j from the recoupling overlap of ((j1 j2) j12, j3) J and (j1, (j2 j3) j23) J.
    fn sixj_from_recoupling(j1: i32, j2: i32, j3: i32, jt: i32, j12: i32, j23: i32) -> f64 {
        let cg = |a: i32, ma: i32, b: i32, mb: i32, c: i32, mc: i32| clebsch_gordan(h(a), h(ma), h(b), h(mb), h(c), h(mc));
        let m = jt;
        let mut overlap = 0.0;
        for m1 in (-j1..=j1).step_by(2) {
            for m2 in (-j2..=j2).step_by(2) {
                let m3 = m - m1 - m2;
                if m3.abs() > j3 {
                    continue;
                }
                overlap += cg(j1, m1, j2, m2, j12, m1 + m2)
                    * cg(j12, m1 + m2, j3, m3, jt, m)
                    * cg(j2, m2, j3, m3, j23, m2 + m3)
                    * cg(j1, m1, j23, m2 + m3, jt, m);
            }
        }
        let phase = if ((j1 + j2 + j3 + jt) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        phase * overlap / (((j12 + 1) * (j23 + 1)) as f64).sqrt()
    }

    #[test]
    fn sixj_matches_recoupling_overlap() {
        for j1 in 0..=3 {
            for j2 in 0..=3 {
                for j3 in 0..=3 {
                    for jt in 0..=5 {
                        for j12 in 0..=5 {
                            for j23 in 0..=5 {
                                if !(triangle(h(j1), h(j2), h(j12))
                                    && triangle(h(j12), h(j3), h(jt))
                                    && triangle(h(j2), h(j3), h(j23))
                                    && triangle(h(j1), h(j23), h(jt)))
                                {
                                    continue;
                                }
                                let want = sixj_from_recoupling(j1, j2, j3, jt, j12, j23);
                                let got = wigner_6j(h(j1), h(j2), h(j12), h(j3), h(jt), h(j23));
                                assert!((got - want).abs() < 1e-12, "{j1} {j2} {j12} {j3} {jt} {j23}: {got} vs {want}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn half_integer_display_and_ops() {
        assert_eq!(h(3).to_string(), "3/2");
        assert_eq!(h(4).to_string(), "2");
        assert_eq!(h(3) - h(1), HalfInteger::ONE);
        assert_eq!(HalfInteger::from_f64(-0.5).unwrap(), h(-1));
        assert!(HalfInteger::from_f64(0.3).is_err());
        let ms: Vec<_> = h(3).projections().collect();
        assert_eq!(ms, vec![h(3), h(1), h(-1), h(-3)]);
    }

    proptest! {
        #[test]
        fn cg_orthonormal(j1 in 0i32..6, j2 in 0i32..6, mt in -12i32..12) {
            // sum over m1 of <j1 m1 j2 m-m1|J M><j1 m1 j2 m-m1|J' M> = delta_JJ'
            let jmin = (j1 - j2).abs();
            let jmax = j1 + j2;
            let m = if (mt - jmax).rem_euclid(2) == 0 { mt } else { mt + 1 };
            prop_assume!(m.abs() <= jmax);
            for ja in (jmin..=jmax).step_by(2) {
                for jb in (jmin..=jmax).step_by(2) {
                    if m.abs() > ja || m.abs() > jb { continue; }
                    let mut s = 0.0;
                    for m1 in (-j1..=j1).step_by(2) {
                        let m2 = m - m1;
                        if m2.abs() > j2 { continue; }
                        s += clebsch_gordan(h(j1), h(m1), h(j2), h(m2), h(ja), h(m))
                            * clebsch_gordan(h(j1), h(m1), h(j2), h(m2), h(jb), h(m));
                    }
                    let want = if ja == jb { 1.0 } else { 0.0 };
                    prop_assert!((s - want).abs() < 1e-12);
                }
            }
        }

        #[test]
        fn sixj_orthogonality(a in 0i32..5, b in 0i32..5, c in 0i32..5, d in 0i32..5) {
            // sum_x (2x+1)(2y+1) {a b x; c d y}^2 = 1 whenever (a d y) and (c b y) close
            for y in 0..=8 {
                if !(triangle(h(a), h(d), h(y)) && triangle(h(c), h(b), h(y))) {
                    continue;
                }
                let mut s = 0.0;
                for x in 0..=10 {
                    let v = wigner_6j(h(a), h(b), h(x), h(c), h(d), h(y));
                    s += ((x + 1) * (y + 1)) as f64 * v * v;
                }
                prop_assert!((s - 1.0).abs() < 1e-12, "sum {}", s);
            }
        }
    }
}
