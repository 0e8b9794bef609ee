//! Complex Gamma function and Kummer's confluent hypergeometric function.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// ln Γ(z) on the principal branch of the Lanczos form (Re z >= 1/2).
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &p) in LANCZOS.iter().enumerate().skip(1) {
        x += p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// Γ(z) for complex z. Poles return an infinite value.
pub fn gamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(f64::INFINITY, 0.0);
    }
    if z.re < 0.5 {
        PI / ((PI * z).sin() * ln_gamma_right(1.0 - z).exp())
    } else {
        ln_gamma_right(z).exp()
    }
}

/// 1/Γ(z), which is entire; zero at the poles of Γ.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        (PI * z).sin() * ln_gamma_right(1.0 - z).exp() / PI
    } else {
        (-ln_gamma_right(z)).exp()
    }
}

/// Φ(a; c; z) with its parameters and Gamma prefactors fixed, for repeated
/// evaluation along a path in z.
#[derive(Clone, Copy, Debug)]
pub struct Kummer {
    a: Complex64,
    c: Complex64,
    gamma_c: Complex64,
    rgamma_a: Complex64,
    rgamma_c_minus_a: Complex64,
}

/// Below this modulus the Taylor series is used without question.
const TAYLOR_RADIUS: f64 = 12.0;
const ACCEPT: f64 = 1e-13;
const GIVE_UP: f64 = 1e-8;
/// Beyond this the double-double sum cannot absorb the cancellation either.
const EXTENDED_RADIUS: f64 = 70.0;

impl Kummer {
    pub fn new(a: Complex64, c: Complex64) -> Result<Self> {
        if is_nonpositive_integer(c) {
            return Err(Error::InvalidArgument(format!("Φ(a; c; z) undefined for c = {c}")));
        }
        Ok(Kummer {
            a,
            c,
            gamma_c: gamma(c),
            rgamma_a: recip_gamma(a),
            rgamma_c_minus_a: recip_gamma(c - a),
        })
    }

    /// Taylor sum and an estimate of its relative rounding error.
    fn taylor(&self, z: Complex64) -> Result<(Complex64, f64)> {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        let mut biggest = 1.0f64;
        for n in 0..20_000 {
            let nf = n as f64;
            term *= (self.a + nf) / ((self.c + nf) * (nf + 1.0)) * z;
            sum += term;
            biggest = biggest.max(term.norm());
            if term.norm() <= 1e-17 * sum.norm() && nf > z.norm() {
                let err = biggest * 4.0 * f64::EPSILON / sum.norm().max(f64::MIN_POSITIVE);
                return Ok((sum, err));
            }
            if term.norm() == 0.0 {
                return Ok((sum, 0.0));
            }
        }
        Err(Error::Series { what: "Kummer Taylor series" })
    }

    /// Taylor sum in double-double arithmetic, for the band of |z| where
    /// cancellation ruins the plain sum but the expansion is not yet sharp.
    fn taylor_extended(&self, z: Complex64) -> Result<(Complex64, f64)> {
        let mut term = DdComplex::from(Complex64::new(1.0, 0.0));
        let mut sum = term;
        let mut biggest = 1.0f64;
        for n in 0..20_000 {
            let nf = n as f64;
            let den = (self.c + nf) * (nf + 1.0);
            term = term.mul(self.a + nf).mul(z).div(den);
            sum = sum.add(term);
            let (tn, sn) = (term.approx().norm(), sum.approx().norm());
            biggest = biggest.max(tn);
            if tn <= 1e-33 * sn && nf > z.norm() {
                return Ok((sum.approx(), biggest * 1e-30 / sn.max(f64::MIN_POSITIVE)));
            }
        }
        Err(Error::Series { what: "Kummer Taylor series" })
    }

    /// Large-|z| expansion (both exponential branches kept) with the size of
    /// its smallest retained correction as error estimate.
    fn asymptotic(&self, z: Complex64) -> (Complex64, f64) {
        let (a, c) = (self.a, self.c);
        let sum = |p: Complex64, q: Complex64, w: Complex64| {
            let mut term = Complex64::new(1.0, 0.0);
            let mut total = term;
            let mut last = f64::INFINITY;
            for s in 0..400 {
                let sf = s as f64;
                let next = term * (p + sf) * (q + sf) / ((sf + 1.0) * w);
                let mag = next.norm();
                if mag >= last || mag == 0.0 {
                    break;
                }
                term = next;
                total += term;
                last = mag;
                if mag < 1e-17 * total.norm() {
                    break;
                }
            }
            (total, if last.is_finite() { last } else { 0.0 })
        };
        let (s1, e1) = sum(1.0 - a, c - a, z);
        let (s2, e2) = sum(a, a - c + 1.0, -z);
        // sector -pi/2 < arg z <= pi takes exp(+i pi a), the rest exp(-i pi a)
        let phase = if z.arg() > -PI / 2.0 {
            (Complex64::i() * PI * a).exp()
        } else {
            (-Complex64::i() * PI * a).exp()
        };
        let lnz = z.ln();
        let p1 = self.gamma_c * (z + (a - c) * lnz).exp() * self.rgamma_a;
        let p2 = self.gamma_c * phase * (-a * lnz).exp() * self.rgamma_c_minus_a;
        let value = p1 * s1 + p2 * s2;
        let err = (p1.norm() * e1 + p2.norm() * e2) / value.norm().max(f64::MIN_POSITIVE);
        (value, err)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() < TAYLOR_RADIUS {
            return Ok(self.taylor(z)?.0);
        }
        let (va, ea) = self.asymptotic(z);
        if ea < ACCEPT {
            return Ok(va);
        }
        let (mut v, mut e) = (va, ea);
        if let Ok((vt, et)) = self.taylor(z) {
            if et < e {
                (v, e) = (vt, et);
            }
        }
        if e > ACCEPT && z.norm() < EXTENDED_RADIUS {
            if let Ok((vx, ex)) = self.taylor_extended(z) {
                if ex < e {
                    (v, e) = (vx, ex);
                }
            }
        }
        if e > GIVE_UP {
            return Err(Error::Series { what: "Kummer function (neither branch converged)" });
        }
        Ok(v)
    }
}

/// Unevaluated sum hi + lo of two doubles (about 32 significant digits).
#[derive(Clone, Copy, Debug)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

impl Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let r = quick_two_sum(s, e + t);
        quick_two_sum(r.hi, r.lo + f)
    }

    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    fn mul_f64(self, b: f64) -> Dd {
        let p = self.hi * b;
        let e = self.hi.mul_add(b, -p);
        quick_two_sum(p, e + self.lo * b)
    }

    fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let r = self.add(Dd::from(q1).mul_f64(b).neg());
        let q2 = r.hi / b;
        let r = r.add(Dd::from(q2).mul_f64(b).neg());
        let q3 = r.hi / b;
        quick_two_sum(q1, q2).add(Dd::from(q3))
    }
}

#[derive(Clone, Copy)]
struct DdComplex {
    re: Dd,
    im: Dd,
}

impl From<Complex64> for DdComplex {
    fn from(z: Complex64) -> Self {
        DdComplex {
            re: Dd::from(z.re),
            im: Dd::from(z.im),
        }
    }
}

impl DdComplex {
    fn add(self, o: DdComplex) -> Self {
        DdComplex {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }

    fn mul(self, w: Complex64) -> Self {
        DdComplex {
            re: self.re.mul_f64(w.re).add(self.im.mul_f64(w.im).neg()),
            im: self.re.mul_f64(w.im).add(self.im.mul_f64(w.re)),
        }
    }

    fn div(self, w: Complex64) -> Self {
        if w.im == 0.0 {
            return DdComplex {
                re: self.re.div_f64(w.re),
                im: self.im.div_f64(w.re),
            };
        }
        // divide by w = r e^{i phi} as multiplication by conj(w)/|w|, then /|w|
        let r = w.norm();
        let p = self.mul(w.conj() / r);
        DdComplex {
            re: p.re.div_f64(r),
            im: p.im.div_f64(r),
        }
    }

    fn approx(self) -> Complex64 {
        Complex64::new(self.re.hi + self.re.lo, self.im.hi + self.im.lo)
    }
}

/// Kummer's function Φ(a; c; z) = 1F1(a; c; z).
pub fn confluent_1f1(a: Complex64, c: Complex64, z: Complex64) -> Result<Complex64> {
    Kummer::new(a, c)?.eval(z)
}
