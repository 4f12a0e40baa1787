//! Airy function of the first kind and its derivative on the real line.
//!
//! Two evaluation branches:
//!
//! * `|x| <= 8`: the Maclaurin series `Ai = c1 f(x) - c2 g(x)`, summed in
//!   double-double arithmetic. For positive `x` the two series grow like
//!   `Bi(x)` while `Ai(x)` decays, so the subtraction cancels about
//!   `2 * zeta / ln 10` digits (13 at `x = 8`); the extra precision absorbs that.
//! * `|x| > 8`: the large-argument expansions in `zeta = (2/3)|x|^{3/2}`,
//!   exponentially decaying for `x > 0` and oscillatory for `x < 0`.
//!
//! Results below `1e-300` in the exponential factor are flushed to `0.0`.

use thiserror::Error;

/// Branch point between the Maclaurin series and the asymptotic expansions.
pub const SERIES_LIMIT: f64 = 8.0;

/// `e^{-zeta}` below this value is reported as exact zero.
const UNDERFLOW_ZETA: f64 = 690.775_527_898_213_7; // 300 ln 10

/// Ai(0) as a double-double.
const AI0: Dd = Dd {
    hi: 0.3550280538878172,
    lo: 2.05233632436212e-17,
};
/// -Ai'(0) as a double-double.
const AIP0_NEG: Dd = Dd {
    hi: 0.2588194037928068,
    lo: -2.522243111610832e-17,
};

const INV_SQRT_PI: f64 = 0.564_189_583_547_756_3;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SpecfunError {
    #[error("Airy function argument must be finite, got {0}")]
    NonFinite(f64),
}

/// `Ai(x)` and `Ai'(x)` at a single point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValue {
    pub ai: f64,
    pub aip: f64,
}

/// Exponentially scaled Airy pair: `Ai(x) = ai * exp(-log_scale)`, likewise for `aip`.
///
/// For `x > 0` the scale is `zeta = (2/3) x^{3/2}`, so `ai` and `aip` stay
/// O(x^{-1/4}) and O(x^{1/4}) even where the unscaled values underflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledAiry {
    pub ai: f64,
    pub aip: f64,
    pub log_scale: f64,
}

impl ScaledAiry {
    pub fn unscaled(&self) -> AiryValue {
        if self.log_scale > UNDERFLOW_ZETA {
            return AiryValue { ai: 0.0, aip: 0.0 };
        }
        let e = (-self.log_scale).exp();
        AiryValue {
            ai: self.ai * e,
            aip: self.aip * e,
        }
    }
}

/// Evaluates `Ai(x)` and `Ai'(x)`.
pub fn airy(x: f64) -> Result<AiryValue, SpecfunError> {
    if !x.is_finite() {
        return Err(SpecfunError::NonFinite(x));
    }
    Ok(if x > SERIES_LIMIT {
        let s = asymptotic_positive(x);
        s.unscaled()
    } else if x < -SERIES_LIMIT {
        asymptotic_negative(-x)
    } else {
        maclaurin(x)
    })
}

/// Evaluates the exponentially scaled pair, see [`ScaledAiry`].
pub fn airy_scaled(x: f64) -> Result<ScaledAiry, SpecfunError> {
    if !x.is_finite() {
        return Err(SpecfunError::NonFinite(x));
    }
    Ok(if x > SERIES_LIMIT {
        asymptotic_positive(x)
    } else if x > 0.0 {
        let zeta = zeta_of(x);
        let v = maclaurin(x);
        let e = zeta.exp();
        ScaledAiry {
            ai: v.ai * e,
            aip: v.aip * e,
            log_scale: zeta,
        }
    } else {
        let v = if x < -SERIES_LIMIT {
            asymptotic_negative(-x)
        } else {
            maclaurin(x)
        };
        ScaledAiry {
            ai: v.ai,
            aip: v.aip,
            log_scale: 0.0,
        }
    })
}

/// `Ai(x)`, propagating NaN instead of returning an error.
pub fn ai(x: f64) -> f64 {
    airy(x).map_or(f64::NAN, |v| v.ai)
}

/// `Ai'(x)`, propagating NaN instead of returning an error.
pub fn aip(x: f64) -> f64 {
    airy(x).map_or(f64::NAN, |v| v.aip)
}

/// `(2/3) |x|^{3/2}`
#[inline]
fn zeta_of(x: f64) -> f64 {
    let a = x.abs();
    2.0 * (a * a.sqrt()) / 3.0
}

fn maclaurin(x: f64) -> AiryValue {
    let x3 = Dd::from_prod(x, x).mul_f64(x);
    let tol = 1e-33;

    // f(x) = sum a_k,    a_k = a_{k-1} x^3 / ((3k-1) 3k)
    // f'(x) = sum c_k,   c_1 = x^2/2, c_k = c_{k-1} x^3 / ((3k-1)(3k-3))
    // g(x) = sum b_k,    b_0 = x, b_k = b_{k-1} x^3 / (3k (3k+1))
    // g'(x) = sum d_k,   d_0 = 1, d_k = d_{k-1} x^3 / ((3k-2) 3k)
    let mut a = Dd::ONE;
    let mut f = Dd::ONE;
    let mut c = Dd::from_prod(x, x).div_f64(2.0);
    let mut fp = c;
    let mut b = Dd::from(x);
    let mut g = b;
    let mut d = Dd::ONE;
    let mut gp = Dd::ONE;

    for k in 1..200 {
        let k3 = 3.0 * k as f64;
        a = a.mul(x3).div_f64((k3 - 1.0) * k3);
        b = b.mul(x3).div_f64(k3 * (k3 + 1.0));
        d = d.mul(x3).div_f64((k3 - 2.0) * k3);
        f = f.add(a);
        g = g.add(b);
        gp = gp.add(d);
        if k >= 2 {
            c = c.mul(x3).div_f64((k3 - 1.0) * (k3 - 3.0));
            fp = fp.add(c);
        }
        let small = |t: Dd, s: Dd| t.hi.abs() <= tol * s.hi.abs().max(1.0);
        if small(a, f) && small(b, g) && small(c, fp) && small(d, gp) {
            break;
        }
    }

    let ai = AI0.mul(f).add(AIP0_NEG.mul(g).neg());
    let aip = AI0.mul(fp).add(AIP0_NEG.mul(gp).neg());
    AiryValue {
        ai: ai.to_f64(),
        aip: aip.to_f64(),
    }
}

/// Coefficients `u_k`, `v_k` of the large-argument expansions.
fn expansion_coefficients() -> &'static [(f64, f64); ASYMPTOTIC_TERMS] {
    use std::sync::OnceLock;
    static COEFFS: OnceLock<[(f64, f64); ASYMPTOTIC_TERMS]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut out = [(1.0, 1.0); ASYMPTOTIC_TERMS];
        let mut u = 1.0_f64;
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            let kf = k as f64;
            u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf);
            let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
            *slot = (u, v);
        }
        out
    })
}

const ASYMPTOTIC_TERMS: usize = 64;

/// Sums `sum_k (-1)^k c_k zeta^{-k}` over the selected coefficient column,
/// truncating at the smallest term (optimal truncation).
fn alternating_sum(zeta: f64, pick: impl Fn(&(f64, f64)) -> f64) -> f64 {
    let coeffs = expansion_coefficients();
    let inv = 1.0 / zeta;
    let mut sum = 1.0;
    let mut pow = 1.0;
    let mut prev = f64::INFINITY;
    for (k, cf) in coeffs.iter().enumerate().skip(1) {
        pow *= -inv;
        let term = pick(cf) * pow;
        if term.abs() >= prev {
            break;
        }
        sum += term;
        prev = term.abs();
        if prev < 1e-17 * sum.abs() && k >= 2 {
            break;
        }
    }
    sum
}

fn asymptotic_positive(x: f64) -> ScaledAiry {
    let zeta = zeta_of(x);
    let q = x.sqrt().sqrt();
    let su = alternating_sum(zeta, |c| c.0);
    let sv = alternating_sum(zeta, |c| c.1);
    ScaledAiry {
        ai: 0.5 * INV_SQRT_PI / q * su,
        aip: -0.5 * INV_SQRT_PI * q * sv,
        log_scale: zeta,
    }
}

/// Even/odd split sums for the oscillatory expansion:
/// `P = sum (-1)^k c_{2k} zeta^{-2k}`, `Q = sum (-1)^k c_{2k+1} zeta^{-2k-1}`.
fn split_sums(zeta: f64, pick: impl Fn(&(f64, f64)) -> f64) -> (f64, f64) {
    let coeffs = expansion_coefficients();
    let inv = 1.0 / zeta;
    let (mut p, mut q) = (1.0, 0.0);
    let mut pow = 1.0;
    let mut prev = f64::INFINITY;
    for (k, cf) in coeffs.iter().enumerate().skip(1) {
        pow *= inv;
        let mag = pick(cf) * pow;
        if mag.abs() >= prev {
            break;
        }
        prev = mag.abs();
        // k = 2j -> sign (-1)^j into P; k = 2j+1 -> sign (-1)^j into Q
        let j = k / 2;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * mag;
        } else {
            q += sign * mag;
        }
        if prev < 1e-17 && k >= 2 {
            break;
        }
    }
    (p, q)
}

fn asymptotic_negative(z: f64) -> AiryValue {
    let zeta = zeta_of(z);
    let q = z.sqrt().sqrt();
    let (s, c) = zeta.sin_cos();
    // cos(zeta - pi/4), sin(zeta - pi/4)
    let cm = (c + s) * std::f64::consts::FRAC_1_SQRT_2;
    let sm = (s - c) * std::f64::consts::FRAC_1_SQRT_2;
    let (pu, qu) = split_sums(zeta, |c| c.0);
    let (pv, qv) = split_sums(zeta, |c| c.1);
    AiryValue {
        ai: INV_SQRT_PI / q * (cm * pu + sm * qu),
        aip: INV_SQRT_PI * q * (sm * pv - cm * qv),
    }
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    fn from_prod(a: f64, b: f64) -> Dd {
        let p = a * b;
        Dd {
            hi: p,
            lo: a.mul_add(b, -p),
        }
    }

    fn quick(a: f64, b: f64) -> Dd {
        let s = a + b;
        Dd {
            hi: s,
            lo: b - (s - a),
        }
    }

    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn add(self, o: Dd) -> Dd {
        let s = self.hi + o.hi;
        let bb = s - self.hi;
        let e = (self.hi - (s - bb)) + (o.hi - bb);
        let t = self.lo + o.lo;
        Dd::quick(s, e + t)
    }

    fn mul_f64(self, b: f64) -> Dd {
        let p = self.hi * b;
        let e = self.hi.mul_add(b, -p) + self.lo * b;
        Dd::quick(p, e)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p) + (self.hi * o.lo + self.lo * o.hi);
        Dd::quick(p, e)
    }

    fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let r = self.add(Dd::from_prod(q1, b).neg());
        let q2 = r.hi / b;
        Dd::quick(q1, q2)
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}
