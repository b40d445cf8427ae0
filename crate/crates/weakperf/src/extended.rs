//! Compensated double-double arithmetic and summation.
//!
//! [`Dd`] is an unevaluated sum of two `f64`s giving roughly 106 bits of
//! mantissa. The gauge evaluations and the iterated-logarithm limits in
//! this crate involve `log log` of quantities down to 1e-64, where plain
//! doubles leave little verification headroom; every such path funnels
//! through this module. The algorithms are the standard error-free
//! transformations (Knuth two-sum, FMA two-product) plus the usual
//! argument-reduction exp and Newton-refined ln.

/// Double-double value: `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

/// ln 2 to double-double precision (hi is the f64 constant, lo the
/// residual of the true value).
pub const DD_LN2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.3190468138462996e-17,
};

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// The pair must already satisfy the non-overlap convention.
    #[inline]
    pub fn from_parts(hi: f64, lo: f64) -> Dd {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, other: f64) -> Dd {
        let (s, e) = two_sum(self.hi, other);
        let e = e + self.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline]
    pub fn sub_f64(self, other: f64) -> Dd {
        self.add_f64(-other)
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, other: f64) -> Dd {
        let (p, e) = two_prod(self.hi, other);
        let e = e + self.lo * other;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul_f64(q1));
        let q2 = r.hi / other.hi;
        let r = r.sub(other.mul_f64(q2));
        let q3 = r.hi / other.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::from_parts(s, e + q3)
    }

    #[inline]
    pub fn recip(self) -> Dd {
        Dd::ONE.div(self)
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            self.neg()
        } else {
            self
        }
    }

    pub fn sqr(self) -> Dd {
        let (p, e) = two_prod(self.hi, self.hi);
        let e = e + 2.0 * self.hi * self.lo;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    /// Integer power by binary exponentiation.
    pub fn powi(self, n: i32) -> Dd {
        if n == 0 {
            return Dd::ONE;
        }
        let mut base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Dd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.sqr();
            e >>= 1;
        }
        acc
    }

    /// exp with argument reduction exp(a) = 2^k * (exp(r/2^m))^(2^m).
    pub fn exp(self) -> Dd {
        if self.hi <= -709.0 {
            return Dd::ZERO;
        }
        if self.hi >= 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        let k = (self.hi / DD_LN2.hi).round();
        let r = self.sub(DD_LN2.mul_f64(k));
        const M: i32 = 9;
        let scale = (2f64).powi(-M);
        let r = r.mul_f64(scale);

        // Taylor series of exp(r) - 1 for |r| <= ln2 / 2^(m+1). The
        // factorial divisions must run in full precision: their rounding
        // is amplified 2^m-fold by the squaring phase below.
        let mut term = r;
        let mut sum = r;
        let mut fact = 1.0f64;
        for i in 2..32 {
            fact *= i as f64;
            term = term.mul(r);
            let contrib = term.div(Dd::from_f64(fact));
            sum = sum.add(contrib);
            if contrib.hi.abs() < 1e-40 * sum.hi.abs() {
                break;
            }
        }
        // Undo the halvings: (1+s)^2 = 1 + (2s + s^2), tracked as s to
        // avoid cancellation near zero.
        let mut s = sum;
        for _ in 0..M {
            s = s.mul_f64(2.0).add(s.sqr());
        }
        let e = s.add_f64(1.0);
        e.mul_f64((2f64).powi(k as i32))
    }

    /// Natural log by Newton refinement of the double-precision seed.
    pub fn ln(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::from_f64(f64::NAN);
        }
        let mut y = Dd::from_f64(self.hi.ln());
        // y <- y + x*exp(-y) - 1, two steps
        for _ in 0..2 {
            let corr = self.mul(y.neg().exp()).sub_f64(1.0);
            y = y.add(corr);
        }
        y
    }

    /// x^y = exp(y ln x) for x > 0.
    pub fn pow(self, y: Dd) -> Dd {
        self.ln().mul(y).exp()
    }
}

/// Neumaier compensated summation; deterministic for a fixed term order.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(items: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in items {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(got: Dd, want_hi: f64, want_lo: f64) -> f64 {
        let diff = got.sub(Dd::from_parts(want_hi, want_lo));
        (diff.to_f64() / want_hi).abs()
    }

    #[test]
    fn arithmetic_identities() {
        let a = Dd::from_f64(0.1);
        let b = Dd::from_f64(0.3);
        let c = a.add(b).sub(b);
        assert!((c.to_f64() - 0.1).abs() < 1e-30);
        let d = a.mul(b).div(b);
        assert!(rel_err(d, 0.1, 0.0) < 1e-30);
        assert!((Dd::from_f64(2.0).recip().to_f64() - 0.5).abs() == 0.0);
    }

    #[test]
    fn exp_ln_against_high_precision_references() {
        // References computed with 40-digit arithmetic.
        // ln 2 = 0.69314718055994530941723212145817656807...
        let l2 = Dd::from_f64(2.0).ln();
        assert!((l2.hi - std::f64::consts::LN_2).abs() < 1e-16);
        assert!((l2.lo - 2.319046813846299e-17).abs() < 1e-30);

        // ln 10 = 2.30258509299404568401799145468436420760...
        let l10 = Dd::from_f64(10.0).ln();
        let want = Dd::from_parts(std::f64::consts::LN_10, -2.1707562233822494e-16);
        assert!(l10.sub(want).to_f64().abs() < 1e-30);

        // exp(0.5) = 1.64872127070012814684865078781416357165...
        let e05 = Dd::from_f64(0.5).exp();
        let want = Dd::from_parts(1.6487212707001282, -4.731568479435833e-17);
        assert!(e05.sub(want).to_f64().abs() < 1e-30);

        // exp(-37.5) = 5.17555500580186853485109070573882994602e-17
        let em = Dd::from_f64(-37.5).exp();
        assert!((em.to_f64() / 5.175555005801869e-17 - 1.0).abs() < 1e-28);
    }

    #[test]
    fn ln_exp_roundtrip_over_wide_range() {
        for &x in &[1e-60, 1e-20, 0.1, 0.9, 1.0, 1.5, 3.0, 1e20, 1e60] {
            let d = Dd::from_f64(x);
            let rt = d.ln().exp();
            assert!(
                (rt.to_f64() / x - 1.0).abs() < 1e-28,
                "roundtrip failed for {x}: {}",
                rt.to_f64()
            );
        }
    }

    #[test]
    fn powi_matches_repeated_multiplication() {
        let x = Dd::from_f64(1.25);
        let mut acc = Dd::ONE;
        for _ in 0..13 {
            acc = acc.mul(x);
        }
        assert!(x.powi(13).sub(acc).to_f64().abs() < 1e-25);
        assert!((x.powi(-2).to_f64() - 1.0 / 1.5625).abs() < 1e-28);
        // general pow agrees with the integer path
        let viapow = x.pow(Dd::from_f64(13.0));
        assert!((viapow.to_f64() / x.powi(13).to_f64() - 1.0).abs() < 1e-28);
    }

    #[test]
    fn neumaier_handles_cancellation() {
        let xs = vec![1.0, 1e100, 1.0, -1e100];
        assert_eq!(neumaier_sum(xs), 2.0);
    }
}
