//! Double-double arithmetic for the tangle polynomial.
//!
//! The invariant `d1 - 2*d2 + 4*d3` cancels exactly on product states, but the
//! twelve degree-4 monomials are computed through different floating-point
//! paths, so plain f64 leaves a residual of order `eps * |monomial|` that a
//! fourth root later inflates to ~1e-9. Carrying the monomials and their sum
//! in double-double form pushes the residual to the 1e-30 range.

use crate::C64;

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    // requires |a| >= |b|
    let s = a + b;
    Dd {
        hi: s,
        lo: b - (s - a),
    }
}

#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    let err = f64::mul_add(a, b, -p);
    Dd { hi: p, lo: err }
}

impl Dd {
    #[inline]
    pub(crate) fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub(crate) fn add(self, other: Dd) -> Dd {
        let s = two_sum(self.hi, other.hi);
        let lo = s.lo + self.lo + other.lo;
        quick_two_sum(s.hi, lo)
    }

    #[inline]
    pub(crate) fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline]
    pub(crate) fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub(crate) fn mul(self, other: Dd) -> Dd {
        let p = two_prod(self.hi, other.hi);
        let lo = p.lo + self.hi * other.lo + self.lo * other.hi;
        quick_two_sum(p.hi, lo)
    }

    /// Exact scaling by a power of two.
    #[inline]
    pub(crate) fn scale_pow2(self, factor: f64) -> Dd {
        Dd {
            hi: self.hi * factor,
            lo: self.lo * factor,
        }
    }
}

/// Complex number with double-double real and imaginary parts.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct DdComplex {
    pub(crate) re: Dd,
    pub(crate) im: Dd,
}

impl DdComplex {
    #[inline]
    pub(crate) fn from_c64(z: C64) -> Self {
        DdComplex {
            re: Dd::from_f64(z.re),
            im: Dd::from_f64(z.im),
        }
    }

    #[inline]
    pub(crate) fn mul(self, other: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re.mul(other.re).sub(self.im.mul(other.im)),
            im: self.re.mul(other.im).add(self.im.mul(other.re)),
        }
    }

    #[inline]
    pub(crate) fn add(self, other: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re.add(other.re),
            im: self.im.add(other.im),
        }
    }

    #[inline]
    pub(crate) fn sub(self, other: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re.sub(other.re),
            im: self.im.sub(other.im),
        }
    }

    #[inline]
    pub(crate) fn scale_pow2(self, factor: f64) -> DdComplex {
        DdComplex {
            re: self.re.scale_pow2(factor),
            im: self.im.scale_pow2(factor),
        }
    }

    #[inline]
    pub(crate) fn to_c64(self) -> C64 {
        C64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// `|z|^2` evaluated in double-double, returned as f64.
    #[inline]
    pub(crate) fn norm_sqr(self) -> f64 {
        self.re.mul(self.re).add(self.im.mul(self.im)).to_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_keeps_cancelled_bits() {
        let big = Dd::from_f64(1e16);
        let sum = big.add(Dd::from_f64(1.0)).sub(big);
        assert_eq!(sum.to_f64(), 1.0);
    }

    #[test]
    fn prod_carries_rounding_error() {
        // (1 + 2^-30)^2 = 1 + 2^-29 + 2^-60; plain f64 drops the last term.
        let x = Dd::from_f64(1.0 + (0.5f64).powi(30));
        let sq = x.mul(x);
        let expected_lo = (0.5f64).powi(60);
        let plain = x.to_f64() * x.to_f64();
        assert_eq!(sq.hi, plain);
        assert!((sq.lo - expected_lo).abs() < 1e-25);
    }

    #[test]
    fn complex_mul_matches_plain_for_exact_inputs() {
        let a = DdComplex::from_c64(C64::new(3.0, -2.0));
        let b = DdComplex::from_c64(C64::new(-1.5, 0.25));
        let z = a.mul(b).to_c64();
        let w = C64::new(3.0, -2.0) * C64::new(-1.5, 0.25);
        assert_eq!(z, w);
    }
}
