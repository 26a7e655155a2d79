//! Exact arithmetic for dyadic rationals `k / 2^e` and for the quadratic
//! extension `a + b*sqrt(2)` with dyadic `a`, `b`.
//!
//! Dyadics are the only numbers a Thompson-group element can move a dyadic
//! point to, and `a + b*sqrt(2)` is where the Haar coefficients live, so these
//! two rings are all the arithmetic the crate ever needs. There is no
//! division and no floating point anywhere.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::ParseError;

/// An exact dyadic rational `num / 2^exp` in canonical form:
/// `exp == 0` or `num` is odd, and zero is stored as `(0, 0)`.
///
/// Canonical form makes structural equality coincide with numeric equality,
/// so `Dyadic` can serve directly as a hash key for graph vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u32,
}

impl Dyadic {
    /// Canonicalizing constructor for `num / 2^exp`.
    pub fn new(num: impl Into<BigInt>, exp: u32) -> Self {
        let mut d = Dyadic {
            num: num.into(),
            exp,
        };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic {
            num: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            num: BigInt::one(),
            exp: 0,
        }
    }

    pub fn half() -> Self {
        Dyadic::new(1, 1)
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic {
            num: n.into(),
            exp: 0,
        }
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        // Shift out common factors of two while the exponent lasts.
        let tz = self
            .num
            .trailing_zeros()
            .unwrap_or(0)
            .min(u64::from(self.exp)) as u32;
        if tz > 0 {
            self.num >>= tz;
            self.exp -= tz;
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    /// Exact multiplication by `2^k` (either sign of `k`).
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.num.is_zero() {
            return Dyadic::zero();
        }
        if k >= 0 {
            let k = k as u64;
            let drop = k.min(u64::from(self.exp));
            Dyadic {
                num: &self.num << (k - drop),
                exp: self.exp - drop as u32,
            }
        } else {
            let mut d = Dyadic {
                num: self.num.clone(),
                exp: self.exp + u32::try_from(-k).expect("pow2 shift overflow"),
            };
            d.normalize();
            d
        }
    }

    /// Decomposes into `(odd, k)` with `self = odd * 2^k` and `odd` odd.
    /// Returns `None` for zero.
    pub fn odd_part(&self) -> Option<(BigInt, i64)> {
        if self.num.is_zero() {
            return None;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0);
        Some((&self.num >> tz, tz as i64 - i64::from(self.exp)))
    }

    /// If `self / other == 2^k` exactly, returns `k`. The quotient must be a
    /// positive power of two; anything else (including zero inputs) is `None`.
    pub fn pow2_ratio(&self, other: &Dyadic) -> Option<i64> {
        let (sn, kn) = self.odd_part()?;
        let (sd, kd) = other.odd_part()?;
        if sn == sd {
            Some(kn - kd)
        } else {
            None
        }
    }

    /// Total order consistent with the real values.
    pub fn cmp_value(&self, other: &Dyadic) -> Ordering {
        // p/2^e vs q/2^f  <=>  p * 2^f vs q * 2^e
        let lhs = &self.num << other.exp;
        let rhs = &other.num << self.exp;
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let exp = self.exp.max(rhs.exp);
        Dyadic::new(
            (&self.num << (exp - self.exp)) + (&rhs.num << (exp - rhs.exp)),
            exp,
        )
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -&self.num,
            exp: self.exp,
        }
    }
}

impl fmt::Display for Dyadic {
    /// Renders `num/2^exp` as `num/den` with a decimal power-of-two
    /// denominator, e.g. `3/8`; integers render bare, e.g. `0`, `-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, BigInt::one() << self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Dyadic {
    type Err = ParseError;

    /// Parses the display format: an integer, or `num/den` where `den` is a
    /// positive power of two (`1/2`, `-3/8`, `5`).
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let s = s.trim();
        let bad = || ParseError::Dyadic(s.to_string());
        match s.split_once('/') {
            None => {
                let n: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Dyadic::from_int(n))
            }
            Some((num, den)) => {
                let n: BigInt = num.trim().parse().map_err(|_| bad())?;
                let d: BigInt = den.trim().parse().map_err(|_| bad())?;
                if !d.is_positive() {
                    return Err(bad());
                }
                let tz = d.trailing_zeros().unwrap_or(0);
                if (&d >> tz) != BigInt::one() {
                    // Denominator is not a power of two: not a dyadic.
                    return Err(bad());
                }
                Ok(Dyadic::new(n, u32::try_from(tz).map_err(|_| bad())?))
            }
        }
    }
}

/// An exact element `a + b*sqrt(2)` of the ring Z[1/2][sqrt(2)].
///
/// The representation is unique (sqrt(2) is irrational), so derived equality
/// and hashing are sound.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadDyadic {
    a: Dyadic,
    b: Dyadic,
}

impl QuadDyadic {
    pub fn new(a: Dyadic, b: Dyadic) -> Self {
        QuadDyadic { a, b }
    }

    pub fn zero() -> Self {
        QuadDyadic {
            a: Dyadic::zero(),
            b: Dyadic::zero(),
        }
    }

    pub fn one() -> Self {
        QuadDyadic {
            a: Dyadic::one(),
            b: Dyadic::zero(),
        }
    }

    pub fn from_dyadic(a: Dyadic) -> Self {
        QuadDyadic {
            a,
            b: Dyadic::zero(),
        }
    }

    pub fn sqrt2() -> Self {
        QuadDyadic {
            a: Dyadic::zero(),
            b: Dyadic::one(),
        }
    }

    /// Exact `sqrt(2)^k = 2^(k/2)` for any integer `k`, even or odd.
    pub fn sqrt2_pow(k: i64) -> Self {
        if k % 2 == 0 {
            QuadDyadic::from_dyadic(Dyadic::one().mul_pow2(k / 2))
        } else {
            // 2^(k/2) = 2^((k-1)/2) * sqrt(2); div_euclid keeps this right
            // for negative odd k as well.
            QuadDyadic {
                a: Dyadic::zero(),
                b: Dyadic::one().mul_pow2(k.div_euclid(2)),
            }
        }
    }

    pub fn rational_part(&self) -> &Dyadic {
        &self.a
    }

    pub fn sqrt2_part(&self) -> &Dyadic {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Multiplication by `sqrt(2)`: `(a, b) -> (2b, a)`.
    pub fn mul_sqrt2(&self) -> Self {
        QuadDyadic {
            a: self.b.mul_pow2(1),
            b: self.a.clone(),
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        QuadDyadic {
            a: self.a.mul_pow2(k),
            b: self.b.mul_pow2(k),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }
}

impl Add for &QuadDyadic {
    type Output = QuadDyadic;
    fn add(self, rhs: &QuadDyadic) -> QuadDyadic {
        QuadDyadic {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl Sub for &QuadDyadic {
    type Output = QuadDyadic;
    fn sub(self, rhs: &QuadDyadic) -> QuadDyadic {
        self + &(-rhs)
    }
}

impl Mul for &QuadDyadic {
    type Output = QuadDyadic;
    fn mul(self, rhs: &QuadDyadic) -> QuadDyadic {
        // (a + b√2)(c + d√2) = (ac + 2bd) + (ad + bc)√2
        QuadDyadic {
            a: &(&self.a * &rhs.a) + &(&self.b * &rhs.b).mul_pow2(1),
            b: &(&self.a * &rhs.b) + &(&self.b * &rhs.a),
        }
    }
}

impl Neg for &QuadDyadic {
    type Output = QuadDyadic;
    fn neg(self) -> QuadDyadic {
        QuadDyadic {
            a: -&self.a,
            b: -&self.b,
        }
    }
}

impl fmt::Display for QuadDyadic {
    /// Renders `a+b*sqrt2`, omitting vanishing parts: `0`, `1/4`,
    /// `1/2*sqrt2`, `1/4+1/2*sqrt2`, `1/4-1/2*sqrt2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*sqrt2", self.b),
            (false, false) => {
                if self.b.is_positive() {
                    write!(f, "{}+{}*sqrt2", self.a, self.b)
                } else {
                    write!(f, "{}-{}*sqrt2", self.a, -&self.b)
                }
            }
        }
    }
}

impl fmt::Debug for QuadDyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for QuadDyadic {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let s = s.trim();
        let bad = || ParseError::QuadDyadic(s.to_string());
        let strip_sqrt2 = |part: &str| -> Option<Dyadic> {
            let core = part
                .trim()
                .strip_suffix("sqrt2")
                .map(|c| c.strip_suffix('*').unwrap_or(c))?
                .trim();
            match core {
                "" | "+" => Some(Dyadic::one()),
                "-" => Some(-&Dyadic::one()),
                _ => core.parse().ok(),
            }
        };
        if s.ends_with("sqrt2") {
            // A sign at a position past 0 separates `a` from `b*sqrt2`;
            // a leading sign belongs to the single term.
            let split = s
                .char_indices()
                .rev()
                .find(|&(i, c)| i > 0 && (c == '+' || c == '-'))
                .map(|(i, _)| i);
            if let Some(i) = split {
                let (lhs, rhs) = s.split_at(i);
                let a: Dyadic = lhs.trim().parse().map_err(|_| bad())?;
                let b = strip_sqrt2(rhs).ok_or_else(bad)?;
                return Ok(QuadDyadic::new(a, b));
            }
            let b = strip_sqrt2(s).ok_or_else(bad)?;
            return Ok(QuadDyadic::new(Dyadic::zero(), b));
        }
        let a: Dyadic = s.parse().map_err(|_| bad())?;
        Ok(QuadDyadic::from_dyadic(a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(num: i64, exp: u32) -> Dyadic {
        Dyadic::new(num, exp)
    }

    #[test]
    fn canonical_form() {
        assert_eq!(d(2, 2), d(1, 1)); // 2/4 = 1/2
        assert_eq!(d(0, 7), Dyadic::zero());
        assert_eq!(d(3, 3).exponent(), 3);
        assert_eq!(d(3, 3).to_string(), "3/8");
        // re-normalizing a canonical value is the identity
        let x = d(5, 4);
        assert_eq!(Dyadic::new(x.numerator().clone(), x.exponent()), x);
    }

    #[test]
    fn arithmetic() {
        assert_eq!(&d(1, 1) + &d(1, 2), d(3, 2)); // 1/2 + 1/4 = 3/4
        assert_eq!(d(3, 2).mul_pow2(-1), d(3, 3)); // 3/4 * 2^-1 = 3/8
        assert!(d(5, 3) > d(1, 1)); // 5/8 > 1/2
        assert_eq!(&d(3, 2) * &d(1, 1), d(3, 3));
        assert_eq!(&d(1, 1) - &d(1, 1), Dyadic::zero());
        assert_eq!(d(-4, 0).mul_pow2(-1), d(-2, 0));
    }

    #[test]
    fn pow2_ratio() {
        assert_eq!(d(3, 3).pow2_ratio(&d(3, 1)), Some(-2));
        assert_eq!(d(1, 0).pow2_ratio(&d(1, 3)), Some(3));
        assert_eq!(d(3, 1).pow2_ratio(&d(5, 1)), None);
        assert_eq!(d(-1, 1).pow2_ratio(&d(1, 1)), None); // sign mismatch
        assert_eq!(Dyadic::zero().pow2_ratio(&d(1, 1)), None);
    }

    #[test]
    fn parse_display_roundtrip() {
        for s in ["0", "1", "-2", "1/2", "-3/8", "13/16"] {
            let v: Dyadic = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert!("1/3".parse::<Dyadic>().is_err()); // non-dyadic denominator
        assert!("1/6".parse::<Dyadic>().is_err());
        assert!("x".parse::<Dyadic>().is_err());
    }

    #[test]
    fn quad_basics() {
        let r2 = QuadDyadic::sqrt2();
        assert_eq!(&r2 * &r2, QuadDyadic::from_dyadic(d(2, 0)));
        let x = QuadDyadic::new(d(1, 2), d(1, 1));
        let y = QuadDyadic::new(d(-1, 2), Dyadic::zero());
        assert_eq!(&x + &y, QuadDyadic::new(Dyadic::zero(), d(1, 1)));
        assert_eq!(QuadDyadic::zero(), QuadDyadic::zero());
        assert_ne!(QuadDyadic::one(), QuadDyadic::sqrt2());
        assert_eq!(x.mul_sqrt2(), QuadDyadic::new(d(1, 0), d(1, 2)));
        assert_eq!(
            QuadDyadic::sqrt2_pow(3),
            QuadDyadic::new(Dyadic::zero(), d(2, 0))
        );
        assert_eq!(
            QuadDyadic::sqrt2_pow(-1),
            QuadDyadic::new(Dyadic::zero(), d(1, 1))
        );
        assert_eq!(QuadDyadic::sqrt2_pow(4), QuadDyadic::from_dyadic(d(4, 0)));
    }

    #[test]
    fn quad_display_parse() {
        let cases = [
            (QuadDyadic::new(d(1, 2), d(1, 1)), "1/4+1/2*sqrt2"),
            (QuadDyadic::new(d(1, 2), d(-1, 1)), "1/4-1/2*sqrt2"),
            (QuadDyadic::new(Dyadic::zero(), d(-1, 3)), "-1/8*sqrt2"),
            (QuadDyadic::from_dyadic(d(-3, 3)), "-3/8"),
            (QuadDyadic::zero(), "0"),
        ];
        for (v, s) in cases {
            assert_eq!(v.to_string(), s);
            assert_eq!(s.parse::<QuadDyadic>().unwrap(), v);
        }
        assert_eq!("sqrt2".parse::<QuadDyadic>().unwrap(), QuadDyadic::sqrt2());
        assert_eq!(
            "-sqrt2".parse::<QuadDyadic>().unwrap(),
            -&QuadDyadic::sqrt2()
        );
    }

    fn arb_dyadic() -> impl Strategy<Value = Dyadic> {
        (any::<i32>(), 0u32..24).prop_map(|(n, e)| Dyadic::new(n, e))
    }

    fn arb_quad() -> impl Strategy<Value = QuadDyadic> {
        (arb_dyadic(), arb_dyadic()).prop_map(|(a, b)| QuadDyadic::new(a, b))
    }

    proptest! {
        #[test]
        fn dyadic_order_translation_invariant(a in arb_dyadic(), b in arb_dyadic(), c in arb_dyadic()) {
            prop_assert_eq!(a.cmp(&b), (&a + &c).cmp(&(&b + &c)));
        }

        #[test]
        fn quad_ring_axioms(x in arb_quad(), y in arb_quad(), z in arb_quad()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        }

        #[test]
        fn quad_equality_is_componentwise(x in arb_quad(), y in arb_quad()) {
            let same = x.rational_part() == y.rational_part()
                && x.sqrt2_part() == y.sqrt2_part();
            prop_assert_eq!(x == y, same);
        }

        #[test]
        fn dyadic_roundtrip(x in arb_dyadic()) {
            let s = x.to_string();
            prop_assert_eq!(s.parse::<Dyadic>().unwrap(), x);
        }
    }
}
