//! Exact scalar arithmetic over ℚ or a prime field 𝔽_p.
//!
//! Every scalar knows its field, so mixing scalars from different fields is
//! a programming error and panics; all user input is validated once at the
//! boundary.  Rational arithmetic uses arbitrary-precision integers, prime
//! fields use machine residues with 128-bit intermediate products, so all
//! computation in this crate is exact.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A coefficient field: ℚ (characteristic 0) or 𝔽_p (p prime).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FieldSpec {
    characteristic: u64,
}

impl FieldSpec {
    /// The rational field ℚ.
    pub fn rationals() -> Self {
        FieldSpec { characteristic: 0 }
    }

    /// The prime field 𝔽_p.  Rejects composite or zero/one moduli.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!(
                "characteristic must be 0 or a prime, got {p}"
            )));
        }
        Ok(FieldSpec { characteristic: p })
    }

    /// Field of the given characteristic: 0 for ℚ, a prime for 𝔽_p.
    pub fn new(characteristic: u64) -> Result<Self> {
        if characteristic == 0 {
            Ok(Self::rationals())
        } else {
            Self::prime(characteristic)
        }
    }

    pub fn characteristic(self) -> u64 {
        self.characteristic
    }

    pub fn is_rational(self) -> bool {
        self.characteristic == 0
    }

    pub fn zero(self) -> FieldScalar {
        self.integer(0)
    }

    pub fn one(self) -> FieldScalar {
        self.integer(1)
    }

    /// The image of the integer `n` in this field.
    pub fn integer(self, n: i64) -> FieldScalar {
        match self.characteristic {
            0 => FieldScalar::Rat(BigRational::from_integer(BigInt::from(n))),
            p => FieldScalar::Mod {
                p,
                r: reduce_bigint(&BigInt::from(n), p),
            },
        }
    }

    /// The image of `n/d`.  In 𝔽_p the denominator must be invertible.
    pub fn ratio(self, n: i64, d: i64) -> Result<FieldScalar> {
        if d == 0 {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        let num = self.integer(n);
        let den = self.integer(d);
        num.div(&den)
    }

    /// Parses `"a"` or `"a/b"` with optional sign, e.g. `-3/2`.
    pub fn parse_scalar(self, s: &str) -> Result<FieldScalar> {
        let s = s.trim();
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let num: BigInt = num_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer {num_str:?}")))?;
        let den: BigInt = match den_str {
            Some(d) => d
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer {d:?}")))?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        match self.characteristic {
            0 => Ok(FieldScalar::Rat(BigRational::new(num, den))),
            p => {
                let n = FieldScalar::Mod {
                    p,
                    r: reduce_bigint(&num, p),
                };
                let d = FieldScalar::Mod {
                    p,
                    r: reduce_bigint(&den, p),
                };
                n.div(&d)
            }
        }
    }
}

/// An exact element of ℚ or 𝔽_p.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum FieldScalar {
    Rat(BigRational),
    Mod { p: u64, r: u64 },
}

impl FieldScalar {
    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldScalar::Rat(_) => FieldSpec::rationals(),
            FieldScalar::Mod { p, .. } => FieldSpec { characteristic: *p },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Rat(q) => q.is_zero(),
            FieldScalar::Mod { r, .. } => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldScalar::Rat(q) => q.is_one(),
            FieldScalar::Mod { r, .. } => *r == 1,
        }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<FieldScalar> {
        if self.is_zero() {
            return Err(Error::InvalidParameter("division by zero".into()));
        }
        Ok(match self {
            FieldScalar::Rat(q) => FieldScalar::Rat(q.recip()),
            FieldScalar::Mod { p, r } => FieldScalar::Mod {
                p: *p,
                r: mod_inverse(*r, *p),
            },
        })
    }

    pub fn div(&self, rhs: &FieldScalar) -> Result<FieldScalar> {
        Ok(self * &rhs.inv()?)
    }

    /// `self^e` for any integer exponent; negative exponents of zero error.
    pub fn pow(&self, e: i64) -> Result<FieldScalar> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut acc = self.spec().one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    fn check_same_field(&self, rhs: &FieldScalar) {
        assert_eq!(
            self.spec(),
            rhs.spec(),
            "scalars from different fields combined"
        );
    }

    /// Exact `g`-th root inside the field, if one exists (`g >= 1`).
    ///
    /// Over ℚ this takes integer `g`-th roots of numerator and denominator;
    /// over 𝔽_p it searches the (small) field directly, so it is only
    /// attempted for p below 2^16.  `None` means no root in the ground
    /// field (one may still exist in an extension).
    pub fn nth_root(&self, g: u64) -> Option<FieldScalar> {
        assert!(g >= 1);
        match self {
            FieldScalar::Rat(q) => {
                let num = q.numer();
                let den = q.denom();
                if num.is_negative() && g % 2 == 0 {
                    return None;
                }
                let (nsign, nmag) = (num.sign(), num.magnitude());
                let nroot = nmag.nth_root(g as u32);
                if &nroot.pow(g as u32) != nmag {
                    return None;
                }
                let droot = den.magnitude().nth_root(g as u32);
                if &droot.pow(g as u32) != den.magnitude() {
                    return None;
                }
                let mut root = BigInt::from_biguint(Sign::Plus, nroot);
                if nsign == Sign::Minus {
                    root = -root;
                }
                Some(FieldScalar::Rat(BigRational::new(
                    root,
                    BigInt::from_biguint(Sign::Plus, droot),
                )))
            }
            FieldScalar::Mod { p, .. } => {
                if *p >= 1 << 16 {
                    return None;
                }
                (0..*p)
                    .map(|r| FieldScalar::Mod { p: *p, r })
                    .find(|cand| &cand.pow(g as i64).unwrap() == self)
            }
        }
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Rat(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            FieldScalar::Mod { r, .. } => write!(f, "{r}"),
        }
    }
}

impl Serialize for FieldScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $ratop:tt, $modexpr:expr) => {
        impl $trait for &FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: &FieldScalar) -> FieldScalar {
                self.check_same_field(rhs);
                match (self, rhs) {
                    (FieldScalar::Rat(a), FieldScalar::Rat(b)) => FieldScalar::Rat(a $ratop b),
                    (FieldScalar::Mod { p, r: a }, FieldScalar::Mod { r: b, .. }) => {
                        let f: fn(u64, u64, u64) -> u64 = $modexpr;
                        FieldScalar::Mod { p: *p, r: f(*a, *b, *p) }
                    }
                    _ => unreachable!(),
                }
            }
        }
        impl $trait for FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: FieldScalar) -> FieldScalar {
                (&self).$method(&rhs)
            }
        }
    };
}

impl_binop!(Add, add, +, |a, b, p| ((a as u128 + b as u128) % p as u128) as u64);
impl_binop!(Sub, sub, -, |a, b, p| ((a as u128 + p as u128 - b as u128) % p as u128) as u64);
impl_binop!(Mul, mul, *, |a, b, p| ((a as u128 * b as u128) % p as u128) as u64);

impl Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        match self {
            FieldScalar::Rat(q) => FieldScalar::Rat(-q),
            FieldScalar::Mod { p, r } => FieldScalar::Mod {
                p: *p,
                r: if *r == 0 { 0 } else { p - r },
            },
        }
    }
}

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        -&self
    }
}

impl AddAssign<&FieldScalar> for FieldScalar {
    fn add_assign(&mut self, rhs: &FieldScalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&FieldScalar> for FieldScalar {
    fn sub_assign(&mut self, rhs: &FieldScalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&FieldScalar> for FieldScalar {
    fn mul_assign(&mut self, rhs: &FieldScalar) {
        *self = &*self * rhs;
    }
}

fn reduce_bigint(n: &BigInt, p: u64) -> u64 {
    let m = n.mod_floor(&BigInt::from(p));
    let (_, digits) = m.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Extended Euclid on (a, p); p prime and a nonzero mod p.
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "{a} not invertible mod {p}");
    old_s.rem_euclid(p as i128) as u64
}

/// Trial-division primality test; adequate for the moduli this crate meets.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    if n % 3 == 0 {
        return n == 3;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Largest divisor of `n` coprime to `p`: strips every factor of `p`.
/// `n` must be positive.
pub fn p_coprime_divisor(n: u64, p: u64) -> u64 {
    assert!(n > 0 && p >= 2);
    let mut n = n;
    while n % p == 0 {
        n /= p;
    }
    n
}

/// gcd of a set, with `gcd(∅) = 0` (the identity for gcd).
pub fn gcd_of_set<I: IntoIterator<Item = u64>>(values: I) -> u64 {
    values.into_iter().fold(0, |acc, v| acc.gcd(&v))
}

/// gcd with Bezout certificate: returns `(g, coeffs)` with
/// `Σ coeffs[i] * values[i] = g` and `g = gcd(values)` (0 for an empty set).
pub fn gcd_bezout(values: &[i64]) -> (u64, Vec<i64>) {
    let mut g: i128 = 0;
    let mut coeffs: Vec<i128> = Vec::with_capacity(values.len());
    for &v in values {
        if g == 0 {
            g = (v as i128).abs();
            coeffs.push(if v < 0 { -1 } else { 1 });
            continue;
        }
        // ext_gcd(g, v): x*g + y*v = g'
        let (gp, x, y) = ext_gcd(g, v as i128);
        for c in coeffs.iter_mut() {
            *c *= x;
        }
        coeffs.push(y);
        g = gp;
    }
    // Coefficients fit i64 at the scale this crate uses (exponent gaps < m).
    let coeffs = coeffs
        .into_iter()
        .map(|c| i64::try_from(c).expect("bezout coefficient overflow"))
        .collect();
    (g as u64, coeffs)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            return (-a, -1, 0);
        }
        return (a, 1, 0);
    }
    let (g, x, y) = ext_gcd(b, a % b);
    (g, y, x - (a / b) * y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> FieldScalar {
        FieldSpec::rationals().ratio(n, d).unwrap()
    }

    #[test]
    fn rational_basics() {
        let f = FieldSpec::rationals();
        assert_eq!(&q(1, 2) + &q(1, 3), q(5, 6));
        assert_eq!(&q(1, 2) * &q(2, 3), q(1, 3));
        assert_eq!(q(3, 2).inv().unwrap(), q(2, 3));
        assert_eq!(q(-4, 2).to_string(), "-2");
        assert_eq!(q(3, -2).to_string(), "-3/2");
        assert!(f.zero().inv().is_err());
        assert_eq!(q(2, 1).pow(-2).unwrap(), q(1, 4));
    }

    #[test]
    fn prime_field_basics() {
        let f = FieldSpec::prime(7).unwrap();
        let three = f.integer(3);
        let five = f.integer(-2);
        assert_eq!(five, f.integer(5));
        assert_eq!(&three * &five, f.integer(1));
        assert_eq!(three.inv().unwrap(), f.integer(5));
        assert_eq!(f.integer(6).pow(3).unwrap(), f.integer(6));
        assert_eq!(f.ratio(1, 3).unwrap(), f.integer(5));
        assert!(f.ratio(1, 7).is_err());
    }

    #[test]
    fn characteristic_validation() {
        assert!(FieldSpec::new(0).is_ok());
        assert!(FieldSpec::new(2).is_ok());
        assert!(FieldSpec::new(97).is_ok());
        assert!(FieldSpec::new(1).is_err());
        assert!(FieldSpec::new(91).is_err());
    }

    #[test]
    fn parsing_round_trip() {
        let f = FieldSpec::rationals();
        for s in ["0", "5", "-7", "3/2", "-11/4"] {
            let v = f.parse_scalar(s).unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert_eq!(f.parse_scalar("6/4").unwrap(), q(3, 2));
        assert_eq!(f.parse_scalar("3/1").unwrap().to_string(), "3");
        assert!(f.parse_scalar("1/0").is_err());
        assert!(f.parse_scalar("x").is_err());
        let g = FieldSpec::prime(5).unwrap();
        assert_eq!(g.parse_scalar("7").unwrap(), g.integer(2));
        assert_eq!(g.parse_scalar("-1/2").unwrap(), g.integer(2));
    }

    #[test]
    fn p_coprime_parts() {
        assert_eq!(p_coprime_divisor(12, 2), 3);
        assert_eq!(p_coprime_divisor(12, 3), 4);
        assert_eq!(p_coprime_divisor(12, 5), 12);
        assert_eq!(p_coprime_divisor(1, 3), 1);
    }

    #[test]
    fn gcds() {
        assert_eq!(gcd_of_set([]), 0);
        assert_eq!(gcd_of_set([6, 10, 15]), 1);
        assert_eq!(gcd_of_set([12, 18]), 6);
        let (g, c) = gcd_bezout(&[6, 10]);
        assert_eq!(g, 2);
        assert_eq!(6 * c[0] + 10 * c[1], 2);
        let (g, c) = gcd_bezout(&[1, 3]);
        assert_eq!(g, 1);
        assert_eq!(c[0] + 3 * c[1], 1);
        let (g, _) = gcd_bezout(&[]);
        assert_eq!(g, 0);
    }

    #[test]
    fn rational_roots() {
        assert_eq!(q(8, 27).nth_root(3).unwrap(), q(2, 3));
        assert_eq!(q(4, 1).nth_root(2).unwrap(), q(2, 1));
        assert!(q(2, 1).nth_root(2).is_none());
        assert!(q(-4, 1).nth_root(2).is_none());
        assert_eq!(q(-8, 1).nth_root(3).unwrap(), q(-2, 1));
        // Cube roots are a bijection mod 5 (gcd(3, 4) = 1) …
        let f = FieldSpec::prime(5).unwrap();
        let r = f.integer(2).nth_root(3).unwrap();
        assert_eq!(r.pow(3).unwrap(), f.integer(2));
        // … but mod 7 the cubes are only {0, 1, 6}.
        let f = FieldSpec::prime(7).unwrap();
        assert!(f.integer(2).nth_root(3).is_none());
        assert!(f.integer(6).nth_root(3).is_some());
    }

    proptest! {
        #[test]
        fn field_axioms_rational(a in -50i64..50, b in 1i64..20, c in -50i64..50,
                                 d in 1i64..20, e in -50i64..50, g in 1i64..20) {
            let x = q(a, b);
            let y = q(c, d);
            let z = q(e, g);
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x + &(-&x), FieldSpec::rationals().zero());
            if !x.is_zero() {
                prop_assert_eq!(&x * &x.inv().unwrap(), FieldSpec::rationals().one());
            }
        }

        #[test]
        fn field_axioms_mod_p(p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 101]),
                              a in 0i64..200, c in 0i64..200, e in 0i64..200) {
            let f = FieldSpec::prime(p).unwrap();
            let x = f.integer(a);
            let y = f.integer(c);
            let z = f.integer(e);
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x - &x, f.zero());
            if !x.is_zero() {
                prop_assert_eq!(&x * &x.inv().unwrap(), f.one());
            }
        }

        #[test]
        fn p_coprime_divisor_properties(n in 1u64..100_000, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let d = p_coprime_divisor(n, p);
            prop_assert_eq!(n % d, 0);
            prop_assert!(d % p != 0);
            let mut q = n / d;
            while q % p == 0 { q /= p; }
            prop_assert_eq!(q, 1);
        }
    }
}
