//! Exact rationals, residue brackets and root-of-unity exponents.
//!
//! Nothing here touches floating point. A primitive `r`-th root of unity
//! `t = exp(2πi/r)` is never materialised; an element `t^e` of `μ_r` is
//! carried as the exponent `e mod r` ([`UnityExponent`]), and the real
//! number `b ∈ [0, 1)` with `t^e = exp(2πi b)` is the rational `e / r`.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use core::str::FromStr;

/// Errors raised by the arithmetic layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArithError {
    /// A modulus that must be positive was not.
    NonPositiveModulus(i64),
    /// Division by zero, or a zero denominator.
    DivisionByZero,
    /// An intermediate value left the `i128` range.
    Overflow,
    /// A rational literal that does not parse as `p/q` or `n`.
    Parse(alloc::string::String),
    /// An element has no inverse modulo the given order.
    NotInvertible { value: i64, modulus: i64 },
}

impl fmt::Display for ArithError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithError::NonPositiveModulus(r) => write!(f, "modulus must be positive, got {r}"),
            ArithError::DivisionByZero => f.write_str("division by zero"),
            ArithError::Overflow => f.write_str("integer overflow in exact arithmetic"),
            ArithError::Parse(s) => write!(f, "cannot parse rational from {s:?}"),
            ArithError::NotInvertible { value, modulus } => {
                write!(f, "{value} is not invertible modulo {modulus}")
            }
        }
    }
}

/// The residue bracket `[b]_r`: the unique `0 ≤ [b]_r < r` with `b ≡ [b]_r (mod r)`.
pub fn residue(b: i64, r: i64) -> Result<i64, ArithError> {
    if r <= 0 {
        return Err(ArithError::NonPositiveModulus(r));
    }
    Ok(b.rem_euclid(r))
}

/// Inverse of `a` modulo `r`, as a representative in `[1, r)`.
pub fn mod_inverse(a: i64, r: i64) -> Result<i64, ArithError> {
    let a = residue(a, r)?;
    let (mut old_r, mut cur_r) = (a, r);
    let (mut old_s, mut cur_s) = (1i64, 0i64);
    while cur_r != 0 {
        let q = old_r / cur_r;
        (old_r, cur_r) = (cur_r, old_r - q * cur_r);
        (old_s, cur_s) = (cur_s, old_s - q * cur_s);
    }
    if old_r != 1 {
        return Err(ArithError::NotInvertible { value: a, modulus: r });
    }
    residue(old_s, r)
}

pub(crate) fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// An exact rational number `numer / denom` in lowest terms with `denom > 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    numer: i128,
    denom: i128,
}

impl Rational {
    pub const ZERO: Rational = Rational { numer: 0, denom: 1 };
    pub const ONE: Rational = Rational { numer: 1, denom: 1 };

    /// Builds `numer / denom`, reducing to lowest terms.
    pub fn new(numer: i128, denom: i128) -> Result<Self, ArithError> {
        if denom == 0 {
            return Err(ArithError::DivisionByZero);
        }
        let g = gcd_u128(numer.unsigned_abs(), denom.unsigned_abs());
        // g divides both, and g >= 1 since denom != 0.
        let g = i128::try_from(g).map_err(|_| ArithError::Overflow)?;
        let (mut n, mut d) = (numer / g, denom / g);
        if d < 0 {
            n = n.checked_neg().ok_or(ArithError::Overflow)?;
            d = d.checked_neg().ok_or(ArithError::Overflow)?;
        }
        Ok(Rational { numer: n, denom: d })
    }

    pub const fn from_integer(n: i128) -> Self {
        Rational { numer: n, denom: 1 }
    }

    pub const fn numer(&self) -> i128 {
        self.numer
    }

    pub const fn denom(&self) -> i128 {
        self.denom
    }

    pub const fn is_integer(&self) -> bool {
        self.denom == 1
    }

    pub const fn is_zero(&self) -> bool {
        self.numer == 0
    }

    pub const fn is_negative(&self) -> bool {
        self.numer < 0
    }

    /// The integer value, if this rational is one.
    pub fn to_integer(&self) -> Option<i128> {
        self.is_integer().then_some(self.numer)
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self, ArithError> {
        let g = gcd_u128(self.denom as u128, rhs.denom as u128) as i128;
        let lhs_scale = rhs.denom / g;
        let rhs_scale = self.denom / g;
        let n = self
            .numer
            .checked_mul(lhs_scale)
            .and_then(|a| rhs.numer.checked_mul(rhs_scale).and_then(|b| a.checked_add(b)))
            .ok_or(ArithError::Overflow)?;
        let d = self.denom.checked_mul(lhs_scale).ok_or(ArithError::Overflow)?;
        Rational::new(n, d)
    }

    pub fn checked_neg(self) -> Result<Self, ArithError> {
        Ok(Rational {
            numer: self.numer.checked_neg().ok_or(ArithError::Overflow)?,
            denom: self.denom,
        })
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self, ArithError> {
        self.checked_add(rhs.checked_neg()?)
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self, ArithError> {
        // Cross-reduce first to keep intermediates small.
        let g1 = gcd_u128(self.numer.unsigned_abs(), rhs.denom as u128).max(1) as i128;
        let g2 = gcd_u128(rhs.numer.unsigned_abs(), self.denom as u128).max(1) as i128;
        let n = (self.numer / g1)
            .checked_mul(rhs.numer / g2)
            .ok_or(ArithError::Overflow)?;
        let d = (self.denom / g2)
            .checked_mul(rhs.denom / g1)
            .ok_or(ArithError::Overflow)?;
        Rational::new(n, d)
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self, ArithError> {
        if rhs.numer == 0 {
            return Err(ArithError::DivisionByZero);
        }
        self.checked_mul(Rational::new(rhs.denom, rhs.numer)?)
    }

    pub fn checked_mul_int(self, k: i128) -> Result<Self, ArithError> {
        self.checked_mul(Rational::from_integer(k))
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::ZERO
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n as i128)
    }
}

impl From<i128> for Rational {
    fn from(n: i128) -> Self {
        Rational::from_integer(n)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        // Denominators are positive, so cross multiplication preserves order.
        // Fall back to a continued-fraction style comparison on overflow.
        match (
            self.numer.checked_mul(other.denom),
            other.numer.checked_mul(self.denom),
        ) {
            (Some(a), Some(b)) => a.cmp(&b),
            _ => cmp_slow(*self, *other),
        }
    }
}

fn cmp_slow(a: Rational, b: Rational) -> Ordering {
    let fa = a.numer.div_euclid(a.denom);
    let fb = b.numer.div_euclid(b.denom);
    if fa != fb {
        return fa.cmp(&fb);
    }
    let ra = a.numer.rem_euclid(a.denom);
    let rb = b.numer.rem_euclid(b.denom);
    match (ra == 0, rb == 0) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        // ra/a.denom < rb/b.denom  <=>  b.denom/rb < a.denom/ra
        (false, false) => cmp_slow(
            Rational { numer: b.denom, denom: rb },
            Rational { numer: a.denom, denom: ra },
        ),
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! panicking_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
    };
}

panicking_op!(Add, add, checked_add);
panicking_op!(Sub, sub, checked_sub);
panicking_op!(Mul, mul, checked_mul);
panicking_op!(Div, div, checked_div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self.checked_neg() {
            Ok(v) => v,
            Err(e) => panic!("{e}"),
        }
    }
}

impl core::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::ZERO, |a, b| a + b)
    }
}

/// `p/q`, or just `n` when the denominator is one.
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom == 1 {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/{}", self.numer, self.denom)
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ArithError::Parse(s.into());
        let t = s.trim();
        match t.split_once('/') {
            Some((n, d)) => {
                let n: i128 = n.trim().parse().map_err(|_| bad())?;
                let d: i128 = d.trim().parse().map_err(|_| bad())?;
                Rational::new(n, d)
            }
            None => t.parse::<i128>().map(Rational::from_integer).map_err(|_| bad()),
        }
    }
}

/// An element `t^exponent` of the cyclic group `μ_r`, `t = exp(2πi/r)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnityExponent {
    exponent: u32,
    order: u32,
}

impl UnityExponent {
    /// `t^exponent` in `μ_order`; the exponent is reduced mod `order`.
    pub fn new(exponent: i64, order: u32) -> Result<Self, ArithError> {
        let e = residue(exponent, order as i64)?;
        Ok(UnityExponent { exponent: e as u32, order })
    }

    pub fn identity(order: u32) -> Result<Self, ArithError> {
        Self::new(0, order)
    }

    pub const fn exponent(&self) -> u32 {
        self.exponent
    }

    pub const fn order(&self) -> u32 {
        self.order
    }

    pub const fn is_identity(&self) -> bool {
        self.exponent == 0
    }

    /// Group product: exponents add mod `r`.
    ///
    /// Panics if the two elements live in different `μ_r`.
    pub fn mul(self, other: Self) -> Self {
        assert_eq!(self.order, other.order, "roots of unity of different orders");
        let e = (self.exponent as u64 + other.exponent as u64) % self.order as u64;
        UnityExponent { exponent: e as u32, order: self.order }
    }

    /// `x^k`: the exponent is multiplied by `k` mod `r`.
    pub fn pow(self, k: i64) -> Self {
        let r = self.order as i128;
        let e = (self.exponent as i128 * k as i128).rem_euclid(r);
        UnityExponent { exponent: e as u32, order: self.order }
    }

    pub fn inverse(self) -> Self {
        self.pow(-1)
    }

    /// The `b ∈ [0, 1)` with `t^e = exp(2πi b)`, i.e. `e / r`.
    pub fn b_value(&self) -> Rational {
        Rational::new(self.exponent as i128, self.order as i128)
            .expect("order is positive")
    }
}

impl fmt::Debug for UnityExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^{} (mod {})", self.exponent, self.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn residue_examples() {
        assert_eq!(residue(7, 3), Ok(1));
        assert_eq!(residue(-1, 5), Ok(4));
        assert_eq!(residue(0, 7), Ok(0));
        assert_eq!(residue(-15, 5), Ok(0));
        assert_eq!(residue(3, 0), Err(ArithError::NonPositiveModulus(0)));
        assert!(residue(3, -2).is_err());
    }

    #[test]
    fn rational_normalises() {
        let x = q(6, -4);
        assert_eq!((x.numer(), x.denom()), (-3, 2));
        assert_eq!(q(0, -9), Rational::ZERO);
        assert_eq!(Rational::new(1, 0), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn rational_display_and_parse() {
        assert_eq!(q(13, 3).to_string(), "13/3");
        assert_eq!(q(8, 2).to_string(), "4");
        assert_eq!(q(-1, 2).to_string(), "-1/2");
        assert_eq!("26/3".parse::<Rational>().unwrap(), q(26, 3));
        assert_eq!(" 4 ".parse::<Rational>().unwrap(), q(4, 1));
        assert_eq!("2/4".parse::<Rational>().unwrap(), q(1, 2));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        assert!("1.5".parse::<Rational>().is_err());
    }

    #[test]
    fn rational_ordering() {
        assert!(q(1, 5) < q(4, 9));
        assert!(q(1, 2) > q(4, 9));
        assert!(q(-1, 3) < Rational::ZERO);
        let big = Rational::from_integer(i128::MAX / 3);
        let a = Rational::new(i128::MAX / 3, 7).unwrap();
        assert!(a < big);
        let a = Rational::new(i128::MAX - 1, i128::MAX).unwrap();
        let b = Rational::new(i128::MAX - 2, i128::MAX - 1).unwrap();
        assert!(b < a);
        assert_eq!(cmp_slow(a, b), Ordering::Greater);
    }

    #[test]
    fn overflow_is_detected() {
        let big = Rational::from_integer(i128::MAX);
        assert_eq!(big.checked_add(Rational::ONE), Err(ArithError::Overflow));
        assert_eq!(big.checked_mul_int(2), Err(ArithError::Overflow));
    }

    #[test]
    fn inverses_mod_prime() {
        assert_eq!(mod_inverse(2, 5), Ok(3));
        assert_eq!(mod_inverse(-1, 7), Ok(6));
        assert!(mod_inverse(3, 9).is_err());
        for r in [2i64, 3, 5, 7, 11] {
            for a in 1..r {
                let inv = mod_inverse(a, r).unwrap();
                assert_eq!((a * inv) % r, 1);
            }
        }
    }

    #[test]
    fn unity_exponents() {
        let t = UnityExponent::new(1, 5).unwrap();
        assert_eq!(t.pow(5), UnityExponent::identity(5).unwrap());
        assert_eq!(t.pow(7).exponent(), 2);
        assert_eq!(t.pow(-1).exponent(), 4);
        assert_eq!(t.mul(t.pow(4)).exponent(), 0);
        assert_eq!(UnityExponent::new(-3, 5).unwrap().exponent(), 2);
        assert_eq!(t.pow(3).b_value(), q(3, 5));
        assert_eq!(t.inverse().mul(t), UnityExponent::identity(5).unwrap());
    }
}
