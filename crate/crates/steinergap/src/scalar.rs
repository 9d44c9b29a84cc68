use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Exact ordered field used by every solver in the crate.
///
/// Nothing here is allowed to round: `Field` is only implemented for exact
/// rational types. Generic code sticks to owned arithmetic plus the few
/// in-place helpers below, which implementations may specialise.
pub trait Field:
    Clone
    + fmt::Debug
    + fmt::Display
    + Ord
    + Hash
    + Num
    + Neg<Output = Self>
    + FromStr
    + Send
    + Sync
    + 'static
{
    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn to_big(&self) -> BigRational;

    fn from_big(b: &BigRational) -> Self;

    fn is_integer(&self) -> bool {
        self.to_big().is_integer()
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// `self -= f * p`, the inner loop of every elimination.
    fn sub_mul(&mut self, f: &Self, p: &Self) {
        *self = self.clone() - f.clone() * p.clone();
    }

    fn add_assign_ref(&mut self, p: &Self) {
        *self = self.clone() + p.clone();
    }

    /// Decimal rendering with `places` digits after the point (truncated
    /// toward zero). Display only.
    fn to_decimal(&self, places: usize) -> String {
        decimal(&self.to_big(), places)
    }
}

fn decimal(v: &BigRational, places: usize) -> String {
    let neg = Signed::is_negative(v);
    let a = Signed::abs(v);
    let int = a.numer() / a.denom();
    let mut rem = a.numer() - &int * a.denom();
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&int.to_string());
    if places > 0 {
        s.push('.');
        for _ in 0..places {
            rem *= 10;
            let d = &rem / a.denom();
            rem -= &d * a.denom();
            s.push_str(&d.to_string());
        }
    }
    s
}

impl Field for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn to_big(&self) -> BigRational {
        self.clone()
    }
    fn from_big(b: &BigRational) -> Self {
        b.clone()
    }
    fn is_integer(&self) -> bool {
        BigRational::is_integer(self)
    }
}

/// Exact rational that stays on machine words while it can.
///
/// Values whose reduced numerator and denominator fit in an `i64` are kept
/// inline and combined through `i128` intermediates; anything larger spills to
/// a `BigRational`. The representation is canonical (a value that fits is
/// never stored big), so structural equality and hashing are value equality.
#[derive(Clone)]
pub struct Rational(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    // den > 0, gcd(|num|, den) = 1, num != i64::MIN
    Small(i64, i64),
    Big(Box<BigRational>),
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    pub fn integer(v: i64) -> Self {
        Self::from_i128(v as i128, 1)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        let (mut n, mut d) = (num, den);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = n.gcd(&d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        Self::fit(n, d)
    }

    // n/d already reduced with d > 0
    fn fit(n: i128, d: i128) -> Self {
        if n > i64::MIN as i128 && n <= i64::MAX as i128 && d <= i64::MAX as i128 {
            Rational(Repr::Small(n as i64, d as i64))
        } else {
            Rational(Repr::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))))
        }
    }

    fn from_big_owned(b: BigRational) -> Self {
        if let (Some(n), Some(d)) = (b.numer().to_i64(), b.denom().to_i64()) {
            if n != i64::MIN {
                return Rational(Repr::Small(n, d));
            }
        }
        Rational(Repr::Big(Box::new(b)))
    }

    pub fn numer_big(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom_big(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    /// `(num, den)` when the value is stored inline.
    pub fn small_parts(&self) -> Option<(i64, i64)> {
        match self.0 {
            Repr::Small(n, d) => Some((n, d)),
            Repr::Big(_) => None,
        }
    }

    pub fn is_zero_fast(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }
}

fn big_of(r: &Rational) -> BigRational {
    match &r.0 {
        Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
        Repr::Big(b) => (**b).clone(),
    }
}

fn add_ref(a: &Rational, b: &Rational) -> Rational {
    match (&a.0, &b.0) {
        (Repr::Small(0, _), _) => b.clone(),
        (_, Repr::Small(0, _)) => a.clone(),
        (Repr::Small(p, q), Repr::Small(r, s)) => {
            if q == s {
                Rational::from_i128(*p as i128 + *r as i128, *q as i128)
            } else {
                let (p, q, r, s) = (*p as i128, *q as i128, *r as i128, *s as i128);
                Rational::from_i128(p * s + r * q, q * s)
            }
        }
        _ => Rational::from_big_owned(big_of(a) + big_of(b)),
    }
}

fn neg_ref(a: &Rational) -> Rational {
    match &a.0 {
        Repr::Small(n, d) => Rational(Repr::Small(-n, *d)),
        Repr::Big(b) => Rational::from_big_owned(-(**b).clone()),
    }
}

fn mul_ref(a: &Rational, b: &Rational) -> Rational {
    match (&a.0, &b.0) {
        (Repr::Small(0, _), _) | (_, Repr::Small(0, _)) => Rational::zero(),
        (Repr::Small(p, q), Repr::Small(r, s)) => {
            let g1 = p.gcd(s);
            let g2 = r.gcd(q);
            let n = (*p / g1) as i128 * (*r / g2) as i128;
            let d = (*q / g2) as i128 * (*s / g1) as i128;
            Rational::fit(n, d)
        }
        _ => Rational::from_big_owned(big_of(a) * big_of(b)),
    }
}

fn div_ref(a: &Rational, b: &Rational) -> Rational {
    match &b.0 {
        Repr::Small(0, _) => panic!("division by zero"),
        Repr::Small(r, s) => {
            let (r, s) = if *r < 0 { (-*s, -*r) } else { (*s, *r) };
            mul_ref(a, &Rational(Repr::Small(r, s)))
        }
        Repr::Big(_) => Rational::from_big_owned(big_of(a) / big_of(b)),
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}
impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(p, q), Repr::Small(r, s)) => {
                (*p as i128 * *s as i128).cmp(&(*r as i128 * *q as i128))
            }
            _ => big_of(self).cmp(&big_of(other)),
        }
    }
}
impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                $f(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                $f(&self, rhs)
            }
        }
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: &'b Rational) -> Rational {
                $f(self, rhs)
            }
        }
    };
}

fn sub_ref(a: &Rational, b: &Rational) -> Rational {
    add_ref(a, &neg_ref(b))
}

fn rem_ref(a: &Rational, b: &Rational) -> Rational {
    Rational::from_big_owned(big_of(a) % big_of(b))
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);
binop!(Div, div, div_ref);
binop!(Rem, rem, rem_ref);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        neg_ref(&self)
    }
}
impl<'a> Neg for &'a Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        neg_ref(self)
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }
    fn is_zero(&self) -> bool {
        self.is_zero_fast()
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }
}

impl Num for Rational {
    type FromStrRadixErr = ParseRationalError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        let b = BigRational::from_str_radix(s.trim(), radix).map_err(|_| ParseRationalError(s.to_string()))?;
        Ok(Rational::from_big_owned(b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a rational: {:?}", self.0)
    }
}
impl std::error::Error for ParseRationalError {}

impl FromStr for Rational {
    type Err = ParseRationalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRationalError(s.to_string()));
        }
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| ParseRationalError(s.to_string()))?;
        let d: BigInt = d.parse().map_err(|_| ParseRationalError(s.to_string()))?;
        if d.is_zero() {
            return Err(ParseRationalError(s.to_string()));
        }
        Ok(Rational::from_big_owned(BigRational::new(n, d)))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::integer(v)
    }
}

impl Field for Rational {
    fn from_i64(v: i64) -> Self {
        Rational::integer(v)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(num, den)
    }
    fn to_big(&self) -> BigRational {
        big_of(self)
    }
    fn from_big(b: &BigRational) -> Self {
        Rational::from_big_owned(b.clone())
    }
    fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }
    fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n > 0,
            Repr::Big(b) => Signed::is_positive(b.as_ref()),
        }
    }
    fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(b) => Signed::is_negative(b.as_ref()),
        }
    }
    fn sub_mul(&mut self, f: &Self, p: &Self) {
        if f.is_zero_fast() || p.is_zero_fast() {
            return;
        }
        *self = sub_ref(self, &mul_ref(f, p));
    }
    fn add_assign_ref(&mut self, p: &Self) {
        if !p.is_zero_fast() {
            *self = add_ref(self, p);
        }
    }
}
