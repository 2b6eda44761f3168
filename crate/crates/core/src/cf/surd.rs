//! Exact quadratic irrationals `(p + q*sqrt(d)) / r` over big integers.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A number `(p + q*sqrt(d)) / r` with `r > 0` and `gcd(p, q, r) = 1`.
///
/// Rationals have `q = d = 0`. Equality and ordering are by value, so two
/// surds that differ only in how `d` was reduced still compare equal.
#[derive(Clone, Debug)]
pub struct QuadraticSurd {
    p: BigInt,
    q: BigInt,
    d: BigInt,
    r: BigInt,
}

const TRIAL_PRIME_LIMIT: u32 = 100_000;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_PRIME_LIMIT as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (2..=n).filter(|&k| sieve[k]).map(|k| k as u32).collect()
    })
}

fn square_free_split_u128(mut m: u128) -> (u128, u128) {
    let mut s: u128 = 1;
    let mut core: u128 = 1;
    for &p in small_primes() {
        let p = p as u128;
        if p * p * p > m {
            break;
        }
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= p;
        }
        if e % 2 == 1 {
            core *= p;
        }
    }
    let t = m.isqrt();
    if t * t == m {
        s *= t;
    } else {
        core *= m;
    }
    (s, core)
}

/// Splits `d > 0` as `s^2 * core`. `core` is square-free whenever the part
/// left after trial division is at most 10^15; beyond that it may keep a
/// square factor, which only affects presentation.
fn square_free_split(d: &BigInt) -> (BigInt, BigInt) {
    if let Some(m) = d.to_u128() {
        let (s, c) = square_free_split_u128(m);
        return (BigInt::from(s), BigInt::from(c));
    }
    let mut m = d.clone();
    let mut s = BigInt::one();
    let mut core = BigInt::one();
    for &p in small_primes() {
        let pb = BigInt::from(p);
        if &pb * &pb * &pb > m {
            break;
        }
        let mut e = 0;
        loop {
            let (quo, rem) = m.div_rem(&pb);
            if !rem.is_zero() {
                break;
            }
            m = quo;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= &pb;
        }
        if e % 2 == 1 {
            core *= &pb;
        }
    }
    let t = m.sqrt();
    if &t * &t == m {
        s *= t;
    } else {
        core *= m;
    }
    (s, core)
}

fn is_perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let t = n.sqrt();
    if &t * &t == *n {
        Some(t)
    } else {
        None
    }
}

fn sign_ord(s: Sign) -> Ordering {
    match s {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

/// Exact sign of `a + b*sqrt(d)` for `d >= 0`.
pub(crate) fn sign_of(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
    let sa = sign_ord(a.sign());
    let sb = if d.is_zero() {
        Ordering::Equal
    } else {
        sign_ord(b.sign())
    };
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    match (a * a).cmp(&(b * b * d)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Exact sign of `b*sqrt(d1) + c*sqrt(d2)`.
fn sign_of_roots(b: &BigInt, d1: &BigInt, c: &BigInt, d2: &BigInt) -> Ordering {
    let sb = if d1.is_zero() {
        Ordering::Equal
    } else {
        sign_ord(b.sign())
    };
    let sc = if d2.is_zero() {
        Ordering::Equal
    } else {
        sign_ord(c.sign())
    };
    if sb == Ordering::Equal {
        return sc;
    }
    if sc == Ordering::Equal || sb == sc {
        return sb;
    }
    match (b * b * d1).cmp(&(c * c * d2)) {
        Ordering::Greater => sb,
        Ordering::Less => sc,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Exact sign of `a + b*sqrt(d1) + c*sqrt(d2)`.
fn sign_of3(a: &BigInt, b: &BigInt, d1: &BigInt, c: &BigInt, d2: &BigInt) -> Ordering {
    let sa = sign_ord(a.sign());
    let su = sign_of_roots(b, d1, c, d2);
    if su == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == su {
        return su;
    }
    // |a| vs |u| where u^2 = b^2 d1 + c^2 d2 + 2bc sqrt(d1 d2)
    let rest = a * a - b * b * d1 - c * c * d2;
    let cross = -(BigInt::from(2) * b * c);
    match sign_of(&rest, &cross, &(d1 * d2)) {
        Ordering::Greater => sa,
        Ordering::Less => su,
        Ordering::Equal => Ordering::Equal,
    }
}

impl QuadraticSurd {
    /// Builds `(p + q*sqrt(d)) / r`, extracting square factors from `d`.
    pub fn new(
        p: impl Into<BigInt>,
        q: impl Into<BigInt>,
        d: impl Into<BigInt>,
        r: impl Into<BigInt>,
    ) -> Result<Self> {
        let (p, mut q, d, r) = (p.into(), q.into(), d.into(), r.into());
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if d.is_negative() {
            return Err(Error::NegativeRadicand);
        }
        if d.is_zero() || q.is_zero() {
            return Ok(Self::from_parts(p, BigInt::zero(), BigInt::zero(), r));
        }
        let (s, core) = square_free_split(&d);
        q *= s;
        Ok(Self::from_parts(p, q, core, r))
    }

    /// Normalises signs, gcd and the `d = 1` case; `d` is taken as given.
    fn from_parts(mut p: BigInt, mut q: BigInt, mut d: BigInt, mut r: BigInt) -> Self {
        debug_assert!(!r.is_zero());
        if d.is_one() {
            p += &q;
            q = BigInt::zero();
        }
        if q.is_zero() {
            d = BigInt::zero();
        }
        if d.is_zero() {
            q = BigInt::zero();
        }
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() && !g.is_zero() {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        if p.is_zero() && q.is_zero() {
            r = BigInt::one();
        }
        QuadraticSurd { p, q, d, r }
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        QuadraticSurd {
            p: n.into(),
            q: BigInt::zero(),
            d: BigInt::zero(),
            r: BigInt::one(),
        }
    }

    pub fn from_ratio(p: impl Into<BigInt>, r: impl Into<BigInt>) -> Result<Self> {
        Self::new(p, 0, 0, r)
    }

    /// `sqrt(n)` for `n >= 0`.
    pub fn sqrt(n: impl Into<BigInt>) -> Result<Self> {
        Self::new(0, 1, n, 1)
    }

    /// Parses a plain decimal such as `-11.5825` (a `,` separator is accepted too)
    /// into the exact rational it denotes.
    pub fn from_decimal(s: &str) -> Result<Self> {
        let s = s.trim().replace(',', ".");
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s.trim_start_matches('+').to_string()),
        };
        let (int, frac) = match body.split_once('.') {
            Some((a, b)) => (a.to_string(), b.to_string()),
            None => (body.clone(), String::new()),
        };
        let digits_ok = |t: &str| t.chars().all(|c| c.is_ascii_digit());
        if (int.is_empty() && frac.is_empty()) || !digits_ok(&int) || !digits_ok(&frac) {
            return Err(Error::Parse(format!("bad decimal '{s}'")));
        }
        let all = format!("{}{}", if int.is_empty() { "0" } else { &int }, frac);
        let mut num: BigInt = all.parse().map_err(|_| Error::Parse(s.clone()))?;
        if neg {
            num = -num;
        }
        let den = BigInt::from(10).pow(frac.len() as u32);
        Self::from_ratio(num, den)
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.r.is_one()
    }

    /// Sign of the value.
    pub fn signum(&self) -> Ordering {
        sign_of(&self.p, &self.q, &self.d)
    }

    /// Galois conjugate `(p - q*sqrt(d)) / r`.
    pub fn conjugate(&self) -> Self {
        QuadraticSurd {
            p: self.p.clone(),
            q: -&self.q,
            d: self.d.clone(),
            r: self.r.clone(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    /// Rewrites both operands over a common radicand.
    fn align(a: &Self, b: &Self) -> Result<(BigInt, [BigInt; 3], [BigInt; 3])> {
        let pa = [a.p.clone(), a.q.clone(), a.r.clone()];
        let pb = [b.p.clone(), b.q.clone(), b.r.clone()];
        if b.q.is_zero() || a.d == b.d {
            return Ok((a.d.clone(), pa, pb));
        }
        if a.q.is_zero() {
            return Ok((b.d.clone(), pa, pb));
        }
        match is_perfect_square(&(&a.d * &b.d)) {
            // sqrt(db) = t / sqrt(da) = t*sqrt(da)/da
            Some(t) => {
                let pb = [&b.p * &a.d, &b.q * t, &b.r * &a.d];
                Ok((a.d.clone(), pa, pb))
            }
            None => Err(Error::IncompatibleFields(a.d.to_string(), b.d.to_string())),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let (d, [p1, q1, r1], [p2, q2, r2]) = Self::align(self, other)?;
        Ok(Self::from_parts(
            &p1 * &r2 + &p2 * &r1,
            &q1 * &r2 + &q2 * &r1,
            d,
            r1 * r2,
        ))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let (d, [p1, q1, r1], [p2, q2, r2]) = Self::align(self, other)?;
        let p = &p1 * &p2 + &q1 * &q2 * &d;
        let q = &p1 * &q2 + &p2 * &q1;
        Ok(Self::from_parts(p, q, d, r1 * r2))
    }

    /// `1 / self`.
    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let norm = &self.p * &self.p - &self.q * &self.q * &self.d;
        Ok(Self::from_parts(
            &self.r * &self.p,
            -(&self.r * &self.q),
            self.d.clone(),
            norm,
        ))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        let inv = other.recip()?;
        self.try_mul(&inv)
    }

    /// Exact comparison, also across unrelated fields.
    pub fn compare(&self, other: &Self) -> Ordering {
        if self.p == other.p && self.q == other.q && self.d == other.d && self.r == other.r {
            return Ordering::Equal;
        }
        if let Ok(diff) = self.try_sub(other) {
            return diff.signum();
        }
        let a = &self.p * &other.r - &other.p * &self.r;
        let b = &self.q * &other.r;
        let c = -(&other.q * &self.r);
        sign_of3(&a, &b, &self.d, &c, &other.d)
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        if self.q.is_zero() {
            return self.p.div_floor(&self.r);
        }
        let t = &self.q * &self.q * &self.d;
        let s = t.sqrt();
        let exact = &s * &s == t;
        let n = if self.q.is_positive() {
            &self.p + &s
        } else if exact {
            &self.p - &s
        } else {
            &self.p - &s - 1
        };
        n.div_floor(&self.r)
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// `floor(self * 10^k)`.
    pub fn floor_scaled(&self, k: u32) -> BigInt {
        let f = BigInt::from(10).pow(k);
        Self::from_parts(&self.p * &f, &self.q * &f, self.d.clone(), self.r.clone()).floor()
    }

    /// `self * 10^k` rounded to the nearest integer, ties to even.
    pub fn round_scaled(&self, k: u32) -> BigInt {
        let f = BigInt::from(10).pow(k);
        let two = BigInt::from(2);
        // floor(x*10^k + 1/2)
        let shifted = Self::from_parts(
            &two * &self.p * &f + &self.r,
            &two * &self.q * &f,
            self.d.clone(),
            &two * &self.r,
        );
        let n = shifted.floor();
        if shifted.is_integer() && n.is_odd() {
            n - 1
        } else {
            n
        }
    }

    /// Decimal string rounded to `k` fractional digits.
    pub fn to_decimal(&self, k: u32) -> String {
        let n = self.round_scaled(k);
        let neg = n.is_negative();
        let digits = n.abs().to_string();
        let k = k as usize;
        let padded = if digits.len() <= k {
            format!("{}{}", "0".repeat(k + 1 - digits.len()), digits)
        } else {
            digits
        };
        let (int, frac) = padded.split_at(padded.len() - k);
        let sign = if neg { "-" } else { "" };
        if k == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    /// Decimal rounded to `k` digits followed by the rounding bound, e.g.
    /// `2.2360680±5e-8`; the bound is 0 when the rounding is exact.
    pub fn to_decimal_with_bound(&self, k: u32) -> String {
        let n = self.round_scaled(k);
        let back = Self::from_parts(n, BigInt::zero(), BigInt::zero(), BigInt::from(10).pow(k));
        if back == *self {
            format!("{}±0", self.to_decimal(k))
        } else {
            format!("{}±5e-{}", self.to_decimal(k), k + 1)
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_decimal(20).parse().unwrap_or(f64::NAN)
    }

    /// `|self - target| <= 10^-k`, decided exactly.
    pub fn within(&self, target: &Self, k: u32) -> bool {
        let tol = Self::from_parts(
            BigInt::one(),
            BigInt::zero(),
            BigInt::zero(),
            BigInt::from(10).pow(k),
        );
        match self.try_sub(target) {
            Ok(diff) => diff.abs() <= tol,
            Err(_) => {
                let hi = target + &tol;
                let lo = target - &tol;
                *self <= hi && *self >= lo
            }
        }
    }
}

impl From<i64> for QuadraticSurd {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigInt> for QuadraticSurd {
    fn from(n: BigInt) -> Self {
        Self::from_integer(n)
    }
}

impl PartialEq for QuadraticSurd {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Equal
    }
}

impl Eq for QuadraticSurd {}

impl PartialOrd for QuadraticSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticSurd {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl Neg for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn neg(self) -> QuadraticSurd {
        QuadraticSurd {
            p: -&self.p,
            q: -&self.q,
            d: self.d.clone(),
            r: self.r.clone(),
        }
    }
}

impl Neg for QuadraticSurd {
    type Output = QuadraticSurd;
    fn neg(self) -> QuadraticSurd {
        -&self
    }
}

// Operator forms panic on operands from incompatible fields; use the
// `try_*` methods when that can happen.
macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&QuadraticSurd> for &QuadraticSurd {
            type Output = QuadraticSurd;
            fn $m(self, o: &QuadraticSurd) -> QuadraticSurd {
                self.$f(o).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<QuadraticSurd> for QuadraticSurd {
            type Output = QuadraticSurd;
            fn $m(self, o: QuadraticSurd) -> QuadraticSurd {
                (&self).$m(&o)
            }
        }
        impl $tr<&QuadraticSurd> for QuadraticSurd {
            type Output = QuadraticSurd;
            fn $m(self, o: &QuadraticSurd) -> QuadraticSurd {
                (&self).$m(o)
            }
        }
        impl $tr<QuadraticSurd> for &QuadraticSurd {
            type Output = QuadraticSurd;
            fn $m(self, o: QuadraticSurd) -> QuadraticSurd {
                self.$m(&o)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

/// `(p+q*sqrt(d))/r`, dropping a zero `p`, a unit `q`, and `r = 1` with its parentheses.
impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            if self.r.is_one() {
                return write!(f, "{}", self.p);
            }
            return write!(f, "{}/{}", self.p, self.r);
        }
        let qa = self.q.abs();
        let root = if qa.is_one() {
            format!("sqrt({})", self.d)
        } else {
            format!("{qa}*sqrt({})", self.d)
        };
        if self.p.is_zero() {
            let sign = if self.q.is_negative() { "-" } else { "" };
            write!(f, "{sign}{root}")?;
        } else {
            let op = if self.q.is_negative() { '-' } else { '+' };
            if self.r.is_one() {
                return write!(f, "{}{op}{root}", self.p);
            }
            write!(f, "({}{op}{root})", self.p)?;
        }
        if !self.r.is_one() {
            write!(f, "/{}", self.r)?;
        }
        Ok(())
    }
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.parse::<BigInt>()
        .map_err(|_| Error::Parse(format!("bad integer '{s}'")))
}

/// Parses `p±q*sqrt(d)` (also `p+sqrt(d)`, `q*sqrt(d)`, `-sqrt(d)`).
fn parse_linear(inner: &str) -> Result<(BigInt, BigInt, BigInt)> {
    let k = inner
        .find("sqrt(")
        .ok_or_else(|| Error::Parse(format!("expected sqrt in '{inner}'")))?;
    let rad = inner[k + 5..]
        .strip_suffix(')')
        .ok_or_else(|| Error::Parse(format!("unclosed sqrt in '{inner}'")))?;
    let d = parse_int(rad)?;
    let head = &inner[..k];
    let head = head.strip_suffix('*').unwrap_or(head);
    let split = head
        .char_indices()
        .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
        .map(|(i, _)| i)
        .next_back();
    let (p, coeff) = match split {
        Some(i) => (parse_int(&head[..i])?, &head[i..]),
        None => (BigInt::zero(), head),
    };
    let q = match coeff {
        "" | "+" => BigInt::one(),
        "-" => -BigInt::one(),
        c => parse_int(c.strip_prefix('+').unwrap_or(c))?,
    };
    Ok((p, q, d))
}

impl FromStr for QuadraticSurd {
    type Err = Error;

    /// Accepts the `Display` forms `(p+q*sqrt(d))/r` and `q*sqrt(d)/r`, rationals `p/r`,
    /// integers and plain decimals.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty".into()));
        }
        if s.contains("sqrt(") {
            let (group, r) = if s.ends_with(')') {
                (s.as_str(), BigInt::one())
            } else {
                let i = s
                    .rfind('/')
                    .ok_or_else(|| Error::Parse(format!("bad surd '{s}'")))?;
                (&s[..i], parse_int(&s[i + 1..])?)
            };
            let inner = if group.starts_with('(') && group.ends_with("))") {
                &group[1..group.len() - 1]
            } else {
                group
            };
            let (p, q, d) = parse_linear(inner)?;
            return QuadraticSurd::new(p, q, d, r);
        }
        if let Some((a, b)) = s.split_once('/') {
            return QuadraticSurd::from_ratio(parse_int(a)?, parse_int(b)?);
        }
        if s.contains('.') || s.contains(',') {
            return QuadraticSurd::from_decimal(&s);
        }
        Ok(QuadraticSurd::from_integer(parse_int(&s)?))
    }
}
