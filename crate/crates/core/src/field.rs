//! Exact arithmetic in `F_q`, `q = p^m`.
//!
//! An element is stored as its encoding: an integer in `[0, q)` whose base-`p`
//! digits, least significant first, are the coefficients of its residue
//! polynomial modulo the field's monic irreducible modulus. Two elements are
//! equal exactly when their encodings are equal, so an `Elem` can be used
//! directly as a set member or a table index.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest order supported for proper extensions (`m > 1`); multiplication
/// goes through discrete log tables of this size.
const MAX_EXTENSION_ORDER: u64 = 1 << 20;
/// Above this order the extension-field addition table is not materialised.
const ADD_TABLE_ORDER: u32 = 256;

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for Elem {
    fn from(v: u32) -> Self {
        Elem(v)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {coeffs:?} is reducible over F_{p}")]
    ReducibleModulus { coeffs: Vec<u32>, p: u32 },
    #[error("modulus has degree {found}, expected {expected}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("modulus must be monic with coefficients below {p}")]
    InvalidModulus { p: u32 },
    #[error("extension degree {0} is not supported (use 1..=4)")]
    UnsupportedDegree(u32),
    #[error("field order {0} is too large")]
    TooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element {value} is out of range for a field of order {q}")]
    OutOfRange { value: u64, q: u32 },
    #[error("cannot parse field `{0}`; expected P, P^M or P^M/c0,...,cM")]
    Parse(String),
}

/// The ambient field `F_q`. Immutable once built; clone freely.
#[derive(Clone)]
pub struct Field {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<ExtTables>,
}

#[derive(Clone)]
struct ExtTables {
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            return write!(f, "{}", self.p);
        }
        let coeffs: Vec<String> = self.modulus.iter().map(|c| c.to_string()).collect();
        write!(f, "{}^{}/{}", self.p, self.m, coeffs.join(","))
    }
}

impl FromStr for Field {
    type Err = FieldError;

    /// Accepts `P`, `P^M`, `P^M/c0,...,cM`, or a bare prime power such as `9`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FieldError::Parse(s.to_string());
        let s = s.trim();
        let (head, modulus) = match s.split_once('/') {
            Some((h, m)) => {
                let coeffs = m
                    .split(',')
                    .map(|c| c.trim().parse::<u32>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>, _>>()?;
                (h, Some(coeffs))
            }
            None => (s, None),
        };
        let (p, m) = match head.split_once('^') {
            Some((p, m)) => (
                p.trim().parse::<u64>().map_err(|_| bad())?,
                m.trim().parse::<u32>().map_err(|_| bad())?,
            ),
            None => {
                let q = head.parse::<u64>().map_err(|_| bad())?;
                prime_power(q).ok_or(FieldError::NotPrime(q))?
            }
        };
        Field::new(p, m, modulus.as_deref())
    }
}

impl Field {
    /// Builds `F_{p^m}`. With no modulus, the monic irreducible of degree `m`
    /// with the smallest encoding is used.
    pub fn new(p: u64, m: u32, modulus: Option<&[u32]>) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if m == 0 || m > 4 {
            return Err(FieldError::UnsupportedDegree(m));
        }
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= u32::MAX as u64)
            .ok_or(FieldError::TooLarge(u64::MAX))?;
        if p > (1 << 31) || (m > 1 && q > MAX_EXTENSION_ORDER) {
            return Err(FieldError::TooLarge(q));
        }
        let p = p as u32;
        let modulus = match modulus {
            Some(c) => {
                if c.len() < 2 {
                    return Err(FieldError::DegreeMismatch { expected: m, found: 0 });
                }
                let found = (c.len() - 1) as u32;
                if found != m {
                    return Err(FieldError::DegreeMismatch { expected: m, found });
                }
                if c.iter().any(|&x| x >= p) || c[c.len() - 1] != 1 {
                    return Err(FieldError::InvalidModulus { p });
                }
                if !is_irreducible(c, p) {
                    return Err(FieldError::ReducibleModulus { coeffs: c.to_vec(), p });
                }
                c.to_vec()
            }
            None => default_modulus(p, m),
        };
        let mut field = Field { p, m, q: q as u32, modulus, tables: None };
        if m > 1 {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    /// Shorthand for the prime field `F_p`.
    pub fn prime(p: u64) -> Result<Field, FieldError> {
        Field::new(p, 1, None)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, low degree first, including the leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Validated element from its encoding.
    pub fn element(&self, value: u64) -> Result<Elem, FieldError> {
        if value < self.q as u64 {
            Ok(Elem(value as u32))
        } else {
            Err(FieldError::OutOfRange { value, q: self.q })
        }
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.q
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.q).map(Elem)
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_int(&self, v: i64) -> Elem {
        Elem(v.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.m == 1 {
            let s = a.0 as u64 + b.0 as u64;
            let p = self.p as u64;
            return Elem(if s >= p { s - p } else { s } as u32);
        }
        if let Some(t) = self.tables.as_ref().and_then(|t| t.add.as_ref()) {
            return Elem(t[(a.0 * self.q + b.0) as usize]);
        }
        self.add_digits(a.0, b.0)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.m == 1 {
            return if a.0 == 0 { a } else { Elem(self.p - a.0) };
        }
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        while x > 0 {
            let d = x % self.p;
            out += ((self.p - d) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            None => Elem(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32),
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    return Elem::ZERO;
                }
                let n = self.q - 1;
                let s = t.log[a.0 as usize] + t.log[b.0 as usize];
                Elem(t.exp[(if s >= n { s - n } else { s }) as usize])
            }
        }
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` by repeated squaring; `0^0 = 1`.
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        if let Some(t) = &self.tables {
            let n = (self.q - 1) as u64;
            let idx = (t.log[a.0 as usize] as u64 * (e % n)) % n;
            return Elem(t.exp[idx as usize]);
        }
        let p = self.p as u64;
        let (mut base, mut e, mut acc) = (a.0 as u64 % p, e, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Elem(acc as u32)
    }

    /// `{a^k : a ∈ F_q}` in encoding order.
    pub fn kth_power_image(&self, k: u64) -> Vec<Elem> {
        let mut hit = vec![false; self.q as usize];
        for a in self.elements() {
            hit[self.pow(a, k).0 as usize] = true;
        }
        self.elements().filter(|a| hit[a.0 as usize]).collect()
    }

    /// `{a : a^k = λ}` in encoding order.
    pub fn kth_roots(&self, lambda: Elem, k: u64) -> Vec<Elem> {
        self.elements().filter(|&a| self.pow(a, k) == lambda).collect()
    }

    /// Whether `x^k = -1` has a solution. In characteristic 2 this holds
    /// trivially since `-1 = 1`.
    pub fn minus_one_is_kth_power(&self, k: u64) -> bool {
        let minus_one = self.neg(Elem::ONE);
        self.elements().any(|a| self.pow(a, k) == minus_one)
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> Elem {
        let (mut out, mut place) = (0u32, 1u32);
        while a > 0 || b > 0 {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        Elem(out)
    }

    fn digits(&self, mut v: u32) -> Vec<u32> {
        let mut out = vec![0; self.m as usize];
        for d in out.iter_mut() {
            *d = v % self.p;
            v /= self.p;
        }
        out
    }

    fn encode(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    /// Polynomial product reduced by the modulus; only used to build tables.
    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let m = self.m as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut c = vec![0u64; 2 * m - 1];
        for i in 0..m {
            for j in 0..m {
                c[i + j] = (c[i + j] + da[i] as u64 * db[j] as u64) % p;
            }
        }
        for d in (m..2 * m - 1).rev() {
            let lead = c[d];
            if lead != 0 {
                for i in 0..m {
                    let sub = lead * self.modulus[i] as u64 % p;
                    c[d - m + i] = (c[d - m + i] + p - sub) % p;
                }
                c[d] = 0;
            }
        }
        let digits: Vec<u32> = c[..m].iter().map(|&x| x as u32).collect();
        self.encode(&digits)
    }

    fn build_tables(&self) -> ExtTables {
        let n = (self.q - 1) as usize;
        let mut exp = vec![0u32; n];
        let generator = (2..self.q)
            .find(|&g| {
                let mut x = 1u32;
                for step in 1..n {
                    x = self.mul_slow(x, g);
                    if x == 1 {
                        return step == n;
                    }
                }
                true
            })
            .unwrap_or(1);
        let mut x = 1u32;
        for slot in exp.iter_mut() {
            *slot = x;
            x = self.mul_slow(x, generator);
        }
        let mut log = vec![0u32; self.q as usize];
        for (i, &v) in exp.iter().enumerate() {
            log[v as usize] = i as u32;
        }
        let add = (self.q <= ADD_TABLE_ORDER).then(|| {
            let mut t = Vec::with_capacity((self.q * self.q) as usize);
            for a in 0..self.q {
                for b in 0..self.q {
                    t.push(self.add_digits(a, b).0);
                }
            }
            t
        });
        ExtTables { exp, log, add }
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `(p, m)` with `q = p^m`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut m) = (q, 0u32);
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

/// Remainder of `num` modulo the monic `den` over `F_p` (coefficients low first).
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let p = p as u64;
    let mut r: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = r.pop().unwrap_or(0);
        if lead != 0 {
            let base = r.len() - dd;
            for i in 0..dd {
                let sub = lead * den[i] as u64 % p;
                r[base + i] = (r[base + i] + p - sub) % p;
            }
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Exhaustive trial division by every monic polynomial of degree `1..=deg/2`.
/// Exact for the degrees this module supports.
fn is_irreducible(coeffs: &[u32], p: u32) -> bool {
    let deg = coeffs.len() - 1;
    if deg <= 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for enc in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut v = enc;
            for _ in 0..d {
                divisor.push((v % p as u64) as u32);
                v /= p as u64;
            }
            divisor.push(1);
            if poly_rem(coeffs, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn default_modulus(p: u32, m: u32) -> Vec<u32> {
    if m == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(m);
    for enc in 0..count {
        let mut coeffs = Vec::with_capacity(m as usize + 1);
        let mut v = enc;
        for _ in 0..m {
            coeffs.push((v % p as u64) as u32);
            v /= p as u64;
        }
        coeffs.push(1);
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over F_p")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_small_fields() -> Vec<Field> {
        (2..=49u64)
            .filter_map(prime_power)
            .filter(|&(_, m)| m <= 4)
            .map(|(p, m)| Field::new(p, m, None).unwrap())
            .collect()
    }

    #[test]
    fn make_field_examples() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.order(), 7);
        let f9 = Field::new(3, 2, Some(&[1, 0, 1])).unwrap();
        assert_eq!(f9.order(), 9);
        for t in 0..3u64 {
            assert_ne!((t * t + 1) % 3, 0);
        }
        assert_eq!(Field::new(4, 1, None), Err(FieldError::NotPrime(4)));
    }

    #[test]
    fn modulus_errors() {
        // x^2 + 2 = (x + 1)(x + 2) over F_3
        assert!(matches!(
            Field::new(3, 2, Some(&[2, 0, 1])),
            Err(FieldError::ReducibleModulus { .. })
        ));
        assert_eq!(
            Field::new(3, 2, Some(&[1, 1, 0, 1])),
            Err(FieldError::DegreeMismatch { expected: 2, found: 3 })
        );
        // (x^2 + 1)^2 over F_3 has no roots but is reducible
        assert!(matches!(
            Field::new(3, 4, Some(&[1, 0, 2, 0, 1])),
            Err(FieldError::ReducibleModulus { .. })
        ));
        assert_eq!(Field::new(3, 5, None), Err(FieldError::UnsupportedDegree(5)));
    }

    #[test]
    fn default_modulus_is_smallest() {
        // x^2 + 1 (encoding 1) is the first irreducible quadratic over F_3.
        assert_eq!(Field::new(3, 2, None).unwrap().modulus(), &[1, 0, 1]);
        // x^2 + x + 1 over F_2.
        assert_eq!(Field::new(2, 2, None).unwrap().modulus(), &[1, 1, 1]);
    }

    #[test]
    fn parse_and_display() {
        let f: Field = "3^2/1,0,1".parse().unwrap();
        assert_eq!(f.to_string(), "3^2/1,0,1");
        assert_eq!("9".parse::<Field>().unwrap(), f);
        assert_eq!("13".parse::<Field>().unwrap().to_string(), "13");
        assert!("12".parse::<Field>().is_err());
        assert!("x^2".parse::<Field>().is_err());
    }

    #[test]
    fn arith_examples() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.inv(Elem(3)).unwrap(), Elem(5));
        assert_eq!(f7.neg(Elem(1)), Elem(6));
        assert_eq!(f7.inv(Elem(0)), Err(FieldError::DivisionByZero));
        let f9 = Field::new(3, 2, Some(&[1, 0, 1])).unwrap();
        // x is encoded as 3; x*x = -1 = 2
        assert_eq!(f9.mul(Elem(3), Elem(3)), Elem(2));
    }

    #[test]
    fn pow_examples() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.pow(Elem(3), 2), Elem(2));
        assert_eq!(f7.pow(Elem(0), 0), Elem(1));
        let f13 = Field::prime(13).unwrap();
        assert_eq!(f13.pow(Elem(5), 2), Elem(12));
        for a in f13.elements() {
            assert_eq!(f13.pow(a, 1), a);
        }
    }

    #[test]
    fn power_image_and_roots() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.kth_power_image(2), vec![Elem(0), Elem(1), Elem(2), Elem(4)]);
        let f13 = Field::prime(13).unwrap();
        let cubes = f13.kth_power_image(3);
        assert_eq!(cubes, [0, 1, 5, 8, 12].map(Elem).to_vec());
        assert_eq!(cubes.len() - 1, 12 / 3);
        assert_eq!(f13.kth_power_image(1).len(), 13);
        assert_eq!(f13.kth_roots(Elem(1), 3), vec![Elem(1), Elem(3), Elem(9)]);
        assert_eq!(f13.kth_roots(Elem(0), 5), vec![Elem(0)]);
        assert!(f7.kth_roots(Elem(3), 2).is_empty());
    }

    #[test]
    fn minus_one_examples() {
        let f13 = Field::prime(13).unwrap();
        assert!(f13.minus_one_is_kth_power(2));
        assert!(f13.minus_one_is_kth_power(3));
        assert!(!Field::prime(7).unwrap().minus_one_is_kth_power(2));
        assert!(Field::new(2, 3, None).unwrap().minus_one_is_kth_power(2));
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in all_small_fields() {
            let els: Vec<Elem> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE, "{f}");
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_fixes_everything() {
        for f in all_small_fields() {
            for a in f.elements() {
                assert_eq!(f.pow(a, f.order() as u64), a);
            }
        }
    }

    #[test]
    fn power_image_size_formula() {
        for f in all_small_fields() {
            let n = f.order() as u64 - 1;
            for k in 1..=12u64 {
                let nonzero = f.kth_power_image(k).len() - 1;
                assert_eq!(nonzero as u64, n / gcd(k, n), "{f} k={k}");
            }
        }
    }

    #[test]
    fn roots_are_exact_preimages() {
        for f in all_small_fields() {
            for k in 1..=6u64 {
                for lambda in f.elements() {
                    let roots = f.kth_roots(lambda, k);
                    for a in f.elements() {
                        assert_eq!(roots.contains(&a), f.pow(a, k) == lambda);
                    }
                    if !lambda.is_zero() && !roots.is_empty() {
                        let g = gcd(k, f.order() as u64 - 1) as usize;
                        assert_eq!(g % roots.len(), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(32), Some((2, 5)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
