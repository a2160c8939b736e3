//! Exact arithmetic in Q_p at bounded relative precision.
//!
//! A nonzero element is stored as `p^valuation * unit` where `unit` is a
//! p-adic unit known modulo `p^precision`. The valuation is always exact:
//! any operation that would leave it ambiguous (a subtraction cancelling
//! every carried digit) reports [`Error::PrecisionExhausted`] instead of
//! guessing. Zero is a distinguished exact value.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Default number of significant base-p digits carried by the arithmetic.
pub const DEFAULT_PRECISION: usize = 64;

/// The p-adic norm of a number: either 0 or an integer power of p.
///
/// `Exp(e)` denotes the value `p^(-e)`, i.e. `e` is the valuation of the
/// underlying number. The total order is the order of the real values:
/// `Zero` is least, and a smaller exponent means a larger norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Norm {
    Zero,
    /// Norm value p^(-e).
    Exp(i64),
}

impl Norm {
    pub fn is_zero(&self) -> bool {
        matches!(self, Norm::Zero)
    }

    /// The exponent `e` with norm = p^(-e); `None` for the zero norm.
    pub fn exponent(&self) -> Option<i64> {
        match self {
            Norm::Zero => None,
            Norm::Exp(e) => Some(*e),
        }
    }

    pub fn one() -> Norm {
        Norm::Exp(0)
    }

    /// Norms are multiplicative; exponents add.
    pub fn mul(self, other: Norm) -> Norm {
        match (self, other) {
            (Norm::Zero, _) | (_, Norm::Zero) => Norm::Zero,
            (Norm::Exp(a), Norm::Exp(b)) => Norm::Exp(a + b),
        }
    }

    /// Render as e.g. `"5^-2"`, `"1"`, or `"0"` given the prime.
    pub fn render(&self, prime: u64) -> String {
        match self {
            Norm::Zero => "0".to_string(),
            Norm::Exp(0) => "1".to_string(),
            Norm::Exp(e) => format!("{}^{}", prime, -e),
        }
    }
}

impl PartialOrd for Norm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Norm {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Norm::Zero, Norm::Zero) => Ordering::Equal,
            (Norm::Zero, _) => Ordering::Less,
            (_, Norm::Zero) => Ordering::Greater,
            // p^(-a) < p^(-b) iff a > b
            (Norm::Exp(a), Norm::Exp(b)) => b.cmp(a),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Zero,
    NonZero {
        valuation: i64,
        /// Unit part in [1, p^precision), not divisible by p.
        unit: BigUint,
    },
}

/// An element of Q_p carried to a fixed relative precision.
///
/// Equality is representation equality: same prime, valuation, unit digits
/// and precision. Use [`PAdic::congruent_mod`] or subtraction when two
/// numbers of different provenance must be compared at working precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdic {
    prime: u64,
    precision: usize,
    repr: Repr,
}

/// Deterministic Miller-Rabin for u64 (the witness set below is exact for
/// all 64-bit integers).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn mod_pow_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// p^k as a BigUint.
pub(crate) fn p_pow(p: u64, k: usize) -> BigUint {
    BigUint::from(p).pow(k as u32)
}

/// Exact p-adic valuation of a nonzero BigUint.
fn valuation_of(n: &BigUint, p: u64) -> (u64, BigUint) {
    debug_assert!(!n.is_zero());
    let pb = BigUint::from(p);
    let mut v = 0u64;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if r.is_zero() {
            v += 1;
            m = q;
        } else {
            return (v, m);
        }
    }
}

/// Exact p-adic valuation of a rational; `None` for zero.
pub fn rational_valuation(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let (vn, _) = valuation_of(&x.numer().abs().to_biguint().unwrap(), p);
    let (vd, _) = valuation_of(&x.denom().abs().to_biguint().unwrap(), p);
    Some(vn as i64 - vd as i64)
}

/// Modular inverse of `a` mod `m` (m a prime power, gcd(a, m) = 1).
pub(crate) fn mod_inverse(a: &BigUint, m: &BigUint) -> BigUint {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let ext = a.extended_gcd(&m);
    debug_assert!(ext.gcd.is_one(), "not invertible");
    let mut x = ext.x % &m;
    if x.is_negative() {
        x += &m;
    }
    x.to_biguint().unwrap()
}

impl PAdic {
    /// The exact zero of Q_p.
    pub fn zero(prime: u64, precision: usize) -> PAdic {
        PAdic {
            prime,
            precision,
            repr: Repr::Zero,
        }
    }

    pub fn one(prime: u64, precision: usize) -> PAdic {
        PAdic {
            prime,
            precision,
            repr: Repr::NonZero {
                valuation: 0,
                unit: BigUint::one(),
            },
        }
    }

    /// Build `p^valuation * unit` from a raw unit (must not be divisible
    /// by p); the unit is reduced mod p^precision.
    pub(crate) fn from_parts(prime: u64, precision: usize, valuation: i64, unit: BigUint) -> PAdic {
        let modulus = p_pow(prime, precision);
        let unit = unit % &modulus;
        debug_assert!(!(&unit % prime).is_zero(), "unit part divisible by p");
        PAdic {
            prime,
            precision,
            repr: Repr::NonZero { valuation, unit },
        }
    }

    /// Interpret an integer known modulo p^abs_precision as an element of
    /// Z_p: extracts its exact valuation when it is nonzero mod p^abs_precision,
    /// and reports the remaining relative precision. Returns zero when the
    /// residue is 0 (the value is then indistinguishable from 0 and the caller
    /// must decide; here we only use it where 0 means exactly 0).
    pub(crate) fn from_integer_mod(
        prime: u64,
        abs_precision: usize,
        n: &BigUint,
    ) -> Result<PAdic> {
        let modulus = p_pow(prime, abs_precision);
        let n = n % &modulus;
        if n.is_zero() {
            return Err(Error::PrecisionExhausted(format!(
                "integer residue is 0 mod {}^{}",
                prime, abs_precision
            )));
        }
        let (v, unit) = valuation_of(&n, prime);
        let rel = abs_precision - v as usize;
        Ok(PAdic::from_parts(prime, rel, v as i64, unit))
    }

    /// Canonical expansion of the rational numerator/denominator, truncated
    /// to `precision` significant digits. The valuation is exact.
    pub fn parse_rational(
        numerator: i64,
        denominator: i64,
        prime: u64,
        precision: usize,
    ) -> Result<PAdic> {
        if denominator == 0 {
            return Err(Error::DivisionByZero);
        }
        let q = BigRational::new(BigInt::from(numerator), BigInt::from(denominator));
        PAdic::from_rational(&q, prime, precision)
    }

    /// Same as [`PAdic::parse_rational`] for an arbitrary exact rational.
    pub fn from_rational(x: &BigRational, prime: u64, precision: usize) -> Result<PAdic> {
        check_prime(prime)?;
        if precision == 0 {
            return Err(Error::BadParameter("precision must be >= 1".into()));
        }
        if x.is_zero() {
            return Ok(PAdic::zero(prime, precision));
        }
        let (vn, nu) = valuation_of(&x.numer().abs().to_biguint().unwrap(), prime);
        let (vd, du) = valuation_of(&x.denom().abs().to_biguint().unwrap(), prime);
        let valuation = vn as i64 - vd as i64;
        let modulus = p_pow(prime, precision);
        let mut unit = (nu % &modulus) * mod_inverse(&(du % &modulus), &modulus) % &modulus;
        // sign: numer * denom < 0 means the value is negative
        if (x.numer().is_negative()) != (x.denom().is_negative()) {
            unit = &modulus - unit;
        }
        Ok(PAdic::from_parts(prime, precision, valuation, unit))
    }

    pub fn from_integer(n: i64, prime: u64, precision: usize) -> Result<PAdic> {
        PAdic::parse_rational(n, 1, prime, precision)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    /// Exact valuation; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero => None,
            Repr::NonZero { valuation, .. } => Some(*valuation),
        }
    }

    pub fn norm(&self) -> Norm {
        match self.valuation() {
            None => Norm::Zero,
            Some(v) => Norm::Exp(v),
        }
    }

    /// The unit part reduced mod p^precision (1 for... none for zero).
    pub(crate) fn unit(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Zero => None,
            Repr::NonZero { unit, .. } => Some(unit),
        }
    }

    /// Base-p digits of the unit part, `digits[0] != 0`; empty for zero.
    pub fn digits(&self) -> Vec<u64> {
        match &self.repr {
            Repr::Zero => Vec::new(),
            Repr::NonZero { unit, .. } => {
                let pb = BigUint::from(self.prime);
                let mut digits = Vec::with_capacity(self.precision);
                let mut m = unit.clone();
                for _ in 0..self.precision {
                    let (q, r) = m.div_rem(&pb);
                    digits.push(r.to_u64().unwrap());
                    m = q;
                }
                digits
            }
        }
    }

    fn assert_same_prime(&self, other: &PAdic) {
        assert_eq!(
            self.prime, other.prime,
            "operands live in different p-adic fields"
        );
    }

    pub fn add(&self, other: &PAdic) -> Result<PAdic> {
        self.assert_same_prime(other);
        let (vx, ux) = match &self.repr {
            Repr::Zero => return Ok(other.clone()),
            Repr::NonZero { valuation, unit } => (*valuation, unit),
        };
        let (vy, uy) = match &other.repr {
            Repr::Zero => return Ok(self.clone()),
            Repr::NonZero { valuation, unit } => (*valuation, unit),
        };
        let p = self.prime;
        // absolute precision of the sum
        let abs = (vx + self.precision as i64).min(vy + other.precision as i64);
        let v = vx.min(vy);
        let rel = (abs - v) as usize;
        debug_assert!(rel >= 1);
        let modulus = p_pow(p, rel);
        // a term shifted past the carried window contributes nothing
        let shifted = |u: &BigUint, gap: i64| -> BigUint {
            if gap as usize >= rel {
                BigUint::ZERO
            } else {
                u * p_pow(p, gap as usize) % &modulus
            }
        };
        let s = (shifted(ux, vx - v) + shifted(uy, vy - v)) % &modulus;
        if s.is_zero() {
            return Err(Error::PrecisionExhausted(format!(
                "sum cancels all digits below p^{abs}"
            )));
        }
        let (shift, unit) = valuation_of(&s, p);
        Ok(PAdic::from_parts(
            p,
            rel - shift as usize,
            v + shift as i64,
            unit,
        ))
    }

    pub fn neg(&self) -> PAdic {
        match &self.repr {
            Repr::Zero => self.clone(),
            Repr::NonZero { valuation, unit } => {
                let modulus = p_pow(self.prime, self.precision);
                PAdic::from_parts(self.prime, self.precision, *valuation, &modulus - unit)
            }
        }
    }

    pub fn sub(&self, other: &PAdic) -> Result<PAdic> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PAdic) -> PAdic {
        self.assert_same_prime(other);
        match (&self.repr, &other.repr) {
            (Repr::Zero, _) | (_, Repr::Zero) => {
                PAdic::zero(self.prime, self.precision.min(other.precision))
            }
            (
                Repr::NonZero {
                    valuation: vx,
                    unit: ux,
                },
                Repr::NonZero {
                    valuation: vy,
                    unit: uy,
                },
            ) => {
                let prec = self.precision.min(other.precision);
                PAdic::from_parts(self.prime, prec, vx + vy, ux * uy)
            }
        }
    }

    pub fn inv(&self) -> Result<PAdic> {
        match &self.repr {
            Repr::Zero => Err(Error::DivisionByZero),
            Repr::NonZero { valuation, unit } => {
                let modulus = p_pow(self.prime, self.precision);
                Ok(PAdic::from_parts(
                    self.prime,
                    self.precision,
                    -valuation,
                    mod_inverse(unit, &modulus),
                ))
            }
        }
    }

    pub fn div(&self, other: &PAdic) -> Result<PAdic> {
        self.assert_same_prime(other);
        Ok(self.mul(&other.inv()?))
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow_int(&self, n: i64) -> Result<PAdic> {
        if n == 0 {
            return Ok(PAdic::one(self.prime, self.precision));
        }
        let base = if n < 0 { self.inv()? } else { self.clone() };
        if base.is_zero() {
            return Ok(base);
        }
        let mut acc = PAdic::one(self.prime, base.precision);
        let mut b = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        Ok(acc)
    }

    /// p-adic exponential: the sum of x^n/n! over n >= 0.
    ///
    /// Converges exactly when |x|_p < p^(-1/(p-1)), i.e. valuation >= 1 for
    /// odd p and >= 2 for p = 2.
    pub fn exp_p(&self) -> Result<PAdic> {
        let min_val: i64 = if self.prime == 2 { 2 } else { 1 };
        match self.valuation() {
            None => return Ok(PAdic::one(self.prime, self.precision)),
            Some(v) if v < min_val => {
                return Err(Error::OutOfDomain(format!(
                    "exp_p requires valuation >= {min_val}, got {v}"
                )))
            }
            Some(_) => {}
        }
        // The result is a unit; summing until terms drop below the carried
        // absolute precision makes the partial sum exact to that precision.
        let target = self.precision as i64;
        let mut sum = PAdic::one(self.prime, self.precision);
        let mut term = PAdic::one(self.prime, self.precision);
        let mut n: i64 = 1;
        loop {
            let nk = PAdic::from_integer(n, self.prime, self.precision)?;
            term = term.mul(self).div(&nk)?;
            match term.valuation() {
                Some(v) if v <= target => {
                    sum = sum.add(&term)?;
                }
                _ => break,
            }
            n += 1;
        }
        Ok(sum)
    }

    /// Exact test for |self - other|_p <= p^(-t), decided from digits without
    /// subtraction. When the carried digits cannot distinguish the two values
    /// they are treated as congruent (equal at working precision).
    pub fn congruent_mod(&self, other: &PAdic, t: i64) -> bool {
        self.assert_same_prime(other);
        match (&self.repr, &other.repr) {
            (Repr::Zero, Repr::Zero) => true,
            (Repr::Zero, Repr::NonZero { valuation, .. })
            | (Repr::NonZero { valuation, .. }, Repr::Zero) => *valuation >= t,
            (
                Repr::NonZero {
                    valuation: vx,
                    unit: ux,
                },
                Repr::NonZero {
                    valuation: vy,
                    unit: uy,
                },
            ) => {
                if vx != vy {
                    return (*vx).min(*vy) >= t;
                }
                let v = *vx;
                if v >= t {
                    return true;
                }
                // compare units modulo p^(t - v), capped by carried digits
                let avail = self.precision.min(other.precision);
                let need = ((t - v) as usize).min(avail);
                let modulus = p_pow(self.prime, need);
                ux % &modulus == uy % &modulus
            }
        }
    }

    /// |x|_p <= 1.
    pub fn in_zp(&self) -> bool {
        match self.valuation() {
            None => true,
            Some(v) => v >= 0,
        }
    }

    /// |x|_p = 1.
    pub fn in_unit_sphere(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// x in E_p: |x|_p = 1 and |x - 1|_p < p^(-1/(p-1)).
    ///
    /// For odd p this is x ≡ 1 (mod p); for p = 2 it is x ≡ 1 (mod 4).
    pub fn in_ep(&self) -> bool {
        if !self.in_unit_sphere() {
            return false;
        }
        let one = PAdic::one(self.prime, self.precision);
        let t = if self.prime == 2 { 2 } else { 1 };
        self.congruent_mod(&one, t)
    }

    /// Render the canonical expansion, e.g. `5^-2*(3+1*5+2*5^2)`.
    pub fn literal(&self) -> String {
        match &self.repr {
            Repr::Zero => "0".to_string(),
            Repr::NonZero { valuation, .. } => {
                let digits = self.digits();
                let last = digits.iter().rposition(|&d| d != 0).unwrap_or(0);
                let mut terms = Vec::new();
                for (i, &d) in digits[..=last].iter().enumerate() {
                    if d == 0 {
                        continue;
                    }
                    let t = match i {
                        0 => format!("{d}"),
                        1 => format!("{d}*{}", self.prime),
                        _ => format!("{d}*{}^{i}", self.prime),
                    };
                    terms.push(t);
                }
                format!("{}^{}*({})", self.prime, valuation, terms.join("+"))
            }
        }
    }
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.literal())
    }
}

/// JSON shape for a p-adic number: `{prime, valuation, digits, precision}`
/// or `{zero: true, prime, precision}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PAdicJson {
    Zero {
        zero: bool,
        prime: u64,
        precision: usize,
    },
    Value {
        prime: u64,
        valuation: i64,
        digits: Vec<u64>,
        precision: usize,
    },
}

impl Serialize for PAdic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let json = match &self.repr {
            Repr::Zero => PAdicJson::Zero {
                zero: true,
                prime: self.prime,
                precision: self.precision,
            },
            Repr::NonZero { valuation, .. } => PAdicJson::Value {
                prime: self.prime,
                valuation: *valuation,
                digits: self.digits(),
                precision: self.precision,
            },
        };
        json.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PAdic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = PAdicJson::deserialize(d)?;
        match json {
            PAdicJson::Zero {
                prime, precision, ..
            } => Ok(PAdic::zero(prime, precision)),
            PAdicJson::Value {
                prime,
                valuation,
                digits,
                precision,
            } => {
                if digits.is_empty() || digits[0] == 0 || digits.iter().any(|&d| d >= prime) {
                    return Err(serde::de::Error::custom("invalid digit sequence"));
                }
                let mut unit = BigUint::zero();
                for &d in digits.iter().rev() {
                    unit = unit * prime + d;
                }
                Ok(PAdic::from_parts(prime, precision, valuation, unit))
            }
        }
    }
}

/// An open ball B(center, p^radius_exponent) = { x : |x - center|_p < p^e }.
#[derive(Debug, Clone, Serialize)]
pub struct PAdicBall {
    pub center: PAdic,
    pub radius_exponent: i64,
}

impl PAdicBall {
    pub fn new(center: PAdic, radius_exponent: i64) -> PAdicBall {
        PAdicBall {
            center,
            radius_exponent,
        }
    }

    /// Exact ultrametric membership: |x - center|_p < p^e, i.e.
    /// |x - center|_p <= p^(e-1).
    pub fn contains(&self, x: &PAdic) -> bool {
        x.congruent_mod(&self.center, 1 - self.radius_exponent)
    }

    /// Balls over Q_p are nested or disjoint; this reports `true` when the
    /// two balls share at least one point (then one contains the other).
    pub fn intersects(&self, other: &PAdicBall) -> bool {
        let larger = self.radius_exponent.max(other.radius_exponent);
        self.center.congruent_mod(&other.center, 1 - larger)
    }
}

/// Outcome of an exact sum of p-adic terms where intermediate sums may
/// cancel completely.
#[derive(Debug, Clone)]
pub enum SumOutcome {
    /// Every term was the exact zero.
    ExactZero,
    /// Terms cancelled down to 0 modulo p^abs: indistinguishable from zero.
    ApproxZero { abs: i64 },
    Value(PAdic),
}

/// Sum p-adic values, tolerating exact intermediate cancellation. A full
/// cancellation is tracked as "zero known to absolute precision" and can be
/// re-absorbed by later terms with the appropriate loss of precision.
pub fn sum_padics<'a, I: IntoIterator<Item = &'a PAdic>>(terms: I, prime: u64) -> SumOutcome {
    let mut state = SumOutcome::ExactZero;
    for t in terms {
        assert_eq!(t.prime(), prime);
        state = match state {
            SumOutcome::ExactZero => {
                if t.is_zero() {
                    SumOutcome::ExactZero
                } else {
                    SumOutcome::Value(t.clone())
                }
            }
            SumOutcome::ApproxZero { abs } => {
                if t.is_zero() {
                    SumOutcome::ApproxZero { abs }
                } else {
                    let v = t.valuation().unwrap();
                    if v >= abs {
                        // the term is lost below the known precision
                        SumOutcome::ApproxZero { abs }
                    } else {
                        let rel = ((abs - v) as usize).min(t.precision());
                        SumOutcome::Value(PAdic::from_parts(
                            prime,
                            rel,
                            v,
                            t.unit().unwrap().clone(),
                        ))
                    }
                }
            }
            SumOutcome::Value(acc) => {
                if t.is_zero() {
                    SumOutcome::Value(acc)
                } else {
                    match acc.add(t) {
                        Ok(s) => SumOutcome::Value(s),
                        Err(Error::PrecisionExhausted(_)) => {
                            let abs = (acc.valuation().unwrap() + acc.precision() as i64)
                                .min(t.valuation().unwrap() + t.precision() as i64);
                            SumOutcome::ApproxZero { abs }
                        }
                        Err(_) => unreachable!("add only fails with PrecisionExhausted"),
                    }
                }
            }
        };
    }
    state
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64, p: u64) -> PAdic {
        PAdic::parse_rational(n, d, p, 16).unwrap()
    }

    #[test]
    fn parse_zero() {
        let z = PAdic::parse_rational(0, 1, 5, 10).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.norm(), Norm::Zero);
    }

    #[test]
    fn parse_p_itself() {
        let x = PAdic::parse_rational(5, 1, 5, 10).unwrap();
        assert_eq!(x.valuation(), Some(1));
        let d = x.digits();
        assert_eq!(d[0], 1);
        assert!(d[1..].iter().all(|&v| v == 0));
        assert_eq!(x.norm(), Norm::Exp(1)); // |5|_5 = 1/5
    }

    #[test]
    fn parse_three_quarters_at_two() {
        // 3/4 = 2^-2 * 3, and 3 = 1 + 2
        let x = PAdic::parse_rational(3, 4, 2, 10).unwrap();
        assert_eq!(x.valuation(), Some(-2));
        let d = x.digits();
        assert_eq!(&d[..3], &[1, 1, 0]);
        assert_eq!(x.norm(), Norm::Exp(-2)); // norm 4
    }

    #[test]
    fn parse_rejects_non_prime() {
        assert_eq!(
            PAdic::parse_rational(1, 2, 6, 10).unwrap_err(),
            Error::NotPrime(6)
        );
    }

    #[test]
    fn norm_of_twelve_at_two() {
        // 12 = 2^2 * 3
        let x = q(12, 1, 2);
        assert_eq!(x.norm(), Norm::Exp(2)); // 1/4
    }

    #[test]
    fn additive_identity() {
        let x = q(7, 3, 5);
        let z = PAdic::zero(5, 16);
        assert_eq!(x.add(&z).unwrap(), x);
        assert_eq!(z.add(&x).unwrap(), x);
    }

    #[test]
    fn multiplicative_inverse() {
        let x = q(3, 4, 2);
        let y = q(4, 3, 2);
        let prod = x.mul(&y);
        assert_eq!(prod.valuation(), Some(0));
        assert!(prod.congruent_mod(&PAdic::one(2, 16), 16));
    }

    #[test]
    fn ultrametric_dominance() {
        // |x|_5 = 1/5, |y|_5 = 1/25: |x+y| = 1/5
        let x = q(5, 1, 5);
        let y = q(25, 1, 5);
        assert_eq!(x.add(&y).unwrap().norm(), Norm::Exp(1));
    }

    #[test]
    fn full_cancellation_is_reported() {
        let x = q(7, 3, 5);
        match x.sub(&x) {
            Err(Error::PrecisionExhausted(_)) => {}
            other => panic!("expected PrecisionExhausted, got {other:?}"),
        }
    }

    #[test]
    fn partial_cancellation_keeps_exact_valuation() {
        // 6 - 1 = 5: valuation jumps to 1 exactly
        let x = q(6, 1, 5);
        let one = PAdic::one(5, 16);
        let d = x.sub(&one).unwrap();
        assert_eq!(d.valuation(), Some(1));
        assert_eq!(d.precision(), 15);
    }

    #[test]
    fn pow_int_negative() {
        let x = q(5, 1, 5);
        let y = x.pow_int(-2).unwrap();
        assert_eq!(y.valuation(), Some(-2));
        assert!(PAdic::zero(5, 16).pow_int(-1).is_err());
    }

    #[test]
    fn exp_of_zero_is_one() {
        let z = PAdic::zero(5, 16);
        assert_eq!(z.exp_p().unwrap(), PAdic::one(5, 16));
    }

    #[test]
    fn exp_norm_identities_at_five() {
        let x = q(5, 1, 5);
        let e = x.exp_p().unwrap();
        assert_eq!(e.norm(), Norm::one());
        let one = PAdic::one(5, 16);
        let d = e.sub(&one).unwrap();
        assert_eq!(d.norm(), x.norm()); // |exp_p(5) - 1|_5 = 1/5
    }

    #[test]
    fn exp_domain_violation() {
        let x = PAdic::one(3, 16);
        assert!(matches!(x.exp_p(), Err(Error::OutOfDomain(_))));
        // p = 2 needs valuation >= 2
        let y = q(2, 1, 2);
        assert!(matches!(y.exp_p(), Err(Error::OutOfDomain(_))));
        assert!(q(4, 1, 2).exp_p().is_ok());
    }

    #[test]
    fn region_predicates() {
        assert!(PAdic::one(5, 16).in_ep());
        assert!(q(6, 1, 5).in_ep()); // 6 = 1 + 5
        assert!(!q(2, 1, 5).in_ep());
        assert!(!q(5, 1, 5).in_unit_sphere());
        assert!(q(5, 1, 5).in_zp());
        assert!(!q(1, 5, 5).in_zp());
        // p = 2: need x ≡ 1 mod 4
        assert!(q(5, 1, 2).in_ep()); // 5 = 1 + 4
        assert!(!q(3, 1, 2).in_ep()); // 3 = 1 + 2
    }

    #[test]
    fn ball_membership() {
        let c = q(2, 1, 5);
        let ball = PAdicBall::new(c.clone(), 0); // radius 5^0 = 1, open
        assert!(ball.contains(&c));
        assert!(ball.contains(&q(7, 1, 5))); // |7-2| = 1/5 < 1
        assert!(!ball.contains(&q(3, 1, 5))); // |3-2| = 1, boundary excluded
    }

    #[test]
    fn norm_ordering() {
        assert!(Norm::Zero < Norm::Exp(10));
        assert!(Norm::Exp(2) < Norm::Exp(1)); // 1/25 < 1/5
        assert!(Norm::Exp(-1) > Norm::Exp(0)); // 5 > 1
        assert_eq!(Norm::Exp(1).mul(Norm::Exp(2)), Norm::Exp(3));
    }

    #[test]
    fn literal_rendering() {
        let x = q(3, 4, 2);
        assert_eq!(x.literal(), "2^-2*(1+1*2)");
        assert_eq!(PAdic::zero(5, 4).literal(), "0");
    }

    #[test]
    fn serde_round_trip() {
        let x = q(22, 7, 5);
        let s = serde_json::to_string(&x).unwrap();
        let y: PAdic = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        let z = PAdic::zero(5, 8);
        let s = serde_json::to_string(&z).unwrap();
        assert!(s.contains("zero"));
        let w: PAdic = serde_json::from_str(&s).unwrap();
        assert!(w.is_zero());
    }

    #[test]
    fn sum_with_exact_cancellation() {
        let x = q(7, 3, 5);
        let terms = [x.clone(), x.neg(), q(25, 1, 5)];
        match sum_padics(terms.iter(), 5) {
            SumOutcome::Value(v) => assert_eq!(v.valuation(), Some(2)),
            other => panic!("expected value, got {other:?}"),
        }
    }
}
