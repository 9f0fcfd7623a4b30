//! Exact coefficient fields: arbitrary-precision rationals and prime fields.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg;

/// An exact field of coefficients.
///
/// Arithmetic goes through named methods rather than operator overloads so
/// generic code can work with borrowed values throughout.
pub trait Field:
    Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Short human-readable name used in reports and exports.
    const NAME: &'static str;
    /// Characteristic of the field (0 for the rationals).
    const CHARACTERISTIC: u64;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(v: i64) -> Self;
    /// `num / den`, or `None` if `den` vanishes in the field.
    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self>;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    /// Image in `GF(p)`, or `None` when a denominator is divisible by `p`.
    fn residue(&self, p: u64) -> Option<u64>;
    /// Whether the printed form starts with a minus sign.
    fn is_negative(&self) -> bool;
    /// Exact rank of a dense matrix given by rows.
    fn rank(rows: Vec<Vec<Self>>) -> usize;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }
}

/// Arbitrary-precision rational number.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Field for Rational {
    const NAME: &'static str = "QQ";
    const CHARACTERISTIC: u64 = 0;

    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn from_i64(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }
    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        if den.is_zero() {
            None
        } else {
            Some(Rational(BigRational::new(num.clone(), den.clone())))
        }
    }
    fn add(&self, other: &Self) -> Self {
        Rational(&self.0 + &other.0)
    }
    fn sub(&self, other: &Self) -> Self {
        Rational(&self.0 - &other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        Rational(&self.0 * &other.0)
    }
    fn neg(&self) -> Self {
        Rational(-&self.0)
    }
    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }
    fn residue(&self, p: u64) -> Option<u64> {
        let pb = BigInt::from(p);
        let n = self.0.numer().mod_floor(&pb).to_u64()?;
        let d = self.0.denom().mod_floor(&pb).to_u64()?;
        if d == 0 {
            return None;
        }
        Some(linalg::mul_mod(n, linalg::inv_mod(d, p), p))
    }
    fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
    fn rank(rows: Vec<Vec<Self>>) -> usize {
        // clear denominators row by row, then fraction-free elimination
        let int_rows: Vec<Vec<BigInt>> = rows
            .into_iter()
            .map(|row| {
                let lcm = row
                    .iter()
                    .fold(BigInt::one(), |acc, q| acc.lcm(q.0.denom()));
                row.into_iter()
                    .map(|q| q.0.numer() * (&lcm / q.0.denom()))
                    .collect()
            })
            .collect();
        linalg::bareiss_rank(int_rows)
    }
}

/// Element of the prime field `GF(P)`, stored as its least non-negative residue.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Fp<const P: u32>(u32);

/// The prime field offered as the fast mode.
pub type Gf32003 = Fp<32003>;

impl<const P: u32> Fp<P> {
    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    /// Symmetric representative in `(-P/2, P/2]`.
    pub fn signed(self) -> i64 {
        let v = self.0 as i64;
        if v > (P as i64) / 2 {
            v - P as i64
        } else {
            v
        }
    }
}

impl<const P: u32> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.signed())
    }
}

impl<const P: u32> Field for Fp<P> {
    const NAME: &'static str = "GF(p)";
    const CHARACTERISTIC: u64 = P as u64;

    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn from_i64(v: i64) -> Self {
        Fp::new(v)
    }
    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        let pb = BigInt::from(P);
        let n = num.mod_floor(&pb).to_u64()?;
        let d = den.mod_floor(&pb).to_u64()?;
        if d == 0 {
            return None;
        }
        let p = P as u64;
        Some(Fp(linalg::mul_mod(n, linalg::inv_mod(d, p), p) as u32))
    }
    fn add(&self, other: &Self) -> Self {
        Fp(((self.0 as u64 + other.0 as u64) % P as u64) as u32)
    }
    fn sub(&self, other: &Self) -> Self {
        Fp(((self.0 as u64 + P as u64 - other.0 as u64) % P as u64) as u32)
    }
    fn mul(&self, other: &Self) -> Self {
        Fp(((self.0 as u64 * other.0 as u64) % P as u64) as u32)
    }
    fn neg(&self) -> Self {
        Fp(((P as u64 - self.0 as u64) % P as u64) as u32)
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(Fp(linalg::inv_mod(self.0 as u64, P as u64) as u32))
        }
    }
    fn residue(&self, p: u64) -> Option<u64> {
        // only meaningful when reducing into the same field
        (p == P as u64).then_some(self.0 as u64)
    }
    fn is_negative(&self) -> bool {
        self.signed() < 0
    }
    fn rank(rows: Vec<Vec<Self>>) -> usize {
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.0 as u64).collect())
            .collect();
        linalg::rank_mod_p(rows, P as u64)
    }
}

/// Which exact field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldMode {
    Rational,
    Prime,
}

impl FieldMode {
    pub fn from_name(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rational" | "q" | "qq" => Some(FieldMode::Rational),
            "prime" | "gf" | "gf32003" | "32003" => Some(FieldMode::Prime),
            _ => None,
        }
    }
}
