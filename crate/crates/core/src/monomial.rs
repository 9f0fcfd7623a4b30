//! Monomials as exponent vectors, term orders, and the text grammar
//! `x1^2*x2*u1`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest exponent accepted anywhere in the crate.
pub const MAX_EXPONENT: u64 = (1 << 31) - 1;

/// Variable layout of a polynomial ring `K[x1..xn, u1..ut]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    pub n: usize,
    pub t: usize,
}

impl Ring {
    pub fn new(n: usize, t: usize) -> Self {
        Ring { n, t }
    }

    pub fn nvars(&self) -> usize {
        self.n + self.t
    }

    pub fn var_name(&self, index: usize) -> String {
        if index < self.n {
            format!("x{}", index + 1)
        } else {
            format!("u{}", index - self.n + 1)
        }
    }

    fn var_index(&self, kind: char, k: usize) -> Option<usize> {
        match kind {
            'x' if (1..=self.n).contains(&k) => Some(k - 1),
            'u' if (1..=self.t).contains(&k) => Some(self.n + k - 1),
            _ => None,
        }
    }
}

/// A monomial `x^a`, stored as its exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Result<Self> {
        if exps.is_empty() {
            return Err(Error::LengthMismatch {
                expected: 1,
                found: 0,
            });
        }
        if let Some(&e) = exps.iter().find(|&&e| e as u64 > MAX_EXPONENT) {
            return Err(Error::ExponentOverflow(e as u64));
        }
        Ok(Monomial { exps })
    }

    /// Constructor for internal use where exponents are known to be valid.
    pub(crate) fn from_vec(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
        }
    }

    pub fn var(nvars: usize, index: usize, exponent: u32) -> Self {
        let mut exps = vec![0; nvars];
        exps[index] = exponent;
        Monomial { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.exps[index]
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Index of the variable if this is a pure power `x_j^a` with `a >= 1`.
    pub fn pure_power_of(&self) -> Option<usize> {
        let mut support = self.support();
        match (support.next(), support.next()) {
            (Some(j), None) => Some(j),
            _ => None,
        }
    }

    /// Indices of the variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, _)| j)
    }

    fn check_len(&self, other: &Monomial) -> Result<()> {
        if self.exps.len() != other.exps.len() {
            return Err(Error::LengthMismatch {
                expected: self.exps.len(),
                found: other.exps.len(),
            });
        }
        Ok(())
    }

    /// Componentwise `self <= other`, i.e. `self | other`.
    pub fn divides(&self, other: &Monomial) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.divides_unchecked(other))
    }

    pub(crate) fn divides_unchecked(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn lcm_with(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        }
    }

    pub fn gcd_with(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a.min(b))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// `self / other` when `other | self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if self.exps.len() != other.exps.len() || !other.divides_unchecked(self) {
            return None;
        }
        Some(Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// `self / gcd(self, other)`.
    pub fn colon(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a.saturating_sub(b))
                .collect(),
        }
    }

    /// Embed into a ring with `extra` more variables appended.
    pub fn extend(&self, extra: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps.extend(std::iter::repeat_n(0, extra));
        Monomial { exps }
    }

    /// Print in the text grammar using the variable names of `ring`.
    pub fn display_in(&self, ring: Ring) -> String {
        let mut parts = Vec::new();
        for (j, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(ring.var_name(j)),
                _ => parts.push(format!("{}^{}", ring.var_name(j), e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// Parse a monomial such as `x1^2*x3` or `1` in the given ring.
    pub fn parse_in(s: &str, ring: Ring) -> Result<Self> {
        parse_monomial(s, ring, 0)
    }
}

/// `lcm` of a nonempty collection of monomials.
pub fn lcm<'a>(ms: impl IntoIterator<Item = &'a Monomial>) -> Result<Monomial> {
    let mut it = ms.into_iter();
    let first = it.next().ok_or(Error::EmptyLcm)?.clone();
    it.try_fold(first, |acc, m| {
        acc.check_len(m)?;
        Ok(acc.lcm_with(m))
    })
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in(Ring::new(self.exps.len(), 0)))
    }
}

/// Parse a monomial starting at byte offset `offset` of the enclosing input
/// (used for column numbers in error messages).
pub(crate) fn parse_monomial(s: &str, ring: Ring, offset: usize) -> Result<Monomial> {
    let nvars = ring.nvars();
    let mut exps = vec![0u64; nvars];
    let trimmed = s.trim();
    let lead = offset + (s.len() - s.trim_start().len());
    if trimmed.is_empty() {
        return Err(Error::parse(lead + 1, "empty monomial"));
    }
    if trimmed == "1" {
        return Monomial::new(vec![0; nvars.max(1)]);
    }
    let mut pos = lead;
    for factor in trimmed.split('*') {
        let f = factor.trim();
        let col = pos + (factor.len() - factor.trim_start().len()) + 1;
        pos += factor.len() + 1;
        if f.is_empty() {
            return Err(Error::parse(col, "empty factor"));
        }
        if f == "1" {
            continue;
        }
        let (base, power) = match f.split_once('^') {
            Some((b, p)) => {
                let p: u64 = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(col, format!("bad exponent in `{f}`")))?;
                (b.trim(), p)
            }
            None => (f, 1),
        };
        let mut chars = base.chars();
        let kind = chars.next().unwrap_or(' ');
        let k: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::parse(col, format!("bad variable `{base}`")))?;
        let idx = ring
            .var_index(kind, k)
            .ok_or_else(|| Error::parse(col, format!("variable `{base}` not in ring")))?;
        exps[idx] += power;
    }
    let exps = exps
        .into_iter()
        .map(|e| {
            if e > MAX_EXPONENT {
                Err(Error::ExponentOverflow(e))
            } else {
                Ok(e as u32)
            }
        })
        .collect::<Result<Vec<u32>>>()?;
    Monomial::new(exps)
}

/// Highest `x` index used in a text, for inferring the number of variables.
pub(crate) fn max_x_index(s: &str) -> usize {
    let bytes = s.as_bytes();
    let mut best = 0;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'x' {
            let start = i + 1;
            let mut j = start;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if let Ok(k) = s[start..j].parse::<usize>() {
                best = best.max(k);
            }
            i = j;
        } else {
            i += 1;
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum OrderKind {
    DegLex,
    DegRevLex,
}

/// A degree-compatible term order with a variable priority.
///
/// `priority[0]` is the largest variable. The default priority is
/// `x1 > ... > xn > u1 > ... > ut`, i.e. variable index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermOrder {
    pub kind: OrderKind,
    pub priority: Vec<usize>,
}

impl TermOrder {
    pub fn deglex(nvars: usize) -> Self {
        TermOrder {
            kind: OrderKind::DegLex,
            priority: (0..nvars).collect(),
        }
    }

    pub fn degrevlex(nvars: usize) -> Self {
        TermOrder {
            kind: OrderKind::DegRevLex,
            priority: (0..nvars).collect(),
        }
    }

    /// Compare two monomials; `Greater` means `a > b`.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (da, db) = (a.degree(), b.degree());
        if da != db {
            return da.cmp(&db);
        }
        match self.kind {
            // first nonzero entry of (sum(a-b), a_1-b_1, ..., a_n-b_n)
            OrderKind::DegLex => {
                for &j in &self.priority {
                    match a.exps[j].cmp(&b.exps[j]) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            OrderKind::DegRevLex => {
                for &j in self.priority.iter().rev() {
                    match a.exps[j].cmp(&b.exps[j]) {
                        Ordering::Equal => continue,
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }
        }
    }
}

/// All monomials of total degree `d` in `nvars` variables, largest first in
/// degree-lex order with `x1 > x2 > ...`.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(j: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let n = cur.len();
        if j + 1 == n {
            cur[j] = left;
            out.push(Monomial::from_vec(cur.clone()));
            cur[j] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[j] = e;
            rec(j + 1, left - e, cur, out);
        }
        cur[j] = 0;
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::from_vec(vec![]));
        }
        return out;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

/// `C(n, k)` as u64 (saturating on overflow).
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Number of monomials of degree `d` in `nvars` variables.
pub fn count_monomials(nvars: usize, d: u32) -> u64 {
    if nvars == 0 {
        return (d == 0) as u64;
    }
    binomial(d as u64 + nvars as u64 - 1, nvars as u64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(v: &[u32]) -> Monomial {
        Monomial::new(v.to_vec()).unwrap()
    }

    #[test]
    fn divisibility_examples() {
        assert!(m(&[1, 1, 0]).divides(&m(&[2, 1, 0])).unwrap());
        assert!(Monomial::one(3).divides(&m(&[0, 4, 1])).unwrap());
        assert!(!m(&[0, 1]).divides(&m(&[1, 0])).unwrap());
        assert!(m(&[1]).divides(&m(&[1, 0])).is_err());
    }

    #[test]
    fn lcm_examples() {
        assert_eq!(
            lcm([&m(&[2, 1, 0]), &m(&[0, 2, 1])]).unwrap(),
            m(&[2, 2, 1])
        );
        assert_eq!(lcm([&m(&[3, 0, 1])]).unwrap(), m(&[3, 0, 1]));
        let cyclic = [m(&[2, 1, 0]), m(&[0, 2, 1]), m(&[1, 0, 2])];
        assert_eq!(lcm(cyclic.iter()).unwrap(), m(&[2, 2, 2]));
        assert!(matches!(lcm(std::iter::empty()), Err(Error::EmptyLcm)));
    }

    #[test]
    fn grammar_round_trip() {
        let ring = Ring::new(3, 2);
        for s in ["x1^2*x2*x3", "1", "x3*u1^3", "u2"] {
            let mono = Monomial::parse_in(s, ring).unwrap();
            assert_eq!(mono.display_in(ring), s);
        }
        assert_eq!(
            Monomial::parse_in("x2 * x1^2 * x2", ring)
                .unwrap()
                .display_in(ring),
            "x1^2*x2^2"
        );
        let err = Monomial::parse_in("x1*y2", ring).unwrap_err();
        assert!(matches!(err, Error::Parse { column: 4, .. }), "{err}");
        assert!(Monomial::parse_in("x4", ring).is_err());
        assert!(Monomial::parse_in("x1^99999999999", ring).is_err());
    }

    #[test]
    fn deglex_follows_tie_vector() {
        let o = TermOrder::deglex(3);
        // x1^2*x3^2 > x1*x2^3 in degree 4
        assert_eq!(o.cmp(&m(&[2, 0, 2]), &m(&[1, 3, 0])), Ordering::Greater);
        // degree dominates
        assert_eq!(o.cmp(&m(&[0, 0, 2]), &m(&[1, 0, 0])), Ordering::Greater);
        let r = TermOrder::degrevlex(3);
        // x2^2 > x1*x3 in degrevlex, but not in deglex
        assert_eq!(r.cmp(&m(&[0, 2, 0]), &m(&[1, 0, 1])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 2, 0]), &m(&[1, 0, 1])), Ordering::Less);
    }

    #[test]
    fn monomial_enumeration_is_sorted() {
        let ms = monomials_of_degree(3, 3);
        assert_eq!(ms.len() as u64, count_monomials(3, 3));
        let o = TermOrder::deglex(3);
        for w in ms.windows(2) {
            assert_eq!(o.cmp(&w[0], &w[1]), Ordering::Greater);
        }
        assert_eq!(monomials_of_degree(2, 0), vec![Monomial::one(2)]);
    }

    fn arb_mono() -> impl Strategy<Value = Monomial> {
        prop::collection::vec(0u32..5, 3).prop_map(Monomial::from_vec)
    }

    proptest! {
        #[test]
        fn lcm_laws(a in arb_mono(), b in arb_mono(), c in arb_mono()) {
            prop_assert_eq!(a.lcm_with(&b), b.lcm_with(&a));
            prop_assert_eq!(a.lcm_with(&b).lcm_with(&c), a.lcm_with(&b.lcm_with(&c)));
            prop_assert_eq!(a.lcm_with(&a), a.clone());
            prop_assert!(a.divides_unchecked(&a.lcm_with(&b)));
        }

        #[test]
        fn divides_is_partial_order(a in arb_mono(), b in arb_mono(), c in arb_mono()) {
            prop_assert!(a.divides_unchecked(&a));
            if a.divides_unchecked(&b) && b.divides_unchecked(&a) {
                prop_assert_eq!(&a, &b);
            }
            if a.divides_unchecked(&b) && b.divides_unchecked(&c) {
                prop_assert!(a.divides_unchecked(&c));
            }
        }

        #[test]
        fn print_parse_round_trip(a in arb_mono()) {
            let ring = Ring::new(3, 0);
            let s = a.display_in(ring);
            prop_assert_eq!(Monomial::parse_in(&s, ring).unwrap(), a);
        }
    }
}
