//! Sparse multivariate polynomials and linear forms over an exact field.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{parse_monomial, Monomial, Ring, TermOrder};

/// A polynomial in `nvars` variables; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparsePoly<F: Field> {
    nvars: usize,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> SparsePoly<F> {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    pub fn term(m: Monomial, c: F) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SparsePoly { nvars, terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, F::one())
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        Self::monomial(Monomial::var(nvars, index, 1))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> F {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Common degree of all terms, or `None` for zero or inhomogeneous input.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::LengthMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&F::one().neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.mul(c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        Ok(out)
    }

    /// Multiply by a monomial.
    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.mul(m), c.clone()))
                .collect(),
        }
    }

    /// Product of a list of polynomials (`1` for the empty list).
    pub fn product<'a>(nvars: usize, factors: impl IntoIterator<Item = &'a Self>) -> Result<Self> {
        factors
            .into_iter()
            .try_fold(Self::one(nvars), |acc, f| acc.mul(f))
    }

    /// Replace selected variables by polynomials; the others stay.
    pub fn substitute(&self, assignments: &HashMap<usize, SparsePoly<F>>) -> Result<Self> {
        for (&v, p) in assignments {
            if v >= self.nvars {
                return Err(Error::Shape(format!("variable index {v} out of range")));
            }
            self.check(p)?;
        }
        let mut out = Self::zero(self.nvars);
        let mut power_cache: HashMap<(usize, u32), SparsePoly<F>> = HashMap::new();
        for (m, c) in &self.terms {
            let mut kept = m.exponents().to_vec();
            let mut acc = Self::one(self.nvars);
            for (v, p) in assignments {
                let e = kept[*v];
                if e == 0 {
                    continue;
                }
                kept[*v] = 0;
                let pw = power_cache
                    .entry((*v, e))
                    .or_insert_with(|| {
                        let mut r = Self::one(self.nvars);
                        for _ in 0..e {
                            r = r.mul(p).expect("checked");
                        }
                        r
                    })
                    .clone();
                acc = acc.mul(&pw)?;
            }
            let term = acc.mul_monomial(&Monomial::from_vec(kept)).scale(c);
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Set the listed variables to zero.
    pub fn set_zero(&self, vars: &[usize]) -> Self {
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().all(|&v| m.exponent(v) == 0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Value mod `p` at a point given by residues, or `None` if some
    /// coefficient has no residue.
    pub fn eval_mod(&self, point: &[u64], p: u64) -> Option<u64> {
        use crate::linalg::{mul_mod, pow_mod};
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut v = c.residue(p)?;
            for (j, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    v = mul_mod(v, pow_mod(point[j], e as u64, p), p);
                }
            }
            acc = (acc + v) % p;
        }
        Some(acc)
    }

    /// Terms sorted from largest to smallest in `order`.
    pub fn sorted_terms(&self, order: &TermOrder) -> Vec<(Monomial, F)> {
        let mut v: Vec<(Monomial, F)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        v
    }

    pub fn leading_term(&self, order: &TermOrder) -> Option<(Monomial, F)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(a.0, b.0))
            .map(|(m, c)| (m.clone(), c.clone()))
    }

    pub(crate) fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, F)>) -> Self {
        let mut out = Self::zero(nvars);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    /// Print with the variable names of `ring`, terms in decreasing
    /// degree-lex order.
    pub fn display_in(&self, ring: Ring) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let order = TermOrder::deglex(self.nvars);
        let mut out = String::new();
        for (k, (m, c)) in self.sorted_terms(&order).into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { c.neg() } else { c };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = m.display_in(ring);
            if m.is_one() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }

    /// Parse a polynomial such as `x1^2 - 3/2*x1*u1 + 2`.
    pub fn parse_in(s: &str, ring: Ring) -> Result<Self> {
        let nvars = ring.nvars();
        let mut out = Self::zero(nvars);
        // split into signed terms at top-level + and -
        let mut pieces = Vec::new();
        let mut negative = false;
        let mut pending_sign = false;
        let mut start: Option<usize> = None;
        for (i, ch) in s.char_indices() {
            if (ch == '+' || ch == '-') && !after_caret(s.as_bytes(), i) {
                if let Some(st) = start.take() {
                    pieces.push((negative, st, &s[st..i]));
                    negative = false;
                }
                negative ^= ch == '-';
                pending_sign = true;
            } else if !ch.is_whitespace() && start.is_none() {
                start = Some(i);
                pending_sign = false;
            }
        }
        match start {
            Some(st) => pieces.push((negative, st, &s[st..])),
            None if pending_sign => return Err(Error::parse(s.len(), "dangling sign")),
            None => {}
        }
        if pieces.is_empty() {
            return Err(Error::parse(1, "empty polynomial"));
        }
        for (negative, offset, piece) in pieces {
            let (coef, mono) = parse_term::<F>(piece, ring, offset)?;
            let c = if negative { coef.neg() } else { coef };
            out.add_term(mono, c);
        }
        Ok(out)
    }
}

fn after_caret(bytes: &[u8], i: usize) -> bool {
    let mut j = i;
    while j > 0 {
        j -= 1;
        if bytes[j] == b' ' {
            continue;
        }
        return bytes[j] == b'^';
    }
    false
}

fn parse_term<F: Field>(piece: &str, ring: Ring, offset: usize) -> Result<(F, Monomial)> {
    let mut coef = F::one();
    let mut rest_factors = Vec::new();
    let mut pos = offset;
    for factor in piece.split('*') {
        let f = factor.trim();
        let col = pos + (factor.len() - factor.trim_start().len()) + 1;
        pos += factor.len() + 1;
        if f.starts_with(|c: char| c.is_ascii_digit()) {
            let c = parse_scalar::<F>(f)
                .ok_or_else(|| Error::parse(col, format!("bad coefficient `{f}`")))?;
            coef = coef.mul(&c);
        } else {
            rest_factors.push(factor);
        }
    }
    let mono = if rest_factors.is_empty() {
        Monomial::one(ring.nvars())
    } else {
        let joined = rest_factors.join("*");
        parse_monomial(&joined, ring, offset)?
    };
    Ok((coef, mono))
}

/// Parse `a` or `a/b` with integer `a`, `b`.
pub fn parse_scalar<F: Field>(s: &str) -> Option<F> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (
            a.trim().parse::<BigInt>().ok()?,
            b.trim().parse::<BigInt>().ok()?,
        ),
        None => (s.parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    F::from_ratio(&num, &den)
}

impl<F: Field> fmt::Display for SparsePoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in(Ring::new(self.nvars, 0)))
    }
}

/// A nonzero homogeneous linear form, stored as a dense coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinearForm<F: Field> {
    coeffs: Vec<F>,
}

impl<F: Field> LinearForm<F> {
    pub fn new(coeffs: Vec<F>) -> Result<Self> {
        if coeffs.iter().all(F::is_zero) {
            return Err(Error::InvalidMatrix("zero linear form".into()));
        }
        Ok(LinearForm { coeffs })
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut coeffs = vec![F::zero(); nvars];
        coeffs[index] = F::one();
        LinearForm { coeffs }
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, index: usize) -> &F {
        &self.coeffs[index]
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    /// Variables with nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, _)| j)
    }

    pub fn to_poly(&self) -> SparsePoly<F> {
        let n = self.coeffs.len();
        SparsePoly::from_terms(
            n,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| (Monomial::var(n, j, 1), c.clone())),
        )
    }

    pub fn from_poly(p: &SparsePoly<F>) -> Result<Self> {
        if p.homogeneous_degree() != Some(1) {
            return Err(Error::InvalidMatrix(format!(
                "`{p}` is not a nonzero linear form"
            )));
        }
        let mut coeffs = vec![F::zero(); p.nvars()];
        for (m, c) in p.terms() {
            let j = m.support().next().expect("degree one");
            coeffs[j] = c.clone();
        }
        Ok(LinearForm { coeffs })
    }

    pub fn parse_in(s: &str, ring: Ring) -> Result<Self> {
        Self::from_poly(&SparsePoly::parse_in(s, ring)?)
    }

    pub fn display_in(&self, ring: Ring) -> String {
        self.to_poly().display_in(ring)
    }

    /// Whether `self` is a scalar multiple of `other`.
    pub fn is_proportional(&self, other: &Self) -> bool {
        F::rank(vec![self.coeffs.clone(), other.coeffs.clone()]) < 2
    }
}

/// Compare polynomials by their printed form, for deterministic sorting.
pub fn cmp_display<F: Field>(a: &SparsePoly<F>, b: &SparsePoly<F>) -> Ordering {
    a.to_string().cmp(&b.to_string())
}
