//! Monomial ideals stored by their minimal generators.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::monomial::{
    max_x_index, monomials_of_degree, parse_monomial, Monomial, Ring, TermOrder,
};

/// A monomial ideal in `n` variables.
///
/// Generators are kept minimal and sorted by degree, then by decreasing
/// degree-lex order. The zero ideal has no generators; the unit ideal is
/// generated by `1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MonomialIdeal {
    n: usize,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn new(n: usize, gens: Vec<Monomial>) -> Result<Self> {
        if n == 0 {
            return Err(Error::LengthMismatch {
                expected: 1,
                found: 0,
            });
        }
        for g in &gens {
            if g.nvars() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: g.nvars(),
                });
            }
        }
        Ok(MonomialIdeal {
            n,
            gens: minimal_generators(gens),
        })
    }

    /// Build from exponent vectors.
    pub fn from_exponents(n: usize, exps: &[&[u32]]) -> Result<Self> {
        let gens = exps
            .iter()
            .map(|e| Monomial::new(e.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        MonomialIdeal::new(n, gens)
    }

    pub fn zero(n: usize) -> Self {
        MonomialIdeal {
            n,
            gens: Vec::new(),
        }
    }

    pub fn unit(n: usize) -> Self {
        MonomialIdeal {
            n,
            gens: vec![Monomial::one(n)],
        }
    }

    /// The ideal generated by the variables with the given indices.
    pub fn variables(n: usize, indices: &[usize]) -> Self {
        let gens = indices.iter().map(|&j| Monomial::var(n, j, 1)).collect();
        MonomialIdeal {
            n,
            gens: minimal_generators(gens),
        }
    }

    /// `(x1, ..., xn)`.
    pub fn maximal(n: usize) -> Self {
        Self::variables(n, &(0..n).collect::<Vec<_>>())
    }

    /// `(x_j^{a_j})` for the listed pairs.
    pub fn pure_powers(n: usize, powers: &[(usize, u32)]) -> Self {
        let gens = powers
            .iter()
            .map(|&(j, a)| Monomial::var(n, j, a))
            .collect();
        MonomialIdeal {
            n,
            gens: minimal_generators(gens),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(Monomial::is_one)
    }

    pub fn max_degree(&self) -> u32 {
        self.gens.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Membership: some generator divides `m`.
    pub fn contains(&self, m: &Monomial) -> Result<bool> {
        if m.nvars() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: m.nvars(),
            });
        }
        Ok(self.contains_unchecked(m))
    }

    pub(crate) fn contains_unchecked(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides_unchecked(m))
    }

    /// Whether `other` is contained in `self`.
    pub fn contains_ideal(&self, other: &MonomialIdeal) -> bool {
        other.gens.iter().all(|g| self.contains_unchecked(g))
    }

    /// Sum of ideals.
    pub fn add(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.same_n(other)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        MonomialIdeal::new(self.n, gens)
    }

    /// `self + (m)`.
    pub fn add_monomial(&self, m: &Monomial) -> MonomialIdeal {
        let mut gens = self.gens.clone();
        gens.push(m.clone());
        MonomialIdeal {
            n: self.n,
            gens: minimal_generators(gens),
        }
    }

    /// Product of ideals.
    pub fn mul(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.same_n(other)?;
        let gens = self
            .gens
            .iter()
            .flat_map(|a| other.gens.iter().map(move |b| a.mul(b)))
            .collect();
        MonomialIdeal::new(self.n, gens)
    }

    pub fn pow(&self, k: u32) -> MonomialIdeal {
        let mut acc = MonomialIdeal::unit(self.n);
        for _ in 0..k {
            acc = acc.mul(self).expect("same ambient");
        }
        acc
    }

    pub(crate) fn same_n(&self, other: &MonomialIdeal) -> Result<()> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Extension to a ring with `t` more variables appended.
    pub fn extend(&self, t: usize) -> MonomialIdeal {
        MonomialIdeal {
            n: self.n + t,
            gens: self.gens.iter().map(|g| g.extend(t)).collect(),
        }
    }

    /// True iff every variable has a pure power among the generators.
    pub fn is_artinian(&self) -> bool {
        (0..self.n).all(|j| {
            self.gens
                .iter()
                .any(|g| g.is_one() || g.pure_power_of() == Some(j))
        })
    }

    /// `(N_1, ..., N_n)` and `N = max N_j`, where `N_j` is the largest power of
    /// `x_j` occurring in a minimal generator.
    pub fn max_exponents(&self) -> (Vec<u32>, u32) {
        let mut v = vec![0; self.n];
        for g in &self.gens {
            for (j, &e) in g.exponents().iter().enumerate() {
                v[j] = v[j].max(e);
            }
        }
        let top = v.iter().copied().max().unwrap_or(0);
        (v, top)
    }

    /// Whether each graded piece of the ideal is an initial segment in
    /// degree-lex order, up to the largest generator degree.
    pub fn is_lex_segment(&self) -> bool {
        let order = TermOrder::deglex(self.n);
        for d in 0..=self.max_degree() {
            let mut ms = monomials_of_degree(self.n, d);
            ms.sort_by(|a, b| order.cmp(b, a));
            let mut seen_outside = false;
            for m in &ms {
                if self.contains_unchecked(m) {
                    if seen_outside {
                        return false;
                    }
                } else {
                    seen_outside = true;
                }
            }
        }
        true
    }

    /// Monomials outside the ideal, either all of them (Artinian case) or
    /// those of degree at most `degree_bound`.
    ///
    /// Sorted by degree, then by decreasing degree-lex order.
    pub fn standard_monomials(&self, degree_bound: Option<u32>) -> Result<Vec<Monomial>> {
        let mut out = Vec::new();
        match degree_bound {
            Some(bound) => {
                for d in 0..=bound {
                    out.extend(
                        monomials_of_degree(self.n, d)
                            .into_iter()
                            .filter(|m| !self.contains_unchecked(m)),
                    );
                }
            }
            None => {
                if !self.is_artinian() {
                    return Err(Error::NotArtinian);
                }
                let (bounds, _) = self.max_exponents();
                let mut cur = vec![0u32; self.n];
                box_walk(&bounds, 0, &mut cur, &mut |e| {
                    let m = Monomial::from_vec(e.to_vec());
                    if !self.contains_unchecked(&m) {
                        out.push(m);
                    }
                });
            }
        }
        sort_canonical(&mut out);
        Ok(out)
    }

    /// Number of standard monomials of degree `d`.
    pub fn count_standard(&self, d: u32) -> usize {
        monomials_of_degree(self.n, d)
            .iter()
            .filter(|m| !self.contains_unchecked(m))
            .count()
    }

    /// Parse a comma-separated generator list, optionally wrapped in
    /// parentheses. With `n = None` the variable count is the largest `x`
    /// index that occurs.
    pub fn parse(s: &str, n: Option<usize>) -> Result<Self> {
        let n = match n {
            Some(n) => n,
            None => max_x_index(s).max(1),
        };
        Self::parse_in(s, Ring::new(n, 0))
    }

    /// Parse in a ring that may also contain `u` variables. Generators may
    /// span several lines.
    pub fn parse_in(s: &str, ring: Ring) -> Result<Self> {
        Self::parse_flat(s, ring).map_err(|e| e.locate_in(s))
    }

    fn parse_flat(s: &str, ring: Ring) -> Result<Self> {
        let mut body = s;
        let mut offset = 0;
        let trimmed = s.trim();
        if trimmed.starts_with('(') {
            let Some(stripped) = trimmed.strip_prefix('(').and_then(|x| x.strip_suffix(')')) else {
                return Err(Error::parse(s.len() + 1, "unbalanced parenthesis"));
            };
            offset = s.find('(').unwrap_or(0) + 1;
            body = stripped;
        }
        if body.trim().is_empty() || body.trim() == "0" {
            return Ok(MonomialIdeal::zero(ring.nvars()));
        }
        let mut gens = Vec::new();
        let mut pos = offset;
        for piece in body.split(',') {
            gens.push(parse_monomial(piece, ring, pos)?);
            pos += piece.len() + 1;
        }
        MonomialIdeal::new(ring.nvars(), gens)
    }

    /// Print in a ring with `u` variables.
    pub fn display_in(&self, ring: Ring) -> String {
        if self.gens.is_empty() {
            return "0".to_string();
        }
        self.gens
            .iter()
            .map(|g| g.display_in(ring))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in(Ring::new(self.n, 0)))
    }
}

fn box_walk(bounds: &[u32], j: usize, cur: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if j == bounds.len() {
        f(cur);
        return;
    }
    for e in 0..bounds[j] {
        cur[j] = e;
        box_walk(bounds, j + 1, cur, f);
    }
    cur[j] = 0;
}

/// Degree first, then larger degree-lex first.
pub(crate) fn sort_canonical(ms: &mut [Monomial]) {
    if ms.is_empty() {
        return;
    }
    let order = TermOrder::deglex(ms[0].nvars());
    ms.sort_by(|a, b| match a.degree().cmp(&b.degree()) {
        Ordering::Equal => order.cmp(b, a),
        o => o,
    });
}

/// The divisibility-minimal elements of `gens`, deduplicated and sorted.
pub fn minimal_generators(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(Monomial::degree);
    let mut seen = HashSet::new();
    let mut kept: Vec<Monomial> = Vec::new();
    for g in gens {
        if !seen.insert(g.clone()) {
            continue;
        }
        if !kept.iter().any(|k| k.divides_unchecked(&g)) {
            kept.push(g);
        }
    }
    sort_canonical(&mut kept);
    kept
}

/// `minimalize` as a constructor.
pub fn minimalize(n: usize, gens: Vec<Monomial>) -> Result<MonomialIdeal> {
    MonomialIdeal::new(n, gens)
}
