//! Lifting matrices `[L_{j,i}]` of linear forms and the lift of monomials.

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::ideal::MonomialIdeal;
use crate::linalg::{rank_mod_p, CERT_PRIME};
use crate::monomial::{Monomial, Ring};
use crate::poly::{LinearForm, SparsePoly};

/// Cap on the number of entry subsets examined by [`check_genericity`].
pub const GENERICITY_SUBSET_LIMIT: usize = 500_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LiftMode {
    /// `L_{j,i}` lies in `span{x_j, u_1..u_t}` with nonzero `x_j` coefficient.
    Restricted,
    /// Arbitrary linear forms whose row products form a complete intersection.
    General,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Vandermonde { b: Vec<i64> },
    Random { seed: u64 },
    Explicit(Vec<Vec<String>>),
}

/// The JSON configuration of a lifting matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftingConfig {
    pub mode: LiftMode,
    pub provenance: Provenance,
    pub t: usize,
}

impl LiftingConfig {
    /// Vandermonde matrix with `b = 0, 1, ..., p-1`.
    pub fn default_vandermonde(t: usize, row_lengths: &[u32]) -> Self {
        let p: u32 = row_lengths.iter().sum();
        LiftingConfig {
            mode: LiftMode::Restricted,
            provenance: Provenance::Vandermonde {
                b: (0..p as i64).collect(),
            },
            t,
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftingMatrix<F: Field> {
    n: usize,
    t: usize,
    mode: LiftMode,
    provenance: Provenance,
    rows: Vec<Vec<LinearForm<F>>>,
}

impl<F: Field> LiftingMatrix<F> {
    pub fn new(
        n: usize,
        t: usize,
        mode: LiftMode,
        provenance: Provenance,
        rows: Vec<Vec<LinearForm<F>>>,
    ) -> Result<Self> {
        if rows.len() != n {
            return Err(Error::InvalidMatrix(format!(
                "expected {n} rows, found {}",
                rows.len()
            )));
        }
        for (j, row) in rows.iter().enumerate() {
            for (i, l) in row.iter().enumerate() {
                if l.nvars() != n + t {
                    return Err(Error::LengthMismatch {
                        expected: n + t,
                        found: l.nvars(),
                    });
                }
                if mode == LiftMode::Restricted {
                    let bad = l.support().any(|v| v < n && v != j);
                    if bad || l.coeff(j).is_zero() {
                        return Err(Error::InvalidMatrix(format!(
                            "entry L_{{{},{}}} is not in span(x{}, u) with nonzero x{} coefficient",
                            j + 1,
                            i + 1,
                            j + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        Ok(LiftingMatrix {
            n,
            t,
            mode,
            provenance,
            rows,
        })
    }

    /// Row `k` holds `x_k + b u_1 + b^2 u_2 + ... + b^t u_t` for the block of
    /// scalars `b` assigned to that row.
    pub fn vandermonde(n: usize, t: usize, row_lengths: &[u32], b: &[i64]) -> Result<Self> {
        check_lengths(n, row_lengths)?;
        let p: usize = row_lengths.iter().map(|&x| x as usize).sum();
        if b.len() != p {
            return Err(Error::InvalidMatrix(format!(
                "Vandermonde lifting needs {p} scalars, found {}",
                b.len()
            )));
        }
        for i in 0..b.len() {
            for k in i + 1..b.len() {
                if b[i] == b[k] {
                    return Err(Error::RepeatedScalar(i + 1, k + 1));
                }
            }
        }
        let mut rows = Vec::with_capacity(n);
        let mut next = 0;
        for (j, &len) in row_lengths.iter().enumerate() {
            let mut row = Vec::with_capacity(len as usize);
            for _ in 0..len {
                let mut coeffs = vec![F::zero(); n + t];
                coeffs[j] = F::one();
                let base = BigInt::from(b[next]);
                let mut power = BigInt::one();
                for s in 0..t {
                    power *= &base;
                    coeffs[n + s] =
                        F::from_ratio(&power, &BigInt::one()).expect("unit denominator");
                }
                row.push(LinearForm::new(coeffs)?);
                next += 1;
            }
            rows.push(row);
        }
        Self::new(
            n,
            t,
            LiftMode::Restricted,
            Provenance::Vandermonde { b: b.to_vec() },
            rows,
        )
    }

    /// Seeded random entries with coefficients in `[-1000, 1000]`.
    pub fn random(
        n: usize,
        t: usize,
        row_lengths: &[u32],
        seed: u64,
        mode: LiftMode,
    ) -> Result<Self> {
        check_lengths(n, row_lengths)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::with_capacity(n);
        for (j, &len) in row_lengths.iter().enumerate() {
            let mut row = Vec::with_capacity(len as usize);
            for _ in 0..len {
                let coeffs: Vec<F> = loop {
                    let mut c = vec![F::zero(); n + t];
                    match mode {
                        LiftMode::Restricted => {
                            let mut x = 0;
                            while x == 0 {
                                x = rng.gen_range(-1000i64..=1000);
                            }
                            c[j] = F::from_i64(x);
                            for s in 0..t {
                                c[n + s] = F::from_i64(rng.gen_range(-1000i64..=1000));
                            }
                        }
                        LiftMode::General => {
                            for v in c.iter_mut() {
                                *v = F::from_i64(rng.gen_range(-1000i64..=1000));
                            }
                        }
                    }
                    let ok = match mode {
                        LiftMode::Restricted => !c[j].is_zero(),
                        LiftMode::General => c.iter().any(|v| !v.is_zero()),
                    };
                    if ok {
                        break c;
                    }
                };
                row.push(LinearForm::new(coeffs)?);
            }
            rows.push(row);
        }
        Self::new(n, t, mode, Provenance::Random { seed }, rows)
    }

    /// Entries given as linear-form strings in `x1..xn, u1..ut`.
    pub fn explicit(n: usize, t: usize, rows: &[Vec<String>], mode: LiftMode) -> Result<Self> {
        let ring = Ring::new(n, t);
        let forms = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| LinearForm::parse_in(s, ring))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, t, mode, Provenance::Explicit(rows.to_vec()), forms)
    }

    /// Every entry of row `j` equal to `x_j`; the lift is then a cone.
    pub fn degenerate(n: usize, t: usize, row_lengths: &[u32]) -> Result<Self> {
        check_lengths(n, row_lengths)?;
        let rows: Vec<Vec<String>> = row_lengths
            .iter()
            .enumerate()
            .map(|(j, &len)| vec![format!("x{}", j + 1); len as usize])
            .collect();
        Self::explicit(n, t, &rows, LiftMode::Restricted)
    }

    /// Build from a configuration; `row_lengths` sizes the Vandermonde and
    /// random constructions and is ignored for explicit matrices.
    pub fn from_config(config: &LiftingConfig, n: usize, row_lengths: &[u32]) -> Result<Self> {
        let m = match &config.provenance {
            Provenance::Vandermonde { b } => {
                if config.mode != LiftMode::Restricted {
                    return Err(Error::InvalidMatrix(
                        "Vandermonde matrices are restricted-mode".into(),
                    ));
                }
                Self::vandermonde(n, config.t, row_lengths, b)?
            }
            Provenance::Random { seed } => {
                Self::random(n, config.t, row_lengths, *seed, config.mode)?
            }
            Provenance::Explicit(rows) => Self::explicit(n, config.t, rows, config.mode)?,
        };
        Ok(m)
    }

    pub fn to_config(&self) -> LiftingConfig {
        LiftingConfig {
            mode: self.mode,
            provenance: self.provenance.clone(),
            t: self.t,
        }
    }

    /// All entries as strings, row by row.
    pub fn entry_strings(&self) -> Vec<Vec<String>> {
        let ring = self.ring();
        self.rows
            .iter()
            .map(|r| r.iter().map(|l| l.display_in(ring)).collect())
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn ring(&self) -> Ring {
        Ring::new(self.n, self.t)
    }

    pub fn mode(&self) -> LiftMode {
        self.mode
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn row_len(&self, j: usize) -> usize {
        self.rows[j].len()
    }

    /// `L_{j+1, i+1}` (0-based indices).
    pub fn entry(&self, j: usize, i: usize) -> &LinearForm<F> {
        &self.rows[j][i]
    }

    /// Product `L_{j,from+1} ... L_{j,to}` over all rows, for exponent vectors
    /// `from <= to` (0-based row index, 1-based column positions).
    pub fn partial_product(&self, from: &[u32], to: &[u32]) -> Result<SparsePoly<F>> {
        let nv = self.n + self.t;
        let mut acc = SparsePoly::one(nv);
        for j in 0..self.n {
            let (a, b) = (from[j] as usize, to[j] as usize);
            if b > self.rows[j].len() {
                return Err(Error::ExponentExceedsRow {
                    variable: j + 1,
                    exponent: to[j],
                    row_len: self.rows[j].len(),
                });
            }
            for i in a..b {
                acc = acc.mul(&self.rows[j][i].to_poly())?;
            }
        }
        Ok(acc)
    }

    /// `∏_j L_{j,1} ... L_{j,a_j}` for `m = x^a`.
    pub fn lift_monomial(&self, m: &Monomial) -> Result<SparsePoly<F>> {
        if m.nvars() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: m.nvars(),
            });
        }
        self.partial_product(&vec![0; self.n], m.exponents())
    }

    /// Lifts of the minimal generators, in generator order.
    pub fn lifted_ideal(&self, j: &MonomialIdeal) -> Result<Vec<SparsePoly<F>>> {
        j.generators()
            .iter()
            .map(|g| self.lift_monomial(g))
            .collect()
    }

    /// Product of the used entries of row `j`.
    pub fn row_product(&self, j: usize, len: usize) -> Result<SparsePoly<F>> {
        let mut to = vec![0u32; self.n];
        to[j] = len as u32;
        self.partial_product(&vec![0; self.n], &to)
    }
}

fn check_lengths(n: usize, row_lengths: &[u32]) -> Result<()> {
    if row_lengths.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: row_lengths.len(),
        });
    }
    Ok(())
}

/// A set of entries whose span is smaller than expected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericityViolation {
    /// 1-based `(row, column)` positions.
    pub entries: Vec<(usize, usize)>,
    pub rank: usize,
    pub expected: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericityReport {
    pub passed: bool,
    pub mode: LiftMode,
    pub subsets_checked: usize,
    pub truncated: bool,
    pub violations: Vec<GenericityViolation>,
    /// General mode only: whether the row products form a complete
    /// intersection.
    pub complete_intersection: Option<bool>,
    pub notes: Vec<String>,
}

/// Expected codimension of `k` distinct entries taken from `rows` rows.
///
/// General entries span `min(n+t, k)`. Restricted entries of one row live in
/// `span{x_j, u}`, so rows beyond the first entry can add at most `t` new
/// directions in total.
pub fn expected_codim(mode: LiftMode, n: usize, t: usize, rows: usize, k: usize) -> usize {
    match mode {
        LiftMode::General => (n + t).min(k),
        LiftMode::Restricted => (n + t).min(rows + t.min(k - rows)),
    }
}

fn rank_of<F: Field>(forms: &[&LinearForm<F>]) -> usize {
    // a modular rank equal to the upper bound is already exact
    let residues: Option<Vec<Vec<u64>>> = forms
        .iter()
        .map(|l| l.coeffs().iter().map(|c| c.residue(CERT_PRIME)).collect())
        .collect();
    let upper = forms.len().min(forms.first().map_or(0, |l| l.nvars()));
    if let Some(rows) = residues {
        let r = rank_mod_p(rows, CERT_PRIME);
        if r == upper {
            return r;
        }
    }
    F::rank(forms.iter().map(|l| l.coeffs().to_vec()).collect())
}

/// Check the codimension condition on every set of at most `n+t` distinct
/// entries used by `J`, and in general mode also the complete-intersection
/// condition on the row products.
pub fn check_genericity<F: Field>(
    a: &LiftingMatrix<F>,
    j: &MonomialIdeal,
) -> Result<GenericityReport> {
    if j.n() != a.n {
        return Err(Error::LengthMismatch {
            expected: a.n,
            found: j.n(),
        });
    }
    let (used, _) = j.max_exponents();
    let mut notes = Vec::new();
    for (row, &len) in used.iter().enumerate() {
        if len as usize > a.row_len(row) {
            return Err(Error::ExponentExceedsRow {
                variable: row + 1,
                exponent: len,
                row_len: a.row_len(row),
            });
        }
    }
    let entries: Vec<(usize, usize)> = used
        .iter()
        .enumerate()
        .flat_map(|(row, &len)| (0..len as usize).map(move |i| (row, i)))
        .collect();
    let max_k = (a.n + a.t).min(entries.len());
    let mut walk = SubsetWalk {
        a,
        entries: &entries,
        max_k,
        chosen: Vec::new(),
        checked: 0,
        truncated: false,
        violations: Vec::new(),
    };
    walk.run(0);
    let SubsetWalk {
        checked,
        truncated,
        violations,
        ..
    } = walk;
    if truncated {
        notes.push(format!("stopped after {GENERICITY_SUBSET_LIMIT} subsets"));
    }

    let complete_intersection = match a.mode {
        LiftMode::Restricted => None,
        LiftMode::General => {
            // V(F_1..F_n) is the union of V(L_{1,i_1},...,L_{n,i_n}); it has
            // codimension n iff every transversal is independent
            let mut ok = true;
            let mut pick = vec![0usize; a.n];
            let lens: Vec<usize> = used.iter().map(|&l| l as usize).collect();
            if lens.contains(&0) {
                notes.push("some variable is unused; its row product is 1".into());
                ok = false;
            } else {
                'outer: loop {
                    let forms: Vec<&LinearForm<F>> =
                        (0..a.n).map(|row| a.entry(row, pick[row])).collect();
                    if rank_of(&forms) < a.n {
                        notes.push(format!(
                            "transversal {:?} is dependent",
                            pick.iter()
                                .enumerate()
                                .map(|(r, &i)| (r + 1, i + 1))
                                .collect::<Vec<_>>()
                        ));
                        ok = false;
                        break;
                    }
                    for row in (0..a.n).rev() {
                        pick[row] += 1;
                        if pick[row] < lens[row] {
                            continue 'outer;
                        }
                        pick[row] = 0;
                    }
                    break;
                }
            }
            Some(ok)
        }
    };
    let passed = violations.is_empty() && complete_intersection != Some(false);
    Ok(GenericityReport {
        passed,
        mode: a.mode,
        subsets_checked: checked,
        truncated,
        violations,
        complete_intersection,
        notes,
    })
}

/// Depth-first walk over subsets of at most `max_k` used entries, recording
/// those whose span is smaller than expected.
struct SubsetWalk<'a, F: Field> {
    a: &'a LiftingMatrix<F>,
    entries: &'a [(usize, usize)],
    max_k: usize,
    chosen: Vec<usize>,
    checked: usize,
    truncated: bool,
    violations: Vec<GenericityViolation>,
}

impl<F: Field> SubsetWalk<'_, F> {
    fn run(&mut self, start: usize) {
        for idx in start..self.entries.len() {
            if self.checked >= GENERICITY_SUBSET_LIMIT {
                self.truncated = true;
                return;
            }
            self.chosen.push(idx);
            let (a, entries) = (self.a, self.entries);
            let forms: Vec<&LinearForm<F>> = self
                .chosen
                .iter()
                .map(|&c| a.entry(entries[c].0, entries[c].1))
                .collect();
            let mut rows: Vec<usize> = self.chosen.iter().map(|&c| entries[c].0).collect();
            rows.dedup();
            let expected = expected_codim(a.mode, a.n, a.t, rows.len(), self.chosen.len());
            let rank = rank_of(&forms);
            self.checked += 1;
            if rank < expected {
                self.violations.push(GenericityViolation {
                    entries: self
                        .chosen
                        .iter()
                        .map(|&c| (entries[c].0 + 1, entries[c].1 + 1))
                        .collect(),
                    rank,
                    expected,
                });
            }
            if self.chosen.len() < self.max_k {
                self.run(idx + 1);
            }
            self.chosen.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    type A = LiftingMatrix<Rational>;

    #[test]
    fn vandermonde_small_cases() {
        let a = A::vandermonde(1, 1, &[2], &[0, 1]).unwrap();
        assert_eq!(
            a.entry_strings(),
            vec![vec!["x1".to_string(), "x1 + u1".to_string()]]
        );
        let a = A::vandermonde(2, 1, &[1, 1], &[0, 1]).unwrap();
        assert_eq!(
            a.entry_strings(),
            vec![vec!["x1".to_string()], vec!["x2 + u1".to_string()]]
        );
        let r = Rational::rank(vec![
            a.entry(0, 0).coeffs().to_vec(),
            a.entry(1, 0).coeffs().to_vec(),
        ]);
        assert_eq!(r, 2);
        let a = A::vandermonde(2, 0, &[2, 3], &[4, 5, 6, 7, 8]).unwrap();
        for j in 0..2 {
            for i in 0..a.row_len(j) {
                assert_eq!(a.entry(j, i).support().collect::<Vec<_>>(), vec![j]);
            }
        }
        assert!(matches!(
            A::vandermonde(1, 1, &[3], &[0, 2, 2]),
            Err(Error::RepeatedScalar(2, 3))
        ));
        let a = A::vandermonde(1, 2, &[2], &[2, 3]).unwrap();
        assert_eq!(
            a.entry_strings()[0],
            vec!["x1 + 2*u1 + 4*u2", "x1 + 3*u1 + 9*u2"]
        );
    }

    #[test]
    fn restricted_mode_is_validated() {
        let rows = vec![vec!["x1 + x2".to_string()], vec!["x2".to_string()]];
        assert!(A::explicit(2, 0, &rows, LiftMode::Restricted).is_err());
        assert!(A::explicit(2, 0, &rows, LiftMode::General).is_ok());
        let rows = vec![vec!["u1".to_string()]];
        assert!(A::explicit(1, 1, &rows, LiftMode::Restricted).is_err());
    }

    #[test]
    fn lift_uses_first_entries() {
        let j = MonomialIdeal::parse("x1^2*x2, x2^2*x3, x1*x3^2", Some(3)).unwrap();
        let rows: Vec<Vec<String>> = (1..=3)
            .map(|r| (1..=2).map(|i| format!("x{r} + {i}*u1")).collect())
            .collect();
        let a = A::explicit(3, 1, &rows, LiftMode::Restricted).unwrap();
        let lifted = a.lifted_ideal(&j).unwrap();
        let f = |r: usize, i: usize| a.entry(r, i).to_poly();
        let expect = f(0, 0).mul(&f(0, 1)).unwrap().mul(&f(1, 0)).unwrap();
        assert_eq!(lifted[0], expect);
        assert_eq!(
            a.lift_monomial(&Monomial::one(3)).unwrap(),
            SparsePoly::one(4)
        );
        let too_big = Monomial::new(vec![3, 0, 0]).unwrap();
        assert!(matches!(
            a.lift_monomial(&too_big),
            Err(Error::ExponentExceedsRow { variable: 1, .. })
        ));
        // setting u to zero leaves the product of x-coefficients times m
        let rows = vec![vec!["2*x1 + u1".to_string(), "3*x1 - u1".to_string()]];
        let a = A::explicit(1, 1, &rows, LiftMode::Restricted).unwrap();
        let m = Monomial::new(vec![2]).unwrap();
        let at_zero = a.lift_monomial(&m).unwrap().set_zero(&[1]);
        assert_eq!(
            at_zero,
            SparsePoly::term(m.extend(1), Rational::from_i64(6))
        );
    }

    #[test]
    fn genericity_reports() {
        let j = MonomialIdeal::parse(
            "x1^3, x1^2*x2^2, x1^2*x2*x3, x1*x2^3, x1*x2^2*x3, x1*x2*x3^2, x1*x3^3, \
             x2^4, x2^3*x3, x2^2*x3^2, x2*x3^3, x3^4",
            Some(3),
        )
        .unwrap();
        let (n_j, _) = j.max_exponents();
        let p: u32 = n_j.iter().sum();
        let b: Vec<i64> = (0..p as i64).collect();
        for t in 1..=3 {
            let a = A::vandermonde(3, t, &n_j, &b).unwrap();
            let rep = check_genericity(&a, &j).unwrap();
            assert!(rep.passed, "t={t}: {:?}", rep.violations.first());
        }
        let cone = A::degenerate(3, 1, &n_j).unwrap();
        let rep = check_genericity(&cone, &j).unwrap();
        assert!(!rep.passed);
        let rnd = A::random(3, 2, &n_j, 11, LiftMode::Restricted).unwrap();
        assert!(check_genericity(&rnd, &j).unwrap().passed);
        let gen = A::random(3, 2, &n_j, 11, LiftMode::General).unwrap();
        let rep = check_genericity(&gen, &j).unwrap();
        assert_eq!(rep.complete_intersection, Some(true));
        assert!(rep.passed);
    }

    #[test]
    fn general_mode_detects_non_complete_intersection() {
        // x1 and x2 rows share a transversal with a repeated form
        let rows = vec![
            vec!["x1".to_string(), "x1 + x2".to_string()],
            vec!["x1 + x2".to_string()],
        ];
        let a = A::explicit(2, 1, &rows, LiftMode::General).unwrap();
        let j = MonomialIdeal::parse("x1^2, x2", Some(2)).unwrap();
        let rep = check_genericity(&a, &j).unwrap();
        assert_eq!(rep.complete_intersection, Some(false));
        assert!(!rep.passed);
    }

    #[test]
    fn config_round_trip() {
        let json = r#"{"mode":"restricted","provenance":{"vandermonde":{"b":[0,1,2]}},"t":1}"#;
        let cfg = LiftingConfig::from_json(json).unwrap();
        assert_eq!(serde_json::to_string(&cfg).unwrap(), json);
        let a = A::from_config(&cfg, 2, &[2, 1]).unwrap();
        assert_eq!(a.to_config(), cfg);
        let json =
            r#"{"mode":"general","provenance":{"explicit":[["x1 + u1"],["x2 - x1"]]},"t":1}"#;
        let cfg = LiftingConfig::from_json(json).unwrap();
        let a = A::from_config(&cfg, 2, &[]).unwrap();
        assert_eq!(a.entry_strings()[1], vec!["-x1 + x2"]);
        let json = r#"{"mode":"restricted","provenance":{"random":{"seed":5}},"t":2}"#;
        let cfg = LiftingConfig::from_json(json).unwrap();
        let a1 = A::from_config(&cfg, 2, &[2, 2]).unwrap();
        let a2 = A::from_config(&cfg, 2, &[2, 2]).unwrap();
        assert_eq!(a1, a2);
    }
}
