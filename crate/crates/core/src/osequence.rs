//! O-sequences, lex-segment ideals with a prescribed h-vector, and the
//! construction of arithmetically Cohen-Macaulay stick figures from them.

use serde::{Deserialize, Serialize};

use crate::algebra::{hilbert_series, series_coefficient};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::geometry::{
    components_artinian, is_generalized_stick_figure, Configuration, StickReport,
};
use crate::groebner::{buchberger, GroebnerLimits};
use crate::ideal::MonomialIdeal;
use crate::lifting::{
    check_genericity, GenericityReport, LiftMode, LiftingConfig, LiftingMatrix, Provenance,
};
use crate::monomial::{binomial, count_monomials, monomials_of_degree, Monomial, TermOrder};

/// Degrees checked when comparing Hilbert functions.
pub const HILBERT_CHECK_DEGREES: u32 = 10;

/// The `d`-th Macaulay representation `c = C(k_d, d) + C(k_{d-1}, d-1) + ...`
/// with `k_d > k_{d-1} > ... >= i >= 1`, as `(k_i, i)` pairs.
pub fn macaulay_representation(c: u64, d: u32) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut rest = c;
    let mut i = d;
    while rest > 0 && i >= 1 {
        let mut k = i as u64;
        while binomial(k + 1, i as u64) <= rest {
            k += 1;
        }
        out.push((k, i));
        rest -= binomial(k, i as u64);
        i -= 1;
    }
    out
}

/// Largest admissible value in degree `d + 1` after the value `c` in degree
/// `d`.
pub fn macaulay_growth(c: u64, d: u32) -> u64 {
    assert!(d >= 1, "growth is defined from degree 1 on");
    macaulay_representation(c, d)
        .into_iter()
        .map(|(k, i)| binomial(k + 1, i as u64 + 1))
        .sum()
}

/// Whether the listed values start with 1, are non-negative and satisfy
/// Macaulay's growth bound at every step. Values past the end are read as
/// zero, which never violates the bound.
pub fn is_o_sequence(s: &[i64]) -> bool {
    if s.is_empty() {
        return true;
    }
    if s[0] != 1 || s.iter().any(|&c| c < 0) {
        return false;
    }
    (1..s.len().saturating_sub(1))
        .all(|d| s[d + 1] as u64 <= macaulay_growth(s[d] as u64, d as u32))
}

/// `t`-fold first difference with `c_{-1} = 0`.
pub fn difference(s: &[i64], t: usize) -> Vec<i64> {
    let mut cur = s.to_vec();
    for _ in 0..t {
        let mut prev = 0;
        for c in cur.iter_mut() {
            let v = *c;
            *c = v - prev;
            prev = v;
        }
    }
    cur
}

/// Whether `s` and each of its first `t` differences is an O-sequence.
pub fn is_t_differentiable(s: &[i64], t: usize) -> bool {
    (0..=t).all(|k| is_o_sequence(&difference(s, k)))
}

/// First `len` values of the Hilbert function with h-vector `h` and
/// dimension `t`.
pub fn hilbert_function_from_h(h: &[i64], t: usize, len: usize) -> Vec<i64> {
    (0..len as u32)
        .map(|d| series_coefficient(h, t, d))
        .collect()
}

/// Whether `h` is the h-vector of a power of the maximal ideal in `n`
/// variables, `h_d = C(n+d-1, d)` throughout.
pub fn is_generic_h_vector(h: &[i64], n: usize) -> bool {
    let h = trimmed(h);
    h.iter()
        .enumerate()
        .all(|(d, &v)| v as u64 == count_monomials(n, d as u32))
}

fn trimmed(h: &[i64]) -> &[i64] {
    let end = h.iter().rposition(|&v| v != 0).map_or(0, |p| p + 1);
    &h[..end]
}

fn validate_h(h: &[i64], n: usize) -> Result<&[i64]> {
    let h = trimmed(h);
    if h.is_empty() || !is_o_sequence(h) {
        return Err(Error::InvalidSequence(format!(
            "{h:?} is not an O-sequence"
        )));
    }
    if h.len() > 1 && h[1] as usize > n {
        return Err(Error::InvalidSequence(format!(
            "h_1 = {} exceeds {n} variables",
            h[1]
        )));
    }
    Ok(h)
}

/// The Artinian lex-segment ideal in `n` variables with h-vector `h`: in each
/// degree the `h_d` smallest monomials stay outside the ideal.
pub fn lex_ideal_from_h_vector(h: &[i64], n: usize) -> Result<MonomialIdeal> {
    let h = validate_h(h, n)?;
    let mut gens = Vec::new();
    for d in 0..=h.len() as u32 {
        let keep = h.get(d as usize).copied().unwrap_or(0) as usize;
        let ms = monomials_of_degree(n, d);
        let cut = ms.len() - keep;
        gens.extend(ms.into_iter().take(cut));
    }
    MonomialIdeal::new(n, gens)
}

/// Every Artinian monomial ideal in `n` variables with h-vector `h`, found by
/// choosing standard monomials degree by degree. At most `limit` partial
/// choices are explored.
pub fn monomial_ideals_with_h_vector(
    h: &[i64],
    n: usize,
    limit: usize,
) -> Result<Vec<MonomialIdeal>> {
    let h = validate_h(h, n)?.to_vec();
    let mut out = Vec::new();
    let mut nodes = 0usize;
    let mut chosen: Vec<Vec<Monomial>> = vec![vec![Monomial::one(n)]];
    search(&h, n, 1, &mut chosen, &mut out, &mut nodes, limit)?;
    Ok(out)
}

fn search(
    h: &[i64],
    n: usize,
    d: usize,
    chosen: &mut Vec<Vec<Monomial>>,
    out: &mut Vec<MonomialIdeal>,
    nodes: &mut usize,
    limit: usize,
) -> Result<()> {
    *nodes += 1;
    if *nodes > limit {
        return Err(Error::LimitExceeded {
            what: "partial standard-monomial sets".into(),
            limit,
        });
    }
    let below = &chosen[d - 1];
    let candidates: Vec<Monomial> = monomials_of_degree(n, d as u32)
        .into_iter()
        .filter(|m| {
            m.support()
                .all(|v| below.contains(&m.div(&Monomial::var(n, v, 1)).expect("divisor")))
        })
        .collect();
    if d == h.len() {
        let mut gens = Vec::new();
        for (k, level) in chosen.iter().enumerate() {
            gens.extend(
                monomials_of_degree(n, k as u32)
                    .into_iter()
                    .filter(|m| !level.contains(m)),
            );
        }
        gens.extend(candidates);
        out.push(MonomialIdeal::new(n, gens)?);
        return Ok(());
    }
    let want = h[d] as usize;
    if want > candidates.len() {
        return Ok(());
    }
    let mut pick: Vec<usize> = (0..want).collect();
    loop {
        chosen.push(pick.iter().map(|&i| candidates[i].clone()).collect());
        search(h, n, d + 1, chosen, out, nodes, limit)?;
        chosen.pop();
        // next combination
        let mut k = want;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            if pick[k] < candidates.len() - want + k {
                break;
            }
        }
        pick[k] += 1;
        for r in k + 1..want {
            pick[r] = pick[r - 1] + 1;
        }
    }
}

/// A monomial ideal with h-vector `h` that is not lex-segment, if any.
pub fn find_non_lex_ideal(h: &[i64], n: usize, limit: usize) -> Result<Option<MonomialIdeal>> {
    Ok(monomial_ideals_with_h_vector(h, n, limit)?
        .into_iter()
        .find(|j| !j.is_lex_segment()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertCheck {
    /// `None` when the check hit a resource limit.
    pub verified: Option<bool>,
    pub expected: Vec<i64>,
    pub computed: Vec<i64>,
    pub note: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StickConstruction {
    pub h: Vec<i64>,
    pub n: usize,
    pub t: usize,
    pub ideal: String,
    pub matrix: Option<LiftingConfig>,
    pub configuration: Option<Configuration>,
    pub stick: Option<StickReport>,
    pub genericity: Option<GenericityReport>,
    pub hilbert: HilbertCheck,
    pub passed: bool,
}

/// Build the lex-segment ideal of `h`, lift it with a restricted matrix and
/// check that the lifted configuration is a generalized stick figure whose
/// Hilbert function has `t`-th difference `h`.
///
/// The Hilbert function of the lifted ideal is read off its degree-lex
/// initial ideal.
pub fn stick_figure_from_h_vector<F: Field>(
    h: &[i64],
    t: usize,
    provenance: Option<Provenance>,
    limits: &GroebnerLimits,
) -> Result<StickConstruction> {
    let n = trimmed(h).get(1).map_or(1, |&v| (v as usize).max(1));
    let j = lex_ideal_from_h_vector(h, n)?;
    let h = trimmed(h).to_vec();
    let len = HILBERT_CHECK_DEGREES as usize + 1;
    let expected = hilbert_function_from_h(&h, t, len);

    if t == 0 {
        let data = hilbert_series(&j)?;
        let computed: Vec<i64> = (0..len as u32).map(|d| data.hilbert_function(d)).collect();
        let ok = computed == expected;
        return Ok(StickConstruction {
            h,
            n,
            t,
            ideal: j.to_string(),
            matrix: None,
            configuration: None,
            stick: None,
            genericity: None,
            hilbert: HilbertCheck {
                verified: Some(ok),
                expected,
                computed,
                note: "no lifting for t = 0".into(),
            },
            passed: ok,
        });
    }

    let (rows, _) = j.max_exponents();
    let config = match provenance {
        Some(p) => LiftingConfig {
            mode: LiftMode::Restricted,
            provenance: p,
            t,
        },
        None => LiftingConfig::default_vandermonde(t, &rows),
    };
    let a = LiftingMatrix::<F>::from_config(&config, n, &rows)?;
    let genericity = check_genericity(&a, &j)?;
    let configuration = components_artinian(&j, None, t)?;
    let stick = is_generalized_stick_figure(&configuration, false);

    let hilbert = match lifted_hilbert_function(&j, &a, limits, len) {
        Ok(computed) => HilbertCheck {
            verified: Some(computed == expected),
            expected,
            computed,
            note: "Hilbert function of the lifted ideal from its initial ideal".into(),
        },
        Err(e) if e.is_resource_limit() => HilbertCheck {
            verified: None,
            expected,
            computed: Vec::new(),
            note: format!("unverified: {e}"),
        },
        Err(e) => return Err(e),
    };
    let passed = genericity.passed && stick.passed && hilbert.verified != Some(false);
    Ok(StickConstruction {
        h,
        n,
        t,
        ideal: j.to_string(),
        matrix: Some(config),
        configuration: Some(configuration),
        stick: Some(stick),
        genericity: Some(genericity),
        hilbert,
        passed,
    })
}

/// Same construction starting from the first values of a Hilbert function
/// of dimension `t`. The listed prefix must be long enough for its `t`-th
/// difference to reach zero.
pub fn stick_figure_from_o_sequence<F: Field>(
    s: &[i64],
    t: usize,
    provenance: Option<Provenance>,
    limits: &GroebnerLimits,
) -> Result<StickConstruction> {
    if !is_t_differentiable(s, t) {
        return Err(Error::InvalidSequence(format!(
            "{s:?} is not {t}-times differentiable"
        )));
    }
    let h = difference(s, t);
    if h.last().is_some_and(|&v| v != 0) {
        return Err(Error::InvalidSequence(format!(
            "the {t}-th difference of {s:?} does not reach zero; list more values"
        )));
    }
    stick_figure_from_h_vector::<F>(&h, t, provenance, limits)
}

fn lifted_hilbert_function<F: Field>(
    j: &MonomialIdeal,
    a: &LiftingMatrix<F>,
    limits: &GroebnerLimits,
    len: usize,
) -> Result<Vec<i64>> {
    let gens = a.lifted_ideal(j)?;
    let gb = buchberger(&gens, &TermOrder::deglex(a.ring().nvars()), limits)?;
    let data = hilbert_series(&gb.initial_ideal()?)?;
    Ok((0..len as u32).map(|d| data.hilbert_function(d)).collect())
}
