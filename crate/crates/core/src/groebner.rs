//! A small Buchberger engine for homogeneous ideals, used to confirm initial
//! ideals of lifted ideals.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::ideal::MonomialIdeal;
use crate::lifting::LiftingMatrix;
use crate::monomial::{Monomial, TermOrder};
use crate::poly::SparsePoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerLimits {
    pub max_generators: usize,
    pub max_degree: u32,
    pub max_reductions: usize,
}

impl Default for GroebnerLimits {
    fn default() -> Self {
        GroebnerLimits {
            max_generators: 8,
            max_degree: 8,
            max_reductions: 50_000,
        }
    }
}

/// Terms sorted from largest to smallest.
type Terms<F> = Vec<(Monomial, F)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis<F: Field> {
    nvars: usize,
    order: TermOrder,
    polys: Vec<Terms<F>>,
    reduced: bool,
    reductions: usize,
}

impl<F: Field> GroebnerBasis<F> {
    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Number of S-polynomial reductions performed.
    pub fn reductions(&self) -> usize {
        self.reductions
    }

    pub fn polys(&self) -> Vec<SparsePoly<F>> {
        self.polys
            .iter()
            .map(|p| SparsePoly::from_terms(self.nvars, p.iter().cloned()))
            .collect()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().map(|p| p[0].0.clone()).collect()
    }

    pub fn initial_ideal(&self) -> Result<MonomialIdeal> {
        MonomialIdeal::new(self.nvars, self.leading_monomials())
    }

    /// Normal form with respect to the basis.
    pub fn reduce(&self, f: &SparsePoly<F>) -> SparsePoly<F> {
        let nf = normal_form(&f.sorted_terms(&self.order), &self.polys, &self.order);
        SparsePoly::from_terms(self.nvars, nf)
    }

    pub fn contains(&self, f: &SparsePoly<F>) -> bool {
        self.reduce(f).is_zero()
    }
}

/// `f - c * m * g`, merging sorted term lists.
fn sub_scaled<F: Field>(
    f: &[(Monomial, F)],
    c: &F,
    m: &Monomial,
    g: &[(Monomial, F)],
    order: &TermOrder,
) -> Terms<F> {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let mut i = 0;
    let mut shifted = g.iter().map(|(gm, gc)| (gm.mul(m), c.mul(gc))).peekable();
    while i < f.len() || shifted.peek().is_some() {
        let ord = match (f.get(i), shifted.peek()) {
            (Some(a), Some(b)) => order.cmp(&a.0, &b.0),
            (Some(_), None) => Ordering::Greater,
            (None, _) => Ordering::Less,
        };
        match ord {
            Ordering::Greater => {
                out.push(f[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let (bm, bc) = shifted.next().expect("peeked");
                out.push((bm, bc.neg()));
            }
            Ordering::Equal => {
                let (bm, bc) = shifted.next().expect("peeked");
                let v = f[i].1.sub(&bc);
                if !v.is_zero() {
                    out.push((bm, v));
                }
                i += 1;
            }
        }
    }
    out
}

fn make_monic<F: Field>(mut f: Terms<F>) -> Terms<F> {
    if let Some(lead) = f.first().map(|t| t.1.clone()) {
        if !lead.is_one() {
            let inv = lead.inv().expect("nonzero leading coefficient");
            for t in &mut f {
                t.1 = t.1.mul(&inv);
            }
        }
    }
    f
}

/// Full reduction of `f` by monic `basis`.
fn normal_form<F: Field>(f: &[(Monomial, F)], basis: &[Terms<F>], order: &TermOrder) -> Terms<F> {
    let mut rest: Terms<F> = f.to_vec();
    let mut out: Terms<F> = Vec::new();
    while let Some((lm, lc)) = rest.first().cloned() {
        match basis.iter().find(|g| g[0].0.divides_unchecked(&lm)) {
            Some(g) => {
                let q = lm.div(&g[0].0).expect("divisor");
                rest = sub_scaled(&rest, &lc, &q, g, order);
            }
            None => {
                out.push(rest.remove(0));
            }
        }
    }
    out
}

fn s_polynomial<F: Field>(f: &Terms<F>, g: &Terms<F>, order: &TermOrder) -> Terms<F> {
    let l = f[0].0.lcm_with(&g[0].0);
    let mf = l.div(&f[0].0).expect("lcm");
    let mg = l.div(&g[0].0).expect("lcm");
    let fs: Terms<F> = f.iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
    sub_scaled(&fs, &F::one(), &mg, g, order)
}

/// Reduced Groebner basis of the ideal generated by homogeneous `gens`.
///
/// Pairs are processed by smallest lcm (normal strategy), skipping pairs with
/// coprime leading monomials and pairs whose lcm is divisible by a third
/// leading monomial whose pairs with both are already done.
pub fn buchberger<F: Field>(
    gens: &[SparsePoly<F>],
    order: &TermOrder,
    limits: &GroebnerLimits,
) -> Result<GroebnerBasis<F>> {
    let nvars = gens.first().map_or(order.priority.len(), |g| g.nvars());
    if gens.len() > limits.max_generators {
        return Err(Error::LimitExceeded {
            what: "generators for Groebner basis".into(),
            limit: limits.max_generators,
        });
    }
    for g in gens {
        if g.nvars() != nvars {
            return Err(Error::LengthMismatch {
                expected: nvars,
                found: g.nvars(),
            });
        }
        if !g.is_homogeneous() {
            return Err(Error::Shape("Groebner inputs must be homogeneous".into()));
        }
        if g.total_degree().unwrap_or(0) > limits.max_degree {
            return Err(Error::LimitExceeded {
                what: "generator degree for Groebner basis".into(),
                limit: limits.max_degree as usize,
            });
        }
    }

    let mut basis: Vec<Terms<F>> = Vec::new();
    for g in gens {
        let nf = normal_form(&g.sorted_terms(order), &basis, order);
        if !nf.is_empty() {
            basis.push(make_monic(nf));
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    let mut done = std::collections::HashSet::new();
    let mut reductions = 0usize;
    while !pairs.is_empty() {
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                let la = basis[pairs[a].0][0].0.lcm_with(&basis[pairs[a].1][0].0);
                let lb = basis[pairs[b].0][0].0.lcm_with(&basis[pairs[b].1][0].0);
                order.cmp(&la, &lb).then(pairs[a].cmp(&pairs[b]))
            })
            .expect("nonempty");
        let (i, j) = pairs.swap_remove(best);
        let (li, lj) = (&basis[i][0].0, &basis[j][0].0);
        let l = li.lcm_with(lj);
        let coprime = li.gcd_with(lj).is_one();
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k][0].0.divides_unchecked(&l)
                && done.contains(&(i.min(k), i.max(k)))
                && done.contains(&(j.min(k), j.max(k)))
        });
        done.insert((i, j));
        if coprime || chain {
            continue;
        }
        reductions += 1;
        if reductions > limits.max_reductions {
            return Err(Error::LimitExceeded {
                what: "S-pair reductions".into(),
                limit: limits.max_reductions,
            });
        }
        let s = s_polynomial(&basis[i], &basis[j], order);
        let nf = normal_form(&s, &basis, order);
        if !nf.is_empty() {
            let k = basis.len();
            basis.push(make_monic(nf));
            pairs.extend((0..k).map(|i| (i, k)));
        }
    }

    // minimal, then interreduced
    let mut minimal: Vec<Terms<F>> = Vec::new();
    for (idx, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(k, h)| {
            k != idx && h[0].0.divides_unchecked(&g[0].0) && (h[0].0 != g[0].0 || k < idx)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for idx in 0..minimal.len() {
        let others: Vec<Terms<F>> = minimal
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != idx)
            .map(|(_, h)| h.clone())
            .collect();
        let g = &minimal[idx];
        let mut tail = normal_form(&g[1..], &others, order);
        let mut full = vec![g[0].clone()];
        full.append(&mut tail);
        reduced.push(make_monic(full));
    }
    reduced.sort_by(|a, b| order.cmp(&b[0].0, &a[0].0));
    Ok(GroebnerBasis {
        nvars,
        order: order.clone(),
        polys: reduced,
        reduced: true,
        reductions,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitialIdealReport {
    pub passed: bool,
    pub basis_size: usize,
    pub reductions: usize,
    pub initial_ideal: String,
    pub expected: String,
    /// `J R` is contained in the computed initial ideal.
    pub contains_expected: bool,
}

/// Compare the degree-lex initial ideal of the lifted ideal with `J R`.
pub fn verify_initial_ideal<F: Field>(
    j: &MonomialIdeal,
    a: &LiftingMatrix<F>,
    limits: &GroebnerLimits,
) -> Result<InitialIdealReport> {
    let ring = a.ring();
    let gens = a.lifted_ideal(j)?;
    let order = TermOrder::deglex(ring.nvars());
    let gb = buchberger(&gens, &order, limits)?;
    let initial = gb.initial_ideal()?;
    let expected = j.extend(a.t());
    Ok(InitialIdealReport {
        passed: initial == expected,
        basis_size: gb.len(),
        reductions: gb.reductions(),
        initial_ideal: initial.display_in(ring),
        expected: expected.display_in(ring),
        contains_expected: initial.contains_ideal(&expected),
    })
}
