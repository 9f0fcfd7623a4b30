//! Intersections, quotients, irreducible decompositions, Hilbert series and
//! graded Betti numbers of monomial ideals.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::ideal::MonomialIdeal;
use crate::monomial::{binomial, lcm, Monomial};

/// Generator count above which the Hilbert numerator switches from subset
/// enumeration to the splitting recursion.
pub const SUBSET_LIMIT: usize = 20;

/// Default cap on generators for Taylor-based Betti computations.
pub const BETTI_LIMIT: usize = 14;

/// Intersection of monomial ideals, generated by the lcm's of generator tuples.
pub fn intersect(ideals: &[&MonomialIdeal]) -> Result<MonomialIdeal> {
    let Some(first) = ideals.first() else {
        return Err(Error::Shape("intersection of no ideals".into()));
    };
    let mut acc = (*first).clone();
    for j in &ideals[1..] {
        acc.same_n(j)?;
        let gens = acc
            .generators()
            .iter()
            .flat_map(|a| j.generators().iter().map(move |b| a.lcm_with(b)))
            .collect();
        acc = MonomialIdeal::new(acc.n(), gens)?;
    }
    Ok(acc)
}

/// `(J : m)`, generated by `g / gcd(g, m)`.
pub fn quotient_by_monomial(j: &MonomialIdeal, m: &Monomial) -> Result<MonomialIdeal> {
    if m.nvars() != j.n() {
        return Err(Error::LengthMismatch {
            expected: j.n(),
            found: m.nvars(),
        });
    }
    let gens = j.generators().iter().map(|g| g.colon(m)).collect();
    MonomialIdeal::new(j.n(), gens)
}

/// `(J : K) = ∩_g (J : g)` over the generators `g` of `K`.
pub fn quotient(j: &MonomialIdeal, k: &MonomialIdeal) -> Result<MonomialIdeal> {
    j.same_n(k)?;
    if k.is_zero() {
        return Ok(MonomialIdeal::unit(j.n()));
    }
    let parts = k
        .generators()
        .iter()
        .map(|g| quotient_by_monomial(j, g))
        .collect::<Result<Vec<_>>>()?;
    intersect(&parts.iter().collect::<Vec<_>>())
}

/// An irreducible monomial ideal `(x_{j1}^{a1}, ..., x_{jp}^{ap})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IrreducibleComponent {
    /// Variable index (0-based) to exponent.
    pub entries: BTreeMap<usize, u32>,
}

impl IrreducibleComponent {
    pub fn codim(&self) -> usize {
        self.entries.len()
    }

    pub fn to_ideal(&self, n: usize) -> MonomialIdeal {
        let powers: Vec<(usize, u32)> = self.entries.iter().map(|(&j, &a)| (j, a)).collect();
        MonomialIdeal::pure_powers(n, &powers)
    }

    /// Containment of irreducible ideals: `self ⊆ other`.
    pub fn is_contained_in(&self, other: &IrreducibleComponent) -> bool {
        self.entries
            .iter()
            .all(|(j, &a)| other.entries.get(j).is_some_and(|&b| b <= a))
    }

    fn from_ideal(j: &MonomialIdeal) -> Self {
        let entries = j
            .generators()
            .iter()
            .map(|g| {
                let v = g.pure_power_of().expect("pure powers only");
                (v, g.exponent(v))
            })
            .collect();
        IrreducibleComponent { entries }
    }
}

/// Irredundant irreducible decomposition of a proper nonzero ideal.
///
/// A generator `m = x_j^a * m''` that is not a pure power splits the ideal as
/// `(J + x_j^a) ∩ (J + m'')`; the leaves are irreducible and redundant leaves
/// are dropped by pairwise containment, which suffices for irreducible ideals.
pub fn irreducible_decomposition(j: &MonomialIdeal) -> Result<Vec<IrreducibleComponent>> {
    if j.is_zero() || j.is_unit() {
        return Err(Error::ZeroOrUnitIdeal);
    }
    let mut leaves = HashSet::new();
    let mut seen = HashSet::new();
    let mut stack = vec![j.clone()];
    while let Some(cur) = stack.pop() {
        if !seen.insert(cur.clone()) {
            continue;
        }
        match cur
            .generators()
            .iter()
            .find(|g| g.pure_power_of().is_none())
        {
            None => {
                leaves.insert(IrreducibleComponent::from_ideal(&cur));
            }
            Some(g) => {
                let v = g.support().next().expect("non-unit generator");
                let power = Monomial::var(cur.n(), v, g.exponent(v));
                let rest = g.div(&power).expect("divides");
                stack.push(cur.add_monomial(&power));
                stack.push(cur.add_monomial(&rest));
            }
        }
    }
    let leaves: Vec<IrreducibleComponent> = leaves.into_iter().collect();
    let mut out: Vec<IrreducibleComponent> = leaves
        .iter()
        .filter(|q| {
            !leaves
                .iter()
                .any(|other| other != *q && other.is_contained_in(q))
        })
        .cloned()
        .collect();
    out.sort_by(|a, b| a.codim().cmp(&b.codim()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Smallest number of variables meeting the support of every generator.
pub fn codimension(j: &MonomialIdeal) -> Result<usize> {
    if j.is_unit() {
        return Err(Error::ZeroOrUnitIdeal);
    }
    let n = j.n();
    let supports: Vec<u64> = j
        .generators()
        .iter()
        .map(|g| g.support().fold(0u64, |acc, v| acc | (1 << v)))
        .collect();
    if supports.is_empty() {
        return Ok(0);
    }
    if n > 24 {
        return Err(Error::LimitExceeded {
            what: "variables for vertex-cover search".into(),
            limit: 24,
        });
    }
    let mut best = n;
    for cover in 0u64..(1 << n) {
        let size = cover.count_ones() as usize;
        if size < best && supports.iter().all(|s| s & cover != 0) {
            best = size;
        }
    }
    Ok(best)
}

/// Hilbert series data of `S/J`: the series is `numerator(t) / (1-t)^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertData {
    pub n: usize,
    pub dim: usize,
    #[serde(rename = "hilbert_numerator")]
    pub numerator: Vec<i64>,
    /// Numerator after cancelling `(1-t)^codim`; the series equals
    /// `h(t) / (1-t)^dim`.
    pub h_vector: Vec<i64>,
}

impl HilbertData {
    /// Value of the Hilbert function of `S/J` at degree `d`.
    pub fn hilbert_function(&self, d: u32) -> i64 {
        series_coefficient(&self.numerator, self.n, d)
    }
}

/// Coefficient of `t^d` in `num(t) / (1-t)^n`.
pub fn series_coefficient(num: &[i64], n: usize, d: u32) -> i64 {
    let mut total: i128 = 0;
    for (k, &c) in num.iter().enumerate() {
        if k as u32 > d || c == 0 {
            continue;
        }
        let m = (d - k as u32) as u64;
        let count = if n == 0 {
            (m == 0) as u64
        } else {
            binomial(m + n as u64 - 1, n as u64 - 1)
        };
        total += c as i128 * count as i128;
    }
    total as i64
}

fn add_shifted(acc: &mut Vec<i64>, poly: &[i64], shift: usize, sign: i64) {
    if acc.len() < poly.len() + shift {
        acc.resize(poly.len() + shift, 0);
    }
    for (k, &c) in poly.iter().enumerate() {
        acc[k + shift] += sign * c;
    }
}

fn trim(mut v: Vec<i64>) -> Vec<i64> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    if v.is_empty() {
        v.push(0);
    }
    v
}

/// Numerator by inclusion-exclusion over subsets of the generators.
pub fn numerator_by_subsets(j: &MonomialIdeal) -> Result<Vec<i64>> {
    let gens = j.generators();
    if gens.len() > SUBSET_LIMIT {
        return Err(Error::LimitExceeded {
            what: "generators for subset enumeration".into(),
            limit: SUBSET_LIMIT,
        });
    }
    let mut acc = vec![0i64; 1];
    fn rec(gens: &[Monomial], i: usize, cur: &Monomial, sign: i64, acc: &mut Vec<i64>) {
        if i == gens.len() {
            add_shifted(acc, &[1], cur.degree() as usize, sign);
            return;
        }
        rec(gens, i + 1, cur, sign, acc);
        rec(gens, i + 1, &cur.lcm_with(&gens[i]), -sign, acc);
    }
    rec(gens, 0, &Monomial::one(j.n()), 1, &mut acc);
    Ok(trim(acc))
}

/// Numerator by `K(J' + m) = K(J') - t^deg m K(J' : m)`.
pub fn numerator_by_recursion(j: &MonomialIdeal) -> Vec<i64> {
    let mut memo = HashMap::new();
    trim(numerator_rec(j, &mut memo))
}

fn numerator_rec(j: &MonomialIdeal, memo: &mut HashMap<MonomialIdeal, Vec<i64>>) -> Vec<i64> {
    if let Some(v) = memo.get(j) {
        return v.clone();
    }
    let gens = j.generators();
    let out = if gens.is_empty() {
        vec![1]
    } else if gens.iter().all(|g| g.support().count() <= 1)
        || gens
            .iter()
            .enumerate()
            .all(|(a, g)| gens[a + 1..].iter().all(|h| g.gcd_with(h).is_one()))
    {
        // pairwise coprime generators: product of (1 - t^deg g)
        let mut acc = vec![1i64];
        for g in gens {
            let mut next = acc.clone();
            add_shifted(&mut next, &acc, g.degree() as usize, -1);
            acc = next;
        }
        acc
    } else {
        let last = gens.last().unwrap();
        let rest = MonomialIdeal::new(j.n(), gens[..gens.len() - 1].to_vec()).expect("same n");
        let colon = quotient_by_monomial(&rest, last).expect("same n");
        let mut acc = numerator_rec(&rest, memo);
        let sub = numerator_rec(&colon, memo);
        add_shifted(&mut acc, &sub, last.degree() as usize, -1);
        acc
    };
    memo.insert(j.clone(), out.clone());
    out
}

/// Divide by `(1 - t)` exactly; `None` if `poly(1) != 0`.
fn divide_one_minus_t(poly: &[i64]) -> Option<Vec<i64>> {
    // poly = (1 - t) q  =>  q_k = sum_{i<=k} poly_i
    let mut q = Vec::with_capacity(poly.len());
    let mut run = 0i64;
    for &c in poly {
        run += c;
        q.push(run);
    }
    if run != 0 {
        return None;
    }
    q.pop();
    Some(q)
}

/// Hilbert series of `S/J`.
pub fn hilbert_series(j: &MonomialIdeal) -> Result<HilbertData> {
    let numerator = if j.len() <= SUBSET_LIMIT {
        numerator_by_subsets(j)?
    } else {
        numerator_by_recursion(j)
    };
    let codim = if j.is_unit() { j.n() } else { codimension(j)? };
    let mut h = numerator.clone();
    for _ in 0..codim {
        h = match divide_one_minus_t(&h) {
            Some(q) => q,
            None => break,
        };
    }
    Ok(HilbertData {
        n: j.n(),
        dim: j.n() - codim,
        numerator,
        h_vector: trim(h),
    })
}

/// Graded Betti numbers `β_{i,j}` of `S/J` for `i >= 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BettiTable {
    pub entries: BTreeMap<(usize, u32), u64>,
}

impl BettiTable {
    pub fn get(&self, i: usize, j: u32) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Projective dimension of `S/J` (0 for the zero ideal).
    pub fn projective_dimension(&self) -> usize {
        self.entries.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    /// `1 + Σ (-1)^i β_{i,j} t^j`, which equals the Hilbert numerator.
    pub fn euler_polynomial(&self) -> Vec<i64> {
        let mut acc = vec![1i64];
        for (&(i, j), &b) in &self.entries {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            add_shifted(&mut acc, &[b as i64], j as usize, sign);
        }
        trim(acc)
    }

    /// Triples `[i, j, β]` in increasing order.
    pub fn triples(&self) -> Vec<[u64; 3]> {
        self.entries
            .iter()
            .map(|(&(i, j), &b)| [i as u64, j as u64, b])
            .collect()
    }

    pub fn from_triples(triples: &[[u64; 3]]) -> Self {
        let entries = triples
            .iter()
            .filter(|t| t[2] > 0)
            .map(|t| ((t[0] as usize, t[1] as u32), t[2]))
            .collect();
        BettiTable { entries }
    }
}

impl Serialize for BettiTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            betti: Vec<[u64; 3]>,
        }
        Repr {
            betti: self.triples(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BettiTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            betti: Vec<[u64; 3]>,
        }
        let r = Repr::deserialize(d)?;
        Ok(BettiTable::from_triples(&r.betti))
    }
}

/// Betti numbers over the rationals with the default generator cap.
pub fn graded_betti(j: &MonomialIdeal) -> Result<BettiTable> {
    graded_betti_over::<Rational>(j, BETTI_LIMIT)
}

/// Betti numbers as Tor ranks: the Taylor complex tensored with the residue
/// field splits by lcm multidegree, and in each multidegree only the entries
/// with `m_A = m_B` survive.
pub fn graded_betti_over<F: Field>(j: &MonomialIdeal, max_generators: usize) -> Result<BettiTable> {
    let r = j.len();
    if r > max_generators {
        return Err(Error::LimitExceeded {
            what: "generators for the Taylor complex".into(),
            limit: max_generators,
        });
    }
    if j.is_unit() {
        return Ok(BettiTable::default());
    }
    let gens = j.generators();
    // multidegree -> subsets with that lcm
    let mut groups: HashMap<Monomial, Vec<u32>> = HashMap::new();
    for mask in 1u32..(1u32 << r) {
        let m = lcm((0..r).filter(|&i| mask >> i & 1 == 1).map(|i| &gens[i]))?;
        groups.entry(m).or_default().push(mask);
    }
    let mut entries = BTreeMap::new();
    for (mu, masks) in groups {
        let deg = mu.degree();
        let mut by_size: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
        for &mask in &masks {
            by_size
                .entry(mask.count_ones() as usize)
                .or_default()
                .push(mask);
        }
        let top = *by_size.keys().max().unwrap();
        // rank of d_i : size i -> size i-1 inside this multidegree
        let mut ranks = vec![0usize; top + 2];
        for (i, rank) in ranks.iter_mut().enumerate().take(top + 1).skip(2) {
            let (Some(src), Some(dst)) = (by_size.get(&i), by_size.get(&(i - 1))) else {
                continue;
            };
            let index: HashMap<u32, usize> = dst.iter().enumerate().map(|(k, &m)| (m, k)).collect();
            let mut rows = vec![vec![F::zero(); src.len()]; dst.len()];
            for (c, &a) in src.iter().enumerate() {
                for (k, bit) in bits(a).enumerate() {
                    let b = a & !(1 << bit);
                    if let Some(&row) = index.get(&b) {
                        let sign = if k % 2 == 0 { F::one() } else { F::one().neg() };
                        rows[row][c] = sign;
                    }
                }
            }
            *rank = F::rank(rows);
        }
        for (&i, v) in &by_size {
            let b = v.len() - ranks[i] - ranks[i + 1];
            if b > 0 {
                *entries.entry((i, deg)).or_insert(0) += b as u64;
            }
        }
    }
    Ok(BettiTable { entries })
}

/// Indices of set bits in increasing order.
pub(crate) fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&i| mask >> i & 1 == 1)
}

/// Projective dimension, depth, Krull dimension and Cohen-Macaulayness of `S/J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthInfo {
    pub pd: usize,
    pub depth: usize,
    pub dim: usize,
    pub cohen_macaulay: bool,
}

pub fn depth_and_cm(j: &MonomialIdeal) -> Result<DepthInfo> {
    if j.is_unit() {
        return Err(Error::ZeroOrUnitIdeal);
    }
    let pd = graded_betti(j)?.projective_dimension();
    let depth = j.n() - pd;
    let dim = j.n() - codimension(j)?;
    Ok(DepthInfo {
        pd,
        depth,
        dim,
        cohen_macaulay: depth == dim,
    })
}

/// All irredundant irreducible components have the same codimension.
pub fn is_equidimensional(j: &MonomialIdeal) -> Result<bool> {
    let comps = irreducible_decomposition(j)?;
    Ok(comps.windows(2).all(|w| w[0].codim() == w[1].codim()))
}
