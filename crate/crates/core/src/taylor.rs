//! Taylor complexes of monomial ideals, their lifts along a lifting matrix,
//! and exact checks that the results are resolutions.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{bits, graded_betti_over, BettiTable, BETTI_LIMIT};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::ideal::MonomialIdeal;
use crate::lifting::LiftingMatrix;
use crate::matrix::PolyMatrix;
use crate::monomial::{count_monomials, lcm, Monomial};
use crate::poly::SparsePoly;

/// Default cap on generators for building Taylor complexes.
pub const TAYLOR_LIMIT: usize = 12;

/// Sign attached to removing the `k`-th element (1-based) of a sorted subset.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    /// `(-1)^k`.
    #[default]
    Taylor,
    /// `(-1)^(k+1)`, the usual Koszul sign; the negative of the above.
    Koszul,
}

impl SignConvention {
    fn sign<F: Field>(self, k: usize) -> F {
        let odd = match self {
            SignConvention::Taylor => k % 2 == 1,
            SignConvention::Koszul => k.is_multiple_of(2),
        };
        if odd {
            F::one().neg()
        } else {
            F::one()
        }
    }
}

/// A complex of graded free modules `0 -> F_p -> ... -> F_1 -> F_0`.
///
/// Basis elements of `F_k` are labelled by `k`-subsets of the generators as
/// bitmasks, ordered by value; `F_0` is spanned by the empty set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComplex<F: Field> {
    nvars: usize,
    labels: Vec<Vec<u32>>,
    shifts: Vec<Vec<u32>>,
    /// `maps[k-1]` is `d_k : F_k -> F_{k-1}`.
    maps: Vec<PolyMatrix<F>>,
}

impl<F: Field> FreeComplex<F> {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Length `p` of the complex.
    pub fn length(&self) -> usize {
        self.maps.len()
    }

    pub fn rank(&self, k: usize) -> usize {
        self.labels.get(k).map_or(0, Vec::len)
    }

    pub fn labels(&self, k: usize) -> &[u32] {
        &self.labels[k]
    }

    pub fn shifts(&self, k: usize) -> &[u32] {
        &self.shifts[k]
    }

    /// `d_k` for `1 <= k <= length`.
    pub fn differential(&self, k: usize) -> &PolyMatrix<F> {
        &self.maps[k - 1]
    }

    pub fn differentials(&self) -> &[PolyMatrix<F>] {
        &self.maps
    }

    /// Replace `d_k`; used to build deliberately broken complexes in tests.
    pub fn with_differential(mut self, k: usize, m: PolyMatrix<F>) -> Result<Self> {
        let old = &self.maps[k - 1];
        if old.row_shifts() != m.row_shifts() || old.col_shifts() != m.col_shifts() {
            return Err(Error::Shape(
                "replacement differential has other shifts".into(),
            ));
        }
        self.maps[k - 1] = m;
        Ok(self)
    }

    /// Index of a basis label in `F_k`.
    pub fn position(&self, k: usize, label: u32) -> Option<usize> {
        self.labels[k].iter().position(|&l| l == label)
    }
}

fn subsets_by_size(r: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new(); r + 1];
    for mask in 0u32..(1u32 << r) {
        out[mask.count_ones() as usize].push(mask);
    }
    out
}

fn lcm_table(j: &MonomialIdeal) -> Result<HashMap<u32, Monomial>> {
    let gens = j.generators();
    let r = gens.len();
    let mut table = HashMap::with_capacity(1 << r);
    table.insert(0u32, Monomial::one(j.n()));
    for mask in 1u32..(1u32 << r) {
        let m = lcm(bits(mask).map(|i| &gens[i]))?;
        table.insert(mask, m);
    }
    Ok(table)
}

fn check_size(j: &MonomialIdeal, limit: usize) -> Result<()> {
    if j.len() > limit {
        return Err(Error::LimitExceeded {
            what: "generators for the Taylor complex".into(),
            limit,
        });
    }
    if j.is_zero() {
        return Err(Error::ZeroOrUnitIdeal);
    }
    Ok(())
}

/// Shared construction; `entry(A, B)` is the coefficient polynomial without
/// sign for `B = A minus one element`.
fn build<F: Field>(
    j: &MonomialIdeal,
    nvars: usize,
    convention: SignConvention,
    table: &HashMap<u32, Monomial>,
    entry: impl Fn(u32, u32) -> Result<SparsePoly<F>>,
) -> Result<FreeComplex<F>> {
    let r = j.len();
    let labels = subsets_by_size(r);
    let shifts: Vec<Vec<u32>> = labels
        .iter()
        .map(|ls| ls.iter().map(|a| table[a].degree()).collect())
        .collect();
    let mut maps = Vec::with_capacity(r);
    for k in 1..=r {
        let rows_index: HashMap<u32, usize> = labels[k - 1]
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, i))
            .collect();
        let mut m = PolyMatrix::zero(nvars, shifts[k - 1].clone(), shifts[k].clone());
        let mut entries: Vec<Vec<SparsePoly<F>>> = m.entries().to_vec();
        for (col, &a) in labels[k].iter().enumerate() {
            for (pos, i) in bits(a).enumerate() {
                let b = a & !(1 << i);
                let poly = entry(a, b)?.scale(&convention.sign::<F>(pos + 1));
                entries[rows_index[&b]][col] = poly;
            }
        }
        m = PolyMatrix::new(nvars, shifts[k - 1].clone(), shifts[k].clone(), entries)?;
        maps.push(m);
    }
    Ok(FreeComplex {
        nvars,
        labels,
        shifts,
        maps,
    })
}

/// The Taylor resolution of `S/J` with entries `±m_A / m_B`.
pub fn taylor_complex<F: Field>(
    j: &MonomialIdeal,
    convention: SignConvention,
    max_generators: usize,
) -> Result<FreeComplex<F>> {
    check_size(j, max_generators)?;
    let table = lcm_table(j)?;
    build(j, j.n(), convention, &table, |a, b| {
        Ok(SparsePoly::monomial(
            table[&a].div(&table[&b]).expect("lcm divides"),
        ))
    })
}

/// The lifted Taylor complex: `m_A / m_B` becomes the product of the entries
/// `L_{j, a_j(B)+1} ... L_{j, a_j(A)}` of each row.
pub fn lift_taylor_complex<F: Field>(
    j: &MonomialIdeal,
    a: &LiftingMatrix<F>,
    convention: SignConvention,
    max_generators: usize,
) -> Result<FreeComplex<F>> {
    check_size(j, max_generators)?;
    if j.n() != a.n() {
        return Err(Error::LengthMismatch {
            expected: a.n(),
            found: j.n(),
        });
    }
    let table = lcm_table(j)?;
    build(j, a.n() + a.t(), convention, &table, |s, t| {
        a.partial_product(table[&t].exponents(), table[&s].exponents())
    })
}

/// Every composite `d_k d_{k+1}` vanishes, checked exactly.
pub fn verify_complex<F: Field>(c: &FreeComplex<F>) -> Result<bool> {
    let results: Vec<Result<bool>> = (1..c.length())
        .into_par_iter()
        .map(|k| {
            Ok(c.differential(k)
                .matrix_product(c.differential(k + 1))?
                .is_zero())
        })
        .collect();
    for r in results {
        if !r? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericRankCheck {
    pub position: usize,
    pub rank_module: usize,
    pub rank_out: usize,
    pub rank_in: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeCheck {
    pub degree: u32,
    pub position: usize,
    pub dim: usize,
    /// Rank of `d_k` in this degree.
    pub rank_out: usize,
    /// Rank of `d_{k+1}` in this degree.
    pub rank_in: usize,
    /// Whether the ranks came from the modular certificate.
    pub modular: bool,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub complex_verified: bool,
    /// Randomized rank condition; labelled probabilistic because a failure
    /// may come from an unlucky evaluation point.
    pub generic_rank_passed: bool,
    pub generic_rank_probabilistic: bool,
    pub seed: u64,
    pub trials: usize,
    pub generic_rank: Vec<GenericRankCheck>,
    pub degree_bound: u32,
    pub degreewise: Vec<DegreeCheck>,
    pub degreewise_passed: bool,
    pub passed: bool,
}

/// Check exactness of `c` at every positive homological position.
///
/// The degreewise part is a certificate in each degree up to `degree_bound`:
/// ranks modulo a large prime are lower bounds for ranks over the rationals,
/// while `d_k d_{k+1} = 0` bounds their sum from above by `dim F_k`, so
/// equality of the modular sum with `dim F_k` proves exactness. Slices where
/// the modular sum falls short are redone exactly.
pub fn verify_exactness<F: Field>(
    c: &FreeComplex<F>,
    degree_bound: u32,
    seed: u64,
    trials: usize,
) -> Result<ExactnessReport> {
    let complex_verified = verify_complex(c)?;
    let p = c.length();

    let generic: Vec<Option<usize>> = (1..=p)
        .into_par_iter()
        .map(|k| {
            c.differential(k)
                .randomized_rank(seed.wrapping_add(k as u64), trials)
        })
        .collect();
    let generic_rank_of = |k: usize| -> Option<usize> {
        if k == 0 || k > p {
            Some(0)
        } else {
            generic[k - 1]
        }
    };
    let mut generic_rank = Vec::new();
    for k in 1..=p {
        let (out, inn) = (generic_rank_of(k), generic_rank_of(k + 1));
        let (rank_out, rank_in) = (out.unwrap_or(0), inn.unwrap_or(0));
        generic_rank.push(GenericRankCheck {
            position: k,
            rank_module: c.rank(k),
            rank_out,
            rank_in,
            ok: out.is_some() && inn.is_some() && rank_out + rank_in == c.rank(k),
        });
    }
    let generic_rank_passed = generic_rank.iter().all(|g| g.ok);

    let nvars = c.nvars();
    let dim_of = |k: usize, d: u32| -> usize {
        c.shifts(k)
            .iter()
            .filter(|&&s| s <= d)
            .map(|&s| count_monomials(nvars, d - s) as usize)
            .sum()
    };
    // modular lower bounds for every (k, d)
    let jobs: Vec<(usize, u32)> = (1..=p)
        .flat_map(|k| (0..=degree_bound).map(move |d| (k, d)))
        .collect();
    let modular: HashMap<(usize, u32), Option<usize>> = jobs
        .par_iter()
        .map(|&(k, d)| {
            (
                (k, d),
                c.differential(k).graded_slice(d).rank_mod_cert_prime(),
            )
        })
        .collect();
    let exact_cache: std::sync::Mutex<HashMap<(usize, u32), usize>> = Default::default();
    let exact_rank = |k: usize, d: u32| -> usize {
        if k == 0 || k > p {
            return 0;
        }
        if let Some(&r) = exact_cache.lock().unwrap().get(&(k, d)) {
            return r;
        }
        let r = c.differential(k).graded_slice(d).rank_exact();
        exact_cache.lock().unwrap().insert((k, d), r);
        r
    };
    let degreewise: Vec<DegreeCheck> = (0..=degree_bound)
        .into_par_iter()
        .flat_map_iter(|d| {
            let mut v = Vec::new();
            for k in 1..=p {
                let dim = dim_of(k, d);
                let lower = |kk: usize| -> Option<usize> {
                    if kk > p {
                        Some(0)
                    } else {
                        modular[&(kk, d)]
                    }
                };
                let check = match (lower(k), lower(k + 1)) {
                    (Some(a), Some(b)) if a + b == dim && complex_verified => DegreeCheck {
                        degree: d,
                        position: k,
                        dim,
                        rank_out: a,
                        rank_in: b,
                        modular: true,
                        exact: true,
                    },
                    _ => {
                        let (a, b) = (exact_rank(k, d), exact_rank(k + 1, d));
                        DegreeCheck {
                            degree: d,
                            position: k,
                            dim,
                            rank_out: a,
                            rank_in: b,
                            modular: false,
                            exact: complex_verified && a + b == dim,
                        }
                    }
                };
                v.push(check);
            }
            v
        })
        .collect();
    let degreewise_passed = degreewise.iter().all(|d| d.exact);
    Ok(ExactnessReport {
        complex_verified,
        generic_rank_passed,
        generic_rank_probabilistic: true,
        seed,
        trials,
        generic_rank,
        degree_bound,
        degreewise,
        degreewise_passed,
        passed: complex_verified && degreewise_passed,
    })
}

/// Graded Tor ranks of an exact complex of free modules: the complex is
/// tensored with the residue field (all variables set to zero) and the
/// homology computed degree by degree, up to `degree_bound` if given.
pub fn tor_ranks<F: Field>(c: &FreeComplex<F>, degree_bound: Option<u32>) -> BettiTable {
    let p = c.length();
    let constants: Vec<Vec<Vec<F>>> = c
        .differentials()
        .iter()
        .map(PolyMatrix::constant_part)
        .collect();
    let mut degrees: Vec<u32> = (1..=p).flat_map(|k| c.shifts(k).iter().copied()).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let rank_at = |k: usize, deg: u32| -> usize {
        if k == 0 || k > p {
            return 0;
        }
        let rows: Vec<usize> = (0..c.rank(k - 1))
            .filter(|&i| c.shifts(k - 1)[i] == deg)
            .collect();
        let cols: Vec<usize> = (0..c.rank(k)).filter(|&i| c.shifts(k)[i] == deg).collect();
        if rows.is_empty() || cols.is_empty() {
            return 0;
        }
        let m: Vec<Vec<F>> = rows
            .iter()
            .map(|&r| {
                cols.iter()
                    .map(|&cc| constants[k - 1][r][cc].clone())
                    .collect()
            })
            .collect();
        if m.iter().flatten().all(F::is_zero) {
            return 0;
        }
        F::rank(m)
    };
    let results: Vec<((usize, u32), u64)> = degrees
        .par_iter()
        .filter(|&&deg| degree_bound.is_none_or(|b| deg <= b))
        .flat_map_iter(|&deg| {
            (1..=p)
                .filter_map(|k| {
                    let dim = c.shifts(k).iter().filter(|&&s| s == deg).count();
                    if dim == 0 {
                        return None;
                    }
                    let b = dim - rank_at(k, deg) - rank_at(k + 1, deg);
                    (b > 0).then_some(((k, deg), b as u64))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    BettiTable {
        entries: results.into_iter().collect::<BTreeMap<_, _>>(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiAgreement {
    pub passed: bool,
    pub degree_bound: u32,
    pub base: BettiTable,
    pub lifted: BettiTable,
}

/// Compare the Tor ranks of the lifted Taylor complex with the graded Betti
/// numbers of `J`, in internal degrees up to `degree_bound`.
pub fn betti_agreement<F: Field>(
    j: &MonomialIdeal,
    a: &LiftingMatrix<F>,
    degree_bound: u32,
) -> Result<BettiAgreement> {
    let lifted = lift_taylor_complex(j, a, SignConvention::default(), TAYLOR_LIMIT)?;
    let lifted = tor_ranks(&lifted, Some(degree_bound));
    let mut base = graded_betti_over::<F>(j, BETTI_LIMIT.max(TAYLOR_LIMIT))?;
    base.entries.retain(|&(_, d), _| d <= degree_bound);
    Ok(BettiAgreement {
        passed: base == lifted,
        degree_bound,
        base,
        lifted,
    })
}

/// Hilbert function of the cokernel of `d_1` at degree `d`, valid when the
/// complex is exact in that degree.
pub fn hilbert_function_from_resolution<F: Field>(c: &FreeComplex<F>, d: u32) -> i64 {
    let mut total = 0i64;
    for k in 0..=c.length() {
        let dim: u64 = c
            .shifts(k)
            .iter()
            .filter(|&&s| s <= d)
            .map(|&s| count_monomials(c.nvars(), d - s))
            .sum();
        if k % 2 == 0 {
            total += dim as i64;
        } else {
            total -= dim as i64;
        }
    }
    total
}

/// Whether setting the last `t` variables to zero in every differential of
/// `lifted` gives the corresponding entry of `base` times a nonzero scalar.
pub fn restriction_matches<F: Field>(lifted: &FreeComplex<F>, base: &FreeComplex<F>) -> bool {
    if lifted.length() != base.length() {
        return false;
    }
    let n = base.nvars();
    let t = lifted.nvars() - n;
    let u_vars: Vec<usize> = (n..n + t).collect();
    for k in 1..=base.length() {
        let (l, b) = (lifted.differential(k), base.differential(k));
        if l.rows() != b.rows() || l.cols() != b.cols() || l.col_shifts() != b.col_shifts() {
            return false;
        }
        for r in 0..b.rows() {
            for col in 0..b.cols() {
                let restricted = l.entry(r, col).set_zero(&u_vars);
                let target = b.entry(r, col);
                match (restricted.is_zero(), target.is_zero()) {
                    (true, true) => continue,
                    (false, false) => {}
                    _ => return false,
                }
                // both nonzero: restricted must be a scalar times the monomial
                if restricted.len() != 1 || target.len() != 1 {
                    return false;
                }
                let (bm, _) = target.terms().next().unwrap();
                let (rm, _) = restricted.terms().next().unwrap();
                if *rm != bm.extend(t) {
                    return false;
                }
            }
        }
    }
    true
}
