//! Graded polynomial matrices and the scalar matrices of their graded pieces.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{sparse_rank_mod_p, CERT_PRIME};
use crate::monomial::{monomials_of_degree, Monomial, Ring};
use crate::poly::SparsePoly;

/// A map of graded free modules `⊕ R(-col_shift) -> ⊕ R(-row_shift)`.
///
/// Entry `(a, b)` is zero or homogeneous of degree
/// `col_shifts[b] - row_shifts[a]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix<F: Field> {
    nvars: usize,
    row_shifts: Vec<u32>,
    col_shifts: Vec<u32>,
    entries: Vec<Vec<SparsePoly<F>>>,
}

impl<F: Field> PolyMatrix<F> {
    pub fn new(
        nvars: usize,
        row_shifts: Vec<u32>,
        col_shifts: Vec<u32>,
        entries: Vec<Vec<SparsePoly<F>>>,
    ) -> Result<Self> {
        if entries.len() != row_shifts.len() {
            return Err(Error::Shape(format!(
                "{} rows but {} row shifts",
                entries.len(),
                row_shifts.len()
            )));
        }
        for (a, row) in entries.iter().enumerate() {
            if row.len() != col_shifts.len() {
                return Err(Error::Shape(format!("row {a} has {} entries", row.len())));
            }
            for (b, e) in row.iter().enumerate() {
                if e.nvars() != nvars {
                    return Err(Error::LengthMismatch {
                        expected: nvars,
                        found: e.nvars(),
                    });
                }
                if e.is_zero() {
                    continue;
                }
                let want = col_shifts[b] as i64 - row_shifts[a] as i64;
                if e.homogeneous_degree().map(i64::from) != Some(want) {
                    return Err(Error::Shape(format!(
                        "entry ({a},{b}) = {e} is not homogeneous of degree {want}"
                    )));
                }
            }
        }
        Ok(PolyMatrix {
            nvars,
            row_shifts,
            col_shifts,
            entries,
        })
    }

    pub fn zero(nvars: usize, row_shifts: Vec<u32>, col_shifts: Vec<u32>) -> Self {
        let entries = vec![vec![SparsePoly::zero(nvars); col_shifts.len()]; row_shifts.len()];
        PolyMatrix {
            nvars,
            row_shifts,
            col_shifts,
            entries,
        }
    }

    pub fn identity(nvars: usize, shifts: Vec<u32>) -> Self {
        let mut m = Self::zero(nvars, shifts.clone(), shifts);
        for i in 0..m.rows() {
            m.entries[i][i] = SparsePoly::one(nvars);
        }
        m
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rows(&self) -> usize {
        self.row_shifts.len()
    }

    pub fn cols(&self) -> usize {
        self.col_shifts.len()
    }

    pub fn row_shifts(&self) -> &[u32] {
        &self.row_shifts
    }

    pub fn col_shifts(&self) -> &[u32] {
        &self.col_shifts
    }

    pub fn entry(&self, a: usize, b: usize) -> &SparsePoly<F> {
        &self.entries[a][b]
    }

    pub fn entries(&self) -> &[Vec<SparsePoly<F>>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(SparsePoly::is_zero)
    }

    /// Apply `f` to every entry (shifts unchanged).
    pub fn map_entries(&self, f: impl Fn(&SparsePoly<F>) -> SparsePoly<F>) -> Self {
        PolyMatrix {
            nvars: self.nvars,
            row_shifts: self.row_shifts.clone(),
            col_shifts: self.col_shifts.clone(),
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
        }
    }

    /// Scalar matrix of constant terms.
    pub fn constant_part(&self) -> Vec<Vec<F>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(SparsePoly::constant_term).collect())
            .collect()
    }

    /// Matrix of the induced linear map in degree `d`.
    ///
    /// Basis of each side: pairs (basis element, monomial) with the monomials
    /// of each block in decreasing degree-lex order.
    pub fn graded_slice(&self, d: u32) -> SliceMatrix<F> {
        let block = |shifts: &[u32]| -> Vec<(usize, Vec<Monomial>)> {
            let mut offset = 0;
            shifts
                .iter()
                .map(|&s| {
                    let ms = if d >= s {
                        monomials_of_degree(self.nvars, d - s)
                    } else {
                        Vec::new()
                    };
                    let here = offset;
                    offset += ms.len();
                    (here, ms)
                })
                .collect()
        };
        let targets = block(&self.row_shifts);
        let sources = block(&self.col_shifts);
        let nrows: usize = targets.iter().map(|(_, m)| m.len()).sum();
        let ncols: usize = sources.iter().map(|(_, m)| m.len()).sum();
        let index: Vec<HashMap<&Monomial, usize>> = targets
            .iter()
            .map(|(_, ms)| ms.iter().enumerate().map(|(k, m)| (m, k)).collect())
            .collect();
        let mut rows: Vec<Vec<(usize, F)>> = vec![Vec::new(); nrows];
        for (b, (src_off, src_ms)) in sources.iter().enumerate() {
            for (k, mono) in src_ms.iter().enumerate() {
                let col = src_off + k;
                for (a, (tgt_off, _)) in targets.iter().enumerate() {
                    for (m, c) in self.entries[a][b].terms() {
                        let image = m.mul(mono);
                        let row = tgt_off + index[a][&image];
                        rows[row].push((col, c.clone()));
                    }
                }
            }
        }
        SliceMatrix { nrows, ncols, rows }
    }

    /// `self * other`, requiring `self`'s column shifts to match `other`'s
    /// row shifts.
    pub fn matrix_product(&self, other: &PolyMatrix<F>) -> Result<PolyMatrix<F>> {
        if self.cols() != other.rows() || self.col_shifts != other.row_shifts {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        if self.nvars != other.nvars {
            return Err(Error::LengthMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        let mut out = PolyMatrix::zero(
            self.nvars,
            self.row_shifts.clone(),
            other.col_shifts.clone(),
        );
        for a in 0..self.rows() {
            for k in 0..self.cols() {
                let lhs = &self.entries[a][k];
                if lhs.is_zero() {
                    continue;
                }
                for b in 0..other.cols() {
                    let rhs = &other.entries[k][b];
                    if rhs.is_zero() {
                        continue;
                    }
                    out.entries[a][b] = out.entries[a][b].add(&lhs.mul(rhs)?)?;
                }
            }
        }
        Ok(out)
    }

    /// Largest rank over `GF(CERT_PRIME)` after substituting random points.
    ///
    /// Evaluation and reduction cannot raise the rank, so the result is a
    /// certified lower bound on the rank over the field of fractions; with a
    /// few trials it equals the generic rank with high probability. Returns
    /// `None` if some coefficient has no residue mod the prime.
    pub fn randomized_rank(&self, seed: u64, trials: usize) -> Option<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = 0;
        for _ in 0..trials.max(1) {
            let point: Vec<u64> = (0..self.nvars)
                .map(|_| rng.gen_range(1..CERT_PRIME))
                .collect();
            let mut rows = Vec::with_capacity(self.rows());
            for r in &self.entries {
                let mut row = Vec::new();
                for (b, e) in r.iter().enumerate() {
                    let v = e.eval_mod(&point, CERT_PRIME)?;
                    if v != 0 {
                        row.push((b, v));
                    }
                }
                rows.push(row);
            }
            best = best.max(sparse_rank_mod_p(rows, CERT_PRIME));
        }
        Some(best)
    }

    /// JSON form: entry strings plus shift vectors.
    pub fn to_json(&self, ring: Ring) -> MatrixJson {
        MatrixJson {
            row_shifts: self.row_shifts.clone(),
            col_shifts: self.col_shifts.clone(),
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|e| e.display_in(ring)).collect())
                .collect(),
        }
    }

    pub fn from_json(json: &MatrixJson, ring: Ring) -> Result<Self> {
        let entries = json
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| SparsePoly::parse_in(s, ring))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        PolyMatrix::new(
            ring.nvars(),
            json.row_shifts.clone(),
            json.col_shifts.clone(),
            entries,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub row_shifts: Vec<u32>,
    pub col_shifts: Vec<u32>,
    pub entries: Vec<Vec<String>>,
}

/// A sparse scalar matrix given by rows of `(column, value)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceMatrix<F: Field> {
    pub nrows: usize,
    pub ncols: usize,
    pub rows: Vec<Vec<(usize, F)>>,
}

impl<F: Field> SliceMatrix<F> {
    pub fn to_dense(&self) -> Vec<Vec<F>> {
        let mut out = vec![vec![F::zero(); self.ncols]; self.nrows];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                out[r][*c] = out[r][*c].add(v);
            }
        }
        out
    }

    /// Exact rank over `F`.
    pub fn rank_exact(&self) -> usize {
        if self.nrows == 0 || self.ncols == 0 {
            return 0;
        }
        if F::CHARACTERISTIC > 0 {
            let p = F::CHARACTERISTIC;
            let rows = self
                .rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|(c, v)| (*c, v.residue(p).expect("element of GF(p)")))
                        .collect()
                })
                .collect();
            return sparse_rank_mod_p(rows, p);
        }
        F::rank(self.to_dense())
    }

    /// Rank over `GF(CERT_PRIME)`, a lower bound on the rank over `F` when
    /// `F` has characteristic zero. `None` if a denominator vanishes mod p.
    pub fn rank_mod_cert_prime(&self) -> Option<usize> {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(c, v)| v.residue(CERT_PRIME).map(|r| (*c, r)))
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(sparse_rank_mod_p(rows, CERT_PRIME))
    }

    /// Dense product, used to test that slicing respects composition.
    pub fn mul_dense(&self, other: &SliceMatrix<F>) -> Vec<Vec<F>> {
        let b = other.to_dense();
        let mut out = vec![vec![F::zero(); other.ncols]; self.nrows];
        for (r, row) in self.rows.iter().enumerate() {
            for (k, v) in row {
                for (c, w) in b[*k].iter().enumerate() {
                    if !w.is_zero() {
                        out[r][c] = out[r][c].add(&v.mul(w));
                    }
                }
            }
        }
        out
    }
}
