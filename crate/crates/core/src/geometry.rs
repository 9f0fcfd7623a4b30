//! Configurations of linear varieties cut out by entries of a lifting matrix.
//!
//! A component is a set of matrix entries `L_{j,i}`, at most one per row. All
//! dimension computations are combinatorial and assume the lifting matrix is
//! generic for its mode.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{irreducible_decomposition, quotient};
use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::lifting::{expected_codim, LiftMode};
use crate::monomial::Monomial;

/// Cap on the number of violations recorded per stratum.
const MAX_REPORTED: usize = 20;

/// A linear variety `V(L_{j1,i1}, ..., L_{jc,ic})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Component {
    /// 1-based `(row, column)` pairs, sorted by row, rows distinct.
    entries: Vec<(usize, u32)>,
}

impl Component {
    pub fn new(mut entries: Vec<(usize, u32)>) -> Result<Self> {
        entries.sort_unstable();
        if entries.is_empty() {
            return Err(Error::InvalidConfiguration("empty component".into()));
        }
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidConfiguration(format!(
                    "two entries from row {}",
                    w[0].0
                )));
            }
        }
        if entries.iter().any(|&(r, c)| r == 0 || c == 0) {
            return Err(Error::InvalidConfiguration("indices are 1-based".into()));
        }
        Ok(Component { entries })
    }

    /// The component `(L_{1,i_1}, ..., L_{n,i_n})`.
    pub fn from_tuple(tuple: &[u32]) -> Result<Self> {
        Component::new(tuple.iter().enumerate().map(|(j, &i)| (j + 1, i)).collect())
    }

    pub fn entries(&self) -> &[(usize, u32)] {
        &self.entries
    }

    pub fn codim(&self) -> usize {
        self.entries.len()
    }

    /// The column tuple when every one of the `n` rows is used.
    pub fn to_tuple(&self, n: usize) -> Option<Vec<u32>> {
        if self.entries.len() != n || self.entries.iter().enumerate().any(|(k, e)| e.0 != k + 1) {
            return None;
        }
        Some(self.entries.iter().map(|e| e.1).collect())
    }

    fn is_subset_of(&self, other: &Component) -> bool {
        self.entries
            .iter()
            .all(|e| other.entries.binary_search(e).is_ok())
    }
}

impl std::fmt::Display for Component {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(r, c)| format!("L_{{{r},{c}}}"))
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A union of linear varieties in `P^{n+t-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    pub n: usize,
    pub t: usize,
    pub mode: LiftMode,
    /// Row lengths `N_1..N_n` for configurations inside a complete grid.
    pub grid: Option<Vec<u32>>,
    pub components: Vec<Component>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ComponentJson {
    Tuple(Vec<u32>),
    Entries(Vec<(usize, u32)>),
}

#[derive(Serialize, Deserialize)]
struct ConfigurationJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    t: usize,
    #[serde(default = "default_mode")]
    mode: LiftMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grid: Option<Vec<u32>>,
    components: Vec<ComponentJson>,
}

fn default_mode() -> LiftMode {
    LiftMode::Restricted
}

impl Configuration {
    pub fn new(
        n: usize,
        t: usize,
        mode: LiftMode,
        grid: Option<Vec<u32>>,
        components: Vec<Component>,
    ) -> Result<Self> {
        if let Some(g) = &grid {
            if g.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: g.len(),
                });
            }
        }
        let mut seen = HashSet::new();
        for c in &components {
            if c.entries.last().is_some_and(|e| e.0 > n) {
                return Err(Error::InvalidConfiguration(format!(
                    "{c} uses a row beyond {n}"
                )));
            }
            if !seen.insert(c.clone()) {
                return Err(Error::InvalidConfiguration(format!("{c} listed twice")));
            }
        }
        let mut components = components;
        components.sort_by(|a, b| (a.codim(), &a.entries).cmp(&(b.codim(), &b.entries)));
        Ok(Configuration {
            n,
            t,
            mode,
            grid,
            components,
        })
    }

    /// A configuration of codimension-`n` components given by column tuples.
    pub fn from_tuples(grid: Vec<u32>, t: usize, tuples: &[Vec<u32>]) -> Result<Self> {
        let n = grid.len();
        let mut comps = Vec::with_capacity(tuples.len());
        for tup in tuples {
            if tup.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: tup.len(),
                });
            }
            if tup.iter().zip(&grid).any(|(&i, &b)| i > b) {
                return Err(Error::InvalidConfiguration(format!(
                    "{tup:?} lies outside the grid {grid:?}"
                )));
            }
            comps.push(Component::from_tuple(tup)?);
        }
        Configuration::new(n, t, LiftMode::Restricted, Some(grid), comps)
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Projective dimension of a component.
    pub fn component_dim(&self, c: &Component) -> i64 {
        (self.n + self.t) as i64 - 1 - c.codim() as i64
    }

    /// Column tuples of all components, if each uses every row.
    pub fn tuples(&self) -> Option<Vec<Vec<u32>>> {
        self.components.iter().map(|c| c.to_tuple(self.n)).collect()
    }

    /// Components grouped by codimension.
    pub fn strata(&self) -> BTreeMap<usize, Vec<&Component>> {
        let mut out: BTreeMap<usize, Vec<&Component>> = BTreeMap::new();
        for c in &self.components {
            out.entry(c.codim()).or_default().push(c);
        }
        out
    }

    pub fn is_equidimensional(&self) -> bool {
        self.strata().len() <= 1
    }

    /// Codimension of the intersection of the given components.
    pub fn intersection_codim(&self, comps: &[&Component]) -> usize {
        let entries: BTreeSet<(usize, u32)> = comps
            .iter()
            .flat_map(|c| c.entries.iter().copied())
            .collect();
        let rows: BTreeSet<usize> = entries.iter().map(|e| e.0).collect();
        expected_codim(self.mode, self.n, self.t, rows.len(), entries.len())
    }

    /// Projective dimension of the intersection, `-1` when empty.
    pub fn intersection_dim(&self, comps: &[&Component]) -> i64 {
        (self.n + self.t) as i64 - 1 - self.intersection_codim(comps) as i64
    }

    /// Whether the intersection lies in the locus `u_1 = ... = u_t = 0`.
    ///
    /// Restricted entries of row `j` lie in `span{x_j, u}`; once the entries
    /// outnumber their rows by `t`, their span contains every `u_k`.
    pub fn intersection_inside_w(&self, comps: &[&Component]) -> bool {
        if self.intersection_dim(comps) < 0 {
            return true;
        }
        if self.mode != LiftMode::Restricted {
            return false;
        }
        let entries: BTreeSet<(usize, u32)> = comps
            .iter()
            .flat_map(|c| c.entries.iter().copied())
            .collect();
        let rows: BTreeSet<usize> = entries.iter().map(|e| e.0).collect();
        entries.len() - rows.len() >= self.t
    }

    pub fn to_json(&self) -> String {
        let components = self
            .components
            .iter()
            .map(|c| match (&self.grid, c.to_tuple(self.n)) {
                (Some(_), Some(tup)) => ComponentJson::Tuple(tup),
                _ => ComponentJson::Entries(c.entries.clone()),
            })
            .collect();
        let json = ConfigurationJson {
            n: Some(self.n),
            t: self.t,
            mode: self.mode,
            grid: self.grid.clone(),
            components,
        };
        serde_json::to_string_pretty(&json).expect("configuration serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let json: ConfigurationJson = serde_json::from_str(s)?;
        let n = match (json.n, &json.grid) {
            (Some(n), _) => n,
            (None, Some(g)) => g.len(),
            (None, None) => json
                .components
                .iter()
                .map(|c| match c {
                    ComponentJson::Tuple(v) => v.len(),
                    ComponentJson::Entries(e) => e.iter().map(|x| x.0).max().unwrap_or(0),
                })
                .max()
                .unwrap_or(0),
        };
        let comps = json
            .components
            .iter()
            .map(|c| match c {
                ComponentJson::Tuple(v) => {
                    if v.len() != n {
                        return Err(Error::LengthMismatch {
                            expected: n,
                            found: v.len(),
                        });
                    }
                    Component::from_tuple(v)
                }
                ComponentJson::Entries(e) => Component::new(e.clone()),
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(g) = &json.grid {
            for c in &comps {
                if c.entries
                    .iter()
                    .any(|&(r, col)| g.get(r - 1).is_some_and(|&b| col > b))
                {
                    return Err(Error::InvalidConfiguration(format!(
                        "{c} lies outside the grid {g:?}"
                    )));
                }
            }
        }
        Configuration::new(n, json.t, json.mode, json.grid, comps)
    }

    /// Text rendering of a three-row grid configuration, one block per
    /// column of the first row. `*` marks a component.
    pub fn ascii_slices(&self) -> Option<String> {
        let grid = self.grid.as_ref()?;
        if self.n != 3 {
            return None;
        }
        let members: HashSet<Vec<u32>> = self.tuples()?.into_iter().collect();
        let mut out = String::new();
        for i1 in 1..=grid[0] {
            let _ = writeln!(out, "L_{{1,{i1}}}-plane");
            let _ = write!(out, "        ");
            for i3 in 1..=grid[2] {
                let _ = write!(out, " L3{i3}");
            }
            out.push('\n');
            for i2 in 1..=grid[1] {
                let _ = write!(out, "  L2{i2:<4}");
                for i3 in 1..=grid[2] {
                    let mark = if members.contains(&vec![i1, i2, i3]) {
                        '*'
                    } else {
                        '.'
                    };
                    let _ = write!(out, "   {mark}");
                }
                out.push('\n');
            }
            out.push('\n');
        }
        Some(out)
    }
}

impl Serialize for Configuration {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: serde_json::Value =
            serde_json::from_str(&self.to_json()).map_err(serde::ser::Error::custom)?;
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        Configuration::from_json(&v.to_string()).map_err(serde::de::Error::custom)
    }
}

/// Components `(L_{1,i_1}, ..., L_{n,i_n})` with `x^{i-1}` outside `J`.
///
/// `bounds` defaults to the largest exponent of each variable among the
/// generators.
pub fn components_artinian(
    j: &MonomialIdeal,
    bounds: Option<&[u32]>,
    t: usize,
) -> Result<Configuration> {
    if !j.is_artinian() {
        return Err(Error::NotArtinian);
    }
    let grid = match bounds {
        Some(b) => {
            if b.len() != j.n() {
                return Err(Error::LengthMismatch {
                    expected: j.n(),
                    found: b.len(),
                });
            }
            b.to_vec()
        }
        None => j.max_exponents().0,
    };
    let standard = if j.is_unit() {
        Vec::new()
    } else {
        j.standard_monomials(None)?
    };
    let mut tuples = Vec::with_capacity(standard.len());
    for m in &standard {
        let tup: Vec<u32> = m.exponents().iter().map(|&e| e + 1).collect();
        if tup.iter().zip(&grid).any(|(&i, &b)| i > b) {
            return Err(Error::InvalidConfiguration(format!(
                "standard monomial {m} does not fit in the grid {grid:?}"
            )));
        }
        tuples.push(tup);
    }
    tuples.sort();
    Configuration::from_tuples(grid, t, &tuples)
}

/// Components of the lifting of an arbitrary proper nonzero ideal.
///
/// Each irreducible component `(x_{j1}^{a1}, ..., x_{jp}^{ap})` contributes
/// every choice of columns `1 <= b_s <= a_s`; components containing another
/// one are dropped.
pub fn components_general(j: &MonomialIdeal, t: usize) -> Result<Configuration> {
    let mut all: BTreeSet<Component> = BTreeSet::new();
    for q in irreducible_decomposition(j)? {
        let rows: Vec<(usize, u32)> = q.entries.iter().map(|(&v, &a)| (v + 1, a)).collect();
        let mut cur = Vec::with_capacity(rows.len());
        expand(&rows, &mut cur, &mut all)?;
    }
    let all: Vec<Component> = all.into_iter().collect();
    let kept: Vec<Component> = all
        .iter()
        .filter(|c| !all.iter().any(|d| d != *c && d.is_subset_of(c)))
        .cloned()
        .collect();
    Configuration::new(j.n(), t, LiftMode::Restricted, None, kept)
}

fn expand(
    rows: &[(usize, u32)],
    cur: &mut Vec<(usize, u32)>,
    out: &mut BTreeSet<Component>,
) -> Result<()> {
    if cur.len() == rows.len() {
        out.insert(Component::new(cur.clone())?);
        return Ok(());
    }
    let (row, a) = rows[cur.len()];
    for b in 1..=a {
        cur.push((row, b));
        expand(rows, cur, out)?;
        cur.pop();
    }
    Ok(())
}

/// Three components whose intersection is too large.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StickViolation {
    pub components: [String; 3],
    pub dim: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumReport {
    pub codim: usize,
    pub dim: i64,
    pub components: usize,
    pub triples_checked: u64,
    /// Triples skipped because their intersection lies inside `W`.
    pub exempt: u64,
    pub violation_count: u64,
    pub violations: Vec<StickViolation>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StickReport {
    pub passed: bool,
    pub away_from_w: bool,
    pub equidimensional: bool,
    pub strata: Vec<StratumReport>,
}

/// Any three components of the same dimension `d` meet in dimension at most
/// `d - 2`, or do not meet at all. Each dimension is checked separately. With `away_from_w`,
/// intersections contained in `u = 0` are ignored.
pub fn is_generalized_stick_figure(v: &Configuration, away_from_w: bool) -> StickReport {
    let strata: Vec<StratumReport> = v
        .strata()
        .into_iter()
        .map(|(codim, comps)| check_stratum(v, codim, &comps, away_from_w))
        .collect();
    StickReport {
        passed: strata.iter().all(|s| s.passed),
        away_from_w,
        equidimensional: strata.len() <= 1,
        strata,
    }
}

fn check_stratum(
    v: &Configuration,
    codim: usize,
    comps: &[&Component],
    away_from_w: bool,
) -> StratumReport {
    let dim = (v.n + v.t) as i64 - 1 - codim as i64;
    let m = comps.len();
    let results: Vec<(u64, u64, u64, Vec<StickViolation>)> = (0..m)
        .into_par_iter()
        .map(|a| {
            let (mut checked, mut exempt, mut bad) = (0u64, 0u64, 0u64);
            let mut found = Vec::new();
            for b in a + 1..m {
                for c in b + 1..m {
                    checked += 1;
                    let triple = [comps[a], comps[b], comps[c]];
                    let d = v.intersection_dim(&triple);
                    // empty intersections always pass, which matters for points
                    if d <= (dim - 2).max(-1) {
                        continue;
                    }
                    if away_from_w && v.intersection_inside_w(&triple) {
                        exempt += 1;
                        continue;
                    }
                    bad += 1;
                    if found.len() < MAX_REPORTED {
                        found.push(StickViolation {
                            components: triple.map(|x| x.to_string()),
                            dim: d,
                        });
                    }
                }
            }
            (checked, exempt, bad, found)
        })
        .collect();
    let mut report = StratumReport {
        codim,
        dim,
        components: m,
        triples_checked: 0,
        exempt: 0,
        violation_count: 0,
        violations: Vec::new(),
        passed: true,
    };
    for (checked, exempt, bad, found) in results {
        report.triples_checked += checked;
        report.exempt += exempt;
        report.violation_count += bad;
        for f in found {
            if report.violations.len() < MAX_REPORTED {
                report.violations.push(f);
            }
        }
    }
    report.passed = report.violation_count == 0;
    report
}

fn grid_members(v: &Configuration) -> Result<HashSet<Vec<u32>>> {
    v.tuples()
        .map(|ts| ts.into_iter().collect())
        .ok_or_else(|| Error::InvalidConfiguration("every component must use all rows".into()))
}

/// Downward closure: decreasing any column index `i_j >= 2` by one stays
/// inside the configuration.
pub fn check_condition2(v: &Configuration) -> Result<bool> {
    Ok(condition2_witness(v)?.is_none())
}

fn condition2_witness(v: &Configuration) -> Result<Option<(Vec<u32>, Vec<u32>)>> {
    let members = grid_members(v)?;
    for tup in v.tuples().unwrap_or_default() {
        for j in 0..tup.len() {
            if tup[j] >= 2 {
                let mut lower = tup.clone();
                lower[j] -= 1;
                if !members.contains(&lower) {
                    return Ok(Some((tup, lower)));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition3Report {
    pub passed: bool,
    pub condition2: bool,
    /// First member whose required neighbour is missing, and that neighbour.
    pub witness: Option<(Vec<u32>, Vec<u32>)>,
    /// All `(member, missing)` pairs.
    pub failures: Vec<(Vec<u32>, Vec<u32>)>,
}

/// Downward closure plus redistribution closure: for a member with
/// `i_j >= 2`, lowering `i_j` by one and replacing the later indices by any
/// positive tuple whose sum is one larger stays inside the configuration.
pub fn check_condition3(v: &Configuration) -> Result<Condition3Report> {
    let members = grid_members(v)?;
    let c2 = condition2_witness(v)?;
    let mut failures = Vec::new();
    for tup in v.tuples().unwrap_or_default() {
        let n = tup.len();
        for j in 0..n {
            if tup[j] < 2 {
                continue;
            }
            let tail_len = n - j - 1;
            let target: u32 = tup[j + 1..].iter().sum::<u32>() + 1;
            let mut prefix = tup[..=j].to_vec();
            prefix[j] -= 1;
            for tail in compositions(target, tail_len) {
                let mut cand = prefix.clone();
                cand.extend(tail);
                if !members.contains(&cand) {
                    failures.push((tup.clone(), cand));
                }
            }
        }
    }
    let witness = c2.clone().or_else(|| failures.first().cloned());
    if let Some(w) = c2.clone() {
        failures.insert(0, w);
    }
    Ok(Condition3Report {
        passed: failures.is_empty(),
        condition2: c2.is_none(),
        witness,
        failures,
    })
}

/// Tuples of `len` positive integers summing to `total`, in lex order.
/// With `len = 0` the only tuple is the empty one, and only when `total = 0`.
fn compositions(total: u32, len: usize) -> Vec<Vec<u32>> {
    fn rec(total: u32, len: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if len == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if total < len as u32 {
            return;
        }
        for first in 1..=total - (len as u32 - 1) {
            cur.push(first);
            rec(total - first, len - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, len, &mut Vec::new(), &mut out);
    out
}

/// The Artinian ideal whose lifting is the given grid configuration:
/// generated by `x^{i-1}` for grid tuples `i` outside the configuration and
/// by the pure powers `x_j^{N_j}`.
pub fn monomial_ideal_from_configuration(v: &Configuration) -> Result<MonomialIdeal> {
    let grid = v
        .grid
        .clone()
        .ok_or_else(|| Error::InvalidConfiguration("inversion needs grid bounds".into()))?;
    if v.is_empty() {
        return Err(Error::InvalidConfiguration(
            "empty configuration lifts only the unit ideal".into(),
        ));
    }
    if let Some((tup, _)) = condition2_witness(v)? {
        return Err(Error::ConditionViolated(tup));
    }
    let members = grid_members(v)?;
    let n = v.n;
    let mut gens: Vec<Monomial> = (0..n).map(|j| Monomial::var(n, j, grid[j])).collect();
    let mut cur = vec![1u32; n];
    loop {
        if !members.contains(&cur) {
            gens.push(Monomial::new(cur.iter().map(|&i| i - 1).collect())?);
        }
        let mut k = 0;
        while k < n && cur[k] == grid[k] {
            cur[k] = 1;
            k += 1;
        }
        if k == n {
            break;
        }
        cur[k] += 1;
    }
    MonomialIdeal::new(n, gens)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub grid: Vec<u32>,
    pub complete_intersection: String,
    pub residual: String,
    pub components: usize,
    pub residual_components: usize,
    pub passed: bool,
    pub note: String,
}

/// Compare the grid complement of the lifting of `J`, with each column index
/// reversed `i_j -> N_j + 1 - i_j`, against the lifting of `(J~ : J)` where
/// `J~ = (x_1^{N_1}, ..., x_n^{N_n})`.
pub fn residual_check(j: &MonomialIdeal, grid: Option<&[u32]>) -> Result<ResidualReport> {
    let v = components_artinian(j, grid, 1)?;
    let grid = v
        .grid
        .clone()
        .expect("artinian configurations carry a grid");
    let n = j.n();
    let powers: Vec<(usize, u32)> = grid.iter().enumerate().map(|(k, &b)| (k, b)).collect();
    let ci = MonomialIdeal::pure_powers(n, &powers);
    let residual = quotient(&ci, j)?;
    let members: HashSet<Vec<u32>> = v.tuples().unwrap_or_default().into_iter().collect();

    let mut expected = Vec::new();
    let mut cur = vec![1u32; n];
    if grid.iter().all(|&b| b >= 1) {
        loop {
            if !members.contains(&cur) {
                expected.push(
                    cur.iter()
                        .zip(&grid)
                        .map(|(&i, &b)| b + 1 - i)
                        .collect::<Vec<u32>>(),
                );
            }
            let mut k = 0;
            while k < n && cur[k] == grid[k] {
                cur[k] = 1;
                k += 1;
            }
            if k == n {
                break;
            }
            cur[k] += 1;
        }
    }
    expected.sort();
    let actual = components_artinian(&residual, Some(&grid), 1)?
        .tuples()
        .unwrap_or_default();
    Ok(ResidualReport {
        complete_intersection: ci.to_string(),
        residual: residual.to_string(),
        components: members.len(),
        residual_components: actual.len(),
        passed: actual == expected,
        grid,
        note: "residual read as the pseudo-lifting of the monomial ideal (J~ : J) via the column-reversed matrix".into(),
    })
}

/// Primary components of `J` as `(support, degree)`, support 0-based.
///
/// The degree of the primary component on a set of variables is the number
/// of monomials in those variables outside every irreducible component with
/// that support.
pub fn primary_degrees(j: &MonomialIdeal) -> Result<Vec<(Vec<usize>, u64)>> {
    let mut groups: BTreeMap<Vec<usize>, Vec<Vec<u32>>> = BTreeMap::new();
    for q in irreducible_decomposition(j)? {
        let support: Vec<usize> = q.entries.keys().copied().collect();
        groups
            .entry(support)
            .or_default()
            .push(q.entries.values().copied().collect());
    }
    let mut out = Vec::new();
    for (support, boxes) in groups {
        let dims = support.len();
        let bound: Vec<u32> = (0..dims)
            .map(|k| boxes.iter().map(|b| b[k]).max().unwrap_or(0))
            .collect();
        let mut count = 0u64;
        let mut cur = vec![0u32; dims];
        loop {
            if boxes
                .iter()
                .any(|b| cur.iter().zip(b).all(|(&e, &a)| e < a))
            {
                count += 1;
            }
            let mut k = 0;
            while k < dims && cur[k] + 1 == bound[k] {
                cur[k] = 0;
                k += 1;
            }
            if k == dims {
                break;
            }
            cur[k] += 1;
        }
        out.push((support, count));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{hilbert_series, is_equidimensional};
    use proptest::prelude::*;

    const THREE_LINES: &str = "x1^3, x1^2*x2, x1^2*x3, x1*x2^2, x1*x2*x3, x2^3, x2^2*x3";
    const TWENTY_POINTS: &str = "x1^3, x1^2*x2^2, x1^2*x2*x3, x1*x2^3, x1*x2^2*x3, x1*x2*x3^2, x1*x3^3, x2^4, x2^3*x3, x2^2*x3^2, x2*x3^3, x3^4";
    const FOURTEEN_POINTS: &str =
        "x1^3, x1^2*x2, x1^2*x3, x1*x2^2, x1*x2*x3, x2^3, x1*x3^3, x2^2*x3^2, x2*x3^3, x3^4";

    fn ideal(s: &str, n: usize) -> MonomialIdeal {
        MonomialIdeal::parse(s, Some(n)).unwrap()
    }

    fn comp(entries: &[(usize, u32)]) -> Component {
        Component::new(entries.to_vec()).unwrap()
    }

    fn slice_counts(v: &Configuration, rows: u32) -> Vec<usize> {
        let ts = v.tuples().unwrap();
        (1..=rows)
            .map(|i| ts.iter().filter(|t| t[0] == i).count())
            .collect()
    }

    #[test]
    fn artinian_components_of_the_two_examples() {
        let v = components_artinian(&ideal(TWENTY_POINTS, 3), None, 1).unwrap();
        assert_eq!(v.len(), 20);
        assert_eq!(slice_counts(&v, 3), vec![10, 6, 4]);
        let v = components_artinian(&ideal(FOURTEEN_POINTS, 3), None, 1).unwrap();
        assert_eq!(v.len(), 14);
        assert_eq!(slice_counts(&v, 3), vec![9, 4, 1]);
    }

    #[test]
    fn maximal_ideal_has_one_component() {
        let v = components_artinian(&MonomialIdeal::maximal(4), None, 2).unwrap();
        assert_eq!(v.tuples().unwrap(), vec![vec![1, 1, 1, 1]]);
    }

    #[test]
    fn non_artinian_is_rejected() {
        assert!(matches!(
            components_artinian(&ideal("x1^2, x1*x2", 2), None, 1),
            Err(Error::NotArtinian)
        ));
    }

    #[test]
    fn general_components_of_the_three_lines_example() {
        let v = components_general(&ideal(THREE_LINES, 3), 1).unwrap();
        let expected = vec![
            comp(&[(1, 1), (2, 1)]),
            comp(&[(1, 1), (2, 2)]),
            comp(&[(1, 2), (2, 1)]),
            comp(&[(1, 1), (2, 3), (3, 1)]),
            comp(&[(1, 2), (2, 2), (3, 1)]),
            comp(&[(1, 3), (2, 1), (3, 1)]),
        ];
        assert_eq!(v.components, expected);

        let lines = components_general(&ideal("x1^2, x1*x2, x2^2", 3), 1).unwrap();
        assert_eq!(lines.components, expected[..3].to_vec());
    }

    #[test]
    fn three_lines_through_a_point() {
        let v = components_general(&ideal(THREE_LINES, 3), 1).unwrap();
        let strict = is_generalized_stick_figure(&v, false);
        assert!(!strict.passed);
        assert_eq!(strict.strata[0].codim, 2);
        assert!(!strict.strata[0].passed);
        assert!(strict.strata[1].passed);
        assert!(is_generalized_stick_figure(&v, true).passed);
    }

    #[test]
    fn two_planes_meet_in_a_point() {
        let v = components_general(&ideal("x1*x3, x1*x4, x2*x3, x2*x4", 4), 1).unwrap();
        assert_eq!(
            v.components,
            vec![comp(&[(1, 1), (2, 1)]), comp(&[(3, 1), (4, 1)])]
        );
        let refs: Vec<&Component> = v.components.iter().collect();
        assert_eq!(v.component_dim(refs[0]), 2);
        assert_eq!(v.intersection_dim(&refs), 0);
    }

    #[test]
    fn points_are_a_stick_figure() {
        let v = components_artinian(&ideal(TWENTY_POINTS, 3), None, 1).unwrap();
        let r = is_generalized_stick_figure(&v, false);
        assert!(r.passed);
        assert_eq!(r.strata[0].triples_checked, 20 * 19 * 18 / 6);
    }

    #[test]
    fn four_components_meet_in_dimension_t_minus_3() {
        for n in 2..5usize {
            for t in 3..6usize {
                let mut rows: Vec<Vec<(usize, u32)>> = Vec::new();
                for (a, b) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                    let mut e = vec![(1, a), (2, b)];
                    e.extend((3..=n).map(|r| (r, 1)));
                    rows.push(e);
                }
                let comps: Vec<Component> = rows
                    .into_iter()
                    .map(|e| Component::new(e).unwrap())
                    .collect();
                let v = Configuration::new(n, t, LiftMode::Restricted, None, comps).unwrap();
                let refs: Vec<&Component> = v.components.iter().collect();
                assert_eq!(v.intersection_dim(&refs), t as i64 - 3);
                assert!(is_generalized_stick_figure(&v, false).passed);
            }
        }
    }

    #[test]
    fn concurrent_lines_from_three_coordinate_points() {
        // every primary component has degree 1, yet the three lifted lines
        // share the point where all three entries vanish
        let j = ideal("x1*x2, x1*x3, x2*x3", 3);
        assert!(primary_degrees(&j).unwrap().iter().all(|(_, d)| *d == 1));
        let v = components_general(&j, 1).unwrap();
        let refs: Vec<&Component> = v.components.iter().collect();
        assert_eq!(v.intersection_dim(&refs), 0);
        assert!(!v.intersection_inside_w(&refs));
        assert!(!is_generalized_stick_figure(&v, true).passed);
    }

    #[test]
    fn condition_checks_on_the_examples() {
        let v = components_artinian(&ideal(TWENTY_POINTS, 3), None, 1).unwrap();
        assert!(check_condition2(&v).unwrap());
        let r = check_condition3(&v).unwrap();
        assert!(!r.passed);
        assert!(r.condition2);
        let w = (vec![3, 1, 3], vec![2, 1, 4]);
        assert!(r.failures.contains(&w), "{:?}", r.failures);
        assert_eq!(r.witness, Some(w));

        let v = components_artinian(&ideal(FOURTEEN_POINTS, 3), None, 1).unwrap();
        assert!(check_condition2(&v).unwrap());
        let r = check_condition3(&v).unwrap();
        assert!(!r.passed);
        assert!(
            r.failures.contains(&(vec![2, 1, 3], vec![1, 4, 1])),
            "{:?}",
            r.failures
        );
    }

    #[test]
    fn full_grid_is_closed_but_not_lex() {
        let mut tuples = Vec::new();
        for a in 1..=2 {
            for b in 1..=3 {
                for c in 1..=2 {
                    tuples.push(vec![a, b, c]);
                }
            }
        }
        let v = Configuration::from_tuples(vec![2, 3, 2], 1, &tuples).unwrap();
        assert!(check_condition2(&v).unwrap());
        let ci = monomial_ideal_from_configuration(&v).unwrap();
        assert_eq!(ci, ideal("x1^2, x2^3, x3^2", 3));
        // x1*x2^2 lies outside the ideal while the smaller x3^2 lies inside
        assert!(!ci.is_lex_segment());
        let r = check_condition3(&v).unwrap();
        assert!(!r.passed);
        assert_eq!(r.witness, Some((vec![1, 2, 2], vec![1, 1, 3])));

        let unit = Configuration::from_tuples(vec![1, 1], 1, &[vec![1, 1]]).unwrap();
        assert!(check_condition3(&unit).unwrap().passed);
    }

    #[test]
    fn inversion_of_the_example() {
        let j = ideal(TWENTY_POINTS, 3);
        let v = components_artinian(&j, None, 1).unwrap();
        assert_eq!(monomial_ideal_from_configuration(&v).unwrap(), j);
        let single = Configuration::from_tuples(vec![1, 1, 1], 1, &[vec![1, 1, 1]]).unwrap();
        assert_eq!(
            monomial_ideal_from_configuration(&single).unwrap(),
            MonomialIdeal::maximal(3)
        );
    }

    #[test]
    fn inversion_rejects_non_closed_sets() {
        let v = Configuration::from_tuples(vec![2, 2], 1, &[vec![1, 1], vec![1, 2], vec![2, 2]])
            .unwrap();
        assert!(!check_condition2(&v).unwrap());
        assert!(matches!(
            monomial_ideal_from_configuration(&v),
            Err(Error::ConditionViolated(t)) if t == vec![2, 2]
        ));
    }

    #[test]
    fn residual_examples() {
        let r = residual_check(&MonomialIdeal::maximal(2), Some(&[2, 2])).unwrap();
        assert!(r.passed);
        assert_eq!(r.residual, "x1^2, x1*x2, x2^2");
        assert_eq!(r.residual_components, 3);

        let ci = ideal("x1^2, x2^3, x3", 3);
        let r = residual_check(&ci, None).unwrap();
        assert!(r.passed);
        assert_eq!(r.residual_components, 0);

        assert!(residual_check(&ideal(TWENTY_POINTS, 3), None).unwrap().passed);
    }

    #[test]
    fn json_round_trip() {
        let v = components_artinian(&ideal(FOURTEEN_POINTS, 3), None, 2).unwrap();
        assert_eq!(Configuration::from_json(&v.to_json()).unwrap(), v);
        let g = components_general(&ideal(THREE_LINES, 3), 1).unwrap();
        assert_eq!(Configuration::from_json(&g.to_json()).unwrap(), g);
        let parsed =
            Configuration::from_json(r#"{"grid": [2, 1], "t": 1, "components": [[1, 1], [2, 1]]}"#)
                .unwrap();
        assert_eq!(parsed.n, 2);
        assert_eq!(parsed.len(), 2);
        assert!(
            Configuration::from_json(r#"{"grid": [1, 1], "t": 1, "components": [[2, 1]]}"#)
                .is_err()
        );
    }

    #[test]
    fn ascii_slices_mark_components() {
        let v = components_artinian(&ideal(FOURTEEN_POINTS, 3), None, 1).unwrap();
        let s = v.ascii_slices().unwrap();
        assert_eq!(s.matches('*').count(), 14);
        assert!(s.contains("L_{1,3}-plane"));
    }

    #[test]
    fn compositions_enumerate_in_lex_order() {
        assert_eq!(compositions(3, 2), vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(compositions(0, 0), vec![Vec::<u32>::new()]);
        assert!(compositions(1, 2).is_empty());
    }

    fn artinian_ideal(n: usize, max: u32) -> impl Strategy<Value = MonomialIdeal> {
        let powers = proptest::collection::vec(1..=max, n);
        let extra = proptest::collection::vec(proptest::collection::vec(0..max, n), 0..6);
        (powers, extra).prop_map(move |(p, e)| {
            let mut gens: Vec<Monomial> = p
                .iter()
                .enumerate()
                .map(|(j, &a)| Monomial::var(n, j, a))
                .collect();
            gens.extend(e.into_iter().map(|x| Monomial::new(x).unwrap()));
            MonomialIdeal::new(n, gens).unwrap()
        })
    }

    fn any_ideal(n: usize) -> impl Strategy<Value = MonomialIdeal> {
        proptest::collection::vec(proptest::collection::vec(0u32..3, n), 1..5).prop_filter_map(
            "proper",
            move |e| {
                let gens: Vec<Monomial> =
                    e.into_iter().map(|x| Monomial::new(x).unwrap()).collect();
                let j = MonomialIdeal::new(n, gens).unwrap();
                (!j.is_unit()).then_some(j)
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn component_count_is_the_degree(j in (2usize..4).prop_flat_map(|n| artinian_ideal(n, 4))) {
            let v = components_artinian(&j, None, 1).unwrap();
            let h = hilbert_series(&j).unwrap();
            prop_assert_eq!(v.len() as i64, h.h_vector.iter().sum::<i64>());
            prop_assert!(check_condition2(&v).unwrap());
        }

        #[test]
        fn general_components_agree_in_the_artinian_case(j in (1usize..4).prop_flat_map(|n| artinian_ideal(n, 3))) {
            prop_assume!(!j.is_unit());
            let a = components_artinian(&j, None, 1).unwrap();
            let g = components_general(&j, 1).unwrap();
            prop_assert_eq!(a.tuples(), g.tuples());
        }

        #[test]
        fn inversion_round_trips(j in (1usize..4).prop_flat_map(|n| artinian_ideal(n, 4))) {
            prop_assume!(!j.is_unit());
            let v = components_artinian(&j, None, 1).unwrap();
            let back = monomial_ideal_from_configuration(&v).unwrap();
            prop_assert_eq!(&back, &j);
        }

        #[test]
        fn lex_segment_matches_condition3(j in (1usize..5).prop_flat_map(|n| artinian_ideal(n, 5))) {
            prop_assume!(!j.is_unit());
            let v = components_artinian(&j, None, 1).unwrap();
            prop_assert_eq!(j.is_lex_segment(), check_condition3(&v).unwrap().passed);
        }

        #[test]
        fn equidimensionality_transfers(j in (2usize..5).prop_flat_map(any_ideal)) {
            let v = components_general(&j, 1).unwrap();
            prop_assert_eq!(v.is_equidimensional(), is_equidimensional(&j).unwrap());
        }

        #[test]
        fn residual_reverses_the_complement(j in (1usize..4).prop_flat_map(|n| artinian_ideal(n, 4))) {
            prop_assume!(!j.is_unit());
            prop_assert!(residual_check(&j, None).unwrap().passed);
        }

        // A single primary component lifts to components through one W_i:
        // for t = 1 three of them always share a point of W_i, for t >= 2
        // three distinct ones use at least two extra entries.
        #[test]
        fn primary_ideals_follow_the_degree_rule(
            n in 2usize..5,
            exps in proptest::collection::vec(proptest::collection::vec(0u32..3, 2), 1..4),
            t in 1usize..4,
        ) {
            let gens: Vec<Monomial> = exps
                .iter()
                .map(|e| {
                    let mut v = e.clone();
                    v.resize(n, 0);
                    Monomial::new(v).unwrap()
                })
                .chain([Monomial::var(n, 0, 3), Monomial::var(n, 1, 3)])
                .collect();
            let j = MonomialIdeal::new(n, gens).unwrap();
            prop_assume!(!j.is_unit());
            let degs = primary_degrees(&j).unwrap();
            prop_assume!(degs.len() == 1 && n > 2);
            let v = components_general(&j, t).unwrap();
            let passed = is_generalized_stick_figure(&v, false).passed;
            if t == 1 {
                prop_assert_eq!(passed, degs[0].1 <= 2);
            } else {
                prop_assert!(passed);
            }
        }
    }
}
