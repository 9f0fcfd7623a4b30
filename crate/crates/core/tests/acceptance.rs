//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with
//! a non-zero status if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use monolift::algebra::{depth_and_cm, graded_betti_over, hilbert_series, series_coefficient};
use monolift::geometry::{
    check_condition2, check_condition3, components_artinian, components_general,
    is_generalized_stick_figure, monomial_ideal_from_configuration, Component, Configuration,
};
use monolift::groebner::{buchberger, verify_initial_ideal, GroebnerLimits};
use monolift::lifting::LiftingMatrix;
use monolift::osequence::{difference, is_o_sequence, macaulay_growth, stick_figure_from_h_vector};
use monolift::poly::{cmp_display, SparsePoly};
use monolift::taylor::{
    betti_agreement, lift_taylor_complex, tor_ranks, verify_complex, verify_exactness,
    SignConvention, TAYLOR_LIMIT,
};
use monolift::{Error, Field, Gf32003, Monomial, MonomialIdeal, Rational, TermOrder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Hilbert functions are compared in degrees `0..=DEGREE_BOUND`.
const DEGREE_BOUND: u32 = 10;
const CORPUS_SIZE: usize = 200;
const CORPUS_SEED: u64 = 20_240_601;
const CORPUS_BUDGET: Duration = Duration::from_secs(60);
const GB_CASES: usize = 24;
const GB_REQUIRED: usize = 15;
const H_VECTOR_CASES: usize = 20;

const CYCLIC: &str = "x1^2*x2, x2^2*x3, x1*x3^2";
const THREE_LINES: &str = "x1^3, x1^2*x2, x1^2*x3, x1*x2^2, x1*x2*x3, x2^3, x2^2*x3";
const TWENTY_POINTS: &str =
    "x1^3, x1^2*x2^2, x1^2*x2*x3, x1*x2^3, x1*x2^2*x3, x1*x2*x3^2, x1*x3^3, x2^4, x2^3*x3, x2^2*x3^2, x2*x3^3, x3^4";
const FOURTEEN_POINTS: &str =
    "x1^3, x1^2*x2, x1^2*x3, x1*x2^2, x1*x2*x3, x2^3, x1*x3^3, x2^2*x3^2, x2*x3^3, x3^4";

type Outcome = Result<(), String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ideal(s: &str, n: usize) -> MonomialIdeal {
    MonomialIdeal::parse(s, Some(n)).expect("valid ideal")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn slice_counts(v: &Configuration, rows: u32) -> Vec<usize> {
    let ts = v.tuples().unwrap_or_default();
    (1..=rows)
        .map(|i| ts.iter().filter(|t| t[0] == i).count())
        .collect()
}

fn comp(entries: &[(usize, u32)]) -> Component {
    Component::new(entries.to_vec()).expect("valid component")
}

fn cyclic_lift() -> Outcome {
    let j = ideal(CYCLIC, 3);
    let a = LiftingMatrix::<Rational>::vandermonde(3, 2, &[2, 2, 2], &[0, 1, 2, 3, 4, 5])
        .map_err(err)?;
    let l = |row: usize, col: usize| a.entry(row - 1, col - 1).to_poly();
    let prod = |fs: &[(usize, usize)]| {
        let ps: Vec<SparsePoly<Rational>> = fs.iter().map(|&(r, c)| l(r, c)).collect();
        SparsePoly::product(5, ps.iter()).expect("same ring")
    };

    let mut gens = a.lifted_ideal(&j).map_err(err)?;
    let mut reference = vec![
        prod(&[(1, 1), (1, 2), (2, 1)]),
        prod(&[(2, 1), (2, 2), (3, 1)]),
        prod(&[(3, 1), (3, 2), (1, 1)]),
    ];
    gens.sort_by(cmp_display);
    reference.sort_by(cmp_display);
    ensure(gens == reference, || {
        "lifted generators differ from the expected ones".into()
    })?;

    let c = lift_taylor_complex(&j, &a, SignConvention::Koszul, TAYLOR_LIMIT).map_err(err)?;
    let d3 = c.differential(3);
    // The reference basis orders the generators as listed in CYCLIC; ours are
    // sorted. Each reference basis element is an oriented wedge, so it maps to
    // our basis element up to the sign of the sorting permutation.
    let order: Vec<usize> = ["x1^2*x2", "x2^2*x3", "x1*x3^2"]
        .iter()
        .map(|g| {
            let m = ideal(g, 3).generators()[0].clone();
            j.generators()
                .iter()
                .position(|h| *h == m)
                .expect("generator present")
        })
        .collect();
    let oriented = |reference: &[usize]| -> (u32, i32) {
        let idx: Vec<usize> = reference.iter().map(|&k| order[k - 1]).collect();
        let inversions = (0..idx.len()).flat_map(|a| (a + 1..idx.len()).map(move |b| (a, b)));
        let sign = inversions.fold(1, |s, (a, b)| if idx[a] > idx[b] { -s } else { s });
        (idx.iter().map(|&k| 1u32 << k).sum(), sign)
    };
    let (_, top_sign) = oriented(&[1, 2, 3]);
    let reference = [
        (vec![1, 3], l(2, 2).neg()),
        (vec![2, 3], l(1, 2)),
        (vec![1, 2], l(3, 2)),
    ];
    for (pair, entry) in &reference {
        let (label, sign) = oriented(pair);
        let want = if sign * top_sign < 0 {
            entry.neg()
        } else {
            entry.clone()
        };
        let row = c.position(2, label).ok_or("missing basis label")?;
        ensure(*d3.entry(row, 0) == want, || {
            format!("third map entry for e{}{} differs", pair[0], pair[1])
        })?;
    }

    ensure(verify_complex(&c).map_err(err)?, || "d*d != 0".into())?;
    let rep = verify_exactness(&c, DEGREE_BOUND, 1, 3).map_err(err)?;
    ensure(rep.degreewise_passed, || {
        "not exact in some degree <= 10".into()
    })?;
    let betti = tor_ranks(&c, None);
    ensure(
        betti.triples() == vec![[1, 3, 3], [2, 5, 3], [3, 6, 1]],
        || format!("Betti table {:?}", betti.triples()),
    )
}

fn three_lines_example() -> Outcome {
    let v = components_general(&ideal(THREE_LINES, 3), 1).map_err(err)?;
    let expected = vec![
        comp(&[(1, 1), (2, 1)]),
        comp(&[(1, 1), (2, 2)]),
        comp(&[(1, 2), (2, 1)]),
        comp(&[(1, 1), (2, 3), (3, 1)]),
        comp(&[(1, 2), (2, 2), (3, 1)]),
        comp(&[(1, 3), (2, 1), (3, 1)]),
    ];
    ensure(v.components == expected, || {
        format!("components {:?}", v.components)
    })?;
    ensure(!is_generalized_stick_figure(&v, false).passed, || {
        "strict check passed".into()
    })?;
    ensure(is_generalized_stick_figure(&v, true).passed, || {
        "away-from-W check failed".into()
    })
}

fn twenty_points_example() -> Outcome {
    let j = ideal(TWENTY_POINTS, 3);
    let h = hilbert_series(&j).map_err(err)?.h_vector;
    ensure(h == vec![1, 3, 6, 9, 1], || format!("h-vector {h:?}"))?;
    let v = components_artinian(&j, None, 1).map_err(err)?;
    ensure(v.len() == 20, || format!("{} components", v.len()))?;
    ensure(slice_counts(&v, 3) == vec![10, 6, 4], || {
        format!("slices {:?}", slice_counts(&v, 3))
    })?;
    ensure(check_condition2(&v).map_err(err)?, || {
        "condition 2 fails".into()
    })?;
    let r = check_condition3(&v).map_err(err)?;
    ensure(!r.passed, || "condition 3 passes".into())?;
    ensure(
        r.witness.as_ref().map(|w| &w.0) == Some(&vec![3, 1, 3]),
        || format!("witness {:?}", r.witness),
    )?;
    let back = monomial_ideal_from_configuration(&v).map_err(err)?;
    ensure(back == j, || "inversion does not return J".into())
}

fn fourteen_points_example() -> Outcome {
    let v = components_artinian(&ideal(FOURTEEN_POINTS, 3), None, 1).map_err(err)?;
    ensure(v.len() == 14, || format!("{} components", v.len()))?;
    ensure(slice_counts(&v, 3) == vec![9, 4, 1], || {
        format!("slices {:?}", slice_counts(&v, 3))
    })?;
    let r = check_condition3(&v).map_err(err)?;
    ensure(!r.passed, || "condition 3 passes".into())?;
    ensure(
        r.failures
            .iter()
            .any(|(_, missing)| missing == &vec![1, 4, 1]),
        || format!("no failure on (1,4,1): {:?}", r.failures),
    )
}

/// Random Artinian ideal: pure powers `x_j^{N_j}` plus up to six mixed
/// monomials below the grid.
fn random_artinian(rng: &mut ChaCha8Rng) -> MonomialIdeal {
    let n = rng.gen_range(1..=4usize);
    let powers: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
    let mut gens: Vec<Monomial> = (0..n).map(|k| Monomial::var(n, k, powers[k])).collect();
    for _ in 0..rng.gen_range(1..=6) {
        let exps: Vec<u32> = powers.iter().map(|&p| rng.gen_range(0..p)).collect();
        if exps.iter().sum::<u32>() > 0 {
            gens.push(Monomial::new(exps).expect("small exponents"));
        }
    }
    MonomialIdeal::new(n, gens).expect("valid generators")
}

struct Case {
    j: MonomialIdeal,
    t: usize,
}

fn corpus() -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    (0..CORPUS_SIZE)
        .map(|_| {
            let j = random_artinian(&mut rng);
            let t = rng.gen_range(1..=3);
            Case { j, t }
        })
        .collect()
}

fn vandermonde<F: Field>(j: &MonomialIdeal, t: usize) -> Result<LiftingMatrix<F>, String> {
    let (rows, _) = j.max_exponents();
    let p: u32 = rows.iter().sum();
    let b: Vec<i64> = (0..p as i64).collect();
    LiftingMatrix::vandermonde(j.n(), t, &rows, &b).map_err(err)
}

fn corpus_limits() -> GroebnerLimits {
    GroebnerLimits {
        max_generators: 16,
        max_degree: 16,
        max_reductions: 2_000_000,
    }
}

fn difference_identity(case: &Case) -> Outcome {
    let a = vandermonde::<Gf32003>(&case.j, case.t)?;
    let gens = a.lifted_ideal(&case.j).map_err(err)?;
    let gb = buchberger(
        &gens,
        &TermOrder::deglex(a.ring().nvars()),
        &corpus_limits(),
    )
    .map_err(err)?;
    let lifted = hilbert_series(&gb.initial_ideal().map_err(err)?).map_err(err)?;
    let base = hilbert_series(&case.j).map_err(err)?;
    let hf: Vec<i64> = (0..=DEGREE_BOUND)
        .map(|d| lifted.hilbert_function(d))
        .collect();
    let delta = difference(&hf, case.t);
    for d in 0..=DEGREE_BOUND {
        let want = series_coefficient(&base.numerator, case.j.n(), d);
        ensure(delta[d as usize] == want, || {
            format!(
                "{}, t={}: degree {d} gives {} not {want}",
                case.j, case.t, delta[d as usize]
            )
        })?;
    }
    let v = components_artinian(&case.j, None, case.t).map_err(err)?;
    let total: i64 = base.h_vector.iter().sum();
    ensure(v.len() as i64 == total, || {
        format!("{}: {} components, sum h = {total}", case.j, v.len())
    })
}

fn delta_identity_suite(cases: &[Case]) -> Outcome {
    let start = Instant::now();
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|c| difference_identity(c).err())
        .collect();
    let elapsed = start.elapsed();
    ensure(failures.is_empty(), || {
        format!("{} failures, first: {}", failures.len(), failures[0])
    })?;
    ensure(elapsed < CORPUS_BUDGET, || format!("took {elapsed:?}"))?;
    let gens: usize = cases.iter().map(|c| c.j.len()).sum();
    let vars: usize = cases.iter().map(|c| c.j.n() + c.t).sum();
    eprintln!(
        "  {} ideals, {gens} generators, {vars} ring variables in total",
        cases.len()
    );
    Ok(())
}

fn betti_case(case: &Case) -> Outcome {
    let a = vandermonde::<Gf32003>(&case.j, case.t)?;
    let bound = case
        .j
        .generators()
        .iter()
        .fold(Monomial::one(case.j.n()), |m, g| m.lcm_with(g))
        .degree();
    let agr = betti_agreement(&case.j, &a, bound).map_err(err)?;
    ensure(agr.passed, || {
        format!("{}, t={}: Betti tables differ", case.j, case.t)
    })?;
    // Euler characteristic of the Betti table against the Hilbert numerator
    let base = graded_betti_over::<Gf32003>(&case.j, TAYLOR_LIMIT).map_err(err)?;
    let num = hilbert_series(&case.j).map_err(err)?.numerator;
    let euler = base.euler_polynomial();
    let len = euler.len().max(num.len());
    let pad = |v: &[i64]| {
        (0..len)
            .map(|i| v.get(i).copied().unwrap_or(0))
            .collect::<Vec<_>>()
    };
    ensure(pad(&euler) == pad(&num), || {
        format!("{}: Euler polynomial differs from numerator", case.j)
    })
}

fn betti_suite(cases: &[Case]) -> Outcome {
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|c| betti_case(c).err())
        .collect();
    ensure(failures.is_empty(), || {
        format!("{} failures, first: {}", failures.len(), failures[0])
    })
}

/// Order ideals of the 3x3x3 grid, as height functions on the last two
/// coordinates that decrease in both directions.
fn order_ideals_3x3x3() -> Vec<Vec<Vec<u32>>> {
    let mut out = Vec::new();
    for code in 0..4u32.pow(9) {
        let h: Vec<u32> = (0..9).map(|k| (code / 4u32.pow(k)) % 4).collect();
        let at = |b: usize, c: usize| h[b * 3 + c];
        let monotone = (0..3).all(|b| {
            (0..3).all(|c| {
                (b == 0 || at(b, c) <= at(b - 1, c)) && (c == 0 || at(b, c) <= at(b, c - 1))
            })
        });
        if !monotone {
            continue;
        }
        let mut tuples = Vec::new();
        for b in 0..3 {
            for c in 0..3 {
                for a in 1..=at(b, c) {
                    tuples.push(vec![a, b as u32 + 1, c as u32 + 1]);
                }
            }
        }
        if !tuples.is_empty() {
            out.push(tuples);
        }
    }
    out
}

fn classification() -> Outcome {
    let ideals = order_ideals_3x3x3();
    // plane partitions in a 3x3x3 box, minus the empty one
    ensure(ideals.len() == 979, || {
        format!("{} order ideals", ideals.len())
    })?;
    let failures: Vec<String> = ideals
        .par_iter()
        .filter_map(|tuples| {
            let check = || -> Outcome {
                let v = Configuration::from_tuples(vec![3, 3, 3], 1, tuples).map_err(err)?;
                let j = monomial_ideal_from_configuration(&v).map_err(err)?;
                let c3 = check_condition3(&v).map_err(err)?.passed;
                ensure(j.is_lex_segment() == c3, || {
                    format!("{tuples:?}: lex {} vs condition 3 {c3}", !c3)
                })?;
                let back = components_artinian(&j, Some(&[3, 3, 3]), 1).map_err(err)?;
                let got: BTreeSet<Vec<u32>> =
                    back.tuples().unwrap_or_default().into_iter().collect();
                let want: BTreeSet<Vec<u32>> = tuples.iter().cloned().collect();
                ensure(got == want, || {
                    format!("{tuples:?}: components of the inverse differ")
                })
            };
            check().err()
        })
        .collect();
    ensure(failures.is_empty(), || {
        format!("{} failures, first: {}", failures.len(), failures[0])
    })
}

fn random_small_ideal(rng: &mut ChaCha8Rng) -> MonomialIdeal {
    let n = rng.gen_range(2..=3usize);
    loop {
        let gens: Vec<Monomial> = (0..rng.gen_range(1..=5))
            .map(|_| {
                let d = rng.gen_range(1..=4u32);
                let mut exps = vec![0u32; n];
                for _ in 0..d {
                    exps[rng.gen_range(0..n)] += 1;
                }
                Monomial::new(exps).expect("small exponents")
            })
            .collect();
        let j = MonomialIdeal::new(n, gens).expect("valid generators");
        if !j.is_unit() {
            return j;
        }
    }
}

fn initial_ideal_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED + 1);
    let cases: Vec<MonomialIdeal> = (0..GB_CASES)
        .map(|_| random_small_ideal(&mut rng))
        .collect();
    let limits = GroebnerLimits::default();
    let results: Vec<Result<bool, String>> = cases
        .par_iter()
        .map(|j| {
            let a = vandermonde::<Rational>(j, 1)?;
            match verify_initial_ideal(j, &a, &limits) {
                Ok(r) => Ok(r.passed),
                Err(e) if e.is_resource_limit() => Err("limit".into()),
                Err(_) => Ok(false),
            }
        })
        .collect();
    let completed = results.iter().filter(|r| r.is_ok()).count();
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, r)| matches!(r, Ok(false)))
        .map(|(i, _)| i)
        .collect();
    ensure(failed.is_empty(), || {
        format!("in(I) != JR for {}", cases[failed[0]])
    })?;
    ensure(completed >= GB_REQUIRED, || {
        format!("only {completed} of {GB_CASES} completed")
    })?;
    eprintln!("  {completed} of {GB_CASES} Groebner computations completed");
    Ok(())
}

fn non_cm_examples() -> Outcome {
    let j1 = ideal("x1^2, x1*x2, x1*x3, x2^2, x2*x3", 3);
    let v1 = components_general(&j1, 1).map_err(err)?;
    let want1 = vec![
        comp(&[(1, 1), (2, 1)]),
        comp(&[(1, 1), (2, 2), (3, 1)]),
        comp(&[(1, 2), (2, 1), (3, 1)]),
    ];
    ensure(v1.components == want1, || {
        format!("line and points: {:?}", v1.components)
    })?;
    ensure(!v1.is_equidimensional(), || {
        "line and points reported equidimensional".into()
    })?;
    ensure(!depth_and_cm(&j1).map_err(err)?.cohen_macaulay, || {
        "first ideal flagged CM".into()
    })?;

    let j2 = ideal("x1*x3, x1*x4, x2*x3, x2*x4", 4);
    let v2 = components_general(&j2, 1).map_err(err)?;
    ensure(
        v2.components == vec![comp(&[(1, 1), (2, 1)]), comp(&[(3, 1), (4, 1)])],
        || format!("two planes: {:?}", v2.components),
    )?;
    let planes: Vec<&Component> = v2.components.iter().collect();
    ensure(v2.intersection_dim(&planes) == 0, || {
        "planes do not meet in a point".into()
    })?;
    ensure(v2.is_equidimensional(), || {
        "two planes not equidimensional".into()
    })?;
    ensure(!depth_and_cm(&j2).map_err(err)?.cohen_macaulay, || {
        "second ideal flagged CM".into()
    })
}

/// Random finite O-sequence starting with 1, with at most three variables.
fn random_h_vector(rng: &mut ChaCha8Rng) -> Vec<i64> {
    let mut h = vec![1i64, rng.gen_range(1..=3)];
    loop {
        let d = (h.len() - 1) as u32;
        let last = *h.last().expect("non-empty") as u64;
        let cap = macaulay_growth(last, d).min(5) as i64;
        let next = rng.gen_range(0..=cap);
        if next == 0 || h.iter().sum::<i64>() + next > 14 {
            return h;
        }
        h.push(next);
    }
}

fn construction_pipeline() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED + 2);
    let cases: Vec<(Vec<i64>, usize)> = (0..H_VECTOR_CASES)
        .map(|_| {
            let h = random_h_vector(&mut rng);
            (h, rng.gen_range(1..=2))
        })
        .collect();
    let limits = GroebnerLimits {
        max_generators: 32,
        ..corpus_limits()
    };
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|(h, t)| {
            let check = || -> Outcome {
                ensure(is_o_sequence(h), || format!("{h:?} is not an O-sequence"))?;
                let c = stick_figure_from_h_vector::<Gf32003>(h, *t, None, &limits).map_err(err)?;
                let stick = c.stick.as_ref().is_some_and(|s| s.passed);
                ensure(stick, || format!("{h:?}, t={t}: not a stick figure"))?;
                ensure(c.hilbert.verified == Some(true), || {
                    format!("{h:?}, t={t}: {}", c.hilbert.note)
                })
            };
            check().err()
        })
        .collect();
    ensure(failures.is_empty(), || {
        format!("{} failures, first: {}", failures.len(), failures[0])
    })
}

fn main() {
    let cases = corpus();
    let criteria: Vec<Criterion> = vec![
        (
            "lifted Taylor resolution of the three-generator example",
            Box::new(cyclic_lift),
        ),
        (
            "components and stick check of the three-lines example",
            Box::new(three_lines_example),
        ),
        ("points with h-vector (1,3,6,9,1)", Box::new(twenty_points_example)),
        (
            "points failing redistribution at (1,4,1)",
            Box::new(fourteen_points_example),
        ),
        (
            "t-th difference identity on the random corpus",
            Box::new(|| delta_identity_suite(&cases)),
        ),
        (
            "Betti preservation on the random corpus",
            Box::new(|| betti_suite(&cases)),
        ),
        (
            "lex-segment classification on the 3x3x3 grid",
            Box::new(classification),
        ),
        (
            "initial ideal of the lifted ideal",
            Box::new(initial_ideal_oracle),
        ),
        ("non-Cohen-Macaulay examples", Box::new(non_cm_examples)),
        (
            "stick figures from h-vectors",
            Box::new(construction_pipeline),
        ),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(()) => println!("PASS criterion {}: {name} ({ms} ms)", k + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({ms} ms): {msg}", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
