//! Command-line front end for the `monolift` library.
//!
//! Every subcommand prints a JSON run report on stdout. Exit codes: 0 pass,
//! 1 mathematical failure, 2 resource limit, 3 input error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use monolift::algebra::{depth_and_cm, graded_betti, hilbert_series};
use monolift::export::{export_ideal, ExportTarget};
use monolift::geometry::{
    check_condition2, check_condition3, components_artinian, components_general,
    is_generalized_stick_figure, monomial_ideal_from_configuration, residual_check, Configuration,
};
use monolift::groebner::{verify_initial_ideal, GroebnerLimits};
use monolift::lifting::{check_genericity, LiftMode, LiftingConfig, LiftingMatrix, Provenance};
use monolift::osequence::stick_figure_from_h_vector;
use monolift::report::{CheckStatus, RunReport, Verdict};
use monolift::taylor::{
    lift_taylor_complex, restriction_matches, taylor_complex, verify_exactness, SignConvention,
};
use monolift::{Error, Field, FieldMode, Gf32003, MonomialIdeal, Rational, Ring};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "monolift",
    version,
    about = "Lift monomial ideals to configurations of linear varieties"
)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Coefficient field: rational or prime (GF(32003)).
    #[arg(
        long,
        global = true,
        env = "MONOLIFT_FIELD",
        default_value = "rational"
    )]
    field: String,

    /// Also write a Macaulay2 or Singular script for the ideal in question.
    #[arg(long, global = true, value_name = "m2|singular")]
    export: Option<String>,

    /// Where to write the exported script.
    #[arg(long, global = true, value_name = "PATH")]
    export_path: Option<PathBuf>,

    /// Write the report to a file as well as stdout.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lift an ideal and its Taylor resolution, then verify the result.
    Lift {
        ideal: String,
        #[command(flatten)]
        matrix: MatrixArgs,
        #[arg(long, value_enum, default_value_t = Convention::Taylor)]
        convention: Convention,
        /// Check exactness in internal degrees up to this bound.
        #[arg(long, default_value_t = 10)]
        degree_bound: u32,
        /// Random evaluation points for the generic-rank test.
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
    /// Graded Betti numbers, depth and Cohen-Macaulayness of S/J.
    Betti { ideal: String },
    /// Components of the lifted configuration.
    Components {
        ideal: String,
        #[command(flatten)]
        matrix: MatrixArgs,
    },
    /// Generalized stick-figure check of a configuration file.
    CheckStick {
        configuration: PathBuf,
        /// Ignore intersections that lie in u = 0.
        #[arg(long)]
        away_from_w: bool,
    },
    /// Downward closure and redistribution closure of a configuration file.
    CheckConditions { configuration: PathBuf },
    /// Monomial ideal whose lifting gives a configuration file.
    Invert { configuration: PathBuf },
    /// Hilbert series data and Hilbert function of S/J.
    Hilbert {
        ideal: String,
        /// Number of Hilbert function values to print.
        #[arg(long, default_value_t = 11)]
        values: u32,
    },
    /// Build a stick figure from an h-vector.
    Construct {
        /// Comma-separated h-vector, starting with 1.
        #[arg(long, value_delimiter = ',', required = true)]
        h: Vec<i64>,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Compare the initial ideal of the lifted ideal with J R.
    VerifyInitial {
        ideal: String,
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Residual of an Artinian ideal in the complete intersection of its grid.
    Residual {
        ideal: String,
        /// Comma-separated grid sizes; defaults to the largest exponents.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<u32>>,
    },
}

#[derive(Args)]
struct MatrixArgs {
    #[arg(long, default_value_t = 1)]
    t: usize,
    /// Lifting matrix configuration (JSON); its `t` overrides `--t`.
    #[arg(long, value_name = "PATH")]
    matrix: Option<PathBuf>,
    /// Use a seeded random matrix instead of the default Vandermonde one.
    #[arg(long, conflicts_with = "matrix")]
    random: bool,
}

#[derive(Args)]
struct LimitArgs {
    #[arg(long, default_value_t = GroebnerLimits::default().max_generators)]
    max_generators: usize,
    #[arg(long, default_value_t = GroebnerLimits::default().max_degree)]
    max_degree: u32,
    #[arg(long, default_value_t = GroebnerLimits::default().max_reductions)]
    max_reductions: usize,
}

impl LimitArgs {
    fn limits(&self) -> GroebnerLimits {
        GroebnerLimits {
            max_generators: self.max_generators,
            max_degree: self.max_degree,
            max_reductions: self.max_reductions,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    Taylor,
    Koszul,
}

impl From<Convention> for SignConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Taylor => SignConvention::Taylor,
            Convention::Koszul => SignConvention::Koszul,
        }
    }
}

/// Settings shared by all subcommands.
struct Session {
    seed: u64,
    field: FieldMode,
    export: Option<ExportTarget>,
    export_path: Option<PathBuf>,
}

impl Session {
    fn field_name(&self) -> &'static str {
        match self.field {
            FieldMode::Rational => "QQ",
            FieldMode::Prime => "GF(32003)",
        }
    }

    fn characteristic(&self) -> u64 {
        match self.field {
            FieldMode::Rational => 0,
            FieldMode::Prime => 32003,
        }
    }

    /// Write the export script, if one was requested, and record its path.
    fn export(
        &self,
        report: &mut RunReport,
        ring: Ring,
        generators: &[String],
    ) -> anyhow::Result<()> {
        let Some(target) = self.export else {
            return Ok(());
        };
        let path = self.export_path.clone().unwrap_or_else(|| {
            PathBuf::from(match target {
                ExportTarget::M2 => "monolift.m2",
                ExportTarget::Singular => "monolift.sing",
            })
        });
        let script = export_ideal(target, ring, self.characteristic(), generators);
        fs::write(&path, script).with_context(|| format!("writing {}", path.display()))?;
        report.artifacts.push(path.display().to_string());
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(verdict) => ExitCode::from(match verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Unverified => 2,
        }),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(err) if err.is_resource_limit() => 2,
        Some(Error::ConditionViolated(_)) => 1,
        _ => 3,
    }
}

fn run(cli: Cli) -> anyhow::Result<Verdict> {
    let field =
        FieldMode::from_name(&cli.field).ok_or_else(|| anyhow!("unknown field `{}`", cli.field))?;
    let export = cli
        .export
        .as_deref()
        .map(str::parse::<ExportTarget>)
        .transpose()
        .map_err(|e| anyhow!(e))?;
    let ctx = Session {
        seed: cli.seed,
        field,
        export,
        export_path: cli.export_path,
    };
    let report = match (&cli.command, field) {
        (Command::Lift { .. }, FieldMode::Rational) => lift::<Rational>(&ctx, &cli.command)?,
        (Command::Lift { .. }, FieldMode::Prime) => lift::<Gf32003>(&ctx, &cli.command)?,
        (Command::Components { .. }, FieldMode::Rational) => {
            components::<Rational>(&ctx, &cli.command)?
        }
        (Command::Components { .. }, FieldMode::Prime) => {
            components::<Gf32003>(&ctx, &cli.command)?
        }
        (Command::VerifyInitial { .. }, FieldMode::Rational) => {
            verify_initial::<Rational>(&ctx, &cli.command)?
        }
        (Command::VerifyInitial { .. }, FieldMode::Prime) => {
            verify_initial::<Gf32003>(&ctx, &cli.command)?
        }
        (Command::Construct { .. }, FieldMode::Rational) => {
            construct::<Rational>(&ctx, &cli.command)?
        }
        (Command::Construct { .. }, FieldMode::Prime) => construct::<Gf32003>(&ctx, &cli.command)?,
        (Command::Betti { ideal }, _) => betti(&ctx, ideal)?,
        (Command::Hilbert { ideal, values }, _) => hilbert(&ctx, ideal, *values)?,
        (
            Command::CheckStick {
                configuration,
                away_from_w,
            },
            _,
        ) => check_stick(&ctx, configuration, *away_from_w)?,
        (Command::CheckConditions { configuration }, _) => check_conditions(&ctx, configuration)?,
        (Command::Invert { configuration }, _) => invert(&ctx, configuration)?,
        (Command::Residual { ideal, grid }, _) => residual(&ctx, ideal, grid.as_deref())?,
    };
    let text = report.to_json();
    println!("{text}");
    if let Some(path) = &cli.output {
        fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(report.verdict())
}

/// An ideal given inline or as `@path`.
fn read_ideal(arg: &str) -> anyhow::Result<MonomialIdeal> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
        None => arg.to_string(),
    };
    Ok(MonomialIdeal::parse(&text, None)?)
}

fn read_configuration(path: &PathBuf) -> anyhow::Result<Configuration> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Configuration::from_json(&text)?)
}

fn lifting_matrix<F: Field>(
    ctx: &Session,
    args: &MatrixArgs,
    j: &MonomialIdeal,
) -> anyhow::Result<LiftingMatrix<F>> {
    let (rows, _) = j.max_exponents();
    let config = match &args.matrix {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            LiftingConfig::from_json(&text)?
        }
        None if args.random => LiftingConfig {
            mode: LiftMode::Restricted,
            provenance: Provenance::Random { seed: ctx.seed },
            t: args.t,
        },
        None => LiftingConfig::default_vandermonde(args.t, &rows),
    };
    Ok(LiftingMatrix::from_config(&config, j.n(), &rows)?)
}

fn input(ideal: &MonomialIdeal, extra: Value) -> Value {
    let mut v = json!({ "ideal": ideal.to_string(), "n": ideal.n() });
    if let (Some(obj), Value::Object(more)) = (v.as_object_mut(), extra) {
        obj.extend(more);
    }
    v
}

fn lift<F: Field>(ctx: &Session, cmd: &Command) -> anyhow::Result<RunReport> {
    let Command::Lift {
        ideal,
        matrix,
        convention,
        degree_bound,
        trials,
    } = cmd
    else {
        unreachable!()
    };
    let j = read_ideal(ideal)?;
    let a = lifting_matrix::<F>(ctx, matrix, &j)?;
    let ring = a.ring();
    let mut report = RunReport::new(
        "lift",
        input(&j, json!({ "t": a.t(), "degree_bound": degree_bound })),
        ctx.seed,
        ctx.field_name(),
    );
    let gens: Vec<String> = a
        .lifted_ideal(&j)?
        .iter()
        .map(|g| g.display_in(ring))
        .collect();
    let conv = SignConvention::from(*convention);
    let c = report.timed("lift_complex", || {
        lift_taylor_complex(&j, &a, conv, monolift::taylor::TAYLOR_LIMIT)
    })?;
    let exact = report.timed("exactness", || {
        verify_exactness(&c, *degree_bound, ctx.seed, *trials)
    })?;
    let base = taylor_complex::<F>(&j, conv, monolift::taylor::TAYLOR_LIMIT)?;
    let genericity = report.timed("genericity", || check_genericity(&a, &j))?;

    report.pass_fail(
        "complex",
        exact.complex_verified,
        "all composites d_k d_(k+1) vanish",
    );
    report.pass_fail(
        "exactness",
        exact.degreewise_passed,
        format!("homology vanishes in degrees <= {degree_bound}"),
    );
    let rank_status = if exact.generic_rank_passed {
        CheckStatus::Probabilistic {
            seed: exact.seed,
            trials: exact.trials,
        }
    } else {
        CheckStatus::Fail
    };
    report.check(
        "generic_rank",
        rank_status,
        "rank conditions at random points",
    );
    report.pass_fail(
        "restriction",
        restriction_matches(&c, &base),
        "u = 0 recovers the Taylor resolution of J",
    );
    report.pass_fail(
        "genericity",
        genericity.passed,
        "codimension condition on lifting-matrix entries",
    );

    let differentials: Vec<Value> = (1..=c.length())
        .map(|k| serde_json::to_value(c.differential(k).to_json(ring)))
        .collect::<Result<_, _>>()?;
    report.output = json!({
        "generators": gens,
        "matrix": a.entry_strings(),
        "matrix_config": a.to_config(),
        "differentials": differentials,
        "exactness": exact,
        "genericity": genericity,
    });
    ctx.export(&mut report, ring, &gens)?;
    Ok(report)
}

fn betti(ctx: &Session, ideal: &str) -> anyhow::Result<RunReport> {
    let j = read_ideal(ideal)?;
    let mut report = RunReport::new("betti", input(&j, json!({})), ctx.seed, ctx.field_name());
    let table = report.timed("betti", || graded_betti(&j))?;
    let depth = depth_and_cm(&j)?;
    report.output = json!({ "betti": table, "depth": depth });
    let gens: Vec<String> = j.generators().iter().map(|g| g.to_string()).collect();
    ctx.export(&mut report, Ring::new(j.n(), 0), &gens)?;
    Ok(report)
}

fn components<F: Field>(ctx: &Session, cmd: &Command) -> anyhow::Result<RunReport> {
    let Command::Components { ideal, matrix } = cmd else {
        unreachable!()
    };
    let j = read_ideal(ideal)?;
    let a = lifting_matrix::<F>(ctx, matrix, &j)?;
    let mut report = RunReport::new(
        "components",
        input(&j, json!({ "t": a.t() })),
        ctx.seed,
        ctx.field_name(),
    );
    let v = if j.is_artinian() {
        components_artinian(&j, None, a.t())?
    } else {
        components_general(&j, a.t())?
    };
    let genericity = check_genericity(&a, &j)?;
    report.pass_fail(
        "genericity",
        genericity.passed,
        "codimension condition on lifting-matrix entries",
    );
    let labels: Vec<String> = v.components.iter().map(|c| c.to_string()).collect();
    report.output = json!({
        "count": v.len(),
        "configuration": v,
        "components": labels,
        "ascii": v.ascii_slices(),
    });
    Ok(report)
}

fn check_stick(ctx: &Session, path: &PathBuf, away_from_w: bool) -> anyhow::Result<RunReport> {
    let v = read_configuration(path)?;
    let mut report = RunReport::new(
        "check-stick",
        json!({ "configuration": path.display().to_string(), "away_from_w": away_from_w }),
        ctx.seed,
        ctx.field_name(),
    );
    let stick = report.timed("stick", || is_generalized_stick_figure(&v, away_from_w));
    report.pass_fail(
        "stick_figure",
        stick.passed,
        "three components meet in dimension <= d - 2",
    );
    report.output = serde_json::to_value(stick)?;
    Ok(report)
}

fn check_conditions(ctx: &Session, path: &PathBuf) -> anyhow::Result<RunReport> {
    let v = read_configuration(path)?;
    let mut report = RunReport::new(
        "check-conditions",
        json!({ "configuration": path.display().to_string() }),
        ctx.seed,
        ctx.field_name(),
    );
    let c2 = check_condition2(&v)?;
    let c3 = check_condition3(&v)?;
    report.pass_fail("condition2", c2, "closed under lowering an index");
    report.pass_fail("condition3", c3.passed, "closed under redistribution");
    report.output = json!({ "condition2": c2, "condition3": c3 });
    Ok(report)
}

fn invert(ctx: &Session, path: &PathBuf) -> anyhow::Result<RunReport> {
    let v = read_configuration(path)?;
    let mut report = RunReport::new(
        "invert",
        json!({ "configuration": path.display().to_string() }),
        ctx.seed,
        ctx.field_name(),
    );
    let j = monomial_ideal_from_configuration(&v)?;
    report.output =
        json!({ "ideal": j.to_string(), "n": j.n(), "lex_segment": j.is_lex_segment() });
    Ok(report)
}

fn hilbert(ctx: &Session, ideal: &str, values: u32) -> anyhow::Result<RunReport> {
    let j = read_ideal(ideal)?;
    let mut report = RunReport::new("hilbert", input(&j, json!({})), ctx.seed, ctx.field_name());
    let data = hilbert_series(&j)?;
    let function: Vec<i64> = (0..values).map(|d| data.hilbert_function(d)).collect();
    report.output = json!({ "hilbert": data, "hilbert_function": function });
    Ok(report)
}

fn construct<F: Field>(ctx: &Session, cmd: &Command) -> anyhow::Result<RunReport> {
    let Command::Construct { h, t, limits } = cmd else {
        unreachable!()
    };
    let mut report = RunReport::new(
        "construct",
        json!({ "h": h, "t": t }),
        ctx.seed,
        ctx.field_name(),
    );
    let c = report.timed("construct", || {
        stick_figure_from_h_vector::<F>(h, *t, None, &limits.limits())
    })?;
    if let Some(stick) = &c.stick {
        report.pass_fail(
            "stick_figure",
            stick.passed,
            "three components meet in dimension <= d - 2",
        );
    }
    if let Some(g) = &c.genericity {
        report.pass_fail(
            "genericity",
            g.passed,
            "codimension condition on lifting-matrix entries",
        );
    }
    let status = match c.hilbert.verified {
        Some(true) => CheckStatus::Pass,
        Some(false) => CheckStatus::Fail,
        None => CheckStatus::Unverified {
            reason: c.hilbert.note.clone(),
        },
    };
    report.check(
        "hilbert_function",
        status,
        "t-th difference of the Hilbert function equals h",
    );
    report.output = serde_json::to_value(&c)?;
    if let Ok(j) = MonomialIdeal::parse(&c.ideal, Some(c.n)) {
        let gens: Vec<String> = j.generators().iter().map(|g| g.to_string()).collect();
        ctx.export(&mut report, Ring::new(c.n, 0), &gens)?;
    }
    Ok(report)
}

fn verify_initial<F: Field>(ctx: &Session, cmd: &Command) -> anyhow::Result<RunReport> {
    let Command::VerifyInitial {
        ideal,
        matrix,
        limits,
    } = cmd
    else {
        unreachable!()
    };
    let j = read_ideal(ideal)?;
    let a = lifting_matrix::<F>(ctx, matrix, &j)?;
    let mut report = RunReport::new(
        "verify-initial",
        input(&j, json!({ "t": a.t() })),
        ctx.seed,
        ctx.field_name(),
    );
    match report.timed("groebner", || {
        verify_initial_ideal(&j, &a, &limits.limits())
    }) {
        Ok(r) => {
            report.pass_fail(
                "initial_ideal",
                r.passed,
                "degree-lex initial ideal equals J R",
            );
            report.output = serde_json::to_value(r)?;
        }
        Err(e) if e.is_resource_limit() => {
            report.check(
                "initial_ideal",
                CheckStatus::Unverified {
                    reason: e.to_string(),
                },
                "",
            );
        }
        Err(e) => return Err(e.into()),
    }
    let gens: Vec<String> = a
        .lifted_ideal(&j)?
        .iter()
        .map(|g| g.display_in(a.ring()))
        .collect();
    ctx.export(&mut report, a.ring(), &gens)?;
    Ok(report)
}

fn residual(ctx: &Session, ideal: &str, grid: Option<&[u32]>) -> anyhow::Result<RunReport> {
    let j = read_ideal(ideal)?;
    let mut report = RunReport::new(
        "residual",
        input(&j, json!({ "grid": grid })),
        ctx.seed,
        ctx.field_name(),
    );
    if !j.is_artinian() {
        bail!(Error::NotArtinian);
    }
    let r = residual_check(&j, grid)?;
    report.pass_fail("residual", r.passed, r.note.clone());
    report.output = serde_json::to_value(r)?;
    Ok(report)
}
