//! Command-line front end. [`run`] is the whole program; the binary only
//! forwards `std::env::args` and the standard streams.
//!
//! Exit codes: 0 on success, 1 for I/O, parse and usage failures, 2 for
//! mathematical obstructions (the error name goes to standard error).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::canonical::{orthogonal_canonical_form, CanonicalBlock};
use crate::error::Error;
use crate::families::{self, InvolutoryParam, Seed, Sign};
use crate::idempotent::{self, BlockQuadruple};
use crate::linalg::{self, is_idempotent, is_involutory, is_orthogonal};
use crate::matrix::Matrix;
use crate::roots::{self, RootOptions};
use crate::tolerances::Tolerances;

#[derive(Parser, Debug)]
#[command(
    name = "matroot",
    version,
    about = "Real matrix roots, involutions and idempotents"
)]
struct Cli {
    /// Relative equality tolerance used by every check.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for the random generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write output matrices to this directory instead of inline.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Emit the report as a single JSON object.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a member of an explicit family.
    Family {
        kind: FamilyKind,
        /// Comma-separated parameters; see the README for each kind.
        #[arg(long, allow_hyphen_values = true)]
        params: Option<String>,
    },
    /// Real square root of an involutory, symmetric or orthogonal matrix.
    Root {
        kind: RootKind,
        /// Input matrix file (`rows cols` header, then one line per row).
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Sign choices for the non-negative part, e.g. `1,-1,1`.
        #[arg(long, allow_hyphen_values = true)]
        signs: Option<String>,
        /// Ψ(a, b) choices for the negative pairs, e.g. `0:1,2:-0.5`.
        #[arg(long, allow_hyphen_values = true)]
        psi: Option<String>,
    },
    /// Successive 2^k-th roots of an orthogonal matrix.
    Tower {
        /// Input matrix file (`rows cols` header, then one line per row).
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Number of halvings, 1 to 40.
        #[arg(long)]
        depth: u32,
    },
    /// Idempotent from block data, and its involution 2P − I.
    Idempotent(IdempotentArgs),
    /// Check an algebraic property of a matrix.
    Verify {
        predicate: Predicate,
        /// Input matrix file (`rows cols` header, then one line per row).
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// Reduce a matrix to its canonical similarity form.
    Canonicalize {
        kind: CanonicalKind,
        /// Input matrix file (`rows cols` header, then one line per row).
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct IdempotentArgs {
    /// Block files A B C D.
    #[arg(long, num_args = 4, value_names = ["A", "B", "C", "D"])]
    blocks: Option<Vec<PathBuf>>,
    /// Scalar-block family `a,b,c,d,n,m`.
    #[arg(long, allow_hyphen_values = true)]
    example: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FamilyKind {
    Involutory2,
    Psi,
    Rotation,
    Reflection,
    /// Seeded random orthogonal matrix; params `n`.
    Orthogonal,
    /// Seeded symmetric matrix with paired negative eigenvalues; params `n,pairs`.
    Symmetric,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum RootKind {
    Involutory,
    Symmetric,
    Orthogonal,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Predicate {
    Involutory,
    Idempotent,
    Orthogonal,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CanonicalKind {
    Orthogonal,
    Idempotent,
    Involutory,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct Residual {
    pub label: String,
    pub value: f64,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct Fact {
    pub label: String,
    pub value: String,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<TableRow>,
}

/// One row of a [`Table`]: an integer index followed by real values.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct TableRow {
    pub index: usize,
    pub values: Vec<f64>,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct Output {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cols: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<f64>>,
    #[serde(skip)]
    text: String,
}

/// Result of one command.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct Report {
    pub status: &'static str,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub facts: Vec<Fact>,
    pub residuals: Vec<Residual>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
    pub outputs: Vec<Output>,
}

impl Report {
    fn new(command: impl Into<String>) -> Self {
        Self {
            status: "ok",
            command: command.into(),
            error: None,
            facts: Vec::new(),
            residuals: Vec::new(),
            table: None,
            outputs: Vec::new(),
        }
    }

    fn fact(&mut self, label: &str, value: impl ToString) {
        self.facts.push(Fact {
            label: label.into(),
            value: value.to_string(),
        });
    }

    fn residual(&mut self, label: &str, value: f64) {
        self.residuals.push(Residual {
            label: label.into(),
            value,
        });
    }

    pub fn residual_value(&self, label: &str) -> Option<f64> {
        self.residuals
            .iter()
            .find(|r| r.label == label)
            .map(|r| r.value)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "status = {}", self.status);
        let _ = writeln!(s, "command = {}", self.command);
        if let Some(e) = &self.error {
            let _ = writeln!(s, "error = {e}");
        }
        for f in &self.facts {
            let _ = writeln!(s, "{} = {}", f.label, f.value);
        }
        for r in &self.residuals {
            let _ = writeln!(s, "residual.{} = {:.6e}", r.label, r.value);
        }
        if let Some(t) = &self.table {
            let _ = writeln!(s, "table = {}", t.columns.join(" "));
            for row in &t.rows {
                let cells: Vec<String> = row.values.iter().map(|x| format!("{x:.6e}")).collect();
                let _ = writeln!(s, "  {} {}", row.index, cells.join(" "));
            }
        }
        for o in &self.outputs {
            match &o.path {
                Some(p) => {
                    let _ = writeln!(s, "output.{} = {p}", o.name);
                }
                None => {
                    let _ = writeln!(s, "output.{} =", o.name);
                    s.push_str(&o.text);
                }
            }
        }
        s
    }
}

/// Errors surfaced by the command layer.
#[derive(Debug)]
enum CliError {
    /// Bad arguments or unreadable input; exit 1.
    Usage(String),
    /// Library error; exit 2 unless it is an input-format error.
    Domain(Error),
    /// Predicate check failed; exit 2 with the report still printed.
    Failed(Box<Report>, Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

struct Context {
    tol: Tolerances,
    seed: Seed,
    out: Option<PathBuf>,
}

impl Context {
    fn emit(&self, report: &mut Report, name: &str, m: &Matrix) -> CliResult<()> {
        let output = match &self.out {
            Some(dir) => {
                let path = dir.join(format!("{name}.mat"));
                std::fs::write(&path, m.to_text()).map_err(|e| {
                    CliError::Usage(format!("cannot write {}: {e}", path.display()))
                })?;
                Output {
                    name: name.into(),
                    path: Some(path.display().to_string()),
                    rows: None,
                    cols: None,
                    entries: None,
                    text: String::new(),
                }
            }
            None => Output {
                name: name.into(),
                path: None,
                rows: Some(m.rows()),
                cols: Some(m.cols()),
                entries: Some(m.as_slice().to_vec()),
                text: m.to_text(),
            },
        };
        report.outputs.push(output);
        Ok(())
    }
}

fn read_matrix(path: &Path) -> CliResult<Matrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Matrix::from_text(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn parse_f64(tok: &str) -> CliResult<f64> {
    let x: f64 = tok
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("not a number: `{tok}`")))?;
    if !x.is_finite() {
        return Err(CliError::Usage(format!("not a finite number: `{tok}`")));
    }
    Ok(x)
}

fn parse_usize(tok: &str) -> CliResult<usize> {
    tok.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("not a non-negative integer: `{tok}`")))
}

fn split_params(params: Option<&str>) -> Vec<&str> {
    params.map_or_else(Vec::new, |p| p.split(',').map(str::trim).collect())
}

fn parse_numbers(params: Option<&str>, expected: usize, what: &str) -> CliResult<Vec<f64>> {
    let toks = split_params(params);
    if toks.len() != expected {
        return Err(CliError::Usage(format!(
            "{what} expects {expected} parameter(s), got {}",
            toks.len()
        )));
    }
    toks.into_iter().map(parse_f64).collect()
}

fn parse_sign(tok: &str) -> CliResult<Sign> {
    Sign::from_value(parse_f64(tok)?).map_err(|e| CliError::Usage(e.to_string()))
}

fn product_residual(a: &Matrix, b: &Matrix, target: &Matrix) -> f64 {
    (&(a * b) - target).frobenius_norm()
}

fn family(ctx: &Context, kind: FamilyKind, params: Option<&str>) -> CliResult<Report> {
    let mut report = Report::new(format!("family {}", kind_name(kind)));
    let id2 = Matrix::identity(2);
    match kind {
        FamilyKind::Involutory2 => {
            let param = match split_params(params).as_slice() {
                [] => {
                    report.fact("seed", ctx.seed.0);
                    families::sample_involutory_param(&mut ctx.seed.rng())
                }
                ["lower", s, c] => InvolutoryParam::LowerTriangular {
                    sign: parse_sign(s)?,
                    c: parse_f64(c)?,
                },
                ["scalar", s] => InvolutoryParam::Scalar(parse_sign(s)?),
                [a, b] | ["general", a, b] => InvolutoryParam::General {
                    a: parse_f64(a)?,
                    b: parse_f64(b)?,
                },
                other => {
                    return Err(CliError::Usage(format!(
                        "involutory2 expects `a,b`, `lower,s,c` or `scalar,s`; got `{}`",
                        other.join(",")
                    )))
                }
            };
            report.fact("branch", format!("{param:?}"));
            let m = families::involutory_2x2(param)?;
            report.residual("square_minus_identity", product_residual(&m, &m, &id2));
            ctx.emit(&mut report, "matrix", &m)?;
        }
        FamilyKind::Psi => {
            let v = match params {
                None => vec![0.0, 1.0],
                Some(_) => parse_numbers(params, 2, "psi")?,
            };
            let m = families::psi(v[0], v[1])?;
            report.residual("square_plus_identity", (&(&m * &m) + &id2).frobenius_norm());
            ctx.emit(&mut report, "matrix", &m)?;
        }
        FamilyKind::Rotation | FamilyKind::Reflection => {
            let theta = parse_numbers(params, 1, kind_name(kind))?[0];
            let m = if matches!(kind, FamilyKind::Rotation) {
                families::rotation(theta)
            } else {
                families::reflection(theta)
            };
            report.residual("orthogonality", linalg::orthogonal_residual(&m)?);
            if matches!(kind, FamilyKind::Reflection) {
                report.residual("square_minus_identity", product_residual(&m, &m, &id2));
                report.residual("symmetry", (&m - &m.transpose()).frobenius_norm());
            }
            ctx.emit(&mut report, "matrix", &m)?;
        }
        FamilyKind::Orthogonal => {
            let toks = split_params(params);
            let [n] = toks.as_slice() else {
                return Err(CliError::Usage("orthogonal expects `n`".into()));
            };
            let m = families::sample_orthogonal(parse_usize(n)?, ctx.seed)?;
            report.fact("seed", ctx.seed.0);
            report.residual("orthogonality", linalg::orthogonal_residual(&m)?);
            ctx.emit(&mut report, "matrix", &m)?;
        }
        FamilyKind::Symmetric => {
            let toks = split_params(params);
            let [n, pairs] = toks.as_slice() else {
                return Err(CliError::Usage("symmetric expects `n,pairs`".into()));
            };
            let m =
                families::sample_symmetric_paired(parse_usize(n)?, parse_usize(pairs)?, ctx.seed)?;
            report.fact("seed", ctx.seed.0);
            report.residual("symmetry", (&m - &m.transpose()).frobenius_norm());
            ctx.emit(&mut report, "matrix", &m)?;
        }
    }
    Ok(report)
}

fn kind_name(kind: FamilyKind) -> &'static str {
    match kind {
        FamilyKind::Involutory2 => "involutory2",
        FamilyKind::Psi => "psi",
        FamilyKind::Rotation => "rotation",
        FamilyKind::Reflection => "reflection",
        FamilyKind::Orthogonal => "orthogonal",
        FamilyKind::Symmetric => "symmetric",
    }
}

fn parse_root_options(signs: Option<&str>, psi: Option<&str>) -> CliResult<RootOptions> {
    let signs = signs
        .map(|s| s.split(',').map(parse_sign).collect::<CliResult<Vec<_>>>())
        .transpose()?;
    let psi_params = psi
        .map(|s| {
            s.split(',')
                .map(|pair| {
                    let (a, b) = pair.split_once(':').ok_or_else(|| {
                        CliError::Usage(format!("psi pair `{pair}` must be `a:b`"))
                    })?;
                    Ok((parse_f64(a)?, parse_f64(b)?))
                })
                .collect::<CliResult<Vec<_>>>()
        })
        .transpose()?;
    Ok(RootOptions { signs, psi_params })
}

fn root(ctx: &Context, kind: RootKind, input: &Path, opts: RootOptions) -> CliResult<Report> {
    let a = read_matrix(input)?;
    let (name, r) = match kind {
        RootKind::Involutory => (
            "involutory",
            roots::involutory_real_root(&a, &opts, &ctx.tol)?,
        ),
        RootKind::Symmetric => (
            "symmetric",
            roots::symmetric_real_root(&a, &opts, &ctx.tol)?,
        ),
        RootKind::Orthogonal => {
            if opts != RootOptions::default() {
                return Err(CliError::Usage(
                    "orthogonal roots take no --signs/--psi".into(),
                ));
            }
            ("orthogonal", roots::orthogonal_real_root(&a, &ctx.tol)?)
        }
    };
    let mut report = Report::new(format!("root {name}"));
    report.residual("root_squared_minus_input", product_residual(&r, &r, &a));
    if matches!(kind, RootKind::Orthogonal) {
        report.residual("root_orthogonality", linalg::orthogonal_residual(&r)?);
    }
    ctx.emit(&mut report, "root", &r)?;
    Ok(report)
}

fn tower(ctx: &Context, input: &Path, depth: u32) -> CliResult<Report> {
    let a = read_matrix(input)?;
    let tower = roots::root_tower(&a, depth, &ctx.tol)?;
    let mut report = Report::new("tower");
    report.fact("depth", depth);
    let mut rows = Vec::new();
    let mut worst_power: f64 = 0.0;
    let mut worst_telescope: f64 = 0.0;
    for k in 0..=depth as usize {
        let power = tower.power_residual(k, &a);
        worst_power = worst_power.max(power);
        rows.push(TableRow {
            index: k,
            values: vec![tower.distance_to_identity(k), power],
        });
        if k > 0 {
            let r = tower.level_root(k);
            worst_telescope =
                worst_telescope.max(product_residual(&r, &r, &tower.level_root(k - 1)));
        }
    }
    report.residual("max_power_minus_input", worst_power);
    report.residual("max_level_squared_minus_previous", worst_telescope);
    report.table = Some(Table {
        columns: vec![
            "k".into(),
            "dist_to_identity".into(),
            "power_minus_input".into(),
        ],
        rows,
    });
    ctx.emit(
        &mut report,
        "root_deepest",
        &tower.level_root(depth as usize),
    )?;
    Ok(report)
}

fn idempotent_cmd(ctx: &Context, args: &IdempotentArgs) -> CliResult<Report> {
    let mut report;
    let p = if let Some(paths) = &args.blocks {
        let [a, b, c, d] = [&paths[0], &paths[1], &paths[2], &paths[3]].map(|p| read_matrix(p));
        let q = BlockQuadruple::new(a?, b?, c?, d?)?;
        report = Report::new("idempotent blocks");
        let pair = idempotent::schur_pair(&q, &ctx.tol)?;
        let (n, m) = q.orders();
        report.fact("n", n);
        report.fact("m", m);
        let s_complement = q.d() - &(&(q.c() * &linalg::lu_invert(q.a(), &ctx.tol)?) * q.b());
        let t_complement = q.a() - &(&(q.b() * &linalg::lu_invert(q.d(), &ctx.tol)?) * q.c());
        report.residual(
            "s_times_complement_minus_identity",
            product_residual(&pair.s, &s_complement, &Matrix::identity(m)),
        );
        report.residual(
            "t_times_complement_minus_identity",
            product_residual(&pair.t, &t_complement, &Matrix::identity(n)),
        );
        idempotent::block_idempotent(&q, &ctx.tol)?
    } else {
        let text = args.example.as_deref().unwrap_or_default();
        let toks: Vec<&str> = text.split(',').map(str::trim).collect();
        let [a, b, c, d, n, m] = toks.as_slice() else {
            return Err(CliError::Usage(format!(
                "--example expects `a,b,c,d,n,m`, got `{text}`"
            )));
        };
        let (a, b, c, d) = (parse_f64(a)?, parse_f64(b)?, parse_f64(c)?, parse_f64(d)?);
        let (n, m) = (parse_usize(n)?, parse_usize(m)?);
        let family = idempotent::example_family(a, b, c, d, n, m, &ctx.tol)?;
        let general = idempotent::block_idempotent(
            &idempotent::example_quadruple(a, b, c, d, n, m)?,
            &ctx.tol,
        )?;
        report = Report::new("idempotent example");
        report.fact("n", n);
        report.fact("m", m);
        report.residual(
            "closed_form_minus_block_formula",
            family.p.distance(&general),
        );
        family.p
    };
    let t = &p.scale(2.0) - &Matrix::identity(p.rows());
    report.fact("trace", format!("{:.12}", p.trace()));
    report.residual("p_squared_minus_p", linalg::idempotent_residual(&p)?);
    report.residual("t_squared_minus_identity", linalg::involutory_residual(&t)?);
    ctx.emit(&mut report, "p", &p)?;
    ctx.emit(&mut report, "t", &t)?;
    Ok(report)
}

fn verify(ctx: &Context, predicate: Predicate, input: &Path) -> CliResult<Report> {
    let a = read_matrix(input)?;
    let scale = 1.0 + a.frobenius_norm().powi(2);
    let (name, label, residual, holds, err) = match predicate {
        Predicate::Involutory => (
            "involutory",
            "square_minus_identity",
            linalg::involutory_residual(&a)?,
            is_involutory(&a, &ctx.tol),
            Error::NotInvolutory,
        ),
        Predicate::Idempotent => (
            "idempotent",
            "square_minus_matrix",
            linalg::idempotent_residual(&a)?,
            is_idempotent(&a, &ctx.tol),
            Error::NotIdempotent,
        ),
        Predicate::Orthogonal => (
            "orthogonal",
            "gram_minus_identity",
            linalg::orthogonal_residual(&a)?,
            is_orthogonal(&a, &ctx.tol),
            Error::NotOrthogonal,
        ),
    };
    let mut report = Report::new(format!("verify {name}"));
    report.fact("holds", holds);
    report.fact("threshold", format!("{:.6e}", ctx.tol.eq_rtol * scale));
    report.residual(label, residual);
    if holds {
        Ok(report)
    } else {
        Err(CliError::Failed(Box::new(report), err))
    }
}

fn block_label(b: &CanonicalBlock) -> String {
    match b {
        CanonicalBlock::PlusOne => "PlusOne".into(),
        CanonicalBlock::MinusOne => "MinusOne".into(),
        CanonicalBlock::Rotation(t) => format!("Rotation({t})"),
        CanonicalBlock::Reflection(t) => format!("Reflection({t})"),
    }
}

fn canonicalize(ctx: &Context, kind: CanonicalKind, input: &Path) -> CliResult<Report> {
    let a = read_matrix(input)?;
    let report = match kind {
        CanonicalKind::Orthogonal => {
            let form = orthogonal_canonical_form(&a, &ctx.tol)?;
            let class = roots::classify_form(&form);
            let mut report = Report::new("canonicalize orthogonal");
            let labels: Vec<String> = form.blocks.iter().map(block_label).collect();
            report.fact("blocks", labels.join(" "));
            report.fact("plus_count", form.plus_count());
            report.fact("minus_count", form.minus_count());
            report.fact("class", class.class.name());
            report.fact("root_eligible", class.root_eligible);
            report.residual("reconstruction", form.reconstruct().distance(&a));
            report.residual("p_orthogonality", linalg::orthogonal_residual(&form.p)?);
            ctx.emit(&mut report, "p", &form.p)?;
            ctx.emit(&mut report, "blocks", &form.block_diagonal())?;
            report
        }
        CanonicalKind::Idempotent => {
            let c = idempotent::idempotent_canonicalize(&a, &ctx.tol)?;
            let mut report = Report::new("canonicalize idempotent");
            report.fact("rank", c.rank);
            report.residual("reconstruction", c.reconstruct(&ctx.tol)?.distance(&a));
            ctx.emit(&mut report, "m", &c.m)?;
            report
        }
        CanonicalKind::Involutory => {
            let e = roots::involutory_eigenbasis(&a, &ctx.tol)?;
            let mut report = Report::new("canonicalize involutory");
            report.fact("plus_count", e.plus_count);
            report.fact("minus_count", e.minus_count());
            report.fact(
                "det_sign",
                if e.minus_count().is_multiple_of(2) {
                    "+1"
                } else {
                    "-1"
                },
            );
            report.residual("reconstruction", e.reconstruct(&ctx.tol)?.distance(&a));
            ctx.emit(&mut report, "b", &e.b)?;
            report
        }
    };
    Ok(report)
}

fn dispatch(cli: &Cli) -> CliResult<Report> {
    let mut tol = Tolerances::default();
    if let Some(t) = cli.tol {
        tol = tol
            .with_eq_rtol(t)
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    if let Some(dir) = &cli.out {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
    }
    let ctx = Context {
        tol,
        seed: Seed(cli.seed),
        out: cli.out.clone(),
    };
    match &cli.command {
        Command::Family { kind, params } => family(&ctx, *kind, params.as_deref()),
        Command::Root {
            kind,
            input,
            signs,
            psi,
        } => root(
            &ctx,
            *kind,
            input,
            parse_root_options(signs.as_deref(), psi.as_deref())?,
        ),
        Command::Tower { input, depth } => tower(&ctx, input, *depth),
        Command::Idempotent(args) => idempotent_cmd(&ctx, args),
        Command::Verify { predicate, input } => verify(&ctx, *predicate, input),
        Command::Canonicalize { kind, input } => canonicalize(&ctx, *kind, input),
    }
}

fn render(report: &Report, json: bool) -> String {
    if json {
        let mut s = serde_json::to_string(report).expect("report serializes");
        s.push('\n');
        s
    } else {
        report.to_text()
    }
}

fn command_label(cli: &Cli) -> String {
    match &cli.command {
        Command::Family { kind, .. } => format!("family {}", kind_name(*kind)),
        Command::Root { kind, .. } => format!("root {kind:?}").to_lowercase(),
        Command::Tower { .. } => "tower".into(),
        Command::Idempotent(_) => "idempotent".into(),
        Command::Verify { predicate, .. } => format!("verify {predicate:?}").to_lowercase(),
        Command::Canonicalize { kind, .. } => format!("canonicalize {kind:?}").to_lowercase(),
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let failure = |report: Report, err: &Error, stdout: &mut dyn Write, stderr: &mut dyn Write| {
        let mut report = report;
        report.status = "error";
        report.error = Some(err.name().into());
        let _ = stdout.write_all(render(&report, cli.json).as_bytes());
        let _ = writeln!(stderr, "error: {}: {err}", err.name());
    };
    match dispatch(&cli) {
        Ok(report) => {
            let _ = stdout.write_all(render(&report, cli.json).as_bytes());
            0
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Err(CliError::Domain(err)) => {
            failure(Report::new(command_label(&cli)), &err, stdout, stderr);
            if err.is_input_error() {
                1
            } else {
                2
            }
        }
        Err(CliError::Failed(report, err)) => {
            failure(*report, &err, stdout, stderr);
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["matroot"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn family_psi_default() {
        let (code, out, _) = run_capture(&["family", "psi"]);
        assert_eq!(code, 0);
        assert!(out.contains("residual.square_plus_identity = 0.000000e0"));
        assert!(out.contains("2 2\n0.0000000000000000e0 -1.0000000000000000e0\n"));
    }

    #[test]
    fn negative_params_are_accepted() {
        let (code, out, err) = run_capture(&["family", "involutory2", "--params", "-3,2"]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("General { a: -3.0, b: 2.0 }"));
        let (code, _, _) = run_capture(&["family", "involutory2", "--params", "lower,-1,4"]);
        assert_eq!(code, 0);
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_capture(&["family", "rotation"]).0, 1);
        assert_eq!(run_capture(&["family", "rotation", "--params", "x"]).0, 1);
        assert_eq!(run_capture(&["bogus"]).0, 1);
        assert_eq!(
            run_capture(&["root", "symmetric", "--in", "/nonexistent/file"]).0,
            1
        );
        assert_eq!(run_capture(&["--tol", "2", "family", "psi"]).0, 1);
        assert_eq!(run_capture(&["idempotent"]).0, 1);
    }

    #[test]
    fn domain_errors_exit_two() {
        let (code, out, err) = run_capture(&["family", "psi", "--params", "1,0"]);
        assert_eq!(code, 2);
        assert!(err.contains("InvalidParameter"));
        assert!(out.contains("status = error"));
        let (code, _, err) = run_capture(&["idempotent", "--example", "1,1,1,1,2,1"]);
        assert_eq!(code, 2);
        assert!(err.contains("DegenerateParameters"));
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run_capture(&["--help"]).0, 0);
    }

    #[test]
    fn json_report() {
        let (code, out, _) = run_capture(&["--json", "idempotent", "--example", "1,1,1,2,2,1"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["status"], "ok");
        assert_eq!(v["outputs"][0]["entries"][2], -1.0);
        assert!(v["residuals"][0]["value"].as_f64().unwrap() < 1e-12);
    }
}
