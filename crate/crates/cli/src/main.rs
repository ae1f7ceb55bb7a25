//! `schwinger` command-line tool.

mod json;
mod operator;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use schwinger::group_core::{haar_grid, su2_from_euler, su2_to_euler};
use schwinger::majorana::{constellation_to_state, state_to_constellation};
use schwinger::schwinger_basis::y_jm;
use schwinger::sun_structure::{
    branch_fundamental, common_once_irrep, once_irrep_intersection, su3_dimension, su3_highest_weight, su3_multiplets,
};
use schwinger::verify::{run_suite, Suite, VerifyConfig};
use schwinger::wigner_weyl::{trace_pairing_streaming, weyl_symbol, SymbolEngine, SymbolOption, SymbolPlan};
use schwinger::{
    Constellation, EulerAngles, FundamentalLabel, GroupTag, HalfInt, QuadratureGrid, SpinState, Su2Element, WignerMatrix,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "schwinger", version, about = "D-functions, Schwinger bases, Majorana constellations, SU(3) multiplets and Weyl symbols")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Seed for random inputs and randomized checks
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Group quadrature sizes n_alpha,n_beta,n_gamma
    #[arg(long, global = true, value_parser = parse_grid)]
    grid: Option<(usize, usize, usize)>,
    /// Truncation j_max, e.g. 2 or 3/2
    #[arg(long, global = true)]
    jmax: Option<HalfInt>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result to a file instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Wigner matrix D^j(g)
    Dmat {
        #[arg(long)]
        j: HalfInt,
        /// Euler angles alpha,beta,gamma; a seeded random element when omitted
        #[arg(long, value_parser = parse_angles, allow_hyphen_values = true)]
        euler: Option<(f64, f64, f64)>,
    },
    /// Schwinger basis functions Y_jm (j <= jmax, default 1) on a group grid
    Ybasis,
    /// Majorana constellations
    Majorana {
        #[command(subcommand)]
        action: MajoranaCmd,
    },
    /// SU(3) irreps (p, q)
    Su3 {
        #[command(subcommand)]
        action: Su3Cmd,
    },
    /// SU(n) fundamentals
    Sun {
        #[command(subcommand)]
        action: SunCmd,
    },
    /// Weyl symbols on SU(2)
    Weyl {
        #[command(subcommand)]
        action: WeylCmd,
    },
    /// Run a verification suite and print its report
    Verify {
        /// all, group_core, wigner, schwinger_basis, majorana, sun_structure or wigner_weyl
        #[arg(default_value = "all")]
        suite: String,
        #[command(flatten)]
        run: VerifyRun,
    },
}

#[derive(Args)]
struct VerifyRun {
    /// Include per-check runtimes in the report (output is then not reproducible)
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum MajoranaCmd {
    /// SpinState JSON -> constellation JSON
    ToConstellation {
        /// JSON text, @FILE or - for stdin; a seeded random state of spin --two-j when omitted
        #[arg(long)]
        input: Option<String>,
        #[arg(long, default_value_t = 3)]
        two_j: i64,
        /// Also write a stereographic scatter plot
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Constellation JSON -> SpinState JSON
    ToState {
        /// JSON text, @FILE or - for stdin
        #[arg(long)]
        input: String,
    },
}

#[derive(Subcommand)]
enum Su3Cmd {
    /// Dimension (p+1)(q+1)(p+q+2)/2
    Dim { p: u32, q: u32 },
    /// Isospin multiplets {r, s, two_I, three_Y}
    Multiplets { p: u32, q: u32 },
    /// Highest-weight state
    Highest { p: u32, q: u32 },
}

#[derive(Subcommand)]
enum SunCmd {
    /// Restriction of the rank-p fundamental of SU(n) to SU(n-1)
    Branch { n: u32, p: u32 },
    /// SU(n-1) label occurring once in every fundamental of SU(n), or "none"
    Obstruction { n: u32 },
}

#[derive(Args)]
struct SymbolArgs {
    /// Operator: identity | random | random-hermitian | commutant | rank-one:J,M,N | @FILE
    #[arg(long, default_value = "commutant")]
    op: String,
    #[arg(long, default_value = "II")]
    option: SymbolOption,
    /// Symbol cutoff J (default: jmax)
    #[arg(long)]
    cutoff: Option<HalfInt>,
}

#[derive(Subcommand)]
enum WeylCmd {
    /// Symbol blocks W_J(g) at every node of the group grid
    Symbol {
        #[command(flatten)]
        args: SymbolArgs,
    },
    /// Tr(AB) against the symbol pairing
    Trace {
        #[command(flatten)]
        args: SymbolArgs,
        /// Second operator (default: the first)
        #[arg(long)]
        op_b: Option<String>,
    },
    /// The wigner_weyl verification suite
    Verify {
        #[command(flatten)]
        run: VerifyRun,
    },
}

fn parse_triple<T: std::str::FromStr>(s: &str) -> std::result::Result<(T, T, T), String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [a, b, c] = parts[..] else { return Err("expected three comma-separated values".into()) };
    let p = |x: &str| x.trim().parse::<T>().map_err(|_| format!("cannot parse {x:?}"));
    Ok((p(a)?, p(b)?, p(c)?))
}

fn parse_grid(s: &str) -> std::result::Result<(usize, usize, usize), String> {
    let g = parse_triple::<usize>(s)?;
    if g.0 == 0 || g.1 == 0 || g.2 == 0 {
        return Err("grid sizes must be positive".into());
    }
    Ok(g)
}

fn parse_angles(s: &str) -> std::result::Result<(f64, f64, f64), String> {
    parse_triple::<f64>(s)
}

/// Successful output, or a completed run whose checks failed.
enum Outcome {
    Done(String),
    Failed(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = run(&cli).and_then(|outcome| {
        let (text, code) = match outcome {
            Outcome::Done(t) => (t, 0),
            Outcome::Failed(t) => (t, 1),
        };
        emit(&cli.common, &text)?;
        Ok(code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(common: &Common, text: &str) -> Result<()> {
    match &common.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn rng(common: &Common) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(common.seed)
}

fn group_grid(common: &Common, default_exact: HalfInt) -> Result<QuadratureGrid> {
    Ok(match common.grid {
        Some((a, b, c)) => haar_grid(a, b, c, GroupTag::Su2)?,
        None => QuadratureGrid::exact_for(default_exact, GroupTag::Su2),
    })
}

fn read_input(arg: &str) -> Result<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    } else {
        Ok(arg.to_string())
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let c = &cli.common;
    let done = |v: Value| Ok(Outcome::Done(json::render(&v)));
    match &cli.command {
        Command::Dmat { j, euler } => dmat(c, *j, *euler),
        Command::Ybasis => ybasis(c),
        Command::Majorana { action } => match action {
            MajoranaCmd::ToConstellation { input, two_j, svg } => {
                let psi: SpinState = match input {
                    Some(s) => serde_json::from_str(&read_input(s)?).context("expected {\"two_j\": int, \"coeffs\": [[re, im], ...]}")?,
                    None => SpinState::random(*two_j, &mut rng(c)),
                };
                let con = state_to_constellation(&SpinState::new(psi.two_j, psi.coeffs)?)?;
                if let Some(path) = svg {
                    std::fs::write(path, con.to_svg()).with_context(|| format!("writing {}", path.display()))?;
                }
                done(serde_json::to_value(&con)?)
            }
            MajoranaCmd::ToState { input } => {
                let con: Constellation = serde_json::from_str(&read_input(input)?)
                    .context("expected {\"two_j\": int, \"finite_roots\": [[re, im], ...], \"points_at_infinity\": int}")?;
                let con = Constellation::new(con.two_j, con.finite_roots, con.infinity_count)?;
                done(serde_json::to_value(constellation_to_state(&con))?)
            }
        },
        Command::Su3 { action } => match action {
            Su3Cmd::Dim { p, q } => Ok(Outcome::Done(format!("{}\n", su3_dimension(*p, *q)))),
            Su3Cmd::Multiplets { p, q } => {
                let rows = su3_multiplets(*p, *q);
                if c.format == Format::Csv {
                    let mut s = String::from("r,s,two_I,three_Y\n");
                    for m in rows {
                        s += &format!("{},{},{},{}\n", m.r, m.s, m.two_i, m.three_y);
                    }
                    return Ok(Outcome::Done(s));
                }
                done(serde_json::to_value(rows)?)
            }
            Su3Cmd::Highest { p, q } => done(serde_json::to_value(su3_highest_weight(*p, *q))?),
        },
        Command::Sun { action } => match action {
            SunCmd::Branch { n, p } => done(Value::Array(branch_fundamental(*n, *p)?.iter().map(label_json).collect())),
            SunCmd::Obstruction { n } => match common_once_irrep(*n)? {
                None => Ok(Outcome::Done("none\n".into())),
                Some(w) => done(json!({
                    "n": n,
                    "witness": label_json(&w),
                    "once_in_every_fundamental": once_irrep_intersection(*n)?.iter().map(label_json).collect::<Vec<_>>(),
                })),
            },
        },
        Command::Weyl { action } => match action {
            WeylCmd::Symbol { args } => weyl_symbol_cmd(c, args),
            WeylCmd::Trace { args, op_b } => weyl_trace(c, args, op_b.as_deref()),
            WeylCmd::Verify { run } => verify(c, Suite::WignerWeyl, run),
        },
        Command::Verify { suite, run } => verify(c, suite.parse()?, run),
    }
}

fn label_json(l: &FundamentalLabel) -> Value {
    json!({"n": l.n, "p": l.p, "dimension": l.dimension(), "label": l.to_string()})
}

fn dmat(c: &Common, j: HalfInt, euler: Option<(f64, f64, f64)>) -> Result<Outcome> {
    if j.twice() < 0 {
        bail!("j must be nonnegative");
    }
    let g = match euler {
        Some((a, b, g)) => su2_from_euler(&EulerAngles::new(a, b, g))?,
        None => Su2Element::random(&mut rng(c)),
    };
    let e = su2_to_euler(&g);
    let d = WignerMatrix::of(j, &g);
    let labels: Vec<String> = j.projections().map(|m| m.to_string()).collect();
    if c.format == Format::Csv {
        let mut s = String::from("m,n,re,im\n");
        for (a, m) in labels.iter().enumerate() {
            for (b, n) in labels.iter().enumerate() {
                let z = d.entries[(a, b)];
                s += &format!("{m},{n},{},{}\n", json::csv_float(z.re), json::csv_float(z.im));
            }
        }
        return Ok(Outcome::Done(s));
    }
    let rows: Vec<Value> = (0..j.dim()).map(|a| Value::Array((0..j.dim()).map(|b| json::complex(d.entries[(a, b)])).collect())).collect();
    Ok(Outcome::Done(json::render(&json!({
        "j": j.to_string(),
        "euler": e,
        "m": labels,
        "matrix": rows,
    }))))
}

fn ybasis(c: &Common) -> Result<Outcome> {
    let j_max = c.jmax.unwrap_or(HalfInt::ONE);
    if j_max.twice() < 0 {
        bail!("jmax must be nonnegative");
    }
    let grid = group_grid(c, j_max)?;
    let labels: Vec<(HalfInt, HalfInt)> = HalfInt::spins_up_to(j_max).flat_map(|j| j.projections().map(move |m| (j, m))).collect();
    let mut rows = Vec::new();
    for (e, &w) in grid.nodes.iter().zip(&grid.weights) {
        for &(j, m) in &labels {
            rows.push((e, w, j, m, y_jm(j, m, e)?));
        }
    }
    if c.format == Format::Json {
        let v: Vec<Value> = rows
            .iter()
            .map(|(e, w, j, m, y)| json!({"node": e, "weight": w, "j": j.to_string(), "m": m.to_string(), "value": json::complex(*y)}))
            .collect();
        return Ok(Outcome::Done(json::render(&Value::Array(v))));
    }
    let mut s = String::from("alpha,beta,gamma,weight,j,m,re,im\n");
    for (e, w, j, m, y) in rows {
        let f = json::csv_float;
        s += &format!("{},{},{},{},{j},{m},{},{}\n", f(e.alpha), f(e.beta), f(e.gamma), f(w), f(y.re), f(y.im));
    }
    Ok(Outcome::Done(s))
}

const SYMBOL_J_MAX: HalfInt = HalfInt::from_twice(3);

fn engine_for(c: &Common, args: &SymbolArgs) -> Result<(HalfInt, SymbolEngine, QuadratureGrid)> {
    let j_max = c.jmax.unwrap_or(SYMBOL_J_MAX);
    if j_max.twice() < 0 {
        bail!("jmax must be nonnegative");
    }
    let cutoff = args.cutoff.unwrap_or(j_max);
    if cutoff.twice() < 0 {
        bail!("cutoff must be nonnegative");
    }
    let grid = group_grid(c, HalfInt::from_twice(2 * j_max.twice()))?;
    Ok((j_max, SymbolEngine::new(j_max, cutoff), grid))
}

fn weyl_symbol_cmd(c: &Common, args: &SymbolArgs) -> Result<Outcome> {
    let (j_max, engine, grid) = engine_for(c, args)?;
    let op = operator::parse(&args.op, j_max, &mut rng(c))?;
    let w = weyl_symbol(&engine, &op, &grid, args.option)?;
    if let Some(msg) = &w.warning {
        eprintln!("warning: {msg}");
    }
    let nodes: Vec<Value> = grid
        .nodes
        .iter()
        .zip(&grid.weights)
        .zip(&w.values)
        .map(|((e, wt), blocks)| {
            let blocks: Vec<Value> = blocks
                .iter()
                .enumerate()
                .map(|(t, m)| {
                    let rows: Vec<Value> = (0..m.nrows()).map(|a| Value::Array((0..m.ncols()).map(|b| json::complex(m[(a, b)])).collect())).collect();
                    json!({"j": HalfInt::from_twice(t as i64).to_string(), "matrix": rows})
                })
                .collect();
            json!({"node": e, "weight": wt, "blocks": blocks})
        })
        .collect();
    Ok(Outcome::Done(json::render(&json!({
        "option": args.option,
        "j_max": j_max.to_string(),
        "cutoff": engine.cutoff.to_string(),
        "grid": [grid.n_alpha, grid.n_beta, grid.n_gamma],
        "warning": w.warning,
        "nodes": nodes,
    }))))
}

fn weyl_trace(c: &Common, args: &SymbolArgs, op_b: Option<&str>) -> Result<Outcome> {
    let (j_max, engine, grid) = engine_for(c, args)?;
    let mut r = rng(c);
    let a = operator::parse(&args.op, j_max, &mut r)?;
    let b = match op_b {
        Some(spec) => operator::parse(spec, j_max, &mut r)?,
        None => a.clone(),
    };
    let (pa, pb) = (SymbolPlan::new(&engine, &a, args.option)?, SymbolPlan::new(&engine, &b, args.option)?);
    let pairing = trace_pairing_streaming(&pa, &pb, &grid)?;
    let exact = a.trace_product(&b);
    Ok(Outcome::Done(json::render(&json!({
        "option": args.option,
        "j_max": j_max.to_string(),
        "cutoff": engine.cutoff.to_string(),
        "grid": [grid.n_alpha, grid.n_beta, grid.n_gamma],
        "trace": json::complex(exact),
        "symbol_pairing": json::complex(pairing),
        "abs_error": (pairing - exact).norm(),
    }))))
}

fn verify(c: &Common, suite: Suite, run: &VerifyRun) -> Result<Outcome> {
    let mut cfg = VerifyConfig { seed: c.seed, grid: c.grid, timings: run.timings, ..VerifyConfig::default() };
    if let Some(j) = c.jmax {
        if j.twice() < 0 {
            bail!("jmax must be nonnegative");
        }
        cfg.j_max = j;
    }
    if let Some(w) = run.workers {
        cfg.workers = w.max(1);
    }
    let report = run_suite(suite, &cfg);
    for check in &report.checks {
        eprintln!("{} {} residual={:.3e} tolerance={:.1e}", if check.pass { "pass" } else { "FAIL" }, check.check_id, check.residual, check.tolerance);
    }
    let text = json::render(&serde_json::to_value(&report)?);
    Ok(if report.all_pass() { Outcome::Done(text) } else { Outcome::Failed(text) })
}
