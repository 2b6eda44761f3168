//! Command-line front end. `run` parses arguments, writes to the given
//! streams and returns the process exit code: 0 success, 1 usage or input
//! error, 2 failed verification.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cf::{cf_of_surd, classical_lagrange, CFExpansion, QuadraticSurd};
use crate::error::{Error, Result};
use crate::orbit::{b7, h2_seven_square_orbits, OrbitGraph};
use crate::origami::Origami;
use crate::spectrum::{lagrange, scan_even_loops, LagrangeValue, ScanConfig};
use crate::subshift::{
    gap_first, gap_second, interval_first, kappa, l_sigma_limit, l_sigma_periodic, nu, ABWord, Gap,
    LimitWordSpec,
};
use crate::verify;

pub const THREADS_ENV: &str = "ORIGAMI_SPECTRUM_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "origami-spectrum",
    version,
    about = "Exact Lagrange spectrum values for the 36-element orbit of 7-square origamis in H(2)"
)]
pub struct Cli {
    /// Output format; each command supports a subset.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Fractional digits in decimal output.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..=60))]
    pub digits: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Derive the orbit and print its statistics.
    Orbit(OrbitArgs),
    /// Lagrange value of a quadratic irrational slope.
    Lagrange(LagrangeArgs),
    /// First and second generation gaps.
    Gaps(GapsArgs),
    /// Values of all even loops up to a period sum.
    Scan(ScanArgs),
    /// L^sigma of a periodic or limit word over {a, b}.
    Lsigma(LsigmaArgs),
    /// Run the self-check suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct OrbitArgs {
    /// Print the orbit graph in DOT.
    #[arg(long)]
    pub dot: bool,
    /// Print the orbit graph as JSON.
    #[arg(long)]
    pub json: bool,
    /// Print the sizes of all orbits of 7-square origamis in H(2).
    #[arg(long)]
    pub all_orbits: bool,
    /// Use the orbit of the origami in this file (text `h=... v=...` or JSON).
    #[arg(long)]
    pub seed_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LagrangeArgs {
    /// Slope as a continued fraction such as `[;(1,3)]` or a surd such as `(-3+sqrt(21))/6`.
    pub alpha: String,
    /// Start vertex.
    #[arg(long, conflicts_with_all = ["min", "all"])]
    pub start: Option<usize>,
    /// Minimum over all start vertices (default).
    #[arg(long, conflicts_with = "all")]
    pub min: bool,
    /// One value per start vertex.
    #[arg(long)]
    pub all: bool,
    /// Classical value on the torus (N = 1, m = 1).
    #[arg(long)]
    pub torus: bool,
}

#[derive(Args, Debug)]
pub struct GapsArgs {
    #[arg(long, default_value_t = 3)]
    pub k_max: usize,
    #[arg(long, default_value_t = 0)]
    pub n_max: usize,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    /// Largest sum of period entries (odd periods before doubling).
    #[arg(long, default_value_t = 12)]
    pub max_sum: u64,
    /// Largest entry.
    #[arg(long, default_value_t = 6)]
    pub max_entry: u64,
    /// Drop values above this surd; defaults to eta3.
    #[arg(long, conflicts_with = "no_ceiling")]
    pub ceiling: Option<String>,
    #[arg(long)]
    pub no_ceiling: bool,
}

#[derive(Args, Debug)]
pub struct LsigmaArgs {
    /// Word such as `ab^3` or `(ab)^2a`.
    pub word: String,
    /// Evaluate the limit word `b^inf w b^inf` instead of `w^inf`.
    #[arg(long)]
    pub limit: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Group (orbit, constants, tables, minimum, lexicographic, gaps, oracle,
    /// subshift) or check-name prefix such as `phi1`.
    #[arg(long)]
    pub item: Option<String>,
    #[arg(long, default_value_t = 40)]
    pub oracle_depth: usize,
}

/// Error carrying its exit code.
struct Exit(i32, String);

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        Exit(1, e.to_string())
    }
}

type CmdResult = std::result::Result<i32, Exit>;

fn io(e: std::io::Error) -> Exit {
    Exit(1, e.to_string())
}

/// Applies `ORIGAMI_SPECTRUM_THREADS` to the global rayon pool, once.
fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // already initialised pools keep their size
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    configure_threads();
    let res = match &cli.command {
        Command::Orbit(a) => cmd_orbit(&cli, a, out),
        Command::Lagrange(a) => cmd_lagrange(&cli, a, out),
        Command::Gaps(a) => cmd_gaps(&cli, a, out),
        Command::Scan(a) => cmd_scan(&cli, a, out, err),
        Command::Lsigma(a) => cmd_lsigma(&cli, a, out),
        Command::Verify(a) => cmd_verify(&cli, a, out),
    };
    match res {
        Ok(code) => code,
        Err(Exit(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn format_or(cli: &Cli, default: Format, allowed: &[Format]) -> std::result::Result<Format, Exit> {
    let f = cli.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Exit(
            1,
            format!("format {f:?} is not supported by this command").to_lowercase(),
        ))
    }
}

fn print_json(out: &mut dyn Write, v: &Value) -> std::result::Result<(), Exit> {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(v).expect("serializable")
    )
    .map_err(io)
}

fn dec(x: &QuadraticSurd, digits: u32) -> String {
    x.to_decimal_with_bound(digits)
}

fn read_seed(path: &PathBuf) -> Result<Origami> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    match serde_json::from_str::<Origami>(&text) {
        Ok(o) => Ok(o),
        Err(_) => text.trim().parse(),
    }
}

fn cmd_orbit(cli: &Cli, a: &OrbitArgs, out: &mut dyn Write) -> CmdResult {
    let default = if a.dot {
        Format::Dot
    } else if a.json {
        Format::Json
    } else {
        Format::Text
    };
    let fmt = format_or(cli, default, &[Format::Text, Format::Json, Format::Dot])?;
    if a.all_orbits {
        let sizes: Vec<usize> = h2_seven_square_orbits()?
            .iter()
            .map(OrbitGraph::len)
            .collect();
        match fmt {
            Format::Json => print_json(out, &json!({ "orbit_sizes": sizes }))?,
            _ => writeln!(out, "orbit sizes: {sizes:?}").map_err(io)?,
        }
        return Ok(if sizes == [54, 36] { 0 } else { 2 });
    }
    let seeded;
    let g: &OrbitGraph = match &a.seed_file {
        Some(p) => {
            seeded = OrbitGraph::enumerate(&read_seed(p)?)?;
            &seeded
        }
        None => b7()?,
    };
    match fmt {
        Format::Dot => write!(out, "{}", g.to_dot()).map_err(io)?,
        Format::Json => print_json(out, &g.to_json())?,
        _ => {
            writeln!(out, "{} vertices / {} cusps", g.len(), g.cusps().len()).map_err(io)?;
            writeln!(out, "cusp widths: {:?}", g.cusp_widths()).map_err(io)?;
            for (c, cusp) in g.cusps().iter().enumerate() {
                let ms: Vec<u32> = cusp.members.iter().map(|&x| g.multiplicity(x)).collect();
                writeln!(
                    out,
                    "cusp {c}: width {} members {:?} m {:?}",
                    cusp.width(),
                    cusp.members,
                    ms
                )
                .map_err(io)?;
            }
        }
    }
    if a.seed_file.is_some() {
        return Ok(0);
    }
    let m2: Vec<usize> = (0..g.len()).filter(|&x| g.multiplicity(x) == 2).collect();
    let one_cusp = m2.windows(2).all(|w| g.cusp_of(w[0]) == g.cusp_of(w[1]));
    let mut diff = Vec::new();
    if g.len() != 36 {
        diff.push(format!("vertices: expected 36, got {}", g.len()));
    }
    if g.cusp_widths() != [7, 7, 7, 5, 3, 3, 3, 1] {
        diff.push(format!(
            "widths: expected [7, 7, 7, 5, 3, 3, 3, 1], got {:?}",
            g.cusp_widths()
        ));
    }
    if m2.len() != 7 || !one_cusp {
        diff.push(format!("m=2 vertices: expected 7 in one cusp, got {m2:?}"));
    }
    if diff.is_empty() {
        Ok(0)
    } else {
        Err(Exit(2, diff.join("; ")))
    }
}

fn parse_alpha(s: &str) -> Result<CFExpansion> {
    if s.contains('[') {
        return s.parse();
    }
    cf_of_surd(&s.parse::<QuadraticSurd>()?)
}

fn value_json(alpha: &CFExpansion, start: usize, v: &LagrangeValue, digits: u32) -> Value {
    let witnesses: Vec<Value> = v
        .witness_list()
        .map(|c| {
            json!({
                "n": c.n,
                "i": c.i,
                "vertex": c.vertex,
                "D": c.d.to_string(),
                "m2": c.m2,
            })
        })
        .collect();
    json!({
        "alpha": alpha.to_string(),
        "start_id": start,
        "value_surd": v.value.to_string(),
        "value_decimal": dec(&v.value, digits),
        "witnesses": witnesses,
    })
}

fn cmd_lagrange(cli: &Cli, a: &LagrangeArgs, out: &mut dyn Write) -> CmdResult {
    let fmt = format_or(cli, Format::Text, &[Format::Text, Format::Json])?;
    let mut alpha = parse_alpha(&a.alpha)?;
    if alpha.is_rational() {
        return Err(Exit(1, "alpha must be irrational".into()));
    }
    let torus;
    let g: &OrbitGraph = if a.torus {
        // the torus is invariant under T, so only the fractional part matters
        alpha = CFExpansion::new(0, alpha.preperiod().to_vec(), alpha.period().to_vec())?;
        torus = OrbitGraph::torus();
        &torus
    } else {
        b7()?
    };
    let starts: Vec<usize> = match a.start {
        Some(s) if s >= g.len() => return Err(Error::UnknownVertex(s).into()),
        Some(s) => vec![s],
        None => (0..g.len()).collect(),
    };
    let mut values = Vec::new();
    for &s in &starts {
        values.push((s, lagrange(g, s, &alpha)?));
    }
    if a.torus {
        // cross-check against the classical formula
        let c = classical_lagrange(&alpha)?;
        if c != values[0].1.value {
            return Err(Exit(
                2,
                "torus value differs from the classical formula".into(),
            ));
        }
    }
    if !a.all && a.start.is_none() {
        let best = values
            .iter()
            .enumerate()
            .min_by(|x, y| x.1 .1.value.cmp(&y.1 .1.value).then(x.0.cmp(&y.0)))
            .map(|(k, _)| k)
            .expect("nonempty");
        values = vec![values.swap_remove(best)];
    }
    match fmt {
        Format::Json => {
            let items: Vec<Value> = values
                .iter()
                .map(|(s, v)| value_json(&alpha, *s, v, cli.digits))
                .collect();
            let doc = if a.all {
                Value::Array(items)
            } else {
                items.into_iter().next().expect("one")
            };
            print_json(out, &doc)?;
        }
        _ => {
            for (s, v) in &values {
                writeln!(
                    out,
                    "start {s}: {} = {}",
                    v.value,
                    dec(&v.value, cli.digits)
                )
                .map_err(io)?;
                for c in v.witness_list() {
                    writeln!(
                        out,
                        "  witness n={} i={} vertex={} D={} m^2={}",
                        c.n,
                        c.i,
                        c.vertex,
                        dec(&c.d, cli.digits),
                        c.m2
                    )
                    .map_err(io)?;
                }
            }
        }
    }
    Ok(0)
}

fn gap_row(g: &Gap, digits: u32) -> Value {
    json!({
        "k": g.k,
        "n": g.n,
        "left_surd": g.left.to_string(),
        "right_surd": g.right.to_string(),
        "left_dec": dec(&g.left, digits),
        "right_dec": dec(&g.right, digits),
    })
}

fn cmd_gaps(cli: &Cli, a: &GapsArgs, out: &mut dyn Write) -> CmdResult {
    let fmt = format_or(cli, Format::Csv, &[Format::Csv, Format::Json, Format::Text])?;
    let mut rows: Vec<Gap> = (0..=a.k_max).map(gap_first).collect::<Result<_>>()?;
    let mut problems = Vec::new();
    for (k, w) in rows.windows(2).enumerate() {
        if !(w[0].left < w[0].right && w[0].right < w[1].left && w[1].left < w[1].right) {
            problems.push(format!("G_{k} and G_{} are not ordered", k + 1));
        }
    }
    if a.n_max > 0 {
        for k in 1..=a.k_max {
            let ik = interval_first(k)?;
            let second: Vec<Gap> = (1..=a.n_max)
                .map(|n| gap_second(k, n))
                .collect::<Result<_>>()?;
            for (n, g) in second.iter().enumerate() {
                if !ik.contains_gap(g) {
                    problems.push(format!("G_({k},{}) is not inside I_{k}", n + 1));
                }
            }
            for (n, w) in second.windows(2).enumerate() {
                if w[1].right >= w[0].left {
                    problems.push(format!("G_({k},{}) is not below G_({k},{})", n + 2, n + 1));
                }
            }
            rows.extend(second);
        }
    }
    match fmt {
        Format::Json => print_json(
            out,
            &Value::Array(rows.iter().map(|g| gap_row(g, cli.digits)).collect()),
        )?,
        Format::Csv => {
            writeln!(out, "k,n,left_surd,right_surd,left_dec,right_dec").map_err(io)?;
            for g in &rows {
                let n = g.n.map(|n| n.to_string()).unwrap_or_default();
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    g.k,
                    n,
                    g.left,
                    g.right,
                    dec(&g.left, cli.digits),
                    dec(&g.right, cli.digits)
                )
                .map_err(io)?;
            }
        }
        _ => {
            for g in &rows {
                let name = match g.n {
                    Some(n) => format!("G_({},{n})", g.k),
                    None => format!("G_{}", g.k),
                };
                writeln!(
                    out,
                    "{name}: ({}, {})",
                    dec(&g.left, cli.digits),
                    dec(&g.right, cli.digits)
                )
                .map_err(io)?;
            }
        }
    }
    if problems.is_empty() {
        Ok(0)
    } else {
        Err(Exit(2, problems.join("; ")))
    }
}

fn cmd_scan(cli: &Cli, a: &ScanArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let fmt = format_or(
        cli,
        Format::Text,
        &[Format::Text, Format::Csv, Format::Json],
    )?;
    if a.max_entry == 0 || a.max_sum == 0 {
        return Err(Exit(1, "limits must be positive".into()));
    }
    let mut cfg = ScanConfig::new(a.max_sum);
    cfg.max_entry = a.max_entry;
    if a.no_ceiling {
        cfg.ceiling = None;
    } else if let Some(c) = &a.ceiling {
        cfg.ceiling = Some(c.parse()?);
    }
    for w in cfg.warnings() {
        writeln!(err, "warning: {w}").map_err(io)?;
    }
    let found = scan_even_loops(b7()?, &cfg);
    let period = |p: &[u64]| p.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    match fmt {
        Format::Json => {
            let items: Vec<Value> = found
                .iter()
                .map(|e| {
                    json!({
                        "vertex": e.vertex,
                        "period": e.period,
                        "value_surd": e.value.to_string(),
                        "value_decimal": dec(&e.value, cli.digits),
                    })
                })
                .collect();
            print_json(out, &Value::Array(items))?;
        }
        Format::Csv => {
            writeln!(out, "vertex,period,value_surd,value_dec").map_err(io)?;
            for e in &found {
                writeln!(
                    out,
                    "{},{},{},{}",
                    e.vertex,
                    period(&e.period),
                    e.value,
                    dec(&e.value, cli.digits)
                )
                .map_err(io)?;
            }
        }
        _ => {
            for e in &found {
                writeln!(
                    out,
                    "{}  [{}] at {}",
                    dec(&e.value, cli.digits),
                    period(&e.period),
                    e.vertex
                )
                .map_err(io)?;
            }
        }
    }
    Ok(0)
}

fn cmd_lsigma(cli: &Cli, a: &LsigmaArgs, out: &mut dyn Write) -> CmdResult {
    let fmt = format_or(cli, Format::Text, &[Format::Text, Format::Json])?;
    let w: ABWord = a.word.parse()?;
    let value = if a.limit {
        l_sigma_limit(&LimitWordSpec::in_b(w.clone()))?
    } else {
        l_sigma_periodic(&w)?
    };
    let k = kappa(&w).ok();
    let n = if a.limit { None } else { nu(&w).ok().flatten() };
    match fmt {
        Format::Json => print_json(
            out,
            &json!({
                "word": w.to_string(),
                "limit": a.limit,
                "value_surd": value.to_string(),
                "value_decimal": dec(&value, cli.digits),
                "kappa": k,
                "nu": n,
            }),
        )?,
        _ => {
            let shape = if a.limit {
                format!("b^inf {w} b^inf")
            } else {
                format!("({w})^inf")
            };
            writeln!(
                out,
                "L^sigma({shape}) = {} = {}",
                value,
                dec(&value, cli.digits)
            )
            .map_err(io)?;
            if let Some(k) = k {
                writeln!(out, "kappa = {k}").map_err(io)?;
            }
            if let Some(n) = n {
                writeln!(out, "nu = {n}").map_err(io)?;
            }
        }
    }
    Ok(0)
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let fmt = format_or(cli, Format::Text, &[Format::Text, Format::Json])?;
    let checks = verify::run(a.item.as_deref(), a.oracle_depth)?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    match fmt {
        Format::Json => {
            let items: Vec<Value> = checks
                .iter()
                .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
                .collect();
            print_json(out, &json!({"checks": items, "failed": failed}))?;
        }
        _ => {
            for c in &checks {
                writeln!(out, "{c}").map_err(io)?;
            }
            writeln!(out, "{} checks, {failed} failed", checks.len()).map_err(io)?;
        }
    }
    Ok(if failed == 0 { 0 } else { 2 })
}
