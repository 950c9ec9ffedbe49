//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed verification or stability check, 2 parse
//! error, 3 domain error (not a cubic, degenerate input).

use std::collections::BTreeSet;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;
use crate::group::{check_autdeg_table, sample_affine_with};
use crate::invariants::{check_invariant_table, find_linear_factor, invariant_report, InvariantReport};
use crate::json::{classification_to_json, invariants_to_json, SCHEMA_VERSION};
use crate::normalize::{classify_with, ClassificationResult, Tolerances};
use crate::parse::{parse_map, parse_poly, ParseError};
use crate::poly::Poly2;
use crate::roots::complex_roots_real;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONTRACT: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cubic-canon", version, about = "Affine normal forms of real plane cubics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: CliConfig,
}

/// Options shared by all commands.
#[derive(Debug, Clone, Args)]
pub struct CliConfig {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Residual bound for witnesses.
    #[arg(long, global = true, env = "CUBIC_CANON_TOL", value_parser = positive)]
    pub tol: Option<f64>,
    /// Relative coefficient chop.
    #[arg(long, global = true, value_parser = positive)]
    pub chop_tol: Option<f64>,
    /// Tolerance of the case guards in the normal-form tables.
    #[arg(long, global = true, value_parser = positive)]
    pub case_tol: Option<f64>,
    /// Seed for random sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

impl CliConfig {
    pub fn tolerances(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            chop: self.chop_tol.unwrap_or(d.chop),
            case: self.case_tol.unwrap_or(d.case),
            residual: self.tol.unwrap_or(d.residual),
        }
    }
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduce a cubic to its normal form.
    Classify {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Singular and reducible levels.
    Invariants {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Print this many curve points per singular level.
        #[arg(long, value_name = "N")]
        emit_points: Option<usize>,
    },
    /// Check `f(map) = scale * g`.
    Verify {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        map: String,
        #[arg(allow_hyphen_values = true)]
        scale: f64,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Find a line on which the polynomial vanishes.
    Factor {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Classify random affine images and report the distinct results.
    OrbitSample {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Coefficient range of the sampled maps.
        #[arg(long, default_value_t = 3.0, value_parser = positive)]
        range: f64,
    },
    /// Run the built-in table checks.
    CheckTables,
}

/// Rounds to 12 significant digits.
pub fn round12(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}

/// A number with 12 significant digits, in exponent form when very small
/// or very large.
pub fn fmt_num(v: f64) -> String {
    let r = round12(v);
    if r != 0.0 && (r.abs() < 1e-4 || r.abs() >= 1e15) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn fmt_list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| fmt_num(*x)).collect();
    format!("[{}]", items.join(", "))
}

fn fmt_complex(z: Complex64) -> String {
    let (re, im) = (fmt_num(z.re), fmt_num(z.im.abs()));
    if z.im == 0.0 {
        re
    } else if z.im < 0.0 {
        format!("{re} - {im}i")
    } else {
        format!("{re} + {im}i")
    }
}

fn round_poly(p: &Poly2) -> Poly2 {
    Poly2::from_terms(p.terms().map(|((i, j), c)| (i, j, round12(c))))
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn out(&mut self, line: impl AsRef<str>) {
        let _ = writeln!(self.out, "{}", line.as_ref());
    }

    fn err(&mut self, line: impl AsRef<str>) {
        let _ = writeln!(self.err, "{}", line.as_ref());
    }

    fn parse(&mut self, what: &str, text: &str, e: &ParseError) -> i32 {
        self.err(format!("error: cannot parse {what} {text:?}: {e}"));
        EXIT_PARSE
    }

    fn domain(&mut self, e: &Error) -> i32 {
        self.err(format!("error: {e}"));
        match e {
            Error::ResidualTooLarge { .. } => EXIT_CONTRACT,
            _ => EXIT_DOMAIN,
        }
    }
}

/// Parses arguments (without the program name) and runs the command,
/// writing to the given streams. Returns the exit code.
pub fn run_with<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("cubic-canon")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let mut io = Io { out, err };
    dispatch(&cli, &mut io)
}

/// Runs with the process arguments and standard streams.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os().skip(1), &mut stdout.lock(), &mut stderr.lock())
}

fn dispatch(cli: &Cli, io: &mut Io) -> i32 {
    let cfg = &cli.config;
    match &cli.command {
        Command::Classify { expr } => cmd_classify(expr, cfg, io),
        Command::Invariants { expr, emit_points } => cmd_invariants(expr, *emit_points, cfg, io),
        Command::Verify { f, map, scale, g } => cmd_verify(f, map, *scale, g, cfg, io),
        Command::Factor { expr } => cmd_factor(expr, cfg, io),
        Command::OrbitSample { expr, count, range } => cmd_orbit_sample(expr, *count, *range, cfg, io),
        Command::CheckTables => cmd_check_tables(cfg, io),
    }
}

fn print_classification(r: &ClassificationResult, io: &mut Io) {
    io.out(format!("family: {}", r.family));
    let mut params = Vec::new();
    for (name, v) in [("H", r.params.h), ("I", r.params.i), ("J", r.params.j)] {
        if let Some(v) = v {
            params.push(format!("{name} = {}", fmt_num(v)));
        }
    }
    if params.is_empty() {
        io.out("params: none");
    } else {
        io.out(format!("params: {}", params.join(", ")));
    }
    io.out(format!("canonical: {}", round_poly(&r.canonical)));
    let w = &r.witness;
    let rounded = crate::group::AffineMap::new(
        round12(w.a),
        round12(w.b),
        round12(w.r),
        round12(w.c),
        round12(w.d),
        round12(w.s),
    )
    .unwrap_or(*w);
    io.out(format!("map: {rounded}"));
    io.out(format!("scale: {}", fmt_num(r.scale)));
    io.out(format!("residual: {}", fmt_num(r.residual)));
}

fn cmd_classify(expr: &str, cfg: &CliConfig, io: &mut Io) -> i32 {
    let f = match parse_poly(expr) {
        Ok(f) => f,
        Err(e) => return io.parse("polynomial", expr, &e),
    };
    match classify_with(&f, &cfg.tolerances()) {
        Ok(r) => {
            if cfg.json {
                io.out(classification_to_json(&r));
            } else {
                print_classification(&r, io);
            }
            EXIT_OK
        }
        Err(e) => io.domain(&e),
    }
}

/// Up to `n` real points of `f = level`, found on evenly spaced vertical
/// lines (horizontal ones when `f` does not involve `y`).
fn curve_points(f: &Poly2, level: f64, n: usize) -> Vec<(f64, f64)> {
    let g = f.sub(&Poly2::constant(level));
    let vertical = g.degree_in_y().unwrap_or(0) > 0;
    let mut pts = Vec::new();
    if n == 0 {
        return pts;
    }
    let span = 3.0;
    let mut steps = n.max(2);
    loop {
        pts.clear();
        for k in 0..steps {
            let t = -span + 2.0 * span * k as f64 / (steps - 1) as f64;
            let mut coeffs = [0.0; 4];
            for ((i, j), c) in g.terms() {
                let (along, across) = if vertical { (i, j) } else { (j, i) };
                coeffs[across as usize] += c * t.powi(along as i32);
            }
            for z in complex_roots_real(&coeffs) {
                if z.im.abs() <= 1e-9 * (1.0 + z.re.abs()) {
                    pts.push(if vertical { (t, z.re) } else { (z.re, t) });
                }
            }
        }
        if pts.len() >= n || steps >= 64 * n.max(2) {
            break;
        }
        steps *= 2;
    }
    if pts.len() > n {
        let m = pts.len();
        pts = (0..n).map(|k| pts[k * m / n]).collect();
    }
    pts
}

#[derive(Serialize)]
struct LevelPoints {
    level: f64,
    points: Vec<[f64; 2]>,
}

fn cmd_invariants(expr: &str, emit: Option<usize>, cfg: &CliConfig, io: &mut Io) -> i32 {
    let f = match parse_poly(expr) {
        Ok(f) => f,
        Err(e) => return io.parse("polynomial", expr, &e),
    };
    let report = match invariant_report(&f) {
        Ok(r) => r,
        Err(e) => return io.domain(&e),
    };
    if cfg.json {
        io.out(invariants_to_json(&report));
    } else {
        print_report(&report, io);
    }
    if let Some(n) = emit {
        let levels: BTreeSet<u64> = report
            .cusp
            .iter()
            .chain(&report.isol)
            .chain(&report.node)
            .chain(&report.other_singular)
            .map(|v| v.to_bits())
            .collect();
        let mut levels: Vec<f64> = levels.into_iter().map(f64::from_bits).collect();
        levels.sort_by(f64::total_cmp);
        for level in levels {
            let pts = curve_points(&f, level, n);
            if cfg.json {
                let rec = LevelPoints {
                    level,
                    points: pts.iter().map(|p| [p.0, p.1]).collect(),
                };
                io.out(serde_json::to_string(&rec).expect("points serialize"));
            } else {
                io.out(format!("points at level {}:", fmt_num(level)));
                for (x, y) in pts {
                    io.out(format!("  {} {}", fmt_num(x), fmt_num(y)));
                }
            }
        }
    }
    EXIT_OK
}

fn print_report(r: &InvariantReport, io: &mut Io) {
    io.out(format!("cusp: {}", fmt_list(&r.cusp)));
    io.out(format!("isol: {}", fmt_list(&r.isol)));
    io.out(format!("node: {}", fmt_list(&r.node)));
    io.out(format!("red: {}", fmt_list(&r.red)));
    let sing: Vec<String> = r.sing_complex.iter().map(|z| fmt_complex(*z)).collect();
    io.out(format!("sing_complex: [{}]", sing.join(", ")));
    io.out(format!("nonisolated_singular_locus: {}", r.nonisolated_singular_locus));
    io.out(format!("red_continuum: {}", r.red_continuum));
    if !r.other_singular.is_empty() {
        io.out(format!("other_singular: {}", fmt_list(&r.other_singular)));
    }
}

fn cmd_verify(f: &str, map: &str, scale: f64, g: &str, cfg: &CliConfig, io: &mut Io) -> i32 {
    let fp = match parse_poly(f) {
        Ok(p) => p,
        Err(e) => return io.parse("polynomial", f, &e),
    };
    let m = match parse_map(map) {
        Ok(m) => m,
        Err(e) => return io.parse("map", map, &e),
    };
    let gp = match parse_poly(g) {
        Ok(p) => p,
        Err(e) => return io.parse("polynomial", g, &e),
    };
    let image = fp.compose_with_chop(&m, 0.0);
    let norm = fp.max_abs();
    let diff = image.max_abs_diff(&gp.scale(scale));
    let residual = if norm > 0.0 { diff / norm } else { diff };
    let bound = cfg.tolerances().residual;
    let ok = residual <= bound;
    if cfg.json {
        #[derive(Serialize)]
        struct Rec {
            schema_version: u32,
            residual: f64,
            bound: f64,
            ok: bool,
        }
        let rec = Rec {
            schema_version: SCHEMA_VERSION,
            residual,
            bound,
            ok,
        };
        io.out(serde_json::to_string(&rec).expect("record serializes"));
    } else {
        io.out(format!("residual: {}", fmt_num(residual)));
        io.out(if ok { "ok" } else { "mismatch" });
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_CONTRACT
    }
}

fn cmd_factor(expr: &str, cfg: &CliConfig, io: &mut Io) -> i32 {
    let f = match parse_poly(expr) {
        Ok(f) => f,
        Err(e) => return io.parse("polynomial", expr, &e),
    };
    if f.degree() != Some(3) {
        return io.domain(&Error::NotCubic(f.degree()));
    }
    let line = find_linear_factor(&f);
    if cfg.json {
        #[derive(Serialize)]
        struct Rec {
            schema_version: u32,
            line: Option<[f64; 3]>,
        }
        let rec = Rec {
            schema_version: SCHEMA_VERSION,
            line: line.map(|l| [l.a, l.b, l.c]),
        };
        io.out(serde_json::to_string(&rec).expect("record serializes"));
    } else {
        match line {
            Some(l) => {
                let rounded = crate::invariants::Line {
                    a: round12(l.a),
                    b: round12(l.b),
                    c: round12(l.c),
                };
                io.out(format!("{rounded}"));
            }
            None => io.out("none"),
        }
    }
    EXIT_OK
}

/// Distinct (family, params) outcomes, merging parameters within `1e-6`.
#[derive(Serialize)]
struct Outcome {
    family: String,
    params: crate::family::Params,
    count: usize,
}

fn cmd_orbit_sample(expr: &str, count: usize, range: f64, cfg: &CliConfig, io: &mut Io) -> i32 {
    let f = match parse_poly(expr) {
        Ok(f) => f,
        Err(e) => return io.parse("polynomial", expr, &e),
    };
    let tol = cfg.tolerances();
    let base = match classify_with(&f, &tol) {
        Ok(r) => r,
        Err(e) => return io.domain(&e),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut outcomes: Vec<Outcome> = Vec::new();
    let mut errors = 0usize;
    let mut warnings = Vec::new();
    for trial in 0..count {
        let map = match sample_affine_with(&mut rng, range) {
            Ok(m) => m,
            Err(e) => return io.domain(&e),
        };
        let image = map.apply_with_chop(&f, 0.0);
        match classify_with(&image, &tol) {
            Ok(r) => {
                for (table, case, guard) in r.trace.ambiguous(tol.case) {
                    warnings.push(format!("trial {trial}: near-boundary guard {guard:e} in {table} ({case})"));
                }
                match outcomes
                    .iter_mut()
                    .find(|o| o.family == r.family.name() && o.params.max_abs_diff(&r.params) <= 1e-6)
                {
                    Some(o) => o.count += 1,
                    None => outcomes.push(Outcome {
                        family: r.family.name().to_string(),
                        params: r.params,
                        count: 1,
                    }),
                }
            }
            Err(e) => {
                errors += 1;
                warnings.push(format!("trial {trial}: {e}"));
            }
        }
    }
    let stable = errors == 0
        && outcomes.len() <= 1
        && outcomes
            .iter()
            .all(|o| o.family == base.family.name() && o.params.max_abs_diff(&base.params) <= 1e-6);
    if cfg.json {
        #[derive(Serialize)]
        struct Rec<'a> {
            schema_version: u32,
            count: usize,
            seed: u64,
            expected: String,
            outcomes: &'a [Outcome],
            errors: usize,
            stable: bool,
        }
        let rec = Rec {
            schema_version: SCHEMA_VERSION,
            count,
            seed: cfg.seed,
            expected: base.family.name().to_string(),
            outcomes: &outcomes,
            errors,
            stable,
        };
        io.out(serde_json::to_string(&rec).expect("record serializes"));
    } else {
        io.out(format!("expected: {} ({})", base.family, round_poly(&base.canonical)));
        for o in &outcomes {
            let fam = crate::family::FamilyId::from_name(&o.family).expect("known family");
            io.out(format!("{} x {} ({})", o.count, o.family, round_poly(&fam.polynomial(&o.params))));
        }
        if errors > 0 {
            io.out(format!("{errors} trials failed"));
        }
        io.out(if stable { "stable" } else { "unstable" });
    }
    for w in warnings {
        io.err(format!("warning: {w}"));
    }
    if stable {
        EXIT_OK
    } else {
        EXIT_CONTRACT
    }
}

fn cmd_check_tables(cfg: &CliConfig, io: &mut Io) -> i32 {
    let autdeg = check_autdeg_table();
    let inv = check_invariant_table();
    let all = autdeg.iter().all(|r| r.pass) && inv.iter().all(|c| c.pass);
    if cfg.json {
        #[derive(Serialize)]
        struct Row {
            table: &'static str,
            poly: String,
            pass: bool,
        }
        let rows: Vec<Row> = autdeg
            .iter()
            .map(|r| Row {
                table: "autdeg",
                poly: r.source.to_string(),
                pass: r.pass,
            })
            .chain(inv.iter().map(|c| Row {
                table: "invariants",
                poly: c.row.poly.to_string(),
                pass: c.pass,
            }))
            .collect();
        io.out(serde_json::to_string(&rows).expect("rows serialize"));
    } else {
        for r in &autdeg {
            let status = if r.pass { "ok" } else { "FAIL" };
            io.out(format!("autdeg {status}: {} under <{}> = {}", r.source, r.map, r.image));
        }
        for c in &inv {
            let status = if c.pass { "ok" } else { "FAIL" };
            io.out(format!("invariants {status}: {}", c.row.poly));
        }
    }
    if all {
        EXIT_OK
    } else {
        EXIT_CONTRACT
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(args.iter().copied(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn rounding() {
        assert_eq!(round12(0.38490017945975050), 0.38490017946);
        assert_eq!(round12(0.0), 0.0);
        assert_eq!(round12(-1.0), -1.0);
    }

    #[test]
    fn classify_flips_sign() {
        let (code, out, _) = run_capture(&["classify", "x^3 + y^2"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("family: X3_M_Y2\n"), "{out}");
        assert!(out.contains("scale: -1\n"), "{out}");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_capture(&["classify", "x^2 + y"]).0, EXIT_DOMAIN);
        assert_eq!(run_capture(&["classify", "x^"]).0, EXIT_PARSE);
        assert_eq!(run_capture(&["verify", "x^3", "x ; y", "1", "x^3+1"]).0, EXIT_CONTRACT);
        assert_eq!(run_capture(&["verify", "x^3-y", "y ; y^3-x", "1", "x"]).0, EXIT_OK);
        assert_eq!(run_capture(&["bogus"]).0, EXIT_PARSE);
    }

    #[test]
    fn curve_points_lie_on_level() {
        let f = parse_poly("x^3 - y^2 - x").unwrap();
        let pts = curve_points(&f, 0.5, 10);
        assert_eq!(pts.len(), 10);
        for (x, y) in pts {
            assert!((f.evaluate(x, y) - 0.5).abs() < 1e-9);
        }
        let g = parse_poly("x^3 - x").unwrap();
        for (x, y) in curve_points(&g, 0.0, 6) {
            assert!(g.evaluate(x, y).abs() < 1e-9);
        }
    }
}
