//! Batch command-line front end: classification, auxiliary polynomials,
//! sieve profiles, exponential sums, difference-set thresholds, dimension
//! lowering, and the self-check suite, with JSON/CSV emission and
//! reproducible run manifests.

use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use intersieve::classify::{
    deligne_certify, dimension_lower, gradient_locus_count, rank_estimate, strongly_deligne_scan,
    DimensionLowerOutcome, LowerMode, Status,
};
use intersieve::diffset::{
    bounds_report, generate_image, inheritance_check, scaling_report, solve_exact, solve_greedy,
    verify_witness, ForbiddenSet, SolverKind,
};
use intersieve::error::Error;
use intersieve::expsum::{
    complete_sum_mod_p, major_arc_compare, minor_arc_report, oscillatory_integral, paper_schedule,
    rational_approximation, sieved_local_sum, sieved_weyl_sum,
};
use intersieve::padic::{
    build_auxiliary, find_integer_roots, intersectivity_scan, primes_up_to, select_root,
    AuxiliaryPolynomial, IntersectivityVerdict, RootSelection,
};
use intersieve::parse::parse_polynomial;
use intersieve::poly::IntPolynomial;
use intersieve::report;
use intersieve::sieve::{sieve_count_check, SieveProfile};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "intersieve", version, about = "Polynomial difference-set machinery")]
struct Cli {
    /// Seed for all randomized procedures.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Point budget for exhaustive scans.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    max_points: u64,
    /// Node budget for the exact difference-set solver and depth searches.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    max_nodes: u64,
    /// Cap on the gradient vanishing order gamma(p).
    #[arg(long, global = true, default_value_t = 16)]
    max_gamma: u32,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Write a reproducibility manifest here.
    #[arg(long, global = true)]
    manifest: Option<String>,
    /// Exit with code 2 on Refuted or witness outcomes.
    #[arg(long, global = true, default_value_t = false)]
    assert: bool,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Paper parameter schedule: eta fixes Q = eta^-2, Y = eta^-2k,
    /// gamma = eta^-2k / N (pair with --n-ambient).
    #[arg(long = "paper-schedule", global = true)]
    paper_schedule_eta: Option<f64>,
    /// Ambient interval size N for the schedule preset.
    #[arg(long, global = true)]
    n_ambient: Option<f64>,
    /// Exponent c0 in Z = N^c0 for the schedule preset.
    #[arg(long, global = true, default_value_t = 0.1)]
    c0: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct PolyArg {
    /// Polynomial in the text grammar (x1..xl with x, y, z aliases).
    #[arg(long)]
    poly: String,
    /// Ambient variable count when larger than the largest index used.
    #[arg(long)]
    vars: Option<usize>,
}

#[derive(Args)]
struct SelectionArgs {
    /// Integer root coordinates, comma separated.
    #[arg(long)]
    root: Option<String>,
    /// Root selection JSON file.
    #[arg(long)]
    selection: Option<String>,
}

#[derive(Args)]
struct ForbiddenArgs {
    /// Forbidden positive differences, comma separated.
    #[arg(long = "X", value_name = "LIST")]
    x: Option<String>,
    /// File with one positive integer per line.
    #[arg(long = "x-file")]
    x_file: Option<String>,
}

impl ForbiddenArgs {
    fn load(&self) -> Result<ForbiddenSet, Error> {
        if let Some(list) = &self.x {
            let vals = parse_u64_list(list)?;
            return Ok(ForbiddenSet::from_values(vals.into_iter().map(|v| v as i64)));
        }
        if let Some(path) = &self.x_file {
            let text = std::fs::read_to_string(path)?;
            let mut vals = Vec::new();
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                let v: i64 = line.parse().map_err(|_| {
                    Error::InvalidParameter(format!(
                        "line {}: expected one positive integer per line, got '{line}'",
                        lineno + 1
                    ))
                })?;
                vals.push(v);
            }
            return Ok(ForbiddenSet::from_values(vals));
        }
        Err(Error::InvalidParameter(
            "one of --X or --x-file is required".into(),
        ))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Deligne certification, rank, intersectivity, strongly Deligne scan.
    Classify {
        #[command(flatten)]
        poly: PolyArg,
        #[command(flatten)]
        selection: SelectionArgs,
        #[arg(long, default_value_t = 60)]
        d_bound: u64,
        #[arg(long, default_value_t = 100)]
        prime_bound: u64,
    },
    /// Auxiliary polynomials h_d for a list of d values.
    Aux {
        #[command(flatten)]
        poly: PolyArg,
        #[command(flatten)]
        selection: SelectionArgs,
        /// Comma-separated d values, or ranges lo..hi.
        #[arg(long)]
        d: String,
    },
    /// Sieve profile and optional box count check.
    Sieve {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        y: u64,
        /// Per-axis box bounds, comma separated.
        #[arg(long = "box", value_name = "BOX")]
        box_bounds: Option<String>,
    },
    /// Exponential sums and oscillatory integrals.
    Expsum {
        #[command(subcommand)]
        which: ExpsumCommand,
    },
    /// Difference-set thresholds.
    Diffset {
        #[command(subcommand)]
        which: DiffsetCommand,
    },
    /// Constructive dimension lowering.
    LowerDim {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long, value_enum, default_value_t = ModeArg::IntegerRoot)]
        mode: ModeArg,
        #[arg(long, default_value_t = 3)]
        height: i64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
    /// Full invariant self-check suite.
    Check {},
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    IntegerRoot,
    General,
}

#[derive(Subcommand)]
enum ExpsumCommand {
    /// Complete sum over F_p^l with the Deligne bound when it applies.
    Complete {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        p: u64,
    },
    /// Sieved local sum at a/q with the explicit local-cancellation bound.
    Local {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        y: u64,
    },
    /// Sieved Weyl sum over a box with arc classification of alpha.
    Weyl {
        #[command(flatten)]
        poly: PolyArg,
        #[command(flatten)]
        selection: SelectionArgs,
        #[arg(long, default_value_t = 1)]
        d: u64,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        y: Option<u64>,
        #[arg(long, default_value_t = 100)]
        q_bound: u64,
    },
    /// Sieved Weyl sum against the major-arc main term.
    MajorCompare {
        #[command(flatten)]
        poly: PolyArg,
        #[command(flatten)]
        selection: SelectionArgs,
        #[arg(long, default_value_t = 1)]
        d: u64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value = "0")]
        beta: String,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        y: u64,
    },
    /// Minor-arc bound evaluation (report only; constants set to 1).
    MinorReport {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        x: u64,
        #[arg(long)]
        y: Option<u64>,
        #[arg(long)]
        z: Option<u64>,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: u64,
    },
    /// Oscillatory-integral decay fit over a geometric beta grid.
    VdcFit {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long, default_value_t = 1.0)]
        x: f64,
        #[arg(long, default_value_t = 10.0)]
        beta_min: f64,
        #[arg(long, default_value_t = 10_000.0)]
        beta_max: f64,
        #[arg(long, default_value_t = 7)]
        steps: u64,
    },
}

#[derive(Subcommand)]
enum DiffsetCommand {
    /// Forbidden set from a polynomial image over a box.
    Image {
        #[command(flatten)]
        poly: PolyArg,
        /// Per-axis ranges lo:hi, comma separated.
        #[arg(long = "box", value_name = "BOX")]
        box_bounds: String,
        #[arg(long)]
        cap: u64,
    },
    /// Exact D(X, N) with witness.
    Exact {
        #[command(flatten)]
        x: ForbiddenArgs,
        #[arg(long = "N")]
        n: u64,
    },
    /// Greedy lower-bound construction.
    Greedy {
        #[command(flatten)]
        x: ForbiddenArgs,
        #[arg(long = "N")]
        n: u64,
    },
    /// Formula bounds: greedy lower, sumset upper.
    Bounds {
        #[command(flatten)]
        x: ForbiddenArgs,
        #[arg(long = "N")]
        n: u64,
        #[arg(long = "Y", value_name = "LIST")]
        y: Option<String>,
    },
    /// D values over an N grid with a descriptive fit.
    Scaling {
        #[command(flatten)]
        poly: PolyArg,
        /// Comma-separated N grid.
        #[arg(long)]
        grid: String,
        #[arg(long, value_enum, default_value_t = SolverArg::Exact)]
        solver: SolverArg,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverArg {
    Exact,
    Greedy,
}

fn parse_u64_list(s: &str) -> Result<Vec<u64>, Error> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: u64 = lo
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad range start '{lo}'")))?;
            let hi: u64 = hi
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad range end '{hi}'")))?;
            out.extend(lo..=hi);
        } else {
            out.push(
                part.parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad integer '{part}'")))?,
            );
        }
    }
    Ok(out)
}

fn parse_bigint_list(s: &str) -> Result<Vec<BigInt>, Error> {
    s.split(',')
        .map(|p| {
            BigInt::from_str(p.trim())
                .map_err(|_| Error::InvalidParameter(format!("bad integer '{p}'")))
        })
        .collect()
}

fn parse_box_ranges(s: &str) -> Result<Vec<(i64, i64)>, Error> {
    s.split(',')
        .map(|part| {
            let part = part.trim();
            let (lo, hi) = part
                .split_once(':')
                .ok_or_else(|| Error::InvalidParameter(format!("box range '{part}' needs lo:hi")))?;
            let lo: i64 = lo
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad bound '{lo}'")))?;
            let hi: i64 = hi
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad bound '{hi}'")))?;
            Ok((lo, hi))
        })
        .collect()
}

/// Parses a frequency as an exact rational: "a/q", a decimal kept to 30
/// significant digits, or scientific notation.
fn parse_alpha(s: &str) -> Result<BigRational, Error> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim())
            .map_err(|_| Error::InvalidParameter(format!("bad numerator '{num}'")))?;
        let d = BigInt::from_str(den.trim())
            .map_err(|_| Error::InvalidParameter(format!("bad denominator '{den}'")))?;
        if d.is_zero() {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp10) = match s.to_ascii_lowercase().split_once('e') {
        Some((m, e)) => {
            let e: i64 = e
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad exponent '{e}'")))?;
            (m.to_string(), e)
        }
        None => (s.to_string(), 0),
    };
    let negative = mantissa.starts_with('-');
    let unsigned = mantissa.trim_start_matches(['-', '+']);
    let (int_part, frac_part) = match unsigned.split_once('.') {
        Some((i, f)) => (i, f),
        None => (unsigned, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(Error::InvalidParameter(format!("bad decimal '{s}'")));
    }
    // 30 significant digits: leading zeros carry no significance.
    let stripped = digits.trim_start_matches('0');
    let sig: String = stripped.chars().take(30).collect();
    let dropped = stripped.len() - sig.len();
    let mut num = if sig.is_empty() {
        BigInt::zero()
    } else {
        BigInt::from_str(&sig).unwrap()
    };
    if negative {
        num = -num;
    }
    let scale = frac_part.len() as i64 - dropped as i64 - exp10;
    let ten = BigInt::from(10);
    if scale >= 0 {
        Ok(BigRational::new(num, ten.pow(scale as u32)))
    } else {
        Ok(BigRational::from_integer(num * ten.pow((-scale) as u32)))
    }
}

struct Ctx {
    seed: u64,
    max_points: u64,
    max_nodes: u64,
    max_gamma: u32,
    assert_outcomes: bool,
}

/// Builds a root selection: explicit integer root, selection file, or the
/// automatic preference order (exact integer roots, then nonsingular roots
/// of minimal residue, then minimal multiplicity).
fn build_selection(
    h: &IntPolynomial,
    args: &SelectionArgs,
    prime_cover: u64,
    ctx: &Ctx,
) -> Result<RootSelection, Error> {
    if let Some(root) = &args.root {
        let coords = parse_bigint_list(root)?;
        return RootSelection::integer_root(h.clone(), coords);
    }
    if let Some(path) = &args.selection {
        let text = std::fs::read_to_string(path)?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidParameter(format!("bad selection JSON: {e}")))?;
        return report::selection_from_json(&value);
    }
    let ints = find_integer_roots(h, 4);
    if let Some(n) = ints.first() {
        return RootSelection::integer_root(h.clone(), n.clone());
    }
    let mut sel = RootSelection::from_table(h.clone(), Vec::new())?;
    for p in primes_up_to(prime_cover) {
        if let Ok(Some(root)) = select_root(h, p, ctx.max_nodes, 4) {
            sel.insert(root);
        }
    }
    Ok(sel)
}

fn unit_aux(h: &IntPolynomial) -> AuxiliaryPolynomial {
    AuxiliaryPolynomial::unit(h)
}

fn run(cli: &Cli) -> Result<(Value, i32), Error> {
    let ctx = Ctx {
        seed: cli.seed,
        max_points: cli.max_points,
        max_nodes: cli.max_nodes,
        max_gamma: cli.max_gamma,
        assert_outcomes: cli.assert,
    };
    let mut exit = 0;
    let value = match &cli.command {
        Command::Classify {
            poly,
            selection,
            d_bound,
            prime_bound,
        } => {
            let h = parse_polynomial(&poly.poly, poly.vars)?;
            let deligne = deligne_certify(&h, ctx.max_points);
            let rank = h
                .degree()
                .filter(|&k| k >= 1)
                .map(|k| rank_estimate(&h.homogeneous_part(k), ctx.max_points))
                .transpose()?;
            let inter = intersectivity_scan(&h, *prime_bound, ctx.max_nodes);
            let sel = build_selection(&h, selection, (*d_bound).max(*prime_bound), &ctx)?;
            let strongly = strongly_deligne_scan(&h, &sel, *d_bound, *prime_bound, ctx.max_points);
            if ctx.assert_outcomes
                && (deligne.status == Status::Refuted
                    || matches!(inter, IntersectivityVerdict::NonIntersectiveWitness { .. }))
            {
                exit = 2;
            }
            json!({
                "poly": report::poly_json(&h),
                "deligne": report::verdict_json(&deligne),
                "rank": rank.as_ref().map(report::rank_json),
                "intersective": report::intersectivity_json(&inter),
                "strongly_deligne": report::verdict_json(&strongly.verdict),
                "awkward_primes": strongly.awkward_primes,
            })
        }
        Command::Aux {
            poly,
            selection,
            d,
        } => {
            let h = parse_polynomial(&poly.poly, poly.vars)?;
            let ds = parse_u64_list(d)?;
            let max_p = ds.iter().copied().max().unwrap_or(1);
            let sel = build_selection(&h, selection, max_p, &ctx)?;
            let rows: Vec<Value> = ds
                .iter()
                .map(|&dv| match build_auxiliary(&sel, dv) {
                    Ok(aux) => report::aux_json(&aux),
                    Err(e) => json!({"d": dv, "error": e.to_string()}),
                })
                .collect();
            json!({
                "selection": report::selection_json(&sel),
                "auxiliaries": rows,
            })
        }
        Command::Sieve {
            poly,
            y,
            box_bounds,
        } => {
            let h = parse_polynomial(&poly.poly, poly.vars)?;
            let profile = SieveProfile::build(&h, *y, ctx.max_gamma, ctx.max_points)?;
            let count = match box_bounds {
                Some(b) => {
                    let bounds = parse_u64_list(b)?;
                    Some(report::sieve_count_json(&sieve_count_check(
                        &profile,
                        &bounds,
                        ctx.max_points,
                    )?))
                }
                None => None,
            };
            json!({
                "profile": report::profile_json(&profile),
                "count_check": count,
            })
        }
        Command::Expsum { which } => run_expsum(which, cli, &ctx)?,
        Command::Diffset { which } => {
            let (v, code) = run_diffset(which, &ctx)?;
            exit = code;
            v
        }
        Command::LowerDim {
            poly,
            mode,
            height,
            trials,
        } => {
            let h = parse_polynomial(&poly.poly, poly.vars)?;
            let mode = match mode {
                ModeArg::IntegerRoot => LowerMode::IntegerRoot,
                ModeArg::General => LowerMode::General,
            };
            match dimension_lower(&h, mode, *trials, *height, ctx.max_points)? {
                DimensionLowerOutcome::Reduced { poly, map, rank } => {
                    let rows: Vec<Vec<String>> = (0..map.rows())
                        .map(|i| {
                            (0..map.cols()).map(|j| map.entry(i, j).to_string()).collect()
                        })
                        .collect();
                    json!({
                        "outcome": "Reduced",
                        "rank": rank,
                        "reduced": report::poly_json(&poly),
                        "substitution_rows": rows,
                    })
                }
                DimensionLowerOutcome::RankTooLow { rank } => {
                    if ctx.assert_outcomes {
                        exit = 2;
                    }
                    json!({"outcome": "RankTooLow", "rank": rank})
                }
                DimensionLowerOutcome::Exhausted => {
                    exit = 3;
                    json!({"outcome": "Exhausted"})
                }
            }
        }
        Command::Check {} => {
            let (v, ok) = run_check(&ctx);
            if !ok {
                exit = 2;
            }
            v
        }
    };
    Ok((value, exit))
}

fn schedule_json(cli: &Cli, k: u32) -> Option<Value> {
    let eta = cli.paper_schedule_eta?;
    let n = cli.n_ambient.unwrap_or(1e6);
    let s = paper_schedule(eta, k, n, cli.c0);
    Some(json!({
        "eta": report::f12(eta),
        "Q": report::f12(s.q_bound),
        "Y": report::f12(s.y),
        "gamma": report::f12(s.gamma),
        "Z": report::f12(s.z),
    }))
}

fn run_expsum(cmd: &ExpsumCommand, cli: &Cli, ctx: &Ctx) -> Result<Value, Error> {
    Ok(match cmd {
        ExpsumCommand::Complete { poly, p } => {
            let h = parse_polynomial(&poly.poly, poly.vars)?;
            let rep = complete_sum_mod_p(&h, *p, ctx.max_points)?;
            report::expsum_json(&rep)
        }
        ExpsumCommand::Local { poly, q, a, y } => {
            let h = parse_polynomial(&poly.poly, poly.vars)?;
            let rep = sieved_local_sum(&h, *q, *a, *y, ctx.max_gamma, ctx.max_points)?;
            report::expsum_json(&rep)
        }
        ExpsumCommand::Weyl {
            poly,
            selection,
            d,
            alpha,
            m,
            y,
            q_bound,
        } => {
            let h = parse_polynomial(&poly.poly, poly.vars)?;
            let k = h.degree().unwrap_or(1);
            let alpha = parse_alpha(alpha)?;
            let sched = schedule_json(cli, k);
            let y_eff = y.unwrap_or_else(|| {
                cli.paper_schedule_eta
                    .map(|eta| {
                        paper_schedule(eta, k, cli.n_ambient.unwrap_or(1e6), cli.c0).y.round() as u64
                    })
                    .unwrap_or(1)
            });
            let aux = if *d == 1 {
                unit_aux(&h)
            } else {
                let sel = build_selection(&h, selection, *d, ctx)?;
                build_auxiliary(&sel, *d)?
            };
            let rep = sieved_weyl_sum(&aux, &alpha, *m, y_eff, ctx.max_gamma, ctx.max_points)?;
            let gamma = cli.paper_schedule_eta.map(|eta| {
                let s = paper_schedule(eta, k, cli.n_ambient.unwrap_or(1e6), cli.c0);
                BigRational::from_float(s.gamma).unwrap_or_else(BigRational::zero)
            });
            let arc = rational_approximation(&alpha, *q_bound, gamma);
            json!({
                "report": report::expsum_json(&rep),
                "arc": report::arc_json(&arc),
                "schedule": sched,
            })
        }
        ExpsumCommand::MajorCompare {
            poly,
            selection,
            d,
            a,
            q,
            beta,
            m,
            y,
        } => {
            let h = parse_polynomial(&poly.poly, poly.vars)?;
            let beta = parse_alpha(beta)?;
            let aux = if *d == 1 {
                unit_aux(&h)
            } else {
                let sel = build_selection(&h, selection, *d, ctx)?;
                build_auxiliary(&sel, *d)?
            };
            let rep =
                major_arc_compare(&aux, *a, *q, &beta, *m, *y, ctx.max_gamma, ctx.max_points)?;
            report::major_arc_json(&rep)
        }
        ExpsumCommand::MinorReport {
            poly,
            alpha,
            x,
            y,
            z,
            q,
            a,
        } => {
            let h = parse_polynomial(&poly.poly, poly.vars)?;
            let k = h.degree().unwrap_or(1);
            let alpha = parse_alpha(alpha)?;
            let sched = schedule_json(cli, k);
            let y_eff = y.unwrap_or_else(|| {
                cli.paper_schedule_eta
                    .map(|eta| {
                        paper_schedule(eta, k, cli.n_ambient.unwrap_or(1e6), cli.c0).y.round() as u64
                    })
                    .unwrap_or(2)
            });
            let z_eff = z.unwrap_or_else(|| {
                cli.paper_schedule_eta
                    .map(|eta| {
                        paper_schedule(eta, k, cli.n_ambient.unwrap_or(1e6), cli.c0).z.round() as u64
                    })
                    .unwrap_or(2)
            });
            let rep = minor_arc_report(
                &h, &alpha, *x, y_eff, z_eff, *q, *a, ctx.max_gamma, ctx.max_points,
            )?;
            let mut v = report::minor_arc_json(&rep);
            if let Some(obj) = v.as_object_mut() {
                obj.insert("schedule".into(), sched.unwrap_or(Value::Null));
            }
            v
        }
        ExpsumCommand::VdcFit {
            poly,
            x,
            beta_min,
            beta_max,
            steps,
        } => {
            let h = parse_polynomial(&poly.poly, poly.vars)?;
            let steps = (*steps).max(2);
            let ratio = (beta_max / beta_min).powf(1.0 / (steps - 1) as f64);
            let mut rows = Vec::new();
            let mut pts = Vec::new();
            let mut beta = *beta_min;
            for _ in 0..steps {
                let v = oscillatory_integral(&h, beta, *x, None, ctx.max_points)?;
                rows.push(json!({
                    "beta": report::f12(beta),
                    "abs_value": report::f12(v.norm()),
                }));
                pts.push((beta.ln(), v.norm().ln()));
                beta *= ratio;
            }
            let n = pts.len() as f64;
            let sx: f64 = pts.iter().map(|p| p.0).sum();
            let sy: f64 = pts.iter().map(|p| p.1).sum();
            let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
            let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
            let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            json!({
                "columns": ["beta", "abs_value"],
                "rows": rows,
                "slope": report::f12(slope),
                "k": h.degree(),
            })
        }
    })
}

fn run_diffset(cmd: &DiffsetCommand, ctx: &Ctx) -> Result<(Value, i32), Error> {
    let mut exit = 0;
    let v = match cmd {
        DiffsetCommand::Image {
            poly,
            box_bounds,
            cap,
        } => {
            let h = parse_polynomial(&poly.poly, poly.vars)?;
            let ranges = parse_box_ranges(box_bounds)?;
            let set = generate_image(&h, &ranges, *cap, ctx.max_points)?;
            report::forbidden_json(&set)
        }
        DiffsetCommand::Exact { x, n } => {
            let set = x.load()?;
            let res = solve_exact(&set, *n, ctx.max_nodes)?;
            if !res.optimal {
                exit = 3;
            }
            debug_assert!(verify_witness(&set, &res.witness));
            report::exact_json(*n, &res)
        }
        DiffsetCommand::Greedy { x, n } => {
            let set = x.load()?;
            let (size, witness) = solve_greedy(&set, *n);
            json!({"N": n, "greedy": size, "witness": witness})
        }
        DiffsetCommand::Bounds { x, n, y } => {
            let set = x.load()?;
            let y_vals = y.as_ref().map(|s| parse_u64_list(s)).transpose()?;
            let rep = bounds_report(&set, *n, y_vals.as_deref())?;
            report::bounds_json(&rep)
        }
        DiffsetCommand::Scaling { poly, grid, solver } => {
            let h = parse_polynomial(&poly.poly, poly.vars)?;
            let ns = parse_u64_list(grid)?;
            let kind = match solver {
                SolverArg::Exact => SolverKind::Exact,
                SolverArg::Greedy => SolverKind::Greedy,
            };
            let rep = scaling_report(&h, &ns, kind, ctx.max_nodes, ctx.max_points)?;
            report::scaling_json(&rep)
        }
    };
    Ok((v, exit))
}

fn run_check(ctx: &Ctx) -> (Value, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut results: Vec<(String, bool, String)> = Vec::new();
    let mut push = |name: &str, pass: bool, detail: String| {
        results.push((name.to_string(), pass, detail));
    };

    // Homogeneous reconstruction and the Euler identity on random data.
    {
        let mut ok = true;
        for _ in 0..20 {
            let nv = rng.gen_range(1..=3usize);
            let mut p = IntPolynomial::zero(nv);
            for _ in 0..rng.gen_range(1..=6) {
                let exps: Vec<u32> = (0..nv).map(|_| rng.gen_range(0..4)).collect();
                p.add_term(
                    intersieve::poly::MultiIndex::new(exps),
                    BigInt::from(rng.gen_range(-9i64..=9)),
                );
            }
            if p.is_zero() {
                continue;
            }
            let mut sum = IntPolynomial::zero(nv);
            for i in 0..=p.degree().unwrap() {
                sum = sum.add(&p.homogeneous_part(i));
            }
            ok &= sum == p;
            let k = p.degree().unwrap();
            let top = p.homogeneous_part(k);
            let mut rhs = IntPolynomial::zero(nv);
            for (v, dd) in top.gradient().into_iter().enumerate() {
                rhs = rhs.add(&IntPolynomial::variable(nv, v).mul(&dd));
            }
            ok &= top.scale(&BigInt::from(k)) == rhs;
        }
        push("poly_reconstruction_and_euler", ok, String::new());
    }

    // Substitution homomorphism on random shifts and scales.
    {
        let mut ok = true;
        for _ in 0..20 {
            let p = parse_polynomial("x^2 + 3*x*y - y^3 + 7", None).unwrap();
            let d = BigInt::from(rng.gen_range(1i64..=5));
            let r = vec![
                BigInt::from(rng.gen_range(-4i64..=4)),
                BigInt::from(rng.gen_range(-4i64..=4)),
            ];
            let v = vec![
                BigInt::from(rng.gen_range(-6i64..=6)),
                BigInt::from(rng.gen_range(-6i64..=6)),
            ];
            let subst = p.affine_substitute(&d, &r, None).unwrap();
            let lhs = subst.evaluate(&v, None).unwrap();
            let arg: Vec<BigInt> = r.iter().zip(&v).map(|(ri, vi)| ri + &d * vi).collect();
            let rhs = p.evaluate(&arg, None).unwrap();
            ok &= lhs == rhs;
        }
        push("substitution_homomorphism", ok, String::new());
    }

    // Content scaling.
    {
        let mut ok = true;
        for c in [2i64, -3, 5, 7] {
            let p = parse_polynomial("2*x^2 + 4*x*y + 6*y + 9", None).unwrap();
            let scaled = p.scale(&BigInt::from(c));
            ok &= scaled.content() == p.content() * BigInt::from(c).abs();
        }
        push("content_scaling", ok, String::new());
    }

    // Lambda multiplicativity.
    {
        let h = parse_polynomial("x^2 + y^2 - 2", None).unwrap();
        let sel = RootSelection::integer_root(h, vec![BigInt::one(), BigInt::one()]).unwrap();
        let mut ok = true;
        for _ in 0..20 {
            let a = rng.gen_range(1u64..=1000);
            let b = rng.gen_range(1u64..=1000);
            ok &= sel.lambda(a).unwrap() * sel.lambda(b).unwrap() == sel.lambda(a * b).unwrap();
        }
        push("lambda_completely_multiplicative", ok, String::new());
    }

    // Sieve weight identity and exact count at the divisible box.
    {
        let g = parse_polynomial("x^2 + y^2", None).unwrap();
        let profile = SieveProfile::build(&g, 3, ctx.max_gamma, ctx.max_points).unwrap();
        let rep = sieve_count_check(&profile, &[12, 12], ctx.max_points).unwrap();
        let ok = rep.count == 96 && rep.error.is_zero();
        push("sieve_count_12x12", ok, format!("count = {}", rep.count));
    }

    // Gauss magnitude.
    {
        let mut ok = true;
        for p in [5u64, 13, 29] {
            let h = parse_polynomial("x^2", None).unwrap();
            let rep = complete_sum_mod_p(&h, p, ctx.max_points).unwrap();
            ok &= (rep.value.norm() - (p as f64).sqrt()).abs() < 1e-9;
        }
        push("gauss_magnitude", ok, String::new());
    }

    // Local vanishing law and CRT multiplicativity.
    {
        let g = parse_polynomial("x^2 + y^2", None).unwrap();
        let zero = sieved_local_sum(&g, 9, 1, 3, ctx.max_gamma, ctx.max_points).unwrap();
        let whole = sieved_local_sum(&g, 15, 1, 5, ctx.max_gamma, ctx.max_points).unwrap();
        let p3 = sieved_local_sum(&g, 3, 2, 5, ctx.max_gamma, ctx.max_points).unwrap();
        let p5 = sieved_local_sum(&g, 5, 2, 5, ctx.max_gamma, ctx.max_points).unwrap();
        let ok = zero.value.norm() < 1e-9
            && zero.exact_zero
            && (whole.value - p3.value * p5.value).norm() < 1e-9;
        push("local_vanishing_and_crt", ok, String::new());
    }

    // Difference-set bound chain on random instances.
    {
        let mut ok = true;
        for _ in 0..20 {
            let n = rng.gen_range(4u64..=14);
            let mut vals = Vec::new();
            for d in 1..n {
                if rng.gen_bool(0.35) {
                    vals.push(d as i64);
                }
            }
            let x = ForbiddenSet::from_values(vals);
            let exact = solve_exact(&x, n, ctx.max_nodes).unwrap();
            let (greedy, _) = solve_greedy(&x, n);
            let b = bounds_report(&x, n, None).unwrap();
            ok &= b.greedy_lower <= greedy && greedy <= exact.size && exact.size <= n;
            ok &= verify_witness(&x, &exact.witness);
        }
        push("diffset_bound_chain", ok, String::new());
    }

    // Inheritance with honest and corrupted lambda.
    {
        let h = parse_polynomial("x^2 + y^2 - 2", None).unwrap();
        let sel = RootSelection::integer_root(h, vec![BigInt::one(), BigInt::one()]).unwrap();
        let honest = inheritance_check(&sel, 1, 3, 100, ctx.seed, 60, 12, None).unwrap();
        let corrupted =
            inheritance_check(&sel, 1, 3, 100, ctx.seed, 60, 12, Some(BigInt::from(4))).unwrap();
        push(
            "inheritance_honest_passes",
            honest.pass,
            format!("violations = {}", honest.violations),
        );
        push(
            "inheritance_mutation_detected",
            !corrupted.pass,
            format!("violations = {}", corrupted.violations),
        );
    }

    // Gradient locus bound at a few primes.
    {
        let g = parse_polynomial("x^4 + x*y^3 + y^4", None).unwrap();
        let mut ok = true;
        for p in [5u64, 7, 11, 13] {
            ok &= gradient_locus_count(&g, p, ctx.max_points).unwrap() <= 9;
        }
        push("gradient_locus_bound", ok, String::new());
    }

    let all_pass = results.iter().all(|(_, p, _)| *p);
    let rows: Vec<Value> = results
        .iter()
        .map(|(name, pass, detail)| json!({"check": name, "pass": pass, "detail": detail}))
        .collect();
    (json!({"checks": rows, "all_pass": all_pass}), all_pass)
}

/// CSV rendering for tabular outputs (scaling tables and decay fits). A
/// "columns" array in the value fixes the column order; otherwise columns
/// fall back to the canonical (alphabetical) key order.
fn to_csv(v: &Value) -> Option<String> {
    let rows = v.get("rows")?.as_array()?;
    let headers: Vec<String> = match v.get("columns").and_then(Value::as_array) {
        Some(cols) => cols
            .iter()
            .filter_map(|c| c.as_str().map(str::to_string))
            .collect(),
        None => rows
            .first()?
            .as_object()?
            .keys()
            .cloned()
            .collect(),
    };
    if rows.is_empty() {
        return Some(headers.join(","));
    }
    let mut out = String::new();
    out.push_str(&headers.join(","));
    out.push('\n');
    for row in rows {
        let obj = row.as_object()?;
        let cells: Vec<String> = headers
            .iter()
            .map(|h| match obj.get(h) {
                Some(Value::String(s)) => s.clone(),
                Some(other) => other.to_string(),
                None => String::new(),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Some(out)
}

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    let started = Instant::now();
    let result = run(&cli);
    let (value, code) = match result {
        Ok(pair) => pair,
        Err(e) => {
            let code = match e {
                Error::BudgetExceeded { .. }
                | Error::MaxGammaExceeded { .. }
                | Error::ResolutionInsufficient { .. } => 3,
                _ => 1,
            };
            eprintln!("error: {e}");
            std::process::exit(code);
        }
    };
    let rendered = if cli.format == Format::Csv {
        to_csv(&value)
            .map(|s| s.trim_end_matches('\n').to_string())
            .unwrap_or_else(|| report::to_canonical_string(&value))
    } else {
        report::to_canonical_string(&value)
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered + "\n") {
                eprintln!("error: cannot write output: {e}");
                std::process::exit(1);
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{rendered}");
        }
    }
    if let Some(path) = &cli.manifest {
        let mut hasher = Sha256::new();
        for a in &argv {
            hasher.update(a.as_bytes());
            hasher.update([0]);
        }
        let digest = hex_string(&hasher.finalize());
        let threads = std::env::var("INTERSIEVE_THREADS").ok();
        let manifest = json!({
            "argv": argv,
            "budgets": {
                "max_points": cli.max_points,
                "max_nodes": cli.max_nodes,
                "max_gamma": cli.max_gamma,
            },
            "input_digest_sha256": digest,
            "library_version": VERSION,
            "seed": cli.seed,
            "threads_env": threads,
            "wall_time_ms": started.elapsed().as_millis() as u64,
        });
        if let Err(e) = std::fs::write(path, report::to_canonical_string(&manifest) + "\n") {
            eprintln!("error: cannot write manifest: {e}");
            std::process::exit(1);
        }
    }
    std::process::exit(code);
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
