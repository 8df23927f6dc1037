use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use paretail::catalog::{catalog, Distribution};
use paretail::moments::{covariance_series, mean_expansion, moment_expansion, ExpansionSeries, MomentQuery};
use paretail::oracle::mc::covariance_from_moments;
use paretail::oracle::{
    batch_functional, convergence_rate_probe, mc_batches, mc_top_order_stats, quad_joint_moment, quad_moment, McPlan,
    OracleMethod, OracleResult, RateProbe,
};
use paretail::quantile::{quantile_series, TailModel};
use paretail::series::FormalSeries;
use paretail::typos;
use paretail::Error;

const SCHEMA: &str = "paretail/1";
const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser)]
#[command(name = "paretail", version, about = "Quantile and order-statistic moment expansions for Pareto-type tails")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Quantile power coefficients C_{i psi} of F^{-1}(u)^theta.
    Invert {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        theta: f64,
    },
    /// Expansion of E prod X_{n,n-s_i}^{theta_i} in powers of 1/n and n^-a.
    Moments {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        s: Vec<u64>,
        /// Powers, one per s; defaults to all ones.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        theta: Vec<f64>,
        #[arg(long, default_value_t = 7)]
        imax: usize,
        #[arg(long, default_value_t = 4)]
        jmax: usize,
        /// Evaluate the expansion at this sample size.
        #[arg(long)]
        n: Option<u64>,
    },
    /// Compare the normalised mean (one s) or covariance (two s) against an oracle.
    Verify {
        #[arg(long)]
        dist: String,
        #[arg(long, value_delimiter = ',', required = true)]
        s: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
        #[arg(long, value_enum, default_value_t = OracleKind::Quad)]
        oracle: OracleKind,
        #[arg(long, default_value_t = 100_000)]
        reps: u64,
        #[arg(long, env = "PARETAIL_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Keep expansion terms with decay exponent below this; defaults to 2 min(a, 1).
        #[arg(long)]
        cutoff: Option<f64>,
    },
    /// Printed formulas that disagree with the derived ones.
    Typos,
    /// Distribution catalog with capability flags.
    ListDistributions,
}

#[derive(Args)]
struct ModelArgs {
    /// Catalog distribution, e.g. cauchy, student_t(3), frechet(2).
    #[arg(long, conflicts_with = "tail", required_unless_present = "tail")]
    dist: Option<String>,
    /// Explicit tail: alpha,beta,c0,c1,...
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    tail: Option<Vec<f64>>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleKind {
    Quad,
    Mc,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
    #[error("output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_infinite_moment() => 3,
            CliError::Core(Error::Parse(_) | Error::InvalidArgument(_)) => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Rendered output: a CSV table (after a schema comment line) or a JSON object.
struct Report {
    command: &'static str,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    /// Extra CSV sections, each introduced by a `# name` comment line.
    sections: Vec<(&'static str, Vec<&'static str>, Vec<Vec<String>>)>,
    json: Value,
}

impl Report {
    fn render(&self, format: Format) -> CliResult<Vec<u8>> {
        match format {
            Format::Json => {
                let mut body = json!({ "schema": SCHEMA, "command": self.command });
                if let (Value::Object(out), Value::Object(extra)) = (&mut body, &self.json) {
                    out.extend(extra.clone());
                }
                let mut text = serde_json::to_vec_pretty(&body).map_err(|e| CliError::Usage(e.to_string()))?;
                text.push(b'\n');
                Ok(text)
            }
            Format::Csv => {
                let mut out = format!("# {SCHEMA} {}\n", self.command).into_bytes();
                write_table(&mut out, &self.header, &self.rows)?;
                for (name, header, rows) in &self.sections {
                    writeln!(out, "# {name}")?;
                    write_table(&mut out, header, rows)?;
                }
                Ok(out)
            }
        }
    }
}

fn write_table(out: &mut Vec<u8>, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    out.extend(w.into_inner().map_err(|e| CliError::Io(e.into_error()))?);
    Ok(())
}

/// Shortest round-trip representation, with exponent form for very small or
/// large magnitudes.
fn num(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:?}")
}

fn parse_dist(spec: &str) -> CliResult<Distribution> {
    Ok(spec.parse::<Distribution>()?)
}

fn build_tail(model: &ModelArgs, order: usize) -> CliResult<(String, TailModel<f64>)> {
    match (&model.dist, &model.tail) {
        (Some(spec), _) => {
            let d = parse_dist(spec)?;
            Ok((d.to_string(), d.tail(order)?))
        }
        (None, Some(t)) => {
            if t.len() < 3 {
                return Err(CliError::Usage("--tail needs alpha,beta,c0[,c1,...]".into()));
            }
            if t.len() - 2 <= order {
                return Err(CliError::Usage(format!(
                    "--tail gives coefficients up to c{}, order {order} needs c{order}",
                    t.len() - 3
                )));
            }
            let c = FormalSeries::new(t[2..3 + order].to_vec())?;
            Ok(("tail".into(), TailModel::new(t[0], t[1], c)?))
        }
        (None, None) => Err(CliError::Usage("one of --dist or --tail is required".into())),
    }
}

fn invert(model: &ModelArgs, order: usize, theta: f64) -> CliResult<Report> {
    let (label, tail) = build_tail(model, order)?;
    let q = quantile_series(&tail, &theta)?;
    let rows: Vec<Vec<String>> = (0..=order)
        .map(|i| vec![i.to_string(), num(q.exponent(i)), num(*q.coeff(i))])
        .collect();
    let coefficients: Vec<Value> = (0..=order)
        .map(|i| json!({ "i": i, "exponent": q.exponent(i), "coefficient": q.coeff(i) }))
        .collect();
    Ok(Report {
        command: "invert",
        header: vec!["i", "exponent", "coefficient"],
        rows,
        sections: Vec::new(),
        json: json!({
            "model": label,
            "alpha": tail.alpha(),
            "beta": tail.beta(),
            "a": tail.a(),
            "theta": theta,
            "psi": q.psi(),
            "order": order,
            "coefficients": coefficients,
        }),
    })
}

fn series_rows(e: &ExpansionSeries<f64>) -> (Vec<Vec<String>>, Vec<Value>) {
    let lead = *e.lead();
    let mut rows = Vec::new();
    let mut terms = Vec::new();
    for ((i, j), c) in e.terms() {
        let exponent = lead - e.offset(i, j);
        rows.push(vec![i.to_string(), j.to_string(), num(exponent), num(*c)]);
        terms.push(json!({ "i": i, "j": j, "exponent": exponent, "coefficient": c }));
    }
    (rows, terms)
}

fn moments(model: &ModelArgs, s: &[u64], theta: &[f64], imax: usize, jmax: usize, n: Option<u64>) -> CliResult<Report> {
    let theta = if theta.is_empty() { vec![1.0; s.len()] } else { theta.to_vec() };
    if theta.len() != s.len() {
        return Err(CliError::Usage(format!("--theta has {} entries, --s has {}", theta.len(), s.len())));
    }
    let (label, tail) = build_tail(model, jmax)?;
    let e = moment_expansion(&MomentQuery::new(tail.clone(), s.to_vec(), theta.clone(), imax, jmax)?)?;
    let (rows, terms) = series_rows(&e);
    let mut json = json!({
        "model": label,
        "alpha": tail.alpha(),
        "a": tail.a(),
        "s": s,
        "theta": theta,
        "imax": imax,
        "jmax": jmax,
        "lead_exponent": e.lead(),
        "remainder_exponent": e.remainder_exponent(),
        "terms": terms,
    });
    let mut sections = Vec::new();
    if let Some(n) = n {
        let ev = e.evaluate(n as f64);
        json["evaluation"] = json!({ "n": n, "value": ev.value, "truncation": ev.last_term });
        sections.push((
            "evaluation",
            vec!["n", "value", "truncation"],
            vec![vec![n.to_string(), num(ev.value), num(ev.last_term)]],
        ));
    }
    Ok(Report {
        command: "moments",
        header: vec!["i", "j", "exponent", "coefficient"],
        rows,
        sections,
        json,
    })
}

/// First nonzero decay exponent at or beyond `cutoff` in `full`.
fn predicted_exponent(full: &ExpansionSeries<f64>, cutoff: f64) -> Option<f64> {
    full.by_offset()
        .into_iter()
        .find(|&(e, c)| e >= cutoff - 1e-12 && c.abs() > 1e-14)
        .map(|(e, _)| e)
}

struct VerifyArgs<'a> {
    dist: &'a str,
    s: &'a [u64],
    n: &'a [u64],
    oracle: OracleKind,
    reps: u64,
    seed: u64,
    cutoff: Option<f64>,
}

fn mc_oracle(d: &Distribution, s: &[u64], n: u64, reps: u64, seed: u64) -> paretail::Result<OracleResult> {
    let smax = *s.iter().max().expect("nonempty s");
    let plan = McPlan::new(n, smax, reps, seed);
    if let [s1, s2] = *s {
        let batches = mc_batches(d, &plan, 3, |top, out| {
            let (x1, x2) = (top[s1 as usize], top[s2 as usize]);
            out.copy_from_slice(&[x1, x2, x1 * x2]);
        })?;
        Ok(batch_functional(&batches, covariance_from_moments))
    } else {
        Ok(mc_top_order_stats(d, &plan, &[vec![(s[0], 1.0)]])?.remove(0))
    }
}

fn quad_oracle(d: &Distribution, s: &[u64], n: u64) -> paretail::Result<OracleResult> {
    if let [s1, s2] = *s {
        let e1 = quad_moment(d, n, s1, 1.0)?;
        let e2 = quad_moment(d, n, s2, 1.0)?;
        let e12 = quad_joint_moment(d, n, s1, s2, 1.0, 1.0)?;
        Ok(OracleResult {
            value: covariance_from_moments(&[e1.value, e2.value, e12.value]),
            std_error: 0.0,
            abs_error: e12.abs_error + e1.abs_error * e2.value.abs() + e2.abs_error * e1.value.abs(),
            method: OracleMethod::Quad2d,
            cost: e1.cost + e2.cost + e12.cost,
        })
    } else {
        quad_moment(d, n, s[0], 1.0)
    }
}

fn verify(args: &VerifyArgs) -> CliResult<(Report, bool)> {
    let s = args.s;
    if s.is_empty() || s.len() > 2 {
        return Err(CliError::Usage("--s takes one depth (mean) or two (covariance)".into()));
    }
    let mut s_sorted = s.to_vec();
    s_sorted.sort_unstable_by(|x, y| y.cmp(x));
    let s = &s_sorted[..];
    let d = parse_dist(args.dist)?;
    let imax = 4;
    let jmax = 3;
    let tail = d.tail(jmax)?;
    let full = match *s {
        [s1, s2] => covariance_series(&tail, s1, s2, imax, jmax)?,
        [s1] => mean_expansion(&tail, s1, imax, jmax)?,
        _ => unreachable!(),
    };
    let cutoff = args.cutoff.unwrap_or(2.0 * tail.a().min(1.0));
    let series = full.truncated(cutoff);
    let predicted = predicted_exponent(&full, cutoff).map(|e| -e);
    let scale_power = s.len() as f64 * tail.lambda();
    let c0 = *tail.c0();
    let probe: RateProbe = convergence_rate_probe(
        &series,
        |n| {
            let raw = match args.oracle {
                OracleKind::Quad => quad_oracle(&d, s, n)?,
                OracleKind::Mc => mc_oracle(&d, s, n, args.reps, args.seed)?,
            };
            Ok(raw.scaled((n as f64 * c0).powf(-scale_power)))
        },
        args.n,
    )?;
    let slope_text = probe.slope.map(num).unwrap_or_default();
    let predicted_text = predicted.map(num).unwrap_or_default();
    let rows: Vec<Vec<String>> = probe
        .points
        .iter()
        .map(|p| {
            vec![
                p.n.to_string(),
                num(p.expansion),
                num(p.oracle.value),
                num(p.oracle.abs_error.max(p.oracle.std_error)),
                num(p.diff),
                p.resolved.to_string(),
                slope_text.clone(),
                predicted_text.clone(),
            ]
        })
        .collect();
    let ok = match (probe.slope, predicted) {
        (Some(slope), Some(pred)) => (slope - pred).abs() <= 0.5,
        _ => true,
    };
    let quantity = if s.len() == 2 { "covariance" } else { "mean" };
    let report = Report {
        command: "verify",
        header: vec![
            "n",
            "expansion",
            "oracle",
            "oracle_error",
            "abs_diff",
            "resolved",
            "fitted_slope",
            "predicted_slope",
        ],
        rows,
        sections: Vec::new(),
        json: json!({
            "dist": d.to_string(),
            "quantity": quantity,
            "s": s,
            "oracle": match args.oracle { OracleKind::Quad => "quad", OracleKind::Mc => "mc" },
            "reps": if args.oracle == OracleKind::Mc { Some(args.reps) } else { None },
            "seed": if args.oracle == OracleKind::Mc { Some(args.seed) } else { None },
            "truncation_cutoff": cutoff,
            "imax": imax,
            "jmax": jmax,
            "predicted_slope": predicted,
            "fitted_slope": probe.slope,
            "saturated": probe.saturated,
            "fit_residual": probe.residual,
            "within_tolerance": ok,
            "points": probe.points,
        }),
    };
    Ok((report, ok))
}

fn typos_report() -> Report {
    let ledger = typos::ledger();
    let rows = ledger
        .iter()
        .map(|e| vec![e.id.into(), e.location.into(), e.printed.into(), e.derived.into(), e.verified_by.into()])
        .collect();
    Report {
        command: "typos",
        header: vec!["id", "location", "printed", "derived", "verified_by"],
        rows,
        sections: Vec::new(),
        json: json!({ "entries": ledger }),
    }
}

fn distributions_report() -> Report {
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for d in catalog() {
        let c = d.capabilities();
        rows.push(vec![
            d.name().to_string(),
            d.to_string(),
            num(d.tail_index()),
            c.exact_quantile.to_string(),
            c.numeric_quantile.to_string(),
            c.sampler.to_string(),
        ]);
        entries.push(json!({
            "name": d.name(),
            "spec": d.to_string(),
            "tail_index": d.tail_index(),
            "capabilities": c,
        }));
    }
    Report {
        command: "list-distributions",
        header: vec!["name", "spec", "tail_index", "exact_quantile", "numeric_quantile", "sampler"],
        rows,
        sections: Vec::new(),
        json: json!({ "distributions": entries }),
    }
}

fn run(cli: &Cli) -> CliResult<(Report, bool)> {
    match &cli.command {
        Command::Invert { model, order, theta } => Ok((invert(model, *order, *theta)?, true)),
        Command::Moments {
            model,
            s,
            theta,
            imax,
            jmax,
            n,
        } => Ok((moments(model, s, theta, *imax, *jmax, *n)?, true)),
        Command::Verify {
            dist,
            s,
            n,
            oracle,
            reps,
            seed,
            cutoff,
        } => verify(&VerifyArgs {
            dist,
            s,
            n,
            oracle: *oracle,
            reps: *reps,
            seed: *seed,
            cutoff: *cutoff,
        }),
        Command::Typos => Ok((typos_report(), true)),
        Command::ListDistributions => Ok((distributions_report(), true)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|(report, ok)| Ok((report.render(cli.format)?, ok)));
    match outcome {
        Ok((bytes, ok)) => {
            if let Err(e) = std::io::stdout().write_all(&bytes) {
                eprintln!("paretail: {e}");
                return ExitCode::FAILURE;
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("paretail: fitted slope misses the predicted remainder order by more than 0.5");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("paretail: {e}");
            if matches!(e, CliError::Usage(_)) {
                eprintln!("run `paretail --help` for usage");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
