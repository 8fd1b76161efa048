//! Command-line surface over every module, with stable line-oriented
//! output and a fixed exit-status contract:
//!
//! * `0`  — the queried property holds / the computation succeeded
//! * `1`  — the property fails
//! * `2`  — a resource budget was exhausted before an answer was reached
//! * `64` — usage error (bad flags, malformed permutation, bad file)

use std::io::BufRead;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{self, BoundReport};
use crate::constructions::{self, Construction, DoubleKind};
use crate::criticality::{self, CheckOptions};
use crate::downset::Downset;
use crate::perm::Permutation;
use crate::search::{self, SearchJob};
use crate::separable;
use crate::solver::{Decision, Solver, SolverLimits};
use crate::{Error, Result};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_EXHAUSTED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser)]
#[command(
    name = "permcover",
    version,
    about = "Exact partitioning of permutations into monotone subsequences",
    max_term_width = 100
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Output style: human lines or key=value records.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain, env = "PERMCOVER_FORMAT")]
    format: Format,
    /// Wall-clock budget in seconds for solver work.
    #[arg(long, global = true, env = "PERMCOVER_TIME_BUDGET")]
    time_budget: Option<f64>,
    /// Maximum stored solver states per query.
    #[arg(long, global = true, env = "PERMCOVER_MEMO_BUDGET")]
    memo_budget: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a permutation splits into r increasing and s
    /// decreasing subsequences.
    Solve {
        #[arg(short, long)]
        r: usize,
        #[arg(short, long)]
        s: usize,
        /// One-line permutation; "-" or omitted reads stdin, "@FILE" reads a file.
        perm: Option<String>,
    },
    /// Print the downset of non-coverable (r, s) pairs as column heights.
    Dset { perm: Option<String> },
    /// Check that every one-point deletion is target-coverable while the
    /// permutation itself is not.
    CheckCritical {
        /// Downset target: "Tk", "RxS", or raw column heights.
        #[arg(short, long)]
        target: String,
        /// Also print a cover for every deletion.
        #[arg(long)]
        certificates: bool,
        perm: Option<String>,
    },
    /// Check criticality plus equality of the non-coverability downset with
    /// the target.
    CheckMinimal {
        #[arg(short, long)]
        target: String,
        perm: Option<String>,
    },
    /// Check (r, s)-criticality plus coverability by s+1 decreasing chains.
    CheckSharp {
        #[arg(short, long)]
        r: usize,
        #[arg(short, long)]
        s: usize,
        perm: Option<String>,
    },
    /// Combine two permutations.
    Compose {
        #[command(subcommand)]
        op: ComposeOp,
    },
    /// Build permutations with claimed properties from seeds and inputs.
    Construct {
        #[command(subcommand)]
        what: ConstructCmd,
    },
    /// Shrink a non-coverable permutation to a target-critical pattern.
    Criticalize {
        #[arg(short, long)]
        target: String,
        perm: Option<String>,
    },
    /// Separable-permutation tools.
    Separable {
        #[command(subcommand)]
        what: SeparableCmd,
    },
    /// Bound tables and the threshold gadget.
    Bounds {
        #[command(subcommand)]
        what: BoundsCmd,
    },
    /// Exhaustively enumerate target-critical permutations up to a length.
    Search {
        #[arg(short, long)]
        target: String,
        #[arg(long)]
        max_len: usize,
        /// Emit raw hits instead of canonical orbit representatives.
        #[arg(long)]
        no_symmetry: bool,
        /// Subtree worker count.
        #[arg(short, long, default_value_t = 1, env = "PERMCOVER_JOBS")]
        jobs: usize,
        /// Depth at which the tree splits into parallel subtree tasks.
        #[arg(long, default_value_t = 2)]
        split_depth: usize,
        /// Record finished subtrees here and resume from it if present.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Lengths above this cap are refused; raise it explicitly to opt in.
        #[arg(long, default_value_t = 11)]
        safety_cap: usize,
    },
}

#[derive(Subcommand)]
enum ComposeOp {
    /// Direct sum: second operand shifted above the first.
    Dsum { a: String, b: String },
    /// Skew sum: first operand shifted above the second.
    Ssum { a: String, b: String },
    /// Tensor product: each point of the first inflated to a copy of the second.
    Tensor { a: String, b: String },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Skew sum of an (r1,s)-critical and an (r2,s)-critical permutation,
    /// claimed (r1+r2+1, s)-critical.
    Enkel {
        #[arg(long)]
        r1: usize,
        #[arg(long)]
        r2: usize,
        #[arg(short, long)]
        s: usize,
        a: String,
        b: String,
    },
    /// Skew a triangle-k-minimal permutation over an ascending run, claimed
    /// triangle-(k+1)-minimal.
    EpicStep {
        #[arg(short, long)]
        k: usize,
        perm: Option<String>,
    },
    /// Double a triangle-k-minimal A with a triangle-(k+1)-minimal B.
    EpicDouble {
        #[arg(short, long)]
        k: usize,
        /// Which identity: "2k+2" or "2k+3".
        #[arg(long)]
        variant: String,
        a: String,
        b: String,
    },
    /// Tensor an (a-1,b-1)-sharp X with a (c-1,d-1)-sharp Y, claimed
    /// (ac-1, bd-1)-sharp.
    Ghee {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        d: usize,
        x: String,
        y: String,
    },
    /// Wrap a permutation between monotone guard runs; criticalizing the
    /// result under T(r+s) extracts a critical pattern containing it.
    NioEmbed {
        #[arg(short, long)]
        r: usize,
        #[arg(short, long)]
        s: usize,
        /// Guard run length; defaults to the smallest legal value r+s+1.
        #[arg(short = 'N', long)]
        run: Option<usize>,
        perm: Option<String>,
    },
    /// Put an ascending run of length k+2 above a k-critical permutation;
    /// criticalizing under T(k+1) extracts a strictly larger critical pattern.
    NioLift {
        #[arg(short, long)]
        k: usize,
        perm: Option<String>,
    },
    /// The n-fold tensor power of the length-15 seed (length 15^n).
    Family15 {
        #[arg(short, long)]
        n: usize,
    },
    /// The recurrence family member for k, claimed triangle-k-minimal.
    Punkt {
        #[arg(short, long)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum SeparableCmd {
    /// Print the canonical sum decomposition tree, if one exists.
    Decompose { perm: Option<String> },
    /// Non-coverability downset through the tree, no solver calls.
    Dset { perm: Option<String> },
    /// All separable target-critical permutations.
    Enumerate {
        #[arg(short, long)]
        target: String,
    },
}

#[derive(Subcommand)]
enum BoundsCmd {
    /// Closed-form upper bounds.
    Upper {
        /// Upper bound for C(k).
        #[arg(short, long)]
        k: Option<u64>,
        /// Upper bound for C(r,s); give both.
        #[arg(short, long)]
        r: Option<u64>,
        #[arg(short, long)]
        s: Option<u64>,
        /// Threshold N(r,d); give both.
        #[arg(long)]
        threshold_r: Option<u64>,
        #[arg(long)]
        threshold_d: Option<u64>,
    },
    /// Recurrence-driven lower-bound tables.
    Lower {
        #[arg(long, default_value_t = 200)]
        k_max: usize,
        #[arg(long, default_value_t = 60)]
        rs_max: usize,
        /// Report C(k) and M(k) at this k.
        #[arg(short, long)]
        k: Option<usize>,
        /// Report C(r,s) and S(r,s); give both.
        #[arg(short, long)]
        r: Option<usize>,
        #[arg(short, long)]
        s: Option<usize>,
    },
    /// Build and exhaustively verify the rooted-tree threshold gadget.
    Gadget {
        #[arg(short, long)]
        r: usize,
        #[arg(short, long)]
        d: usize,
    },
}

/// Entry point: parse `std::env::args`, run, and return the exit status.
pub fn run_from_args() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_HOLDS };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::ResourceExhausted(_) => EXIT_EXHAUSTED,
                Error::Precondition(_) => EXIT_FAILS,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn limits(global: &GlobalOpts) -> SolverLimits {
    let mut limits = SolverLimits::default();
    if let Some(budget) = global.memo_budget {
        limits.memo_budget = budget;
    }
    if let Some(seconds) = global.time_budget {
        limits.time_budget = Some(Duration::from_secs_f64(seconds));
    }
    limits
}

fn perm_arg(arg: &Option<String>) -> Result<Permutation> {
    match arg.as_deref() {
        None | Some("-") => {
            let mut line = String::new();
            std::io::stdin().lock().read_line(&mut line)?;
            line.trim_end_matches('\n').parse()
        }
        Some(s) => perm_value(s),
    }
}

fn perm_value(s: &str) -> Result<Permutation> {
    if let Some(path) = s.strip_prefix('@') {
        let text = std::fs::read_to_string(path)?;
        text.trim().parse()
    } else {
        s.parse()
    }
}

/// Accepts "Tk" (triangle), "RxS" (rectangle), or raw column heights.
fn target_value(s: &str) -> Result<Downset> {
    let trimmed = s.trim();
    if let Some(k) = trimmed
        .strip_prefix('T')
        .or_else(|| trimmed.strip_prefix('t'))
    {
        let k: usize = k
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad triangle index: {trimmed:?}")))?;
        return Ok(Downset::triangle(k));
    }
    if let Some((r, s_part)) = trimmed.split_once(['x', 'X']) {
        let parse = |tok: &str| {
            tok.trim().parse::<usize>().map_err(|_| {
                Error::InvalidArgument(format!("bad rectangle spec: {trimmed:?}"))
            })
        };
        return Ok(Downset::rectangle(parse(r)?, parse(s_part)?));
    }
    trimmed.parse()
}

struct Out {
    format: Format,
}

impl Out {
    fn plain(&self, line: &str) {
        if self.format == Format::Plain {
            println!("{line}");
        }
    }

    fn record(&self, fields: &[(&str, String)]) {
        if self.format == Format::Structured {
            let line = fields
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" ");
            println!("{line}");
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let out = Out {
        format: cli.global.format,
    };
    let limits = limits(&cli.global);
    match &cli.command {
        Command::Solve { r, s, perm } => {
            let pi = perm_arg(perm)?;
            let mut solver = Solver::with_limits(limits);
            match solver.is_rs_coverable(&pi, *r, *s)? {
                Decision::Coverable(cover) => {
                    out.plain("YES");
                    out.plain(&cover.to_string());
                    out.record(&[
                        ("decision", "YES".into()),
                        ("cover", cover.to_string()),
                    ]);
                    Ok(EXIT_HOLDS)
                }
                Decision::NotCoverable => {
                    out.plain("NO");
                    out.record(&[("decision", "NO".into())]);
                    Ok(EXIT_FAILS)
                }
            }
        }
        Command::Dset { perm } => {
            let pi = perm_arg(perm)?;
            let mut solver = Solver::with_limits(limits);
            let downset = solver.non_cover_downset(&pi)?;
            out.plain(&downset.to_string());
            out.record(&[
                ("downset", downset.to_string()),
                ("size", downset.size().to_string()),
            ]);
            Ok(EXIT_HOLDS)
        }
        Command::CheckCritical {
            target,
            certificates,
            perm,
        } => {
            let pi = perm_arg(perm)?;
            let target = target_value(target)?;
            let mut solver = Solver::with_limits(limits);
            let opts = CheckOptions {
                certificates: *certificates,
                check_minimal: false,
            };
            let report = criticality::is_critical_with(&mut solver, &pi, &target, &opts)?;
            out.plain(&report.status.to_string());
            out.record(&[("status", report.status.to_string())]);
            if let Some(certs) = &report.certificates {
                for cert in certs {
                    let line = format!(
                        "deletion={} point=({},{}) cover: {}",
                        cert.deletion, cert.point.0, cert.point.1, cert.cover
                    );
                    out.plain(&line);
                    out.record(&[
                        ("deletion", cert.deletion.to_string()),
                        ("point", format!("({},{})", cert.point.0, cert.point.1)),
                        ("cover", cert.cover.to_string()),
                    ]);
                }
            }
            Ok(if report.status.is_critical() {
                EXIT_HOLDS
            } else {
                EXIT_FAILS
            })
        }
        Command::CheckMinimal { target, perm } => {
            let pi = perm_arg(perm)?;
            let target = target_value(target)?;
            let mut solver = Solver::with_limits(limits);
            let minimal = criticality::is_minimal(&mut solver, &pi, &target)?;
            out.plain(if minimal { "minimal" } else { "not-minimal" });
            out.record(&[("minimal", minimal.to_string())]);
            Ok(if minimal { EXIT_HOLDS } else { EXIT_FAILS })
        }
        Command::CheckSharp { r, s, perm } => {
            let pi = perm_arg(perm)?;
            let mut solver = Solver::with_limits(limits);
            let sharp = criticality::is_sharp(&mut solver, &pi, *r, *s)?;
            out.plain(if sharp { "sharp" } else { "not-sharp" });
            out.record(&[("sharp", sharp.to_string())]);
            Ok(if sharp { EXIT_HOLDS } else { EXIT_FAILS })
        }
        Command::Compose { op } => {
            let result = match op {
                ComposeOp::Dsum { a, b } => perm_value(a)?.direct_sum(&perm_value(b)?),
                ComposeOp::Ssum { a, b } => perm_value(a)?.skew_sum(&perm_value(b)?),
                ComposeOp::Tensor { a, b } => perm_value(a)?.tensor(&perm_value(b)?),
            };
            out.plain(&result.to_string());
            out.record(&[("permutation", result.to_string())]);
            Ok(EXIT_HOLDS)
        }
        Command::Construct { what } => {
            let construction = build(what)?;
            print_construction(&out, &construction);
            Ok(EXIT_HOLDS)
        }
        Command::Criticalize { target, perm } => {
            let pi = perm_arg(perm)?;
            let target = target_value(target)?;
            let mut solver = Solver::with_limits(limits);
            let shrunk = criticality::criticalize(&mut solver, &pi, &target)?;
            out.plain(&shrunk.to_string());
            out.record(&[
                ("permutation", shrunk.to_string()),
                ("length", shrunk.len().to_string()),
            ]);
            Ok(EXIT_HOLDS)
        }
        Command::Separable { what } => match what {
            SeparableCmd::Decompose { perm } => {
                let pi = perm_arg(perm)?;
                match separable::decompose(&pi) {
                    Some(tree) => {
                        out.plain(&tree.to_string());
                        out.record(&[("tree", tree.to_string())]);
                        Ok(EXIT_HOLDS)
                    }
                    None => {
                        out.plain("not separable");
                        out.record(&[("tree", "none".into())]);
                        Ok(EXIT_FAILS)
                    }
                }
            }
            SeparableCmd::Dset { perm } => {
                let pi = perm_arg(perm)?;
                match separable::decompose(&pi) {
                    Some(tree) => {
                        let downset = tree.non_cover_downset();
                        out.plain(&downset.to_string());
                        out.record(&[
                            ("downset", downset.to_string()),
                            ("size", downset.size().to_string()),
                        ]);
                        Ok(EXIT_HOLDS)
                    }
                    None => {
                        out.plain("not separable");
                        out.record(&[("downset", "none".into())]);
                        Ok(EXIT_FAILS)
                    }
                }
            }
            SeparableCmd::Enumerate { target } => {
                let target = target_value(target)?;
                for pi in separable::enumerate_critical(&target)? {
                    out.plain(&pi.to_string());
                    out.record(&[
                        ("len", pi.len().to_string()),
                        ("permutation", pi.to_string()),
                    ]);
                }
                Ok(EXIT_HOLDS)
            }
        },
        Command::Bounds { what } => bounds_cmd(&out, what),
        Command::Search {
            target,
            max_len,
            no_symmetry,
            jobs,
            split_depth,
            checkpoint,
            safety_cap,
        } => {
            let mut job = SearchJob::new(target_value(target)?, *max_len);
            job.use_symmetry = !no_symmetry;
            job.parallelism = *jobs;
            job.split_depth = *split_depth;
            job.safety_cap = *safety_cap;
            job.limits = limits;
            job.checkpoint = checkpoint.clone();
            let outcome = search::search_critical(&job, &|hit| {
                eprintln!("found {hit}");
            })?;
            for hit in &outcome.hits {
                out.plain(&format!("{}: {}", hit.permutation.len(), hit.permutation));
                out.record(&[
                    ("len", hit.permutation.len().to_string()),
                    ("hit", hit.permutation.to_string()),
                ]);
            }
            eprintln!(
                "searched {} nodes, {} candidates, {} subtrees ({} resumed): {} hit(s)",
                outcome.nodes,
                outcome.candidates,
                outcome.subtrees,
                outcome.resumed_subtrees,
                outcome.hits.len()
            );
            Ok(EXIT_HOLDS)
        }
    }
}

fn build(what: &ConstructCmd) -> Result<Construction> {
    match what {
        ConstructCmd::Enkel { r1, r2, s, a, b } => Ok(constructions::critical_skew_sum(
            &perm_value(a)?,
            *r1,
            &perm_value(b)?,
            *r2,
            *s,
        )),
        ConstructCmd::EpicStep { k, perm } => {
            Ok(constructions::minimal_step(&perm_arg(perm)?, *k))
        }
        ConstructCmd::EpicDouble { k, variant, a, b } => {
            let kind = match variant.as_str() {
                "2k+2" => DoubleKind::TwoKPlusTwo,
                "2k+3" => DoubleKind::TwoKPlusThree,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "variant must be 2k+2 or 2k+3, got {other:?}"
                    )))
                }
            };
            Ok(constructions::minimal_double(
                &perm_value(a)?,
                &perm_value(b)?,
                *k,
                kind,
            ))
        }
        ConstructCmd::Ghee { a, b, c, d, x, y } => constructions::sharp_tensor(
            &perm_value(x)?,
            *a,
            *b,
            &perm_value(y)?,
            *c,
            *d,
        ),
        ConstructCmd::NioEmbed { r, s, run, perm } => {
            let run = run.unwrap_or_else(|| constructions::default_guard_run(*r, *s));
            constructions::guarded_embed(&perm_arg(perm)?, *r, *s, run)
        }
        ConstructCmd::NioLift { k, perm } => {
            Ok(constructions::run_lift(&perm_arg(perm)?, *k))
        }
        ConstructCmd::Family15 { n } => constructions::sharp_tensor_family(*n),
        ConstructCmd::Punkt { k } => constructions::minimal_family(*k),
    }
}

fn print_construction(out: &Out, construction: &Construction) {
    out.plain(&construction.recipe.to_string());
    out.plain(&construction.permutation.to_string());
    out.record(&[
        ("name", construction.recipe.name.clone()),
        ("claim", construction.recipe.claim.to_string()),
        ("target", construction.recipe.target.to_string()),
        ("length", construction.recipe.claimed_length.to_string()),
        ("permutation", construction.permutation.to_string()),
    ]);
}

fn print_report(out: &Out, report: &BoundReport) {
    out.plain(&report.to_string());
    let mut fields = vec![
        ("quantity", report.quantity.clone()),
        ("parameters", report.parameters.clone()),
    ];
    if let Some((value, by)) = &report.lower {
        fields.push(("lower", value.to_string()));
        fields.push(("lower_by", by.clone()));
    }
    if let Some((value, by)) = &report.upper {
        fields.push(("upper", value.to_string()));
        fields.push(("upper_by", by.clone()));
    }
    out.record(&fields);
}

fn bounds_cmd(out: &Out, what: &BoundsCmd) -> Result<i32> {
    match what {
        BoundsCmd::Upper {
            k,
            r,
            s,
            threshold_r,
            threshold_d,
        } => {
            let mut asked = false;
            if let Some(k) = k {
                asked = true;
                print_report(
                    out,
                    &BoundReport {
                        quantity: "C(k)".into(),
                        parameters: format!("k={k}"),
                        lower: None,
                        upper: Some((bounds::c_k_upper(*k), "summed-threshold".into())),
                    },
                );
            }
            if let (Some(r), Some(s)) = (r, s) {
                asked = true;
                print_report(
                    out,
                    &BoundReport {
                        quantity: "C(r,s)".into(),
                        parameters: format!("r={r} s={s}"),
                        lower: None,
                        upper: Some((bounds::c_rs_upper(*r, *s), "threshold".into())),
                    },
                );
            }
            if let (Some(r), Some(d)) = (threshold_r, threshold_d) {
                asked = true;
                print_report(
                    out,
                    &BoundReport {
                        quantity: "N(r,d)".into(),
                        parameters: format!("r={r} d={d}"),
                        lower: None,
                        upper: Some((bounds::n_upper(*r, *d)?, "closeness".into())),
                    },
                );
            }
            if !asked {
                return Err(Error::InvalidArgument(
                    "pick a quantity: --k, or --r with --s, or --threshold-r with --threshold-d"
                        .into(),
                ));
            }
            Ok(EXIT_HOLDS)
        }
        BoundsCmd::Lower {
            k_max,
            rs_max,
            k,
            r,
            s,
        } => {
            let tables = bounds::lower_bounds(*k_max, *rs_max);
            if let Some(k) = k {
                if *k > *k_max {
                    return Err(Error::InvalidArgument(format!(
                        "k={k} above k_max={k_max}"
                    )));
                }
                print_report(out, &tables.report_k(*k));
                print_report(out, &tables.report_minimal(*k));
            } else if let (Some(r), Some(s)) = (r, s) {
                if *r > *rs_max || *s > *rs_max {
                    return Err(Error::InvalidArgument(format!(
                        "(r,s)=({r},{s}) above rs_max={rs_max}"
                    )));
                }
                print_report(out, &tables.report_rs(*r, *s));
                print_report(out, &tables.report_sharp(*r, *s));
            } else {
                for k in 0..=(*k_max).min(16) {
                    print_report(out, &tables.report_k(k));
                }
            }
            Ok(EXIT_HOLDS)
        }
        BoundsCmd::Gadget { r, d } => {
            let gadget = bounds::gadget_build(*r, *d)?;
            let close = gadget.functions_close();
            let verified = close && gadget.verify();
            let line = format!(
                "universe={} close={} verified={}",
                gadget.universe_size(),
                close,
                verified
            );
            out.plain(&line);
            out.record(&[
                ("universe", gadget.universe_size().to_string()),
                ("close", close.to_string()),
                ("verified", verified.to_string()),
            ]);
            Ok(if verified { EXIT_HOLDS } else { EXIT_FAILS })
        }
    }
}
