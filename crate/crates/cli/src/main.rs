//! `mcov`: exact matroid cover computations and the lemma check suite.
//!
//! Exit codes: 0 success (queries that compute an answer, passing suites),
//! 1 check failures (failing suite rows, invalid pyramids), 2 usage or
//! input errors, 3 exhausted search budgets.

use clap::{Parser, Subcommand};
use mcov_cli::checks::Wanted;
use mcov_cli::report::{emit, summarize};
use mcov_cli::suite::{run_suite, SuiteConfig};
use mcov_core::cover::{cover_kd, tau_a, tau_weighted};
use mcov_core::io;
use mcov_core::matroid::{Matroid, Minor};
use mcov_core::pyramid::{
    augment_pyramid, bound_pyramid, climb_inductive, pg_pyramid, shrink_pyramid,
    verify_pyramid, ClimbResult, Pyramid,
};
use mcov_core::structure::{
    has_uniform_minor, is_d_firm, is_d_scattered, thickness, Thickness,
};
use mcov_core::{Error, SetFamily, Subset, DEFAULT_NODE_BUDGET};
use std::path::{Path, PathBuf};
use std::sync::Arc;

#[derive(Parser)]
#[command(
    name = "mcov",
    version,
    about = "Exact covering numbers, structure analysis, and pyramid operations on small matroids"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rank-a covering number with an optimal witness cover
    Tau {
        #[arg(long)]
        a: usize,
        file: PathBuf,
    },
    /// Weighted covering number (flats of rank k cost d^k) with a witness
    Tauw {
        #[arg(long)]
        d: u64,
        file: PathBuf,
    },
    /// Thickness of the matroid, or of a subset given as a comma list
    Thickness {
        file: PathBuf,
        #[arg(long)]
        subset: Option<String>,
    },
    /// Firmness of a family against hyperplane concentration
    Firm {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        family: PathBuf,
        file: PathBuf,
    },
    /// Scatteredness of a family (optimal cover keeps members apart)
    Scatter {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        family: PathBuf,
        file: PathBuf,
    },
    /// Search for a uniform minor U_{rank,size}
    Minor {
        #[arg(long, num_args = 2, value_names = ["RANK", "SIZE"])]
        uniform: Vec<usize>,
        file: PathBuf,
    },
    /// Constructive rank-a cover for matroids with no U_{a+1,b} minor
    CoverKd {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        file: PathBuf,
    },
    /// Pyramid construction, validation, and operations
    Pyramid {
        #[command(subcommand)]
        op: PyramidCmd,
    },
    /// Run the check suite over a catalog of instances
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restrict to one or more lemma ids (repeatable)
        #[arg(long = "lemma")]
        lemmas: Vec<String>,
        /// Worker threads (0 = all cores)
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Record wall-clock milliseconds per row (breaks byte-identical
        /// output across runs)
        #[arg(long)]
        times: bool,
        #[arg(long, default_value = "mcov-witnesses")]
        witness_dir: PathBuf,
        /// Node budget for exhaustive searches (also MCOV_BUDGET)
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Write every catalog instance to a directory as matroid files
    Catalog {
        #[arg(long)]
        emit: PathBuf,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum PyramidCmd {
    /// Validate a pyramid file (exit 0 valid, 1 invalid)
    Verify { file: PathBuf },
    /// Build the projective-geometry pyramid over GF(q) of height h
    Pg {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        h: usize,
        #[arg(long, default_value_t = 2)]
        d: u64,
        /// Write the pyramid and its base matroid into this directory
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Contract the spine segment i..j
    Shrink {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        file: PathBuf,
    },
    /// Shrink to height h and restrict to the first member's fiber
    Bound {
        #[arg(long)]
        h: usize,
        file: PathBuf,
    },
    /// Rebuild a taller pyramid by splitting classes of a contracted element
    Augment {
        #[arg(long)]
        element: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        family: PathBuf,
        file: PathBuf,
    },
    /// One inductive climb step on a height-1 pyramid
    Climb {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        family: PathBuf,
        file: PathBuf,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version exit 0; genuine usage errors exit 2.
            e.exit();
        }
    };
    std::process::exit(run(cli));
}

/// Exit code for a computation error: budgets are 3, everything else is an
/// input problem.
fn error_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExhausted { .. } => 3,
        _ => 2,
    }
}

fn report_err(e: &Error) -> i32 {
    eprintln!("error: {e}");
    error_code(e)
}

fn read_text(path: &Path) -> Result<String, i32> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        2
    })
}

fn load_view(path: &Path) -> Result<(Arc<Matroid>, Minor), i32> {
    let text = read_text(path)?;
    let m = io::parse_matroid(&text).map_err(|e| report_err(&e))?;
    let arc = Arc::new(m);
    Ok((arc.clone(), Minor::of(arc)))
}

fn load_family(path: &Path, n: usize) -> Result<SetFamily, i32> {
    let text = read_text(path)?;
    io::parse_family(&text, n).map_err(|e| report_err(&e))
}

fn env_budget() -> Result<u64, i32> {
    match std::env::var("MCOV_BUDGET") {
        Ok(s) => s.trim().parse::<u64>().map_err(|_| {
            eprintln!("error: MCOV_BUDGET must be a nonnegative integer, got {s:?}");
            2
        }),
        Err(_) => Ok(DEFAULT_NODE_BUDGET),
    }
}

fn parse_subset(text: &str) -> Result<Subset, i32> {
    let mut s = Subset::EMPTY;
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let e: usize = part.parse().map_err(|_| {
            eprintln!("error: bad element {part:?} in subset list");
            2
        })?;
        if e >= mcov_core::MAX_GROUND {
            eprintln!("error: element {e} out of range");
            return Err(2);
        }
        s = s.with(e);
    }
    Ok(s)
}

fn subset_list(s: Subset) -> String {
    if s.is_empty() {
        return "-".to_string();
    }
    s.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
}

fn run(cli: Cli) -> i32 {
    match cli.cmd {
        Cmd::Tau { a, file } => {
            let (_, ctx) = match load_view(&file) {
                Ok(v) => v,
                Err(c) => return c,
            };
            match tau_a(&ctx, a) {
                Ok((tau, cover)) => {
                    println!("{tau}");
                    match io::write_cover(&ctx, &cover) {
                        Ok(text) => print!("{text}"),
                        Err(e) => return report_err(&e),
                    }
                    0
                }
                Err(e) => report_err(&e),
            }
        }
        Cmd::Tauw { d, file } => {
            let (_, ctx) = match load_view(&file) {
                Ok(v) => v,
                Err(c) => return c,
            };
            match tau_weighted(&ctx, d) {
                Ok((tau, cover)) => {
                    println!("{tau}");
                    match io::write_cover(&ctx, &cover) {
                        Ok(text) => print!("{text}"),
                        Err(e) => return report_err(&e),
                    }
                    0
                }
                Err(e) => report_err(&e),
            }
        }
        Cmd::Thickness { file, subset } => {
            let (_, ctx) = match load_view(&file) {
                Ok(v) => v,
                Err(c) => return c,
            };
            let x = match subset {
                Some(text) => match parse_subset(&text) {
                    Ok(s) => s,
                    Err(c) => return c,
                },
                None => ctx.live(),
            };
            match thickness(&ctx, x) {
                Ok(Thickness::Finite(v)) => {
                    println!("{v}");
                    0
                }
                Ok(Thickness::Unbounded) => {
                    println!("unbounded");
                    0
                }
                Err(e) => report_err(&e),
            }
        }
        Cmd::Firm { d, family, file } => {
            let (arc, ctx) = match load_view(&file) {
                Ok(v) => v,
                Err(c) => return c,
            };
            let fam = match load_family(&family, arc.n()) {
                Ok(f) => f,
                Err(c) => return c,
            };
            match is_d_firm(&ctx, &fam, d) {
                Ok(chk) => {
                    if chk.firm {
                        println!("firm");
                    } else {
                        let idx = chk
                            .witness
                            .iter()
                            .map(|i| i.to_string())
                            .collect::<Vec<_>>()
                            .join(",");
                        println!("not-firm witness={idx}");
                    }
                    0
                }
                Err(e) => report_err(&e),
            }
        }
        Cmd::Scatter { d, family, file } => {
            let (arc, ctx) = match load_view(&file) {
                Ok(v) => v,
                Err(c) => return c,
            };
            let fam = match load_family(&family, arc.n()) {
                Ok(f) => f,
                Err(c) => return c,
            };
            match is_d_scattered(&ctx, &fam, d) {
                Ok(chk) => {
                    if chk.scattered {
                        println!("scattered");
                    } else if let Some(i) = chk.thin_member {
                        println!("not-scattered thin-member={i}");
                    } else {
                        println!(
                            "not-scattered closure-weight={} cover-weight={}",
                            chk.closure_weight, chk.cover_weight
                        );
                    }
                    0
                }
                Err(e) => report_err(&e),
            }
        }
        Cmd::Minor { uniform, file } => {
            if uniform.len() != 2 || uniform[0] == 0 {
                eprintln!("error: --uniform needs a rank >= 1 and a size");
                return 2;
            }
            let (a, b) = (uniform[0] - 1, uniform[1]);
            let (_, ctx) = match load_view(&file) {
                Ok(v) => v,
                Err(c) => return c,
            };
            let budget = match env_budget() {
                Ok(v) => v,
                Err(c) => return c,
            };
            match has_uniform_minor(&ctx, a, b, budget) {
                Ok(Some(w)) => {
                    println!("contract={} arc={}", subset_list(w.contract), subset_list(w.arc));
                    0
                }
                Ok(None) => {
                    println!("none");
                    0
                }
                Err(e) => report_err(&e),
            }
        }
        Cmd::CoverKd { a, b, file } => {
            let (_, ctx) = match load_view(&file) {
                Ok(v) => v,
                Err(c) => return c,
            };
            match cover_kd(&ctx, a, b) {
                Ok(cover) => match io::write_cover(&ctx, &cover) {
                    Ok(text) => {
                        print!("{text}");
                        0
                    }
                    Err(e) => report_err(&e),
                },
                Err(e) => report_err(&e),
            }
        }
        Cmd::Pyramid { op } => run_pyramid(op),
        Cmd::Check { suite, seed, lemmas, jobs, times, witness_dir, budget } => {
            let wanted = match Wanted::from_ids(lemmas.iter().map(String::as_str)) {
                Ok(w) => w,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return 2;
                }
            };
            let env = match env_budget() {
                Ok(v) => v,
                Err(c) => return c,
            };
            let cfg = SuiteConfig {
                suite,
                seed,
                wanted,
                budget: budget.unwrap_or(env),
                jobs,
                with_times: times,
            };
            let records = match run_suite(&cfg) {
                Ok(r) => r,
                Err(e) => return report_err(&e),
            };
            let stdout = std::io::stdout();
            if let Err(e) = emit(&mut stdout.lock(), &records, &witness_dir) {
                eprintln!("error: writing report: {e}");
                return 2;
            }
            let mut fails = 0u64;
            let mut budgets = 0u64;
            for (lemma, counts) in summarize(&records) {
                eprintln!(
                    "{lemma}: {} pass, {} fail, {} vacuous, {} budget-exceeded",
                    counts[0], counts[1], counts[2], counts[3]
                );
                fails += counts[1];
                budgets += counts[3];
            }
            eprintln!("total: {} records", records.len());
            if fails > 0 {
                1
            } else if budgets > 0 {
                3
            } else {
                0
            }
        }
        Cmd::Catalog { emit: dir, suite, seed } => {
            let entries = match mcov_core::catalog::generate(&suite, seed) {
                Ok(e) => e,
                Err(e) => return report_err(&e),
            };
            if let Err(e) = std::fs::create_dir_all(&dir) {
                eprintln!("error: cannot create {}: {e}", dir.display());
                return 2;
            }
            for entry in &entries {
                let file = dir.join(format!("{}.matroid", entry.id));
                let text = io::write_matroid(&entry.matroid);
                if let Err(e) = std::fs::write(&file, text) {
                    eprintln!("error: cannot write {}: {e}", file.display());
                    return 2;
                }
                println!("{}\t{}", entry.id, file.display());
            }
            0
        }
    }
}

/// Load a pyramid file and realize it against its referenced matroid,
/// resolving a relative reference against the pyramid file's directory.
fn load_pyramid(path: &Path) -> Result<(Pyramid, String), i32> {
    let text = read_text(path)?;
    let pf = io::parse_pyramid(&text).map_err(|e| report_err(&e))?;
    let reference = pf.matroid_ref.clone();
    let mpath = {
        let p = Path::new(&reference);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            path.parent().unwrap_or(Path::new(".")).join(p)
        }
    };
    let mtext = read_text(&mpath)?;
    let matroid = io::parse_matroid(&mtext).map_err(|e| report_err(&e))?;
    let pyramid = pf.realize(Arc::new(matroid)).map_err(|e| report_err(&e))?;
    Ok((pyramid, reference))
}

fn print_pyramid(p: &Pyramid, reference: &str) -> i32 {
    match io::write_pyramid(p, reference) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => report_err(&e),
    }
}

fn run_pyramid(op: PyramidCmd) -> i32 {
    match op {
        PyramidCmd::Verify { file } => {
            let (pyramid, _) = match load_pyramid(&file) {
                Ok(v) => v,
                Err(c) => return c,
            };
            match verify_pyramid(&pyramid) {
                Ok(chk) if chk.valid => {
                    println!("valid");
                    0
                }
                Ok(chk) => {
                    println!("invalid: {}", chk.reason.unwrap_or_default());
                    1
                }
                Err(e) => report_err(&e),
            }
        }
        PyramidCmd::Pg { q, h, d, emit } => {
            let pyramid = match pg_pyramid(q, h, d) {
                Ok(p) => p,
                Err(e) => return report_err(&e),
            };
            let reference = format!("pg-{}-{q}.matroid", h + 1);
            match emit {
                Some(dir) => {
                    if let Err(e) = std::fs::create_dir_all(&dir) {
                        eprintln!("error: cannot create {}: {e}", dir.display());
                        return 2;
                    }
                    let mfile = dir.join(&reference);
                    if let Err(e) = std::fs::write(&mfile, io::write_matroid(pyramid.ctx.base()))
                    {
                        eprintln!("error: cannot write {}: {e}", mfile.display());
                        return 2;
                    }
                    let pfile = dir.join(format!("pyramid-pg-q{q}-h{h}.pyramid"));
                    let text = match io::write_pyramid(&pyramid, &reference) {
                        Ok(t) => t,
                        Err(e) => return report_err(&e),
                    };
                    if let Err(e) = std::fs::write(&pfile, text) {
                        eprintln!("error: cannot write {}: {e}", pfile.display());
                        return 2;
                    }
                    println!("{}", mfile.display());
                    println!("{}", pfile.display());
                    0
                }
                None => print_pyramid(&pyramid, &reference),
            }
        }
        PyramidCmd::Shrink { i, j, file } => {
            let (pyramid, reference) = match load_pyramid(&file) {
                Ok(v) => v,
                Err(c) => return c,
            };
            match shrink_pyramid(&pyramid, i, j) {
                Ok(out) => print_pyramid(&out, &reference),
                Err(e) => report_err(&e),
            }
        }
        PyramidCmd::Bound { h, file } => {
            let (pyramid, reference) = match load_pyramid(&file) {
                Ok(v) => v,
                Err(c) => return c,
            };
            match bound_pyramid(&pyramid, h) {
                Ok(out) => print_pyramid(&out, &reference),
                Err(e) => report_err(&e),
            }
        }
        PyramidCmd::Augment { element, q, family, file } => {
            let (pyramid, reference) = match load_pyramid(&file) {
                Ok(v) => v,
                Err(c) => return c,
            };
            let n = pyramid.ctx.base().n();
            let fam = match load_family(&family, n) {
                Ok(f) => f,
                Err(c) => return c,
            };
            let m = Minor::of(pyramid.ctx.base().clone());
            match augment_pyramid(&m, element, &fam, q, &pyramid) {
                Ok(out) => print_pyramid(&out, &reference),
                Err(e) => report_err(&e),
            }
        }
        PyramidCmd::Climb { a, d, family, file } => {
            let (pyramid, _) = match load_pyramid(&file) {
                Ok(v) => v,
                Err(c) => return c,
            };
            let n = pyramid.ctx.base().n();
            let fam = match load_family(&family, n) {
                Ok(f) => f,
                Err(c) => return c,
            };
            let budget = match env_budget() {
                Ok(v) => v,
                Err(c) => return c,
            };
            match climb_inductive(&pyramid, &fam, a, d, budget) {
                Ok(ClimbResult::FirmUp(y)) => {
                    println!("firm-up");
                    match io::write_family(&y) {
                        Ok(text) => {
                            print!("{text}");
                            0
                        }
                        Err(e) => report_err(&e),
                    }
                }
                Ok(ClimbResult::Lifted(parts)) => {
                    println!("lifted count={}", parts.len());
                    for part in &parts {
                        match io::write_family(part) {
                            Ok(text) => print!("{text}"),
                            Err(e) => return report_err(&e),
                        }
                    }
                    0
                }
                Err(e) => report_err(&e),
            }
        }
    }
}
