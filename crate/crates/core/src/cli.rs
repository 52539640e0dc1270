//! The `ramsey` command line.
//!
//! Exit status: 0 success, 1 verification failure, 2 bad parameters or
//! input, 3 a resource cap was hit.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bounds::{crossover, parse_exponent, Exponent, FormulaRegistry};
use crate::clique::{all_color_maxima, DEFAULT_NODE_CAP};
use crate::coloring::{ConstructionArgs, ConstructionRegistry, EdgeColoring};
use crate::composition::lefmann_product;
use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::isotropic::{self, DEFAULT_ENUM_CAP};
use crate::moment::{expected_mono_count, recommended_n};
use crate::rng::DEFAULT_SEED;
use crate::witness::{self, SearchConfig, WitnessCertificate, WitnessOutcome, CERT_MAGIC};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_PARAMETER: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ramsey",
    version,
    about = "Build and verify multicolor Ramsey lower-bound colorings"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Master seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads for `certify`.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Search-node cap for clique searches, or the size cap for enumerating F_q^t.
    #[arg(long, global = true)]
    pub cap: Option<u64>,
    /// Tables and reports as CSV.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// (q+1)-color n random self-orthogonal vectors of F_q^t.
    Construct {
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<u32>,
        /// Registered construction to run.
        #[arg(long, default_value = "isotropic")]
        scheme: String,
    },
    /// 2-color n random vectors of F_2^{2t} by scalar-product parity.
    ConstructTwoColor {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        n: usize,
    },
    /// Paley 2-coloring of K_p.
    ConstructPaley {
        #[arg(long)]
        p: u32,
    },
    /// List the self-orthogonal vectors of F_q^t.
    Enumerate {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        t: usize,
    },
    /// Largest monochromatic clique per color of a coloring or certificate file.
    Verify {
        #[arg(long)]
        coloring: PathBuf,
        /// Fail if some color has a clique this large; defaults to t for certificates.
        #[arg(long)]
        target: Option<usize>,
    },
    /// Search for an n-vertex coloring with no monochromatic K_t.
    Certify {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        t: usize,
        /// Defaults to floor(2^{t/2} q^{3t/8}).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 200)]
        attempts: u64,
    },
    /// Rebuild and recheck a certificate.
    Reverify {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Blow-up product: every vertex of A becomes a copy of B.
    Compose {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Exact lower-bound table for r(t; colors).
    Bounds {
        #[arg(long)]
        t: u64,
        #[arg(long)]
        colors: u64,
        /// Added to the exponent of q in each isotropic factor.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        slack: String,
    },
    /// Expected number of monochromatic potential cliques at (q, t, n).
    Moment {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        t: u64,
        /// Defaults to floor(2^{t/2} q^{3t/8 + slack}).
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        slack: String,
    },
}

/// Parses `argv` (program name first) and runs it.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_PARAMETER
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Writes `body` to `--out` when given, else to stdout.
fn emit(global: &Global, stdout: &mut dyn Write, body: &str) -> Result<()> {
    match &global.out {
        Some(path) => {
            fs::write(path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
        }
        None => Ok(stdout.write_all(body.as_bytes())?),
    }
}

fn note(global: &Global, stdout: &mut dyn Write, line: &str) -> Result<()> {
    if global.out.is_some() {
        writeln!(stdout, "{line}")?;
    }
    Ok(())
}

fn prime(q: u32) -> Result<PrimeModulus> {
    PrimeModulus::new(q)
}

fn slack(s: &str) -> Result<Exponent> {
    parse_exponent(s)
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    let g = &cli.global;
    match &cli.command {
        Command::Construct { q, t, n, p, scheme } => {
            let args = ConstructionArgs {
                q: *q,
                t: *t,
                n: *n,
                p: *p,
                seed: g.seed,
                cap: g.cap,
            };
            construct(g, stdout, scheme, &args)
        }
        Command::ConstructTwoColor { t, n } => {
            let args = ConstructionArgs {
                t: Some(*t),
                n: Some(*n),
                seed: g.seed,
                ..Default::default()
            };
            construct(g, stdout, "two-color", &args)
        }
        Command::ConstructPaley { p } => {
            let args = ConstructionArgs {
                p: Some(*p),
                seed: g.seed,
                ..Default::default()
            };
            construct(g, stdout, "paley", &args)
        }
        Command::Enumerate { q, t } => {
            let v = isotropic::enumerate(prime(*q)?, *t, g.cap.unwrap_or(DEFAULT_ENUM_CAP))?;
            let body: String = v.vectors().iter().map(|x| x.to_text() + "\n").collect();
            emit(g, stdout, &body)?;
            note(g, stdout, &format!("enumerated {} vectors", v.len()))?;
            Ok(EXIT_OK)
        }
        Command::Verify { coloring, target } => verify(g, stdout, coloring, *target),
        Command::Certify { q, t, n, attempts } => certify(g, stdout, *q, *t, *n, *attempts),
        Command::Reverify { cert } => {
            let text = read(cert)?;
            let v = witness::reverify_text(&text, g.cap.unwrap_or(DEFAULT_NODE_CAP))?;
            let mut body = String::new();
            if v.is_valid() {
                body.push_str("valid\n");
            } else {
                body.push_str("invalid\n");
                for p in &v.problems {
                    body.push_str(&format!("problem: {p}\n"));
                }
            }
            emit(g, stdout, &body)?;
            Ok(if v.is_valid() {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            })
        }
        Command::Compose { a, b } => {
            let ca = EdgeColoring::parse(&read(a)?)?;
            let cb = EdgeColoring::parse(&read(b)?)?;
            let product = lefmann_product(&ca, &cb)?;
            emit(g, stdout, &product.to_text())?;
            note(
                g,
                stdout,
                &format!("n={} colors={}", product.n(), product.num_colors()),
            )?;
            Ok(EXIT_OK)
        }
        Command::Bounds {
            t,
            colors,
            slack: s,
        } => bounds(g, stdout, *t, *colors, slack(s)?),
        Command::Moment { q, t, n, slack: s } => moment(g, stdout, *q, *t, *n, slack(s)?),
    }
}

fn construct(
    g: &Global,
    stdout: &mut dyn Write,
    scheme: &str,
    args: &ConstructionArgs,
) -> Result<i32> {
    let registry = ConstructionRegistry::with_builtins();
    let built = registry.get(scheme)?.build(args)?;
    let mut coloring = built.coloring;
    for (k, v) in built.vertices.iter().enumerate() {
        coloring = coloring.with_provenance(format!("vertex {k}: {}", v.to_text()));
    }
    emit(g, stdout, &coloring.to_text())?;
    note(
        g,
        stdout,
        &format!(
            "scheme={scheme} seed={} n={} colors={}",
            args.seed,
            coloring.n(),
            coloring.num_colors()
        ),
    )?;
    Ok(EXIT_OK)
}

fn verify(g: &Global, stdout: &mut dyn Write, path: &Path, target: Option<usize>) -> Result<i32> {
    let text = read(path)?;
    let (coloring, default_target) = if text.starts_with(CERT_MAGIC) {
        let cert = WitnessCertificate::parse(&text)?;
        (cert.coloring, Some(cert.t))
    } else {
        (EdgeColoring::parse(&text)?, None)
    };
    let target = target
        .or(default_target)
        .ok_or_else(|| Error::Parameter("verify needs --target for a coloring file".into()))?;
    let maxima = all_color_maxima(&coloring, g.cap.unwrap_or(DEFAULT_NODE_CAP))?;
    let mut body = String::new();
    if g.csv {
        body.push_str("color,max_clique,witness\n");
    } else {
        body.push_str(&format!(
            "# n={} colors={} target={target}\n",
            coloring.n(),
            coloring.num_colors()
        ));
    }
    for w in &maxima {
        let vs: Vec<String> = w.vertices.iter().map(|v| v.to_string()).collect();
        if g.csv {
            body.push_str(&format!("{},{},{}\n", w.color, w.size(), vs.join(" ")));
        } else {
            body.push_str(&format!(
                "color {}: max clique {} at [{}]\n",
                w.color,
                w.size(),
                vs.join(", ")
            ));
        }
    }
    let failed = maxima.iter().any(|w| w.size() >= target);
    if !g.csv {
        body.push_str(if failed {
            "verdict: clique of target size found\n"
        } else {
            "verdict: no clique of target size\n"
        });
    }
    emit(g, stdout, &body)?;
    Ok(if failed { EXIT_VERIFY_FAILED } else { EXIT_OK })
}

fn certify(
    g: &Global,
    stdout: &mut dyn Write,
    q: u32,
    t: usize,
    n: Option<usize>,
    attempts: u64,
) -> Result<i32> {
    let q = prime(q)?;
    let n = match n {
        Some(n) => n,
        None => usize::try_from(recommended_n(q, t as u64, Exponent::from_integer(0)))
            .map_err(|_| Error::Capacity("recommended n does not fit in memory".into()))?,
    };
    let mut cfg = SearchConfig::new(q, t, n, attempts, g.seed);
    cfg.jobs = g.jobs;
    if let Some(cap) = g.cap {
        cfg.node_cap = cap;
    }
    match witness::find_witness(&cfg)? {
        WitnessOutcome::Found(cert) => {
            emit(g, stdout, &cert.to_text())?;
            note(
                g,
                stdout,
                &format!(
                    "seed={} witness at attempt {} of {attempts}",
                    g.seed, cert.attempt
                ),
            )?;
            Ok(EXIT_OK)
        }
        WitnessOutcome::Exhausted(reports) => {
            let mut body = format!(
                "# seed={} q={q} t={t} n={n}: no witness in {attempts} attempts\n",
                g.seed
            );
            if g.csv {
                body.push_str("attempt,attempt_seed,max_cliques\n");
            }
            for r in &reports {
                let sizes: Vec<String> = r.max_cliques.iter().map(|s| s.to_string()).collect();
                if g.csv {
                    body.push_str(&format!(
                        "{},{},{}\n",
                        r.attempt,
                        r.attempt_seed,
                        sizes.join(" ")
                    ));
                } else {
                    let bad: Vec<String> = r
                        .offending(t)
                        .iter()
                        .map(|(c, s)| format!("color {c} has {s}"))
                        .collect();
                    body.push_str(&format!("attempt {}: {}\n", r.attempt, bad.join(", ")));
                }
            }
            writeln!(stdout, "{}", body.trim_end())?;
            Ok(EXIT_VERIFY_FAILED)
        }
    }
}

fn bounds(g: &Global, stdout: &mut dyn Write, t: u64, colors: u64, slack: Exponent) -> Result<i32> {
    if colors < 2 {
        return Err(Error::Parameter(format!(
            "need at least 2 colors, got {colors}"
        )));
    }
    if t == 0 {
        return Err(Error::Parameter("t must be positive".into()));
    }
    let table = FormulaRegistry::with_builtins().table(t, colors, slack);
    let mut body = String::new();
    let tail = if slack == Exponent::from_integer(0) {
        "lower-order terms set to 0, so every value is a conservative lower bound on r-1"
    } else {
        "slack added to the exponent of q in each isotropic factor"
    };
    let sl = format!("{slack}");
    if g.csv {
        body.push_str(&format!("# t={t} colors={colors} slack={sl}: {tail}\n"));
        body.push_str("tag,expression,value,log2,growth\n");
    } else {
        body.push_str(&format!(
            "# r(t; colors) - 1 >= value at t={t} colors={colors} slack={sl}\n# {tail}\n"
        ));
    }
    for r in &table {
        let value = r.printable_value().unwrap_or_else(|| "-".into());
        if g.csv {
            body.push_str(&format!(
                "{},{},{},{:.6},{:.6}\n",
                r.tag,
                r.expression,
                value,
                r.log2,
                r.growth_rate()
            ));
        } else {
            body.push_str(&format!(
                "{:<20} {:<28} value={} log2={:.6} growth={:.4}\n",
                r.tag,
                r.expression.to_string(),
                value,
                r.log2,
                r.growth_rate()
            ));
        }
    }
    if !g.csv && colors >= 3 {
        let line = match crossover(colors, slack, 512)? {
            Some(t0) => format!("# new bound >= baseline for every t in {t0}..=512\n"),
            None => "# new bound below baseline at t=512\n".to_string(),
        };
        body.push_str(&line);
    }
    emit(g, stdout, &body)?;
    Ok(EXIT_OK)
}

fn moment(
    g: &Global,
    stdout: &mut dyn Write,
    q: u32,
    t: u64,
    n: Option<u64>,
    slack: Exponent,
) -> Result<i32> {
    let q = prime(q)?;
    let tt = usize::try_from(t).map_err(|_| Error::Parameter("t too large".into()))?;
    let v_size = isotropic::enumerate(q, tt, g.cap.unwrap_or(DEFAULT_ENUM_CAP))?.len() as u64;
    let n = match n {
        Some(n) => n,
        None => u64::try_from(recommended_n(q, t, slack))
            .map_err(|_| Error::Capacity("n overflows".into()))?,
    };
    let r = expected_mono_count(q, t, n, v_size)?;
    let body = if g.csv {
        format!(
            "q,t,n,v_size,p,log2_count_bound,log2_expected\n{q},{t},{n},{v_size},{:.9},{:.6},{:.6}\n",
            r.p(),
            r.log2_count,
            r.log2_expected
        )
    } else {
        format!(
            "q={q} t={t} n={n} |V|={v_size} p={:.6}\ncount bound: 2^{:.4}\nexpected monochromatic potential cliques <= 2^{:.4} = {:.6e}\n",
            r.p(),
            r.log2_count,
            r.log2_expected,
            r.expected()
        )
    };
    emit(g, stdout, &body)?;
    Ok(EXIT_OK)
}
