//! Randomized search for concrete witnesses of `r(t; q+1) > n`, and the
//! re-verifiable certificate file they are stored in.
//!
//! Attempt `k` (1-based) draws `n` distinct members of V from the stream
//! seeded with `derive_seed(seed, k)` and colors them with the pair-keyed
//! coins under that same derived seed. The certificate keeps the master
//! seed, the attempt index and the vertices, so the coloring can be rebuilt
//! and compared byte for byte.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::clique::all_color_maxima;
use crate::coloring::{build_isotropic, ConstructionParams, EdgeColoring};
use crate::error::{Error, Result};
use crate::field::{FieldVector, PrimeModulus};
use crate::isotropic::{self, IsotropicSet};
use crate::rng::{derive_seed, stream};

pub const CERT_MAGIC: &str = "ramsey-certificate";
pub const CERT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub q: PrimeModulus,
    pub t: usize,
    pub n: usize,
    pub max_attempts: u64,
    pub seed: u64,
    pub node_cap: u64,
    pub enum_cap: u64,
    pub jobs: usize,
}

impl SearchConfig {
    pub fn new(q: PrimeModulus, t: usize, n: usize, max_attempts: u64, seed: u64) -> Self {
        SearchConfig {
            q,
            t,
            n,
            max_attempts,
            seed,
            node_cap: crate::clique::DEFAULT_NODE_CAP,
            enum_cap: isotropic::DEFAULT_ENUM_CAP,
            jobs: 1,
        }
    }
}

/// Outcome of one attempt: the largest monochromatic clique in every color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttemptReport {
    pub attempt: u64,
    pub attempt_seed: u64,
    pub max_cliques: Vec<usize>,
}

impl AttemptReport {
    /// Colors (1-based) whose largest clique reaches `t`, with the size found.
    pub fn offending(&self, t: usize) -> Vec<(usize, usize)> {
        self.max_cliques
            .iter()
            .enumerate()
            .filter(|(_, &s)| s >= t)
            .map(|(c, &s)| (c + 1, s))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessCertificate {
    pub q: PrimeModulus,
    pub t: usize,
    pub n: usize,
    pub seed: u64,
    pub attempt: u64,
    pub attempt_seed: u64,
    pub vertices: Vec<FieldVector>,
    pub coloring: EdgeColoring,
    pub max_cliques: Vec<usize>,
}

#[derive(Debug, Clone)]
pub enum WitnessOutcome {
    Found(WitnessCertificate),
    Exhausted(Vec<AttemptReport>),
}

struct Attempt {
    report: AttemptReport,
    vertices: Vec<FieldVector>,
    coloring: EdgeColoring,
}

fn run_attempt(cfg: &SearchConfig, v: &IsotropicSet, k: u64) -> Result<Attempt> {
    let attempt_seed = derive_seed(cfg.seed, k);
    let vertices = isotropic::sample_distinct(v, cfg.n, &mut stream(attempt_seed))?;
    let params = ConstructionParams::new(cfg.q, cfg.t, attempt_seed, cfg.n)?;
    let coloring = build_isotropic(&params, &vertices)?;
    let max_cliques = all_color_maxima(&coloring, cfg.node_cap)?
        .iter()
        .map(|w| w.size())
        .collect();
    Ok(Attempt {
        report: AttemptReport {
            attempt: k,
            attempt_seed,
            max_cliques,
        },
        vertices,
        coloring,
    })
}

/// Tries attempts `1..=max_attempts` and returns the lowest-index success.
///
/// With `jobs > 1` attempts run in batches of `jobs` on a dedicated pool;
/// the answer is the same as a sequential run.
pub fn find_witness(cfg: &SearchConfig) -> Result<WitnessOutcome> {
    ConstructionParams::new(cfg.q, cfg.t, cfg.seed, cfg.n)?;
    let v = isotropic::enumerate(cfg.q, cfg.t, cfg.enum_cap)?;
    if cfg.n > v.len() {
        return Err(Error::Capacity(format!(
            "n={} exceeds |V|={}",
            cfg.n,
            v.len()
        )));
    }
    let jobs = cfg.jobs.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Parameter(format!("cannot start {jobs} workers: {e}")))?;
    let mut failures = Vec::new();
    let mut next = 1u64;
    while next <= cfg.max_attempts {
        let end = (next + jobs as u64 - 1).min(cfg.max_attempts);
        let batch: Vec<Result<Attempt>> = if jobs == 1 {
            vec![run_attempt(cfg, &v, next)]
        } else {
            pool.install(|| {
                (next..=end)
                    .into_par_iter()
                    .map(|k| run_attempt(cfg, &v, k))
                    .collect()
            })
        };
        for a in batch {
            let a = a?;
            if a.report.max_cliques.iter().all(|&s| s < cfg.t) {
                return Ok(WitnessOutcome::Found(WitnessCertificate {
                    q: cfg.q,
                    t: cfg.t,
                    n: cfg.n,
                    seed: cfg.seed,
                    attempt: a.report.attempt,
                    attempt_seed: a.report.attempt_seed,
                    vertices: a.vertices,
                    coloring: a.coloring,
                    max_cliques: a.report.max_cliques,
                }));
            }
            failures.push(a.report);
        }
        next = end + 1;
    }
    Ok(WitnessOutcome::Exhausted(failures))
}

impl WitnessCertificate {
    pub fn colors(&self) -> usize {
        self.q.get() as usize + 1
    }

    pub fn is_witness(&self) -> bool {
        self.max_cliques.len() == self.colors() && self.max_cliques.iter().all(|&s| s < self.t)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{CERT_MAGIC} {CERT_VERSION}");
        let _ = writeln!(s, "q={}", self.q);
        let _ = writeln!(s, "t={}", self.t);
        let _ = writeln!(s, "colors={}", self.colors());
        let _ = writeln!(s, "n={}", self.n);
        let _ = writeln!(s, "seed={}", self.seed);
        let _ = writeln!(s, "attempt={}", self.attempt);
        let _ = writeln!(s, "attempt-seed={}", self.attempt_seed);
        let sizes: Vec<String> = self.max_cliques.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "max-clique={}", sizes.join(","));
        let verdict = if self.is_witness() {
            "valid"
        } else {
            "invalid"
        };
        let _ = writeln!(s, "verdict={verdict}");
        let _ = writeln!(s, "vertices");
        for v in &self.vertices {
            let _ = writeln!(s, "{}", v.to_text());
        }
        let _ = writeln!(s, "coloring");
        s.push_str(&self.coloring.to_text());
        s
    }

    pub fn parse(text: &str) -> Result<WitnessCertificate> {
        let mut lines = text
            .split_inclusive('\n')
            .enumerate()
            .map(|(k, l)| (k + 1, l));
        let mut next_line = |what: &str| -> Result<(usize, &str)> {
            lines
                .next()
                .map(|(k, l)| (k, l.strip_suffix('\n').unwrap_or(l)))
                .ok_or_else(|| Error::parse(0, format!("missing {what}")))
        };
        let (ln, magic) = next_line("header")?;
        if magic != format!("{CERT_MAGIC} {CERT_VERSION}") {
            return Err(Error::parse(
                ln,
                format!("expected `{CERT_MAGIC} {CERT_VERSION}`"),
            ));
        }
        let mut field = |key: &str| -> Result<(usize, String)> {
            let (ln, line) = next_line(key)?;
            line.strip_prefix(key)
                .and_then(|r| r.strip_prefix('='))
                .map(|v| (ln, v.to_string()))
                .ok_or_else(|| Error::parse(ln, format!("expected `{key}=...`")))
        };
        fn num<T: std::str::FromStr>(ln: usize, s: &str) -> Result<T> {
            s.parse()
                .map_err(|_| Error::parse(ln, format!("bad number {s:?}")))
        }
        let (ln, q) = field("q")?;
        let q = PrimeModulus::new(num(ln, &q)?)?;
        let (ln, t) = field("t")?;
        let t: usize = num(ln, &t)?;
        let (ln, colors) = field("colors")?;
        if num::<usize>(ln, &colors)? != q.get() as usize + 1 {
            return Err(Error::parse(ln, "colors must be q+1"));
        }
        let (ln, n) = field("n")?;
        let n: usize = num(ln, &n)?;
        let (ln, seed) = field("seed")?;
        let seed: u64 = num(ln, &seed)?;
        let (ln, attempt) = field("attempt")?;
        let attempt: u64 = num(ln, &attempt)?;
        let (ln, attempt_seed) = field("attempt-seed")?;
        let attempt_seed: u64 = num(ln, &attempt_seed)?;
        let (ln, sizes) = field("max-clique")?;
        let max_cliques = sizes
            .split(',')
            .map(|x| num::<usize>(ln, x))
            .collect::<Result<Vec<_>>>()?;
        let (ln, verdict) = field("verdict")?;
        if verdict != "valid" && verdict != "invalid" {
            return Err(Error::parse(ln, "verdict must be valid or invalid"));
        }
        let (ln, tag) = next_line("vertices")?;
        if tag != "vertices" {
            return Err(Error::parse(ln, "expected `vertices`"));
        }
        let mut vertices = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, line) = next_line("vertex")?;
            let v = FieldVector::parse_text(line).map_err(|e| Error::parse(ln, e.to_string()))?;
            vertices.push(v);
        }
        let (ln, tag) = next_line("coloring")?;
        if tag != "coloring" {
            return Err(Error::parse(ln, "expected `coloring`"));
        }
        let rest: String = lines.map(|(_, l)| l).collect();
        let coloring = EdgeColoring::parse(&rest)?;
        Ok(WitnessCertificate {
            q,
            t,
            n,
            seed,
            attempt,
            attempt_seed,
            vertices,
            coloring,
            max_cliques,
        })
    }
}

/// What re-verification found; `problems` is empty iff the certificate holds.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Verification {
    pub problems: Vec<String>,
    pub recomputed_max_cliques: Vec<usize>,
}

impl Verification {
    pub fn is_valid(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Rebuilds the coloring from `(q, t, attempt seed, vertices)`, compares it
/// byte for byte and reruns the clique search.
pub fn reverify(cert: &WitnessCertificate, node_cap: u64) -> Result<Verification> {
    let mut out = Verification::default();
    if cert.attempt_seed != derive_seed(cert.seed, cert.attempt) {
        out.problems
            .push("attempt seed does not derive from seed and attempt".into());
    }
    if cert.vertices.len() != cert.n {
        out.problems.push(format!(
            "{} vertices listed for n={}",
            cert.vertices.len(),
            cert.n
        ));
    }
    let params = match ConstructionParams::new(cert.q, cert.t, cert.attempt_seed, cert.n) {
        Ok(p) => p,
        Err(e) => {
            out.problems.push(e.to_string());
            return Ok(out);
        }
    };
    let rebuilt = match build_isotropic(&params, &cert.vertices) {
        Ok(c) => c,
        Err(e) => {
            out.problems.push(format!("cannot rebuild coloring: {e}"));
            return Ok(out);
        }
    };
    if rebuilt.to_text() != cert.coloring.to_text() {
        out.problems
            .push("stored coloring differs from the rebuilt one".into());
    }
    out.recomputed_max_cliques = all_color_maxima(&rebuilt, node_cap)?
        .iter()
        .map(|w| w.size())
        .collect();
    if out.recomputed_max_cliques != cert.max_cliques {
        out.problems.push(format!(
            "stored clique sizes {:?} but search finds {:?}",
            cert.max_cliques, out.recomputed_max_cliques
        ));
    }
    if let Some((c, s)) = out
        .recomputed_max_cliques
        .iter()
        .enumerate()
        .find(|(_, &s)| s >= cert.t)
    {
        out.problems.push(format!(
            "color {} has a clique of size {s} >= t={}",
            c + 1,
            cert.t
        ));
    }
    Ok(out)
}

/// Parses and re-verifies certificate text; the text must also be the
/// canonical serialization of what it parses to.
pub fn reverify_text(text: &str, node_cap: u64) -> Result<Verification> {
    let cert = match WitnessCertificate::parse(text) {
        Ok(c) => c,
        Err(e) => {
            return Ok(Verification {
                problems: vec![format!("unreadable certificate: {e}")],
                recomputed_max_cliques: Vec::new(),
            })
        }
    };
    let mut v = reverify(&cert, node_cap)?;
    if cert.to_text() != text {
        v.problems
            .push("certificate is not in canonical form".into());
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clique::DEFAULT_NODE_CAP;

    fn cfg(q: u32, t: usize, n: usize, attempts: u64, seed: u64) -> SearchConfig {
        SearchConfig::new(PrimeModulus::new(q).unwrap(), t, n, attempts, seed)
    }

    fn found(c: &SearchConfig) -> WitnessCertificate {
        match find_witness(c).unwrap() {
            WitnessOutcome::Found(w) => w,
            WitnessOutcome::Exhausted(r) => panic!("no witness: {r:?}"),
        }
    }

    #[test]
    fn small_witness_roundtrips() {
        let w = found(&cfg(3, 4, 8, 50, 1));
        assert!(w.is_witness());
        let text = w.to_text();
        assert_eq!(WitnessCertificate::parse(&text).unwrap(), w);
        assert!(reverify(&w, DEFAULT_NODE_CAP).unwrap().is_valid());
        assert!(reverify_text(&text, DEFAULT_NODE_CAP).unwrap().is_valid());
    }

    #[test]
    fn parallel_search_matches_sequential() {
        let seq = found(&cfg(3, 4, 11, 100, 7));
        let mut par_cfg = cfg(3, 4, 11, 100, 7);
        par_cfg.jobs = 4;
        assert_eq!(found(&par_cfg), seq);
    }

    #[test]
    fn exhausted_search_reports_every_attempt() {
        // all of V at (3, 4) has color-1 cliques of size 4
        match find_witness(&cfg(3, 4, 33, 3, 0)).unwrap() {
            WitnessOutcome::Exhausted(r) => {
                assert_eq!(r.len(), 3);
                assert!(r.iter().all(|a| a.offending(4).contains(&(1, 4))));
            }
            WitnessOutcome::Found(_) => panic!("unexpected witness"),
        }
    }

    #[test]
    fn parameter_errors() {
        assert!(find_witness(&cfg(3, 3, 5, 1, 0)).is_err());
        assert!(matches!(
            find_witness(&cfg(3, 4, 34, 1, 0)),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn tampering_is_detected() {
        let w = found(&cfg(3, 4, 8, 50, 3));
        let text = w.to_text();
        let start = text.find("coloring\n").unwrap() + "coloring\n".len();
        let color_start = text[start..].find("\n# provenance").unwrap() + start;
        let data = text[color_start..].find('\n').unwrap() + color_start;
        let mut flips = 0;
        for (i, b) in text.bytes().enumerate().skip(data) {
            if !b.is_ascii_digit() {
                continue;
            }
            let mut bytes = text.clone().into_bytes();
            bytes[i] = if b == b'3' { b'4' } else { b'3' };
            let mutated = String::from_utf8(bytes).unwrap();
            assert!(
                !reverify_text(&mutated, DEFAULT_NODE_CAP)
                    .unwrap()
                    .is_valid(),
                "byte {i}"
            );
            flips += 1;
        }
        assert!(flips > 0);
        let bumped = text.replacen("seed=", "seed=1", 1);
        assert!(!reverify_text(&bumped, DEFAULT_NODE_CAP).unwrap().is_valid());
        assert!(
            !reverify_text(&text.replacen("q=3", "q=03", 1), DEFAULT_NODE_CAP)
                .unwrap()
                .is_valid()
        );
    }
}
