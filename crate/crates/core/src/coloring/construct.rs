//! The colorings this toolkit knows how to build, and a registry to select
//! them by name.

use std::collections::BTreeMap;

use rand::seq::index;

use super::{Color, EdgeColoring};
use crate::error::{Error, Result};
use crate::field::{is_prime, FieldVector, PrimeModulus};
use crate::isotropic;
use crate::rng::{pair_coin, stream};

/// Color of the pair `{u, v}` in the (q+1)-coloring.
///
/// A nonzero scalar product `i` gives color `i`; a zero product gives `q` or
/// `q + 1` according to the pair-keyed coin under `seed`.
pub fn chi_color(u: &FieldVector, v: &FieldVector, seed: u64) -> Result<Color> {
    if u == v {
        return Err(Error::Input(format!("self-loop at {u}")));
    }
    let d = u.dot(v)?;
    let q = u.modulus().get() as Color;
    Ok(if d != 0 {
        d as Color
    } else if pair_coin(seed, u, v) {
        q + 1
    } else {
        q
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstructionParams {
    pub q: PrimeModulus,
    pub t: usize,
    pub seed: u64,
    pub n: usize,
}

impl ConstructionParams {
    pub fn new(q: PrimeModulus, t: usize, seed: u64, n: usize) -> Result<Self> {
        if t == 0 || t.is_multiple_of(q.get() as usize) {
            return Err(Error::Parameter(format!("t={t} must be nonzero mod q={q}")));
        }
        if n < 2 {
            return Err(Error::Parameter(format!("n={n} must be at least 2")));
        }
        Ok(ConstructionParams { q, t, seed, n })
    }

    pub fn colors(&self) -> Color {
        self.q.get() as Color + 1
    }
}

/// The (q+1)-coloring on the given isotropic vertices, in the given order.
pub fn build_isotropic(
    params: &ConstructionParams,
    vertices: &[FieldVector],
) -> Result<EdgeColoring> {
    if params.t.is_multiple_of(params.q.get() as usize) {
        return Err(Error::Parameter(format!(
            "t={} is divisible by q={}",
            params.t, params.q
        )));
    }
    isotropic::IsotropicSet::from_vectors(params.q, params.t, vertices.to_vec())?;
    let c = EdgeColoring::from_fn(vertices.len(), params.colors(), |i, j| {
        chi_color(&vertices[i], &vertices[j], params.seed)
    })?;
    Ok(c.with_provenance(format!(
        "construction=isotropic q={} t={} n={} seed={}",
        params.q,
        params.t,
        vertices.len(),
        params.seed
    )))
}

fn f2_vector(bits: u64, len: usize) -> FieldVector {
    let two = PrimeModulus::new(2).expect("2 is prime");
    let coords = (0..len)
        .map(|k| ((bits >> (len - 1 - k)) & 1) as u32)
        .collect();
    FieldVector::from_reduced(two, coords)
}

/// Two-coloring on `n` distinct uniform vectors of F_2^{2t}: color 1 when
/// orthogonal, color 2 otherwise. Returns the vertices alongside.
pub fn build_parity_two_color(
    t: usize,
    n: usize,
    seed: u64,
) -> Result<(EdgeColoring, Vec<FieldVector>)> {
    let len = 2 * t;
    if t == 0 || len >= 63 {
        return Err(Error::Parameter(format!("t={t} must be in 1..=31")));
    }
    let space = 1usize << len;
    if n > space {
        return Err(Error::Capacity(format!(
            "cannot pick {n} distinct vectors of F_2^{len}"
        )));
    }
    let mut rng = stream(seed);
    let picks: Vec<u64> = index::sample(&mut rng, space, n)
        .into_iter()
        .map(|x| x as u64)
        .collect();
    let c = EdgeColoring::from_fn(n, 2, |i, j| {
        Ok(if (picks[i] & picks[j]).count_ones().is_multiple_of(2) {
            1
        } else {
            2
        })
    })?;
    let vertices = picks.iter().map(|&b| f2_vector(b, len)).collect();
    Ok((
        c.with_provenance(format!("construction=two-color t={t} n={n} seed={seed}")),
        vertices,
    ))
}

/// Paley two-coloring on F_p: color 1 iff the difference is a nonzero square.
pub fn build_paley(p: u32) -> Result<EdgeColoring> {
    if !is_prime(p as u64) || p % 4 != 1 {
        return Err(Error::Parameter(format!(
            "Paley coloring needs a prime p = 1 mod 4, got {p}"
        )));
    }
    let m = PrimeModulus::new(p)?;
    let mut residue = vec![false; p as usize];
    for x in 1..p {
        residue[m.mul(x, x) as usize] = true;
    }
    let c = EdgeColoring::from_fn(p as usize, 2, |i, j| {
        Ok(if residue[(j - i) % p as usize] { 1 } else { 2 })
    })?;
    Ok(c.with_provenance(format!("construction=paley p={p}")))
}

/// Loose argument bag for registry lookups; each construction reads what it needs.
#[derive(Debug, Clone, Default)]
pub struct ConstructionArgs {
    pub q: Option<u32>,
    pub t: Option<usize>,
    pub n: Option<usize>,
    pub p: Option<u32>,
    pub seed: u64,
    pub cap: Option<u64>,
}

impl ConstructionArgs {
    fn require<T: Copy>(v: Option<T>, name: &str, who: &str) -> Result<T> {
        v.ok_or_else(|| Error::Parameter(format!("{who} requires --{name}")))
    }
}

/// A finished coloring plus the vertex vectors behind it, when there are any.
#[derive(Debug, Clone)]
pub struct Built {
    pub coloring: EdgeColoring,
    pub vertices: Vec<FieldVector>,
}

pub trait Construction: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn build(&self, args: &ConstructionArgs) -> Result<Built>;
}

pub struct IsotropicConstruction;

impl Construction for IsotropicConstruction {
    fn name(&self) -> &'static str {
        "isotropic"
    }

    fn summary(&self) -> &'static str {
        "(q+1)-coloring of n random self-orthogonal vectors of F_q^t"
    }

    fn build(&self, args: &ConstructionArgs) -> Result<Built> {
        let who = self.name();
        let q = PrimeModulus::new(ConstructionArgs::require(args.q, "q", who)?)?;
        let t = ConstructionArgs::require(args.t, "t", who)?;
        let n = ConstructionArgs::require(args.n, "n", who)?;
        let params = ConstructionParams::new(q, t, args.seed, n)?;
        let v = isotropic::enumerate(q, t, args.cap.unwrap_or(isotropic::DEFAULT_ENUM_CAP))?;
        let vertices = isotropic::sample_distinct(&v, n, &mut stream(args.seed))?;
        let coloring = build_isotropic(&params, &vertices)?;
        Ok(Built { coloring, vertices })
    }
}

pub struct TwoColorConstruction;

impl Construction for TwoColorConstruction {
    fn name(&self) -> &'static str {
        "two-color"
    }

    fn summary(&self) -> &'static str {
        "2-coloring of n random vectors of F_2^{2t} by parity of the scalar product"
    }

    fn build(&self, args: &ConstructionArgs) -> Result<Built> {
        let t = ConstructionArgs::require(args.t, "t", self.name())?;
        let n = ConstructionArgs::require(args.n, "n", self.name())?;
        let (coloring, vertices) = build_parity_two_color(t, n, args.seed)?;
        Ok(Built { coloring, vertices })
    }
}

pub struct PaleyConstruction;

impl Construction for PaleyConstruction {
    fn name(&self) -> &'static str {
        "paley"
    }

    fn summary(&self) -> &'static str {
        "Paley 2-coloring of K_p, p prime and 1 mod 4"
    }

    fn build(&self, args: &ConstructionArgs) -> Result<Built> {
        let p = ConstructionArgs::require(args.p, "p", self.name())?;
        Ok(Built {
            coloring: build_paley(p)?,
            vertices: Vec::new(),
        })
    }
}

/// Constructions keyed by name.
pub struct ConstructionRegistry {
    entries: BTreeMap<&'static str, Box<dyn Construction>>,
}

impl ConstructionRegistry {
    pub fn empty() -> Self {
        ConstructionRegistry {
            entries: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(IsotropicConstruction));
        r.register(Box::new(TwoColorConstruction));
        r.register(Box::new(PaleyConstruction));
        r
    }

    /// Replaces any construction already registered under the same name.
    pub fn register(&mut self, c: Box<dyn Construction>) {
        self.entries.insert(c.name(), c);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Construction> {
        self.entries.get(name).map(|b| b.as_ref()).ok_or_else(|| {
            Error::Parameter(format!(
                "unknown construction {name:?}; known: {}",
                self.names().collect::<Vec<_>>().join(", ")
            ))
        })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }
}

impl Default for ConstructionRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}
