use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{self, FieldVector};
use crate::isotropic::IsotropicSet;

/// `t` members of V with every scalar product (self products included) zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PotentialClique {
    /// Indices into the enumerated V, increasing.
    pub indices: Vec<usize>,
    pub vectors: Vec<FieldVector>,
    pub rank: usize,
}

impl PotentialClique {
    pub fn gram(&self) -> Vec<Vec<u32>> {
        gram_matrix(&self.vectors)
    }
}

pub fn gram_matrix(xs: &[FieldVector]) -> Vec<Vec<u32>> {
    xs.iter()
        .map(|u| xs.iter().map(|v| u.dot_unchecked(v)).collect())
        .collect()
}

/// True iff `X X^T = 0`, diagonal included.
pub fn gram_check(xs: &[FieldVector]) -> bool {
    xs.iter()
        .enumerate()
        .all(|(a, u)| xs[a..].iter().all(|v| u.dot(v) == Ok(0)))
}

/// Every potential clique of size `t` inside an exhaustive V.
///
/// Backtracks in index order, keeping only candidates orthogonal to
/// everything chosen so far. `cap` bounds the number of search nodes.
pub fn enumerate_potential_cliques(
    v: &IsotropicSet,
    t: usize,
    cap: u64,
) -> Result<Vec<PotentialClique>> {
    if !v.is_exhaustive() {
        return Err(Error::Input(
            "potential cliques need the full enumerated V".into(),
        ));
    }
    let vs = v.vectors();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(t);
    let mut nodes = 0u64;
    let all: Vec<usize> = (0..vs.len()).collect();
    walk(vs, t, &all, &mut chosen, &mut nodes, cap, &mut out)?;
    Ok(out)
}

fn walk(
    vs: &[FieldVector],
    t: usize,
    cand: &[usize],
    chosen: &mut Vec<usize>,
    nodes: &mut u64,
    cap: u64,
    out: &mut Vec<PotentialClique>,
) -> Result<()> {
    *nodes += 1;
    if *nodes > cap {
        return Err(Error::Resource(format!(
            "potential-clique enumeration exceeded {cap} nodes"
        )));
    }
    if chosen.len() == t {
        let vectors: Vec<FieldVector> = chosen.iter().map(|&i| vs[i].clone()).collect();
        let rank = field::rank(&vectors)?;
        out.push(PotentialClique {
            indices: chosen.clone(),
            vectors,
            rank,
        });
        return Ok(());
    }
    if chosen.len() + cand.len() < t {
        return Ok(());
    }
    for (k, &i) in cand.iter().enumerate() {
        let next: Vec<usize> = cand[k + 1..]
            .iter()
            .copied()
            .filter(|&j| vs[i].dot_unchecked(&vs[j]) == 0)
            .collect();
        chosen.push(i);
        walk(vs, t, &next, chosen, nodes, cap, out)?;
        chosen.pop();
    }
    Ok(())
}

/// Ordered t-tuples per rank `r`, counted the way the per-rank bound counts
/// them: the first `r` entries are independent, the rest lie in their span.
pub fn ordered_tuple_counts(cliques: &[PotentialClique]) -> Result<BTreeMap<usize, BigUint>> {
    let mut out: BTreeMap<usize, BigUint> = BTreeMap::new();
    for x in cliques {
        let t = x.vectors.len();
        let r = x.rank;
        let mut leading = BigUint::zero();
        for subset in combinations(t, r) {
            let picked: Vec<FieldVector> = subset.iter().map(|&k| x.vectors[k].clone()).collect();
            if field::rank(&picked)? == r {
                leading += 1u32;
            }
        }
        let ways = leading * factorial(r) * factorial(t - r);
        *out.entry(r).or_default() += ways;
    }
    Ok(out)
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// `2tr - r(3r - 1)/2`, the exponent of q in the per-rank count.
pub fn rank_count_exponent(t: u64, r: u64) -> Result<u64> {
    if r > t {
        return Err(Error::Parameter(format!("rank {r} exceeds t={t}")));
    }
    Ok(2 * t * r - r * (3 * r).saturating_sub(1) / 2)
}

/// `q^{2tr - 3r^2/2 + r/2}`: ordered potential cliques of rank `r`, at most.
pub fn rank_count_bound(q: u32, t: u64, r: u64) -> Result<BigUint> {
    let e = rank_count_exponent(t, r)?;
    Ok(BigUint::from(q)
        .pow(u32::try_from(e).map_err(|_| Error::Parameter("exponent too large".into()))?))
}

/// Sum of [`rank_count_bound`] over `r = 0..=floor(t/2)`.
pub fn n_t_bound(q: u32, t: u64) -> Result<BigUint> {
    (0..=t / 2).try_fold(BigUint::zero(), |acc, r| {
        Ok(acc + rank_count_bound(q, t, r)?)
    })
}
