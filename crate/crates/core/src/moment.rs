//! First-moment arithmetic for monochromatic potential cliques, with an exact
//! enumerator and a Monte Carlo estimator to check it against.

use num_bigint::BigUint;
use rand::RngCore;

use crate::bounds::{isotropic_expr, log2_biguint, Exponent};
use crate::clique::{enumerate_potential_cliques, n_t_bound, PotentialClique, DEFAULT_NODE_CAP};
use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::isotropic::{self, bernoulli_mask, IsotropicSet, DEFAULT_ENUM_CAP};
use crate::rng::{derive_seed, pair_coin, stream};

/// `floor(2^{t/2} q^{3t/8 + slack})`.
pub fn recommended_n(q: PrimeModulus, t: u64, slack: Exponent) -> BigUint {
    isotropic_expr(t, q.get() as u64, slack).floor()
}

/// `C(t, 2)`
fn pairs(t: u64) -> u64 {
    t * t.saturating_sub(1) / 2
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub q: PrimeModulus,
    pub t: u64,
    pub n: u64,
    pub v_size: u64,
    /// `p = p_num / p_den = 2n / |V|`
    pub p_num: u64,
    pub p_den: u64,
    /// Potential-clique count used: the rank-sum bound, or an exact count.
    pub clique_count: BigUint,
    pub log2_p: f64,
    pub log2_color_factor: f64,
    pub log2_count: f64,
    pub log2_expected: f64,
}

impl MomentReport {
    pub fn p(&self) -> f64 {
        self.p_num as f64 / self.p_den as f64
    }

    pub fn expected(&self) -> f64 {
        self.log2_expected.exp2()
    }

    /// Recomputes `t log2 p + (1 - C(t,2)) + log2 N` from the stored factors.
    pub fn recompute_log2(&self) -> f64 {
        self.t as f64 * self.log2_p + self.log2_color_factor + self.log2_count
    }

    pub fn is_consistent(&self) -> bool {
        self.p_num <= self.p_den
            && ((self.log2_expected == f64::NEG_INFINITY
                && self.recompute_log2() == f64::NEG_INFINITY)
                || (self.recompute_log2() - self.log2_expected).abs() <= 1e-9)
    }
}

/// Expected monochromatic potential cliques in a Bernoulli(`2n/|V|`) subset,
/// bounded above through the rank-sum bound on the number of potential cliques.
pub fn expected_mono_count(q: PrimeModulus, t: u64, n: u64, v_size: u64) -> Result<MomentReport> {
    expected_mono_count_with(q, t, n, v_size, n_t_bound(q.get(), t)?)
}

/// As [`expected_mono_count`], with an explicit potential-clique count.
pub fn expected_mono_count_with(
    q: PrimeModulus,
    t: u64,
    n: u64,
    v_size: u64,
    clique_count: BigUint,
) -> Result<MomentReport> {
    if v_size == 0 || 2 * n > v_size {
        return Err(Error::Parameter(format!(
            "n={n} too large for |V|={v_size}: p = 2n/|V| exceeds 1"
        )));
    }
    let log2_p = ((2 * n) as f64).log2() - (v_size as f64).log2();
    let log2_color_factor = 1.0 - pairs(t) as f64;
    let log2_count = log2_biguint(&clique_count);
    let log2_p_total = if n == 0 && t > 0 {
        f64::NEG_INFINITY
    } else {
        t as f64 * log2_p
    };
    let log2_expected = log2_p_total + log2_color_factor + log2_count;
    Ok(MomentReport {
        q,
        t,
        n,
        v_size,
        p_num: 2 * n,
        p_den: v_size,
        clique_count,
        log2_p,
        log2_color_factor,
        log2_count,
        log2_expected: if log2_expected.is_nan() {
            f64::NEG_INFINITY
        } else {
            log2_expected
        },
    })
}

/// `p^t 2^{1 - C(t,2)} count`, the closed form of the expectation.
pub fn analytic_expectation(t: u64, p: f64, count: u64) -> f64 {
    p.powi(t as i32) * (1.0 - pairs(t) as f64).exp2() * count as f64
}

/// V and its potential cliques at `(q, t)`, the shared setup of the checks below.
pub struct MomentInstance {
    pub v: IsotropicSet,
    pub cliques: Vec<PotentialClique>,
}

impl MomentInstance {
    pub fn new(q: PrimeModulus, t: usize) -> Result<Self> {
        let v = isotropic::enumerate(q, t, DEFAULT_ENUM_CAP)?;
        let cliques = enumerate_potential_cliques(&v, t, DEFAULT_NODE_CAP)?;
        Ok(MomentInstance { v, cliques })
    }

    fn is_mono(&self, x: &PotentialClique, seed: u64) -> bool {
        let vs = &x.vectors;
        let first = pair_coin(seed, &vs[0], &vs[1]);
        vs.iter()
            .enumerate()
            .all(|(a, u)| vs[a + 1..].iter().all(|w| pair_coin(seed, u, w) == first))
    }

    /// Exact expectation by enumerating every subset of V and, for each, every
    /// coloring of its zero-product pairs. `work_cap` bounds the total number
    /// of (subset, coloring) combinations.
    pub fn exact_expectation(&self, p: f64, work_cap: u64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
        }
        let vs = self.v.vectors();
        let m = vs.len();
        if m > 24 {
            return Err(Error::Resource(format!(
                "2^{m} subsets is too many to enumerate"
            )));
        }
        let mut zero_pairs = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                if vs[a].dot_unchecked(&vs[b]) == 0 {
                    zero_pairs.push((a, b));
                }
            }
        }
        let clique_masks: Vec<(u32, Vec<usize>)> = self
            .cliques
            .iter()
            .map(|x| {
                let mask = x.indices.iter().fold(0u32, |acc, &i| acc | 1 << i);
                let edges = x
                    .indices
                    .iter()
                    .enumerate()
                    .flat_map(|(k, &a)| x.indices[k + 1..].iter().map(move |&b| (a, b)))
                    .map(|e| {
                        zero_pairs
                            .iter()
                            .position(|&z| z == e)
                            .expect("clique edge has zero product")
                    })
                    .collect();
                (mask, edges)
            })
            .collect();

        let mut work = 0u64;
        let mut total = 0.0;
        for subset in 0u32..(1u32 << m) {
            let size = subset.count_ones() as i32;
            let weight = p.powi(size) * (1.0 - p).powi(m as i32 - size);
            let inside: Vec<usize> = zero_pairs
                .iter()
                .enumerate()
                .filter(|(_, &(a, b))| subset >> a & 1 == 1 && subset >> b & 1 == 1)
                .map(|(k, _)| k)
                .collect();
            let here: Vec<&(u32, Vec<usize>)> = clique_masks
                .iter()
                .filter(|(mk, _)| mk & subset == *mk)
                .collect();
            let colorings = 1u64 << inside.len();
            work += colorings;
            if work > work_cap {
                return Err(Error::Resource(format!(
                    "exact expectation exceeded {work_cap} combinations"
                )));
            }
            if here.is_empty() || weight == 0.0 {
                continue;
            }
            let mut slot = vec![usize::MAX; zero_pairs.len()];
            for (bit, &k) in inside.iter().enumerate() {
                slot[k] = bit;
            }
            let mut mono = 0u64;
            for coloring in 0..colorings {
                for (_, edges) in &here {
                    let c0 = coloring >> slot[edges[0]] & 1;
                    if edges.iter().all(|&e| coloring >> slot[e] & 1 == c0) {
                        mono += 1;
                    }
                }
            }
            total += weight * mono as f64 / colorings as f64;
        }
        Ok(total)
    }

    /// Mean number of retained monochromatic potential cliques over
    /// independent (Bernoulli subset, fresh coloring) draws.
    pub fn monte_carlo(&self, trials: u64, p: f64, seed: u64) -> Result<MonteCarlo> {
        if trials < 2 {
            return Err(Error::Parameter("need at least two trials".into()));
        }
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for k in 0..trials {
            let mut rng = stream(derive_seed(seed, k));
            let keep = bernoulli_mask(self.v.len(), p, &mut rng)?;
            let color_seed = rng.next_u64();
            let count = self
                .cliques
                .iter()
                .filter(|x| x.indices.iter().all(|&i| keep[i]) && self.is_mono(x, color_seed))
                .count() as f64;
            sum += count;
            sum_sq += count * count;
        }
        let n = trials as f64;
        let mean = sum / n;
        let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        Ok(MonteCarlo {
            trials,
            mean,
            std_error: (var / n).sqrt(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarlo {
    pub trials: u64,
    pub mean: f64,
    pub std_error: f64,
}

/// Convenience wrapper: enumerate `(q, t)` and run the estimator.
pub fn monte_carlo_mono_count(
    q: PrimeModulus,
    t: usize,
    trials: u64,
    p: f64,
    seed: u64,
) -> Result<MonteCarlo> {
    MomentInstance::new(q, t)?.monte_carlo(trials, p, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn pm(q: u32) -> PrimeModulus {
        PrimeModulus::new(q).unwrap()
    }

    #[test]
    fn recommended_n_examples() {
        assert_eq!(
            recommended_n(pm(2), 8, Exponent::zero()),
            BigUint::from(128u32)
        );
        assert_eq!(
            recommended_n(pm(3), 4, Exponent::zero()),
            BigUint::from(20u32)
        );
        assert_eq!(
            recommended_n(pm(2), 0, Exponent::zero()),
            BigUint::from(1u32)
        );
    }

    #[test]
    fn report_is_consistent_and_monotone() {
        let q = pm(3);
        let mut prev = f64::NEG_INFINITY;
        for n in 1..=16 {
            let r = expected_mono_count(q, 4, n, 33).unwrap();
            assert!(r.is_consistent());
            assert!(r.log2_expected > prev);
            prev = r.log2_expected;
        }
        assert!(matches!(
            expected_mono_count(q, 4, 17, 33),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn zero_count_gives_zero_expectation() {
        let r = expected_mono_count_with(pm(2), 3, 1, 4, BigUint::zero()).unwrap();
        assert_eq!(r.expected(), 0.0);
        assert!(r.is_consistent());
    }

    #[test]
    fn exact_matches_closed_form_nondegenerate() {
        // (2, 4): V has 8 members and the potential cliques are nonempty
        let inst = MomentInstance::new(pm(2), 4).unwrap();
        assert!(!inst.cliques.is_empty());
        for p in [0.3, 0.5, 0.9] {
            let exact = inst.exact_expectation(p, 1 << 26).unwrap();
            let closed = analytic_expectation(4, p, inst.cliques.len() as u64);
            assert!(
                (exact - closed).abs() <= 1e-9 * closed.max(1e-300),
                "p={p}: {exact} vs {closed}"
            );
        }
    }

    #[test]
    fn monte_carlo_tracks_exact_value() {
        let inst = MomentInstance::new(pm(2), 4).unwrap();
        let exact = inst.exact_expectation(0.6, 1 << 26).unwrap();
        let mc = inst.monte_carlo(20_000, 0.6, 17).unwrap();
        assert!(
            (mc.mean - exact).abs() <= 5.0 * mc.std_error,
            "{mc:?} vs {exact}"
        );
        assert_eq!(mc, inst.monte_carlo(20_000, 0.6, 17).unwrap());
    }

    #[test]
    fn guards() {
        let inst = MomentInstance::new(pm(2), 3).unwrap();
        assert!(inst.exact_expectation(1.2, 100).is_err());
        assert!(inst.monte_carlo(1, 0.5, 0).is_err());
        assert!(inst.monte_carlo(10, -0.1, 0).is_err());
        let big = MomentInstance::new(pm(2), 5).unwrap();
        assert!(matches!(
            big.exact_expectation(0.5, 1000),
            Err(Error::Resource(_))
        ));
    }
}
