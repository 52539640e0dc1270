//! Exact maximum-clique search over bitset adjacency, plus the structural
//! certificates for the (q+1)-coloring.
//!
//! The search is a branch and bound in the style of Tomita's MCQ: vertices
//! are relabelled so that the degeneracy order puts the densest core first,
//! each node greedily colors its candidate set, and a branch is cut as soon
//! as `|current| + colors_left <= |best|`. Everything is sequential and
//! tie-broken by index, so the returned witness is reproducible.

mod certificate;
mod potential;

pub use certificate::{independence_certificate, m_matrix, m_matrix_det, IndependenceCertificate};
pub use potential::{
    enumerate_potential_cliques, gram_check, gram_matrix, n_t_bound, ordered_tuple_counts,
    rank_count_bound, rank_count_exponent, PotentialClique,
};

use crate::coloring::{Color, EdgeColoring};
use crate::error::{Error, Result};

/// Node budget shared by the clique search and the potential-clique walk.
pub const DEFAULT_NODE_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueWitness {
    pub color: Color,
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
}

impl CliqueWitness {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }
}

/// Fixed-width bitset rows, one per vertex.
#[derive(Debug, Clone)]
pub struct BitGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl BitGraph {
    pub fn from_fn(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Self {
        let words = n.div_ceil(64).max(1);
        let mut g = BitGraph {
            n,
            words,
            rows: vec![0; n * words],
        };
        for i in 0..n {
            for j in i + 1..n {
                if adjacent(i, j) {
                    g.set(i, j);
                    g.set(j, i);
                }
            }
        }
        g
    }

    /// The graph of edges carrying `color`.
    pub fn color_class(c: &EdgeColoring, color: Color) -> Self {
        Self::from_fn(c.n(), |i, j| c.get(i, j) == color)
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize) {
        self.rows[i * self.words + j / 64] |= 1 << (j % 64);
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Smallest-last removal order; ties go to the lowest index.
    pub fn degeneracy_order(&self) -> Vec<usize> {
        let mut deg: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        let mut removed = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            let v = (0..self.n)
                .filter(|&v| !removed[v])
                .min_by_key(|&v| (deg[v], v))
                .expect("a vertex remains");
            removed[v] = true;
            order.push(v);
            for w in 0..self.n {
                if !removed[w] && self.has_edge(v, w) {
                    deg[w] -= 1;
                }
            }
        }
        order
    }

    fn relabel(&self, order: &[usize]) -> BitGraph {
        BitGraph::from_fn(self.n, |a, b| self.has_edge(order[a], order[b]))
    }
}

struct Search<'g> {
    g: &'g BitGraph,
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    cap: u64,
}

#[inline]
fn lowest(set: &[u64]) -> Option<usize> {
    set.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
}

#[inline]
fn clear(set: &mut [u64], v: usize) {
    set[v / 64] &= !(1 << (v % 64));
}

impl Search<'_> {
    // Greedy sequential coloring of `cand` in label order; returns vertices
    // with their color numbers, colors non-decreasing.
    fn color_sort(&self, cand: &[u64]) -> Vec<(usize, usize)> {
        let mut uncolored = cand.to_vec();
        let mut out = Vec::new();
        let mut k = 0;
        while lowest(&uncolored).is_some() {
            k += 1;
            let mut q = uncolored.clone();
            while let Some(v) = lowest(&q) {
                clear(&mut q, v);
                clear(&mut uncolored, v);
                for (x, a) in q.iter_mut().zip(self.g.row(v)) {
                    *x &= !a;
                }
                out.push((v, k));
            }
        }
        out
    }

    fn expand(&mut self, mut cand: Vec<u64>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::Resource(format!(
                "clique search exceeded {} nodes",
                self.cap
            )));
        }
        let order = self.color_sort(&cand);
        for &(v, k) in order.iter().rev() {
            if self.current.len() + k <= self.best.len() {
                return Ok(());
            }
            self.current.push(v);
            let next: Vec<u64> = cand.iter().zip(self.g.row(v)).map(|(a, b)| a & b).collect();
            if next.iter().all(|&w| w == 0) {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next)?;
            }
            self.current.pop();
            clear(&mut cand, v);
        }
        Ok(())
    }
}

/// A maximum clique of `g`, vertices sorted. Errors only when the node cap is hit.
pub fn max_clique(g: &BitGraph, cap: u64) -> Result<Vec<usize>> {
    if g.n == 0 {
        return Ok(Vec::new());
    }
    let mut order = g.degeneracy_order();
    order.reverse();
    let h = g.relabel(&order);
    let mut all = vec![0u64; h.words];
    for v in 0..h.n {
        all[v / 64] |= 1 << (v % 64);
    }
    let mut s = Search {
        g: &h,
        best: Vec::new(),
        current: Vec::new(),
        nodes: 0,
        cap,
    };
    s.expand(all)?;
    let mut out: Vec<usize> = s.best.into_iter().map(|v| order[v]).collect();
    out.sort_unstable();
    Ok(out)
}

pub fn max_monochromatic_clique(c: &EdgeColoring, color: Color, cap: u64) -> Result<CliqueWitness> {
    if color == 0 || color > c.num_colors() {
        return Err(Error::Parameter(format!(
            "color {color} outside 1..={}",
            c.num_colors()
        )));
    }
    let vertices = max_clique(&BitGraph::color_class(c, color), cap)?;
    Ok(CliqueWitness { color, vertices })
}

/// One witness per color `1..=num_colors`.
pub fn all_color_maxima(c: &EdgeColoring, cap: u64) -> Result<Vec<CliqueWitness>> {
    (1..=c.num_colors())
        .map(|col| max_monochromatic_clique(c, col, cap))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::build_paley;
    use proptest::prelude::*;

    // Oracle: largest subset whose pairs are all edges, by enumerating masks.
    fn brute_max_clique(n: usize, adj: &dyn Fn(usize, usize) -> bool) -> usize {
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let vs: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if vs.len() > best
                && vs
                    .iter()
                    .enumerate()
                    .all(|(a, &x)| vs[a + 1..].iter().all(|&y| adj(x, y)))
            {
                best = vs.len();
            }
        }
        best
    }

    fn pentagon() -> EdgeColoring {
        EdgeColoring::from_fn(5, 2, |i, j| {
            Ok(if j - i == 1 || j - i == 4 { 1 } else { 2 })
        })
        .unwrap()
    }

    #[test]
    fn unused_color_gives_single_vertex() {
        let c = EdgeColoring::from_fn(6, 3, |_, _| Ok(1)).unwrap();
        let w = max_monochromatic_clique(&c, 2, DEFAULT_NODE_CAP).unwrap();
        assert_eq!(w.size(), 1);
        assert_eq!(
            max_monochromatic_clique(&c, 1, DEFAULT_NODE_CAP)
                .unwrap()
                .size(),
            6
        );
        assert!(max_monochromatic_clique(&c, 4, DEFAULT_NODE_CAP).is_err());
    }

    #[test]
    fn pentagon_and_paley5() {
        let c = pentagon();
        for col in 1..=2 {
            assert_eq!(
                max_monochromatic_clique(&c, col, DEFAULT_NODE_CAP)
                    .unwrap()
                    .size(),
                2
            );
        }
        let p = build_paley(5).unwrap();
        assert_eq!(
            max_monochromatic_clique(&p, 1, DEFAULT_NODE_CAP)
                .unwrap()
                .size(),
            2
        );
    }

    #[test]
    fn paley17_has_no_k4() {
        let p = build_paley(17).unwrap();
        for col in 1..=2 {
            assert_eq!(
                max_monochromatic_clique(&p, col, DEFAULT_NODE_CAP)
                    .unwrap()
                    .size(),
                3
            );
        }
    }

    #[test]
    fn witness_is_a_clique() {
        let p = build_paley(29).unwrap();
        let w = max_monochromatic_clique(&p, 1, DEFAULT_NODE_CAP).unwrap();
        for (a, &x) in w.vertices.iter().enumerate() {
            for &y in &w.vertices[a + 1..] {
                assert_eq!(p.get(x, y), 1);
            }
        }
    }

    #[test]
    fn cap_is_an_error() {
        let g = BitGraph::from_fn(40, |i, j| (i * 7 + j * 3) % 5 != 0);
        assert!(matches!(max_clique(&g, 3), Err(Error::Resource(_))));
    }

    #[test]
    fn degeneracy_breaks_ties_low() {
        let g = BitGraph::from_fn(4, |_, _| false);
        assert_eq!(g.degeneracy_order(), [0, 1, 2, 3]);
        // star centred at 0: after two leaves go, 0 and 3 tie at degree 1
        let star = BitGraph::from_fn(4, |i, _| i == 0);
        assert_eq!(star.degeneracy_order(), [1, 2, 0, 3]);
    }

    #[test]
    fn wide_graphs_cross_word_boundaries() {
        // disjoint cliques of size 3, 5 and 7 spread over 130 vertices
        let block = |v: usize| match v {
            0 | 64 | 129 => Some(0),
            v if (60..64).contains(&v) || v == 100 => Some(1),
            v if (70..77).contains(&v) => Some(2),
            _ => None,
        };
        let g = BitGraph::from_fn(130, |i, j| block(i).is_some() && block(i) == block(j));
        assert_eq!(
            max_clique(&g, DEFAULT_NODE_CAP).unwrap(),
            (70..77).collect::<Vec<_>>()
        );
    }

    proptest! {
        #[test]
        fn agrees_with_exhaustive_search(n in 0usize..=12, density in 0.0f64..1.0, seed in any::<u64>()) {
            let h = |i: usize, j: usize| crate::rng::splitmix64(seed ^ (i as u64 * 131 + j as u64));
            let adj = move |i: usize, j: usize| {
                let (a, b) = if i < j { (i, j) } else { (j, i) };
                (h(a, b) as f64 / u64::MAX as f64) < density
            };
            let g = BitGraph::from_fn(n, adj);
            let got = max_clique(&g, DEFAULT_NODE_CAP).unwrap();
            prop_assert_eq!(got.len(), brute_max_clique(n, &adj));
            for (a, &x) in got.iter().enumerate() {
                for &y in &got[a + 1..] {
                    prop_assert!(g.has_edge(x, y));
                }
            }
        }
    }
}
