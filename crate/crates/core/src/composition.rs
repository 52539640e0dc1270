//! Blow-up products of colorings.
//!
//! Each vertex of the outer coloring is replaced by a copy of the inner one.
//! Edges between copies keep the outer color; edges inside a copy take the
//! inner color shifted past the outer palette.

use crate::coloring::{Color, EdgeColoring};
use crate::error::{Error, Result};

/// Product of `outer` (ℓ1 colors, n1 vertices) and `inner` (ℓ2 colors, n2
/// vertices). Vertex `(a, b)` is numbered `a * n2 + b`.
pub fn lefmann_product(outer: &EdgeColoring, inner: &EdgeColoring) -> Result<EdgeColoring> {
    let l1 = outer.num_colors();
    let colors = l1
        .checked_add(inner.num_colors())
        .ok_or_else(|| Error::Parameter("combined palette overflows".into()))?;
    let n2 = inner.n();
    let n = outer
        .n()
        .checked_mul(n2)
        .ok_or_else(|| Error::Parameter("product vertex count overflows".into()))?;
    let product = EdgeColoring::from_fn(n, colors, |x, y| {
        let (a, b) = (x / n2, x % n2);
        let (a2, b2) = (y / n2, y % n2);
        Ok(if a != a2 {
            outer.get(a, a2)
        } else {
            l1 + inner.get(b, b2)
        })
    })?;
    Ok(product.with_provenance(format!(
        "product outer(n={}, colors={}) inner(n={}, colors={})",
        outer.n(),
        l1,
        n2,
        inner.num_colors()
    )))
}

/// Left fold of [`lefmann_product`].
pub fn iterate_product(colorings: &[EdgeColoring]) -> Result<EdgeColoring> {
    let (first, rest) = colorings
        .split_first()
        .ok_or_else(|| Error::Parameter("need at least one coloring".into()))?;
    rest.iter()
        .try_fold(first.clone(), |acc, c| lefmann_product(&acc, c))
}

/// Number of palette entries an iterated product uses.
pub fn product_colors(colorings: &[EdgeColoring]) -> Color {
    colorings.iter().map(|c| c.num_colors()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clique::{all_color_maxima, DEFAULT_NODE_CAP};
    use crate::coloring::build_paley;
    use proptest::prelude::*;

    fn pentagon() -> EdgeColoring {
        EdgeColoring::from_fn(5, 2, |i, j| {
            Ok(if (j - i) % 5 == 1 || (j - i) % 5 == 4 {
                1
            } else {
                2
            })
        })
        .unwrap()
    }

    fn maxima(c: &EdgeColoring) -> Vec<usize> {
        all_color_maxima(c, DEFAULT_NODE_CAP)
            .unwrap()
            .iter()
            .map(|w| w.size())
            .collect()
    }

    fn single(n: usize) -> EdgeColoring {
        EdgeColoring::from_fn(n, 1, |_, _| Ok(1)).unwrap()
    }

    #[test]
    fn two_single_edges() {
        let p = lefmann_product(&single(2), &single(2)).unwrap();
        assert_eq!(p.n(), 4);
        assert_eq!(p.num_colors(), 2);
        assert_eq!(p.get(0, 1), 2);
        assert_eq!(p.get(2, 3), 2);
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            assert_eq!(p.get(i, j), 1);
        }
    }

    #[test]
    fn pentagon_squared_has_no_triangle() {
        let p = lefmann_product(&pentagon(), &pentagon()).unwrap();
        assert_eq!((p.n(), p.num_colors()), (25, 4));
        assert_eq!(maxima(&p), vec![2, 2, 2, 2]);
    }

    #[test]
    fn edge_counts_split_by_block() {
        let outer = EdgeColoring::from_fn(3, 1, |_, _| Ok(1)).unwrap();
        let inner = single(2);
        let p = lefmann_product(&outer, &inner).unwrap();
        assert_eq!(p.edges_with_color(2), 3);
        assert_eq!(p.edges_with_color(1), 12);
    }

    #[test]
    fn iterate_is_left_fold() {
        let cs = [pentagon(), single(2), pentagon()];
        let folded = iterate_product(&cs).unwrap();
        let manual = lefmann_product(&lefmann_product(&cs[0], &cs[1]).unwrap(), &cs[2]).unwrap();
        assert_eq!(folded.to_text(), manual.to_text());
        assert_eq!(folded.num_colors(), product_colors(&cs));
        assert!(iterate_product(&[]).is_err());
        assert_eq!(iterate_product(&cs[..1]).unwrap(), cs[0]);
    }

    #[test]
    fn paley_product_keeps_clique_sizes() {
        let p5 = build_paley(5).unwrap();
        let p13 = build_paley(13).unwrap();
        let p = lefmann_product(&p13, &p5).unwrap();
        let mut expected = maxima(&p13);
        expected.extend(maxima(&p5));
        assert_eq!(maxima(&p), expected);
    }

    fn coloring_strategy() -> impl Strategy<Value = EdgeColoring> {
        (1usize..6, 1u16..4).prop_flat_map(|(n, l)| {
            proptest::collection::vec(1..=l, n * n.saturating_sub(1) / 2)
                .prop_map(move |colors| EdgeColoring::new(n, l, colors).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn per_color_maxima_project(a in coloring_strategy(), b in coloring_strategy()) {
            let p = lefmann_product(&a, &b).unwrap();
            let mut expected = maxima(&a);
            expected.extend(maxima(&b));
            prop_assert_eq!(maxima(&p), expected);
        }

        #[test]
        fn associative_up_to_relabeling(
            a in coloring_strategy(),
            b in coloring_strategy(),
            c in coloring_strategy(),
        ) {
            let left = lefmann_product(&lefmann_product(&a, &b).unwrap(), &c).unwrap();
            let right = lefmann_product(&a, &lefmann_product(&b, &c).unwrap()).unwrap();
            let mut l = maxima(&left);
            let mut r = maxima(&right);
            l.sort_unstable();
            r.sort_unstable();
            prop_assert_eq!(l, r);
        }
    }
}
