use crate::error::{Error, Result};
use crate::field::{self, FieldVector, PrimeModulus};

/// The `s x s` matrix `iJ - iI` over F_q: `0` on the diagonal, `i` elsewhere.
pub fn m_matrix(i: u32, s: usize, q: PrimeModulus) -> Vec<Vec<u32>> {
    let i = i % q.get();
    (0..s)
        .map(|r| (0..s).map(|c| if r == c { 0 } else { i }).collect())
        .collect()
}

/// `det(iJ - iI)` over F_q, by elimination.
pub fn m_matrix_det(i: u32, s: usize, q: PrimeModulus) -> Result<u32> {
    if i.is_multiple_of(q.get()) {
        return Err(Error::Parameter(format!("i={i} must be nonzero mod {q}")));
    }
    if s == 0 {
        return Err(Error::Parameter("s must be at least 1".into()));
    }
    Ok(field::determinant(q, m_matrix(i, s, q)))
}

/// Evidence that the vectors of an `i`-monochromatic clique are independent
/// (or, for `s = 1 mod q`, that all but one of them are).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceCertificate {
    pub modulus: PrimeModulus,
    pub color: u32,
    pub size: usize,
    /// `det(iJ - iI)` for the full `s x s` system.
    pub determinant: u32,
    pub rank: usize,
    /// A nonzero `alpha` with `M alpha = 0`; empty when `M` is nonsingular.
    pub null_witness: Vec<u32>,
    /// Set when `s = 1 mod q` and the argument runs on the first `s - 1` vectors.
    pub dropped_vertex: bool,
    /// `det` of the reduced `(s-1) x (s-1)` system when a vertex was dropped.
    pub reduced_determinant: Option<u32>,
}

impl IndependenceCertificate {
    /// The invariants tying determinant, rank and size together.
    pub fn is_consistent(&self) -> bool {
        let singular = self.size % self.modulus.get() as usize == 1 % self.modulus.get() as usize;
        if singular {
            self.determinant == 0
                && self.dropped_vertex
                && self.rank + 1 >= self.size
                && !self.null_witness.is_empty()
                && self
                    .reduced_determinant
                    .is_some_and(|d| self.size == 1 || d != 0)
        } else {
            self.determinant != 0
                && self.rank == self.size
                && self.null_witness.is_empty()
                && !self.dropped_vertex
        }
    }

    /// Whether the certificate shows `s <= t` for ambient dimension `t`.
    ///
    /// Nonsingular: `s = rank <= t`. Singular: `s - 1 <= rank <= t`, and
    /// `s - 1 = t` would force `t = 0 mod q`.
    pub fn bounds_size_by(&self, t: usize) -> bool {
        if !self.is_consistent() || self.rank > t {
            return false;
        }
        if !self.dropped_vertex {
            return self.size <= t;
        }
        !t.is_multiple_of(self.modulus.get() as usize)
    }
}

pub fn independence_certificate(
    vectors: &[FieldVector],
    i: u32,
) -> Result<IndependenceCertificate> {
    let first = vectors
        .first()
        .ok_or_else(|| Error::Input("empty clique".into()))?;
    let q = first.modulus();
    if i == 0 || i >= q.get() {
        return Err(Error::Parameter(format!("color {i} outside 1..{q}")));
    }
    for (a, u) in vectors.iter().enumerate() {
        if u.dot(u)? != 0 {
            return Err(Error::Input(format!("vector {u} is not isotropic")));
        }
        for v in &vectors[a + 1..] {
            let d = u.dot(v)?;
            if d != i {
                return Err(Error::Input(format!("{u}.{v} = {d}, not {i}")));
            }
        }
    }
    let s = vectors.len();
    let m = m_matrix(i, s, q);
    let determinant = field::determinant(q, m.clone());
    let rank = field::rank(vectors)?;
    let (null_witness, dropped, reduced) = if determinant == 0 {
        let w = field::nullspace(q, &m, s)
            .into_iter()
            .next()
            .expect("singular matrix has a null vector");
        let reduced = if s > 1 {
            field::determinant(q, m_matrix(i, s - 1, q))
        } else {
            0
        };
        (w, true, Some(reduced))
    } else {
        (Vec::new(), false, None)
    };
    Ok(IndependenceCertificate {
        modulus: q,
        color: i,
        size: s,
        determinant,
        rank,
        null_witness,
        dropped_vertex: dropped,
        reduced_determinant: reduced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(q: u32) -> PrimeModulus {
        PrimeModulus::new(q).unwrap()
    }

    fn closed_form(i: u32, s: usize, q: PrimeModulus) -> u32 {
        let sign = if (s - 1).is_multiple_of(2) {
            1
        } else {
            q.neg(1)
        };
        q.mul(q.mul(q.reduce(s as i64 - 1), sign), q.pow(i, s as u64))
    }

    #[test]
    fn det_examples() {
        assert_eq!(m_matrix_det(1, 1, pm(5)).unwrap(), 0);
        assert_eq!(m_matrix_det(4, 1, pm(7)).unwrap(), 0);
        assert_eq!(m_matrix_det(1, 3, pm(5)).unwrap(), 2);
        assert_eq!(m_matrix_det(2, 4, pm(3)).unwrap(), 0);
        assert!(m_matrix_det(0, 3, pm(3)).is_err());
        assert!(m_matrix_det(3, 3, pm(3)).is_err());
    }

    #[test]
    fn det_matches_eigenvalue_product() {
        for q in [2, 3, 5, 7].map(pm) {
            for i in 1..q.get() {
                for s in 2..=40 {
                    let d = m_matrix_det(i, s, q).unwrap();
                    assert_eq!(d, closed_form(i, s, q), "q={q} i={i} s={s}");
                    assert_eq!(d == 0, s % q.get() as usize == 1, "q={q} i={i} s={s}");
                }
            }
        }
    }

    #[test]
    fn certificate_for_color_cliques() {
        let q = pm(3);
        // a color-2 clique of V in F_3^4: pairwise products 2, self products 0
        let vs: Vec<FieldVector> = [[0, 1, 1, 1], [0, 1, 2, 2], [0, 2, 1, 2], [0, 2, 2, 1]]
            .iter()
            .map(|c| FieldVector::new(q, c.iter().map(|&x| x as i64)).unwrap())
            .collect();
        let three = independence_certificate(&vs[..3], 2).unwrap();
        assert!(three.is_consistent());
        assert_eq!((three.size, three.rank), (3, 3));
        assert_eq!(three.determinant, m_matrix_det(2, 3, q).unwrap());
        assert!(!three.dropped_vertex && three.null_witness.is_empty());
        assert!(three.bounds_size_by(4));

        // s = 4 = 1 mod 3: M is singular and one vertex is dropped
        let four = independence_certificate(&vs, 2).unwrap();
        assert_eq!(four.determinant, 0);
        assert!(four.dropped_vertex && four.is_consistent());
        assert!(four.rank >= 3);
        assert_eq!(four.null_witness, [1, 1, 1, 1]);
        assert!(four.bounds_size_by(4));
        assert!(!four.bounds_size_by(3));

        let single = independence_certificate(&vs[..1], 2).unwrap();
        assert!(single.dropped_vertex && single.is_consistent());

        assert!(matches!(
            independence_certificate(&vs, 1),
            Err(Error::Input(_))
        ));
        assert!(independence_certificate(&[], 1).is_err());
        assert!(independence_certificate(&vs, 3).is_err());
    }

    #[test]
    fn singular_case_carries_null_witness() {
        // q=2, s=3: vectors of F_2^6 with even weight and odd pairwise overlap
        let q = pm(2);
        let rows = [[1, 1, 0, 0, 0, 0], [1, 0, 1, 0, 0, 0], [1, 0, 0, 1, 0, 0]];
        let vs: Vec<FieldVector> = rows
            .iter()
            .map(|c| FieldVector::new(q, c.iter().map(|&x| x as i64)).unwrap())
            .collect();
        let cert = independence_certificate(&vs, 1).unwrap();
        assert_eq!(cert.determinant, 0);
        assert!(cert.dropped_vertex);
        let m = m_matrix(1, 3, q);
        for row in &m {
            let s = row
                .iter()
                .zip(&cert.null_witness)
                .fold(0, |acc, (&a, &b)| q.add(acc, q.mul(a, b)));
            assert_eq!(s, 0);
        }
        assert!(cert.null_witness.iter().any(|&x| x != 0));
        assert!(cert.is_consistent());
        assert!(cert.bounds_size_by(5));
    }
}
