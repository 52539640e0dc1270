//! Arithmetic over a prime field F_q and dense vectors in F_q^t.
//!
//! Elements are canonical integers in `[0, q)`; every operation reduces
//! eagerly so equality and serialization are exact.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A prime modulus `q`, verified by trial division on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeModulus(u32);

impl PrimeModulus {
    pub fn new(q: u32) -> Result<Self> {
        if is_prime(q as u64) {
            Ok(PrimeModulus(q))
        } else {
            Err(Error::Parameter(format!("modulus {q} is not prime")))
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn reduce(self, a: i64) -> u32 {
        a.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub fn pow(self, base: u32, mut exp: u64) -> u32 {
        let m = self.0 as u64;
        let mut acc = 1 % m;
        let mut b = base as u64 % m;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % m;
            }
            b = b * b % m;
            exp >>= 1;
        }
        acc as u32
    }

    /// Multiplicative inverse by Fermat's little theorem. `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        let a = a % self.0;
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.0 as u64 - 2))
        }
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A vector in F_q^t with `t >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldVector {
    modulus: PrimeModulus,
    coords: Vec<u32>,
}

impl FieldVector {
    /// Builds a vector, reducing every coordinate mod q.
    pub fn new(modulus: PrimeModulus, coords: impl IntoIterator<Item = i64>) -> Result<Self> {
        let coords: Vec<u32> = coords.into_iter().map(|c| modulus.reduce(c)).collect();
        if coords.is_empty() {
            return Err(Error::Dimension("vector length must be at least 1".into()));
        }
        Ok(FieldVector { modulus, coords })
    }

    /// Builds from coordinates already known to lie in `[0, q)`.
    pub(crate) fn from_reduced(modulus: PrimeModulus, coords: Vec<u32>) -> Self {
        debug_assert!(!coords.is_empty());
        debug_assert!(coords.iter().all(|&c| c < modulus.get()));
        FieldVector { modulus, coords }
    }

    pub fn zero(modulus: PrimeModulus, t: usize) -> Result<Self> {
        Self::new(modulus, std::iter::repeat_n(0, t))
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn check_compatible(&self, other: &FieldVector) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::Dimension(format!(
                "moduli differ: {} vs {}",
                self.modulus, other.modulus
            )));
        }
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!(
                "lengths differ: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }

    /// Scalar product `sum u_j v_j mod q`.
    pub fn dot(&self, other: &FieldVector) -> Result<u32> {
        self.check_compatible(other)?;
        Ok(self.dot_unchecked(other))
    }

    #[inline]
    pub(crate) fn dot_unchecked(&self, other: &FieldVector) -> u32 {
        let q = self.modulus.get() as u64;
        let s: u64 = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| a as u64 * b as u64)
            .sum();
        (s % q) as u32
    }

    pub fn is_isotropic(&self) -> bool {
        self.dot_unchecked(self) == 0
    }

    pub fn add(&self, other: &FieldVector) -> Result<FieldVector> {
        self.check_compatible(other)?;
        let m = self.modulus;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| m.add(a, b))
            .collect();
        Ok(FieldVector::from_reduced(m, coords))
    }

    pub fn scale(&self, c: u32) -> FieldVector {
        let m = self.modulus;
        let c = c % m.get();
        FieldVector::from_reduced(m, self.coords.iter().map(|&a| m.mul(a, c)).collect())
    }

    /// `q t c1 ... ct`
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}", self.modulus, self.dim());
        for c in &self.coords {
            s.push(' ');
            s.push_str(&c.to_string());
        }
        s
    }

    pub fn parse_text(line: &str) -> Result<FieldVector> {
        let nums: Vec<u64> = line
            .split_whitespace()
            .map(|w| {
                w.parse::<u64>()
                    .map_err(|_| Error::Input(format!("bad integer {w:?} in vector")))
            })
            .collect::<Result<_>>()?;
        if nums.len() < 3 {
            return Err(Error::Input(format!("vector line too short: {line:?}")));
        }
        let q = u32::try_from(nums[0]).map_err(|_| Error::Input("modulus too large".into()))?;
        let modulus = PrimeModulus::new(q)?;
        let t = nums[1] as usize;
        if nums.len() != t + 2 {
            return Err(Error::Input(format!(
                "vector declares length {t} but has {} coordinates",
                nums.len() - 2
            )));
        }
        if let Some(c) = nums[2..].iter().find(|&&c| c >= q as u64) {
            return Err(Error::Input(format!("coordinate {c} not reduced mod {q}")));
        }
        Ok(FieldVector::from_reduced(
            modulus,
            nums[2..].iter().map(|&c| c as u32).collect(),
        ))
    }
}

// Lexicographic on coordinates; vectors compared here always share a modulus.
impl Ord for FieldVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.modulus
            .cmp(&other.modulus)
            .then_with(|| self.coords.cmp(&other.coords))
    }
}

impl PartialOrd for FieldVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FieldVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn check_family(vs: &[FieldVector]) -> Result<Option<(PrimeModulus, usize)>> {
    let Some(first) = vs.first() else {
        return Ok(None);
    };
    for v in &vs[1..] {
        first.check_compatible(v)?;
    }
    Ok(Some((first.modulus, first.dim())))
}

/// Row-reduces `rows` in place to reduced echelon form and returns the pivot columns.
pub(crate) fn row_reduce(m: PrimeModulus, rows: &mut [Vec<u32>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&k| rows[k][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = m.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = m.mul(*x, inv);
        }
        let pivot = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && row[c] != 0 {
                let f = row[c];
                for (x, &p) in row.iter_mut().zip(&pivot).take(cols) {
                    *x = m.sub(*x, m.mul(f, p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank over F_q by Gaussian elimination; 0 for an empty list.
pub fn rank(vs: &[FieldVector]) -> Result<usize> {
    let Some((m, t)) = check_family(vs)? else {
        return Ok(0);
    };
    let mut rows: Vec<Vec<u32>> = vs.iter().map(|v| v.coords.clone()).collect();
    Ok(row_reduce(m, &mut rows, t).len())
}

/// A basis of the right nullspace `{x : A x = 0}` of an `r x c` matrix over F_q.
pub(crate) fn nullspace(m: PrimeModulus, a: &[Vec<u32>], cols: usize) -> Vec<Vec<u32>> {
    let mut rows = a.to_vec();
    let pivots = row_reduce(m, &mut rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![0u32; cols];
            x[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = m.neg(rows[r][f]);
            }
            x
        })
        .collect()
}

/// Determinant of a square matrix over F_q by elimination.
pub(crate) fn determinant(m: PrimeModulus, mut a: Vec<Vec<u32>>) -> u32 {
    let n = a.len();
    let mut det = 1u32;
    for c in 0..n {
        let Some(p) = (c..n).find(|&k| a[k][c] != 0) else {
            return 0;
        };
        if p != c {
            a.swap(p, c);
            det = m.neg(det);
        }
        det = m.mul(det, a[c][c]);
        let inv = m.inv(a[c][c]).expect("pivot is nonzero");
        let pivot = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            if row[c] != 0 {
                let f = m.mul(row[c], inv);
                for (x, &p) in row.iter_mut().zip(&pivot).skip(c) {
                    *x = m.sub(*x, m.mul(f, p));
                }
            }
        }
    }
    det
}

/// Lexicographically smallest `(x, y)` with `x^2 + y^2 = a (mod q)`.
pub fn sum_of_two_squares(a: u32, q: PrimeModulus) -> Result<(u32, u32)> {
    if a >= q.get() {
        return Err(Error::Domain(format!("{a} is not reduced mod {q}")));
    }
    for x in 0..q.get() {
        let x2 = q.mul(x, x);
        for y in 0..q.get() {
            if q.add(x2, q.mul(y, y)) == a {
                return Ok((x, y));
            }
        }
    }
    unreachable!("every element of a prime field is a sum of two squares")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(q: u32, c: &[i64]) -> FieldVector {
        FieldVector::new(PrimeModulus::new(q).unwrap(), c.iter().copied()).unwrap()
    }

    #[test]
    fn composite_modulus_rejected() {
        for q in [0, 1, 4, 9, 15, 91] {
            assert!(matches!(PrimeModulus::new(q), Err(Error::Parameter(_))));
        }
        for q in [2, 3, 5, 7, 97] {
            assert!(PrimeModulus::new(q).is_ok());
        }
    }

    #[test]
    fn dot_examples() {
        assert_eq!(v(3, &[0, 0, 0, 0]).dot(&v(3, &[1, 2, 1, 0])).unwrap(), 0);
        assert_eq!(v(3, &[1, 1, 1, 0]).dot(&v(3, &[1, 2, 0, 0])).unwrap(), 0);
        assert_eq!(v(2, &[1, 1, 0]).dot(&v(2, &[1, 0, 1])).unwrap(), 1);
    }

    #[test]
    fn dot_rejects_mismatch() {
        assert!(matches!(
            v(3, &[1, 1]).dot(&v(3, &[1, 1, 1])),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            v(3, &[1, 1]).dot(&v(5, &[1, 1])),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn coordinates_reduced_and_empty_rejected() {
        assert_eq!(v(3, &[4, -1, 3]).coords(), &[1, 2, 0]);
        assert!(FieldVector::new(PrimeModulus::new(3).unwrap(), []).is_err());
    }

    #[test]
    fn isotropy_examples() {
        assert!(v(5, &[0, 0, 0]).is_isotropic());
        assert!(v(2, &[1, 1, 0]).is_isotropic());
        assert!(!v(3, &[1, 0, 0, 0]).is_isotropic());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&[]).unwrap(), 0);
        assert_eq!(rank(&[v(2, &[1, 1, 0]), v(2, &[1, 1, 0])]).unwrap(), 1);
        // (1,1,1,0) + (0,1,2,0) = (1,2,0,0) mod 3, so the third row is dependent.
        let rows = [
            v(3, &[1, 1, 1, 0]),
            v(3, &[0, 1, 2, 0]),
            v(3, &[1, 2, 0, 0]),
        ];
        assert_eq!(rank(&rows).unwrap(), span_rank_oracle(&rows));
        assert_eq!(rank(&rows).unwrap(), 2);
        assert!(rank(&[v(3, &[1, 1]), v(3, &[1])]).is_err());
    }

    // Rank via brute-force span size: |span| = q^rank.
    fn span_rank_oracle(rows: &[FieldVector]) -> usize {
        let q = rows[0].modulus().get() as usize;
        let t = rows[0].dim();
        let mut span = std::collections::HashSet::new();
        let combos = q.pow(rows.len() as u32);
        for mut code in 0..combos {
            let mut acc = vec![0usize; t];
            for r in rows {
                let a = code % q;
                code /= q;
                for (x, c) in acc.iter_mut().zip(r.coords()) {
                    *x = (*x + a * *c as usize) % q;
                }
            }
            span.insert(acc);
        }
        let mut r = 0;
        while q.pow(r as u32) < span.len() {
            r += 1;
        }
        r
    }

    #[test]
    fn two_squares_examples() {
        let q3 = PrimeModulus::new(3).unwrap();
        let q7 = PrimeModulus::new(7).unwrap();
        assert_eq!(sum_of_two_squares(0, q3).unwrap(), (0, 0));
        assert_eq!(sum_of_two_squares(2, q3).unwrap(), (1, 1));
        assert_eq!(sum_of_two_squares(3, q7).unwrap(), (1, 3));
        assert!(sum_of_two_squares(3, q3).is_err());
    }

    #[test]
    fn two_squares_all_small_primes() {
        for q in (2..=100).filter(|&q| is_prime(q)) {
            let m = PrimeModulus::new(q as u32).unwrap();
            for a in 0..m.get() {
                let (x, y) = sum_of_two_squares(a, m).unwrap();
                assert_eq!(m.add(m.mul(x, x), m.mul(y, y)), a, "q={q} a={a}");
            }
        }
    }

    #[test]
    fn dot_symmetric_exhaustive_small() {
        for q in [2u32, 3, 5] {
            let m = PrimeModulus::new(q).unwrap();
            for t in 1..=3usize {
                let all: Vec<FieldVector> = (0..q.pow(t as u32))
                    .map(|mut code| {
                        let c: Vec<u32> = (0..t)
                            .map(|_| {
                                let d = code % q;
                                code /= q;
                                d
                            })
                            .collect();
                        FieldVector::from_reduced(m, c)
                    })
                    .collect();
                for a in &all {
                    for b in &all {
                        assert_eq!(a.dot(b).unwrap(), b.dot(a).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn determinant_matches_small_cases() {
        let m = PrimeModulus::new(5).unwrap();
        assert_eq!(
            determinant(m, vec![vec![1, 2], vec![3, 4]]),
            m.reduce(4 - 6)
        );
        assert_eq!(determinant(m, vec![vec![0, 1], vec![1, 0]]), m.reduce(-1));
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let m = PrimeModulus::new(3).unwrap();
        let a = vec![vec![1, 1, 1, 0], vec![0, 1, 2, 0], vec![1, 2, 0, 0]];
        let ns = nullspace(m, &a, 4);
        assert_eq!(ns.len(), 2);
        for x in ns {
            for row in &a {
                let s: u32 = row
                    .iter()
                    .zip(&x)
                    .fold(0, |acc, (&r, &c)| m.add(acc, m.mul(r, c)));
                assert_eq!(s, 0);
            }
        }
    }

    #[test]
    fn text_form() {
        let x = v(3, &[1, 2, 0, 1]);
        assert_eq!(x.to_text(), "3 4 1 2 0 1");
        assert_eq!(FieldVector::parse_text("3 4 1 2 0 1").unwrap(), x);
        assert!(FieldVector::parse_text("3 4 1 2 0").is_err());
        assert!(FieldVector::parse_text("3 2 1 3").is_err());
        assert!(FieldVector::parse_text("4 2 1 1").is_err());
    }
}
