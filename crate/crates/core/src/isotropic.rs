//! The ground set V of self-orthogonal vectors in F_q^t: enumeration and samplers.

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldVector, PrimeModulus};

/// Largest `q^t` that [`enumerate`] will walk unless told otherwise.
pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

/// An ordered list of distinct isotropic vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropicSet {
    modulus: PrimeModulus,
    dim: usize,
    vectors: Vec<FieldVector>,
    exhaustive: bool,
}

impl IsotropicSet {
    /// Wraps an arbitrary list; rejects non-isotropic members and duplicates.
    pub fn from_vectors(
        modulus: PrimeModulus,
        dim: usize,
        vectors: Vec<FieldVector>,
    ) -> Result<Self> {
        let mut seen = std::collections::HashSet::with_capacity(vectors.len());
        for v in &vectors {
            if v.modulus() != modulus || v.dim() != dim {
                return Err(Error::Dimension(format!(
                    "vector {v} is not in F_{modulus}^{dim}"
                )));
            }
            if !v.is_isotropic() {
                return Err(Error::Input(format!("vector {v} is not isotropic")));
            }
            if !seen.insert(v) {
                return Err(Error::Input(format!("duplicate vector {v}")));
            }
        }
        Ok(IsotropicSet {
            modulus,
            dim,
            vectors,
            exhaustive: false,
        })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[FieldVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn is_exhaustive(&self) -> bool {
        self.exhaustive
    }
}

/// `q^t`, or `None` on overflow.
pub fn space_size(q: PrimeModulus, t: usize) -> Option<u64> {
    (q.get() as u64).checked_pow(u32::try_from(t).ok()?)
}

/// All of V in lexicographic order (first coordinate most significant).
pub fn enumerate(q: PrimeModulus, t: usize, cap: u64) -> Result<IsotropicSet> {
    if t == 0 {
        return Err(Error::Parameter("dimension t must be at least 1".into()));
    }
    let total = space_size(q, t)
        .filter(|&n| n <= cap)
        .ok_or_else(|| Error::Resource(format!("F_{q}^{t} has more than {cap} vectors")))?;
    let qq = q.get();
    let mut coords = vec![0u32; t];
    let mut vectors = Vec::new();
    for _ in 0..total {
        let ss = coords.iter().fold(0u32, |acc, &c| q.add(acc, q.mul(c, c)));
        if ss == 0 {
            vectors.push(FieldVector::from_reduced(q, coords.clone()));
        }
        for k in (0..t).rev() {
            coords[k] += 1;
            if coords[k] < qq {
                break;
            }
            coords[k] = 0;
        }
    }
    Ok(IsotropicSet {
        modulus: q,
        dim: t,
        vectors,
        exhaustive: true,
    })
}

/// A uniform member of V by rejection from uniform vectors of F_q^t.
pub fn sample_uniform<R: Rng + ?Sized>(
    q: PrimeModulus,
    t: usize,
    rng: &mut R,
) -> Result<FieldVector> {
    if t == 0 {
        return Err(Error::Parameter("dimension t must be at least 1".into()));
    }
    loop {
        let coords: Vec<u32> = (0..t).map(|_| rng.gen_range(0..q.get())).collect();
        let v = FieldVector::from_reduced(q, coords);
        if v.is_isotropic() {
            return Ok(v);
        }
    }
}

/// `n` distinct members of `set`, as a uniformly random n-subset in random order.
pub fn sample_distinct<R: Rng + ?Sized>(
    set: &IsotropicSet,
    n: usize,
    rng: &mut R,
) -> Result<Vec<FieldVector>> {
    if n > set.len() {
        return Err(Error::Capacity(format!(
            "cannot pick {n} distinct vectors from a set of {}",
            set.len()
        )));
    }
    Ok(index::sample(rng, set.len(), n)
        .into_iter()
        .map(|i| set.vectors[i].clone())
        .collect())
}

/// Keeps each member independently with probability `p`, preserving order.
pub fn bernoulli_subset<R: Rng + ?Sized>(
    set: &IsotropicSet,
    p: f64,
    rng: &mut R,
) -> Result<Vec<FieldVector>> {
    bernoulli_mask(set.len(), p, rng).map(|mask| {
        set.vectors
            .iter()
            .zip(mask)
            .filter(|&(_v, keep)| keep)
            .map(|(v, _keep)| v.clone())
            .collect()
    })
}

pub(crate) fn bernoulli_mask<R: Rng + ?Sized>(
    len: usize,
    p: f64,
    rng: &mut R,
) -> Result<Vec<bool>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
    }
    Ok((0..len).map(|_| rng.gen_bool(p)).collect())
}
