use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar};

/// A finitely supported sequence `x = Σ x(n) e_n` with 1-based indices.
/// Zero entries are never stored, so the key set is exactly the support.
#[derive(Clone, Debug, PartialEq)]
pub struct JVector {
    mode: Mode,
    coords: BTreeMap<u32, Scalar>,
}

impl JVector {
    pub fn zero(mode: Mode) -> JVector {
        JVector {
            mode,
            coords: BTreeMap::new(),
        }
    }

    /// Builds a vector from (index, coefficient) pairs. Zero coefficients are
    /// dropped; a 0 index or a scalar of the wrong mode is an error.
    pub fn from_coords<I>(mode: Mode, coords: I) -> Result<JVector>
    where
        I: IntoIterator<Item = (u32, Scalar)>,
    {
        let mut map = BTreeMap::new();
        for (idx, value) in coords {
            if idx == 0 {
                return Err(Error::InvalidIndex);
            }
            value.require_mode(mode)?;
            if value.is_zero() {
                continue;
            }
            map.insert(idx, value);
        }
        Ok(JVector { mode, coords: map })
    }

    /// Dense exact vector from integer entries starting at index 1.
    pub fn from_ints(entries: &[i64]) -> JVector {
        let coords = entries
            .iter()
            .enumerate()
            .map(|(i, &v)| (i as u32 + 1, Scalar::from_int(v)));
        JVector::from_coords(Mode::Exact, coords).expect("valid dense vector")
    }

    /// Dense float vector from entries starting at index 1.
    pub fn from_floats(entries: &[f64]) -> JVector {
        let coords = entries
            .iter()
            .enumerate()
            .map(|(i, &v)| (i as u32 + 1, Scalar::float(v)));
        JVector::from_coords(Mode::Float, coords).expect("valid dense vector")
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// Coefficient at index `n`; zero of the vector's mode when absent.
    pub fn coeff(&self, n: u32) -> Scalar {
        self.coords
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.mode))
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.coords.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> impl Iterator<Item = (u32, &Scalar)> {
        self.coords.iter().map(|(k, v)| (*k, v))
    }

    pub fn min_support(&self) -> Option<u32> {
        self.coords.keys().next().copied()
    }

    pub fn max_support(&self) -> Option<u32> {
        self.coords.keys().next_back().copied()
    }

    /// Smallest interval `[lo, hi]` containing the support, if any.
    pub fn bounding_box(&self) -> Option<(u32, u32)> {
        Some((self.min_support()?, self.max_support()?))
    }

    /// Sum of the coefficients over `[lo, hi]`; zero when the range is empty.
    pub fn range_sum(&self, lo: u32, hi: u32) -> Scalar {
        let mut acc = Scalar::zero(self.mode);
        if lo > hi {
            return acc;
        }
        for (_, v) in self.coords.range(lo..=hi) {
            acc = &acc + v;
        }
        acc
    }

    /// Sum of the coefficients over `[lo, ∞)`.
    pub fn tail_sum(&self, lo: u32) -> Scalar {
        let mut acc = Scalar::zero(self.mode);
        for (_, v) in self.coords.range(lo..) {
            acc = &acc + v;
        }
        acc
    }

    /// The restriction `x|_[lo,hi]`, zero outside the interval.
    pub fn restrict(&self, lo: u32, hi: u32) -> JVector {
        if lo > hi {
            return JVector::zero(self.mode);
        }
        JVector {
            mode: self.mode,
            coords: self
                .coords
                .range(lo..=hi)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Projection onto `[1, hi]`: all coefficients beyond `hi` dropped.
    pub fn truncate(&self, hi: u32) -> JVector {
        self.restrict(1, hi)
    }

    pub fn scale(&self, factor: &Scalar) -> Result<JVector> {
        factor.require_mode(self.mode)?;
        JVector::from_coords(self.mode, self.coords().map(|(k, v)| (k, v * factor)))
    }

    /// Lossy conversion to float mode, for constructions that need roots.
    pub fn to_float(&self) -> JVector {
        JVector {
            mode: Mode::Float,
            coords: self
                .coords
                .iter()
                .map(|(k, v)| (*k, Scalar::float(v.to_f64())))
                .collect(),
        }
    }
}

/// Relabels the support onto `{1, …, k}` preserving order and coefficients.
/// Returns the compacted vector and the old-to-new index map. Both the
/// interval-partition norm and the ℓ₂ norm are invariant under this map
/// because the basis is spreading.
pub fn compact_support(x: &JVector) -> Result<(JVector, BTreeMap<u32, u32>)> {
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut map = BTreeMap::new();
    let mut coords = Vec::with_capacity(x.support_len());
    for (new_idx, (old_idx, value)) in x.coords().enumerate() {
        let new_idx = new_idx as u32 + 1;
        map.insert(old_idx, new_idx);
        coords.push((new_idx, value.clone()));
    }
    Ok((JVector::from_coords(x.mode(), coords)?, map))
}
