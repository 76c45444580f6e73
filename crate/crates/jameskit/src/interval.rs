use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::vector::JVector;

/// An interval of ℕ, or one of the two interval shapes of ω+1 that contain ω.
/// In dual functionals `TailOmega(k)` stands for the plain tail `[k, ∞)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Interval {
    /// Closed interval `[lo, hi]` with `1 <= lo <= hi`.
    Finite { lo: u32, hi: u32 },
    /// `[start, ∞) ∪ {ω}` with `start >= 1`.
    TailOmega { start: u32 },
    /// The singleton `{ω}`.
    OmegaSingleton,
}

impl Interval {
    pub fn finite(lo: u32, hi: u32) -> Result<Interval> {
        if lo == 0 || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval::Finite { lo, hi })
    }

    pub fn singleton(n: u32) -> Result<Interval> {
        Interval::finite(n, n)
    }

    pub fn tail(start: u32) -> Result<Interval> {
        if start == 0 {
            return Err(Error::InvalidIndex);
        }
        Ok(Interval::TailOmega { start })
    }

    pub fn omega() -> Interval {
        Interval::OmegaSingleton
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Interval::Finite { .. })
    }

    pub fn contains_omega(&self) -> bool {
        matches!(self, Interval::TailOmega { .. } | Interval::OmegaSingleton)
    }

    pub fn finite_bounds(&self) -> Option<(u32, u32)> {
        match self {
            Interval::Finite { lo, hi } => Some((*lo, *hi)),
            _ => None,
        }
    }

    /// Membership of a natural number (ω itself is not a natural index).
    pub fn contains(&self, n: u32) -> bool {
        match self {
            Interval::Finite { lo, hi } => *lo <= n && n <= *hi,
            Interval::TailOmega { start } => n >= *start,
            Interval::OmegaSingleton => false,
        }
    }

    /// First natural number in the interval, if any.
    pub fn min_index(&self) -> Option<u32> {
        match self {
            Interval::Finite { lo, .. } => Some(*lo),
            Interval::TailOmega { start } => Some(*start),
            Interval::OmegaSingleton => None,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interval::Finite { lo, hi } if lo == hi => write!(f, "{{{lo}}}"),
            Interval::Finite { lo, hi } => write!(f, "[{lo},{hi}]"),
            Interval::TailOmega { start } => write!(f, "[{start},omega]"),
            Interval::OmegaSingleton => write!(f, "{{omega}}"),
        }
    }
}

/// An ordered family of pairwise disjoint intervals, strictly increasing:
/// `max I_i < min I_{i+1}`, with any ω-containing interval last.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalFamily {
    intervals: Vec<Interval>,
}

impl IntervalFamily {
    pub fn empty() -> IntervalFamily {
        IntervalFamily { intervals: vec![] }
    }

    /// Validates ordering and disjointness; out-of-order input is rejected,
    /// not repaired.
    pub fn new(intervals: Vec<Interval>) -> Result<IntervalFamily> {
        for pair in intervals.windows(2) {
            let (prev, next) = (&pair[0], &pair[1]);
            match prev {
                Interval::Finite { hi, .. } => match next {
                    Interval::Finite { lo, .. } | Interval::TailOmega { start: lo } => {
                        if lo <= hi {
                            return Err(Error::InvalidFamily);
                        }
                    }
                    Interval::OmegaSingleton => {}
                },
                // Both tail-with-omega and {omega} contain omega, and a tail
                // swallows every later natural number, so nothing may follow.
                Interval::TailOmega { .. } | Interval::OmegaSingleton => {
                    return Err(Error::InvalidFamily);
                }
            }
        }
        Ok(IntervalFamily { intervals })
    }

    pub fn singletons(indices: &[u32]) -> Result<IntervalFamily> {
        IntervalFamily::new(
            indices
                .iter()
                .map(|&n| Interval::singleton(n))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval> {
        self.intervals.iter()
    }
}

impl fmt::Display for IntervalFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, interval) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{interval}")?;
        }
        write!(f, "}}")
    }
}

/// `Σ_{k ∈ I} x(k)`, exact in exact mode. ω-shaped intervals require a
/// bidual vector and are rejected here.
pub fn interval_sum(x: &JVector, interval: &Interval) -> Result<Scalar> {
    match interval {
        Interval::Finite { lo, hi } => Ok(x.range_sum(*lo, *hi)),
        Interval::TailOmega { .. } | Interval::OmegaSingleton => Err(Error::OmegaInterval),
    }
}

/// `Σ_i (Σ_{k ∈ I_i} x(k))²` for a valid family.
pub fn eval_family_sq(x: &JVector, family: &IntervalFamily) -> Result<Scalar> {
    let mut acc = Scalar::zero(x.mode());
    for interval in family.iter() {
        let s = interval_sum(x, interval)?;
        acc = &acc + &s.square();
    }
    Ok(acc)
}

/// Canonicalizes a family against the support of `x`: intervals that miss the
/// support are deleted and the rest shrink to the convex hull of their
/// support trace. The evaluation is unchanged.
pub fn canonicalize_family(x: &JVector, family: &IntervalFamily) -> IntervalFamily {
    let mut out = Vec::new();
    for interval in family.iter() {
        let (lo, hi) = match interval {
            Interval::Finite { lo, hi } => (*lo, *hi),
            Interval::TailOmega { start } => match x.max_support() {
                Some(max) if max >= *start => (*start, max),
                _ => continue,
            },
            Interval::OmegaSingleton => continue,
        };
        let mut trace = x.coords().filter(|(n, _)| lo <= *n && *n <= hi);
        let first = match trace.next() {
            Some((n, _)) => n,
            None => continue,
        };
        let last = trace.last().map(|(n, _)| n).unwrap_or(first);
        out.push(Interval::Finite {
            lo: first,
            hi: last,
        });
    }
    IntervalFamily { intervals: out }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Mode;

    fn fam(ranges: &[(u32, u32)]) -> IntervalFamily {
        IntervalFamily::new(
            ranges.iter()
                .map(|&(lo, hi)| Interval::finite(lo, hi).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn interval_sum_examples() {
        let x = JVector::from_ints(&[1, -1, 0, 3]);
        assert_eq!(
            interval_sum(&x, &Interval::finite(1, 2).unwrap()).unwrap(),
            Scalar::from_int(0)
        );
        let x = JVector::from_ints(&[2, -1, 2]);
        assert_eq!(
            interval_sum(&x, &Interval::finite(1, 3).unwrap()).unwrap(),
            Scalar::from_int(3)
        );
        assert_eq!(
            interval_sum(&x, &Interval::finite(2, 3).unwrap()).unwrap(),
            Scalar::from_int(1)
        );
    }

    #[test]
    fn interval_sum_rejects_omega_on_plain_vector() {
        let x = JVector::from_ints(&[1]);
        assert!(matches!(
            interval_sum(&x, &Interval::tail(1).unwrap()),
            Err(Error::OmegaInterval)
        ));
        assert!(matches!(
            interval_sum(&x, &Interval::omega()),
            Err(Error::OmegaInterval)
        ));
    }

    #[test]
    fn eval_family_sq_examples() {
        // Oracle: direct arithmetic.
        let x = JVector::from_ints(&[2, -1, 2]);
        assert_eq!(eval_family_sq(&x, &fam(&[(1, 3)])).unwrap(), Scalar::from_int(9));
        assert_eq!(
            eval_family_sq(&x, &fam(&[(1, 1), (2, 2), (3, 3)])).unwrap(),
            Scalar::from_int(9)
        );
        assert_eq!(
            eval_family_sq(&x, &fam(&[(1, 2), (3, 3)])).unwrap(),
            Scalar::from_int(5)
        );
    }

    #[test]
    fn family_validation_rejects_disorder_and_overlap() {
        let a = Interval::finite(1, 3).unwrap();
        let b = Interval::finite(3, 4).unwrap();
        assert!(IntervalFamily::new(vec![a.clone(), b]).is_err());
        let c = Interval::finite(5, 6).unwrap();
        assert!(IntervalFamily::new(vec![c.clone(), a.clone()]).is_err());
        assert!(IntervalFamily::new(vec![Interval::omega(), a]).is_err());
        assert!(IntervalFamily::new(vec![Interval::tail(2).unwrap(), c]).is_err());
        assert!(IntervalFamily::new(vec![
            Interval::finite(1, 1).unwrap(),
            Interval::tail(2).unwrap()
        ])
        .is_ok());
    }

    #[test]
    fn canonicalize_examples() {
        let x = JVector::from_ints(&[1, 0, -1]);
        let canon = canonicalize_family(&x, &fam(&[(1, 2), (3, 3)]));
        assert_eq!(canon, fam(&[(1, 1), (3, 3)]));

        let x = JVector::from_ints(&[1, -1]);
        let canon = canonicalize_family(&x, &fam(&[(1, 1), (2, 2)]));
        assert_eq!(canon, fam(&[(1, 1), (2, 2)]));

        let x = JVector::from_ints(&[2, -1, 2]);
        let canon = canonicalize_family(&x, &fam(&[(1, 5)]));
        assert_eq!(canon, fam(&[(1, 3)]));
    }

    #[test]
    fn canonicalize_preserves_evaluation() {
        let x = JVector::from_ints(&[0, 2, 0, -1, 0, 2, 0]);
        let families = [
            fam(&[(1, 3), (4, 7)]),
            fam(&[(1, 1)]),
            fam(&[(2, 2), (3, 5), (6, 8)]),
        ];
        for family in &families {
            let canon = canonicalize_family(&x, family);
            assert_eq!(
                eval_family_sq(&x, family).unwrap(),
                eval_family_sq(&x, &canon).unwrap()
            );
        }
        assert_eq!(
            canonicalize_family(&JVector::zero(Mode::Exact), &fam(&[(1, 4)])),
            IntervalFamily::empty()
        );
    }
}
