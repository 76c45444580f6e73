use crate::error::{Error, Result};
use crate::interval::{interval_sum, Interval, IntervalFamily};
use crate::norm::{iso_t_inv, james_norm_value_sq, l2_norm_sq};
use crate::partitions::is_norming_family;
use crate::scalar::{Mode, Scalar};
use crate::vector::JVector;

/// Certificate for membership in the extreme points of the unit ball: the
/// verdict together with both squared norms, and a witness interval when a
/// remainder violation explains the gap between them.
#[derive(Clone, Debug)]
pub struct ExtremeCertificateJ {
    pub verdict: bool,
    pub james_sq: Scalar,
    pub l2_sq: Scalar,
    /// An interval with `|Σ_{n∈I} x(n)|² > Σ_{n∈I} x(n)²`, when one exists.
    pub failing_interval: Option<Interval>,
}

/// Extreme-point test for the unit ball: the verdict is true exactly when
/// both squared norms equal one. Exact mode only; float inputs should use
/// [`is_extreme_direction`].
pub fn is_extreme_bj(x: &JVector) -> Result<ExtremeCertificateJ> {
    if x.mode() != Mode::Exact {
        return Err(Error::FloatModeUnsupported);
    }
    let james_sq = james_norm_value_sq(x);
    let l2_sq = l2_norm_sq(x);
    let one = Scalar::from_int(1);
    let (_, failing_interval) = is_npr_hereditary(x);
    Ok(ExtremeCertificateJ {
        verdict: james_sq == one && l2_sq == one,
        james_sq,
        l2_sq,
        failing_interval,
    })
}

/// Scale-free form of the extreme test: `x/‖x‖_J` is extreme exactly when the
/// squared norms agree. Exact equality in exact mode, relative tolerance in
/// float mode.
pub fn is_extreme_direction(x: &JVector, tol: f64) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(james_norm_value_sq(x).norm_eq(&l2_norm_sq(x), tol))
}

/// Non-positive remainder: `|Σ x(n)|² ≤ Σ x(n)²`.
pub fn is_npr(x: &JVector) -> bool {
    let total = match x.bounding_box() {
        Some((lo, hi)) => x.range_sum(lo, hi),
        None => return true,
    };
    total.square().cmp_same_mode(&l2_norm_sq(x)) != std::cmp::Ordering::Greater
}

/// Hereditary non-positive remainder: scans every subinterval of the bounding
/// box and returns the first violator when the property fails.
pub fn is_npr_hereditary(x: &JVector) -> (bool, Option<Interval>) {
    let (lo, hi) = match x.bounding_box() {
        Some(b) => b,
        None => return (true, None),
    };
    // Prefix sums of values and of squares over the box.
    let n = (hi - lo + 1) as usize;
    let zero = Scalar::zero(x.mode());
    let mut sums = vec![zero.clone()];
    let mut squares = vec![zero];
    for p in 1..=n {
        let v = x.coeff(lo + p as u32 - 1);
        sums.push(&sums[p - 1] + &v);
        squares.push(&squares[p - 1] + &v.square());
    }
    for i in 1..=n {
        for j in i..=n {
            let total = (&sums[j] - &sums[i - 1]).square();
            let l2 = &squares[j] - &squares[i - 1];
            if total.cmp_same_mode(&l2) == std::cmp::Ordering::Greater {
                let interval = Interval::Finite {
                    lo: lo + i as u32 - 1,
                    hi: lo + j as u32 - 1,
                };
                return (false, Some(interval));
            }
        }
    }
    (true, None)
}

/// Places the block sums of a norming family at the given strictly increasing
/// positions. For a norm-one vector the result is an extreme point; scaled
/// inputs produce the correspondingly scaled extreme direction.
pub fn extreme_from_family(
    x: &JVector,
    family: &IntervalFamily,
    positions: &[u32],
    tol: f64,
) -> Result<JVector> {
    if !is_norming_family(x, family, tol)? {
        return Err(Error::NotNorming);
    }
    if positions.len() != family.len() {
        return Err(Error::PositionCount {
            expected: family.len(),
            got: positions.len(),
        });
    }
    if positions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition(
            "positions must be strictly increasing".into(),
        ));
    }
    let mut coords = Vec::with_capacity(positions.len());
    for (interval, &pos) in family.iter().zip(positions) {
        if pos == 0 {
            return Err(Error::InvalidIndex);
        }
        coords.push((pos, interval_sum(x, interval)?));
    }
    JVector::from_coords(x.mode(), coords)
}

/// Extreme-point test for the unit ball of the squared-variation norm, via
/// the difference transform: `y` is extreme exactly when the transformed
/// vector has agreeing squared norms (hereditary non-positive remainder).
pub fn is_extreme_bjs(y: &JVector, tol: f64) -> Result<bool> {
    if y.is_zero() {
        return Err(Error::ZeroVector);
    }
    is_extreme_direction(&iso_t_inv(y), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::iso_t;
    use crate::scalar::DEFAULT_TOL;

    fn exact(parts: &[(i64, i64)]) -> JVector {
        JVector::from_coords(
            Mode::Exact,
            parts
                .iter()
                .enumerate()
                .map(|(i, &(p, q))| (i as u32 + 1, Scalar::ratio(p, q))),
        )
        .unwrap()
    }

    #[test]
    fn extreme_bj_examples() {
        // (2/3, -1/3, 2/3): both squared norms are exactly one.
        let x = exact(&[(2, 3), (-1, 3), (2, 3)]);
        let cert = is_extreme_bj(&x).unwrap();
        assert!(cert.verdict);
        assert_eq!(cert.james_sq, Scalar::from_int(1));
        assert_eq!(cert.l2_sq, Scalar::from_int(1));
        assert!(cert.failing_interval.is_none());

        let e7 = JVector::from_coords(Mode::Exact, [(7, Scalar::from_int(1))]).unwrap();
        assert!(is_extreme_bj(&e7).unwrap().verdict);

        // (7/10, 7/10): interval-partition norm² is 49/25, ℓ₂² is 49/50.
        let x = exact(&[(7, 10), (7, 10)]);
        let cert = is_extreme_bj(&x).unwrap();
        assert!(!cert.verdict);
        assert_eq!(cert.james_sq, Scalar::ratio(49, 25));
        assert_eq!(cert.l2_sq, Scalar::ratio(49, 50));
        assert_eq!(cert.failing_interval, Some(Interval::finite(1, 2).unwrap()));
    }

    #[test]
    fn extreme_bj_rejects_float_mode() {
        let x = JVector::from_floats(&[1.0]);
        assert!(matches!(is_extreme_bj(&x), Err(Error::FloatModeUnsupported)));
    }

    #[test]
    fn extreme_direction_examples() {
        assert!(is_extreme_direction(&JVector::from_ints(&[2, -1, 2]), DEFAULT_TOL).unwrap());
        assert!(!is_extreme_direction(&JVector::from_ints(&[1, 1]), DEFAULT_TOL).unwrap());
        assert!(is_extreme_direction(&JVector::from_ints(&[1, -1]), DEFAULT_TOL).unwrap());
    }

    #[test]
    fn npr_examples() {
        assert!(!is_npr(&JVector::from_ints(&[1, 1])));
        let (ok, witness) = is_npr_hereditary(&JVector::from_ints(&[2, -1, 2]));
        assert!(ok);
        assert!(witness.is_none());
        let (ok, witness) = is_npr_hereditary(&JVector::from_ints(&[1, -1, 1, 1]));
        assert!(!ok);
        assert_eq!(witness, Some(Interval::finite(3, 4).unwrap()));
    }

    #[test]
    fn extreme_from_family_examples() {
        let x = exact(&[(2, 3), (-1, 3), (2, 3)]);
        let singles = IntervalFamily::singletons(&[1, 2, 3]).unwrap();
        let y = extreme_from_family(&x, &singles, &[2, 5, 9], DEFAULT_TOL).unwrap();
        let expected = JVector::from_coords(
            Mode::Exact,
            [
                (2, Scalar::ratio(2, 3)),
                (5, Scalar::ratio(-1, 3)),
                (9, Scalar::ratio(2, 3)),
            ],
        )
        .unwrap();
        assert_eq!(y, expected);
        assert!(is_extreme_bj(&y).unwrap().verdict);

        let whole = IntervalFamily::new(vec![Interval::finite(1, 3).unwrap()]).unwrap();
        let y = extreme_from_family(&x, &whole, &[1], DEFAULT_TOL).unwrap();
        assert_eq!(y, JVector::from_ints(&[1]));
        assert!(is_extreme_bj(&y).unwrap().verdict);

        let e1 = JVector::from_ints(&[1]);
        let fam = IntervalFamily::singletons(&[1]).unwrap();
        let y = extreme_from_family(&e1, &fam, &[4], DEFAULT_TOL).unwrap();
        assert_eq!(
            y,
            JVector::from_coords(Mode::Exact, [(4, Scalar::from_int(1))]).unwrap()
        );
    }

    #[test]
    fn extreme_from_family_validates_inputs() {
        let x = JVector::from_ints(&[2, -1, 2]);
        let not_norming = IntervalFamily::new(vec![
            Interval::finite(1, 2).unwrap(),
            Interval::finite(3, 3).unwrap(),
        ])
        .unwrap();
        assert!(matches!(
            extreme_from_family(&x, &not_norming, &[1, 2], DEFAULT_TOL),
            Err(Error::NotNorming)
        ));
        let singles = IntervalFamily::singletons(&[1, 2, 3]).unwrap();
        assert!(matches!(
            extreme_from_family(&x, &singles, &[1, 2], DEFAULT_TOL),
            Err(Error::PositionCount { expected: 3, got: 2 })
        ));
        assert!(extreme_from_family(&x, &singles, &[2, 2, 3], DEFAULT_TOL).is_err());
    }

    #[test]
    fn extreme_bjs_examples() {
        let y = iso_t(&exact(&[(2, 3), (-1, 3), (2, 3)]));
        assert!(is_extreme_bjs(&y, DEFAULT_TOL).unwrap());

        // T((1,1)) scaled to norm one is not extreme: the difference vector
        // (1/2, 1/2) fails the remainder inequality.
        let y = iso_t(&JVector::from_ints(&[1, 1]))
            .scale(&Scalar::ratio(1, 2))
            .unwrap();
        assert!(!is_extreme_bjs(&y, DEFAULT_TOL).unwrap());

        let e1 = JVector::from_ints(&[1]);
        assert_eq!(iso_t(&e1), e1);
        assert!(is_extreme_bjs(&e1, DEFAULT_TOL).unwrap());
    }
}
