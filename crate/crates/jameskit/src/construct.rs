use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::vector::JVector;

const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// A point `(a1, a2, a3)` with `a1, a3 > 0 > a2`, coordinate sum 1 and
/// squared sum 1. Such triples admit both the whole-interval and the
/// all-singleton norming partitions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ESetPoint {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl ESetPoint {
    /// Residuals of the two defining identities.
    pub fn residuals(&self) -> (f64, f64) {
        let sum = self.a1 + self.a2 + self.a3 - 1.0;
        let sq = self.a1 * self.a1 + self.a2 * self.a2 + self.a3 * self.a3 - 1.0;
        (sum.abs(), sq.abs())
    }
}

/// Solves `base + u + v = target`, `base² + u² + v² = target²` for the unique
/// pair with `u < 0 < v`. Requires `0 < base < target`.
fn solve_pair(base: f64, target: f64) -> Result<(f64, f64)> {
    if !(0.0 < base && base < target) {
        return Err(Error::Precondition(format!(
            "need 0 < base < target, got base={base}, target={target}"
        )));
    }
    let s = target - base;
    let q = target * target - base * base;
    let disc = 2.0 * q - s * s;
    if disc <= 0.0 {
        return Err(Error::Precondition(format!(
            "degenerate pair for base={base}, target={target}"
        )));
    }
    let root = disc.sqrt();
    Ok(((s - root) / 2.0, (s + root) / 2.0))
}

/// The unique pair `(a2, a3)` completing `a1 ∈ (0, 1)` to a point of the set:
/// the negative quadratic root goes to `a2`.
pub fn e_set_point(a1: f64) -> Result<ESetPoint> {
    if !(0.0 < a1 && a1 < 1.0) {
        return Err(Error::Precondition(format!(
            "a1 must lie strictly between 0 and 1, got {a1}"
        )));
    }
    let (a2, a3) = solve_pair(a1, 1.0)?;
    Ok(ESetPoint { a1, a2, a3 })
}

/// Extends a strictly increasing ramp `r_1 ≥ 1/√2, …, r_k = 1` to the unique
/// coefficient sequence `(a_j)` of length `2k−1` with `a_1 = r_1` and, per
/// step, partial sum `r_{m+1}` and partial squared sum `r_{m+1}²`. Every
/// strict-inequality subinterval check of the output holds by construction.
pub fn ramp_sequence(r: &[f64]) -> Result<Vec<f64>> {
    if r.is_empty() {
        return Err(Error::Precondition("ramp must be nonempty".into()));
    }
    if r.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("ramp must be strictly increasing".into()));
    }
    if r[0] < INV_SQRT2 - 1e-12 {
        return Err(Error::Precondition(format!(
            "ramp must start at or above 1/sqrt(2), got {}",
            r[0]
        )));
    }
    let last = *r.last().expect("nonempty");
    if (last - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition(format!(
            "ramp must end at 1, got {last}"
        )));
    }
    let mut out = Vec::with_capacity(2 * r.len() - 1);
    out.push(r[0]);
    for w in r.windows(2) {
        let (neg, pos) = solve_pair(w[0], w[1])?;
        out.push(neg);
        out.push(pos);
    }
    Ok(out)
}

/// A float vector with exactly `k` norming partitions: the ramp
/// `r_i = sqrt(1/2 + (i−1)/(2(k−1)))` fed through [`ramp_sequence`]. The
/// only multi-point interval usable in a norming partition starts at 1 and
/// ends at an odd index.
pub fn multi_partition_vector(k: u32) -> Result<JVector> {
    if k == 0 {
        return Err(Error::Precondition("k must be >= 1".into()));
    }
    if k == 1 {
        return Ok(JVector::from_floats(&[1.0]));
    }
    let ramp: Vec<f64> = (1..=k)
        .map(|i| (0.5 + (i - 1) as f64 / (2.0 * (k - 1) as f64)).sqrt())
        .collect();
    Ok(JVector::from_floats(&ramp_sequence(&ramp)?))
}

/// Places, in `b` consecutive 6-wide blocks, the pattern
/// `2^{−n} (a1, a2, a3, −a3, −a2, −a1)`. Each half-block independently admits
/// the singleton and whole-interval partitions, so the normalized vector has
/// `4^b` norming partitions.
pub fn block_product_vector(b: u32, p: &ESetPoint) -> Result<JVector> {
    if b == 0 {
        return Err(Error::Precondition("b must be >= 1".into()));
    }
    let mut entries = Vec::with_capacity(6 * b as usize);
    for n in 1..=b {
        let w = 0.5_f64.powi(n as i32);
        entries.extend_from_slice(&[
            w * p.a1,
            w * p.a2,
            w * p.a3,
            -w * p.a3,
            -w * p.a2,
            -w * p.a1,
        ]);
    }
    Ok(JVector::from_floats(&entries))
}

/// One instance of the sliding-square inequality: whenever `ε ≠ 0`,
/// `δε > 0` and `ρ + γ² ≤ (γ + ε)²`, it follows that
/// `ρ + (γ + δ)² < (γ + δ + ε)²`. Returns the truth of that instance;
/// vacuously true when the premise fails. All four scalars must share a mode.
pub fn sliding_square_inequality(rho: &Scalar, gamma: &Scalar, eps: &Scalar, delta: &Scalar) -> bool {
    let premise = !eps.is_zero()
        && (delta * eps).signum() > 0
        && (rho + &gamma.square()).cmp_same_mode(&(gamma + eps).square())
            != std::cmp::Ordering::Greater;
    if !premise {
        return true;
    }
    let shifted = gamma + delta;
    (rho + &shifted.square()).cmp_same_mode(&(&shifted + eps).square())
        == std::cmp::Ordering::Less
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extreme::is_extreme_direction;
    use crate::partitions::count_norming_partitions;
    use crate::scalar::DEFAULT_TOL;
    use num::BigUint;

    #[test]
    fn e_set_point_reference_values() {
        // Quadratic-formula oracle: t² − 0.2 t − 0.16 = 0 for a1 = 0.8.
        let p = e_set_point(0.8).unwrap();
        assert!((p.a2 - -0.312310562561766).abs() < 1e-12);
        assert!((p.a3 - 0.512310562561766).abs() < 1e-11);
        let (r1, r2) = p.residuals();
        assert!(r1 <= 1e-12 && r2 <= 1e-12);
    }

    #[test]
    fn e_set_point_matches_exact_probe() {
        // (2/3, −1/3, 2/3) satisfies both identities exactly.
        let p = e_set_point(2.0 / 3.0).unwrap();
        assert!((p.a2 - (-1.0 / 3.0)).abs() <= 1e-12);
        assert!((p.a3 - 2.0 / 3.0).abs() <= 1e-12);
    }

    #[test]
    fn e_set_point_boundaries_rejected() {
        assert!(e_set_point(1.0).is_err());
        assert!(e_set_point(0.0).is_err());
        assert!(e_set_point(-0.5).is_err());
    }

    #[test]
    fn e_set_point_sign_facts() {
        for i in 1..=19 {
            let a1 = i as f64 * 0.05;
            let p = e_set_point(a1).unwrap();
            assert!(p.a2 < 0.0 && p.a3 > 0.0);
            assert!(p.a2.abs() < p.a1.min(p.a3));
            if a1 >= INV_SQRT2 {
                assert!(p.a1 > p.a3);
            }
        }
    }

    #[test]
    fn prop65_identities() {
        let seq = ramp_sequence(&[INV_SQRT2, 1.0]).unwrap();
        assert_eq!(seq.len(), 3);
        assert!(seq[0] > 0.0 && seq[1] < 0.0 && seq[2] > 0.0);

        let r = [0.75, 0.9, 1.0];
        let seq = ramp_sequence(&r).unwrap();
        assert_eq!(seq.len(), 5);
        let sum: f64 = seq.iter().sum();
        let sq: f64 = seq.iter().map(|a| a * a).sum();
        assert!((sum - 1.0).abs() <= 1e-10);
        assert!((sq - 1.0).abs() <= 1e-10);
        // Partial sums hit the ramp.
        for (m, &rm) in r.iter().enumerate() {
            let partial: f64 = seq[..2 * m + 1].iter().sum();
            assert!((partial - rm).abs() <= 1e-10);
        }
    }

    #[test]
    fn prop65_rejects_bad_ramps() {
        assert!(ramp_sequence(&[0.5, 1.0]).is_err());
        assert!(ramp_sequence(&[0.9, 0.8, 1.0]).is_err());
        assert!(ramp_sequence(&[0.8, 0.9]).is_err());
        assert!(ramp_sequence(&[]).is_err());
    }

    #[test]
    fn multi_partition_counts() {
        assert_eq!(
            multi_partition_vector(1).unwrap(),
            JVector::from_floats(&[1.0])
        );
        for k in 1..=5u32 {
            let x = multi_partition_vector(k).unwrap();
            assert_eq!(x.support_len() as u32, 2 * k - 1);
            let count = count_norming_partitions(&x, DEFAULT_TOL).unwrap();
            assert_eq!(count, BigUint::from(k), "count for k = {k}");
            assert!(is_extreme_direction(&x, DEFAULT_TOL).unwrap());
        }
    }

    #[test]
    fn block_product_counts() {
        let p = e_set_point(2.0 / 3.0).unwrap();
        for b in 1..=2u32 {
            let z = block_product_vector(b, &p).unwrap();
            assert_eq!(z.support_len(), 6 * b as usize);
            let count = count_norming_partitions(&z, DEFAULT_TOL).unwrap();
            assert_eq!(count, BigUint::from(4u32).pow(b), "count for b = {b}");
            assert!(is_extreme_direction(&z, DEFAULT_TOL).unwrap());
        }
    }

    #[test]
    fn inequality_instances() {
        let s = Scalar::from_int;
        assert!(sliding_square_inequality(&s(0), &s(0), &s(1), &s(1)));
        assert!(sliding_square_inequality(&s(1), &s(1), &s(1), &s(2)));
    }

    #[test]
    fn block_partitions_stay_inside_half_blocks() {
        let p = e_set_point(0.75).unwrap();
        let z = block_product_vector(2, &p).unwrap();
        let e = crate::partitions::enumerate_norming_partitions(&z, 1000, DEFAULT_TOL).unwrap();
        assert_eq!(e.partitions.len(), 16);
        for partition in &e.partitions {
            for interval in partition.family().iter() {
                let (lo, hi) = interval.finite_bounds().unwrap();
                let block = (lo - 1) / 6;
                let half = if (lo - 1) % 6 < 3 { 0 } else { 1 };
                let (half_lo, half_hi) = match half {
                    0 => (6 * block + 1, 6 * block + 3),
                    _ => (6 * block + 4, 6 * block + 6),
                };
                assert!(
                    half_lo <= lo && hi <= half_hi,
                    "interval [{lo},{hi}] crosses a half-block"
                );
            }
        }
    }
}
