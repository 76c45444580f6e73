use crate::error::{Error, Result};
use crate::interval::{canonicalize_family, IntervalFamily};
use crate::partitions::NormingPartition;
use crate::scalar::Scalar;
use crate::vector::JVector;

/// Default cap on the bounding-box size accepted by the brute-force oracle.
pub const DEFAULT_BRUTEFORCE_CAP: usize = 14;

/// Cap on the brute-force bounding box, overridable through the
/// `JAMESKIT_BRUTEFORCE_CAP` environment variable.
pub fn bruteforce_cap() -> usize {
    std::env::var("JAMESKIT_BRUTEFORCE_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_BRUTEFORCE_CAP)
}

/// The squared norm together with a canonical norming partition achieving it.
#[derive(Clone, Debug)]
pub struct NormCertificate {
    pub norm_sq: Scalar,
    pub witness: NormingPartition,
}

/// Prefix DP over the support's bounding box, with prefix sums. Positions are
/// 1-based relative to the box: position `p` is index `lo + p - 1`.
pub(crate) struct DpTables {
    pub(crate) lo: u32,
    pub(crate) n: usize,
    /// prefix[p] = x(lo) + … + x(lo+p-1); prefix[0] = 0.
    pub(crate) prefix: Vec<Scalar>,
    /// f[p] = max of Σ (interval sum)² over families inside positions 1..=p.
    pub(crate) f: Vec<Scalar>,
}

impl DpTables {
    pub(crate) fn build(x: &JVector) -> Option<DpTables> {
        let (lo, hi) = x.bounding_box()?;
        let n = (hi - lo + 1) as usize;
        let zero = Scalar::zero(x.mode());

        let mut prefix = Vec::with_capacity(n + 1);
        prefix.push(zero.clone());
        for p in 1..=n {
            let v = x.coeff(lo + p as u32 - 1);
            prefix.push(&prefix[p - 1] + &v);
        }

        // f(p) = max(f(p-1), max_{i<=p} f(i-1) + S(i,p)^2)
        let mut f = Vec::with_capacity(n + 1);
        f.push(zero);
        for p in 1..=n {
            let mut best = f[p - 1].clone();
            for i in 1..=p {
                let s = &prefix[p] - &prefix[i - 1];
                let cand = &f[i - 1] + &s.square();
                if cand.cmp_same_mode(&best) == std::cmp::Ordering::Greater {
                    best = cand;
                }
            }
            f.push(best);
        }
        Some(DpTables { lo, n, prefix, f })
    }

    /// Interval sum over box positions `i..=j` (1-based).
    pub(crate) fn sum(&self, i: usize, j: usize) -> Scalar {
        &self.prefix[j] - &self.prefix[i - 1]
    }

    pub(crate) fn value(&self) -> Scalar {
        self.f[self.n].clone()
    }

    /// Suffix analogue: g[p] = max over families inside positions p..=n,
    /// with g[n+1] = 0.
    pub(crate) fn suffix_table(&self) -> Vec<Scalar> {
        let zero = &self.f[0];
        let mut g = vec![zero.clone(); self.n + 2];
        for p in (1..=self.n).rev() {
            let mut best = g[p + 1].clone();
            for j in p..=self.n {
                let cand = &g[j + 1] + &self.sum(p, j).square();
                if cand.cmp_same_mode(&best) == std::cmp::Ordering::Greater {
                    best = cand;
                }
            }
            g[p] = best;
        }
        g
    }
}

/// Squared norm only, without witness reconstruction.
pub(crate) fn james_norm_value_sq(x: &JVector) -> Scalar {
    match DpTables::build(x) {
        Some(t) => t.value(),
        None => Scalar::zero(x.mode()),
    }
}

/// Computes `‖x‖_J²` as the maximum of `Σ (Σ_{k∈I_i} x(k))²` over families of
/// disjoint intervals, with a canonical witness partition reconstructed by
/// backtracking. The zero vector yields 0 with an empty witness.
pub fn james_norm_sq(x: &JVector) -> NormCertificate {
    let tables = match DpTables::build(x) {
        Some(t) => t,
        None => {
            return NormCertificate {
                norm_sq: Scalar::zero(x.mode()),
                witness: NormingPartition::from_parts(x.clone(), IntervalFamily::empty()),
            }
        }
    };

    // Backtrack preferring the skip branch, then the shortest interval, so
    // the witness is deterministic and as fine as possible.
    let mut blocks: Vec<(u32, u32)> = Vec::new();
    let mut j = tables.n;
    while j > 0 {
        if tables.f[j] == tables.f[j - 1] {
            j -= 1;
            continue;
        }
        let mut taken = false;
        for i in (1..=j).rev() {
            let cand = &tables.f[i - 1] + &tables.sum(i, j).square();
            if cand == tables.f[j] {
                blocks.push((tables.lo + i as u32 - 1, tables.lo + j as u32 - 1));
                j = i - 1;
                taken = true;
                break;
            }
        }
        debug_assert!(taken, "DP backtracking found no predecessor");
        if !taken {
            break;
        }
    }
    blocks.reverse();

    let family = IntervalFamily::new(
        blocks
            .iter()
            .map(|&(lo, hi)| crate::interval::Interval::Finite { lo, hi })
            .collect(),
    )
    .expect("backtracked blocks are ordered and disjoint");
    let witness = NormingPartition::from_parts(x.clone(), canonicalize_family(x, &family));

    NormCertificate {
        norm_sq: tables.value(),
        witness,
    }
}

/// Visits every family of disjoint intervals inside `[lo, hi]`, including the
/// empty one, exactly once.
pub(crate) fn for_each_family<F: FnMut(&[(u32, u32)])>(lo: u32, hi: u32, visit: &mut F) {
    fn rec<F: FnMut(&[(u32, u32)])>(pos: u32, hi: u32, cur: &mut Vec<(u32, u32)>, visit: &mut F) {
        visit(cur);
        let mut a = pos;
        while a <= hi {
            let mut b = a;
            while b <= hi {
                cur.push((a, b));
                if b < hi {
                    rec(b + 1, hi, cur, visit);
                } else {
                    visit(cur);
                }
                cur.pop();
                b += 1;
            }
            a += 1;
        }
    }
    let mut cur = Vec::new();
    rec(lo, hi, &mut cur, visit);
}

/// Independent oracle: exhaustively maximizes over every disjoint interval
/// family inside the bounding box, carrying the running family value down
/// the recursion. Rejects boxes larger than [`bruteforce_cap`].
pub fn james_norm_bruteforce_sq(x: &JVector) -> Result<Scalar> {
    let (lo, hi) = match x.bounding_box() {
        Some(b) => b,
        None => return Ok(Scalar::zero(x.mode())),
    };
    let size = (hi - lo + 1) as usize;
    let cap = bruteforce_cap();
    if size > cap {
        return Err(Error::BruteForceCap { size, cap });
    }

    fn rec(coeffs: &[Scalar], pos: usize, acc: &Scalar, best: &mut Scalar) {
        if acc.cmp_same_mode(best) == std::cmp::Ordering::Greater {
            *best = acc.clone();
        }
        let n = coeffs.len();
        for a in pos..n {
            // Extend the interval [a, b] one step at a time.
            let mut sum = coeffs[a].clone();
            for b in a..n {
                if b > a {
                    sum = &sum + &coeffs[b];
                }
                let value = acc + &sum.square();
                if b + 1 < n {
                    rec(coeffs, b + 1, &value, best);
                } else if value.cmp_same_mode(best) == std::cmp::Ordering::Greater {
                    *best = value;
                }
            }
        }
    }

    let coeffs: Vec<Scalar> = (lo..=hi).map(|n| x.coeff(n)).collect();
    let mut best = Scalar::zero(x.mode());
    rec(&coeffs, 0, &Scalar::zero(x.mode()), &mut best);
    Ok(best)
}

/// `‖x‖₂² = Σ x(k)²`.
pub fn l2_norm_sq(x: &JVector) -> Scalar {
    let mut acc = Scalar::zero(x.mode());
    for (_, v) in x.coords() {
        acc = &acc + &v.square();
    }
    acc
}

/// Tail-sum transform `T(x)(n) = Σ_{k≥n} x(k)`, an onto isometry from the
/// interval-partition norm to the squared-variation norm.
pub fn iso_t(x: &JVector) -> JVector {
    let hi = match x.max_support() {
        Some(hi) => hi,
        None => return JVector::zero(x.mode()),
    };
    let mut coords = Vec::new();
    let mut acc = Scalar::zero(x.mode());
    for n in (1..=hi).rev() {
        acc = &acc + &x.coeff(n);
        coords.push((n, acc.clone()));
    }
    JVector::from_coords(x.mode(), coords).expect("tail sums are mode-homogeneous")
}

/// Difference transform `T⁻¹(y)(n) = y(n) − y(n+1)`, inverse of [`iso_t`].
pub fn iso_t_inv(y: &JVector) -> JVector {
    let hi = match y.max_support() {
        Some(hi) => hi,
        None => return JVector::zero(y.mode()),
    };
    let coords = (1..=hi).map(|n| (n, &y.coeff(n) - &y.coeff(n + 1)));
    JVector::from_coords(y.mode(), coords).expect("differences are mode-homogeneous")
}

/// Squared-variation norm `‖y‖_s²`, computed through the isometry: it equals
/// the interval-partition norm of the difference transform of `y`.
pub fn s_norm_sq(y: &JVector) -> Scalar {
    james_norm_value_sq(&iso_t_inv(y))
}

/// Direct dynamic program for `‖y‖_s²`, kept independent of the isometry
/// route for cross-checking: the maximum of `Σ_{k≥2} (y(n_k) − y(n_{k−1}))²`
/// over strictly increasing index chains `n_1 < … < n_m`. A chain jump
/// `(n_{k−1}, n_k)` carries the interval sum of the difference transform
/// over `[n_{k−1}, n_k − 1]`, which is what makes the tail-sum transform an
/// isometry; one index beyond the support is enough to close any chain.
pub fn s_norm_sq_direct(y: &JVector) -> Scalar {
    let hi = match y.max_support() {
        Some(hi) => hi,
        None => return Scalar::zero(y.mode()),
    };
    let n = hi as usize + 1;
    let zero = Scalar::zero(y.mode());
    // g[j] = best chain ending at index j; a fresh chain starts at value 0.
    let mut g = vec![zero.clone(); n + 1];
    let mut best = zero;
    for j in 2..=n {
        for i in 1..j {
            let step = (&y.coeff(j as u32) - &y.coeff(i as u32)).square();
            let cand = &g[i] + &step;
            if cand.cmp_same_mode(&g[j]) == std::cmp::Ordering::Greater {
                g[j] = cand;
            }
        }
        if g[j].cmp_same_mode(&best) == std::cmp::Ordering::Greater {
            best = g[j].clone();
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Mode;

    #[test]
    fn dp_matches_frozen_bruteforce_values() {
        // Expected values frozen from the enumeration oracle below.
        let cases: [(&[i64], i64); 3] = [(&[1, 1], 4), (&[1, -1], 2), (&[2, -1, 2], 9)];
        for (entries, expected) in cases {
            let x = JVector::from_ints(entries);
            let expected = Scalar::from_int(expected);
            assert_eq!(james_norm_bruteforce_sq(&x).unwrap(), expected);
            assert_eq!(james_norm_sq(&x).norm_sq, expected);
        }
    }

    #[test]
    fn witnesses_match_expected_partitions() {
        let cert = james_norm_sq(&JVector::from_ints(&[1, 1]));
        assert_eq!(format!("{}", cert.witness.family()), "{[1,2]}");
        let cert = james_norm_sq(&JVector::from_ints(&[1, -1]));
        assert_eq!(format!("{}", cert.witness.family()), "{{1}, {2}}");
        let cert = james_norm_sq(&JVector::from_ints(&[2, -1, 2]));
        assert_eq!(
            crate::interval::eval_family_sq(cert.witness.vector(), cert.witness.family()).unwrap(),
            Scalar::from_int(9)
        );
    }

    #[test]
    fn zero_vector_norm_is_zero_with_empty_witness() {
        let cert = james_norm_sq(&JVector::zero(Mode::Exact));
        assert!(cert.norm_sq.is_zero());
        assert!(cert.witness.family().is_empty());
        assert!(l2_norm_sq(&JVector::zero(Mode::Exact)).is_zero());
    }

    #[test]
    fn bruteforce_simple_values() {
        assert_eq!(
            james_norm_bruteforce_sq(&JVector::from_ints(&[1])).unwrap(),
            Scalar::from_int(1)
        );
        assert_eq!(
            james_norm_bruteforce_sq(&JVector::from_ints(&[1, 1])).unwrap(),
            Scalar::from_int(4)
        );
    }

    #[test]
    fn bruteforce_cap_is_enforced() {
        let x = JVector::from_coords(
            Mode::Exact,
            [(1, Scalar::from_int(1)), (40, Scalar::from_int(1))],
        )
        .unwrap();
        assert!(matches!(
            james_norm_bruteforce_sq(&x),
            Err(Error::BruteForceCap { size: 40, .. })
        ));
    }

    #[test]
    fn family_enumeration_counts() {
        // Families over [1, n] follow f(n) = f(n-1) + Σ_{j<n} f(j).
        let mut count = 0usize;
        for_each_family(1, 3, &mut |_| count += 1);
        assert_eq!(count, 13);
        let mut count = 0usize;
        for_each_family(1, 5, &mut |_| count += 1);
        assert_eq!(count, 89);
    }

    #[test]
    fn l2_examples() {
        assert_eq!(l2_norm_sq(&JVector::from_ints(&[2, -1, 2])), Scalar::from_int(9));
        assert_eq!(l2_norm_sq(&JVector::from_ints(&[1, 1])), Scalar::from_int(2));
    }

    #[test]
    fn tail_sum_transform_examples() {
        assert_eq!(iso_t(&JVector::from_ints(&[1, -1])), JVector::from_ints(&[0, -1]));
        let x = JVector::from_ints(&[2, -1, 2]);
        assert_eq!(iso_t_inv(&iso_t(&x)), x);
        assert_eq!(iso_t(&iso_t_inv(&x)), x);
    }

    #[test]
    fn s_norm_examples() {
        // e1: the best chain is (1, 2) with one jump of size 1.
        let e1 = JVector::from_ints(&[1]);
        assert_eq!(s_norm_sq_direct(&e1), Scalar::from_int(1));
        assert_eq!(s_norm_sq(&e1), Scalar::from_int(1));

        let y = JVector::from_ints(&[1, 1]);
        assert_eq!(s_norm_sq(&y), Scalar::from_int(1));
        assert_eq!(s_norm_sq_direct(&y), Scalar::from_int(1));

        assert!(s_norm_sq(&JVector::zero(Mode::Exact)).is_zero());
    }

    #[test]
    fn isometry_on_example() {
        let x = JVector::from_ints(&[2, -1, 2]);
        assert_eq!(s_norm_sq(&iso_t(&x)), Scalar::from_int(9));
        assert_eq!(s_norm_sq_direct(&iso_t(&x)), Scalar::from_int(9));
    }
}
