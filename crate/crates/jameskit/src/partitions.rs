use num::BigUint;

use crate::error::{Error, Result};
use crate::interval::{eval_family_sq, Interval, IntervalFamily};
use crate::norm::{james_norm_value_sq, DpTables};
use crate::scalar::Scalar;
use crate::vector::{compact_support, JVector};

/// Default cap on how many partitions an enumeration collects.
pub const DEFAULT_ENUM_LIMIT: usize = 100_000;

/// A norming family in canonical form, validated against its vector: every
/// interval has both endpoints in the support, the intervals cover the
/// support, and the family evaluates to the squared norm.
#[derive(Clone, Debug, PartialEq)]
pub struct NormingPartition {
    vector: JVector,
    family: IntervalFamily,
}

impl NormingPartition {
    pub fn new(x: &JVector, family: IntervalFamily, tol: f64) -> Result<NormingPartition> {
        validate_canonical(x, &family)?;
        let value = eval_family_sq(x, &family)?;
        if !value.norm_eq(&james_norm_value_sq(x), tol) {
            return Err(Error::NotNorming);
        }
        Ok(NormingPartition {
            vector: x.clone(),
            family,
        })
    }

    /// Trusted constructor for families produced by the DP itself.
    pub(crate) fn from_parts(vector: JVector, family: IntervalFamily) -> NormingPartition {
        debug_assert!(validate_canonical(&vector, &family).is_ok());
        NormingPartition { vector, family }
    }

    pub fn vector(&self) -> &JVector {
        &self.vector
    }

    pub fn family(&self) -> &IntervalFamily {
        &self.family
    }

    pub fn eval_sq(&self) -> Scalar {
        eval_family_sq(&self.vector, &self.family).expect("validated family")
    }

    pub fn block_sums(&self) -> Vec<Scalar> {
        self.family
            .iter()
            .map(|i| crate::interval::interval_sum(&self.vector, i).expect("finite interval"))
            .collect()
    }

    /// Support points per block, in order.
    pub fn support_blocks(&self) -> Vec<Vec<u32>> {
        self.family
            .iter()
            .map(|i| self.vector.support().filter(|&n| i.contains(n)).collect())
            .collect()
    }

    pub fn is_singletons(&self) -> bool {
        self.family
            .iter()
            .all(|i| matches!(i.finite_bounds(), Some((lo, hi)) if lo == hi))
    }
}

fn validate_canonical(x: &JVector, family: &IntervalFamily) -> Result<()> {
    let in_support = |n: u32| !x.coeff(n).is_zero();
    for interval in family.iter() {
        let (lo, hi) = interval.finite_bounds().ok_or(Error::NotCanonical)?;
        if !in_support(lo) || !in_support(hi) {
            return Err(Error::NotCanonical);
        }
    }
    for n in x.support() {
        if !family.iter().any(|i| i.contains(n)) {
            return Err(Error::NotCanonical);
        }
    }
    Ok(())
}

/// Whether the family evaluates to the squared norm of `x`.
pub fn is_norming_family(x: &JVector, family: &IntervalFamily, tol: f64) -> Result<bool> {
    let value = eval_family_sq(x, family)?;
    Ok(value.norm_eq(&james_norm_value_sq(x), tol))
}

/// Prefix tables of a nonzero vector, indexed by support positions. A block
/// of support points is "tight" when attaching it to an optimal prefix stays
/// optimal; the canonical norming partitions are exactly the chains of tight
/// blocks covering the support.
struct ChainTables {
    tables: DpTables,
    support: Vec<u32>,
}

impl ChainTables {
    fn build(x: &JVector) -> Result<ChainTables> {
        let tables = DpTables::build(x).ok_or(Error::ZeroVector)?;
        Ok(ChainTables {
            support: x.support().collect(),
            tables,
        })
    }

    fn pos(&self, n: u32) -> usize {
        (n - self.tables.lo + 1) as usize
    }

    /// Tightness of the block spanning support indices `a..=b`.
    fn tight(&self, a: usize, b: usize, tol: f64) -> bool {
        let (i, j) = (self.pos(self.support[a]), self.pos(self.support[b]));
        let value = &self.tables.f[i - 1] + &self.tables.sum(i, j).square();
        value.norm_eq(&self.tables.f[j], tol)
    }
}

/// All intervals usable in at least one norming partition, together with the
/// prefix and suffix DP tables that certify them. Any two members are nested
/// or disjoint.
#[derive(Clone, Debug)]
pub struct OptimalIntervalSet {
    norm_sq: Scalar,
    intervals: Vec<(u32, u32)>,
    support: Vec<u32>,
    prefix_table: Vec<Scalar>,
    suffix_table: Vec<Scalar>,
}

impl OptimalIntervalSet {
    pub fn norm_sq(&self) -> &Scalar {
        &self.norm_sq
    }

    pub fn intervals(&self) -> &[(u32, u32)] {
        &self.intervals
    }

    pub fn contains(&self, lo: u32, hi: u32) -> bool {
        self.intervals.binary_search(&(lo, hi)).is_ok()
    }

    /// The inclusion-minimal optimal interval containing `n`; unique because
    /// the set is laminar.
    pub fn minimal_containing(&self, n: u32) -> Option<(u32, u32)> {
        self.intervals
            .iter()
            .filter(|&&(lo, hi)| lo <= n && n <= hi)
            .min_by_key(|&&(lo, hi)| hi - lo)
            .copied()
    }

    pub fn support(&self) -> &[u32] {
        &self.support
    }

    pub fn prefix_table(&self) -> &[Scalar] {
        &self.prefix_table
    }

    pub fn suffix_table(&self) -> &[Scalar] {
        &self.suffix_table
    }
}

/// Detects every interval `[i, j]` with endpoints in the support that appears
/// in some norming partition: exactly those with
/// `f(i−1) + S(i,j)² + g(j+1) = ‖x‖_J²`.
pub fn optimal_intervals(x: &JVector, tol: f64) -> Result<OptimalIntervalSet> {
    let tables = DpTables::build(x).ok_or(Error::ZeroVector)?;
    let g = tables.suffix_table();
    let norm_sq = tables.value();
    let support: Vec<u32> = x.support().collect();
    let lo = tables.lo;
    let pos = |n: u32| (n - lo + 1) as usize;

    let mut intervals = Vec::new();
    for (ai, &a) in support.iter().enumerate() {
        for &b in &support[ai..] {
            let total =
                &(&tables.f[pos(a) - 1] + &tables.sum(pos(a), pos(b)).square()) + &g[pos(b) + 1];
            if total.norm_eq(&norm_sq, tol) {
                intervals.push((a, b));
            }
        }
    }
    intervals.sort_unstable();
    Ok(OptimalIntervalSet {
        norm_sq,
        intervals,
        support,
        prefix_table: tables.f,
        suffix_table: g,
    })
}

/// The finest norming partition: for each support point, the inclusion-minimal
/// optimal interval containing it. It refines every other norming partition,
/// and consists of singletons exactly when the ℓ₂ and interval-partition
/// norms agree.
pub fn finest_partition(x: &JVector, tol: f64) -> Result<NormingPartition> {
    let set = optimal_intervals(x, tol)?;
    let mut blocks: Vec<(u32, u32)> = Vec::new();
    for &n in set.support() {
        let block = set.minimal_containing(n).ok_or_else(|| {
            Error::Internal(format!("no optimal interval contains support point {n}"))
        })?;
        if blocks.last() != Some(&block) {
            blocks.push(block);
        }
    }
    let family = IntervalFamily::new(
        blocks
            .into_iter()
            .map(|(lo, hi)| Interval::Finite { lo, hi })
            .collect(),
    )
    .map_err(|_| Error::Internal("minimal optimal intervals are not laminar".into()))?;
    NormingPartition::new(x, family, tol)
        .map_err(|_| Error::Internal("finest candidate family is not norming".into()))
}

/// Result of a bounded enumeration.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub partitions: Vec<NormingPartition>,
    pub truncated: bool,
}

/// All distinct canonical norming partitions of `x`, in depth-first order
/// with shorter first blocks first, up to `limit`.
pub fn enumerate_norming_partitions(x: &JVector, limit: usize, tol: f64) -> Result<Enumeration> {
    struct Dfs {
        chain: ChainTables,
        tol: f64,
        limit: usize,
        stack: Vec<(u32, u32)>,
        raw: Vec<Vec<(u32, u32)>>,
        truncated: bool,
    }

    impl Dfs {
        fn rec(&mut self, a: usize) {
            if self.truncated {
                return;
            }
            let k = self.chain.support.len();
            if a == k {
                if self.raw.len() == self.limit {
                    self.truncated = true;
                } else {
                    self.raw.push(self.stack.clone());
                }
                return;
            }
            for b in a..k {
                if self.chain.tight(a, b, self.tol) {
                    self.stack
                        .push((self.chain.support[a], self.chain.support[b]));
                    self.rec(b + 1);
                    self.stack.pop();
                    if self.truncated {
                        return;
                    }
                }
            }
        }
    }

    let mut dfs = Dfs {
        chain: ChainTables::build(x)?,
        tol,
        limit,
        stack: Vec::new(),
        raw: Vec::new(),
        truncated: false,
    };
    dfs.rec(0);
    let (raw, truncated) = (dfs.raw, dfs.truncated);

    let mut partitions = Vec::with_capacity(raw.len());
    for blocks in raw {
        let family = IntervalFamily::new(
            blocks
                .into_iter()
                .map(|(lo, hi)| Interval::Finite { lo, hi })
                .collect(),
        )
        .map_err(|_| Error::Internal("enumerated blocks out of order".into()))?;
        partitions.push(NormingPartition::from_parts(x.clone(), family));
    }
    Ok(Enumeration {
        partitions,
        truncated,
    })
}

/// Exact count of the distinct canonical norming partitions, by a counting DP
/// over tight blocks. Agrees with the enumeration whenever both run, without
/// materializing any partition.
pub fn count_norming_partitions(x: &JVector, tol: f64) -> Result<BigUint> {
    let chain = ChainTables::build(x)?;
    let k = chain.support.len();
    let mut c = vec![BigUint::from(0u32); k + 1];
    c[0] = BigUint::from(1u32);
    for b in 0..k {
        for a in 0..=b {
            if chain.tight(a, b, tol) {
                let add = c[a].clone();
                c[b + 1] += add;
            }
        }
    }
    Ok(c[k].clone())
}

/// Relative gap between the optimum and the best non-norming family value,
/// found by exhausting families over the compacted support. `None` when every
/// family value is norming.
pub fn norming_margin(x: &JVector, tol: f64) -> Result<Option<f64>> {
    let (compacted, _) = compact_support(x)?;
    let n = compacted.support_len();
    if n > 20 {
        return Err(Error::BruteForceCap { size: n, cap: 20 });
    }
    let opt = james_norm_value_sq(&compacted).to_f64();
    let mut best_below: Option<f64> = None;
    crate::norm::for_each_family(1, n as u32, &mut |family| {
        let mut acc = 0.0;
        for &(a, b) in family {
            let s = compacted.range_sum(a, b).to_f64();
            acc += s * s;
        }
        let within = (opt - acc).abs() <= tol * 1.0_f64.max(opt.abs()).max(acc.abs());
        if !within && best_below.is_none_or(|cur| acc > cur) {
            best_below = Some(acc);
        }
    });
    Ok(best_below.map(|b| (opt - b) / 1.0_f64.max(opt.abs())))
}

/// Whether `p` refines `q`: every block of `q` splits into consecutive blocks
/// of `p` on the support.
pub fn refines(p: &NormingPartition, q: &NormingPartition) -> Result<bool> {
    if p.vector() != q.vector() {
        return Err(Error::VectorMismatch);
    }
    let q_family = q.family();
    let block_of = |n: u32| q_family.iter().position(|i| i.contains(n));
    for block in p.support_blocks() {
        let mut ids = block.iter().map(|&n| block_of(n));
        let first = ids.next().flatten();
        if first.is_none() || ids.any(|id| id != first) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The joint refinement of two norming partitions: the members of either that
/// are contained in a member of the other. It is norming and refines both.
pub fn joint_refinement(
    p: &NormingPartition,
    q: &NormingPartition,
    tol: f64,
) -> Result<NormingPartition> {
    if p.vector() != q.vector() {
        return Err(Error::VectorMismatch);
    }
    let bounds = |part: &NormingPartition| -> Vec<(u32, u32)> {
        part.family()
            .iter()
            .filter_map(|i| i.finite_bounds())
            .collect()
    };
    let pb = bounds(p);
    let qb = bounds(q);
    let contained =
        |i: (u32, u32), others: &[(u32, u32)]| others.iter().any(|&(lo, hi)| lo <= i.0 && i.1 <= hi);
    let mut blocks: Vec<(u32, u32)> = pb
        .iter()
        .copied()
        .filter(|&i| contained(i, &qb))
        .chain(qb.iter().copied().filter(|&l| contained(l, &pb)))
        .collect();
    blocks.sort_unstable();
    blocks.dedup();
    let family = IntervalFamily::new(
        blocks
            .into_iter()
            .map(|(lo, hi)| Interval::Finite { lo, hi })
            .collect(),
    )
    .map_err(|_| Error::Internal("joint refinement blocks overlap".into()))?;
    NormingPartition::new(p.vector(), family, tol)
        .map_err(|_| Error::Internal("joint refinement is not norming".into()))
}

/// Structural facts that hold for every norming partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartitionReport {
    /// The intervals cover the support.
    pub coverage: bool,
    /// Every consecutive run of blocks is norming for the restriction of the
    /// vector to its span.
    pub tightness: bool,
    /// Within each block, the total and every prefix/suffix sum cut at a
    /// support point are nonzero with one common sign.
    pub sign_coherence: bool,
    /// Consecutive block sums alternate in sign.
    pub alternation: bool,
    /// Consecutive support points with equal signs are never separated.
    pub same_sign_cohesion: bool,
}

impl PartitionReport {
    pub fn all_pass(&self) -> bool {
        self.coverage
            && self.tightness
            && self.sign_coherence
            && self.alternation
            && self.same_sign_cohesion
    }
}

/// Evaluates the five structural properties of a norming partition.
pub fn check_structure(p: &NormingPartition, tol: f64) -> PartitionReport {
    let x = p.vector();
    let family = p.family();
    let bounds: Vec<(u32, u32)> = family.iter().filter_map(|i| i.finite_bounds()).collect();
    let sums = p.block_sums();

    let coverage = x.support().all(|n| family.iter().any(|i| i.contains(n)));

    let mut tightness = true;
    for a in 0..bounds.len() {
        let mut run = Scalar::zero(x.mode());
        for b in a..bounds.len() {
            run = &run + &sums[b].square();
            let restricted = x.restrict(bounds[a].0, bounds[b].1);
            if !run.norm_eq(&james_norm_value_sq(&restricted), tol) {
                tightness = false;
            }
        }
    }

    let mut sign_coherence = true;
    for (&(lo, hi), total) in bounds.iter().zip(&sums) {
        let sign = total.signum();
        if sign == 0 {
            sign_coherence = false;
            continue;
        }
        for n in x.support().filter(|&n| lo <= n && n <= hi) {
            if x.range_sum(lo, n).signum() != sign || x.range_sum(n, hi).signum() != sign {
                sign_coherence = false;
            }
        }
    }

    let alternation = sums.windows(2).all(|w| w[0].signum() * w[1].signum() == -1);

    let mut same_sign_cohesion = true;
    let support: Vec<u32> = x.support().collect();
    for w in support.windows(2) {
        let (n1, n2) = (w[0], w[1]);
        if x.coeff(n1).signum() * x.coeff(n2).signum() > 0 {
            for interval in family.iter() {
                if interval.contains(n1) != interval.contains(n2) {
                    same_sign_cohesion = false;
                }
            }
        }
    }

    PartitionReport {
        coverage,
        tightness,
        sign_coherence,
        alternation,
        same_sign_cohesion,
    }
}
