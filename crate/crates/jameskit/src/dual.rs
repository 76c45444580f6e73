use crate::error::{Error, Result};
use crate::extreme::{is_extreme_bj, is_extreme_direction};
use crate::interval::{Interval, IntervalFamily};
use crate::norm::{james_norm_value_sq, l2_norm_sq};
use crate::scalar::{Mode, Scalar};
use crate::vector::JVector;

/// A functional `Σ_i α_i I_i*` where `I*(x) = Σ_{n∈I} x(n)`: an ordered list
/// of pairwise disjoint intervals with nonzero coefficients, in which at most
/// the last interval may be an infinite tail `[k, ∞)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualFunctional {
    mode: Mode,
    terms: Vec<(Interval, Scalar)>,
}

impl DualFunctional {
    pub fn new(terms: Vec<(Interval, Scalar)>) -> Result<DualFunctional> {
        let mode = terms.first().map_or(Mode::Exact, |(_, a)| a.mode());
        for (interval, alpha) in &terms {
            alpha.require_mode(mode)?;
            if alpha.is_zero() {
                return Err(Error::ZeroCoefficient);
            }
            if matches!(interval, Interval::OmegaSingleton) {
                return Err(Error::OmegaInterval);
            }
        }
        // Family validation enforces ordering, disjointness and tail-last.
        IntervalFamily::new(terms.iter().map(|(i, _)| i.clone()).collect())?;
        Ok(DualFunctional { mode, terms })
    }

    /// Convenience constructor for `Σ α_i e_{n_i}*` with singleton intervals.
    pub fn from_points(points: Vec<(u32, Scalar)>) -> Result<DualFunctional> {
        DualFunctional::new(
            points
                .into_iter()
                .map(|(n, a)| Interval::singleton(n).map(|i| (i, a)))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn zero() -> DualFunctional {
        DualFunctional {
            mode: Mode::Exact,
            terms: vec![],
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn terms(&self) -> &[(Interval, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficients placed at `1, 2, …` as a vector; norm-one and extreme
    /// questions about the functional reduce to this vector.
    pub fn coefficient_vector(&self) -> JVector {
        JVector::from_coords(
            self.mode,
            self.terms
                .iter()
                .enumerate()
                .map(|(i, (_, a))| (i as u32 + 1, a.clone())),
        )
        .expect("nonzero homogeneous coefficients")
    }

    /// `Σ α_i²`.
    pub fn coeff_l2_sq(&self) -> Scalar {
        let mut acc = Scalar::zero(self.mode);
        for (_, a) in &self.terms {
            acc = &acc + &a.square();
        }
        acc
    }

    /// Coefficient seen at position `n`: the α of the covering interval.
    pub fn coeff_at(&self, n: u32) -> Scalar {
        self.terms
            .iter()
            .find(|(i, _)| i.contains(n))
            .map(|(_, a)| a.clone())
            .unwrap_or_else(|| Scalar::zero(self.mode))
    }

    fn tail_coeff(&self) -> Option<&Scalar> {
        self.terms.last().and_then(|(i, a)| match i {
            Interval::TailOmega { .. } => Some(a),
            _ => None,
        })
    }

    /// Last position at which the coefficient pattern can still change.
    fn finite_extent(&self) -> u32 {
        self.terms
            .iter()
            .map(|(i, _)| match i {
                Interval::Finite { hi, .. } => *hi,
                Interval::TailOmega { start } => *start,
                Interval::OmegaSingleton => 0,
            })
            .max()
            .unwrap_or(0)
    }
}

/// Applies the functional to a finitely supported vector.
pub fn eval_dual(f: &DualFunctional, x: &JVector) -> Result<Scalar> {
    if !f.is_zero() && f.mode != x.mode() {
        return Err(Error::ModeMismatch);
    }
    let mut acc = Scalar::zero(x.mode());
    for (interval, alpha) in &f.terms {
        let s = match interval {
            Interval::Finite { lo, hi } => x.range_sum(*lo, *hi),
            Interval::TailOmega { start } => x.tail_sum(*start),
            Interval::OmegaSingleton => return Err(Error::OmegaInterval),
        };
        acc = &acc + &(alpha * &s);
    }
    Ok(acc)
}

/// Membership in the unit-ball set of interval functionals: `Σ α_i² ≤ 1`.
pub fn validate_d1(f: &DualFunctional, tol: f64) -> bool {
    let one = match f.mode {
        Mode::Exact => Scalar::from_int(1),
        Mode::Float => Scalar::float(1.0),
    };
    f.coeff_l2_sq().le_tol(&one, tol)
}

/// Raw-term variant of [`validate_d1`]: structurally invalid term lists are
/// simply not in the set.
pub fn validate_d1_terms(terms: &[(Interval, Scalar)], tol: f64) -> bool {
    DualFunctional::new(terms.to_vec())
        .map(|f| validate_d1(&f, tol))
        .unwrap_or(false)
}

fn coefficient_vector_extreme(w: &JVector, tol: f64) -> Result<bool> {
    match w.mode() {
        Mode::Exact => Ok(is_extreme_bj(w)?.verdict),
        Mode::Float => {
            if w.is_zero() {
                return Ok(false);
            }
            let one = Scalar::float(1.0);
            Ok(is_extreme_direction(w, tol)? && l2_norm_sq(w).norm_eq(&one, tol))
        }
    }
}

/// Norm-one test inside the set: the functional has dual norm one exactly
/// when its coefficient vector is an extreme point of the unit ball.
pub fn is_norm_one_d1(f: &DualFunctional, tol: f64) -> Result<bool> {
    if !validate_d1(f, tol) {
        return Err(Error::NotInD1);
    }
    if f.is_zero() {
        return Ok(false);
    }
    coefficient_vector_extreme(&f.coefficient_vector(), tol)
}

/// Why a functional fails the dual extreme-point test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BJstarReason {
    ZeroCoefficient,
    CoefficientsNotExtreme,
    UnionNotInterval,
}

impl BJstarReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            BJstarReason::ZeroCoefficient => "zero_coefficient",
            BJstarReason::CoefficientsNotExtreme => "coefficients_not_extreme",
            BJstarReason::UnionNotInterval => "union_not_interval",
        }
    }
}

fn union_is_interval(f: &DualFunctional) -> bool {
    f.terms.windows(2).all(|w| {
        let prev_hi = match &w[0].0 {
            Interval::Finite { hi, .. } => *hi,
            _ => return false,
        };
        let next_lo = match &w[1].0 {
            Interval::Finite { lo, .. } => *lo,
            Interval::TailOmega { start } => *start,
            Interval::OmegaSingleton => return false,
        };
        next_lo == prev_hi + 1
    })
}

/// Dual extreme-point test: all coefficients nonzero, coefficient vector
/// extreme, and the union of the intervals a single interval of ℕ. On
/// failure the first violated clause is reported.
pub fn is_extreme_bjstar(
    f: &DualFunctional,
    tol: f64,
) -> Result<(bool, Option<BJstarReason>)> {
    if !validate_d1(f, tol) {
        return Err(Error::NotInD1);
    }
    if f.terms.iter().any(|(_, a)| a.is_zero()) || f.is_zero() {
        return Ok((false, Some(BJstarReason::ZeroCoefficient)));
    }
    if !coefficient_vector_extreme(&f.coefficient_vector(), tol)? {
        return Ok((false, Some(BJstarReason::CoefficientsNotExtreme)));
    }
    if !union_is_interval(f) {
        return Ok((false, Some(BJstarReason::UnionNotInterval)));
    }
    Ok((true, None))
}

/// Gaps between consecutive intervals: `g(i) = min I_{i+1} − max I_i − 1`,
/// and 0 at the last position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapProfile {
    pub gaps: Vec<u32>,
}

pub fn gap_profile(f: &DualFunctional) -> GapProfile {
    let mut gaps = Vec::with_capacity(f.terms.len());
    for w in f.terms.windows(2) {
        let prev_hi = match &w[0].0 {
            Interval::Finite { hi, .. } => *hi,
            // Tails are last by construction.
            _ => unreachable!("tail interval precedes another term"),
        };
        let next_lo = match &w[1].0 {
            Interval::Finite { lo, .. } => *lo,
            Interval::TailOmega { start } => *start,
            Interval::OmegaSingleton => unreachable!("omega singleton in functional"),
        };
        gaps.push(next_lo - prev_hi - 1);
    }
    if !f.terms.is_empty() {
        gaps.push(0);
    }
    GapProfile { gaps }
}

/// Norm-closure membership for norm-one functionals: approximable by dual
/// extreme points exactly when no gap equals one.
pub fn in_closure_of_extremes(f: &DualFunctional, tol: f64) -> Result<bool> {
    if !is_norm_one_d1(f, tol)? {
        return Err(Error::NotNormOne);
    }
    Ok(!gap_profile(f).gaps.contains(&1))
}

/// The m-th member of a deterministic sequence of dual extreme points
/// converging to `f`: each gap `(max I_i, min I_{i+1})` is split at its
/// midpoint into halves `L_i < M_i` carrying `∓ sign(α_i) β` with
/// `β = 1/(2m·sqrt(2·#gaps))`, and the result is renormalized through its
/// coefficient norm. Output is float mode; a functional with no positive
/// gaps is returned unchanged.
pub fn approx_extreme_sequence(f: &DualFunctional, m: u32, tol: f64) -> Result<DualFunctional> {
    if m == 0 {
        return Err(Error::Precondition("sequence index m must be >= 1".into()));
    }
    if !is_norm_one_d1(f, tol)? {
        return Err(Error::NotNormOne);
    }
    let gaps = gap_profile(f).gaps;
    if gaps.contains(&1) {
        return Err(Error::GapEqualsOne);
    }
    let positive = gaps.iter().filter(|&&g| g > 0).count();
    if positive == 0 {
        return Ok(f.clone());
    }

    let beta = 1.0 / (2.0 * m as f64 * (2.0 * positive as f64).sqrt());
    let mut raw: Vec<(Interval, f64)> = Vec::new();
    for (idx, (interval, alpha)) in f.terms.iter().enumerate() {
        let a = alpha.to_f64();
        raw.push((interval.clone(), a));
        let gap = gaps[idx];
        if gap == 0 {
            continue;
        }
        let hi = interval
            .finite_bounds()
            .expect("gapped interval is finite")
            .1;
        let (p1, p2) = (hi + 1, hi + gap);
        let half = gap / 2;
        let sign = if a >= 0.0 { 1.0 } else { -1.0 };
        raw.push((Interval::finite(p1, p1 + half - 1)?, -sign * beta));
        raw.push((Interval::finite(p1 + half, p2)?, sign * beta));
    }

    let norm = raw.iter().map(|(_, a)| a * a).sum::<f64>().sqrt();
    let out = DualFunctional::new(
        raw.into_iter()
            .map(|(i, a)| (i, Scalar::float(a / norm)))
            .collect(),
    )?;
    match is_extreme_bjstar(&out, tol)? {
        (true, _) => Ok(out),
        (false, reason) => Err(Error::Internal(format!(
            "gap-splitting produced a non-extreme functional ({:?})",
            reason
        ))),
    }
}

/// Two-sided bounds on the squared dual norm: the coefficient bound
/// `Σ α_i²` from above, and from below the evaluation at the unit vector
/// carrying `α_i/‖w‖_J` at `min I_i`, together with single-point probes.
/// Both bounds are exact in exact mode, and they coincide at 1 exactly for
/// norm-one functionals.
pub fn dual_norm_bounds_sq(f: &DualFunctional) -> (Scalar, Scalar) {
    let upper = f.coeff_l2_sq();
    if f.is_zero() {
        return (Scalar::zero(f.mode), upper);
    }
    let w = f.coefficient_vector();
    let james = james_norm_value_sq(&w);
    let mut lower = &upper.square() / &james;
    for (_, alpha) in &f.terms {
        let probe = alpha.square();
        if probe.cmp_same_mode(&lower) == std::cmp::Ordering::Greater {
            lower = probe;
        }
    }
    (lower, upper)
}

/// For a norm-one functional whose interval union is not an interval,
/// produces `(y, z, λ)` with `f = λ·y + (1−λ)·z`, `y ≠ z`, both with
/// coefficient bound at most one: the first gap is absorbed into the
/// neighbouring intervals and λ cancels the two coefficients on the overlap.
pub fn non_extreme_decomposition(
    f: &DualFunctional,
    tol: f64,
) -> Result<(DualFunctional, DualFunctional, Scalar)> {
    if !is_norm_one_d1(f, tol)? {
        return Err(Error::NotNormOne);
    }
    let gaps = gap_profile(f).gaps;
    let k = gaps
        .iter()
        .position(|&g| g > 0)
        .ok_or_else(|| Error::Precondition("interval union is already an interval".into()))?;

    let (lo_k, hi_k) = f.terms[k].0.finite_bounds().expect("gapped interval is finite");
    let next = &f.terms[k + 1].0;
    let joined_k = Interval::finite(lo_k, next.min_index().expect("not omega") - 1)?;
    let joined_next = match next {
        Interval::Finite { hi, .. } => Interval::finite(hi_k + 1, *hi)?,
        Interval::TailOmega { .. } => Interval::tail(hi_k + 1)?,
        Interval::OmegaSingleton => return Err(Error::OmegaInterval),
    };

    let mut y_terms = f.terms.clone();
    y_terms[k].0 = joined_k;
    let mut z_terms = f.terms.clone();
    z_terms[k + 1].0 = joined_next;

    let alpha_k = &f.terms[k].1;
    let alpha_m = &f.terms[k + 1].1;
    // λ α_k + (1−λ) α_m = 0; extremality of the coefficient vector makes the
    // two signs opposite, so the denominator is nonzero.
    let denom = alpha_m - alpha_k;
    if denom.is_zero() {
        return Err(Error::Precondition(
            "coefficients around the gap do not alternate".into(),
        ));
    }
    let lambda = alpha_m / &denom;

    Ok((
        DualFunctional::new(y_terms)?,
        DualFunctional::new(z_terms)?,
        lambda,
    ))
}

/// Squared coefficient-ℓ₂ distance between two functionals, seen as the
/// coefficient bound on the dual norm of their difference: pointwise
/// coefficient differences up to the common finite extent plus one tail term.
pub fn coefficient_distance_sq(f: &DualFunctional, g: &DualFunctional) -> Result<Scalar> {
    let mode = if f.is_zero() { g.mode() } else { f.mode() };
    if !f.is_zero() && !g.is_zero() && f.mode() != g.mode() {
        return Err(Error::ModeMismatch);
    }
    // A zero functional carries the default mode; read it in the common one.
    let coeff = |h: &DualFunctional, n: u32| {
        if h.is_zero() {
            Scalar::zero(mode)
        } else {
            h.coeff_at(n)
        }
    };
    let extent = f.finite_extent().max(g.finite_extent());
    let mut acc = Scalar::zero(mode);
    for n in 1..=extent {
        let d = &coeff(f, n) - &coeff(g, n);
        acc = &acc + &d.square();
    }
    let zero = Scalar::zero(mode);
    let ft = f.tail_coeff().unwrap_or(&zero);
    let gt = g.tail_coeff().unwrap_or(&zero);
    let d = ft - gt;
    // Coefficients at positions covered by a tail repeat beyond the extent;
    // the leftover difference is one tail term.
    Ok(&acc + &d.square())
}
