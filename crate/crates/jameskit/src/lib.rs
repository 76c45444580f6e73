//! Exact computation with the James sequence-space norm.
//!
//! The squared norm is the maximum of `Σ_i (Σ_{k∈I_i} x(k))²` over families
//! of disjoint integer intervals; this crate computes it by dynamic
//! programming with exact rational arithmetic, certifies the result with a
//! canonical norming partition, and builds on that to analyse all norming
//! partitions of a vector, decide extreme-point membership in the unit balls
//! of the space, its dual and its bidual, and generate vectors with a
//! prescribed number of norming partitions.
//!
//! Everything is a pure function over immutable values; squared norms are the
//! primitive everywhere so that exact-mode comparisons are exact.

pub mod bidual;
pub mod construct;
pub mod dual;
pub mod error;
pub mod extreme;
pub mod interval;
pub mod json;
pub mod norm;
pub mod partitions;
pub mod rng;
pub mod scalar;
pub mod vector;

pub use error::{Error, Result};
pub use interval::{canonicalize_family, eval_family_sq, interval_sum, Interval, IntervalFamily};
pub use norm::{
    bruteforce_cap, iso_t, iso_t_inv, james_norm_bruteforce_sq, james_norm_sq, l2_norm_sq,
    s_norm_sq, s_norm_sq_direct, NormCertificate,
};
pub use partitions::{
    check_structure, count_norming_partitions, enumerate_norming_partitions, finest_partition,
    is_norming_family, joint_refinement, norming_margin, optimal_intervals, refines, Enumeration,
    NormingPartition, OptimalIntervalSet, PartitionReport, DEFAULT_ENUM_LIMIT,
};
pub use scalar::{parse_rational, Mode, Rational, Scalar, DEFAULT_TOL};
pub use vector::{compact_support, JVector};

pub use bidual::{
    bidual_eval_family_sq, bidual_interval_sum, bidual_norm_bruteforce_sq, bidual_norm_sq,
    bidual_norming_partitions, is_extreme_bjss, BidualEnumeration, BidualNormCertificate,
    BidualVector, ExtremeCertificateBidual,
};
pub use construct::{
    block_product_vector, e_set_point, sliding_square_inequality, multi_partition_vector,
    ramp_sequence, ESetPoint,
};
pub use dual::{
    approx_extreme_sequence, coefficient_distance_sq, dual_norm_bounds_sq, eval_dual,
    gap_profile, in_closure_of_extremes, is_extreme_bjstar, is_norm_one_d1,
    non_extreme_decomposition, validate_d1, BJstarReason, DualFunctional, GapProfile,
};
pub use extreme::{
    extreme_from_family, is_extreme_bj, is_extreme_bjs, is_extreme_direction, is_npr,
    is_npr_hereditary, ExtremeCertificateJ,
};
