//! The `verify` and `fuzz` suites: seeded random inputs, library results
//! cross-checked against independent oracles and structural facts.

use serde_json::{json, Value};

use jameskit::rng::{random_bidual, random_vector, SplitMix64};
use jameskit::*;

pub struct SuiteResult {
    pub name: &'static str,
    pub checks: u64,
    pub failures: Vec<String>,
}

pub struct VerifyReport {
    pub n: u32,
    pub trials: u32,
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.suites.iter().all(|s| s.failures.is_empty())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "ok": self.ok(),
            "suites": self
                .suites
                .iter()
                .map(|s| {
                    json!({
                        "name": s.name,
                        "checks": s.checks,
                        "failures": s.failures,
                    })
                })
                .collect::<Vec<_>>(),
        })
    }

    pub fn summary(&self) -> String {
        let mut lines: Vec<String> = self
            .suites
            .iter()
            .map(|s| {
                format!(
                    "{:<24} {:>8} checks  {}",
                    s.name,
                    s.checks,
                    if s.failures.is_empty() { "ok" } else { "FAILED" }
                )
            })
            .collect();
        lines.push(if self.ok() {
            "all suites passed".into()
        } else {
            "FAILURES DETECTED".into()
        });
        lines.join("\n")
    }
}

struct Suite {
    name: &'static str,
    checks: u64,
    failures: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Suite {
        Suite {
            name,
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 5 {
            self.failures.push(detail());
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            checks: self.checks,
            failures: self.failures,
        }
    }
}

fn random_family(rng: &mut SplitMix64, bound: u32) -> IntervalFamily {
    let mut points = std::collections::BTreeSet::new();
    let count = rng.below(bound as u64 + 1);
    while (points.len() as u64) < count {
        points.insert(rng.below(bound as u64) as u32 + 1);
    }
    let points: Vec<u32> = points.into_iter().collect();
    let intervals = points
        .chunks(2)
        .map(|c| {
            if c.len() == 2 {
                Interval::finite(c[0], c[1]).expect("ordered points")
            } else {
                Interval::singleton(c[0]).expect("positive point")
            }
        })
        .collect();
    IntervalFamily::new(intervals).expect("sorted disjoint intervals")
}

pub fn verify(n: u32, trials: u32, seed: u64, tol: f64) -> VerifyReport {
    let n = n.max(1);
    let mut suites = Vec::new();

    // Dynamic program against the exhaustive oracle.
    {
        let mut rng = SplitMix64::new(seed);
        let mut suite = Suite::new("dp_vs_bruteforce");
        let box_cap = n.min(bruteforce_cap() as u32);
        for _ in 0..trials {
            let x = random_vector(&mut rng, box_cap);
            let dp = james_norm_sq(&x);
            let oracle = james_norm_bruteforce_sq(&x).expect("box within cap");
            suite.check(dp.norm_sq == oracle, || format!("dp mismatch on {x:?}"));
            let achieved = eval_family_sq(&x, dp.witness.family()).expect("finite witness");
            suite.check(achieved == dp.norm_sq, || format!("witness gap on {x:?}"));
        }
        suites.push(suite.finish());
    }

    // Canonicalization and support compaction.
    {
        let mut rng = SplitMix64::new(seed.wrapping_add(1));
        let mut suite = Suite::new("canonical_compact");
        for _ in 0..trials {
            let x = random_vector(&mut rng, n);
            let family = random_family(&mut rng, n + 2);
            let canon = canonicalize_family(&x, &family);
            suite.check(
                eval_family_sq(&x, &family).unwrap() == eval_family_sq(&x, &canon).unwrap(),
                || format!("canonicalization changed value on {x:?} / {family}"),
            );
            let (compacted, _) = compact_support(&x).expect("nonzero");
            suite.check(
                james_norm_sq(&compacted).norm_sq == james_norm_sq(&x).norm_sq
                    && l2_norm_sq(&compacted) == l2_norm_sq(&x),
                || format!("compaction changed a norm on {x:?}"),
            );
        }
        suites.push(suite.finish());
    }

    // The two norms and the isometry.
    {
        let mut rng = SplitMix64::new(seed.wrapping_add(2));
        let mut suite = Suite::new("isometry");
        for _ in 0..trials {
            let x = random_vector(&mut rng, n);
            let j = james_norm_sq(&x).norm_sq;
            let l2 = l2_norm_sq(&x);
            suite.check(
                l2.cmp_same_mode(&j) != std::cmp::Ordering::Greater,
                || format!("l2 above the partition norm on {x:?}"),
            );
            let y = iso_t(&x);
            suite.check(s_norm_sq(&y) == j, || format!("isometry broke on {x:?}"));
            suite.check(
                s_norm_sq_direct(&y) == j,
                || format!("direct chain DP disagreed on {x:?}"),
            );
            suite.check(
                iso_t_inv(&y) == x && iso_t(&iso_t_inv(&x)) == x,
                || format!("transforms failed to invert on {x:?}"),
            );
        }
        suites.push(suite.finish());
    }

    // The three extreme-point criteria.
    {
        let mut rng = SplitMix64::new(seed.wrapping_add(3));
        let mut suite = Suite::new("extreme_criteria");
        for _ in 0..trials {
            let x = random_vector(&mut rng, n);
            let by_equality = is_extreme_direction(&x, tol).unwrap();
            let (by_npr, _) = is_npr_hereditary(&x);
            let by_finest = finest_partition(&x, tol).unwrap().is_singletons();
            suite.check(
                by_equality == by_npr && by_equality == by_finest,
                || format!("criteria disagree on {x:?}"),
            );
        }
        suites.push(suite.finish());
    }

    // Partition enumeration: laminar, structured, counted.
    {
        let mut rng = SplitMix64::new(seed.wrapping_add(4));
        let mut suite = Suite::new("partition_structure");
        let box_cap = n.min(8);
        for _ in 0..trials {
            let x = random_vector(&mut rng, box_cap);
            let e = enumerate_norming_partitions(&x, DEFAULT_ENUM_LIMIT, tol).unwrap();
            let count = count_norming_partitions(&x, tol).unwrap();
            suite.check(
                count == num::BigUint::from(e.partitions.len()),
                || format!("count differs from enumeration on {x:?}"),
            );
            let finest = finest_partition(&x, tol).unwrap();
            for p in &e.partitions {
                suite.check(check_structure(p, tol).all_pass(), || {
                    format!("structure violation on {x:?}")
                });
                suite.check(refines(&finest, p).unwrap(), || {
                    format!("finest does not refine {p:?}")
                });
            }
        }
        suites.push(suite.finish());
    }

    // Bidual norm: reduction and oracle.
    {
        let mut rng = SplitMix64::new(seed.wrapping_add(5));
        let mut suite = Suite::new("bidual");
        let box_cap = n.min(bruteforce_cap() as u32).min(8);
        for _ in 0..trials {
            let xb = random_bidual(&mut rng, box_cap);
            let dp = bidual_norm_sq(&xb);
            let oracle = bidual_norm_bruteforce_sq(&xb).expect("box within cap");
            suite.check(dp.norm_sq == oracle, || format!("bidual mismatch on {xb:?}"));
            let plain = BidualVector::new(xb.finite_part().clone(), Scalar::from_int(0)).unwrap();
            suite.check(
                bidual_norm_sq(&plain).norm_sq == james_norm_sq(xb.finite_part()).norm_sq,
                || format!("omega-zero reduction failed on {xb:?}"),
            );
        }
        suites.push(suite.finish());
    }

    // The scalar sliding-square inequality.
    {
        let mut rng = SplitMix64::new(seed.wrapping_add(6));
        let mut suite = Suite::new("scalar_inequality");
        for _ in 0..trials.saturating_mul(10) {
            let mut draw = |allow_zero: bool| loop {
                let num = rng.below(13) as i64 - 6;
                if num != 0 || allow_zero {
                    let den = rng.below(5) as i64 + 1;
                    return Scalar::ratio(num, den);
                }
            };
            let gamma = draw(true);
            let eps = draw(false);
            let delta = if eps.signum() > 0 {
                draw(false).abs()
            } else {
                -draw(false).abs()
            };
            let rho = &(&(&gamma + &eps).square() - &gamma.square()) - &draw(true).square();
            suite.check(
                sliding_square_inequality(&rho, &gamma, &eps, &delta),
                || format!("inequality failed: rho={rho} gamma={gamma} eps={eps} delta={delta}"),
            );
        }
        suites.push(suite.finish());
    }

    VerifyReport {
        n,
        trials,
        seed,
        suites,
    }
}

pub struct FuzzReport {
    pub n: u32,
    pub trials: u32,
    pub seed: u64,
    pub mismatches: u64,
    pub examples: Vec<Value>,
}

impl FuzzReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "mismatches": self.mismatches,
            "ok": self.mismatches == 0,
            "examples": self.examples,
        })
    }

    pub fn summary(&self) -> String {
        format!(
            "fuzz: {} trials, {} mismatches",
            self.trials, self.mismatches
        )
    }
}

pub fn fuzz(n: u32, trials: u32, seed: u64) -> FuzzReport {
    let n = n.max(1).min(bruteforce_cap() as u32);
    let mut rng = SplitMix64::new(seed);
    let mut mismatches = 0;
    let mut examples = Vec::new();
    for _ in 0..trials {
        let x = random_vector(&mut rng, n);
        let dp = james_norm_sq(&x).norm_sq;
        let oracle = james_norm_bruteforce_sq(&x).expect("box within cap");
        if dp != oracle {
            mismatches += 1;
            if examples.len() < 5 {
                examples.push(json!({
                    "vector": json::vector_to_json(&x).unwrap(),
                    "dp": json::scalar_to_json(&dp).unwrap(),
                    "oracle": json::scalar_to_json(&oracle).unwrap(),
                }));
            }
        }
    }
    FuzzReport {
        n,
        trials,
        seed,
        mismatches,
        examples,
    }
}
