//! Self-contained verification suites: each one drives a family of library
//! invariants at a configurable scale and reports how many checks ran and
//! which failed. The random suites are deterministic in the seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{lens_lattice_bijection, stability_census, stability_threshold};
use crate::connectors::{
    classify_connector, connector_delta, writhe_bound_positive, ConnectorCase, CoverData,
    DeltaCase,
};
use crate::grading::{ech_index, index_parity, index_with_offsets, Parity, TrivializationOffset};
use crate::orbits::{OrbitKind, OrbitSet};
use crate::partitions::{negative_partition, positive_partition, Rotation};
use crate::topology::Bundle;
use crate::Rational;

/// Outcome of one verification suite. The failure list keeps only the first
/// few counterexamples; the count covers all of them.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checked: u64,
    pub failure_count: u64,
    pub failures: Vec<String>,
}

const KEPT_FAILURES: usize = 8;

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport { name, checked: 0, failure_count: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(detail());
            }
        }
    }
}

fn classes(b: &Bundle, gamma: Option<i64>) -> Vec<i64> {
    match gamma {
        Some(g) => vec![g],
        None => (0..b.abs_e()).collect(),
    }
}

/// Homology of the flow-free complex against the exterior model, per class.
pub fn run_main_theorem(b: &Bundle, gamma: Option<i64>, max_total: u64) -> SuiteReport {
    let mut report = SuiteReport::new("main-theorem");
    for g in classes(b, gamma) {
        match crate::complex::verify_main_theorem(b, g, max_total) {
            Ok(r) => report.check(r.pass, || {
                let (v, got, want) = r.first_mismatch.unwrap();
                format!("class {g}: grading {v} has dimension {got}, expected {want}")
            }),
            Err(e) => report.check(false, || format!("class {g}: {e}")),
        }
    }
    report
}

/// Dimension plateau 2^(2g-1) over a window just above the stability
/// threshold, per class.
pub fn run_stability(b: &Bundle, gamma: Option<i64>) -> SuiteReport {
    let mut report = SuiteReport::new("stability");
    let plateau = 1u64 << (2 * b.genus() - 1);
    for g in classes(b, gamma) {
        let lo = match stability_threshold(b, g) {
            Ok(v) => v,
            Err(e) => {
                report.check(false, || format!("class {g}: {e}"));
                continue;
            }
        };
        match stability_census(b, g, (lo, lo + 3)) {
            Ok(dims) => {
                for v in lo..=lo + 3 {
                    report.check(dims.dim(v) == plateau, || {
                        format!(
                            "class {g}: grading {v} has dimension {}, expected {plateau}",
                            dims.dim(v)
                        )
                    });
                }
            }
            Err(e) => report.check(false, || format!("class {g}: {e}")),
        }
    }
    report
}

/// Sphere-base index bijection onto the even naturals, per class.
pub fn run_lens(b: &Bundle, gamma: Option<i64>, max_total: u64) -> SuiteReport {
    let mut report = SuiteReport::new("lens");
    for g in classes(b, gamma) {
        match lens_lattice_bijection(b, g, max_total) {
            Ok(r) => report.check(r.bijective, || {
                format!(
                    "class {g}: duplicated indices {:?}, missing indices {:?}",
                    r.duplicates, r.missing
                )
            }),
            Err(e) => report.check(false, || format!("class {g}: {e}")),
        }
    }
    report
}

/// Non-increasing multisets of positive integers with the given sum.
fn mult_partitions(total: u64) -> Vec<Vec<u64>> {
    fn fill(total: u64, cap: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if total == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=cap.min(total)).rev() {
            prefix.push(part);
            fill(total - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(total, total, &mut Vec::new(), &mut out);
    out
}

/// Exhaustive census of cylinder covers up to a total multiplicity: index
/// positivity, the index-0 and index-1 classifications, the writhe bound
/// saturation at single ends, and the two-sided singularity count bound.
pub fn run_connectors(max_mult: u64) -> SuiteReport {
    let mut report = SuiteReport::new("connectors");
    let b = Bundle::new(1, -1).expect("reference bundle");
    let kinds = [OrbitKind::EllipticMinus, OrbitKind::Hyperbolic, OrbitKind::EllipticPlus];
    for total in 1..=max_mult {
        let parts = mult_partitions(total);
        for &kind in &kinds {
            for genus in 0..=3u32 {
                for pos in &parts {
                    for neg in &parts {
                        let cover = CoverData::new(kind, genus, pos.clone(), neg.clone())
                            .expect("matched end sums");
                        let r = classify_connector(&b, &[cover]);
                        let comp = &r.components[0];
                        let tag = || {
                            format!(
                                "{kind:?} genus {genus} ends {pos:?}/{neg:?} index {}",
                                comp.index
                            )
                        };
                        report.check(comp.index >= 0, || format!("negative index: {}", tag()));
                        report.check(r.ech_index == 0, || format!("nonzero pair index: {}", tag()));
                        match comp.index {
                            0 => report.check(
                                matches!(
                                    comp.case,
                                    ConnectorCase::UnbranchedCylinder
                                        | ConnectorCase::SinglePositiveEnd
                                        | ConnectorCase::SingleNegativeEnd
                                ),
                                || format!("unclassified index-0 cover: {}", tag()),
                            ),
                            1 => report.check(
                                comp.case == ConnectorCase::HyperbolicBranched
                                    && kind == OrbitKind::Hyperbolic
                                    && genus == 0
                                    && matches!((pos.len(), neg.len()), (1, 2) | (2, 1)),
                                || format!("index-1 cover off the branched shape: {}", tag()),
                            ),
                            _ => report.check(comp.case == ConnectorCase::Invalid, || {
                                format!("index above 1 not flagged: {}", tag())
                            }),
                        }
                    }
                }
            }
        }
        for ends in parts.iter().filter(|p| p.len() >= 2) {
            let d = total as i64;
            // Sum of min(d_i, d_j) over ordered pairs with i != j: all pairs
            // minus the diagonal.
            let all_pairs: i64 = ends
                .iter()
                .flat_map(|&a| ends.iter().map(move |&b| a.min(b) as i64))
                .sum();
            let ordered_mins = all_pairs - d;
            let expected = 2 - 2 * d - ordered_mins;
            for case in [DeltaCase::OverEPlus, DeltaCase::OverEMinus] {
                let delta = connector_delta(case, ends).expect("two or more ends");
                report.check(delta == expected, || {
                    format!("{case:?} ends {ends:?}: delta {delta}, expected {expected}")
                });
                report.check(delta <= -2, || {
                    format!("{case:?} ends {ends:?}: delta {delta} above -2")
                });
            }
        }
    }
    for d in 1..=max_mult {
        let bound = writhe_bound_positive(d, 1);
        report.check(bound == 1 - d as i64, || {
            format!("multiplicity {d}: writhe bound {bound}, expected {}", 1 - d as i64)
        });
    }
    report
}

/// Partition lattice paths: reflection symmetry, part sums, monotonicity,
/// the small-angle matches, and the hyperbolic closed forms.
pub fn run_partitions(max_m: u64, max_q: i64) -> SuiteReport {
    let mut report = SuiteReport::new("partitions");
    for q in 1..=max_q {
        for p in (-max_q..=max_q).filter(|p| *p != 0 && gcd(p.unsigned_abs(), q as u64) == 1) {
            let theta = Rational::new(p, q);
            for m in 1..=max_m {
                if (m as i64 * p).rem_euclid(q) == 0 {
                    report.check(
                        positive_partition(Rotation::Angle(theta), m).is_err()
                            && negative_partition(Rotation::Angle(theta), m).is_err(),
                        || format!("degenerate angle {theta} at multiplicity {m} accepted"),
                    );
                    continue;
                }
                let pos = positive_partition(Rotation::Angle(theta), m).expect("nondegenerate");
                let neg = negative_partition(Rotation::Angle(theta), m).expect("nondegenerate");
                report.check(pos.total() == m && neg.total() == m, || {
                    format!("angle {theta} multiplicity {m}: parts do not sum to {m}")
                });
                report.check(
                    pos.parts().windows(2).all(|w| w[0] >= w[1])
                        && neg.parts().windows(2).all(|w| w[0] >= w[1]),
                    || format!("angle {theta} multiplicity {m}: parts not sorted"),
                );
                let mirrored = negative_partition(Rotation::Angle(-theta), m).unwrap();
                report.check(pos == mirrored, || {
                    format!("angle {theta} multiplicity {m}: reflection symmetry fails")
                });
            }
        }
    }
    for m in 1..=max_m {
        let ones = vec![1u64; m as usize];
        let single = vec![m];
        let mut twos = vec![2u64; (m / 2) as usize];
        if m % 2 == 1 {
            twos.push(1);
        }
        let cases: [(Rotation, &[u64], &[u64]); 4] = [
            (Rotation::SmallPositive, &ones, &single),
            (Rotation::SmallNegative, &single, &ones),
            (Rotation::PositiveHyperbolic, &ones, &ones),
            (Rotation::NegativeHyperbolic, &twos, &twos),
        ];
        for (rot, want_pos, want_neg) in cases {
            let pos = positive_partition(rot, m).unwrap();
            let neg = negative_partition(rot, m).unwrap();
            report.check(pos.parts() == want_pos && neg.parts() == want_neg, || {
                format!("closed form fails at multiplicity {m}")
            });
        }
        let eps = Rational::new(1, m as i64 + 1);
        let pos = positive_partition(Rotation::Angle(eps), m).unwrap();
        let neg = negative_partition(Rotation::Angle(-eps), m).unwrap();
        report.check(pos.parts() == ones.as_slice() && neg.parts() == ones.as_slice(), || {
            format!("explicit small angle disagrees with its sign token at multiplicity {m}")
        });
    }
    report
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn sample_bundle(rng: &mut ChaCha8Rng) -> Bundle {
    Bundle::new(rng.gen_range(0..=3), -rng.gen_range(1..=4)).expect("negative Euler class")
}

fn sample_in_class(rng: &mut ChaCha8Rng, b: &Bundle, gamma: u64) -> OrbitSet {
    let hyp: Vec<u64> = (0..b.hyperbolic_orbit_count()).map(|_| rng.gen_range(0..2)).collect();
    let m_minus: u64 = rng.gen_range(0..8);
    let m_plus: u64 = rng.gen_range(0..8);
    let order = b.abs_e() as u64;
    let total = m_minus + hyp.iter().sum::<u64>() + m_plus;
    let deficit = (gamma + order - total % order) % order;
    OrbitSet::new(m_minus + deficit, hyp, m_plus)
}

/// Index parity against combined hyperbolic multiplicity on random
/// homologous pairs.
pub fn run_parity(samples: u64, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("parity");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let b = sample_bundle(&mut rng);
        let gamma = rng.gen_range(0..b.abs_e()) as u64;
        let a = sample_in_class(&mut rng, &b, gamma);
        let c = sample_in_class(&mut rng, &b, gamma);
        let total = ech_index(&b, &a, &c).expect("same class").total;
        let want = if total % 2 == 0 { Parity::Even } else { Parity::Odd };
        report.check(index_parity(&a, &c) == want, || {
            format!(
                "genus {} e {}: index {total} against hyperbolic weight {}",
                b.genus(),
                b.euler_class(),
                a.hyp_weight() + c.hyp_weight()
            )
        });
    }
    report
}

/// Index additivity over random homologous triples, term by term.
pub fn run_additivity(samples: u64, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("additivity");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let y = sample_bundle(&mut rng);
        let gamma = rng.gen_range(0..y.abs_e()) as u64;
        let a = sample_in_class(&mut rng, &y, gamma);
        let b = sample_in_class(&mut rng, &y, gamma);
        let c = sample_in_class(&mut rng, &y, gamma);
        let ac = ech_index(&y, &a, &c).expect("same class");
        let ab = ech_index(&y, &a, &b).expect("same class");
        let bc = ech_index(&y, &b, &c).expect("same class");
        let ok = ac.total == ab.total + bc.total
            && ac.c_tau == ab.c_tau + bc.c_tau
            && ac.q_tau == ab.q_tau + bc.q_tau
            && ac.cz_total == ab.cz_total + bc.cz_total;
        report.check(ok, || {
            format!(
                "genus {} e {}: I(a,c) = {} but I(a,b) + I(b,c) = {}",
                y.genus(),
                y.euler_class(),
                ac.total,
                ab.total + bc.total
            )
        });
    }
    report
}

/// Total index invariance under random per-orbit trivialization shifts.
pub fn run_trivialization(samples: u64, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("trivialization");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let b = sample_bundle(&mut rng);
        let gamma = rng.gen_range(0..b.abs_e()) as u64;
        let a = sample_in_class(&mut rng, &b, gamma);
        let c = sample_in_class(&mut rng, &b, gamma);
        let off = TrivializationOffset {
            t_minus: rng.gen_range(-3..=3),
            t_hyp: (0..b.hyperbolic_orbit_count()).map(|_| rng.gen_range(-3..=3)).collect(),
            t_plus: rng.gen_range(-3..=3),
        };
        let base = ech_index(&b, &a, &c).expect("same class");
        let shifted = index_with_offsets(&b, &a, &c, &off).expect("same class");
        let at_zero = index_with_offsets(&b, &a, &c, &TrivializationOffset::zero(b.genus()))
            .expect("same class");
        let ok = shifted.total == base.total
            && shifted.c_tau + shifted.q_tau + shifted.cz_total == shifted.total
            && at_zero == base;
        report.check(ok, || {
            format!(
                "genus {} e {}: total moved from {} to {} under {off:?}",
                b.genus(),
                b.euler_class(),
                base.total,
                shifted.total
            )
        });
    }
    report
}
