//! Acceptance gate: the eight release criteria, run in order with pinned
//! time budgets. Each criterion prints one PASS/FAIL line; the test fails if
//! any criterion fails its checks or its budget. Run with --nocapture to see
//! the lines on success.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use ech::complex::{
    build_complex, lens_lattice_bijection, stability_census, stability_threshold,
    verify_main_theorem,
};
use ech::orbits::{FlowCounts, MorseData};
use ech::partitions::{negative_partition, positive_partition, Rotation};
use ech::topology::Bundle;
use ech::verify::{run_additivity, run_connectors, run_parity, run_trivialization};
use ech::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;

const MS_TABLE: u128 = 1_000;
const MS_LENS: u128 = 1_000;
const MS_ISOMORPHISM: u128 = 30_000;
const MS_STABILITY: u128 = 30_000;
const MS_CONNECTORS: u128 = 5_000;
const SEED: u64 = 0x77e1_ace5;

fn b(genus: u32, euler: i64) -> Bundle {
    Bundle::new(genus, euler).unwrap()
}

fn criterion(
    idx: usize,
    name: &str,
    budget_ms: Option<u128>,
    body: impl FnOnce() -> Result<(), String>,
) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let ms = start.elapsed().as_millis();
    let verdict = match &outcome {
        Ok(Ok(())) => None,
        Ok(Err(e)) => Some(e.clone()),
        Err(_) => Some("panicked".to_string()),
    };
    let in_budget = budget_ms.map_or(true, |limit| ms < limit);
    let pass = verdict.is_none() && in_budget;
    println!("acceptance [{idx}/8] {name}: {} ({ms} ms)", if pass { "PASS" } else { "FAIL" });
    if let Some(e) = verdict {
        println!("    {e}");
    }
    if !in_budget {
        println!("    budget {} ms exceeded", budget_ms.unwrap());
    }
    pass
}

fn table_reproduction() -> Result<(), String> {
    let cx = build_complex(&b(2, -1), &MorseData::perfect(2), 0, 4)
        .map_err(|e| e.to_string())?;
    let mut cells: BTreeMap<(u64, i64), u64> = BTreeMap::new();
    for (j, a) in cx.generators().iter().enumerate() {
        let v = cx.gradings()[j];
        if v <= 4 {
            *cells.entry((a.total(), v)).or_default() += 1;
        }
    }
    let expected: BTreeMap<(u64, i64), u64> = [
        ((0, 0), 1),
        ((1, -2), 1),
        ((1, -1), 4),
        ((1, 0), 1),
        ((2, -2), 1),
        ((2, -1), 4),
        ((2, 0), 7),
        ((2, 1), 4),
        ((2, 2), 1),
        ((3, 0), 1),
        ((3, 1), 4),
        ((3, 2), 7),
        ((3, 3), 8),
        ((3, 4), 7),
        ((4, 4), 1),
    ]
    .into_iter()
    .collect();
    if cells != expected {
        return Err(format!("table cells differ: got {cells:?}"));
    }
    Ok(())
}

fn lens_bijection() -> Result<(), String> {
    for e in -5..=-1i64 {
        for gamma in 0..-e {
            // Grow the window a stratum at a time past the floor until the
            // class holds at least 100 lattice points.
            let mut max_total = 30u64;
            let report = loop {
                let report = lens_lattice_bijection(&b(0, e), gamma, max_total)
                    .map_err(|err| err.to_string())?;
                if report.rows.len() >= 100 {
                    break report;
                }
                max_total += (-e) as u64;
            };
            if !report.bijective {
                return Err(format!(
                    "e={e} class {gamma}: duplicates {:?}, missing {:?}",
                    report.duplicates, report.missing
                ));
            }
        }
    }
    Ok(())
}

fn graded_isomorphism() -> Result<(), String> {
    for g in 0..=3u32 {
        for e in -4..=-1i64 {
            for gamma in 0..-e {
                let max_total = (gamma + 3 * -e) as u64;
                let report = verify_main_theorem(&b(g, e), gamma, max_total)
                    .map_err(|err| err.to_string())?;
                if !report.pass {
                    let (v, got, want) = report.first_mismatch.unwrap();
                    return Err(format!(
                        "g={g} e={e} class {gamma}: grading {v} has {got}, expected {want}"
                    ));
                }
            }
        }
    }
    Ok(())
}

fn stability() -> Result<(), String> {
    for (g, plateau) in [(1u32, 2u64), (2, 8), (3, 32)] {
        let y = b(g, -1);
        let lo = stability_threshold(&y, 0).map_err(|e| e.to_string())?;
        let dims = stability_census(&y, 0, (lo, lo + 3)).map_err(|e| e.to_string())?;
        for v in lo..=lo + 3 {
            if dims.dim(v) != plateau {
                return Err(format!(
                    "g={g}: grading {v} has dimension {}, expected {plateau}",
                    dims.dim(v)
                ));
            }
        }
    }
    Ok(())
}

fn index_properties() -> Result<(), String> {
    for report in [
        run_additivity(10_000, SEED),
        run_parity(10_000, SEED),
        run_trivialization(1_000, SEED),
    ] {
        if !report.passed() {
            return Err(format!(
                "{}: {} of {} checks failed, first: {}",
                report.name, report.failure_count, report.checked, report.failures[0]
            ));
        }
    }
    Ok(())
}

fn partitions_oracle() -> Result<(), String> {
    let mut checked = 0u64;
    for q in 1..=9i64 {
        for p in (-9..=9i64).filter(|p| *p != 0 && num::integer::gcd(p.abs(), q) == 1) {
            let theta = Rational::new(p, q);
            for m in 1..=8u64 {
                if (theta * Rational::from_integer(m as i64)).is_integer() {
                    continue;
                }
                let pos = positive_partition(Rotation::Angle(theta), m)
                    .map_err(|e| e.to_string())?;
                let neg = negative_partition(Rotation::Angle(theta), m)
                    .map_err(|e| e.to_string())?;
                if pos.parts() != common::highest_below(theta, m) {
                    return Err(format!("positive partition at {theta}, {m} off the oracle"));
                }
                if neg.parts() != common::lowest_above(theta, m) {
                    return Err(format!("negative partition at {theta}, {m} off the oracle"));
                }
                let mirrored =
                    negative_partition(Rotation::Angle(-theta), m).map_err(|e| e.to_string())?;
                if pos != mirrored {
                    return Err(format!("reflection symmetry fails at {theta}, {m}"));
                }
                checked += 1;
            }
        }
    }
    for m in 1..=8u64 {
        let ones = vec![1u64; m as usize];
        let mut twos = vec![2u64; (m / 2) as usize];
        if m % 2 == 1 {
            twos.push(1);
        }
        let ok = positive_partition(Rotation::SmallPositive, m).unwrap().parts() == ones
            && negative_partition(Rotation::SmallPositive, m).unwrap().parts() == [m]
            && positive_partition(Rotation::SmallNegative, m).unwrap().parts() == [m]
            && negative_partition(Rotation::SmallNegative, m).unwrap().parts() == ones
            && positive_partition(Rotation::PositiveHyperbolic, m).unwrap().parts() == ones
            && negative_partition(Rotation::NegativeHyperbolic, m).unwrap().parts() == twos;
        if !ok {
            return Err(format!("closed form fails at multiplicity {m}"));
        }
    }
    if checked < 400 {
        return Err(format!("oracle grid unexpectedly small: {checked}"));
    }
    Ok(())
}

fn connector_census() -> Result<(), String> {
    let report = run_connectors(6);
    if !report.passed() {
        return Err(format!(
            "{} of {} checks failed, first: {}",
            report.failure_count, report.checked, report.failures[0]
        ));
    }
    // 3 base kinds x 4 genera x sum of p(k)^2 for k <= 6 covers, several
    // checks each; anything below that means the census was truncated.
    if report.checked < 3 * 4 * 209 {
        return Err(format!("census too small: {} checks", report.checked));
    }
    Ok(())
}

fn differential_contract() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for trial in 0..100u32 {
        let g = 1 + trial % 3;
        let n = 2 * g as usize;
        let s2m: Vec<Vec<u8>> = (0..n).map(|_| vec![rng.gen_range(0..2u8)]).collect();
        let m2s: Vec<Vec<u8>> = loop {
            let cand: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2u8)).collect();
            let composite =
                cand.iter().enumerate().fold(0u8, |acc, (i, &v)| acc ^ (v & s2m[i][0]));
            if composite == 0 {
                break vec![cand];
            }
        };
        let md = MorseData::new(
            vec![Rational::new(-1, 2)],
            vec![Rational::from_integer(0); n],
            vec![Rational::new(1, 2)],
            Some(FlowCounts { saddle_to_min: s2m, max_to_saddle: m2s }),
        )
        .map_err(|e| e.to_string())?;
        let e = -1 - (trial % 4) as i64;
        let gamma = (trial % 2) as i64 % -e;
        let cx = build_complex(&b(g, e), &md, gamma, gamma as u64 + 5)
            .map_err(|err| err.to_string())?;
        if !cx.boundary_squares_to_zero() {
            return Err(format!("trial {trial}: boundary fails to square to zero"));
        }
    }
    for g in 0..=3u32 {
        for e in -4..=-1i64 {
            for gamma in 0..-e {
                let max_total = (gamma + 2 * -e) as u64;
                let cx = build_complex(&b(g, e), &MorseData::perfect(g), gamma, max_total)
                    .map_err(|err| err.to_string())?;
                if !cx.boundary_is_zero() {
                    return Err(format!("g={g} e={e} class {gamma}: nonzero flow-free boundary"));
                }
            }
        }
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let mut all = true;
    all &= criterion(1, "table-reproduction", Some(MS_TABLE), table_reproduction);
    all &= criterion(2, "lens-bijection", Some(MS_LENS), lens_bijection);
    all &= criterion(3, "graded-isomorphism", Some(MS_ISOMORPHISM), graded_isomorphism);
    all &= criterion(4, "stability", Some(MS_STABILITY), stability);
    all &= criterion(5, "index-properties", None, index_properties);
    all &= criterion(6, "partitions-oracle", None, partitions_oracle);
    all &= criterion(7, "connector-census", Some(MS_CONNECTORS), connector_census);
    all &= criterion(8, "differential-contract", None, differential_contract);
    assert!(all, "one or more acceptance criteria failed");
}
