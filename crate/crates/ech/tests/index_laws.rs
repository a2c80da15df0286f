use ech::grading::{
    cz_fiber, cz_general, cz_i_total, ech_index, fredholm_index, grading_main_theorem,
    index_parity, index_with_offsets, relative_chern, relative_self_intersection, GradingError,
    Parity, RotationDescriptor, TrivializationOffset,
};
use ech::orbits::{degree, enumerate_generators, OrbitKind, OrbitSet};
use ech::topology::Bundle;
use ech::Rational;
use proptest::prelude::*;

fn b(g: u32, e: i64) -> Bundle {
    Bundle::new(g, e).unwrap()
}

fn os(s: &str, g: u32) -> OrbitSet {
    OrbitSet::parse(s, g).unwrap()
}

#[test]
fn conley_zehnder_of_fibers_depends_only_on_the_critical_index() {
    for k in 1..=7 {
        assert_eq!(cz_fiber(OrbitKind::EllipticMinus, k), -1);
        assert_eq!(cz_fiber(OrbitKind::Hyperbolic, k), 0);
        assert_eq!(cz_fiber(OrbitKind::EllipticPlus, k), 1);
    }
}

#[test]
fn conley_zehnder_general_formulas() {
    let theta = |n, d| RotationDescriptor::Elliptic(Rational::new(n, d));
    assert_eq!(cz_general(theta(2, 5), 3).unwrap(), 3); // 2*floor(6/5)+1
    assert_eq!(cz_general(RotationDescriptor::Hyperbolic(2), 3).unwrap(), 6);
    assert_eq!(cz_general(theta(-1, 7), 2).unwrap(), -1); // 2*floor(-2/7)+1
    assert!(matches!(
        cz_general(theta(2, 5), 5),
        Err(GradingError::DegenerateRotation { .. })
    ));
    assert!(matches!(
        cz_general(theta(3, 1), 1),
        Err(GradingError::DegenerateRotation { .. })
    ));
}

#[test]
fn total_conley_zehnder_term_counts_elliptic_covers() {
    assert_eq!(cz_i_total(&os("e-^2 e+^3", 0)), 1);
    assert_eq!(cz_i_total(&OrbitSet::empty(2)), 0);
    assert_eq!(cz_i_total(&os("h1 h2", 1)), 0);
}

#[test]
fn relative_chern_class_is_base_euler_characteristic_times_degree() {
    assert_eq!(
        relative_chern(&b(2, -1), &os("e+", 2), &OrbitSet::empty(2)).unwrap(),
        -2
    );
    assert_eq!(
        relative_chern(&b(0, -3), &os("e-^3", 0), &OrbitSet::empty(0)).unwrap(),
        2
    );
    let a = os("e- h2 e+", 1);
    assert_eq!(relative_chern(&b(1, -2), &a, &a).unwrap(), 0);
}

#[test]
fn relative_self_intersection_examples() {
    assert_eq!(
        relative_self_intersection(&b(0, -1), &os("e+^2", 0), &OrbitSet::empty(0)).unwrap(),
        4
    );
    assert_eq!(
        relative_self_intersection(&b(1, -2), &os("e-^2 e+^2", 1), &os("e- e+", 1)).unwrap(),
        6
    );
    let a = os("e-^3", 0);
    assert_eq!(relative_self_intersection(&b(0, -5), &a, &a).unwrap(), 0);
}

#[test]
fn index_table_for_the_genus_two_unit_bundle() {
    let bb = b(2, -1);
    let empty = OrbitSet::empty(2);
    let expect = [
        ("e-", -2),
        ("h1", -1),
        ("h3", -1),
        ("e+", 0),
        ("e-^2", -2),
        ("e- h1", -1),
        ("e- e+", 0),
        ("h1 h2", 0),
        ("h2 h4", 0),
        ("h1 e+", 1),
        ("e+^2", 2),
        ("e-^3", 0),
        ("e-^2 h1", 1),
        ("e-^2 e+", 2),
        ("e- h1 h2", 2),
        ("e- h1 e+", 3),
        ("h1 h2 h3", 3),
        ("e- e+^2", 4),
        ("h1 h2 e+", 4),
        ("e-^4", 4),
    ];
    for (lit, want) in expect {
        let breakdown = ech_index(&bb, &os(lit, 2), &empty).unwrap();
        assert_eq!(breakdown.total, want, "I({lit})");
        assert_eq!(
            breakdown.total,
            breakdown.c_tau + breakdown.q_tau + breakdown.cz_total
        );
    }
}

#[test]
fn index_vanishes_on_the_diagonal() {
    for g in 0..=2u32 {
        let bb = b(g, -2);
        for a in enumerate_generators(&bb, 1, 5) {
            assert_eq!(ech_index(&bb, &a, &a).unwrap().total, 0);
        }
    }
}

#[test]
fn sphere_indices_are_the_even_ladder() {
    let bb = b(0, -1);
    let empty = OrbitSet::empty(0);
    assert_eq!(ech_index(&bb, &os("e-", 0), &empty).unwrap().total, 2);
    assert_eq!(ech_index(&bb, &os("e+", 0), &empty).unwrap().total, 4);
}

#[test]
fn index_is_antisymmetric() {
    let bb = b(2, -3);
    let a = os("e-^2 h1 e+^3", 2);
    let c = os("h2 h3 e+", 2);
    let fwd = ech_index(&bb, &a, &c).unwrap();
    let rev = ech_index(&bb, &c, &a).unwrap();
    assert_eq!(fwd.total, -rev.total);
    assert_eq!(fwd.c_tau, -rev.c_tau);
    assert_eq!(fwd.q_tau, -rev.q_tau);
    assert_eq!(fwd.cz_total, -rev.cz_total);
}

#[test]
fn offset_shift_components_match_the_change_of_trivialization_formulas() {
    let bb = b(2, -1);
    let a = os("e+", 2);
    let empty = OrbitSet::empty(2);
    let base = ech_index(&bb, &a, &empty).unwrap();

    let mut off = TrivializationOffset::zero(2);
    off.t_plus = 1;
    let shifted = index_with_offsets(&bb, &a, &empty, &off).unwrap();
    assert_eq!(shifted.c_tau, base.c_tau + 1); // m_plus * t_plus
    assert_eq!(shifted.q_tau, base.q_tau + 1); // m_plus^2 * t_plus
    assert_eq!(shifted.cz_total, base.cz_total - 2); // (m_plus^2 + m_plus) * t_plus
    assert_eq!(shifted.total, base.total);

    let zero = index_with_offsets(&bb, &a, &empty, &TrivializationOffset::zero(2)).unwrap();
    assert_eq!(zero, base);
}

#[test]
fn fredholm_index_examples() {
    let bb = b(2, -1);
    // flow cylinder from a saddle fiber down to the minimum fiber
    assert_eq!(
        fredholm_index(
            &bb,
            0,
            &[(OrbitKind::Hyperbolic, 1)],
            &[(OrbitKind::EllipticMinus, 1)],
            0
        ),
        1
    );
    // covers of the trivial cylinder over e+ with one positive end
    for n in 1..=5usize {
        let negs = vec![(OrbitKind::EllipticPlus, 1u64); n];
        assert_eq!(
            fredholm_index(&bb, 0, &[(OrbitKind::EllipticPlus, 5)], &negs, 0),
            0
        );
    }
    // branched cover of a hyperbolic cylinder with ends (2,1)
    assert_eq!(
        fredholm_index(
            &bb,
            0,
            &[(OrbitKind::Hyperbolic, 1), (OrbitKind::Hyperbolic, 1)],
            &[(OrbitKind::Hyperbolic, 2)],
            0
        ),
        1
    );
    // genus one cover over e+ with one end on each side
    assert_eq!(
        fredholm_index(
            &bb,
            1,
            &[(OrbitKind::EllipticPlus, 2)],
            &[(OrbitKind::EllipticPlus, 2)],
            0
        ),
        2
    );
}

#[test]
fn flow_cylinders_realize_index_one_with_simple_ends() {
    let bb = b(1, -1);
    assert_eq!(ech_index(&bb, &os("h1", 1), &os("e-", 1)).unwrap().total, 1);
    assert_eq!(ech_index(&bb, &os("e+", 1), &os("h1", 1)).unwrap().total, 1);
    // the Fredholm count of the same cylinders agrees
    assert_eq!(
        fredholm_index(
            &bb,
            0,
            &[(OrbitKind::EllipticPlus, 1)],
            &[(OrbitKind::Hyperbolic, 1)],
            0
        ),
        1
    );
}

/// A formal end configuration can have Fredholm index larger than the ECH
/// index: splitting the positive ends of a degree-zero configuration at e+
/// adds 2 per extra end. Such configurations are excluded by singularity
/// counts (see the connector tests), not by index arithmetic alone.
#[test]
fn split_ends_overshoot_the_ech_index() {
    let bb = b(1, -1);
    let i = ech_index(&bb, &os("e+^2", 1), &os("h1 h2", 1)).unwrap().total;
    assert_eq!(i, 2);
    let split = fredholm_index(
        &bb,
        0,
        &[(OrbitKind::EllipticPlus, 1), (OrbitKind::EllipticPlus, 1)],
        &[(OrbitKind::Hyperbolic, 1), (OrbitKind::Hyperbolic, 1)],
        0,
    );
    assert_eq!(split, 4);
}

#[test]
fn main_theorem_grading_examples() {
    assert_eq!(grading_main_theorem(&b(2, -1), 0, 1, 0), -2);
    assert_eq!(grading_main_theorem(&b(2, -1), 0, 0, 0), 0);
    assert_eq!(grading_main_theorem(&b(0, -1), 0, 1, 2), 4);
}

#[test]
fn grading_formula_matches_the_index_against_the_base_generator() {
    for g in 0..=3u32 {
        for e in [-1i64, -2, -3, -4] {
            let bb = b(g, e);
            for gamma in 0..bb.abs_e() {
                let base = OrbitSet::new(gamma as u64, vec![0; 2 * g as usize], 0);
                for a in enumerate_generators(&bb, gamma, gamma as u64 + 2 * bb.abs_e() as u64) {
                    let d = degree(&bb, &a, &base).unwrap();
                    let bullet = (a.hyp_weight() + 2 * a.m_plus()) as i64;
                    assert_eq!(
                        grading_main_theorem(&bb, gamma, d, bullet),
                        ech_index(&bb, &a, &base).unwrap().total,
                        "g={g} e={e} gamma={gamma} a={a}"
                    );
                }
            }
        }
    }
}

#[test]
fn parity_examples() {
    assert_eq!(index_parity(&os("h1", 1), &OrbitSet::empty(1)), Parity::Odd);
    let a = os("e- h1 e+^2", 1);
    assert_eq!(index_parity(&a, &a), Parity::Even);
    assert_eq!(index_parity(&os("e- h1", 1), &os("h2 e+", 1)), Parity::Even);
}

/// Random admissible orbit set in a prescribed homology class.
fn sample(seed: (u64, u64, u64, u64), genus: u32, abs_e: i64, class: i64) -> OrbitSet {
    let slots = 2 * genus as usize;
    let (m_minus, bits, m_plus_raw, _) = seed;
    let hyp: Vec<u64> = (0..slots).map(|i| (bits >> i) & 1).collect();
    let partial = (m_minus + hyp.iter().sum::<u64>() + m_plus_raw) as i64;
    let fix = ((class - partial) % abs_e + abs_e) % abs_e;
    OrbitSet::new(m_minus, hyp, m_plus_raw + fix as u64)
}

proptest! {
    #[test]
    fn index_is_additive_over_homologous_triples(
        g in 0u32..=3,
        abs_e in 1i64..=4,
        class_raw in 0i64..4,
        s1 in (0u64..6, 0u64..64, 0u64..6, 0u64..1),
        s2 in (0u64..6, 0u64..64, 0u64..6, 0u64..1),
        s3 in (0u64..6, 0u64..64, 0u64..6, 0u64..1),
    ) {
        let class = class_raw % abs_e;
        let bb = b(g, -abs_e);
        let mut sets = [
            sample(s1, g, abs_e, class),
            sample(s2, g, abs_e, class),
            sample(s3, g, abs_e, class),
        ];
        sets.sort_by_key(|a| std::cmp::Reverse(a.total()));
        let [a, m, c] = sets;
        let whole = ech_index(&bb, &a, &c).unwrap().total;
        let upper = ech_index(&bb, &a, &m).unwrap().total;
        let lower = ech_index(&bb, &m, &c).unwrap().total;
        prop_assert_eq!(whole, upper + lower);
    }

    #[test]
    fn index_parity_matches_the_hyperbolic_count(
        g in 0u32..=3,
        abs_e in 1i64..=4,
        class_raw in 0i64..4,
        s1 in (0u64..6, 0u64..64, 0u64..6, 0u64..1),
        s2 in (0u64..6, 0u64..64, 0u64..6, 0u64..1),
    ) {
        let class = class_raw % abs_e;
        let bb = b(g, -abs_e);
        let a = sample(s1, g, abs_e, class);
        let c = sample(s2, g, abs_e, class);
        let i = ech_index(&bb, &a, &c).unwrap().total;
        let expected = if i.rem_euclid(2) == 0 { Parity::Even } else { Parity::Odd };
        prop_assert_eq!(index_parity(&a, &c), expected);
    }

    #[test]
    fn total_index_ignores_the_trivialization(
        g in 0u32..=3,
        abs_e in 1i64..=4,
        class_raw in 0i64..4,
        s1 in (0u64..6, 0u64..64, 0u64..6, 0u64..1),
        s2 in (0u64..6, 0u64..64, 0u64..6, 0u64..1),
        t_minus in -3i64..=3,
        t_bits in proptest::collection::vec(-3i64..=3, 6),
        t_plus in -3i64..=3,
    ) {
        let class = class_raw % abs_e;
        let bb = b(g, -abs_e);
        let a = sample(s1, g, abs_e, class);
        let c = sample(s2, g, abs_e, class);
        let off = TrivializationOffset {
            t_minus,
            t_hyp: t_bits[..2 * g as usize].to_vec(),
            t_plus,
        };
        let plain = ech_index(&bb, &a, &c).unwrap();
        let shifted = index_with_offsets(&bb, &a, &c, &off).unwrap();
        prop_assert_eq!(shifted.total, plain.total);
        prop_assert_eq!(
            shifted.total,
            shifted.c_tau + shifted.q_tau + shifted.cz_total
        );
    }
}
