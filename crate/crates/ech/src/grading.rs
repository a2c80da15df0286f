//! The index engine: Conley-Zehnder terms, relative Chern class, relative
//! self-intersection, total index with its breakdown, Fredholm index, and the
//! closed grading formula.
//!
//! All quantities are taken in the constant trivialization along the fibers;
//! `index_with_offsets` re-expresses the breakdown in a shifted trivialization
//! and exhibits the invariance of the total.

use thiserror::Error;

use crate::orbits::{degree, homology_class, OrbitKind, OrbitSet, OrbitsError};
use crate::topology::Bundle;
use crate::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GradingError {
    #[error("rotation number {theta} is degenerate at the {k}-fold cover")]
    DegenerateRotation { theta: Rational, k: u64 },
}

/// Conley-Zehnder index of the k-fold cover of a fiber orbit. The constant
/// trivialization makes this the Morse index of the critical point minus one,
/// for every k in the small-rotation window.
pub fn cz_fiber(kind: OrbitKind, k: u64) -> i64 {
    debug_assert!(k >= 1);
    match kind {
        OrbitKind::EllipticMinus => -1,
        OrbitKind::Hyperbolic => 0,
        OrbitKind::EllipticPlus => 1,
    }
}

/// Rotation data of a nondegenerate Reeb orbit in some trivialization:
/// elliptic with irrational-or-noninteger rotation number, or hyperbolic with
/// integer eigenvalue winding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationDescriptor {
    Elliptic(Rational),
    Hyperbolic(i64),
}

/// Conley-Zehnder index of the k-fold cover for a general rotation: elliptic
/// orbits give 2*floor(k*theta) + 1, hyperbolic orbits k*r.
pub fn cz_general(rot: RotationDescriptor, k: u64) -> Result<i64, GradingError> {
    debug_assert!(k >= 1);
    match rot {
        RotationDescriptor::Elliptic(theta) => {
            let kt = Rational::from_integer(k as i64) * theta;
            if kt.is_integer() {
                return Err(GradingError::DegenerateRotation { theta, k });
            }
            Ok(2 * kt.floor().to_integer() + 1)
        }
        RotationDescriptor::Hyperbolic(r) => Ok(k as i64 * r),
    }
}

/// The index-style Conley-Zehnder sum over all covers up to each multiplicity.
/// For fiber orbit sets the elliptic covers contribute plus or minus one each
/// and the hyperbolic covers vanish, so the sum collapses to m+ - m-.
pub fn cz_i_total(a: &OrbitSet) -> i64 {
    a.m_plus() as i64 - a.m_minus() as i64
}

/// Relative first Chern class of the pair: the base Euler characteristic
/// times the degree.
pub fn relative_chern(b: &Bundle, a: &OrbitSet, c: &OrbitSet) -> Result<i64, OrbitsError> {
    let d = degree(b, a, c)? as i64;
    Ok(b.chi() * d)
}

/// Relative self-intersection number of the pair: -e d^2 + 2 d N, where N is
/// the total multiplicity of the second set.
pub fn relative_self_intersection(
    b: &Bundle,
    a: &OrbitSet,
    c: &OrbitSet,
) -> Result<i64, OrbitsError> {
    let d = degree(b, a, c)? as i64;
    Ok(b.abs_e() * d * d + 2 * d * c.total() as i64)
}

/// The three summands of the index and their total.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexBreakdown {
    pub c_tau: i64,
    pub q_tau: i64,
    pub cz_total: i64,
    pub total: i64,
}

/// Total index of a homologous pair, with its Chern, self-intersection, and
/// Conley-Zehnder summands. Pairs with M < N are resolved by antisymmetry:
/// every summand of I(a,c) is the negative of the corresponding summand of
/// I(c,a).
pub fn ech_index(b: &Bundle, a: &OrbitSet, c: &OrbitSet) -> Result<IndexBreakdown, OrbitsError> {
    let class_a = homology_class(b, a);
    let class_c = homology_class(b, c);
    if class_a != class_c {
        return Err(OrbitsError::NonHomologous { class_a, class_c });
    }
    if a.total() < c.total() {
        let rev = ech_index(b, c, a)?;
        return Ok(IndexBreakdown {
            c_tau: -rev.c_tau,
            q_tau: -rev.q_tau,
            cz_total: -rev.cz_total,
            total: -rev.total,
        });
    }
    let c_tau = relative_chern(b, a, c)?;
    let q_tau = relative_self_intersection(b, a, c)?;
    let cz_total = cz_i_total(a) - cz_i_total(c);
    Ok(IndexBreakdown { c_tau, q_tau, cz_total, total: c_tau + q_tau + cz_total })
}

/// Integer shifts of the reference trivialization, one per orbit. All zeros
/// is the reference itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivializationOffset {
    pub t_minus: i64,
    pub t_hyp: Vec<i64>,
    pub t_plus: i64,
}

impl TrivializationOffset {
    pub fn zero(genus: u32) -> Self {
        TrivializationOffset { t_minus: 0, t_hyp: vec![0; 2 * genus as usize], t_plus: 0 }
    }
}

/// The index breakdown in a shifted trivialization. Shifting the reference of
/// one orbit by t moves the Chern term by (m - n) t, the self-intersection
/// term by (m^2 - n^2) t, and the Conley-Zehnder sum by -(m^2 + m) t on the
/// positive side and +(n^2 + n) t on the negative side; the total cancels.
pub fn index_with_offsets(
    b: &Bundle,
    a: &OrbitSet,
    c: &OrbitSet,
    off: &TrivializationOffset,
) -> Result<IndexBreakdown, OrbitsError> {
    assert_eq!(off.t_hyp.len(), b.hyperbolic_orbit_count(), "offset shape");
    let base = ech_index(b, a, c)?;
    let mut d_c = 0i64;
    let mut d_q = 0i64;
    let mut d_cz = 0i64;
    let mut apply = |m: u64, n: u64, t: i64| {
        let (m, n) = (m as i64, n as i64);
        d_c += (m - n) * t;
        d_q += (m * m - n * n) * t;
        d_cz += -(m * m + m) * t + (n * n + n) * t;
    };
    apply(a.m_minus(), c.m_minus(), off.t_minus);
    for i in 0..off.t_hyp.len() {
        apply(a.m_hyp()[i], c.m_hyp()[i], off.t_hyp[i]);
    }
    apply(a.m_plus(), c.m_plus(), off.t_plus);
    let shifted = IndexBreakdown {
        c_tau: base.c_tau + d_c,
        q_tau: base.q_tau + d_q,
        cz_total: base.cz_total + d_cz,
        total: base.c_tau + d_c + base.q_tau + d_q + base.cz_total + d_cz,
    };
    debug_assert_eq!(shifted.total, base.total);
    Ok(shifted)
}

/// Fredholm index of a curve with the given domain genus, asymptotic fiber
/// ends, and degree over the base:
/// -(2 - 2g - #ends) + 2 chi d + sum CZ(positive ends) - sum CZ(negative ends).
pub fn fredholm_index(
    b: &Bundle,
    dom_genus: u32,
    pos_ends: &[(OrbitKind, u64)],
    neg_ends: &[(OrbitKind, u64)],
    d: u64,
) -> i64 {
    let ends = (pos_ends.len() + neg_ends.len()) as i64;
    let chi_dom = 2 - 2 * dom_genus as i64 - ends;
    let cz_pos: i64 = pos_ends.iter().map(|&(k, m)| cz_fiber(k, m)).sum();
    let cz_neg: i64 = neg_ends.iter().map(|&(k, m)| cz_fiber(k, m)).sum();
    -chi_dom + 2 * b.chi() * d as i64 + cz_pos - cz_neg
}

/// Closed form of the absolute grading: -e d^2 + (chi + 2 Gamma + e) d + bullet,
/// where d is the degree over the base point of the class and bullet is the
/// exterior-word grading (hyperbolic letters count one, maximum letters two).
/// The base generator of the class, all multiplicity on the minimum orbit,
/// sits at grading zero.
pub fn grading_main_theorem(b: &Bundle, gamma: i64, d: u64, bullet: i64) -> i64 {
    let d = d as i64;
    b.abs_e() * d * d + (b.chi() + 2 * gamma + b.euler_class()) * d + bullet
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Parity of the index of an admissible pair: the combined hyperbolic
/// multiplicity mod 2.
pub fn index_parity(a: &OrbitSet, c: &OrbitSet) -> Parity {
    if (a.hyp_weight() + c.hyp_weight()) % 2 == 0 {
        Parity::Even
    } else {
        Parity::Odd
    }
}
