//! Covers of fiber cylinders between orbit sets of equal degree: their
//! Fredholm indices, the classification of the index-0 and index-1 cases,
//! braid writhe and linking arithmetic at their ends, and the singularity
//! counts showing the branched cases cannot be holomorphic.

use thiserror::Error;

use crate::grading::{ech_index, fredholm_index};
use crate::orbits::{OrbitKind, OrbitSet};
use crate::topology::Bundle;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConnectorError {
    #[error("cover data is inconsistent: {detail}")]
    InconsistentCover { detail: String },
    #[error("this braid family does not admit {got} ends")]
    WrongEndCount { got: usize },
    #[error("a branched cover needs at least two ends on the split side, got {got}")]
    TooFewEnds { got: usize },
    #[error("hypotheses violated: {detail}")]
    PreconditionViolated { detail: String },
}

/// One connected cover of the cylinder over a fiber orbit: base orbit kind,
/// domain genus, end multiplicities on both sides, and total ramification.
/// The ramification is pinned by the topology, so it is stored only as the
/// Riemann-Hurwitz total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverData {
    base: OrbitKind,
    dom_genus: u32,
    pos_mults: Vec<u64>,
    neg_mults: Vec<u64>,
    ram_total: u64,
}

impl CoverData {
    pub fn new(
        base: OrbitKind,
        dom_genus: u32,
        pos_mults: Vec<u64>,
        neg_mults: Vec<u64>,
    ) -> Result<Self, ConnectorError> {
        assert!(
            !pos_mults.is_empty() && !neg_mults.is_empty(),
            "a cover of a cylinder meets both ends"
        );
        assert!(
            pos_mults.iter().chain(&neg_mults).all(|&m| m >= 1),
            "end multiplicities are positive"
        );
        let up: u64 = pos_mults.iter().sum();
        let down: u64 = neg_mults.iter().sum();
        if up != down {
            return Err(ConnectorError::InconsistentCover {
                detail: format!("positive multiplicity {up} differs from negative {down}"),
            });
        }
        let ends = (pos_mults.len() + neg_mults.len()) as u64;
        let ram_total = 2 * dom_genus as u64 + ends - 2;
        Ok(CoverData { base, dom_genus, pos_mults, neg_mults, ram_total })
    }

    /// As `new`, but cross-checking an explicitly supplied ramification total
    /// against the one the topology forces.
    pub fn with_ramification(
        base: OrbitKind,
        dom_genus: u32,
        pos_mults: Vec<u64>,
        neg_mults: Vec<u64>,
        ram_total: u64,
    ) -> Result<Self, ConnectorError> {
        let cover = CoverData::new(base, dom_genus, pos_mults, neg_mults)?;
        if cover.ram_total != ram_total {
            return Err(ConnectorError::InconsistentCover {
                detail: format!(
                    "ramification total {ram_total} contradicts the {} forced by genus and ends",
                    cover.ram_total
                ),
            });
        }
        Ok(cover)
    }

    pub fn base(&self) -> OrbitKind {
        self.base
    }

    pub fn dom_genus(&self) -> u32 {
        self.dom_genus
    }

    pub fn pos_mults(&self) -> &[u64] {
        &self.pos_mults
    }

    pub fn neg_mults(&self) -> &[u64] {
        &self.neg_mults
    }

    pub fn ram_total(&self) -> u64 {
        self.ram_total
    }

    /// Covering degree of the underlying cylinder.
    pub fn degree(&self) -> u64 {
        self.pos_mults.iter().sum()
    }
}

/// Euler characteristic of a k-fold cover with the given total ramification.
pub fn riemann_hurwitz_chi(k: u64, base_chi: i64, ram_total: u64) -> i64 {
    debug_assert!(k >= 1);
    k as i64 * base_chi - ram_total as i64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectorCase {
    UnbranchedCylinder,
    SinglePositiveEnd,
    SingleNegativeEnd,
    HyperbolicBranched,
    Invalid,
}

impl ConnectorCase {
    pub fn label(self) -> &'static str {
        match self {
            ConnectorCase::UnbranchedCylinder => "i.a",
            ConnectorCase::SinglePositiveEnd => "i.b",
            ConnectorCase::SingleNegativeEnd => "i.c",
            ConnectorCase::HyperbolicBranched => "ii",
            ConnectorCase::Invalid => "invalid",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentReport {
    pub index: i64,
    pub case: ConnectorCase,
}

/// Classification of a disjoint union of cylinder covers. The ECH index of
/// such a union always vanishes; `valid` records whether every component
/// falls into a permitted case and the total Fredholm index is at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectorReport {
    pub components: Vec<ComponentReport>,
    pub total_index: i64,
    pub ech_index: i64,
    pub valid: bool,
}

pub fn classify_connector(b: &Bundle, components: &[CoverData]) -> ConnectorReport {
    let reports: Vec<ComponentReport> = components
        .iter()
        .map(|c| {
            let pos: Vec<(OrbitKind, u64)> = c.pos_mults.iter().map(|&m| (c.base, m)).collect();
            let neg: Vec<(OrbitKind, u64)> = c.neg_mults.iter().map(|&m| (c.base, m)).collect();
            let index = fredholm_index(b, c.dom_genus, &pos, &neg, 0);
            let case = match index {
                0 if pos.len() == 1 && neg.len() == 1 => ConnectorCase::UnbranchedCylinder,
                0 if c.base == OrbitKind::EllipticPlus && pos.len() == 1 => {
                    ConnectorCase::SinglePositiveEnd
                }
                0 if c.base == OrbitKind::EllipticMinus && neg.len() == 1 => {
                    ConnectorCase::SingleNegativeEnd
                }
                1 if c.base == OrbitKind::Hyperbolic
                    && c.dom_genus == 0
                    && matches!((pos.len(), neg.len()), (1, 2) | (2, 1)) =>
                {
                    ConnectorCase::HyperbolicBranched
                }
                _ => ConnectorCase::Invalid,
            };
            ComponentReport { index, case }
        })
        .collect();
    let total_index = reports.iter().map(|r| r.index).sum();
    let valid =
        reports.iter().all(|r| r.case != ConnectorCase::Invalid) && total_index <= 1;
    ConnectorReport { components: reports, total_index, ech_index: 0, valid }
}

/// Upper bound on the writhe of a multiplicity-d end in terms of half its
/// Conley-Zehnder index: (d-1) floor(cz/2) - gcd(d, floor(cz/2)) + 1.
pub fn writhe_bound_positive(d: u64, cz_d: i64) -> i64 {
    debug_assert!(d >= 1);
    let half = cz_d.div_euclid(2);
    (d as i64 - 1) * half - num::integer::gcd(d as i64, half.abs()) + 1
}

/// The four braid families arising at ends of cylinder covers over elliptic
/// fiber orbits: a lone top end or a fan of bottom ends over e+, and the
/// mirrored pair over e-.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BraidEnds {
    EPlusPositiveEnd,
    EPlusNegativeEnds,
    EMinusPositiveEnds,
    EMinusNegativeEnd,
}

/// Writhes of the individual end braids, their pairwise linking numbers as
/// (i, j, linking), and the writhe of the union braid, assembled as
/// sum of writhes plus twice the sum of linkings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WritheData {
    pub end_writhes: Vec<i64>,
    pub pair_linkings: Vec<(usize, usize, i64)>,
    pub total: i64,
}

pub fn end_writhe_linking(kind: BraidEnds, mults: &[u64]) -> Result<WritheData, ConnectorError> {
    assert!(mults.iter().all(|&m| m >= 1), "end multiplicities are positive");
    match kind {
        BraidEnds::EPlusPositiveEnd | BraidEnds::EMinusNegativeEnd => {
            if mults.len() != 1 {
                return Err(ConnectorError::WrongEndCount { got: mults.len() });
            }
            let d = mults[0] as i64;
            let w = if kind == BraidEnds::EPlusPositiveEnd { 1 - d } else { d - 1 };
            Ok(WritheData { end_writhes: vec![w], pair_linkings: Vec::new(), total: w })
        }
        BraidEnds::EPlusNegativeEnds | BraidEnds::EMinusPositiveEnds => {
            if mults.is_empty() {
                return Err(ConnectorError::WrongEndCount { got: 0 });
            }
            let below_plus = kind == BraidEnds::EPlusNegativeEnds;
            let end_writhes: Vec<i64> = mults
                .iter()
                .map(|&d| if below_plus { d as i64 - 1 } else { 1 - d as i64 })
                .collect();
            let mut pair_linkings = Vec::new();
            for i in 0..mults.len() {
                for j in i + 1..mults.len() {
                    let l = mults[i].min(mults[j]) as i64;
                    pair_linkings.push((i, j, if below_plus { l } else { -l }));
                }
            }
            let total = end_writhes.iter().sum::<i64>()
                + 2 * pair_linkings.iter().map(|&(_, _, l)| l).sum::<i64>();
            Ok(WritheData { end_writhes, pair_linkings, total })
        }
    }
}

/// The two branched configurations whose singularity count the adjunction
/// identity evaluates: a single top end over e+ splitting into several bottom
/// ends, or the reflection over e-.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaCase {
    OverEPlus,
    OverEMinus,
}

/// Twice the singularity count delta of the branched cover, assembled as
/// chi + w(top braid) - w(bottom braid). The result equals
/// 2 - 2d - sum over ordered pairs of min(d_i, d_j) and is at most -2 for
/// every admissible input, while positivity of intersections would force it
/// to be non-negative; that clash is what excludes these covers.
pub fn connector_delta(case: DeltaCase, end_mults: &[u64]) -> Result<i64, ConnectorError> {
    if end_mults.len() < 2 {
        return Err(ConnectorError::TooFewEnds { got: end_mults.len() });
    }
    let d: u64 = end_mults.iter().sum();
    let chi = 1 - end_mults.len() as i64;
    let twice_delta = match case {
        DeltaCase::OverEPlus => {
            let top = end_writhe_linking(BraidEnds::EPlusPositiveEnd, &[d])?.total;
            let bottom = end_writhe_linking(BraidEnds::EPlusNegativeEnds, end_mults)?.total;
            chi + top - bottom
        }
        DeltaCase::OverEMinus => {
            let top = end_writhe_linking(BraidEnds::EMinusPositiveEnds, end_mults)?.total;
            let bottom = end_writhe_linking(BraidEnds::EMinusNegativeEnd, &[d])?.total;
            chi + top - bottom
        }
    };
    debug_assert!(twice_delta <= -2);
    Ok(twice_delta)
}

/// For an index-1 pair of degree 0, decides whether the index arithmetic
/// forces any curve between them to be a union of a flow cylinder and trivial
/// cylinders: that happens exactly when the total multiplicity is 1.
pub fn degree_zero_cylinder_check(
    b: &Bundle,
    a: &OrbitSet,
    c: &OrbitSet,
) -> Result<bool, ConnectorError> {
    let idx = ech_index(b, a, c)
        .map_err(|e| ConnectorError::PreconditionViolated { detail: e.to_string() })?;
    if idx.total != 1 {
        return Err(ConnectorError::PreconditionViolated {
            detail: format!("index {} is not 1", idx.total),
        });
    }
    if a.total() != c.total() {
        return Err(ConnectorError::PreconditionViolated {
            detail: format!(
                "total multiplicities {} and {} differ, so the degree is nonzero",
                a.total(),
                c.total()
            ),
        });
    }
    Ok(a.total() == 1)
}
