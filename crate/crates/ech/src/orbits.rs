//! Orbit sets over the critical fibers and the Morse data driving them.
//!
//! A generator is a formal product of fiber orbits: covers of the fiber over
//! the minimum (elliptic, slightly negative rotation), over the saddles
//! (positive hyperbolic), and over the maximum (elliptic, slightly positive
//! rotation). Only the multiplicity vector matters.

use std::fmt;

use thiserror::Error;

use crate::topology::Bundle;
use crate::Rational;

/// Linearized return-map type of an embedded fiber orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrbitKind {
    EllipticMinus,
    Hyperbolic,
    EllipticPlus,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrbitsError {
    #[error("orbit sets lie in different homology classes ({class_a} vs {class_c})")]
    NonHomologous { class_a: i64, class_c: i64 },
    #[error("first orbit set must dominate: totals {total_a} < {total_c}")]
    NegativeDegree { total_a: u64, total_c: u64 },
    #[error("perturbation size must be non-negative, got {eps}")]
    EpsNegative { eps: Rational },
    #[error("orbit weight 1 + eps*H = {value} is not positive")]
    OrbitWeightNotPositive { value: Rational },
    #[error("critical value {value} lies outside the admissible band (-1, 1)")]
    HValueOutOfRange { value: Rational },
    #[error("flow table shape does not match the critical point counts: {detail}")]
    FlowShapeMismatch { detail: String },
    #[error("Morse data does not have the standard critical point counts for genus {genus}")]
    MorseShapeMismatch { genus: u32 },
    #[error("Morse data needs at least one minimum and one maximum")]
    MissingExtremum,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseOrbitError {
    #[error("unrecognized orbit factor {0:?}")]
    UnknownFactor(String),
    #[error("saddle index {index} out of range for genus {genus} (valid indices 1..={max})")]
    SaddleIndexOutOfRange { index: usize, genus: u32, max: usize },
    #[error("bad multiplicity in factor {0:?}")]
    BadMultiplicity(String),
}

/// Multiplicities (m-; m1..m_2g; m+) of the fiber orbits. The hyperbolic
/// vector length is fixed by the genus of the ambient bundle; operations
/// taking two orbit sets require matching lengths.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrbitSet {
    m_minus: u64,
    m_hyp: Vec<u64>,
    m_plus: u64,
}

impl OrbitSet {
    pub fn new(m_minus: u64, m_hyp: Vec<u64>, m_plus: u64) -> Self {
        OrbitSet { m_minus, m_hyp, m_plus }
    }

    pub fn empty(genus: u32) -> Self {
        OrbitSet::new(0, vec![0; 2 * genus as usize], 0)
    }

    pub fn m_minus(&self) -> u64 {
        self.m_minus
    }

    pub fn m_plus(&self) -> u64 {
        self.m_plus
    }

    pub fn m_hyp(&self) -> &[u64] {
        &self.m_hyp
    }

    /// Total multiplicity M, the exponent sum.
    pub fn total(&self) -> u64 {
        self.m_minus + self.hyp_weight() + self.m_plus
    }

    /// Combined hyperbolic multiplicity.
    pub fn hyp_weight(&self) -> u64 {
        self.m_hyp.iter().sum()
    }

    /// A generator of the chain complex may use each hyperbolic orbit at most
    /// once.
    pub fn admissible(&self) -> bool {
        self.m_hyp.iter().all(|&m| m <= 1)
    }

    /// Parses the whitespace-separated literal grammar: factors `e-^k`,
    /// `hN^k`, `e+^k` with `^1` optional; the empty string is the empty set.
    /// Repeated factors accumulate.
    pub fn parse(s: &str, genus: u32) -> Result<Self, ParseOrbitError> {
        let mut out = OrbitSet::empty(genus);
        let max = 2 * genus as usize;
        for factor in s.split_whitespace() {
            let (base, mult) = match factor.split_once('^') {
                Some((base, m)) => {
                    let mult: u64 = m
                        .parse()
                        .map_err(|_| ParseOrbitError::BadMultiplicity(factor.to_string()))?;
                    if mult == 0 {
                        return Err(ParseOrbitError::BadMultiplicity(factor.to_string()));
                    }
                    (base, mult)
                }
                None => (factor, 1),
            };
            match base {
                "e-" => out.m_minus += mult,
                "e+" => out.m_plus += mult,
                _ if base.starts_with('h') => {
                    let index: usize = base[1..]
                        .parse()
                        .map_err(|_| ParseOrbitError::UnknownFactor(factor.to_string()))?;
                    if index == 0 || index > max {
                        return Err(ParseOrbitError::SaddleIndexOutOfRange { index, genus, max });
                    }
                    out.m_hyp[index - 1] += mult;
                }
                _ => return Err(ParseOrbitError::UnknownFactor(factor.to_string())),
            }
        }
        Ok(out)
    }
}

impl fmt::Display for OrbitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        let push = |parts: &mut Vec<String>, name: &str, mult: u64| match mult {
            0 => {}
            1 => parts.push(name.to_string()),
            m => parts.push(format!("{name}^{m}")),
        };
        push(&mut parts, "e-", self.m_minus);
        for (i, &m) in self.m_hyp.iter().enumerate() {
            push(&mut parts, &format!("h{}", i + 1), m);
        }
        push(&mut parts, "e+", self.m_plus);
        f.write_str(&parts.join(" "))
    }
}

/// An exact multiple of pi, the currency of the action functional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PiMultiple {
    coeff: Rational,
}

impl PiMultiple {
    pub fn coefficient(&self) -> Rational {
        self.coeff
    }
}

impl fmt::Display for PiMultiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff == Rational::from_integer(0) {
            f.write_str("0")
        } else {
            write!(f, "{} pi", self.coeff)
        }
    }
}

/// Mod-2 counts of downward gradient flow lines between consecutive critical
/// indices. Row/column order follows the critical point lists of the owning
/// `MorseData`. Entries are stored reduced mod 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowCounts {
    pub saddle_to_min: Vec<Vec<u8>>,
    pub max_to_saddle: Vec<Vec<u8>>,
}

/// Critical values of a Morse function on the base, listed by Morse index,
/// with optional flow-line counts. The standard shape for genus g is one
/// minimum, 2g saddles, one maximum; that shape with no odd flow counts is
/// the perfect case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorseData {
    minima: Vec<Rational>,
    saddles: Vec<Rational>,
    maxima: Vec<Rational>,
    flows: Option<FlowCounts>,
}

impl MorseData {
    pub fn new(
        minima: Vec<Rational>,
        saddles: Vec<Rational>,
        maxima: Vec<Rational>,
        flows: Option<FlowCounts>,
    ) -> Result<Self, OrbitsError> {
        if minima.is_empty() || maxima.is_empty() {
            return Err(OrbitsError::MissingExtremum);
        }
        let one = Rational::from_integer(1);
        for &v in minima.iter().chain(&saddles).chain(&maxima) {
            if v <= -one || v >= one {
                return Err(OrbitsError::HValueOutOfRange { value: v });
            }
        }
        let flows = match flows {
            None => None,
            Some(mut fc) => {
                let s2m_ok = fc.saddle_to_min.len() == saddles.len()
                    && fc.saddle_to_min.iter().all(|row| row.len() == minima.len());
                let m2s_ok = fc.max_to_saddle.len() == maxima.len()
                    && fc.max_to_saddle.iter().all(|row| row.len() == saddles.len());
                if !s2m_ok || !m2s_ok {
                    return Err(OrbitsError::FlowShapeMismatch {
                        detail: format!(
                            "expected {}x{} and {}x{}",
                            saddles.len(),
                            minima.len(),
                            maxima.len(),
                            saddles.len()
                        ),
                    });
                }
                for row in fc.saddle_to_min.iter_mut().chain(fc.max_to_saddle.iter_mut()) {
                    for v in row {
                        *v &= 1;
                    }
                }
                Some(fc)
            }
        };
        Ok(MorseData { minima, saddles, maxima, flows })
    }

    /// The perfect Morse function with critical values -1/2, 0, 1/2.
    pub fn perfect(genus: u32) -> Self {
        let zero = Rational::from_integer(0);
        MorseData {
            minima: vec![Rational::new(-1, 2)],
            saddles: vec![zero; 2 * genus as usize],
            maxima: vec![Rational::new(1, 2)],
            flows: None,
        }
    }

    pub fn minima(&self) -> &[Rational] {
        &self.minima
    }

    pub fn saddles(&self) -> &[Rational] {
        &self.saddles
    }

    pub fn maxima(&self) -> &[Rational] {
        &self.maxima
    }

    pub fn flows(&self) -> Option<&FlowCounts> {
        self.flows.as_ref()
    }

    /// One minimum, 2g saddles, one maximum.
    pub fn is_standard_shape_for(&self, genus: u32) -> bool {
        self.minima.len() == 1
            && self.maxima.len() == 1
            && self.saddles.len() == 2 * genus as usize
    }

    /// Standard shape and no odd flow count anywhere.
    pub fn is_perfect_for(&self, genus: u32) -> bool {
        self.is_standard_shape_for(genus)
            && match &self.flows {
                None => true,
                Some(fc) => fc
                    .saddle_to_min
                    .iter()
                    .chain(&fc.max_to_saddle)
                    .all(|row| row.iter().all(|&v| v == 0)),
            }
    }

    /// Whether the recorded flow counts compose to zero mod 2 from every
    /// maximum to every minimum. Absent flow data counts as zero.
    pub fn differential_squares_to_zero(&self) -> bool {
        let Some(fc) = &self.flows else { return true };
        for max_row in &fc.max_to_saddle {
            for j in 0..self.minima.len() {
                let composite: u8 = max_row
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| a & fc.saddle_to_min[i][j])
                    .fold(0, |acc, v| acc ^ v);
                if composite != 0 {
                    return false;
                }
            }
        }
        true
    }
}

/// Class of the orbit set in the fiber torsion subgroup: total multiplicity
/// mod -e.
pub fn homology_class(b: &Bundle, a: &OrbitSet) -> i64 {
    debug_assert_eq!(a.m_hyp().len(), b.hyperbolic_orbit_count());
    (a.total() % b.abs_e() as u64) as i64
}

/// Symplectic action of an orbit set: each cover of the fiber over a critical
/// point p contributes the perturbed fiber length 2pi(1 + eps H(p)). Returned
/// as an exact multiple of pi.
///
/// `eps = 0` evaluates the unperturbed form, where every cover contributes a
/// full fiber length.
pub fn action(
    b: &Bundle,
    md: &MorseData,
    eps: Rational,
    a: &OrbitSet,
) -> Result<PiMultiple, OrbitsError> {
    if !md.is_standard_shape_for(b.genus()) {
        return Err(OrbitsError::MorseShapeMismatch { genus: b.genus() });
    }
    if eps < Rational::from_integer(0) {
        return Err(OrbitsError::EpsNegative { eps });
    }
    let one = Rational::from_integer(1);
    let weight = |h: Rational| -> Result<Rational, OrbitsError> {
        let w = one + eps * h;
        if w <= Rational::from_integer(0) {
            return Err(OrbitsError::OrbitWeightNotPositive { value: w });
        }
        Ok(w)
    };
    let w_minus = weight(md.minima()[0])?;
    let w_plus = weight(md.maxima()[0])?;
    let mut coeff = Rational::from_integer(2 * a.m_minus() as i64) * w_minus
        + Rational::from_integer(2 * a.m_plus() as i64) * w_plus;
    for (i, &m) in a.m_hyp().iter().enumerate() {
        let w = weight(md.saddles()[i])?;
        coeff = coeff + Rational::from_integer(2 * m as i64) * w;
    }
    Ok(PiMultiple { coeff })
}

/// Degree (M - N)/(-e) of a dominating homologous pair; the division is exact
/// because equal classes force M = N mod -e.
pub fn degree(b: &Bundle, a: &OrbitSet, c: &OrbitSet) -> Result<u64, OrbitsError> {
    let class_a = homology_class(b, a);
    let class_c = homology_class(b, c);
    if class_a != class_c {
        return Err(OrbitsError::NonHomologous { class_a, class_c });
    }
    let (m, n) = (a.total(), c.total());
    if m < n {
        return Err(OrbitsError::NegativeDegree { total_a: m, total_c: n });
    }
    let diff = m - n;
    debug_assert_eq!(diff % b.abs_e() as u64, 0);
    Ok(diff / b.abs_e() as u64)
}

/// All admissible orbit sets in the class `gamma` with total multiplicity at
/// most `max_total`.
///
/// Order: total multiplicity ascending; within a stratum, minimum-orbit
/// multiplicity descending, then the hyperbolic pattern in descending
/// lexicographic order (the maximum-orbit multiplicity is then determined).
pub fn enumerate_generators(b: &Bundle, gamma: i64, max_total: u64) -> Vec<OrbitSet> {
    assert!(
        0 <= gamma && gamma < b.abs_e(),
        "homology class {gamma} outside [0, {})",
        b.abs_e()
    );
    let slots = b.hyperbolic_orbit_count();
    let mut out = Vec::new();
    let mut total = gamma as u64;
    while total <= max_total {
        for m_minus in (0..=total).rev() {
            let budget = total - m_minus;
            let mut pattern = vec![0u64; slots];
            fill_hyp(&mut out, &mut pattern, 0, budget, m_minus);
        }
        total += b.abs_e() as u64;
    }
    out
}

/// Emits every 0/1 pattern over `pattern[slot..]` with sum at most `budget`,
/// ones-first so the output is descending lexicographic; the leftover budget
/// becomes the maximum-orbit multiplicity.
fn fill_hyp(out: &mut Vec<OrbitSet>, pattern: &mut Vec<u64>, slot: usize, budget: u64, m_minus: u64) {
    if slot == pattern.len() {
        out.push(OrbitSet::new(m_minus, pattern.clone(), budget));
        return;
    }
    if budget >= 1 {
        pattern[slot] = 1;
        fill_hyp(out, pattern, slot + 1, budget - 1, m_minus);
    }
    pattern[slot] = 0;
    fill_hyp(out, pattern, slot + 1, budget, m_minus);
}
