//! The mod 2 chain complex on admissible orbit sets, its homology, and the
//! graded comparisons: the exterior-algebra model, the stability plateau, and
//! the lattice-point ladder over a sphere base.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use thiserror::Error;

use crate::grading::{ech_index, grading_main_theorem};
use crate::orbits::{enumerate_generators, MorseData, OrbitSet};
use crate::topology::Bundle;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("homology class {gamma} outside [0, {order})")]
    GammaOutOfRange { gamma: i64, order: i64 },
    #[error("the boundary map does not square to zero")]
    NotAComplex,
    #[error("window start {lo} lies below the stability threshold {threshold}")]
    WindowTooLow { lo: i64, threshold: i64 },
    #[error("the lattice bijection needs a sphere base, got genus {genus}")]
    NotGenusZero { genus: u32 },
}

/// Dimensions of a graded vector space over F_2, keyed by grading. Only
/// nonzero entries are stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedDimensions(BTreeMap<i64, u64>);

impl GradedDimensions {
    pub fn dim(&self, v: i64) -> u64 {
        self.0.get(&v).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Pairs (grading, dimension) in increasing grading order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.0.iter().map(|(&v, &d)| (v, d))
    }

    fn add(&mut self, v: i64, count: u64) {
        if count > 0 {
            *self.0.entry(v).or_insert(0) += count;
        }
    }
}

impl FromIterator<(i64, u64)> for GradedDimensions {
    fn from_iter<T: IntoIterator<Item = (i64, u64)>>(iter: T) -> Self {
        let mut out = GradedDimensions::default();
        for (v, count) in iter {
            out.add(v, count);
        }
        out
    }
}

/// A finitely generated graded complex over F_2 with a degree -1 boundary.
/// Column `j` lists the positions hit by the boundary of generator `j`, in
/// increasing order.
#[derive(Debug, Clone)]
pub struct ChainComplexF2<G = OrbitSet> {
    generators: Vec<G>,
    gradings: Vec<i64>,
    columns: Vec<Vec<u32>>,
    experimental: bool,
}

impl<G> ChainComplexF2<G> {
    pub fn generators(&self) -> &[G] {
        &self.generators
    }

    pub fn gradings(&self) -> &[i64] {
        &self.gradings
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn boundary_column(&self, j: usize) -> &[u32] {
        &self.columns[j]
    }

    /// True when the boundary came from flow data with no known invariance
    /// argument behind it.
    pub fn is_experimental(&self) -> bool {
        self.experimental
    }

    pub fn boundary_is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn boundary_squares_to_zero(&self) -> bool {
        self.columns.iter().all(|col| {
            let mut parity: HashMap<u32, bool> = HashMap::new();
            for &i in col {
                for &r in &self.columns[i as usize] {
                    *parity.entry(r).or_insert(false) ^= true;
                }
            }
            parity.values().all(|&odd| !odd)
        })
    }

    /// Generator counts per grading, before taking homology.
    pub fn dims_by_grading(&self) -> GradedDimensions {
        self.gradings.iter().map(|&v| (v, 1)).collect()
    }

    /// Rank of the boundary restricted to each source grading, by column
    /// reduction with bottom-most pivots.
    fn boundary_ranks(&self) -> BTreeMap<i64, u64> {
        let mut groups: BTreeMap<i64, Vec<Vec<u32>>> = BTreeMap::new();
        for (j, col) in self.columns.iter().enumerate() {
            if !col.is_empty() {
                groups.entry(self.gradings[j]).or_default().push(col.clone());
            }
        }
        let mut ranks = BTreeMap::new();
        for (v, cols) in groups {
            let mut pivots: HashMap<u32, Vec<u32>> = HashMap::new();
            let mut rank = 0u64;
            for mut col in cols {
                while let Some(&top) = col.last() {
                    match pivots.get(&top) {
                        Some(other) => col = xor_sorted(&col, other),
                        None => {
                            pivots.insert(top, col);
                            rank += 1;
                            break;
                        }
                    }
                }
            }
            ranks.insert(v, rank);
        }
        ranks
    }
}

/// Symmetric difference of two strictly increasing index lists.
fn xor_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Homology dimensions by grading. Fails when the boundary does not square
/// to zero, which flow data violating the even-composition condition will.
pub fn homology<G>(cx: &ChainComplexF2<G>) -> Result<GradedDimensions, ComplexError> {
    if !cx.boundary_squares_to_zero() {
        return Err(ComplexError::NotAComplex);
    }
    let ranks = cx.boundary_ranks();
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    for &v in cx.gradings() {
        *counts.entry(v).or_insert(0) += 1;
    }
    Ok(counts
        .iter()
        .map(|(&v, &n)| {
            let cut = ranks.get(&v).copied().unwrap_or(0) + ranks.get(&(v + 1)).copied().unwrap_or(0);
            (v, n - cut)
        })
        .collect())
}

fn check_gamma(b: &Bundle, gamma: i64) -> Result<(), ComplexError> {
    if 0 <= gamma && gamma < b.abs_e() {
        Ok(())
    } else {
        Err(ComplexError::GammaOutOfRange { gamma, order: b.abs_e() })
    }
}

fn assemble<G: Clone + Eq + Hash>(
    generators: Vec<G>,
    gradings: Vec<i64>,
    experimental: bool,
    boundary: impl Fn(&G) -> Vec<G>,
) -> ChainComplexF2<G> {
    let index: HashMap<&G, usize> = generators.iter().enumerate().map(|(j, g)| (g, j)).collect();
    let columns: Vec<Vec<u32>> = generators
        .iter()
        .map(|g| {
            let mut col: Vec<u32> = boundary(g)
                .iter()
                .map(|t| {
                    let i = *index
                        .get(t)
                        .expect("substitution images stay inside the enumerated window");
                    u32::try_from(i).expect("generator index fits in u32")
                })
                .collect();
            col.sort_unstable();
            col
        })
        .collect();
    ChainComplexF2 { generators, gradings, columns, experimental }
}

/// The complex spanned by admissible orbit sets in class `gamma` with total
/// multiplicity at most `max_total`. The boundary substitutes one saddle
/// letter by the minimum when the downward flow count is odd, and the maximum
/// by one saddle letter when the upward count is odd and the letter is free.
///
/// Requires Morse data in the one-minimum, one-maximum shape matching the
/// bundle genus; build_fiber_complex handles arbitrary critical point lists.
pub fn build_complex(
    b: &Bundle,
    md: &MorseData,
    gamma: i64,
    max_total: u64,
) -> Result<ChainComplexF2<OrbitSet>, ComplexError> {
    assert!(
        md.is_standard_shape_for(b.genus()),
        "orbit-set complexes need one minimum, 2g saddles, and one maximum"
    );
    check_gamma(b, gamma)?;
    let generators = enumerate_generators(b, gamma, max_total);
    let order = b.abs_e() as u64;
    let gradings: Vec<i64> = generators
        .iter()
        .map(|a| {
            let d = (a.total() - gamma as u64) / order;
            grading_main_theorem(b, gamma, d, (a.hyp_weight() + 2 * a.m_plus()) as i64)
        })
        .collect();
    let flows = md.flows().cloned();
    let experimental = !md.is_perfect_for(b.genus());
    let cx = assemble(generators, gradings, experimental, move |a| {
        let Some(fc) = &flows else { return Vec::new() };
        let mut out = Vec::new();
        for (i, &m) in a.m_hyp().iter().enumerate() {
            if m == 1 && fc.saddle_to_min[i][0] & 1 == 1 {
                let mut hyp = a.m_hyp().to_vec();
                hyp[i] = 0;
                out.push(OrbitSet::new(a.m_minus() + 1, hyp, a.m_plus()));
            }
        }
        if a.m_plus() >= 1 {
            for (i, &m) in a.m_hyp().iter().enumerate() {
                if m == 0 && fc.max_to_saddle[0][i] & 1 == 1 {
                    let mut hyp = a.m_hyp().to_vec();
                    hyp[i] = 1;
                    out.push(OrbitSet::new(a.m_minus(), hyp, a.m_plus() - 1));
                }
            }
        }
        out
    });
    Ok(cx)
}

/// A word in the fiber orbits over an arbitrary critical point list: one
/// multiplicity per minimum, saddle, and maximum, with saddle letters at most
/// 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiberGenerator {
    pub minima: Vec<u64>,
    pub saddles: Vec<u64>,
    pub maxima: Vec<u64>,
}

impl FiberGenerator {
    pub fn total(&self) -> u64 {
        self.minima.iter().chain(&self.saddles).chain(&self.maxima).sum()
    }

    /// Grading offset above the stratum floor: one per saddle letter, two
    /// per maximum letter.
    pub fn bullet(&self) -> u64 {
        self.saddles.iter().sum::<u64>() + 2 * self.maxima.iter().sum::<u64>()
    }
}

/// Same substitution boundary as build_complex, but over the orbits of any
/// admissible Morse data. Critical point lists away from the one-minimum,
/// one-maximum shape have no invariance argument, so the result is marked
/// experimental.
pub fn build_fiber_complex(
    b: &Bundle,
    md: &MorseData,
    gamma: i64,
    max_total: u64,
) -> Result<ChainComplexF2<FiberGenerator>, ComplexError> {
    check_gamma(b, gamma)?;
    let (n_min, n_sad, n_max) = (md.minima().len(), md.saddles().len(), md.maxima().len());
    let order = b.abs_e() as u64;
    let mut generators = Vec::new();
    let mut total = gamma as u64;
    while total <= max_total {
        let mut counts = vec![0u64; n_min + n_sad + n_max];
        fill_word(&mut generators, &mut counts, 0, total, n_min, n_sad);
        total += order;
    }
    let gradings: Vec<i64> = generators
        .iter()
        .map(|w| {
            let d = (w.total() - gamma as u64) / order;
            grading_main_theorem(b, gamma, d, w.bullet() as i64)
        })
        .collect();
    let flows = md.flows().cloned();
    let experimental = !md.is_perfect_for(b.genus());
    let cx = assemble(generators, gradings, experimental, move |w| {
        let Some(fc) = &flows else { return Vec::new() };
        let mut out = Vec::new();
        for i in 0..w.saddles.len() {
            if w.saddles[i] == 0 {
                continue;
            }
            for j in 0..w.minima.len() {
                if fc.saddle_to_min[i][j] & 1 == 1 {
                    let mut t = w.clone();
                    t.saddles[i] = 0;
                    t.minima[j] += 1;
                    out.push(t);
                }
            }
        }
        for k in 0..w.maxima.len() {
            if w.maxima[k] == 0 {
                continue;
            }
            for i in 0..w.saddles.len() {
                if w.saddles[i] == 0 && fc.max_to_saddle[k][i] & 1 == 1 {
                    let mut t = w.clone();
                    t.maxima[k] -= 1;
                    t.saddles[i] = 1;
                    out.push(t);
                }
            }
        }
        out
    });
    Ok(cx)
}

/// Emits every admissible count vector summing to exactly `remaining` over
/// the slots from `slot` on. Slots in [n_min, n_min + n_sad) are saddles and
/// carry at most one. The final slot is a maximum, so it can absorb any
/// remainder.
fn fill_word(
    out: &mut Vec<FiberGenerator>,
    counts: &mut Vec<u64>,
    slot: usize,
    remaining: u64,
    n_min: usize,
    n_sad: usize,
) {
    if slot + 1 == counts.len() {
        counts[slot] = remaining;
        out.push(FiberGenerator {
            minima: counts[..n_min].to_vec(),
            saddles: counts[n_min..n_min + n_sad].to_vec(),
            maxima: counts[n_min + n_sad..].to_vec(),
        });
        counts[slot] = 0;
        return;
    }
    let cap =
        if (n_min..n_min + n_sad).contains(&slot) { remaining.min(1) } else { remaining };
    for c in (0..=cap).rev() {
        counts[slot] = c;
        fill_word(out, counts, slot + 1, remaining - c, n_min, n_sad);
    }
    counts[slot] = 0;
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Dimensions of the degree-shifted exterior algebra model: stratum `d`
/// contributes, at `bullet` above its floor, one generator for each way to
/// pick `k` of the 2g odd letters with `k <= bullet`, `k <= 2 M_d - bullet`,
/// and `k = bullet mod 2`.
pub fn exterior_algebra_dimensions(b: &Bundle, gamma: i64, max_d: u64) -> GradedDimensions {
    assert!(
        0 <= gamma && gamma < b.abs_e(),
        "homology class {gamma} outside [0, {})",
        b.abs_e()
    );
    let letters = 2 * b.genus() as u64;
    let mut dims = GradedDimensions::default();
    for d in 0..=max_d {
        let m = gamma as u64 + b.abs_e() as u64 * d;
        for bullet in 0..=2 * m {
            let count: u64 = (0..=letters.min(bullet).min(2 * m - bullet))
                .filter(|k| k % 2 == bullet % 2)
                .map(|k| binomial(letters, k))
                .sum();
            dims.add(grading_main_theorem(b, gamma, d, bullet as i64), count);
        }
    }
    dims
}

/// Least grading of an empty-bullet generator over the strata excluded by
/// the multiplicity cutoff; every grading strictly below it is unaffected by
/// truncation. The floor function is an upward parabola in the stratum
/// index, so the minimum sits at the cutoff or at the integer points around
/// the vertex.
pub(crate) fn certified_grading_bound(b: &Bundle, gamma: i64, max_total: u64) -> i64 {
    let order = b.abs_e() as u64;
    let d_start: u64 =
        if max_total < gamma as u64 { 0 } else { (max_total - gamma as u64) / order + 1 };
    let f = |d: u64| grading_main_theorem(b, gamma, d, 0);
    let lin = b.chi() + 2 * gamma + b.euler_class();
    let vertex_floor = (-lin).div_euclid(2 * b.abs_e());
    let mut best = f(d_start);
    for cand in [vertex_floor, vertex_floor + 1] {
        if cand >= 0 {
            best = best.min(f((cand as u64).max(d_start)));
        }
    }
    best
}

#[derive(Debug, Clone)]
pub struct MainTheoremReport {
    pub computed: GradedDimensions,
    pub expected: GradedDimensions,
    /// Gradings strictly below this bound are unaffected by the multiplicity
    /// cutoff, and only those are compared.
    pub certified_below: i64,
    /// First disagreement as (grading, computed, expected), if any.
    pub first_mismatch: Option<(i64, u64, u64)>,
    pub pass: bool,
}

/// Homology of the flow-free complex against the exterior algebra model, on
/// every grading the truncation certifies.
pub fn verify_main_theorem(
    b: &Bundle,
    gamma: i64,
    max_total: u64,
) -> Result<MainTheoremReport, ComplexError> {
    let cx = build_complex(b, &MorseData::perfect(b.genus()), gamma, max_total)?;
    let computed = homology(&cx)?;
    let certified_below = certified_grading_bound(b, gamma, max_total);
    let order = b.abs_e() as u64;
    let expected = if max_total < gamma as u64 {
        GradedDimensions::default()
    } else {
        exterior_algebra_dimensions(b, gamma, (max_total - gamma as u64) / order)
    };
    let lo = computed
        .iter()
        .map(|(v, _)| v)
        .chain(expected.iter().map(|(v, _)| v))
        .min()
        .unwrap_or(certified_below);
    let first_mismatch = (lo..certified_below)
        .find(|&v| computed.dim(v) != expected.dim(v))
        .map(|v| (v, computed.dim(v), expected.dim(v)));
    Ok(MainTheoremReport {
        computed,
        expected,
        certified_below,
        first_mismatch: first_mismatch.clone(),
        pass: first_mismatch.is_none(),
    })
}

/// Least grading from which the homology dimension is constant in the
/// grading: 1 + max(t_d over strata with M_d < 2g, 2g - 2), with t_d the top
/// grading of stratum d. Strata with total multiplicity at least 2g realize
/// every exterior word count, so only the low strata and the word-length
/// ramp can break the plateau.
pub fn stability_threshold(b: &Bundle, gamma: i64) -> Result<i64, ComplexError> {
    assert!(b.genus() >= 1, "the stable range needs a positive genus base");
    check_gamma(b, gamma)?;
    let order = b.abs_e() as u64;
    let two_g = 2 * b.genus() as u64;
    let top = |d: u64| {
        grading_main_theorem(b, gamma, d, 0) + 2 * (gamma as u64 + order * d) as i64
    };
    let mut threshold = 2 * b.genus() as i64 - 2;
    let mut d = 0u64;
    while gamma as u64 + order * d < two_g {
        threshold = threshold.max(top(d));
        d += 1;
    }
    Ok(threshold + 1)
}

/// Homology dimensions over a grading window in the stable range, where the
/// dimension no longer depends on the grading. Windows reaching below
/// stability_threshold are refused.
pub fn stability_census(
    b: &Bundle,
    gamma: i64,
    window: (i64, i64),
) -> Result<GradedDimensions, ComplexError> {
    let threshold = stability_threshold(b, gamma)?;
    let order = b.abs_e() as u64;
    let (lo, hi) = window;
    if lo < threshold {
        return Err(ComplexError::WindowTooLow { lo, threshold });
    }

    // Enumerate every stratum whose floor can reach the window; past the
    // parabola vertex the floors only climb.
    let f = |d: u64| grading_main_theorem(b, gamma, d, 0);
    let mut d_stop = 0u64;
    while !(f(d_stop) > hi && f(d_stop + 1) >= f(d_stop)) {
        d_stop += 1;
    }
    let max_total = gamma as u64 + order * d_stop;
    let cx = build_complex(b, &MorseData::perfect(b.genus()), gamma, max_total)?;
    let h = homology(&cx)?;
    Ok(h.iter().filter(|&(v, _)| lo <= v && v <= hi).collect())
}

/// One orbit set over the sphere base together with its lattice point and
/// triangle data.
#[derive(Debug, Clone, PartialEq)]
pub struct LensRow {
    pub orbit: OrbitSet,
    /// Lattice coordinates (m_minus, (m_minus - m_plus)/(-e)).
    pub lattice: (i64, Rational),
    /// Boundary height 2M/(-e) of the triangle cut off at the orbit's total
    /// multiplicity.
    pub height: Rational,
    /// Twice the triangle area, M^2/(-e).
    pub twice_area: Rational,
    pub c_tau: i64,
    pub q_tau: i64,
    pub cz: i64,
    pub index: i64,
}

#[derive(Debug, Clone)]
pub struct LensReport {
    pub rows: Vec<LensRow>,
    pub certified_below: i64,
    /// Index values hit by more than one orbit set.
    pub duplicates: Vec<i64>,
    /// Even values below the certified bound hit by no orbit set.
    pub missing: Vec<i64>,
    pub bijective: bool,
}

/// Over a sphere base the grading is a bijection onto the even naturals, up
/// to the certified bound. Each row carries the triangle quantities that
/// assemble its index.
pub fn lens_lattice_bijection(
    b: &Bundle,
    gamma: i64,
    max_total: u64,
) -> Result<LensReport, ComplexError> {
    if b.genus() != 0 {
        return Err(ComplexError::NotGenusZero { genus: b.genus() });
    }
    check_gamma(b, gamma)?;
    let order = b.abs_e();
    let base = OrbitSet::new(gamma as u64, vec![], 0);
    let rows: Vec<LensRow> = enumerate_generators(b, gamma, max_total)
        .into_iter()
        .map(|a| {
            let m = a.total() as i64;
            let (mm, mp) = (a.m_minus() as i64, a.m_plus() as i64);
            let d = (m - gamma) / order;
            let c_tau = 2 * d;
            let q_tau = d * (m + gamma);
            let cz = mp - mm + gamma;
            let index = c_tau + q_tau + cz;
            debug_assert_eq!(
                Rational::from_integer(c_tau),
                Rational::new(2 * m, order) - Rational::new(2 * gamma, order)
            );
            debug_assert_eq!(
                Rational::from_integer(q_tau),
                Rational::new(m * m, order) - Rational::new(gamma * gamma, order)
            );
            debug_assert_eq!(index, ech_index(b, &a, &base).unwrap().total);
            LensRow {
                lattice: (mm, Rational::new(mm - mp, order)),
                height: Rational::new(2 * m, order),
                twice_area: Rational::new(m * m, order),
                c_tau,
                q_tau,
                cz,
                index,
                orbit: a,
            }
        })
        .collect();

    let certified_below = certified_grading_bound(b, gamma, max_total);
    let mut seen: BTreeMap<i64, u64> = BTreeMap::new();
    for row in &rows {
        *seen.entry(row.index).or_insert(0) += 1;
    }
    let duplicates: Vec<i64> =
        seen.iter().filter(|&(_, &n)| n > 1).map(|(&v, _)| v).collect();
    let missing: Vec<i64> = (0..)
        .map(|k| 2 * k)
        .take_while(|&v| v < certified_below)
        .filter(|v| !seen.contains_key(v))
        .collect();
    let bijective = duplicates.is_empty()
        && missing.is_empty()
        && seen.keys().all(|&v| v >= 0 && v % 2 == 0);
    Ok(LensReport { rows, certified_below, duplicates, missing, bijective })
}
