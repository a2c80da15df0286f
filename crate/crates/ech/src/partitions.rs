//! Multiplicity partitions at the ends of index-minimal curves, defined by
//! extremal lattice paths against the line y = theta x.
//!
//! The positive partition of m reads off the horizontal gaps between
//! consecutive lattice points of the highest concave path below the line from
//! (0,0) to (m, floor(m theta)); the negative partition uses the lowest
//! convex path above the line, ending at (m, ceil(m theta)). All slope
//! comparisons are exact integer cross products.

use thiserror::Error;

use crate::Rational;

/// Rotation data selecting a partition family. The small-sign tokens stand
/// for elliptic rotation numbers of absolute value below 1/m and bypass the
/// path computation, as do the two hyperbolic families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rotation {
    SmallPositive,
    SmallNegative,
    Angle(Rational),
    PositiveHyperbolic,
    NegativeHyperbolic,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("rotation {theta} is degenerate at multiplicity {m}")]
    DegenerateRotation { theta: Rational, m: u64 },
}

/// A partition of a positive integer, parts sorted non-increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<u64>,
    total: u64,
}

impl Partition {
    fn from_parts(mut parts: Vec<u64>) -> Self {
        debug_assert!(parts.iter().all(|&p| p >= 1));
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let total = parts.iter().sum();
        Partition { parts, total }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

fn ones(m: u64) -> Partition {
    Partition::from_parts(vec![1; m as usize])
}

fn single(m: u64) -> Partition {
    Partition::from_parts(vec![m])
}

fn twos(m: u64) -> Partition {
    let mut parts = vec![2; (m / 2) as usize];
    if m % 2 == 1 {
        parts.push(1);
    }
    Partition::from_parts(parts)
}

/// Incoming partition P+ of the multiplicity m at rotation theta.
pub fn positive_partition(theta: Rotation, m: u64) -> Result<Partition, PartitionError> {
    assert!(m >= 1, "partition of a positive integer");
    match theta {
        Rotation::SmallPositive | Rotation::PositiveHyperbolic => Ok(ones(m)),
        Rotation::SmallNegative => Ok(single(m)),
        Rotation::NegativeHyperbolic => Ok(twos(m)),
        Rotation::Angle(t) => {
            check_nondegenerate(t, m)?;
            Ok(Partition::from_parts(hull_gaps(t, m, Side::Below)))
        }
    }
}

/// Outgoing partition P- of the multiplicity m at rotation theta. Satisfies
/// the reflection identity P+ at theta equals P- at -theta.
pub fn negative_partition(theta: Rotation, m: u64) -> Result<Partition, PartitionError> {
    assert!(m >= 1, "partition of a positive integer");
    match theta {
        Rotation::SmallPositive => Ok(single(m)),
        Rotation::SmallNegative | Rotation::PositiveHyperbolic => Ok(ones(m)),
        Rotation::NegativeHyperbolic => Ok(twos(m)),
        Rotation::Angle(t) => {
            check_nondegenerate(t, m)?;
            Ok(Partition::from_parts(hull_gaps(t, m, Side::Above)))
        }
    }
}

fn check_nondegenerate(theta: Rational, m: u64) -> Result<(), PartitionError> {
    if (theta * Rational::from_integer(m as i64)).is_integer() {
        return Err(PartitionError::DegenerateRotation { theta, m });
    }
    Ok(())
}

enum Side {
    Below,
    Above,
}

/// Horizontal gaps between consecutive lattice points of the extremal path.
///
/// The highest concave path below the line is the upper convex hull of the
/// column points (x, floor(theta x)): each hull vertex is admissible, the
/// hull dominates every admissible concave path, and a chord between two
/// points under a line stays under it. The lowest convex path above is the
/// lower hull of (x, ceil(theta x)) by the mirrored argument. Interior
/// lattice points of a hull edge are recovered by gcd subdivision.
fn hull_gaps(theta: Rational, m: u64, side: Side) -> Vec<u64> {
    let column = |x: i64| {
        let v = theta * Rational::from_integer(x);
        match side {
            Side::Below => v.floor().to_integer(),
            Side::Above => v.ceil().to_integer(),
        }
    };
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for x in 0..=m as i64 {
        let p = (x, column(x));
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            let drop_middle = match side {
                Side::Below => cross >= 0,
                Side::Above => cross <= 0,
            };
            if drop_middle {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut gaps = Vec::new();
    for w in hull.windows(2) {
        let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        let g = num::integer::gcd(dx, dy.abs());
        for _ in 0..g {
            gaps.push((dx / g) as u64);
        }
    }
    gaps
}
