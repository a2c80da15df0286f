//! Base surfaces, circle bundles, and the homology of the total space.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TopologyError {
    #[error("euler class must be negative, got {0}")]
    EulerClassNotNegative(i64),
}

/// A principal circle bundle over the closed orientable surface of genus
/// `genus`, classified by its (negative) Euler class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bundle {
    genus: u32,
    euler_class: i64,
}

impl Bundle {
    pub fn new(genus: u32, euler_class: i64) -> Result<Self, TopologyError> {
        if euler_class >= 0 {
            return Err(TopologyError::EulerClassNotNegative(euler_class));
        }
        Ok(Bundle { genus, euler_class })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn euler_class(&self) -> i64 {
        self.euler_class
    }

    /// Euler characteristic of the base surface, 2 - 2g.
    pub fn chi(&self) -> i64 {
        2 - 2 * self.genus as i64
    }

    /// The order -e of the fiber class in first homology; always positive.
    pub fn abs_e(&self) -> i64 {
        -self.euler_class
    }

    /// Number of saddle fibers of a perfect Morse function on the base.
    pub fn hyperbolic_orbit_count(&self) -> usize {
        2 * self.genus as usize
    }
}

/// One graded piece of an integral homology computation. A trivial torsion
/// summand is never stored, so equality of entries is structural equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub free_rank: u32,
    pub torsion_orders: Vec<i64>,
}

/// The four homology groups of the total space, degrees 0 through 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroups {
    groups: [HomologyGroup; 4],
}

impl HomologyGroups {
    pub fn degree(&self, d: usize) -> &HomologyGroup {
        &self.groups[d]
    }
}

/// Homology of the total space of the bundle. The spectral sequence of the
/// fibration collapses after the single transgression, which multiplies the
/// fiber class by the Euler number; only degree one can carry torsion.
pub fn homology_of_total_space(b: &Bundle) -> HomologyGroups {
    let g2 = 2 * b.genus();
    let torsion = if b.abs_e() > 1 { vec![b.abs_e()] } else { Vec::new() };
    HomologyGroups {
        groups: [
            HomologyGroup { free_rank: 1, torsion_orders: Vec::new() },
            HomologyGroup { free_rank: g2, torsion_orders: torsion },
            HomologyGroup { free_rank: g2, torsion_orders: Vec::new() },
            HomologyGroup { free_rank: 1, torsion_orders: Vec::new() },
        ],
    }
}

/// Number of torsion classes available as the homology class of an orbit set:
/// the order -e of the fiber subgroup.
pub fn gamma_class_count(b: &Bundle) -> i64 {
    b.abs_e()
}
