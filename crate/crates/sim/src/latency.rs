//! Modeled computation cost from operation counts.
//!
//! Measured timings depend on the host, so the report charges each
//! operation with the per-primitive costs of a reference device instead.
//! That keeps reports byte-identical across runs and machines.

use aee_core::algebra::OpCounts;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostProfile {
    /// Laptop-class CPU.
    Laptop,
    /// Raspberry Pi 3 class board.
    Rpi,
}

/// Per-primitive costs in microseconds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CostTable {
    pub mul_g1: u64,
    pub exp_g1: u64,
    pub mul_g2: u64,
    pub exp_g2: u64,
    pub mul_gt: u64,
    pub exp_gt: u64,
    pub pairing: u64,
    /// Hash-to-curve is not in the reference table; it is charged as one
    /// G1 exponentiation.
    pub hash_to_g1: u64,
    pub hash_to_scalar: u64,
}

impl CostProfile {
    pub fn table(self) -> CostTable {
        match self {
            CostProfile::Laptop => CostTable {
                mul_g1: 3,
                exp_g1: 920,
                mul_g2: 20,
                exp_g2: 6480,
                mul_gt: 5,
                exp_gt: 2350,
                pairing: 6190,
                hash_to_g1: 920,
                hash_to_scalar: 0,
            },
            CostProfile::Rpi => CostTable {
                mul_g1: 20,
                exp_g1: 5650,
                mul_g2: 230,
                exp_g2: 60470,
                mul_gt: 70,
                exp_gt: 26520,
                pairing: 61930,
                hash_to_g1: 5650,
                hash_to_scalar: 0,
            },
        }
    }
}

impl CostTable {
    pub fn cost_us(&self, ops: &OpCounts) -> u64 {
        ops.mul_g1 * self.mul_g1
            + ops.exp_g1 * self.exp_g1
            + ops.mul_g2 * self.mul_g2
            + ops.exp_g2 * self.exp_g2
            + ops.mul_gt * self.mul_gt
            + ops.exp_gt * self.exp_gt
            + ops.pairings * self.pairing
            + ops.hash_to_g1 * self.hash_to_g1
            + ops.hash_to_scalar * self.hash_to_scalar
    }
}
