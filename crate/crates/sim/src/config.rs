use serde::{Deserialize, Serialize};

use crate::latency::CostProfile;
use crate::SimError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    /// RSU-coordinated intersection; events are `location||timestamp`.
    Intersection,
    /// Periodic cooperative awareness messages; events are time slots.
    Cam,
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scenario::Intersection => "intersection",
            Scenario::Cam => "cam",
        })
    }
}

/// Vehicles that hold genuine credentials but pose as several vehicles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AttackerSpec {
    /// Number of attacking credentials.
    pub credentials: usize,
    /// Identities each credential claims per event.
    pub claimed_identities: usize,
}

impl Default for AttackerSpec {
    fn default() -> Self {
        AttackerSpec {
            credentials: 0,
            claimed_identities: 1,
        }
    }
}

/// Simulation parameters, read from TOML.
///
/// ```toml
/// scenario = "cam"
/// vehicle_count = 20
/// duration_s = 60
/// cam_interval_ms = 100
///
/// [attacker]
/// credentials = 1
/// claimed_identities = 3
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    pub scenario: Scenario,
    /// Honest vehicles.
    pub vehicle_count: usize,
    pub duration_s: u64,
    /// Status/CAM period, 100..=1000 ms.
    pub cam_interval_ms: u64,
    /// Event rotation period.
    pub event_slot_s: u64,
    pub rng_seed: u64,
    /// Latency bound for hot-path operations.
    pub processing_budget_ms: u64,
    /// Re-send the group signature with every n-th event-signed message.
    pub rebroadcast_every: u32,
    /// Independent loss probability per (message, receiver).
    pub drop_probability: f64,
    /// Probability that an honest vehicle crosses the intersection in a slot.
    pub participation: f64,
    /// Time a vehicle spends in the intersection zone.
    pub dwell_ms: u64,
    /// Wall-clock label of t = 0, `YYYYMMDDhhmm`.
    pub start: String,
    /// Intersection name used in event identifiers.
    pub location: String,
    /// Per-operation cost table for the latency model.
    pub cost_profile: CostProfile,
    pub attacker: AttackerSpec,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            scenario: Scenario::Intersection,
            vehicle_count: 10,
            duration_s: 1200,
            cam_interval_ms: 100,
            event_slot_s: 600,
            rng_seed: 1,
            processing_budget_ms: 50,
            rebroadcast_every: 10,
            drop_probability: 0.0,
            participation: 1.0,
            dwell_ms: 2000,
            start: "201703011000".into(),
            location: "junction-12".into(),
            cost_profile: CostProfile::Laptop,
            attacker: AttackerSpec::default(),
        }
    }
}

impl SimConfig {
    pub fn from_toml(text: &str) -> Result<Self, SimError> {
        let cfg: SimConfig = toml::from_str(text).map_err(|e| SimError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let fail = |msg: &str| Err(SimError::Config(msg.to_string()));
        if !(100..=1000).contains(&self.cam_interval_ms) {
            return fail("cam_interval_ms must lie in 100..=1000");
        }
        if self.event_slot_s == 0 {
            return fail("event_slot_s must be positive");
        }
        if self.duration_s == 0 {
            return fail("duration_s must be positive");
        }
        if self.vehicle_count + self.attacker.credentials == 0 {
            return fail("no vehicles");
        }
        if self.attacker.credentials > 0 && self.attacker.claimed_identities == 0 {
            return fail("attacker.claimed_identities must be at least 1");
        }
        if self.rebroadcast_every == 0 {
            return fail("rebroadcast_every must be at least 1");
        }
        if !(0.0..1.0).contains(&self.drop_probability) {
            return fail("drop_probability must lie in [0, 1)");
        }
        if !(0.0..=1.0).contains(&self.participation) {
            return fail("participation must lie in [0, 1]");
        }
        if self.processing_budget_ms == 0 {
            return fail("processing_budget_ms must be positive");
        }
        if self.location.is_empty() {
            return fail("location must not be empty");
        }
        crate::schedule::parse_start(&self.start)?;
        Ok(())
    }
}
