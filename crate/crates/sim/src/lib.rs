//! Deterministic V2X simulation on top of `aee-core`.
//!
//! Two scenarios are modeled. In `intersection` a road-side unit names the
//! events and vehicles group-sign on arrival, then send event-signed status
//! updates. In `cam` events are fixed time slots, so every vehicle
//! precomputes its group signatures for the day and then broadcasts
//! event-signed CAMs to every neighbour.
//!
//! Computation latency is modeled from the operation counts of the real
//! cryptographic calls, priced with a per-device cost table. The resulting
//! [`SimReport`] depends only on the configuration; host wall-clock times
//! are reported separately in [`MeasuredTimings`].

pub mod config;
mod engine;
mod fleet;
pub mod latency;
pub mod report;
pub mod rsu;
pub mod schedule;

use std::time::Instant;

use aee_core::algebra::BilinearSuite;
use aee_core::enroll::{issue, join_start, MemberId, RegistrationTable};
use aee_core::groupsig::{gver, precompute_context, precompute_event_schedule};
use aee_core::keys::{gset, ukg};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub use config::{AttackerSpec, Scenario, SimConfig};
pub use latency::CostProfile;
pub use report::{MeasuredTimings, PrecomputeReport, SimReport};
pub use schedule::{EventMode, EventSchedule};

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Crypto(#[from] aee_core::Error),
    /// A model invariant broke; this is a bug, not an input problem.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// Output of one simulation run.
#[derive(Clone, Debug)]
pub struct SimRun {
    pub report: SimReport,
    pub timings: MeasuredTimings,
}

/// Runs the scenario named in `cfg`.
pub fn run(cfg: &SimConfig) -> Result<SimRun, SimError> {
    engine::run(cfg)
}

pub fn run_intersection(cfg: &SimConfig) -> Result<SimRun, SimError> {
    let cfg = SimConfig {
        scenario: Scenario::Intersection,
        ..cfg.clone()
    };
    engine::run(&cfg)
}

pub fn run_cam(cfg: &SimConfig) -> Result<SimRun, SimError> {
    let cfg = SimConfig {
        scenario: Scenario::Cam,
        ..cfg.clone()
    };
    engine::run(&cfg)
}

/// Enrolls a single member and times the offline signing of `slots`
/// ten-minute time-slot events, verifying each result.
pub fn offline_precompute_report(slots: usize, seed: u64) -> Result<PrecomputeReport, SimError> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let (gpk, mik, _) = gset(&mut rng, &BilinearSuite::bls12_381())?;
    let keys = ukg(&mut rng, &gpk)?;
    let (req, state) = join_start(&gpk, &keys, &mut rng)?;
    let mut reg = RegistrationTable::new();
    let resp = issue(&gpk, &mik, &mut reg, &MemberId::from("precompute"), &req, &mut rng)?;
    let gsk = state.finish(&gpk, &keys, &resp)?;
    let ctx = precompute_context(&gpk, &gsk);
    let schedule = EventSchedule::new(EventMode::Timeslot, "201703010000", 600, slots)?;
    let events = schedule.events();

    let started = Instant::now();
    let signed = precompute_event_schedule(&gpk, &gsk, &ctx, &events, &mut rng)?;
    let total = started.elapsed();
    let all_valid = signed.len() == slots && signed.iter().all(|s| gver(&gpk, &s.et, b"", &s.sigma));
    Ok(PrecomputeReport {
        slots,
        total,
        per_signature: total / slots.max(1) as u32,
        all_valid,
        reference_laptop_s: 1.83,
        reference_rpi_s: 22.8,
    })
}
