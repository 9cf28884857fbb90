use aee_sim::report::OpKind;
use aee_sim::{offline_precompute_report, run, AttackerSpec, Scenario, SimConfig};

fn intersection(vehicles: usize, duration_s: u64, seed: u64) -> SimConfig {
    SimConfig {
        scenario: Scenario::Intersection,
        vehicle_count: vehicles,
        duration_s,
        event_slot_s: 600,
        rng_seed: seed,
        ..SimConfig::default()
    }
}

#[test]
fn intersection_signs_once_per_vehicle_and_slot() {
    let out = run(&intersection(10, 1200, 7)).unwrap();
    let r = &out.report;
    assert_eq!(r.events.len(), 2);
    assert_eq!(r.events[0], "junction-12||201703011000");
    assert_eq!(r.events[1], "junction-12||201703011010");
    assert_eq!(r.group_signatures_per_slot.len(), 20);
    assert!(r.group_signatures_per_slot.values().all(|&n| n == 1));
    assert_eq!(r.traffic.group_signatures, 20);
    assert!(r.detections.is_empty());
    assert_eq!(r.honest_flagged, 0);
    assert_eq!(r.link.tokens, 20);
    assert_eq!(r.link.cross_event_collisions, 0);
    assert_eq!(r.traffic.rejected, 0);
    assert_eq!(r.traffic.unverifiable, 0);
    // One grant per vehicle and slot, each verified by its addressee.
    assert_eq!(r.traffic.rsu_messages, 20);
    assert_eq!(r.ops[&OpKind::RsuVerify].calls, 20);
    assert_eq!(r.hot_path_pairings, 0);
}

#[test]
fn intersection_flags_and_traces_a_sybil_attacker() {
    let cfg = SimConfig {
        attacker: AttackerSpec {
            credentials: 1,
            claimed_identities: 3,
        },
        ..intersection(4, 1200, 11)
    };
    let r = run(&cfg).unwrap().report;
    assert_eq!(r.detected_attack_events(), 2);
    assert_eq!(r.honest_flagged, 0);
    for d in &r.detections {
        assert_eq!(d.identities, 3);
        assert_eq!(d.owner, "atk-00");
        assert_eq!(d.traced_to.as_deref(), Some("atk-00"));
        assert!(d.judge_accepted);
    }
    assert_eq!(r.link.max_identities_per_token, 3);
    assert_eq!(r.link.cross_event_collisions, 0);
}

#[test]
fn cam_precomputes_every_slot_before_the_run() {
    let cfg = SimConfig {
        scenario: Scenario::Cam,
        vehicle_count: 1,
        duration_s: 144,
        event_slot_s: 1,
        cam_interval_ms: 1000,
        ..SimConfig::default()
    };
    let r = run(&cfg).unwrap().report;
    assert_eq!(r.events.len(), 144);
    assert_eq!(r.precomputed_signatures, 144);
    assert!(!r.ops.contains_key(&OpKind::GSign));
    assert_eq!(r.ops[&OpKind::ESign].calls, 144);
}

#[test]
fn cam_broadcast_at_ten_hertz_is_verified_by_every_neighbour() {
    let cfg = SimConfig {
        scenario: Scenario::Cam,
        vehicle_count: 20,
        duration_s: 60,
        event_slot_s: 600,
        cam_interval_ms: 100,
        rng_seed: 3,
        ..SimConfig::default()
    };
    let r = run(&cfg).unwrap().report;
    assert_eq!(r.traffic.event_messages, 12_000);
    assert_eq!(r.ops[&OpKind::EVer].calls, 12_000 * 19);
    assert_eq!(r.traffic.unverifiable, 0);
    assert_eq!(r.traffic.rejected, 0);
    assert_eq!(r.precomputed_signatures, 20);
    assert!(!r.ops.contains_key(&OpKind::GSign));
    assert_eq!(r.hot_path_pairings, 0);
    assert!(r.ops[&OpKind::ESign].ops.pairings == 0);
    // Each group signature is repeated on every tenth CAM.
    assert_eq!(r.traffic.group_signatures, 20);
    assert_eq!(r.traffic.group_rebroadcasts, 20 * 59);
    assert!(r.hot_path_fraction_within_budget() > 0.0);
}

#[test]
fn cam_sybil_is_seen_by_every_receiver() {
    let cfg = SimConfig {
        scenario: Scenario::Cam,
        vehicle_count: 3,
        duration_s: 1200,
        event_slot_s: 600,
        cam_interval_ms: 1000,
        attacker: AttackerSpec {
            credentials: 1,
            claimed_identities: 2,
        },
        rng_seed: 5,
        ..SimConfig::default()
    };
    let r = run(&cfg).unwrap().report;
    assert_eq!(r.detected_attack_events(), 2);
    assert_eq!(r.honest_flagged, 0);
    assert!(r.detections.iter().all(|d| d.detected_by == 3 && d.judge_accepted));
    assert_eq!(r.link.cross_event_collisions, 0);
}

#[test]
fn reports_are_reproducible() {
    let cfg = SimConfig {
        drop_probability: 0.1,
        participation: 0.8,
        attacker: AttackerSpec {
            credentials: 1,
            claimed_identities: 2,
        },
        ..intersection(5, 600, 99)
    };
    let a = run(&cfg).unwrap().report;
    let b = run(&cfg).unwrap().report;
    assert_eq!(a.to_rows(), b.to_rows());
    assert_eq!(a.to_text(), b.to_text());
    let c = run(&SimConfig { rng_seed: 100, ..cfg }).unwrap().report;
    assert_ne!(a.to_rows(), c.to_rows());
}

#[test]
fn offline_precompute_signs_valid_signatures() {
    let r = offline_precompute_report(12, 1).unwrap();
    assert_eq!(r.slots, 12);
    assert!(r.all_valid);
    assert!(r.per_signature > std::time::Duration::ZERO);
}
