//! Discrete-event core shared by both scenarios.
//!
//! Time is kept in microseconds; every scheduled transmission falls on a
//! whole millisecond and computation delays are added on top from the cost
//! model. Each node is a single processor: signing and verification queue
//! behind each other in arrival order.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, HashSet};
use std::time::Instant;

use aee_core::algebra::{count_ops, G1Element, OpCounts};
use aee_core::eventsig::{epk_from_signature, esign, ever, EventPublicKey, EventSignature};
use aee_core::groupsig::{gsign, gver, precompute_event_schedule, GroupSignature};
use aee_core::linktrace::{judge, open, OpenOutcome};
use aee_core::wire::{encode_group_signature, Mode, Wire};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::config::{Scenario, SimConfig};
use crate::fleet::Fleet;
use crate::latency::CostTable;
use crate::report::{Detection, LinkStats, MeasuredTimings, MessageSizes, OpKind, OpStats, SimReport, Traffic};
use crate::rsu::{self, RsuSignature, RsuSigner};
use crate::schedule::{EventMode, EventSchedule};
use crate::{SimError, SimRun};

type Token = [u8; 48];

const STREAM_SETUP: u64 = 0;
const STREAM_CRYPTO: u64 = 1;
const STREAM_TRAFFIC: u64 = 2;
const STREAM_RADIO: u64 = 3;

fn stream(seed: u64, id: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

#[derive(Clone)]
enum Payload {
    Group {
        slot: usize,
        identity: String,
        m: Vec<u8>,
        sigma: GroupSignature,
    },
    Event {
        slot: usize,
        identity: String,
        token: G1Element,
        m_e: Vec<u8>,
        sig: EventSignature,
    },
    Rsu {
        to: usize,
        body: Vec<u8>,
        sig: RsuSignature,
    },
}

enum Action {
    /// Intersection: a vehicle enters and group-signs its arrival.
    Enter { vehicle: usize, identity: usize, slot: usize },
    /// An event-signed status update or CAM.
    Beacon { vehicle: usize, identity: usize, slot: usize, seq: u32 },
    Transmit { from: usize, payload: Payload },
}

struct Scheduled {
    at_us: u64,
    seq: u64,
    action: Action,
}

impl PartialEq for Scheduled {
    fn eq(&self, other: &Self) -> bool {
        (self.at_us, self.seq) == (other.at_us, other.seq)
    }
}
impl Eq for Scheduled {}
impl PartialOrd for Scheduled {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Scheduled {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.at_us, self.seq).cmp(&(other.at_us, other.seq))
    }
}

#[derive(Default)]
struct Node {
    busy_until: u64,
    epks: HashMap<(usize, Token), EventPublicKey>,
    claims: HashMap<(usize, Token), BTreeSet<String>>,
}

/// Signature held by one vehicle identity for one event.
struct Held {
    sigma: GroupSignature,
    m: Vec<u8>,
    epk: EventPublicKey,
}

struct DetectionState {
    identities: usize,
    detectors: BTreeSet<usize>,
}

struct Sim<'a> {
    cfg: &'a SimConfig,
    fleet: Fleet,
    schedule: EventSchedule,
    costs: CostTable,
    rsu: RsuSigner,
    rsu_node: usize,
    nodes: Vec<Node>,
    queue: BinaryHeap<Reverse<Scheduled>>,
    next_seq: u64,
    crypto_rng: ChaCha20Rng,
    radio_rng: ChaCha20Rng,
    held: HashMap<(usize, usize, usize), Held>,
    verify_cache: HashMap<Vec<u8>, (bool, OpCounts)>,
    /// Ground truth owner of each (slot, token).
    owner: HashMap<(usize, Token), usize>,
    honest_tokens: HashMap<(usize, usize), Token>,
    first_valid: HashMap<(usize, Token), (Vec<u8>, GroupSignature)>,
    detections: BTreeMap<(usize, Token), DetectionState>,
    granted: HashSet<(usize, String)>,
    fifo_position: HashMap<usize, u32>,
    traffic: Traffic,
    ops: BTreeMap<OpKind, OpStats>,
    hot_calls: u64,
    hot_within: u64,
    precomputed: usize,
    precompute_us: u64,
    fresh: BTreeMap<(String, usize), u32>,
    timings: MeasuredTimings,
}

pub(crate) fn run(cfg: &SimConfig) -> Result<SimRun, SimError> {
    cfg.validate()?;
    let started = Instant::now();
    let mut setup_rng = stream(cfg.rng_seed, STREAM_SETUP);
    let fleet = Fleet::enroll(cfg, &mut setup_rng)?;
    let rsu = RsuSigner::generate(&mut setup_rng)?;

    let duration_ms = cfg.duration_s * 1000;
    let slot_ms = cfg.event_slot_s * 1000;
    let slots = duration_ms.div_ceil(slot_ms) as usize;
    let mode = match cfg.scenario {
        Scenario::Intersection => EventMode::RsuGenerated {
            location: cfg.location.clone(),
        },
        Scenario::Cam => EventMode::Timeslot,
    };
    let schedule = EventSchedule::new(mode, &cfg.start, cfg.event_slot_s, slots)?;
    let vehicles = fleet.vehicles.len();

    let mut sim = Sim {
        cfg,
        fleet,
        schedule,
        costs: cfg.cost_profile.table(),
        rsu,
        rsu_node: vehicles,
        nodes: (0..=vehicles).map(|_| Node::default()).collect(),
        queue: BinaryHeap::new(),
        next_seq: 0,
        crypto_rng: stream(cfg.rng_seed, STREAM_CRYPTO),
        radio_rng: stream(cfg.rng_seed, STREAM_RADIO),
        held: HashMap::new(),
        verify_cache: HashMap::new(),
        owner: HashMap::new(),
        honest_tokens: HashMap::new(),
        first_valid: HashMap::new(),
        detections: BTreeMap::new(),
        granted: HashSet::new(),
        fifo_position: HashMap::new(),
        traffic: Traffic::default(),
        ops: BTreeMap::new(),
        hot_calls: 0,
        hot_within: 0,
        precomputed: 0,
        precompute_us: 0,
        fresh: BTreeMap::new(),
        timings: MeasuredTimings::default(),
    };

    let mut traffic_rng = stream(cfg.rng_seed, STREAM_TRAFFIC);
    match cfg.scenario {
        Scenario::Intersection => sim.plan_intersection(&mut traffic_rng, duration_ms),
        Scenario::Cam => {
            sim.precompute_all()?;
            sim.plan_cam(&mut traffic_rng, duration_ms);
        }
    }
    while let Some(Reverse(item)) = sim.queue.pop() {
        sim.step(item)?;
    }
    let report = sim.finish()?;
    let mut timings = sim.timings;
    timings.total = started.elapsed();
    Ok(SimRun { report, timings })
}

impl Sim<'_> {
    fn push(&mut self, at_us: u64, action: Action) {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.queue.push(Reverse(Scheduled { at_us, seq, action }));
    }

    fn plan_intersection(&mut self, rng: &mut ChaCha20Rng, duration_ms: u64) {
        let slot_ms = self.schedule.slot_ms();
        let interval = self.cfg.cam_interval_ms;
        for slot in 0..self.schedule.len() {
            let slot_start = slot as u64 * slot_ms;
            let slot_end = (slot_start + slot_ms).min(duration_ms);
            let window = slot_end.saturating_sub(slot_start).saturating_sub(self.cfg.dwell_ms).max(1);
            for v in 0..self.fleet.vehicles.len() {
                let honest = self.fleet.vehicles[v].honest;
                if honest && !rng.gen_bool(self.cfg.participation) {
                    continue;
                }
                let arrival = slot_start + rng.gen_range(0..window);
                for identity in 0..self.fleet.vehicles[v].identities.len() {
                    let enter = arrival + identity as u64;
                    if enter >= slot_end {
                        continue;
                    }
                    self.push(enter * 1000, Action::Enter { vehicle: v, identity, slot });
                    let mut seq = 1;
                    let mut t = enter + interval;
                    while t < slot_end && t <= enter + self.cfg.dwell_ms {
                        self.push(t * 1000, Action::Beacon { vehicle: v, identity, slot, seq });
                        seq += 1;
                        t += interval;
                    }
                }
            }
        }
    }

    fn precompute_all(&mut self) -> Result<(), SimError> {
        let events = self.schedule.events();
        let started = Instant::now();
        for v in 0..self.fleet.vehicles.len() {
            for identity in 0..self.fleet.vehicles[v].identities.len() {
                let vehicle = &self.fleet.vehicles[v];
                let (signed, ops) = count_ops(|| {
                    precompute_event_schedule(&self.fleet.gpk, &vehicle.gsk, &vehicle.ctx, &events, &mut self.crypto_rng)
                });
                let signed = signed?;
                self.precompute_us += self.costs.cost_us(&ops);
                self.precomputed += signed.len();
                for (slot, entry) in signed.into_iter().enumerate() {
                    let epk = epk_from_signature(&self.fleet.gpk, &entry.et, &entry.sigma);
                    self.note_token(v, slot, &entry.sigma)?;
                    self.held.insert(
                        (v, identity, slot),
                        Held {
                            sigma: entry.sigma,
                            m: Vec::new(),
                            epk,
                        },
                    );
                }
            }
        }
        self.timings.offline_precompute = started.elapsed();
        Ok(())
    }

    fn plan_cam(&mut self, rng: &mut ChaCha20Rng, duration_ms: u64) {
        let interval = self.cfg.cam_interval_ms;
        for v in 0..self.fleet.vehicles.len() {
            for identity in 0..self.fleet.vehicles[v].identities.len() {
                let phase = rng.gen_range(0..interval);
                let mut per_slot: HashMap<usize, u32> = HashMap::new();
                let mut t = phase;
                while t < duration_ms {
                    let slot = self.schedule.slot_of(t);
                    let seq = per_slot.entry(slot).or_insert(0);
                    self.push(t * 1000, Action::Beacon { vehicle: v, identity, slot, seq: *seq });
                    *seq += 1;
                    t += interval;
                }
            }
        }
    }

    /// Records ground truth for a freshly produced group signature and
    /// checks that an honest vehicle never shows two tokens in one event.
    fn note_token(&mut self, vehicle: usize, slot: usize, sigma: &GroupSignature) -> Result<(), SimError> {
        let token = sigma.t.to_compressed();
        self.owner.insert((slot, token), vehicle);
        if self.fleet.vehicles[vehicle].honest {
            let prev = *self.honest_tokens.entry((vehicle, slot)).or_insert(token);
            if prev != token {
                return Err(SimError::Invariant(format!(
                    "{} emitted two tokens for event {}",
                    self.fleet.vehicles[vehicle].label,
                    self.schedule.label(slot)
                )));
            }
        }
        Ok(())
    }

    /// Charges `ops` on `node`, starting no earlier than `at_us`, and
    /// returns the completion time.
    fn charge(&mut self, node: usize, kind: OpKind, at_us: u64, ops: OpCounts) -> u64 {
        let cost = self.costs.cost_us(&ops);
        let start = at_us.max(self.nodes[node].busy_until);
        let done = start + cost;
        self.nodes[node].busy_until = done;
        let latency = done - at_us;
        let budget_us = self.cfg.processing_budget_ms * 1000;
        let stats = self.ops.entry(kind).or_default();
        stats.calls += 1;
        stats.ops = stats.ops + ops;
        stats.modeled_cost_us += cost;
        stats.max_latency_us = stats.max_latency_us.max(latency);
        if latency > budget_us {
            stats.over_budget += 1;
        }
        if kind.is_hot_path() {
            self.hot_calls += 1;
            if latency <= budget_us {
                self.hot_within += 1;
            }
        }
        done
    }

    fn step(&mut self, item: Scheduled) -> Result<(), SimError> {
        let now = item.at_us;
        match item.action {
            Action::Enter { vehicle, identity, slot } => self.enter(now, vehicle, identity, slot),
            Action::Beacon {
                vehicle,
                identity,
                slot,
                seq,
            } => self.beacon(now, vehicle, identity, slot, seq),
            Action::Transmit { from, payload } => {
                self.transmit(now, from, payload);
                Ok(())
            }
        }
    }

    fn enter(&mut self, now: u64, v: usize, identity: usize, slot: usize) -> Result<(), SimError> {
        let et = self.schedule.event(slot);
        let vehicle = &self.fleet.vehicles[v];
        let claimed = vehicle.identities[identity].clone();
        let m = format!("enter|{claimed}|{}", self.schedule.label(slot)).into_bytes();
        let clock = Instant::now();
        let (sigma, ops) = count_ops(|| gsign(&self.fleet.gpk, &vehicle.gsk, &vehicle.ctx, &et, &m, &mut self.crypto_rng));
        let sigma = sigma?;
        self.timings.record(OpKind::GSign, clock.elapsed());
        let done = self.charge(v, OpKind::GSign, now, ops);
        self.note_token(v, slot, &sigma)?;
        *self.fresh.entry((claimed.clone(), slot)).or_insert(0) += 1;
        let epk = epk_from_signature(&self.fleet.gpk, &et, &sigma);
        self.held.insert(
            (v, identity, slot),
            Held {
                sigma: sigma.clone(),
                m: m.clone(),
                epk,
            },
        );
        self.traffic.group_signatures += 1;
        self.push(
            done,
            Action::Transmit {
                from: v,
                payload: Payload::Group {
                    slot,
                    identity: claimed,
                    m,
                    sigma,
                },
            },
        );
        Ok(())
    }

    fn beacon(&mut self, now: u64, v: usize, identity: usize, slot: usize, seq: u32) -> Result<(), SimError> {
        let Some(held) = self.held.get(&(v, identity, slot)) else {
            return Ok(());
        };
        let (sigma, m, epk) = (held.sigma.clone(), held.m.clone(), held.epk.clone());
        let claimed = self.fleet.vehicles[v].identities[identity].clone();
        let et = self.schedule.event(slot);
        let mut ready = now;

        let with_group = match self.cfg.scenario {
            Scenario::Cam => seq == 0 || seq % self.cfg.rebroadcast_every == 0,
            Scenario::Intersection => seq % self.cfg.rebroadcast_every == 0,
        };
        if with_group {
            if self.cfg.scenario == Scenario::Cam && seq == 0 {
                self.traffic.group_signatures += 1;
                *self.fresh.entry((claimed.clone(), slot)).or_insert(0) += 1;
            } else {
                self.traffic.group_rebroadcasts += 1;
            }
            let payload = Payload::Group {
                slot,
                identity: claimed.clone(),
                m,
                sigma: sigma.clone(),
            };
            self.push(ready, Action::Transmit { from: v, payload });
        }

        let m_e = match self.cfg.scenario {
            Scenario::Intersection => format!("status|{claimed}|{seq}|lane={}", v % 4),
            Scenario::Cam => format!("cam|{claimed}|{seq}|speed={}", 30 + (v % 20)),
        }
        .into_bytes();
        let token = sigma.t;
        let usk = self.fleet.vehicles[v].keys.usk;
        let clock = Instant::now();
        let (sig, ops) = count_ops(|| esign(&self.fleet.gpk, &usk, &et, &epk, &m_e, &mut self.crypto_rng));
        let sig = sig?;
        self.timings.record(OpKind::ESign, clock.elapsed());
        ready = self.charge(v, OpKind::ESign, ready, ops);
        self.traffic.event_messages += 1;
        self.push(
            ready,
            Action::Transmit {
                from: v,
                payload: Payload::Event {
                    slot,
                    identity: claimed,
                    token,
                    m_e,
                    sig,
                },
            },
        );
        Ok(())
    }

    fn payload_bytes(&self, payload: &Payload) -> u64 {
        let n = match payload {
            Payload::Group { slot, m, .. } => {
                self.schedule.event(*slot).as_bytes().len() + m.len() + self.sizes().group_signature
            }
            Payload::Event { m_e, .. } => m_e.len() + G1Element::COMPRESSED_BYTES + self.sizes().event_signature,
            Payload::Rsu { body, .. } => body.len() + RsuSignature::BYTES,
        };
        n as u64
    }

    fn receivers(&self, from: usize, payload: &Payload) -> Vec<usize> {
        match (payload, self.cfg.scenario) {
            (Payload::Rsu { to, .. }, _) => vec![*to],
            (_, Scenario::Intersection) => vec![self.rsu_node],
            (_, Scenario::Cam) => (0..self.fleet.vehicles.len()).filter(|&r| r != from).collect(),
        }
    }

    fn transmit(&mut self, now: u64, from: usize, payload: Payload) {
        if let Payload::Rsu { .. } = payload {
            self.traffic.rsu_messages += 1;
        }
        self.traffic.bytes_on_air += self.payload_bytes(&payload);
        for r in self.receivers(from, &payload) {
            if self.cfg.drop_probability > 0.0 && self.radio_rng.gen_bool(self.cfg.drop_probability) {
                self.traffic.dropped += 1;
                continue;
            }
            self.traffic.deliveries += 1;
            self.deliver(now, r, &payload);
        }
    }

    fn cached_verify(
        &mut self,
        kind: OpKind,
        key: Vec<u8>,
        verify: impl FnOnce() -> bool,
    ) -> (bool, OpCounts) {
        if let Some(hit) = self.verify_cache.get(&key) {
            return *hit;
        }
        let clock = Instant::now();
        let result = count_ops(verify);
        self.timings.record(kind, clock.elapsed());
        self.verify_cache.insert(key, result);
        result
    }

    fn deliver(&mut self, now: u64, r: usize, payload: &Payload) {
        match payload {
            Payload::Group {
                slot,
                identity,
                m,
                sigma,
            } => {
                let et = self.schedule.event(*slot);
                let mut key = vec![b'G'];
                key.extend_from_slice(&(*slot as u64).to_be_bytes());
                key.extend_from_slice(&(m.len() as u64).to_be_bytes());
                key.extend_from_slice(m);
                key.extend_from_slice(&encode_group_signature(sigma, Mode::Compressed));
                let gpk = self.fleet.gpk.clone();
                let (ok, ops) = self.cached_verify(OpKind::GVer, key, || gver(&gpk, &et, m, sigma));
                self.charge(r, OpKind::GVer, now, ops);
                if !ok {
                    self.traffic.rejected += 1;
                    return;
                }
                let token = sigma.t.to_compressed();
                let epk = epk_from_signature(&self.fleet.gpk, &et, sigma);
                self.nodes[r].epks.insert((*slot, token), epk);
                self.first_valid.entry((*slot, token)).or_insert_with(|| (m.clone(), sigma.clone()));
                self.claim(r, *slot, token, identity);
            }
            Payload::Event {
                slot,
                identity,
                token,
                m_e,
                sig,
            } => {
                let token_bytes = token.to_compressed();
                let Some(epk) = self.nodes[r].epks.get(&(*slot, token_bytes)).cloned() else {
                    self.traffic.unverifiable += 1;
                    return;
                };
                let et = self.schedule.event(*slot);
                let mut key = vec![b'E'];
                key.extend_from_slice(&(*slot as u64).to_be_bytes());
                key.extend_from_slice(&token_bytes);
                key.extend_from_slice(&(m_e.len() as u64).to_be_bytes());
                key.extend_from_slice(m_e);
                key.extend_from_slice(&sig.to_wire());
                let gpk = self.fleet.gpk.clone();
                let (ok, ops) = self.cached_verify(OpKind::EVer, key, || ever(&gpk, &et, &epk, m_e, sig));
                let done = self.charge(r, OpKind::EVer, now, ops);
                if !ok {
                    self.traffic.rejected += 1;
                    return;
                }
                self.claim(r, *slot, token_bytes, identity);
                if r == self.rsu_node {
                    self.controller_reply(done, *slot, token_bytes, identity);
                }
            }
            Payload::Rsu { body, sig, .. } => {
                let clock = Instant::now();
                let (ok, ops) = count_ops(|| rsu::verify(&self.rsu.pk, body, sig));
                self.timings.record(OpKind::RsuVerify, clock.elapsed());
                self.charge(r, OpKind::RsuVerify, now, ops);
                if !ok {
                    self.traffic.rejected += 1;
                }
            }
        }
    }

    /// Adds `identity` to receiver `r`'s link table and flags the token
    /// once it has been seen under two identities.
    fn claim(&mut self, r: usize, slot: usize, token: Token, identity: &str) {
        let claims = self.nodes[r].claims.entry((slot, token)).or_default();
        claims.insert(identity.to_string());
        let seen = claims.len();
        if seen >= 2 {
            let d = self.detections.entry((slot, token)).or_insert(DetectionState {
                identities: 0,
                detectors: BTreeSet::new(),
            });
            d.identities = d.identities.max(seen);
            d.detectors.insert(r);
        }
    }

    /// The controller answers the first verified status of each identity,
    /// addressing the vehicle by its token. Identities sharing a token
    /// with another identity are refused.
    fn controller_reply(&mut self, at_us: u64, slot: usize, token: Token, identity: &str) {
        if !self.granted.insert((slot, identity.to_string())) {
            return;
        }
        let Some(&to) = self.owner.get(&(slot, token)) else {
            return;
        };
        let flagged = self.detections.contains_key(&(slot, token));
        let position = self.fifo_position.entry(slot).or_insert(0);
        let verdict = if flagged {
            "deny".to_string()
        } else {
            *position += 1;
            format!("cross-order={position}")
        };
        let body = format!("{}|to={}|{verdict}", self.schedule.label(slot), hex::encode(&token[..8])).into_bytes();
        let clock = Instant::now();
        let (sig, ops) = count_ops(|| self.rsu.sign(&body, &mut self.crypto_rng));
        self.timings.record(OpKind::RsuSign, clock.elapsed());
        let Ok(sig) = sig else { return };
        let done = self.charge(self.rsu_node, OpKind::RsuSign, at_us, ops);
        self.push(
            done,
            Action::Transmit {
                from: self.rsu_node,
                payload: Payload::Rsu { to, body, sig },
            },
        );
    }

    fn sizes(&self) -> MessageSizes {
        MessageSizes {
            group_signature: 3 * G1Element::COMPRESSED_BYTES + 5 * aee_core::algebra::Scalar::BYTES,
            event_signature: 2 * aee_core::algebra::Scalar::BYTES,
            token: G1Element::COMPRESSED_BYTES,
            rsu_signature: RsuSignature::BYTES,
        }
    }

    fn finish(&mut self) -> Result<SimReport, SimError> {
        let mut detections = Vec::new();
        let mut honest_flagged = BTreeSet::new();
        let keys: Vec<_> = self.detections.keys().copied().collect();
        for (slot, token) in keys {
            let state = &self.detections[&(slot, token)];
            let owner = self.owner[&(slot, token)];
            let vehicle = &self.fleet.vehicles[owner];
            if vehicle.honest {
                honest_flagged.insert(owner);
            }
            let (identities, detected_by) = (state.identities, state.detectors.len());
            let (traced_to, judge_accepted) = match self.first_valid.get(&(slot, token)) {
                Some((m, sigma)) => {
                    let et = self.schedule.event(slot);
                    match open(&self.fleet.gpk, &self.fleet.mok, &self.fleet.reg, &et, m, sigma, &mut self.crypto_rng)? {
                        OpenOutcome::Traced { member, proof } => {
                            let upk = self.fleet.reg.get(&member).map(|row| row.upk);
                            let accepted = upk.is_some_and(|upk| judge(&self.fleet.gpk, &member, &upk, sigma, &proof));
                            (Some(member.to_string()), accepted)
                        }
                        OpenOutcome::Untraceable => (None, false),
                    }
                }
                None => (None, false),
            };
            detections.push(Detection {
                event: self.schedule.label(slot),
                token: hex::encode(&token[..8]),
                identities,
                detected_by,
                owner: vehicle.label.clone(),
                owner_honest: vehicle.honest,
                traced_to,
                judge_accepted,
            });
        }

        let mut slots_per_token: HashMap<Token, BTreeSet<usize>> = HashMap::new();
        for (slot, token) in self.owner.keys() {
            slots_per_token.entry(*token).or_default().insert(*slot);
        }
        let mut seen_tokens: BTreeSet<(usize, Token)> = BTreeSet::new();
        let mut max_identities = 0;
        for node in &self.nodes {
            for (key, claims) in &node.claims {
                seen_tokens.insert(*key);
                max_identities = max_identities.max(claims.len());
            }
        }
        let link = LinkStats {
            tokens: seen_tokens.len(),
            max_identities_per_token: max_identities,
            cross_event_collisions: slots_per_token.values().filter(|s| s.len() > 1).count(),
        };
        let hot_path_pairings = self
            .ops
            .iter()
            .filter(|(k, _)| k.is_hot_path())
            .map(|(_, s)| s.ops.pairings)
            .sum();

        Ok(SimReport {
            scenario: self.cfg.scenario,
            seed: self.cfg.rng_seed,
            honest_vehicles: self.cfg.vehicle_count,
            attacker_credentials: self.cfg.attacker.credentials,
            claimed_identities: if self.cfg.attacker.credentials > 0 {
                self.cfg.attacker.claimed_identities
            } else {
                0
            },
            duration_s: self.cfg.duration_s,
            events: (0..self.schedule.len()).map(|k| self.schedule.event(k).to_string()).collect(),
            sizes: self.sizes(),
            traffic: std::mem::take(&mut self.traffic),
            ops: std::mem::take(&mut self.ops),
            budget_ms: self.cfg.processing_budget_ms,
            hot_path_calls: self.hot_calls,
            hot_path_within_budget: self.hot_within,
            hot_path_pairings,
            precomputed_signatures: self.precomputed,
            precompute_modeled_us: self.precompute_us,
            link,
            detections,
            honest_flagged: honest_flagged.len(),
            group_signatures_per_slot: std::mem::take(&mut self.fresh),
        })
    }
}
