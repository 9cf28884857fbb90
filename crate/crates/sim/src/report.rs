//! Simulation output. Everything in [`SimReport`] is a pure function of the
//! configuration; host measurements live in [`MeasuredTimings`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use aee_core::algebra::OpCounts;

use crate::config::Scenario;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpKind {
    GSign,
    GVer,
    ESign,
    EVer,
    RsuSign,
    RsuVerify,
}

impl OpKind {
    pub fn name(self) -> &'static str {
        match self {
            OpKind::GSign => "gsign",
            OpKind::GVer => "gver",
            OpKind::ESign => "esign",
            OpKind::EVer => "ever",
            OpKind::RsuSign => "rsu_sign",
            OpKind::RsuVerify => "rsu_verify",
        }
    }

    /// Operations on the per-message path once an event key is known.
    pub fn is_hot_path(self) -> bool {
        matches!(self, OpKind::ESign | OpKind::EVer)
    }
}

/// Modeled cost and latency of one kind of operation, over all nodes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OpStats {
    pub calls: u64,
    /// Group operations summed over all calls.
    pub ops: OpCounts,
    pub modeled_cost_us: u64,
    /// Queueing plus processing, per call.
    pub max_latency_us: u64,
    pub over_budget: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Traffic {
    /// Group signatures newly broadcast (one per identity and event).
    pub group_signatures: u64,
    /// Repeats of an already broadcast group signature.
    pub group_rebroadcasts: u64,
    pub event_messages: u64,
    pub rsu_messages: u64,
    pub deliveries: u64,
    pub dropped: u64,
    /// Event messages that arrived before the receiver knew the key.
    pub unverifiable: u64,
    /// Deliveries whose signature did not verify.
    pub rejected: u64,
    pub bytes_on_air: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MessageSizes {
    pub group_signature: usize,
    pub event_signature: usize,
    pub token: usize,
    pub rsu_signature: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinkStats {
    /// Distinct (event, token) pairs seen by any receiver.
    pub tokens: usize,
    pub max_identities_per_token: usize,
    /// Tokens that appeared under more than one event.
    pub cross_event_collisions: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Detection {
    pub event: String,
    /// First 8 bytes of the token, hex.
    pub token: String,
    pub identities: usize,
    pub detected_by: usize,
    /// Ground truth from the simulator, not known to receivers.
    pub owner: String,
    pub owner_honest: bool,
    /// Member named by the opening authority for one of the signatures.
    pub traced_to: Option<String>,
    pub judge_accepted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimReport {
    pub scenario: Scenario,
    pub seed: u64,
    pub honest_vehicles: usize,
    pub attacker_credentials: usize,
    pub claimed_identities: usize,
    pub duration_s: u64,
    pub events: Vec<String>,
    pub sizes: MessageSizes,
    pub traffic: Traffic,
    pub ops: BTreeMap<OpKind, OpStats>,
    pub budget_ms: u64,
    pub hot_path_calls: u64,
    pub hot_path_within_budget: u64,
    pub hot_path_pairings: u64,
    /// Group signatures computed before t = 0 and their modeled cost.
    pub precomputed_signatures: usize,
    pub precompute_modeled_us: u64,
    pub link: LinkStats,
    pub detections: Vec<Detection>,
    pub honest_flagged: usize,
    /// Fresh group signatures per (identity, event index).
    pub group_signatures_per_slot: BTreeMap<(String, usize), u32>,
}

impl SimReport {
    pub fn hot_path_fraction_within_budget(&self) -> f64 {
        if self.hot_path_calls == 0 {
            1.0
        } else {
            self.hot_path_within_budget as f64 / self.hot_path_calls as f64
        }
    }

    /// Events in which an attacking credential was detected.
    pub fn detected_attack_events(&self) -> usize {
        self.detections.iter().filter(|d| !d.owner_honest).count()
    }

    /// `section,key,value` rows.
    pub fn to_rows(&self) -> String {
        let mut out = String::from("section,key,value\n");
        let mut row = |section: &str, key: &str, value: String| {
            let _ = writeln!(out, "{section},{key},{value}");
        };
        row("run", "scenario", self.scenario.to_string());
        row("run", "seed", self.seed.to_string());
        row("run", "honest_vehicles", self.honest_vehicles.to_string());
        row("run", "attacker_credentials", self.attacker_credentials.to_string());
        row("run", "claimed_identities", self.claimed_identities.to_string());
        row("run", "duration_s", self.duration_s.to_string());
        row("run", "events", self.events.len().to_string());
        row("size", "group_signature", self.sizes.group_signature.to_string());
        row("size", "event_signature", self.sizes.event_signature.to_string());
        row("size", "token", self.sizes.token.to_string());
        row("size", "rsu_signature", self.sizes.rsu_signature.to_string());
        let t = &self.traffic;
        for (k, v) in [
            ("group_signatures", t.group_signatures),
            ("group_rebroadcasts", t.group_rebroadcasts),
            ("event_messages", t.event_messages),
            ("rsu_messages", t.rsu_messages),
            ("deliveries", t.deliveries),
            ("dropped", t.dropped),
            ("unverifiable", t.unverifiable),
            ("rejected", t.rejected),
            ("bytes_on_air", t.bytes_on_air),
        ] {
            row("traffic", k, v.to_string());
        }
        for (kind, s) in &self.ops {
            let name = kind.name();
            row("op", &format!("{name}.calls"), s.calls.to_string());
            row("op", &format!("{name}.modeled_cost_us"), s.modeled_cost_us.to_string());
            row("op", &format!("{name}.max_latency_us"), s.max_latency_us.to_string());
            row("op", &format!("{name}.over_budget"), s.over_budget.to_string());
            row("op", &format!("{name}.pairings"), s.ops.pairings.to_string());
        }
        row("budget", "budget_ms", self.budget_ms.to_string());
        row("budget", "hot_path_calls", self.hot_path_calls.to_string());
        row("budget", "hot_path_within_budget", self.hot_path_within_budget.to_string());
        row("budget", "hot_path_pairings", self.hot_path_pairings.to_string());
        row("precompute", "signatures", self.precomputed_signatures.to_string());
        row("precompute", "modeled_us", self.precompute_modeled_us.to_string());
        row("link", "tokens", self.link.tokens.to_string());
        row("link", "max_identities_per_token", self.link.max_identities_per_token.to_string());
        row("link", "cross_event_collisions", self.link.cross_event_collisions.to_string());
        row("sybil", "detections", self.detections.len().to_string());
        row("sybil", "honest_flagged", self.honest_flagged.to_string());
        for (i, d) in self.detections.iter().enumerate() {
            row(
                "detection",
                &i.to_string(),
                format!(
                    "{}|{}|{}|{}|{}|{}|{}",
                    d.event,
                    d.token,
                    d.identities,
                    d.detected_by,
                    d.owner,
                    d.traced_to.as_deref().unwrap_or("-"),
                    d.judge_accepted
                ),
            );
        }
        out
    }

    /// Human-readable summary.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let t = &self.traffic;
        let _ = writeln!(out, "scenario        {} (seed {})", self.scenario, self.seed);
        let _ = writeln!(
            out,
            "vehicles        {} honest, {} attacking credential(s) x {} identities",
            self.honest_vehicles, self.attacker_credentials, self.claimed_identities
        );
        let _ = writeln!(
            out,
            "events          {} ({} .. {})",
            self.events.len(),
            self.events.first().map(String::as_str).unwrap_or("-"),
            self.events.last().map(String::as_str).unwrap_or("-")
        );
        let _ = writeln!(
            out,
            "sizes (bytes)   group sig {}, event sig {}, token {}, rsu sig {}",
            self.sizes.group_signature, self.sizes.event_signature, self.sizes.token, self.sizes.rsu_signature
        );
        let _ = writeln!(
            out,
            "traffic         {} group sigs (+{} rebroadcast), {} event msgs, {} rsu msgs, {} bytes",
            t.group_signatures, t.group_rebroadcasts, t.event_messages, t.rsu_messages, t.bytes_on_air
        );
        let _ = writeln!(
            out,
            "deliveries      {} delivered, {} dropped, {} unverifiable, {} rejected",
            t.deliveries, t.dropped, t.unverifiable, t.rejected
        );
        let _ = writeln!(out, "operation       calls    modeled ms/call   max latency ms   over budget");
        for (kind, s) in &self.ops {
            let per_call = if s.calls == 0 { 0.0 } else { s.modeled_cost_us as f64 / s.calls as f64 / 1000.0 };
            let _ = writeln!(
                out,
                "  {:<12} {:>8}  {:>16.3}  {:>15.3}  {:>12}",
                kind.name(),
                s.calls,
                per_call,
                s.max_latency_us as f64 / 1000.0,
                s.over_budget
            );
        }
        let _ = writeln!(
            out,
            "hot path        {}/{} within {} ms ({:.2}%), {} pairings",
            self.hot_path_within_budget,
            self.hot_path_calls,
            self.budget_ms,
            100.0 * self.hot_path_fraction_within_budget(),
            self.hot_path_pairings
        );
        if self.precomputed_signatures > 0 {
            let _ = writeln!(
                out,
                "precomputed     {} group signatures offline, modeled {:.3} s",
                self.precomputed_signatures,
                self.precompute_modeled_us as f64 / 1e6
            );
        }
        let _ = writeln!(
            out,
            "link table      {} tokens, max {} identities per token, {} cross-event collisions",
            self.link.tokens, self.link.max_identities_per_token, self.link.cross_event_collisions
        );
        let _ = writeln!(
            out,
            "sybil           {} detection(s), {} honest vehicle(s) flagged",
            self.detections.len(),
            self.honest_flagged
        );
        for d in &self.detections {
            let _ = writeln!(
                out,
                "  {} token {}: {} identities seen by {} receiver(s); opened to {} (judge {})",
                d.event,
                d.token,
                d.identities,
                d.detected_by,
                d.traced_to.as_deref().unwrap_or("nobody"),
                if d.judge_accepted { "accepts" } else { "rejects" }
            );
        }
        out
    }
}

/// Host wall-clock measurements. These vary run to run and are kept out
/// of [`SimReport`].
#[derive(Clone, Debug, Default)]
pub struct MeasuredTimings {
    pub total: Duration,
    pub offline_precompute: Duration,
    pub per_op: BTreeMap<OpKind, (u64, Duration)>,
}

impl MeasuredTimings {
    pub fn record(&mut self, kind: OpKind, elapsed: Duration) {
        let e = self.per_op.entry(kind).or_default();
        e.0 += 1;
        e.1 += elapsed;
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "measured        total {:.3} s, offline precompute {:.3} s\n",
            self.total.as_secs_f64(),
            self.offline_precompute.as_secs_f64()
        );
        for (kind, (n, d)) in &self.per_op {
            let mean = if *n == 0 { 0.0 } else { d.as_secs_f64() * 1e3 / *n as f64 };
            let _ = writeln!(out, "  {:<12} {:>8} computed, mean {:.3} ms", kind.name(), n, mean);
        }
        out
    }
}

/// Host cost of preparing a day of time-slot signatures.
#[derive(Clone, Debug)]
pub struct PrecomputeReport {
    pub slots: usize,
    pub total: Duration,
    pub per_signature: Duration,
    pub all_valid: bool,
    /// Reference figures for 144 signatures: laptop and Raspberry Pi 3.
    pub reference_laptop_s: f64,
    pub reference_rpi_s: f64,
}
