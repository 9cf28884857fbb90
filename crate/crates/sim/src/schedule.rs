//! Event identifiers for each scenario.

use aee_core::groupsig::EventId;
use chrono::{Duration, NaiveDateTime};

use crate::SimError;

pub(crate) fn parse_start(start: &str) -> Result<NaiveDateTime, SimError> {
    NaiveDateTime::parse_from_str(start, "%Y%m%d%H%M")
        .map_err(|_| SimError::Config(format!("start {start:?} is not YYYYMMDDhhmm")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EventMode {
    /// The RSU announces `location||timestamp`.
    RsuGenerated { location: String },
    /// The event is the slot's own timestamp, known to everyone in advance.
    Timeslot,
}

/// Rotating events: slot `k` starts at `start + k·slot` and every vehicle
/// in that slot uses the same identifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventSchedule {
    pub mode: EventMode,
    start: NaiveDateTime,
    slot_s: u64,
    slots: usize,
}

impl EventSchedule {
    pub fn new(mode: EventMode, start: &str, slot_s: u64, slots: usize) -> Result<Self, SimError> {
        if slot_s == 0 {
            return Err(SimError::Config("event slot must be positive".into()));
        }
        Ok(EventSchedule {
            mode,
            start: parse_start(start)?,
            slot_s,
            slots,
        })
    }

    /// The 24-hour timeslot schedule beginning at `start`.
    pub fn day(start: &str, slot_s: u64) -> Result<Self, SimError> {
        let slots = (86_400 / slot_s.max(1)) as usize;
        EventSchedule::new(EventMode::Timeslot, start, slot_s, slots)
    }

    pub fn len(&self) -> usize {
        self.slots
    }

    pub fn is_empty(&self) -> bool {
        self.slots == 0
    }

    pub fn slot_ms(&self) -> u64 {
        self.slot_s * 1000
    }

    pub fn slot_of(&self, t_ms: u64) -> usize {
        (t_ms / self.slot_ms()) as usize
    }

    /// Timestamp of the slot start: minutes when slots are whole minutes,
    /// otherwise seconds as well, so labels never collide.
    pub fn label(&self, slot: usize) -> String {
        let at = self.start + Duration::seconds((slot as u64 * self.slot_s) as i64);
        if self.slot_s % 60 == 0 {
            at.format("%Y%m%d%H%M").to_string()
        } else {
            at.format("%Y%m%d%H%M%S").to_string()
        }
    }

    pub fn event(&self, slot: usize) -> EventId {
        let text = match &self.mode {
            EventMode::RsuGenerated { location } => format!("{location}||{}", self.label(slot)),
            EventMode::Timeslot => self.label(slot),
        };
        EventId::new(text).expect("labels are never empty")
    }

    pub fn events(&self) -> Vec<EventId> {
        (0..self.slots).map(|k| self.event(k)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn ten_minute_day_has_144_distinct_slots() {
        let s = EventSchedule::day("201703011000", 600).unwrap();
        assert_eq!(s.len(), 144);
        assert_eq!(s.event(0).to_string(), "201703011000");
        assert_eq!(s.event(1).to_string(), "201703011010");
        assert_eq!(s.event(143).to_string(), "201703020950");
        let all: HashSet<_> = s.events().into_iter().collect();
        assert_eq!(all.len(), 144);
    }

    #[test]
    fn rsu_events_carry_location() {
        let s = EventSchedule::new(EventMode::RsuGenerated { location: "j7".into() }, "201703011000", 600, 2).unwrap();
        assert_eq!(s.event(1).to_string(), "j7||201703011010");
        assert_eq!(s.slot_of(599_999), 0);
        assert_eq!(s.slot_of(600_000), 1);
    }

    #[test]
    fn sub_minute_slots_keep_seconds() {
        let s = EventSchedule::new(EventMode::Timeslot, "201703011000", 30, 4).unwrap();
        let all: HashSet<_> = s.events().into_iter().collect();
        assert_eq!(all.len(), 4);
        assert_eq!(s.event(1).to_string(), "20170301100030");
    }
}
