//! Per-entity protocol transcripts.
//!
//! A transcript records every message field an entity sends or receives,
//! nothing else. The anonymity properties of the provisioning flow are
//! asserted over these records: some as byte-substring searches (a secret
//! must not appear anywhere inside any recorded value), others as
//! field-value equality (an entity handles a value as a protocol field of
//! its own).

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Sent,
    Received,
}

#[derive(Debug, Clone)]
pub struct TranscriptEntry {
    pub direction: Direction,
    pub field: String,
    pub value: Vec<u8>,
}

#[derive(Debug, Clone, Default)]
pub struct Transcript {
    entries: Vec<TranscriptEntry>,
}

impl Transcript {
    pub fn new() -> Transcript {
        Transcript::default()
    }

    pub fn record(&mut self, direction: Direction, field: impl Into<String>, value: &[u8]) {
        self.entries.push(TranscriptEntry {
            direction,
            field: field.into(),
            value: value.to_vec(),
        });
    }

    pub fn record_sent(&mut self, field: impl Into<String>, value: &[u8]) {
        self.record(Direction::Sent, field, value);
    }

    pub fn record_received(&mut self, field: impl Into<String>, value: &[u8]) {
        self.record(Direction::Received, field, value);
    }

    pub fn entries(&self) -> &[TranscriptEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    /// True if `needle` occurs as a contiguous byte run inside any recorded
    /// value (the strong containment notion).
    pub fn any_value_contains(&self, needle: &[u8]) -> bool {
        if needle.is_empty() {
            return false;
        }
        self.entries.iter().any(|e| {
            e.value.len() >= needle.len() && e.value.windows(needle.len()).any(|w| w == needle)
        })
    }

    /// True if some recorded field value equals `needle` exactly (the entity
    /// handled the value as a protocol field in its own right).
    pub fn any_value_equals(&self, needle: &[u8]) -> bool {
        self.entries.iter().any(|e| e.value == needle)
    }
}
