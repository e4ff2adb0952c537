use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub seq: u64,
    pub epoch: u64,
    pub from: String,
    pub to: String,
    pub message: String,
    pub bytes: usize,
}

/// Ordered log of actor-to-actor messages.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    entries: Vec<TraceEntry>,
}

impl Trace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, epoch: u64, from: &str, to: &str, message: &str, bytes: usize) {
        self.entries.push(TraceEntry {
            seq: self.entries.len() as u64,
            epoch,
            from: from.to_owned(),
            to: to.to_owned(),
            message: message.to_owned(),
            bytes,
        });
    }

    pub fn entries(&self) -> &[TraceEntry] {
        &self.entries
    }

    pub fn to_jsonl(&self) -> String {
        self.entries
            .iter()
            .map(|e| serde_json::to_string(e).expect("trace entry serializes") + "\n")
            .collect()
    }
}
