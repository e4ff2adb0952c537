use serde::Serialize;

use crate::ledger::LedgerSnapshot;
use crate::protocol::Adversary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    PaidDelivered,
    RefundedUndelivered,
    Violation,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::PaidDelivered => "paid-delivered",
            Outcome::RefundedUndelivered => "refunded-undelivered",
            Outcome::Violation => "violation",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConservationCheck {
    pub minted: u64,
    pub final_total: u64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VendorSummary {
    pub funds: u64,
    pub payouts: u64,
    pub refund: u64,
    pub final_balance: u64,
    pub registered_nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeSummary {
    pub name: String,
    pub registered: bool,
    pub has_update: bool,
    pub paid: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claim: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeviceSummary {
    pub id: String,
    pub gateway: String,
    pub node: String,
    pub policy: String,
    pub delivered: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub firmware: Option<String>,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingRow {
    pub step: String,
    pub total_ms: f64,
}

/// Result of one run. Timings are only present when requested, so reports
/// for the same seed compare byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub seed: u64,
    pub adversary: Adversary,
    pub update_id: String,
    pub contract: u64,
    pub outcome: Outcome,
    pub expected: Outcome,
    pub matches_expectation: bool,
    pub conservation: ConservationCheck,
    pub vendor: VendorSummary,
    pub nodes: Vec<NodeSummary>,
    pub devices: Vec<DeviceSummary>,
    pub ledger: LedgerSnapshot,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<TimingRow>>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Machine-readable reason when the outcome differs from the
    /// expectation.
    pub fn failure_reason(&self) -> Option<String> {
        if self.matches_expectation {
            return None;
        }
        Some(format!(
            "outcome {} but expected {} (conservation {})",
            self.outcome,
            self.expected,
            if self.conservation.holds {
                "ok"
            } else {
                "broken"
            }
        ))
    }
}
