use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::hash_to_attribute;
use crate::policy::Formula;
use crate::protocol::Adversary;

/// Largest update payload a scenario may request.
pub const MAX_PAYLOAD_BYTES: usize = 64 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid config field `{field}`: {reason}")]
pub struct ConfigError {
    pub field: &'static str,
    pub reason: String,
}

fn err(field: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError {
        field,
        reason: reason.into(),
    }
}

/// Everything a run depends on. All randomness derives from `seed`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub vendors: usize,
    pub nodes: usize,
    pub gateways: usize,
    pub devices: usize,
    /// Attribute capacity `n`.
    pub capacity: usize,
    /// Message-hash length `l`.
    pub message_bits: usize,
    /// Device policies, assigned round-robin.
    pub policies: Vec<String>,
    /// Signing attribute set `W` written into the contract.
    pub attributes: Vec<String>,
    pub incentive: u64,
    /// Limitation time, in epochs.
    pub deadline: u64,
    pub adversary: Adversary,
    pub payload_bytes: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            seed: 1,
            vendors: 1,
            nodes: 1,
            gateways: 1,
            devices: 1,
            capacity: 16,
            message_bits: 256,
            policies: vec!["(A AND B) OR C".into()],
            attributes: vec!["A".into(), "B".into()],
            incentive: 10,
            deadline: 4,
            adversary: Adversary::Honest,
            payload_bytes: 4096,
        }
    }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: ScenarioConfig =
            toml::from_str(text).map_err(|e| err("config", e.message().to_owned()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn policy_for(&self, device: usize) -> &str {
        &self.policies[device % self.policies.len()]
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.vendors != 1 {
            return Err(err("vendors", "exactly one vendor is simulated"));
        }
        if self.devices == 0 {
            return Err(err("devices", "at least one device is required"));
        }
        if self.gateways == 0 {
            return Err(err("gateways", "at least one gateway is required"));
        }
        if self.nodes < self.devices {
            return Err(err(
                "nodes",
                format!(
                    "each device needs its own transmission node ({} nodes for {} devices)",
                    self.nodes, self.devices
                ),
            ));
        }
        if self.capacity < 3 {
            return Err(err("capacity", "must be at least 3"));
        }
        if self.message_bits == 0 {
            return Err(err("message_bits", "must be positive"));
        }
        let mut w: Vec<_> = self
            .attributes
            .iter()
            .map(|a| hash_to_attribute(a.as_bytes()))
            .collect();
        w.sort();
        w.dedup();
        if w.len() + 2 > self.capacity {
            return Err(err(
                "attributes",
                format!(
                    "{} attributes exceed capacity - 2 = {}",
                    w.len(),
                    self.capacity - 2
                ),
            ));
        }
        if self.policies.is_empty() {
            return Err(err("policies", "at least one policy is required"));
        }
        for p in &self.policies {
            Formula::parse(p).map_err(|e| err("policies", format!("{p:?}: {e}")))?;
        }
        if self.incentive == 0 {
            return Err(err("incentive", "must be positive"));
        }
        if (self.devices as u64).checked_mul(self.incentive).is_none() {
            return Err(err("incentive", "devices * incentive overflows"));
        }
        if self.deadline == 0 {
            return Err(err("deadline", "must be at least 1"));
        }
        if self.payload_bytes > MAX_PAYLOAD_BYTES {
            return Err(err("payload_bytes", format!("at most {MAX_PAYLOAD_BYTES}")));
        }
        Ok(())
    }
}
