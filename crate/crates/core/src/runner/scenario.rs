use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use thiserror::Error;

use crate::daps::{daps_kgen, daps_setup, DAPS_SIGNATURE_BYTES};
use crate::ledger::{LedgerError, LedgerState};
use crate::oabs::{oabs_setup, OabsError, OabsSignature, PublicParams};
use crate::payload::ledger_keygen;
use crate::policy::{AttributeSet, PolicyError};
use crate::protocol::{Adversary, Device, Gateway, ProtocolError, Trace, TransmissionNode, Vendor};

use super::config::{ConfigError, ScenarioConfig};
use super::report::{
    ConservationCheck, DeviceSummary, NodeSummary, Outcome, RunReport, TimingRow, VendorSummary,
};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("setup failed: {0}")]
    Setup(String),
}

impl From<OabsError> for RunError {
    fn from(e: OabsError) -> Self {
        RunError::Setup(e.to_string())
    }
}

impl From<ProtocolError> for RunError {
    fn from(e: ProtocolError) -> Self {
        RunError::Setup(e.to_string())
    }
}

impl From<LedgerError> for RunError {
    fn from(e: LedgerError) -> Self {
        RunError::Setup(e.to_string())
    }
}

impl From<PolicyError> for RunError {
    fn from(e: PolicyError) -> Self {
        RunError::Setup(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Include wall-clock timings in the report.
    pub timings: bool,
}

/// A finished run: the report plus the exported logs.
#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub report: RunReport,
    /// Ledger events, one JSON object per line.
    pub event_log: String,
    /// Actor messages, one JSON object per line.
    pub trace: String,
    /// The bytes the vendor published.
    pub payload: Vec<u8>,
}

#[derive(Default)]
struct Timer {
    enabled: bool,
    rows: Vec<(&'static str, Duration)>,
}

impl Timer {
    fn add(&mut self, step: &'static str, since: Instant) {
        if !self.enabled {
            return;
        }
        let d = since.elapsed();
        match self.rows.iter_mut().find(|(s, _)| *s == step) {
            Some((_, total)) => *total += d,
            None => self.rows.push((step, d)),
        }
    }
}

struct World {
    cfg: ScenarioConfig,
    rng: ChaCha20Rng,
    trace: Trace,
    timer: Timer,
    params: PublicParams,
    vendor: Vendor,
    nodes: Vec<TransmissionNode>,
    gateways: Vec<Gateway>,
    devices: Vec<Device>,
    ledger: LedgerState,
    w: AttributeSet,
    contract: u64,
    update_id: [u8; 32],
    notes: Vec<Option<String>>,
    claims: Vec<Option<String>>,
}

impl World {
    fn gateway_of(&self, device: usize) -> usize {
        device % self.gateways.len()
    }

    /// Query, notification and both signing rounds for one device. Returns
    /// the attribute signature the node received, if any.
    fn session(&mut self, i: usize) -> Result<Option<OabsSignature>, ProtocolError> {
        let epoch = self.ledger.height();
        let g = self.gateway_of(i);
        let vendor_name = self.vendor.name().to_owned();
        let node_name = self.nodes[i].name().to_owned();
        let gw_name = self.gateways[g].name().to_owned();
        let dev_name = self.devices[i].id().to_owned();

        let t = Instant::now();
        let pk_t = *self.nodes[i].pk_t();
        self.trace
            .record(epoch, &node_name, &vendor_name, "query", 32);
        let pkg = self
            .vendor
            .serve_query(&pk_t, &self.update_id, &mut self.rng)?;
        self.trace.record(
            epoch,
            &vendor_name,
            &node_name,
            "update-package",
            pkg.size(),
        );
        self.nodes[i].fetch(self.vendor.pk(), pkg)?;
        self.timer.add("query", t);

        let t = Instant::now();
        self.trace
            .record(epoch, &node_name, &gw_name, "notification", 48 + 32);
        let (sid, challenge) = self.gateways[g].notify(
            &dev_name,
            &pk_t,
            &self.update_id,
            self.contract,
            &mut self.rng,
        )?;
        self.trace
            .record(epoch, &gw_name, &node_name, "challenge", challenge.len());
        self.timer.add("notification", t);

        let t = Instant::now();
        let delta1 = self.nodes[i].sign_challenge(&self.update_id, &challenge);
        self.trace
            .record(epoch, &node_name, &gw_name, "delta1", DAPS_SIGNATURE_BYTES);
        let pkg = self.nodes[i]
            .package(&self.update_id)
            .expect("fetched above")
            .clone();
        let bundle = self.gateways[g].accept_delta1(sid, delta1, &pkg)?;
        self.trace
            .record(epoch, &gw_name, &dev_name, "bundle", pkg.size() + 48);
        self.devices[i].receive_bundle(bundle)?;
        self.timer.add("sign1", t);

        if self.cfg.adversary == Adversary::DeviceWithholdsGamma {
            return Ok(None);
        }

        let t = Instant::now();
        let ok = self.devices[i].outsourcing_key();
        self.trace.record(
            epoch,
            &dev_name,
            &gw_name,
            "outsourcing-key",
            ok.to_bytes().len(),
        );
        let partial = self.gateways[g].sign_out(&self.params, ok, &self.w, &mut self.rng)?;
        self.trace.record(
            epoch,
            &gw_name,
            &dev_name,
            "partial-signature",
            partial.to_bytes().len(),
        );
        self.timer.add("sign-out", t);

        let t = Instant::now();
        let gamma = self.devices[i].complete(&self.params, &partial, &mut self.rng)?;
        let size = gamma.to_bytes().len();
        self.trace.record(epoch, &dev_name, &gw_name, "gamma", size);
        self.trace
            .record(epoch, &gw_name, &node_name, "gamma", size);
        self.timer.add("sign", t);
        Ok(Some(gamma))
    }

    fn claim(&mut self, i: usize, gamma: OabsSignature) {
        let t = Instant::now();
        let sign_claim = self.cfg.adversary != Adversary::NodeSkipsDelta2;
        let tx = self.nodes[i].claim(
            &self.ledger,
            self.contract,
            &self.update_id,
            gamma,
            sign_claim,
            &mut self.rng,
        );
        let name = self.nodes[i].name().to_owned();
        self.trace
            .record(self.ledger.height(), &name, "ledger", "claim", 0);
        self.claims[i] = Some(match self.ledger.submit(&tx) {
            Ok(r) => format!("paid {}", r.amount),
            Err(e) => format!("rejected: {e}"),
        });
        self.timer.add("claim", t);
    }

    /// Gateways pick up confirmed claims, extract keys and hand them to the
    /// devices.
    fn deliver_keys(&mut self) {
        let t = Instant::now();
        let epoch = self.ledger.height();
        for g in 0..self.gateways.len() {
            let found = self.gateways[g].watch(&self.ledger);
            let gw_name = self.gateways[g].name().to_owned();
            for (_, device, sk) in found {
                self.trace
                    .record(epoch, &gw_name, &device, "secret-key", 32);
                let i = self
                    .devices
                    .iter()
                    .position(|d| d.id() == device)
                    .expect("gateway sessions name known devices");
                if let Err(e) = self.devices[i].install(&sk) {
                    self.notes[i] = Some(e.to_string());
                }
            }
        }
        self.timer.add("extract+install", t);
    }
}

pub fn run_scenario(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<ScenarioRun, RunError> {
    cfg.validate()?;
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    let mut timer = Timer {
        enabled: opts.timings,
        rows: Vec::new(),
    };
    let mut trace = Trace::new();

    let t = Instant::now();
    let (params, msk) = oabs_setup(128, cfg.capacity, cfg.message_bits, &mut rng)?;
    timer.add("setup", t);

    let t = Instant::now();
    let daps_params = daps_setup();
    let mut vendor = Vendor::new("vendor-0", params.clone(), msk, ledger_keygen(&mut rng));
    let nodes: Vec<_> = (0..cfg.nodes)
        .map(|i| {
            TransmissionNode::new(
                &format!("node-{i}"),
                ledger_keygen(&mut rng),
                daps_kgen(&daps_params, &mut rng),
            )
        })
        .collect();
    let mut gateways: Vec<_> = (0..cfg.gateways)
        .map(|i| Gateway::new(&format!("gateway-{i}")))
        .collect();
    let mut devices = Vec::with_capacity(cfg.devices);
    for i in 0..cfg.devices {
        let id = format!("device-{i}");
        let device = vendor.provision_device(&id, cfg.policy_for(i), &mut rng)?;
        trace.record(0, vendor.name(), &id, "device-key", 0);
        let gw = &mut gateways[i % cfg.gateways];
        gw.register_device(&id);
        trace.record(0, &id, gw.name(), "register", 0);
        devices.push(device);
    }
    timer.add("keygen", t);

    for (i, node) in nodes.iter().enumerate() {
        if cfg.adversary == Adversary::UnregisteredNode && i < cfg.devices {
            continue;
        }
        vendor.register_node(node.pk_t());
        trace.record(0, node.name(), vendor.name(), "register", 48);
    }

    let funds = cfg.devices as u64 * cfg.incentive;
    let mut ledger = LedgerState::genesis(params.clone(), &[(*vendor.pk(), funds)])?;
    let mut payload = vec![0u8; cfg.payload_bytes];
    rng.fill_bytes(&mut payload);
    let w = params.attribute_set(&cfg.attributes)?;

    let t = Instant::now();
    let (contract, update_id) = vendor.publish(
        &mut ledger,
        payload.clone(),
        cfg.deadline,
        cfg.devices as u64,
        w.clone(),
        cfg.incentive,
        &mut rng,
    )?;
    trace.record(0, vendor.name(), "ledger", "publish", 0);
    timer.add("publish", t);
    ledger.advance_epoch();

    let mut world = World {
        cfg: cfg.clone(),
        rng,
        trace,
        timer,
        params,
        vendor,
        nodes,
        gateways,
        devices,
        ledger,
        w,
        contract,
        update_id,
        notes: vec![None; cfg.devices],
        claims: vec![None; cfg.nodes],
    };

    let mut order: Vec<usize> = (0..cfg.devices).collect();
    order.shuffle(&mut world.rng);

    let mut gammas: Vec<Option<OabsSignature>> = vec![None; cfg.devices];
    for &i in &order {
        match world.session(i) {
            Ok(g) => {
                if g.is_none() {
                    world.notes[i] = Some("device withheld its signature".into());
                }
                gammas[i] = g;
            }
            Err(e) => world.notes[i] = Some(e.to_string()),
        }
    }

    let late = cfg.adversary == Adversary::LateClaim;
    if !late {
        for &i in &order {
            if let Some(g) = gammas[i].take() {
                world.claim(i, g);
            }
        }
    }
    world.ledger.advance_epoch();
    world.deliver_keys();

    while world.ledger.height() <= cfg.deadline {
        world.ledger.advance_epoch();
    }
    if late {
        for &i in &order {
            if let Some(g) = gammas[i].take() {
                world.claim(i, g);
            }
        }
        world.ledger.advance_epoch();
        world.deliver_keys();
    }

    let t = Instant::now();
    let refund = world
        .vendor
        .withdraw(&mut world.ledger, contract, &mut world.rng)?;
    world.trace.record(
        world.ledger.height(),
        world.vendor.name(),
        "ledger",
        "withdraw",
        0,
    );
    world.timer.add("withdraw", t);

    Ok(build_report(world, funds, refund, payload))
}

fn build_report(world: World, funds: u64, refund: u64, payload: Vec<u8>) -> ScenarioRun {
    let cfg = &world.cfg;
    let contract = world.ledger.contract(world.contract).expect("deployed");
    let payouts: u64 = contract.claims.iter().map(|r| r.amount).sum();

    let mut devices = Vec::new();
    for (i, d) in world.devices.iter().enumerate() {
        let node = &world.nodes[i];
        let paid = contract.claims.iter().any(|r| r.pk_t == *node.pk_t());
        let delivered = d.installed() == Some(payload.as_slice());
        let outcome = match (paid, delivered) {
            (true, true) => Outcome::PaidDelivered,
            (false, false) => Outcome::RefundedUndelivered,
            _ => Outcome::Violation,
        };
        devices.push(DeviceSummary {
            id: d.id().to_owned(),
            gateway: world.gateways[world.gateway_of(i)].name().to_owned(),
            node: node.name().to_owned(),
            policy: cfg.policy_for(i).to_owned(),
            delivered,
            firmware: d.firmware().map(hex::encode),
            outcome,
            note: world.notes[i].clone(),
        });
    }

    let conservation = ConservationCheck {
        minted: world.ledger.minted(),
        final_total: world.ledger.total_supply(),
        holds: world.ledger.conservation_holds(),
    };
    let refund_ok = refund == funds - payouts;
    let outcome = if !conservation.holds
        || !refund_ok
        || devices.iter().any(|d| d.outcome == Outcome::Violation)
    {
        Outcome::Violation
    } else if devices
        .iter()
        .any(|d| d.outcome == Outcome::RefundedUndelivered)
    {
        Outcome::RefundedUndelivered
    } else {
        Outcome::PaidDelivered
    };
    let all_can_sign = world.devices.iter().all(|d| d.can_sign(&world.w));
    let expected = if cfg.adversary == Adversary::Honest && all_can_sign {
        Outcome::PaidDelivered
    } else {
        Outcome::RefundedUndelivered
    };

    let nodes = world
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| NodeSummary {
            name: n.name().to_owned(),
            registered: world.vendor.registered_nodes().contains(n.pk_t()),
            has_update: n.update(&world.update_id).is_some(),
            paid: world.ledger.balance(n.account()),
            claim: world.claims[i].clone(),
        })
        .collect();

    let timings = world.timer.enabled.then(|| {
        world
            .timer
            .rows
            .iter()
            .map(|(step, d)| TimingRow {
                step: (*step).to_owned(),
                total_ms: d.as_secs_f64() * 1e3,
            })
            .collect()
    });

    let report = RunReport {
        seed: cfg.seed,
        adversary: cfg.adversary,
        update_id: hex::encode(world.update_id),
        contract: world.contract,
        outcome,
        expected,
        matches_expectation: outcome == expected,
        conservation,
        vendor: VendorSummary {
            funds,
            payouts,
            refund,
            final_balance: world.ledger.balance(world.vendor.pk()),
            registered_nodes: world.vendor.registered_nodes().len(),
        },
        nodes,
        devices,
        ledger: world.ledger.snapshot(),
        timings,
    };
    ScenarioRun {
        report,
        event_log: world.ledger.event_log_jsonl(),
        trace: world.trace.to_jsonl(),
        payload,
    }
}

/// One cell of the adversary-by-seed matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteRow {
    pub adversary: Adversary,
    pub seed: u64,
    pub outcome: Outcome,
    pub expected: Outcome,
    pub refund: u64,
    pub payouts: u64,
    pub ok: bool,
}

/// Runs every adversary against every seed on top of `base`.
pub fn run_suite(base: &ScenarioConfig, seeds: &[u64]) -> Result<Vec<SuiteRow>, RunError> {
    let mut rows = Vec::new();
    for adversary in Adversary::ALL {
        for &seed in seeds {
            let cfg = ScenarioConfig {
                seed,
                adversary,
                ..base.clone()
            };
            let run = run_scenario(&cfg, &RunOptions::default())?;
            let r = &run.report;
            rows.push(SuiteRow {
                adversary,
                seed,
                outcome: r.outcome,
                expected: r.expected,
                refund: r.vendor.refund,
                payouts: r.vendor.payouts,
                ok: r.matches_expectation,
            });
        }
    }
    Ok(rows)
}
