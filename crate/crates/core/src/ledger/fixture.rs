//! Shared test scaffolding: small parameters, one device key and helpers
//! that build valid claims.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::algebra::{digest, GroupElement};
use crate::daps::{daps_kgen, daps_setup, daps_sign, DapsAddress, DapsKeypair, DapsSignature};
use crate::oabs::{
    oabs_keygen, oabs_setup, oabs_sign, oabs_sign_out, DeviceSigningKey, OabsSignature,
    PublicParams,
};
use crate::payload::{ledger_keygen, LedgerKeypair};
use crate::policy::{policy_to_lsss, AttributeSet};

use super::{claim_digest, DeployRequest, LedgerState, Transaction, TxPayload};

pub struct Fixture {
    pub rng: ChaCha20Rng,
    pub params: PublicParams,
    pub device: DeviceSigningKey,
    pub w: AttributeSet,
    pub vendor: LedgerKeypair,
    pub nodes: Vec<(LedgerKeypair, DapsKeypair)>,
    pub ledger: LedgerState,
    pub update_id: [u8; 32],
}

impl Fixture {
    pub fn new(seed: u64, node_count: usize, vendor_funds: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let (params, msk) = oabs_setup(128, 4, 32, &mut rng).unwrap();
        let access = policy_to_lsss("A").unwrap();
        let (_, device) = oabs_keygen(&params, &msk, &access, &mut rng).unwrap();
        let w = params.attribute_set(&["A"]).unwrap();
        let vendor = ledger_keygen(&mut rng);
        let daps = daps_setup();
        let nodes: Vec<_> = (0..node_count)
            .map(|_| (ledger_keygen(&mut rng), daps_kgen(&daps, &mut rng)))
            .collect();
        let ledger = LedgerState::genesis(params.clone(), &[(*vendor.pk(), vendor_funds)]).unwrap();
        Fixture {
            rng,
            params,
            device,
            w,
            vendor,
            nodes,
            ledger,
            update_id: digest(b"firmware v2"),
        }
    }

    pub fn deploy_request(
        &self,
        devices: u64,
        incentive: u64,
        funds: u64,
        deadline: u64,
    ) -> DeployRequest {
        DeployRequest {
            deadline,
            update_id: self.update_id,
            devices,
            attributes: self.w.clone(),
            node_keys: self.nodes.iter().map(|(_, d)| *d.pk()).collect(),
            incentive,
            funds,
        }
    }

    pub fn publish(&mut self, req: DeployRequest) -> u64 {
        let nonce = self.ledger.nonce(self.vendor.pk());
        let tx = Transaction::sign(&self.vendor, nonce, TxPayload::Publish(req), &mut self.rng);
        self.ledger.submit(&tx).unwrap().contract.unwrap()
    }

    pub fn oabs_for(&mut self, pk_t: &GroupElement) -> OabsSignature {
        let partial = oabs_sign_out(
            &self.params,
            self.device.outsourcing_key(),
            &self.w,
            &mut self.rng,
        )
        .unwrap();
        oabs_sign(
            &self.params,
            &pk_t.to_bytes(),
            &self.device,
            &partial,
            &mut self.rng,
        )
        .unwrap()
    }

    pub fn daps_for(&self, node: usize, contract: u64, oabs: &OabsSignature) -> DapsSignature {
        let (ledger_kp, daps_kp) = &self.nodes[node];
        let addr = DapsAddress::session(daps_kp.pk(), &self.update_id);
        let payload = claim_digest(
            contract,
            &self.update_id,
            daps_kp.pk(),
            ledger_kp.pk(),
            oabs,
        );
        daps_sign(&daps_setup(), daps_kp.sk(), &addr, &payload)
    }

    pub fn claim_tx(&mut self, node: usize, contract: u64) -> Transaction {
        let pk_t = *self.nodes[node].1.pk();
        let oabs = self.oabs_for(&pk_t);
        let daps = self.daps_for(node, contract, &oabs);
        self.claim_tx_with(node, contract, pk_t, oabs, daps)
    }

    pub fn claim_tx_with(
        &mut self,
        node: usize,
        contract: u64,
        pk_t: GroupElement,
        oabs: OabsSignature,
        daps: DapsSignature,
    ) -> Transaction {
        let kp = self.nodes[node].0.clone();
        let nonce = self.ledger.nonce(kp.pk());
        Transaction::sign(
            &kp,
            nonce,
            TxPayload::Claim {
                contract,
                pk_t,
                oabs,
                daps,
            },
            &mut self.rng,
        )
    }

    pub fn withdraw_tx(&mut self, kp: &LedgerKeypair, contract: u64) -> Transaction {
        let nonce = self.ledger.nonce(kp.pk());
        Transaction::sign(kp, nonce, TxPayload::Withdraw { contract }, &mut self.rng)
    }
}
