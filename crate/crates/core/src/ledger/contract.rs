use std::collections::BTreeSet;

use crate::algebra::{digest, Encoder, GroupElement, G1_BYTES};
use crate::daps::{daps_verify, DapsAddress, DapsParams, DapsSignature};
use crate::oabs::{oabs_verify, OabsSignature, PublicParams};
use crate::policy::AttributeSet;

use super::LedgerError;

/// Arguments of a proof-of-delivery deployment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeployRequest {
    /// Limitation time: last epoch at which claims are accepted.
    pub deadline: u64,
    /// `D_id`, the digest of the update binary.
    pub update_id: [u8; 32],
    /// Number of devices to be updated.
    pub devices: u64,
    pub attributes: AttributeSet,
    /// DAPS public keys of registered transmission nodes.
    pub node_keys: Vec<GroupElement>,
    pub incentive: u64,
    pub funds: u64,
}

impl DeployRequest {
    pub(crate) fn encode_into(&self, enc: &mut Encoder) {
        enc.u64(self.deadline)
            .bytes(&self.update_id)
            .u64(self.devices);
        self.attributes.encode_into(enc);
        enc.u64(self.node_keys.len() as u64);
        for k in &self.node_keys {
            enc.point(k);
        }
        enc.u64(self.incentive).u64(self.funds);
    }
}

/// A successful claim as recorded on chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimRecord {
    pub epoch: u64,
    pub payee: GroupElement,
    pub pk_t: GroupElement,
    pub oabs: OabsSignature,
    pub daps: DapsSignature,
    pub amount: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractState {
    pub id: u64,
    pub owner: GroupElement,
    pub limitation_time: u64,
    pub update_id: [u8; 32],
    pub public_key_list: Vec<GroupElement>,
    pub attribute_set: AttributeSet,
    pub counter_updated_device: i64,
    pub incentive: u64,
    pub balance: u64,
    pub claimed: BTreeSet<[u8; G1_BYTES]>,
    pub claims: Vec<ClaimRecord>,
}

/// Payload signed by the node's second DAPS signature: a digest of the claim
/// fields, so it always differs from the gateway challenge.
pub fn claim_digest(
    contract: u64,
    update_id: &[u8; 32],
    pk_t: &GroupElement,
    payee: &GroupElement,
    oabs: &OabsSignature,
) -> [u8; 32] {
    let mut enc = Encoder::new();
    enc.bytes(b"podchain/claim/v1")
        .u64(contract)
        .bytes(update_id)
        .point(pk_t)
        .point(payee)
        .bytes(&oabs.to_bytes());
    digest(&enc.finish())
}

impl ContractState {
    /// Validates and creates the contract. The caller moves `funds` from the
    /// owner's account.
    pub fn deploy(
        id: u64,
        owner: GroupElement,
        req: &DeployRequest,
        params: &PublicParams,
    ) -> Result<Self, LedgerError> {
        if req.devices == 0 {
            return Err(LedgerError::Deployment(
                "device count must be positive".into(),
            ));
        }
        let required = req
            .devices
            .checked_mul(req.incentive)
            .ok_or(LedgerError::Overflow)?;
        if req.funds < required {
            return Err(LedgerError::Deployment(format!(
                "funds {} below n*x = {required}",
                req.funds
            )));
        }
        if req.attributes.len() + 2 > params.capacity() {
            return Err(LedgerError::Deployment(
                "attribute set exceeds capacity".into(),
            ));
        }
        let counter = i64::try_from(req.devices - 1).map_err(|_| LedgerError::Overflow)?;
        let mut keys = Vec::new();
        for k in &req.node_keys {
            if !keys.contains(k) {
                keys.push(*k);
            }
        }
        Ok(ContractState {
            id,
            owner,
            limitation_time: req.deadline,
            update_id: req.update_id,
            public_key_list: keys,
            attribute_set: req.attributes.clone(),
            counter_updated_device: counter,
            incentive: req.incentive,
            balance: req.funds,
            claimed: BTreeSet::new(),
            claims: Vec::new(),
        })
    }

    /// Checks a proof of delivery and returns the payout, which the caller
    /// credits to `payee`.
    #[allow(clippy::too_many_arguments)]
    pub fn financial_incentive(
        &mut self,
        params: &PublicParams,
        daps_params: &DapsParams,
        oabs: &OabsSignature,
        daps: &DapsSignature,
        pk_t: &GroupElement,
        payee: &GroupElement,
        now: u64,
    ) -> Result<u64, LedgerError> {
        if now > self.limitation_time {
            return Err(LedgerError::Expired {
                now,
                deadline: self.limitation_time,
            });
        }
        if !self.public_key_list.contains(pk_t) {
            return Err(LedgerError::Unregistered);
        }
        if self.claimed.contains(&pk_t.to_bytes()) {
            return Err(LedgerError::ReplayRejected);
        }
        if self.counter_updated_device < 0 {
            return Err(LedgerError::Exhausted);
        }
        if oabs.attributes() != &self.attribute_set {
            return Err(LedgerError::ProofRejected(
                "attribute set differs from contract",
            ));
        }
        if !oabs_verify(params, &pk_t.to_bytes(), oabs) {
            return Err(LedgerError::ProofRejected("attribute signature"));
        }
        let addr = DapsAddress::session(pk_t, &self.update_id);
        let payload = claim_digest(self.id, &self.update_id, pk_t, payee, oabs);
        if !daps_verify(daps_params, pk_t, &addr, &payload, daps) {
            return Err(LedgerError::ProofRejected(
                "double-authentication signature",
            ));
        }

        // transfer(balance - incentive * counterUpdatedDevice, PK_t)
        let reserve = self
            .incentive
            .checked_mul(self.counter_updated_device as u64)
            .ok_or(LedgerError::Overflow)?;
        let amount = self
            .balance
            .checked_sub(reserve)
            .ok_or(LedgerError::Overflow)?;
        self.balance -= amount;
        self.counter_updated_device -= 1;
        self.claimed.insert(pk_t.to_bytes());
        self.claims.push(ClaimRecord {
            epoch: now,
            payee: *payee,
            pk_t: *pk_t,
            oabs: oabs.clone(),
            daps: *daps,
            amount,
        });
        Ok(amount)
    }

    /// Returns the residual balance to the owner once the deadline has
    /// passed. A drained contract yields zero.
    pub fn withdraw(&mut self, caller: &GroupElement, now: u64) -> Result<u64, LedgerError> {
        if now <= self.limitation_time {
            return Err(LedgerError::Premature {
                now,
                deadline: self.limitation_time,
            });
        }
        if *caller != self.owner {
            return Err(LedgerError::Unauthorized);
        }
        Ok(std::mem::take(&mut self.balance))
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixture::Fixture;
    use super::*;

    #[test]
    fn deploy_sets_counter_and_balance() {
        let mut f = Fixture::new(1, 1, 100);
        let id = f.publish(f.deploy_request(3, 10, 30, 5));
        let c = f.ledger.contract(id).unwrap();
        assert_eq!(c.counter_updated_device, 2);
        assert_eq!(c.balance, 30);
        assert_eq!(f.ledger.balance(f.vendor.pk()), 70);
    }

    #[test]
    fn underfunded_deploy_rejected() {
        let f = Fixture::new(2, 1, 100);
        let req = f.deploy_request(3, 10, 29, 5);
        assert!(matches!(
            ContractState::deploy(0, *f.vendor.pk(), &req, &f.params),
            Err(LedgerError::Deployment(_))
        ));
    }

    #[test]
    fn sequential_claims_pay_incentive_each() {
        let mut f = Fixture::new(3, 3, 30);
        let id = f.publish(f.deploy_request(3, 10, 30, 5));
        // hand execution: balance 30, counter 2 -> pay 30 - 20 = 10, and so on
        let mut balance = 30u64;
        let mut counter = 2i64;
        for node in 0..3 {
            let tx = f.claim_tx(node, id);
            let receipt = f.ledger.submit(&tx).unwrap();
            let expected = balance - 10 * counter as u64;
            assert_eq!(receipt.amount, expected);
            assert_eq!(expected, 10);
            balance -= expected;
            counter -= 1;
            let c = f.ledger.contract(id).unwrap();
            assert_eq!((c.balance, c.counter_updated_device), (balance, counter));
            assert_eq!(f.ledger.balance(f.nodes[node].0.pk()), 10);
        }
        assert_eq!(f.ledger.contract(id).unwrap().balance, 0);
        assert!(f.ledger.conservation_holds());
    }

    #[test]
    fn claim_after_deadline_expires() {
        let mut f = Fixture::new(4, 1, 10);
        let id = f.publish(f.deploy_request(1, 10, 10, 2));
        for _ in 0..3 {
            f.ledger.advance_epoch();
        }
        let tx = f.claim_tx(0, id);
        assert_eq!(
            f.ledger.submit(&tx),
            Err(LedgerError::Expired {
                now: 3,
                deadline: 2
            })
        );
    }

    #[test]
    fn claim_at_deadline_accepted() {
        let mut f = Fixture::new(5, 1, 10);
        let id = f.publish(f.deploy_request(1, 10, 10, 2));
        f.ledger.advance_epoch();
        f.ledger.advance_epoch();
        let tx = f.claim_tx(0, id);
        assert_eq!(f.ledger.submit(&tx).unwrap().amount, 10);
    }

    #[test]
    fn replay_and_unregistered_rejected() {
        let mut f = Fixture::new(6, 2, 100);
        let mut req = f.deploy_request(3, 10, 30, 5);
        req.node_keys.truncate(1);
        let id = f.publish(req);
        let tx = f.claim_tx(0, id);
        f.ledger.submit(&tx).unwrap();
        let again = f.claim_tx(0, id);
        assert_eq!(f.ledger.submit(&again), Err(LedgerError::ReplayRejected));
        let stranger = f.claim_tx(1, id);
        assert_eq!(f.ledger.submit(&stranger), Err(LedgerError::Unregistered));
    }

    #[test]
    fn proofs_must_bind_claimant() {
        let mut f = Fixture::new(7, 2, 100);
        let id = f.publish(f.deploy_request(2, 10, 20, 5));
        let pk0 = *f.nodes[0].1.pk();
        let pk1 = *f.nodes[1].1.pk();
        // attribute signature over another node's key
        let oabs = f.oabs_for(&pk1);
        let daps = f.daps_for(0, id, &oabs);
        let tx = f.claim_tx_with(0, id, pk0, oabs, daps);
        assert_eq!(
            f.ledger.submit(&tx),
            Err(LedgerError::ProofRejected("attribute signature"))
        );
        // second DAPS signature over the wrong payload
        let oabs = f.oabs_for(&pk0);
        let daps = f.daps_for(0, id + 1, &oabs);
        let tx = f.claim_tx_with(0, id, pk0, oabs, daps);
        assert_eq!(
            f.ledger.submit(&tx),
            Err(LedgerError::ProofRejected(
                "double-authentication signature"
            ))
        );
        assert_eq!(f.ledger.contract(id).unwrap().balance, 20);
    }

    #[test]
    fn withdraw_boundaries() {
        let mut f = Fixture::new(8, 1, 30);
        let id = f.publish(f.deploy_request(3, 10, 30, 1));
        let tx = f.claim_tx(0, id);
        f.ledger.submit(&tx).unwrap();
        f.ledger.advance_epoch();
        let vendor = f.vendor.clone();
        let early = f.withdraw_tx(&vendor, id);
        assert_eq!(
            f.ledger.submit(&early),
            Err(LedgerError::Premature {
                now: 1,
                deadline: 1
            })
        );
        f.ledger.advance_epoch();
        let node = f.nodes[0].0.clone();
        let thief = f.withdraw_tx(&node, id);
        assert_eq!(f.ledger.submit(&thief), Err(LedgerError::Unauthorized));
        let w = f.withdraw_tx(&vendor, id);
        assert_eq!(f.ledger.submit(&w).unwrap().amount, 20);
        assert_eq!(f.ledger.balance(vendor.pk()), 20);
        let again = f.withdraw_tx(&vendor, id);
        assert_eq!(f.ledger.submit(&again).unwrap().amount, 0);
        assert!(f.ledger.conservation_holds());
    }
}
