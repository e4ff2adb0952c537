use std::collections::{BTreeMap, BTreeSet};

use rand::{CryptoRng, RngCore};

use crate::algebra::{digest, Encoder, GroupElement, Scalar};
use crate::daps::{
    daps_extract, daps_setup, daps_sign, daps_verify, DapsAddress, DapsKeypair, DapsParams,
    DapsSignature,
};
use crate::ledger::{claim_digest, DeployRequest, LedgerState, Transaction, TxPayload};
use crate::oabs::{
    oabs_keygen, oabs_sign, oabs_sign_out, DeviceSigningKey, MasterKey, OabsSignature,
    OutsourcingKey, PartialSignature, PublicParams,
};
use crate::payload::{
    decrypt, encrypt, ledger_sign, ledger_verify, HybridCiphertext, LedgerKeypair, LedgerSignature,
    LEDGER_SIGNATURE_BYTES,
};
use crate::policy::{policy_to_lsss, AccessStructure, AttributeSet};

use super::ProtocolError;

fn attestation_message(ciphertext: &HybridCiphertext, update_id: &[u8; 32]) -> Vec<u8> {
    let mut enc = Encoder::new();
    enc.bytes(b"podchain/update-attestation/v1")
        .bytes(&ciphertext.to_bytes())
        .bytes(update_id);
    enc.finish()
}

fn attestation_valid(
    vendor: &GroupElement,
    ciphertext: &HybridCiphertext,
    update_id: &[u8; 32],
    attestation: &[u8; LEDGER_SIGNATURE_BYTES],
) -> bool {
    LedgerSignature::from_bytes(attestation)
        .map(|sig| ledger_verify(vendor, &attestation_message(ciphertext, update_id), &sig))
        .unwrap_or(false)
}

/// `(C, sigma)` as served to a transmission node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpdatePackage {
    pub update_id: [u8; 32],
    pub ciphertext: HybridCiphertext,
    pub attestation: [u8; LEDGER_SIGNATURE_BYTES],
}

impl UpdatePackage {
    pub fn verify(&self, vendor: &GroupElement) -> bool {
        attestation_valid(vendor, &self.ciphertext, &self.update_id, &self.attestation)
    }

    pub fn size(&self) -> usize {
        32 + self.ciphertext.to_bytes().len() + LEDGER_SIGNATURE_BYTES
    }
}

/// `(D_id, C, sigma, pk_t)` as forwarded by the gateway to a device.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeliveryBundle {
    pub package: UpdatePackage,
    pub pk_t: GroupElement,
}

pub struct Vendor {
    name: String,
    ledger_kp: LedgerKeypair,
    params: PublicParams,
    msk: MasterKey,
    registered: Vec<GroupElement>,
    devices: BTreeMap<String, AccessStructure>,
    updates: BTreeMap<[u8; 32], Vec<u8>>,
}

impl Vendor {
    pub fn new(name: &str, params: PublicParams, msk: MasterKey, ledger_kp: LedgerKeypair) -> Self {
        Vendor {
            name: name.to_owned(),
            ledger_kp,
            params,
            msk,
            registered: Vec::new(),
            devices: BTreeMap::new(),
            updates: BTreeMap::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn pk(&self) -> &GroupElement {
        self.ledger_kp.pk()
    }

    pub fn params(&self) -> &PublicParams {
        &self.params
    }

    /// The list `L` of registered node keys.
    pub fn registered_nodes(&self) -> &[GroupElement] {
        &self.registered
    }

    /// Adds `pk_t` to `L`. Returns `false` if it was already present.
    pub fn register_node(&mut self, pk_t: &GroupElement) -> bool {
        if self.registered.contains(pk_t) {
            return false;
        }
        self.registered.push(*pk_t);
        true
    }

    /// Issues a device key for `policy`. The device keeps the full key; the
    /// vendor keeps only the policy.
    pub fn provision_device<R: RngCore + CryptoRng>(
        &mut self,
        id: &str,
        policy: &str,
        rng: &mut R,
    ) -> Result<Device, ProtocolError> {
        let access = policy_to_lsss(policy)?;
        let (_, key) = oabs_keygen(&self.params, &self.msk, &access, rng)?;
        self.devices.insert(id.to_owned(), access);
        Ok(Device::new(id, key, *self.pk()))
    }

    pub fn device_policy(&self, id: &str) -> Option<&AccessStructure> {
        self.devices.get(id)
    }

    /// Deploys a contract funded with `devices * incentive`, returning its id
    /// and `D_id = H(D)`.
    #[allow(clippy::too_many_arguments)]
    pub fn publish<R: RngCore + CryptoRng>(
        &mut self,
        ledger: &mut LedgerState,
        update: Vec<u8>,
        deadline: u64,
        devices: u64,
        attributes: AttributeSet,
        incentive: u64,
        rng: &mut R,
    ) -> Result<(u64, [u8; 32]), ProtocolError> {
        let update_id = digest(&update);
        let funds = devices
            .checked_mul(incentive)
            .ok_or(crate::ledger::LedgerError::Overflow)?;
        let req = DeployRequest {
            deadline,
            update_id,
            devices,
            attributes,
            node_keys: self.registered.clone(),
            incentive,
            funds,
        };
        let nonce = ledger.nonce(self.pk());
        let tx = Transaction::sign(&self.ledger_kp, nonce, TxPayload::Publish(req), rng);
        let receipt = ledger.submit(&tx)?;
        self.updates.insert(update_id, update);
        Ok((
            receipt.contract.expect("publish creates a contract"),
            update_id,
        ))
    }

    /// Encrypts the update for `pk_t` and signs `(C, D_id)`.
    pub fn serve_query<R: RngCore + CryptoRng>(
        &self,
        pk_t: &GroupElement,
        update_id: &[u8; 32],
        rng: &mut R,
    ) -> Result<UpdatePackage, ProtocolError> {
        let update = self
            .updates
            .get(update_id)
            .ok_or_else(|| ProtocolError::NotFound(hex::encode(update_id)))?;
        let ciphertext = encrypt(pk_t, update, rng);
        let sig = ledger_sign(
            &self.ledger_kp,
            &attestation_message(&ciphertext, update_id),
            rng,
        );
        Ok(UpdatePackage {
            update_id: *update_id,
            ciphertext,
            attestation: sig.to_bytes(),
        })
    }

    pub fn withdraw<R: RngCore + CryptoRng>(
        &self,
        ledger: &mut LedgerState,
        contract: u64,
        rng: &mut R,
    ) -> Result<u64, ProtocolError> {
        let nonce = ledger.nonce(self.pk());
        let tx = Transaction::sign(
            &self.ledger_kp,
            nonce,
            TxPayload::Withdraw { contract },
            rng,
        );
        Ok(ledger.submit(&tx)?.amount)
    }
}

pub struct TransmissionNode {
    name: String,
    ledger_kp: LedgerKeypair,
    daps_kp: DapsKeypair,
    daps_params: DapsParams,
    packages: BTreeMap<[u8; 32], UpdatePackage>,
    updates: BTreeMap<[u8; 32], Vec<u8>>,
    signed: BTreeMap<DapsAddress, BTreeMap<Vec<u8>, DapsSignature>>,
}

impl TransmissionNode {
    pub fn new(name: &str, ledger_kp: LedgerKeypair, daps_kp: DapsKeypair) -> Self {
        TransmissionNode {
            name: name.to_owned(),
            ledger_kp,
            daps_kp,
            daps_params: daps_setup(),
            packages: BTreeMap::new(),
            updates: BTreeMap::new(),
            signed: BTreeMap::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Ledger account `PK_t`.
    pub fn account(&self) -> &GroupElement {
        self.ledger_kp.pk()
    }

    /// DAPS and encryption key `pk_t`.
    pub fn pk_t(&self) -> &GroupElement {
        self.daps_kp.pk()
    }

    /// Checks the vendor's signature on `(C, D_id)` and decrypts the update.
    pub fn fetch(
        &mut self,
        vendor: &GroupElement,
        pkg: UpdatePackage,
    ) -> Result<(), ProtocolError> {
        if !pkg.verify(vendor) {
            return Err(ProtocolError::Integrity);
        }
        let update = decrypt(self.daps_kp.sk(), &pkg.ciphertext)?;
        if digest(&update) != pkg.update_id {
            return Err(ProtocolError::DigestMismatch);
        }
        self.updates.insert(pkg.update_id, update);
        self.packages.insert(pkg.update_id, pkg);
        Ok(())
    }

    pub fn package(&self, update_id: &[u8; 32]) -> Option<&UpdatePackage> {
        self.packages.get(update_id)
    }

    pub fn update(&self, update_id: &[u8; 32]) -> Option<&[u8]> {
        self.updates.get(update_id).map(Vec::as_slice)
    }

    fn sign(&mut self, update_id: &[u8; 32], payload: &[u8]) -> DapsSignature {
        let addr = DapsAddress::session(self.daps_kp.pk(), update_id);
        let sig = daps_sign(&self.daps_params, self.daps_kp.sk(), &addr, payload);
        self.signed
            .entry(addr)
            .or_default()
            .insert(payload.to_vec(), sig);
        sig
    }

    /// First DAPS signature, over the gateway's challenge.
    pub fn sign_challenge(&mut self, update_id: &[u8; 32], challenge: &[u8]) -> DapsSignature {
        self.sign(update_id, challenge)
    }

    /// Payloads signed so far under the session address for `update_id`.
    pub fn signed_payloads(&self, update_id: &[u8; 32]) -> BTreeSet<Vec<u8>> {
        let addr = DapsAddress::session(self.daps_kp.pk(), update_id);
        self.signed
            .get(&addr)
            .map(|m| m.keys().cloned().collect())
            .unwrap_or_default()
    }

    /// Builds the claim transaction. With `sign_claim` false the node reuses
    /// a signature it already produced instead of signing the claim fields.
    pub fn claim<R: RngCore + CryptoRng>(
        &mut self,
        ledger: &LedgerState,
        contract: u64,
        update_id: &[u8; 32],
        gamma: OabsSignature,
        sign_claim: bool,
        rng: &mut R,
    ) -> Transaction {
        let pk_t = *self.daps_kp.pk();
        let daps = if sign_claim {
            let payload = claim_digest(contract, update_id, &pk_t, self.ledger_kp.pk(), &gamma);
            self.sign(update_id, &payload)
        } else {
            let addr = DapsAddress::session(&pk_t, update_id);
            self.signed
                .get(&addr)
                .and_then(|m| m.values().next().copied())
                .unwrap_or_else(|| {
                    DapsSignature::from_parts(GroupElement::identity(), Scalar::zero())
                })
        };
        let nonce = ledger.nonce(self.ledger_kp.pk());
        Transaction::sign(
            &self.ledger_kp,
            nonce,
            TxPayload::Claim {
                contract,
                pk_t,
                oabs: gamma,
                daps,
            },
            rng,
        )
    }
}

/// One delivery session held by a gateway.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GatewaySession {
    pub id: u64,
    pub device: String,
    pub pk_t: GroupElement,
    pub update_id: [u8; 32],
    pub contract: u64,
    pub challenge: Vec<u8>,
    pub delta1: Option<DapsSignature>,
    pub extracted: bool,
}

pub struct Gateway {
    name: String,
    daps_params: DapsParams,
    devices: Vec<String>,
    sessions: BTreeMap<u64, GatewaySession>,
    next_session: u64,
}

impl Gateway {
    pub fn new(name: &str) -> Self {
        Gateway {
            name: name.to_owned(),
            daps_params: daps_setup(),
            devices: Vec::new(),
            sessions: BTreeMap::new(),
            next_session: 0,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The device list `L'`.
    pub fn devices(&self) -> &[String] {
        &self.devices
    }

    pub fn register_device(&mut self, id: &str) -> bool {
        if self.devices.iter().any(|d| d == id) {
            return false;
        }
        self.devices.push(id.to_owned());
        true
    }

    pub fn session(&self, id: u64) -> Option<&GatewaySession> {
        self.sessions.get(&id)
    }

    /// Opens a session for a node offering `update_id` to `device` and
    /// returns its fresh challenge `m`.
    pub fn notify<R: RngCore + CryptoRng>(
        &mut self,
        device: &str,
        pk_t: &GroupElement,
        update_id: &[u8; 32],
        contract: u64,
        rng: &mut R,
    ) -> Result<(u64, Vec<u8>), ProtocolError> {
        if !self.devices.iter().any(|d| d == device) {
            return Err(ProtocolError::SessionDeclined(
                "no such device behind this gateway",
            ));
        }
        let mut challenge = vec![0u8; 32];
        rng.fill_bytes(&mut challenge);
        let id = self.next_session;
        self.next_session += 1;
        self.sessions.insert(
            id,
            GatewaySession {
                id,
                device: device.to_owned(),
                pk_t: *pk_t,
                update_id: *update_id,
                contract,
                challenge: challenge.clone(),
                delta1: None,
                extracted: false,
            },
        );
        Ok((id, challenge))
    }

    /// Verifies the node's first DAPS signature and, if valid, returns the
    /// bundle for the device.
    pub fn accept_delta1(
        &mut self,
        session: u64,
        delta1: DapsSignature,
        package: &UpdatePackage,
    ) -> Result<DeliveryBundle, ProtocolError> {
        let s = self
            .sessions
            .get_mut(&session)
            .ok_or(ProtocolError::SessionDeclined("unknown session"))?;
        if package.update_id != s.update_id {
            return Err(ProtocolError::Aborted("package for a different update"));
        }
        let addr = DapsAddress::session(&s.pk_t, &s.update_id);
        if !daps_verify(&self.daps_params, &s.pk_t, &addr, &s.challenge, &delta1) {
            return Err(ProtocolError::Aborted("first DAPS signature invalid"));
        }
        s.delta1 = Some(delta1);
        Ok(DeliveryBundle {
            package: package.clone(),
            pk_t: s.pk_t,
        })
    }

    /// Outsourced signing with the key the device handed over.
    pub fn sign_out<R: RngCore + CryptoRng>(
        &self,
        params: &PublicParams,
        ok: &OutsourcingKey,
        w: &AttributeSet,
        rng: &mut R,
    ) -> Result<PartialSignature, ProtocolError> {
        Ok(oabs_sign_out(params, ok, w, rng)?)
    }

    /// Looks for confirmed claims matching open sessions and extracts the
    /// node's secret key from the two DAPS signatures. A claim is confirmed
    /// once its block is closed.
    pub fn watch(&mut self, ledger: &LedgerState) -> Vec<(u64, String, Scalar)> {
        let mut out = Vec::new();
        for s in self.sessions.values_mut() {
            let Some(delta1) = s.delta1 else { continue };
            if s.extracted {
                continue;
            }
            let Some(contract) = ledger.contract(s.contract) else {
                continue;
            };
            let Some(record) = contract
                .claims
                .iter()
                .find(|r| r.pk_t == s.pk_t && r.epoch < ledger.height())
            else {
                continue;
            };
            let payload = claim_digest(
                s.contract,
                &s.update_id,
                &s.pk_t,
                &record.payee,
                &record.oabs,
            );
            let addr = DapsAddress::session(&s.pk_t, &s.update_id);
            if let Ok(sk) = daps_extract(
                &self.daps_params,
                &s.pk_t,
                &addr,
                (&s.challenge, &delta1),
                (&payload, &record.daps),
            ) {
                s.extracted = true;
                out.push((s.id, s.device.clone(), sk));
            }
        }
        out
    }
}

pub struct Device {
    id: String,
    key: DeviceSigningKey,
    vendor: GroupElement,
    pending: Option<DeliveryBundle>,
    firmware: Option<[u8; 32]>,
    installed: Option<Vec<u8>>,
}

impl Device {
    pub fn new(id: &str, key: DeviceSigningKey, vendor: GroupElement) -> Self {
        Device {
            id: id.to_owned(),
            key,
            vendor,
            pending: None,
            firmware: None,
            installed: None,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn outsourcing_key(&self) -> &OutsourcingKey {
        self.key.outsourcing_key()
    }

    pub fn can_sign(&self, w: &AttributeSet) -> bool {
        self.key.outsourcing_key().satisfied_by(w)
    }

    /// Accepts a bundle only if the vendor's signature over `(C, D_id)`
    /// verifies.
    pub fn receive_bundle(&mut self, bundle: DeliveryBundle) -> Result<(), ProtocolError> {
        if !bundle.package.verify(&self.vendor) {
            return Err(ProtocolError::Integrity);
        }
        self.pending = Some(bundle);
        Ok(())
    }

    pub fn pending(&self) -> Option<&DeliveryBundle> {
        self.pending.as_ref()
    }

    /// Completes the gateway's partial signature over `pk_t`.
    pub fn complete<R: RngCore + CryptoRng>(
        &self,
        params: &PublicParams,
        partial: &PartialSignature,
        rng: &mut R,
    ) -> Result<OabsSignature, ProtocolError> {
        let bundle = self
            .pending
            .as_ref()
            .ok_or(ProtocolError::Aborted("no verified update pending"))?;
        Ok(oabs_sign(
            params,
            &bundle.pk_t.to_bytes(),
            &self.key,
            partial,
            rng,
        )?)
    }

    /// Decrypts the pending update with the extracted key and installs it if
    /// it matches `D_id`.
    pub fn install(&mut self, sk_t: &Scalar) -> Result<[u8; 32], ProtocolError> {
        let bundle = self
            .pending
            .as_ref()
            .ok_or(ProtocolError::Aborted("no verified update pending"))?;
        let update = decrypt(sk_t, &bundle.package.ciphertext)?;
        let id = digest(&update);
        if id != bundle.package.update_id {
            return Err(ProtocolError::DigestMismatch);
        }
        self.firmware = Some(id);
        self.installed = Some(update);
        self.pending = None;
        Ok(id)
    }

    pub fn firmware(&self) -> Option<&[u8; 32]> {
        self.firmware.as_ref()
    }

    pub fn installed(&self) -> Option<&[u8]> {
        self.installed.as_deref()
    }
}
