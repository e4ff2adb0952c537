use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::Scalar;
use crate::oabs::{
    oabs_keygen, oabs_setup, oabs_sign, oabs_sign_out, oabs_verify, DeviceSigningKey, OabsError,
    OabsSignature, OutsourcingKey, PublicParams,
};
use crate::policy::{AccessStructure, AttributeSet, Formula};

const DEMO_MESSAGE: &[u8] = b"podchain keygen demo";

/// Key material and one signature in canonical hex encodings, suitable as
/// cross-implementation test vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemoVectors {
    pub policy: String,
    pub seed: u64,
    pub capacity: usize,
    pub message_bits: usize,
    pub rows: usize,
    pub cols: usize,
    /// Matrix entries, small values as signed decimals, others as hex.
    pub matrix: Vec<Vec<String>>,
    pub rho: Vec<String>,
    pub attributes: Vec<String>,
    pub params: String,
    pub outsourcing_key: String,
    pub device_key: String,
    pub message: String,
    pub signature: String,
}

fn show(s: &Scalar) -> String {
    (-1000i64..=1000)
        .find(|k| Scalar::from_i64(*k) == *s)
        .map_or_else(|| s.to_hex(), |k| k.to_string())
}

/// Smallest-by-removal satisfying subset of the policy's labels.
fn minimal_satisfying(formula: &Formula) -> Vec<String> {
    let mut labels = formula.labels();
    labels.sort();
    labels.dedup();
    let mut i = 0;
    while i < labels.len() {
        let mut trial = labels.clone();
        trial.remove(i);
        if formula.evaluate(&trial) {
            labels = trial;
        } else {
            i += 1;
        }
    }
    labels
}

pub fn keygen_demo(policy: &str, seed: u64) -> Result<DemoVectors, OabsError> {
    let formula = Formula::parse(policy)?;
    let access = AccessStructure::from_formula(&formula)?;
    let labels = minimal_satisfying(&formula);
    let capacity = (labels.len() + 2).max(8);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let (params, msk) = oabs_setup(128, capacity, 256, &mut rng)?;
    let (ok, dk) = oabs_keygen(&params, &msk, &access, &mut rng)?;
    let w = AttributeSet::from_labels(&labels, capacity)?;
    let partial = oabs_sign_out(&params, &ok, &w, &mut rng)?;
    let sig = oabs_sign(&params, DEMO_MESSAGE, &dk, &partial, &mut rng)?;
    Ok(DemoVectors {
        policy: formula.to_string(),
        seed,
        capacity,
        message_bits: params.message_bits(),
        rows: access.rows(),
        cols: access.cols(),
        matrix: access
            .matrix()
            .iter()
            .map(|r| r.iter().map(show).collect())
            .collect(),
        rho: access
            .labels()
            .map(|l| l.to_vec())
            .unwrap_or_else(|| access.rho_all().iter().map(Scalar::to_hex).collect()),
        attributes: labels,
        params: hex::encode(params.to_bytes()),
        outsourcing_key: hex::encode(ok.to_bytes()),
        device_key: hex::encode(dk.to_bytes()),
        message: hex::encode(DEMO_MESSAGE),
        signature: hex::encode(sig.to_bytes()),
    })
}

/// Decodes every encoding in `v`, checks the keys re-encode identically and
/// are well formed, and verifies the signature.
pub fn verify_vectors(v: &DemoVectors) -> Result<(), String> {
    let bytes = |name: &str, s: &str| hex::decode(s).map_err(|e| format!("{name}: {e}"));
    let params = PublicParams::from_bytes(&bytes("params", &v.params)?)
        .map_err(|e| format!("params: {e}"))?;
    let ok_bytes = bytes("outsourcing_key", &v.outsourcing_key)?;
    let ok = OutsourcingKey::from_bytes(&ok_bytes).map_err(|e| format!("outsourcing_key: {e}"))?;
    if ok.to_bytes() != ok_bytes {
        return Err("outsourcing_key: not canonical".into());
    }
    let dk_bytes = bytes("device_key", &v.device_key)?;
    let dk = DeviceSigningKey::from_bytes(&dk_bytes).map_err(|e| format!("device_key: {e}"))?;
    if dk.to_bytes() != dk_bytes {
        return Err("device_key: not canonical".into());
    }
    if !dk.is_well_formed(&params) {
        return Err("device_key: pairing check failed".into());
    }
    let sig = OabsSignature::from_bytes(&bytes("signature", &v.signature)?)
        .map_err(|e| format!("signature: {e}"))?;
    let expected_w =
        AttributeSet::from_labels(&v.attributes, params.capacity()).map_err(|e| e.to_string())?;
    if sig.attributes() != &expected_w {
        return Err("signature: attribute set differs".into());
    }
    if !oabs_verify(&params, &bytes("message", &v.message)?, &sig) {
        return Err("signature: does not verify".into());
    }
    Ok(())
}
