//! Outsourced attribute-based signatures.
//!
//! The master secret `alpha` is split as `alpha = alpha1 + alpha2` at key
//! generation. `alpha1` is LSSS-shared across the rows of the device policy
//! and lands in the *outsourcing key*, which a helper (the gateway) uses to
//! compute the expensive partial signature. `alpha2` is bound to the reserved
//! default attribute `theta` and never leaves the device; without it the
//! partial signature cannot be completed.
//!
//! A signature `(sigma0, sigma1, sigma2)` over message `M` for attribute set
//! `W` is accepted when
//!
//! ```text
//! Z == e(sigma2, g) / ( e(sigma0, u0 * prod u_j^{m_j}) * e(sigma1, V0 * prod V_k^{c_k}) )
//! ```
//!
//! where `m = H(M || sigma1 || W || theta)` and `c` are the coefficients of
//! `prod_{w in W ∪ {theta}} (X - w)`.
//!
//! Key and signature components only ever appear on the left of a pairing,
//! so they are first-group elements. Generators `g`, `V_k` and `u_j` appear
//! on both sides and are dual elements.

use rand::{CryptoRng, RngCore};
use thiserror::Error;

use crate::algebra::{
    default_attribute, hash_to_bits, multi_exp, multi_exp_g2, pair, pairing_product_prepared,
    AlgebraError, Decoder, DualGroupElement, Encoder, G2Element, GroupElement, PreparedG2, Scalar,
    TargetElement, HASH_BITS,
};
use crate::policy::{
    reconstruction_coefficients, AccessStructure, AttributeSet, PolicyError, VanishingCoefficients,
};

/// Default attribute capacity `n`.
pub const DEFAULT_CAPACITY: usize = 16;
/// Default message-hash length `l`.
pub const DEFAULT_MESSAGE_BITS: usize = HASH_BITS;
/// Security level provided by the BLS12-381 backend.
pub const BACKEND_SECURITY_BITS: u32 = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OabsError {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("key generation failed: {0}")]
    Key(String),
    #[error("attribute set does not satisfy the access structure")]
    PolicyUnsatisfied,
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Encoding(#[from] AlgebraError),
}

/// Public parameters shared by every signer and verifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicParams {
    g: DualGroupElement,
    z: TargetElement,
    v: Vec<DualGroupElement>,
    u: Vec<DualGroupElement>,
    n: usize,
    l: usize,
    theta: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasterKey {
    alpha: Scalar,
}

/// Key material for one LSSS row (or for the default attribute):
/// `d = g^lambda V0^r`, `d' = g^r`, `d''_x = (V1^{-a^{x-1}} V_x)^r` for `x = 2..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowKey {
    d: GroupElement,
    d_prime: GroupElement,
    d_double_prime: Vec<GroupElement>,
}

/// The part of a device key that can be handed to a signing helper.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutsourcingKey {
    access: AccessStructure,
    rows: Vec<RowKey>,
}

/// The full device key: the outsourcing key plus the default-attribute
/// components carrying `alpha2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeviceSigningKey {
    outsourcing: OutsourcingKey,
    theta: RowKey,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialSignature {
    sigma1: GroupElement,
    sigma2: GroupElement,
    w: AttributeSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OabsSignature {
    sigma0: GroupElement,
    sigma1: GroupElement,
    sigma2: GroupElement,
    w: AttributeSet,
}

impl PublicParams {
    pub fn generator(&self) -> &DualGroupElement {
        &self.g
    }

    pub fn z(&self) -> &TargetElement {
        &self.z
    }

    /// `V_0..V_n`.
    pub fn v(&self) -> &[DualGroupElement] {
        &self.v
    }

    /// `u_0..u_l`.
    pub fn u(&self) -> &[DualGroupElement] {
        &self.u
    }

    pub fn capacity(&self) -> usize {
        self.n
    }

    pub fn message_bits(&self) -> usize {
        self.l
    }

    pub fn theta(&self) -> &Scalar {
        &self.theta
    }

    /// Builds `W` from attribute labels under this capacity.
    pub fn attribute_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<AttributeSet, PolicyError> {
        AttributeSet::from_labels(labels, self.n)
    }

    /// `V0 * prod_{k=1}^{n} V_k^{c_k}` in the first group.
    fn v_product_g1(&self, c: &VanishingCoefficients) -> GroupElement {
        let bases: Vec<GroupElement> = self.v.iter().map(|x| *x.left()).collect();
        let exps = one_then(c);
        multi_exp(&bases, &exps).expect("n+1 bases and exponents")
    }

    /// `V0 * prod_{k=1}^{n} V_k^{c_k}` in the second group.
    pub fn v_product(&self, c: &VanishingCoefficients) -> G2Element {
        let bases: Vec<G2Element> = self.v.iter().map(|x| *x.right()).collect();
        let exps = one_then(c);
        multi_exp_g2(&bases, &exps).expect("n+1 bases and exponents")
    }

    /// `u0 * prod_{j : m_j = 1} u_j` in the first group.
    fn u_product_g1(&self, m: &[bool]) -> GroupElement {
        m.iter()
            .zip(&self.u[1..])
            .filter(|(bit, _)| **bit)
            .fold(*self.u[0].left(), |acc, (_, uj)| acc * *uj.left())
    }

    /// `u0 * prod_{j : m_j = 1} u_j` in the second group.
    pub fn u_product(&self, m: &[bool]) -> G2Element {
        m.iter()
            .zip(&self.u[1..])
            .filter(|(bit, _)| **bit)
            .fold(*self.u[0].right(), |acc, (_, uj)| acc * *uj.right())
    }

    /// `(m_1..m_l) = H(message || sigma1 || W || theta)` with each field
    /// length-prefixed and `W` in ascending order.
    pub fn message_hash(
        &self,
        message: &[u8],
        sigma1: &GroupElement,
        w: &AttributeSet,
    ) -> Vec<bool> {
        let mut enc = Encoder::new();
        enc.bytes(message).point(sigma1);
        w.encode_into(&mut enc);
        enc.scalar(&self.theta);
        hash_to_bits(&enc.finish(), self.l)
    }

    pub fn vanishing(&self, w: &AttributeSet) -> Result<VanishingCoefficients, PolicyError> {
        VanishingCoefficients::new(w, &self.theta, self.n)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut enc = Encoder::new();
        enc.u64(self.n as u64).u64(self.l as u64).dual(&self.g);
        enc.bytes(&self.z.to_bytes());
        for x in self.v.iter().chain(&self.u) {
            enc.dual(x);
        }
        enc.scalar(&self.theta);
        enc.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, OabsError> {
        let mut dec = Decoder::new(bytes);
        let n = dec.u64()? as usize;
        let l = dec.u64()? as usize;
        if !(3..=1 << 16).contains(&n) || !(1..=1 << 16).contains(&l) {
            return Err(OabsError::Argument("parameter sizes out of range".into()));
        }
        let g = dec.dual()?;
        let z = TargetElement::from_bytes(dec.bytes()?)?;
        let v = (0..=n).map(|_| dec.dual()).collect::<Result<Vec<_>, _>>()?;
        let u = (0..=l).map(|_| dec.dual()).collect::<Result<Vec<_>, _>>()?;
        let theta = dec.scalar()?;
        dec.finish()?;
        if g != DualGroupElement::generator() {
            return Err(OabsError::Argument("unexpected generator".into()));
        }
        Ok(PublicParams {
            g,
            z,
            v,
            u,
            n,
            l,
            theta,
        })
    }
}

fn one_then(c: &VanishingCoefficients) -> Vec<Scalar> {
    std::iter::once(Scalar::one())
        .chain(c.as_slice().iter().copied())
        .collect()
}

impl MasterKey {
    /// `e(g, g)^alpha == Z`.
    pub fn matches(&self, params: &PublicParams) -> bool {
        pair(&params.g, &params.g).pow(&self.alpha) == params.z
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }
}

impl RowKey {
    fn generate<R: RngCore + CryptoRng>(
        params: &PublicParams,
        share: &Scalar,
        attribute: &Scalar,
        rng: &mut R,
    ) -> RowKey {
        let r = Scalar::random(rng);
        let g = *params.g.left();
        let v0 = *params.v[0].left();
        let v1 = *params.v[1].left();
        let d = multi_exp(&[g, v0], &[*share, r]).expect("two terms");
        let d_prime = g.pow(&r);
        let mut power = *attribute; // a^{x-1}, starting at x = 2
        let d_double_prime = (2..=params.n)
            .map(|x| {
                let e = -(r * power);
                power = power * attribute;
                multi_exp(&[v1, *params.v[x].left()], &[e, r]).expect("two terms")
            })
            .collect();
        RowKey {
            d,
            d_prime,
            d_double_prime,
        }
    }

    pub fn d(&self) -> &GroupElement {
        &self.d
    }

    pub fn d_prime(&self) -> &GroupElement {
        &self.d_prime
    }

    /// `d''_x` for `x = 2..n`, at index `x - 2`.
    pub fn d_double_prime(&self) -> &[GroupElement] {
        &self.d_double_prime
    }

    /// `e(d''_x, g) == e(d', V1^{-a^{x-1}} V_x)` for every `x`.
    pub fn is_well_formed(&self, params: &PublicParams, attribute: &Scalar) -> bool {
        if self.d_double_prime.len() + 1 != params.n {
            return false;
        }
        let mut power = *attribute;
        self.d_double_prime.iter().enumerate().all(|(k, dx)| {
            let x = k + 2;
            let base = params.v[1].pow(&-power) * params.v[x];
            power = power * attribute;
            pair(dx, &params.g) == pair(&self.d_prime, &base)
        })
    }

    fn encode_into(&self, enc: &mut Encoder) {
        enc.point(&self.d).point(&self.d_prime);
        enc.u64(self.d_double_prime.len() as u64);
        for p in &self.d_double_prime {
            enc.point(p);
        }
    }

    fn decode(dec: &mut Decoder<'_>) -> Result<Self, OabsError> {
        let d = dec.point()?;
        let d_prime = dec.point()?;
        let count = dec.u64()? as usize;
        if count > 1 << 16 {
            return Err(OabsError::Argument("row key too long".into()));
        }
        let d_double_prime = (0..count).map(|_| dec.point()).collect::<Result<_, _>>()?;
        Ok(RowKey {
            d,
            d_prime,
            d_double_prime,
        })
    }
}

impl OutsourcingKey {
    pub fn access_structure(&self) -> &AccessStructure {
        &self.access
    }

    pub fn rows(&self) -> &[RowKey] {
        &self.rows
    }

    /// Whether `W` can sign under this key's policy.
    pub fn satisfied_by(&self, w: &AttributeSet) -> bool {
        reconstruction_coefficients(&self.access, w).is_some()
    }

    pub fn is_well_formed(&self, params: &PublicParams) -> bool {
        self.rows.len() == self.access.rows()
            && self
                .rows
                .iter()
                .enumerate()
                .all(|(i, row)| row.is_well_formed(params, self.access.rho(i)))
    }

    fn encode_into(&self, enc: &mut Encoder) {
        self.access.encode_into(enc);
        for row in &self.rows {
            row.encode_into(enc);
        }
    }

    fn decode(dec: &mut Decoder<'_>) -> Result<Self, OabsError> {
        let access = AccessStructure::decode(dec)?;
        let rows = (0..access.rows())
            .map(|_| RowKey::decode(dec))
            .collect::<Result<_, _>>()?;
        Ok(OutsourcingKey { access, rows })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut enc = Encoder::new();
        self.encode_into(&mut enc);
        enc.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, OabsError> {
        let mut dec = Decoder::new(bytes);
        let key = Self::decode(&mut dec)?;
        dec.finish()?;
        Ok(key)
    }
}

impl DeviceSigningKey {
    pub fn outsourcing_key(&self) -> &OutsourcingKey {
        &self.outsourcing
    }

    pub fn theta_key(&self) -> &RowKey {
        &self.theta
    }

    pub fn is_well_formed(&self, params: &PublicParams) -> bool {
        self.outsourcing.is_well_formed(params) && self.theta.is_well_formed(params, &params.theta)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut enc = Encoder::new();
        self.outsourcing.encode_into(&mut enc);
        self.theta.encode_into(&mut enc);
        enc.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, OabsError> {
        let mut dec = Decoder::new(bytes);
        let outsourcing = OutsourcingKey::decode(&mut dec)?;
        let theta = RowKey::decode(&mut dec)?;
        dec.finish()?;
        Ok(DeviceSigningKey { outsourcing, theta })
    }
}

impl PartialSignature {
    pub fn sigma1(&self) -> &GroupElement {
        &self.sigma1
    }

    pub fn sigma2(&self) -> &GroupElement {
        &self.sigma2
    }

    pub fn attributes(&self) -> &AttributeSet {
        &self.w
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut enc = Encoder::new();
        enc.point(&self.sigma1).point(&self.sigma2);
        self.w.encode_into(&mut enc);
        enc.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, OabsError> {
        let mut dec = Decoder::new(bytes);
        let sigma1 = dec.point()?;
        let sigma2 = dec.point()?;
        let w = AttributeSet::decode(&mut dec)?;
        dec.finish()?;
        Ok(PartialSignature { sigma1, sigma2, w })
    }
}

impl OabsSignature {
    /// Assembles a signature from raw components, e.g. for negative tests.
    pub fn from_parts(
        sigma0: GroupElement,
        sigma1: GroupElement,
        sigma2: GroupElement,
        w: AttributeSet,
    ) -> Self {
        OabsSignature {
            sigma0,
            sigma1,
            sigma2,
            w,
        }
    }

    pub fn sigma0(&self) -> &GroupElement {
        &self.sigma0
    }

    pub fn sigma1(&self) -> &GroupElement {
        &self.sigma1
    }

    pub fn sigma2(&self) -> &GroupElement {
        &self.sigma2
    }

    pub fn attributes(&self) -> &AttributeSet {
        &self.w
    }

    pub fn encode_into(&self, enc: &mut Encoder) {
        enc.point(&self.sigma0)
            .point(&self.sigma1)
            .point(&self.sigma2);
        self.w.encode_into(enc);
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut enc = Encoder::new();
        self.encode_into(&mut enc);
        enc.finish()
    }

    pub fn decode(dec: &mut Decoder<'_>) -> Result<Self, OabsError> {
        let sigma0 = dec.point()?;
        let sigma1 = dec.point()?;
        let sigma2 = dec.point()?;
        let w = AttributeSet::decode(dec)?;
        Ok(OabsSignature {
            sigma0,
            sigma1,
            sigma2,
            w,
        })
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, OabsError> {
        let mut dec = Decoder::new(bytes);
        let sig = Self::decode(&mut dec)?;
        dec.finish()?;
        Ok(sig)
    }
}

/// Generates public parameters and the master key.
///
/// `security_bits` must not exceed what the curve backend provides; `n` is
/// the attribute capacity (so signing sets hold at most `n - 2` attributes)
/// and `l` the bit length of the message hash.
pub fn oabs_setup<R: RngCore + CryptoRng>(
    security_bits: u32,
    n: usize,
    l: usize,
    rng: &mut R,
) -> Result<(PublicParams, MasterKey), OabsError> {
    if security_bits == 0 || security_bits > BACKEND_SECURITY_BITS {
        return Err(OabsError::Argument(format!(
            "security level {security_bits} not supported (max {BACKEND_SECURITY_BITS})"
        )));
    }
    if n < 3 {
        return Err(OabsError::Argument(format!(
            "capacity n = {n} must be at least 3"
        )));
    }
    if l < 1 {
        return Err(OabsError::Argument(
            "message length l must be at least 1".into(),
        ));
    }
    let alpha = Scalar::random(rng);
    let g = DualGroupElement::generator();
    let z = pair(&g, &g).pow(&alpha);
    let v = (0..=n).map(|_| DualGroupElement::random(rng)).collect();
    let u = (0..=l).map(|_| DualGroupElement::random(rng)).collect();
    Ok((
        PublicParams {
            g,
            z,
            v,
            u,
            n,
            l,
            theta: default_attribute(),
        },
        MasterKey { alpha },
    ))
}

/// Issues a key for access structure `access`, split into the outsourcing
/// key and the full device signing key.
pub fn oabs_keygen<R: RngCore + CryptoRng>(
    params: &PublicParams,
    msk: &MasterKey,
    access: &AccessStructure,
    rng: &mut R,
) -> Result<(OutsourcingKey, DeviceSigningKey), OabsError> {
    if access.rho_all().contains(&params.theta) {
        return Err(OabsError::Key(
            "row attribute equals the default attribute".into(),
        ));
    }
    let alpha1 = Scalar::random_nonzero(rng);
    let alpha2 = msk.alpha - alpha1;
    let mut v = vec![alpha1];
    v.extend((1..access.cols()).map(|_| Scalar::random(rng)));
    let shares = access.shares(&v);
    let rows = shares
        .iter()
        .enumerate()
        .map(|(i, lambda)| RowKey::generate(params, lambda, access.rho(i), rng))
        .collect();
    let theta = RowKey::generate(params, &alpha2, &params.theta, rng);
    let outsourcing = OutsourcingKey {
        access: access.clone(),
        rows,
    };
    Ok((outsourcing.clone(), DeviceSigningKey { outsourcing, theta }))
}

/// Helper-side signing: everything except the default-attribute components
/// and the message binding.
pub fn oabs_sign_out<R: RngCore + CryptoRng>(
    params: &PublicParams,
    ok: &OutsourcingKey,
    w: &AttributeSet,
    rng: &mut R,
) -> Result<PartialSignature, OabsError> {
    let c = params.vanishing(w)?;
    let coeffs = reconstruction_coefficients(&ok.access, w).ok_or(OabsError::PolicyUnsatisfied)?;
    let r = Scalar::random(rng);

    // sigma1' = g^r prod (d'_i)^{w_i}
    let mut bases = vec![*params.g.left()];
    let mut exps = vec![r];
    for (&i, wi) in &coeffs {
        bases.push(ok.rows[i].d_prime);
        exps.push(*wi);
    }
    let sigma1 = multi_exp(&bases, &exps)?;

    // sigma2' = prod (d_i prod_x (d''_{i,x})^{c_x})^{w_i} * (V0 prod V_k^{c_k})^r
    let cs = c.as_slice();
    let mut bases = Vec::new();
    let mut exps = Vec::new();
    for (&i, wi) in &coeffs {
        let row = &ok.rows[i];
        bases.push(row.d);
        exps.push(*wi);
        for (dx, cx) in row.d_double_prime.iter().zip(&cs[1..]) {
            if !cx.is_zero() {
                bases.push(*dx);
                exps.push(*wi * cx);
            }
        }
    }
    let v_part = params.v_product_g1(&c).pow(&r);
    let sigma2 = multi_exp(&bases, &exps)? * v_part;

    Ok(PartialSignature {
        sigma1,
        sigma2,
        w: w.clone(),
    })
}

/// Device-side completion of a partial signature over `message`.
pub fn oabs_sign<R: RngCore + CryptoRng>(
    params: &PublicParams,
    message: &[u8],
    dk: &DeviceSigningKey,
    partial: &PartialSignature,
    rng: &mut R,
) -> Result<OabsSignature, OabsError> {
    let w = &partial.w;
    let sigma1 = partial.sigma1 * dk.theta.d_prime;
    let m = params.message_hash(message, &sigma1, w);
    let s = Scalar::random(rng);
    let sigma0 = params.g.left().pow(&s);
    let c = params.vanishing(w)?;

    // d_theta prod_x (d''_{theta,x})^{c_x}
    let cs = c.as_slice();
    let mut bases = vec![dk.theta.d];
    let mut exps = vec![Scalar::one()];
    for (dx, cx) in dk.theta.d_double_prime.iter().zip(&cs[1..]) {
        if !cx.is_zero() {
            bases.push(*dx);
            exps.push(*cx);
        }
    }
    let theta_part = multi_exp(&bases, &exps)?;
    let sigma2 = theta_part * partial.sigma2 * params.u_product_g1(&m).pow(&s);

    Ok(OabsSignature {
        sigma0,
        sigma1,
        sigma2,
        w: w.clone(),
    })
}

/// Verification context for one attribute set, caching the `V` product and
/// the prepared pairing inputs that do not depend on the message.
pub struct OabsVerifier<'a> {
    params: &'a PublicParams,
    w: AttributeSet,
    g_prepared: PreparedG2,
    v_prepared: PreparedG2,
}

impl<'a> OabsVerifier<'a> {
    /// `None` when `W` exceeds the parameters' capacity.
    pub fn new(params: &'a PublicParams, w: &AttributeSet) -> Option<Self> {
        let c = params.vanishing(w).ok()?;
        Some(OabsVerifier {
            params,
            w: w.clone(),
            g_prepared: PreparedG2::from(params.g.right()),
            v_prepared: PreparedG2::from(&params.v_product(&c)),
        })
    }

    pub fn verify(&self, message: &[u8], sig: &OabsSignature) -> bool {
        if sig.w != self.w {
            return false;
        }
        let m = self.params.message_hash(message, &sig.sigma1, &sig.w);
        let u_prepared = PreparedG2::from(&self.params.u_product(&m));
        // e(sigma2, g) * e(sigma0, U)^-1 * e(sigma1, V)^-1 == Z
        let lhs = pairing_product_prepared(&[
            (sig.sigma2, &self.g_prepared),
            (sig.sigma0.inverse(), &u_prepared),
            (sig.sigma1.inverse(), &self.v_prepared),
        ]);
        lhs == self.params.z
    }
}

/// Checks `sig` over `message` for the attribute set it carries. Uses only
/// public parameters.
pub fn oabs_verify(params: &PublicParams, message: &[u8], sig: &OabsSignature) -> bool {
    match OabsVerifier::new(params, &sig.w) {
        Some(v) => v.verify(message, sig),
        None => false,
    }
}

/// Decodes and verifies; malformed encodings are rejected.
pub fn oabs_verify_bytes(params: &PublicParams, message: &[u8], sig: &[u8]) -> bool {
    OabsSignature::from_bytes(sig)
        .map(|s| oabs_verify(params, message, &s))
        .unwrap_or(false)
}
