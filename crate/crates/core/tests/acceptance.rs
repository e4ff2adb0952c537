//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use podchain::algebra::{
    default_attribute, digest, hash_to_bits, pair_raw, G2Element, GroupElement, Scalar,
    TargetElement,
};
use podchain::daps::{
    daps_extract, daps_kgen, daps_setup, daps_sign, daps_verify, DapsAddress, DapsKeypair,
    DapsSignature,
};
use podchain::ledger::{
    claim_digest, DeployRequest, LedgerError, LedgerState, Transaction, TxPayload,
};
use podchain::oabs::{
    oabs_keygen, oabs_setup, oabs_sign, oabs_sign_out, oabs_verify, DeviceSigningKey,
    OabsSignature, OabsVerifier, PublicParams,
};
use podchain::payload::{decrypt, encrypt, ledger_keygen, LedgerKeypair};
use podchain::policy::{policy_to_lsss, AttributeSet, Formula};
use podchain::protocol::Adversary;
use podchain::runner::{
    bench_sign, run_scenario, Outcome, RunOptions, ScenarioConfig, PAPER_SIGN_MS_AT_50,
};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

const UNIVERSE: [&str; 8] = ["A", "B", "C", "D", "E", "F", "G", "H"];
const COMPLETENESS_RUNS: usize = 200;
const COMPLETENESS_BUDGET_S: f64 = 60.0;
const MAX_PAYLOAD: usize = 64 * 1024;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Random monotone formula with exactly `leaves` leaves.
fn random_formula(rng: &mut ChaCha20Rng, leaves: usize) -> String {
    if leaves == 1 {
        return UNIVERSE[rng.gen_range(0..UNIVERSE.len())].to_string();
    }
    let left = rng.gen_range(1..leaves);
    let op = if rng.gen_bool(0.5) { "AND" } else { "OR" };
    format!(
        "({} {op} {})",
        random_formula(rng, left),
        random_formula(rng, leaves - left)
    )
}

/// A random subset of the universe grown until it satisfies `formula`.
fn random_satisfying(rng: &mut ChaCha20Rng, formula: &Formula) -> Vec<String> {
    let mut set: Vec<String> = UNIVERSE
        .iter()
        .filter(|_| rng.gen_bool(0.3))
        .map(|s| s.to_string())
        .collect();
    let mut rest: Vec<&str> = UNIVERSE
        .iter()
        .copied()
        .filter(|s| !set.iter().any(|x| x == s))
        .collect();
    while !formula.evaluate(&set) {
        let i = rng.gen_range(0..rest.len());
        set.push(rest.remove(i).to_string());
    }
    set
}

fn random_policy_and_set(rng: &mut ChaCha20Rng) -> (String, Vec<String>) {
    let leaves = rng.gen_range(1..=8);
    let policy = random_formula(rng, leaves);
    let formula = Formula::parse(&policy).expect("generated policy parses");
    let w = random_satisfying(rng, &formula);
    (policy, w)
}

fn criterion_1() -> Verdict {
    let mut rng = ChaCha20Rng::seed_from_u64(0xC0FFEE);
    let start = Instant::now();
    let mut max_rows = 0;
    for run in 0..COMPLETENESS_RUNS {
        let (policy, w) = random_policy_and_set(&mut rng);
        max_rows = max_rows.max(policy_to_lsss(&policy).unwrap().rows());
        let devices = rng.gen_range(1..=2);
        let cfg = ScenarioConfig {
            seed: rng.next_u64(),
            devices,
            nodes: devices,
            capacity: 16,
            message_bits: 256,
            policies: vec![policy.clone()],
            attributes: w,
            payload_bytes: rng.gen_range(0..=MAX_PAYLOAD),
            incentive: rng.gen_range(1..=100),
            ..ScenarioConfig::default()
        };
        let out =
            run_scenario(&cfg, &RunOptions::default()).map_err(|e| format!("run {run}: {e}"))?;
        let r = &out.report;
        check(
            r.outcome == Outcome::PaidDelivered,
            format!("run {run} ({policy}): {}", r.outcome),
        )?;
        let update_id = hex::encode(digest(&out.payload));
        for d in &r.devices {
            check(d.delivered, format!("run {run}: {} not delivered", d.id))?;
            check(
                d.firmware.as_deref() == Some(update_id.as_str()),
                format!("run {run}: firmware digest"),
            )?;
        }
        for (i, n) in r.nodes.iter().enumerate().take(devices) {
            check(
                n.paid == cfg.incentive,
                format!("run {run}: node {i} paid {}", n.paid),
            )?;
        }
        let c = &r.ledger.contracts[0];
        check(
            c.claims.len() == devices,
            format!("run {run}: {} claims", c.claims.len()),
        )?;
        check(
            c.claims.iter().all(|(_, amount)| *amount == cfg.incentive),
            format!("run {run}: contract debits differ from x"),
        )?;
        check(
            c.balance == 0 && r.conservation.holds,
            format!("run {run}: balances"),
        )?;
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        secs < COMPLETENESS_BUDGET_S,
        format!("{COMPLETENESS_RUNS} runs took {secs:.1} s, budget {COMPLETENESS_BUDGET_S} s"),
    )?;
    Ok(format!(
        "{COMPLETENESS_RUNS}/{COMPLETENESS_RUNS} randomized honest runs bit-exact, node +x, contract -x (policies up to {max_rows} rows, {secs:.1} s)"
    ))
}

fn length_prefixed(out: &mut Vec<u8>, field: &[u8]) {
    out.extend_from_slice(&(field.len() as u32).to_be_bytes());
    out.extend_from_slice(field);
}

/// Message bits recomputed from the documented hash-input layout.
fn oracle_message_bits(params: &PublicParams, message: &[u8], sig: &OabsSignature) -> Vec<bool> {
    let mut buf = Vec::new();
    length_prefixed(&mut buf, message);
    length_prefixed(&mut buf, &sig.sigma1().to_bytes());
    length_prefixed(&mut buf, &(sig.attributes().len() as u64).to_be_bytes());
    for a in sig.attributes().as_slice() {
        length_prefixed(&mut buf, &a.to_bytes());
    }
    length_prefixed(&mut buf, &default_attribute().to_bytes());
    hash_to_bits(&buf, params.message_bits())
}

/// Coefficients of prod (X - w) over W and theta by schoolbook expansion,
/// zero-padded to n.
fn oracle_coefficients(w: &AttributeSet, theta: &Scalar, n: usize) -> Vec<Scalar> {
    let mut poly = vec![Scalar::one()];
    for root in w.as_slice().iter().chain([theta]) {
        let mut next = vec![Scalar::zero(); poly.len() + 1];
        for (j, c) in poly.iter().enumerate() {
            next[j + 1] += *c;
            next[j] -= *root * c;
        }
        poly = next;
    }
    poly.resize(n, Scalar::zero());
    poly
}

/// Evaluates both sides of the verification equation with raw pairings.
fn oracle_verify(params: &PublicParams, message: &[u8], sig: &OabsSignature) -> bool {
    let m = oracle_message_bits(params, message, sig);
    let c = oracle_coefficients(sig.attributes(), params.theta(), params.capacity());
    let mut u = *params.u()[0].right();
    for (bit, uj) in m.iter().zip(&params.u()[1..]) {
        if *bit {
            u = u * *uj.right();
        }
    }
    let mut v: G2Element = *params.v()[0].right();
    for (ck, vk) in c.iter().zip(&params.v()[1..]) {
        v = v * vk.right().pow(ck);
    }
    let g2 = params.generator().right();
    let numerator = pair_raw(sig.sigma2(), g2);
    let denominator: TargetElement = pair_raw(sig.sigma0(), &u) * pair_raw(sig.sigma1(), &v);
    numerator == *params.z() * denominator
}

fn sign_chain(
    params: &PublicParams,
    dk: &DeviceSigningKey,
    w: &AttributeSet,
    message: &[u8],
    rng: &mut ChaCha20Rng,
) -> OabsSignature {
    let partial = oabs_sign_out(params, dk.outsourcing_key(), w, rng).expect("satisfying set");
    oabs_sign(params, message, dk, &partial, rng).expect("sign")
}

fn criterion_2() -> Verdict {
    let mut rng = ChaCha20Rng::seed_from_u64(2);
    let (params, msk) = oabs_setup(128, 16, 256, &mut rng).unwrap();
    let mut agreements = 0;
    for trial in 0..100 {
        let (policy, labels) = random_policy_and_set(&mut rng);
        let (_, dk) =
            oabs_keygen(&params, &msk, &policy_to_lsss(&policy).unwrap(), &mut rng).unwrap();
        let w = params.attribute_set(&labels).unwrap();
        let mut message = vec![0u8; rng.gen_range(0..200)];
        rng.fill_bytes(&mut message);
        let sig = sign_chain(&params, &dk, &w, &message, &mut rng);
        let verdict = oabs_verify(&params, &message, &sig);
        check(verdict, format!("trial {trial}: honest signature rejected"))?;
        check(
            oracle_verify(&params, &message, &sig) == verdict,
            format!("trial {trial}: oracle disagrees"),
        )?;
        message.push(1);
        let verdict = oabs_verify(&params, &message, &sig);
        check(!verdict, format!("trial {trial}: altered message accepted"))?;
        check(
            oracle_verify(&params, &message, &sig) == verdict,
            format!("trial {trial}: oracle disagrees"),
        )?;
        agreements += 2;
    }
    Ok(format!(
        "100/100 accepted; raw-pairing oracle agreed on {agreements}/{agreements} verdicts"
    ))
}

fn criterion_3() -> Verdict {
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let (params, msk) = oabs_setup(128, 16, 256, &mut rng).unwrap();
    let mut rejections = 0;
    for trial in 0..100 {
        let (policy, labels) = random_policy_and_set(&mut rng);
        let (_, dk) =
            oabs_keygen(&params, &msk, &policy_to_lsss(&policy).unwrap(), &mut rng).unwrap();
        let w = params.attribute_set(&labels).unwrap();
        let message = rng.next_u64().to_be_bytes();
        let sig = sign_chain(&params, &dk, &w, &message, &mut rng);
        let verifier = OabsVerifier::new(&params, &w).unwrap();
        check(
            verifier.verify(&message, &sig),
            format!("trial {trial}: honest signature rejected"),
        )?;
        for _ in 0..20 {
            let delta = GroupElement::random(&mut rng);
            check(!delta.is_identity(), "identity perturbation drawn")?;
            let bad = OabsSignature::from_parts(
                *sig.sigma0(),
                *sig.sigma1(),
                *sig.sigma2() * delta,
                w.clone(),
            );
            check(
                !verifier.verify(&message, &bad),
                format!("trial {trial}: perturbed sigma2 accepted"),
            )?;
            rejections += 1;
        }
    }
    // two keys under different access structures, one satisfying set
    let w = params.attribute_set(&["A", "B"]).unwrap();
    let mut key_free = 0;
    for (p1, p2) in [
        ("A AND B", "A OR C"),
        ("(A AND B) OR C", "B"),
        ("A", "(D OR B) AND A"),
    ] {
        let (_, k1) = oabs_keygen(&params, &msk, &policy_to_lsss(p1).unwrap(), &mut rng).unwrap();
        let (_, k2) = oabs_keygen(&params, &msk, &policy_to_lsss(p2).unwrap(), &mut rng).unwrap();
        let s1 = sign_chain(&params, &k1, &w, b"pk_t", &mut rng);
        let s2 = sign_chain(&params, &k2, &w, b"pk_t", &mut rng);
        check(
            oabs_verify(&params, b"pk_t", &s1),
            format!("{p1}: rejected"),
        )?;
        check(
            oabs_verify(&params, b"pk_t", &s2),
            format!("{p2}: rejected"),
        )?;
        key_free += 1;
    }
    check(rejections == 2000, format!("{rejections} rejections"))?;
    Ok(format!("{rejections}/2000 sigma2 perturbations rejected; {key_free}/3 policy pairs verify under one key-free call"))
}

fn criterion_4() -> Verdict {
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    let params = daps_setup();
    for trial in 0..100 {
        let kp = daps_kgen(&params, &mut rng);
        let mut addr = vec![0u8; 80];
        rng.fill_bytes(&mut addr);
        let addr = DapsAddress::new(addr).unwrap();
        let (p1, p2) = (rng.next_u64().to_be_bytes(), rng.next_u64().to_le_bytes());
        check(p1 != p2, "payload collision")?;
        let s1 = daps_sign(&params, kp.sk(), &addr, &p1);
        let s2 = daps_sign(&params, kp.sk(), &addr, &p2);
        let sk = daps_extract(&params, kp.pk(), &addr, (&p1, &s1), (&p2, &s2))
            .map_err(|e| format!("trial {trial}: {e}"))?;
        check(
            sk == *kp.sk(),
            format!("trial {trial}: extracted scalar differs"),
        )?;
        let mut data = vec![0u8; rng.gen_range(0..4096)];
        rng.fill_bytes(&mut data);
        let c = encrypt(kp.pk(), &data, &mut rng);
        check(
            decrypt(&sk, &c).as_deref() == Ok(&data[..]),
            format!("trial {trial}: decryption"),
        )?;
    }
    Ok("100/100 extracted keys equal the originals and decrypt ciphertexts for pk_t".into())
}

fn criterion_5() -> Verdict {
    let mut mixed = 0;
    let mut refunded = 0;
    let mut paid = 0;
    for adversary in Adversary::ALL {
        for seed in 0..20u64 {
            let cfg = ScenarioConfig {
                seed: 1000 + seed,
                adversary,
                devices: 2,
                nodes: 2,
                gateways: 1,
                ..ScenarioConfig::default()
            };
            let r = run_scenario(&cfg, &RunOptions::default())
                .map_err(|e| e.to_string())?
                .report;
            mixed += r
                .devices
                .iter()
                .filter(|d| d.outcome == Outcome::Violation)
                .count();
            check(
                r.conservation.holds,
                format!("{adversary}/{seed}: conservation"),
            )?;
            check(
                r.vendor.refund == r.vendor.funds - r.vendor.payouts,
                format!(
                    "{adversary}/{seed}: refund {} with payouts {}",
                    r.vendor.refund, r.vendor.payouts
                ),
            )?;
            check(
                r.matches_expectation,
                format!("{adversary}/{seed}: {} vs {}", r.outcome, r.expected),
            )?;
            match r.outcome {
                Outcome::PaidDelivered => paid += 1,
                Outcome::RefundedUndelivered => refunded += 1,
                Outcome::Violation => {}
            }
        }
    }
    check(mixed == 0, format!("{mixed} mixed outcomes"))?;
    Ok(format!(
        "100 runs: {paid} paid+delivered, {refunded} refunded+undelivered, 0 mixed, refunds exact"
    ))
}

struct ContractRig {
    rng: ChaCha20Rng,
    params: PublicParams,
    device: DeviceSigningKey,
    w: AttributeSet,
    vendor: LedgerKeypair,
    nodes: Vec<(LedgerKeypair, DapsKeypair)>,
    ledger: LedgerState,
    update_id: [u8; 32],
}

impl ContractRig {
    fn new(nodes: usize, vendor_funds: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(6 + nodes as u64);
        let (params, msk) = oabs_setup(128, 4, 32, &mut rng).unwrap();
        let (_, device) =
            oabs_keygen(&params, &msk, &policy_to_lsss("A").unwrap(), &mut rng).unwrap();
        let w = params.attribute_set(&["A"]).unwrap();
        let vendor = ledger_keygen(&mut rng);
        let dp = daps_setup();
        let nodes = (0..nodes)
            .map(|_| (ledger_keygen(&mut rng), daps_kgen(&dp, &mut rng)))
            .collect();
        let ledger = LedgerState::genesis(params.clone(), &[(*vendor.pk(), vendor_funds)]).unwrap();
        ContractRig {
            rng,
            params,
            device,
            w,
            vendor,
            nodes,
            ledger,
            update_id: digest(b"update"),
        }
    }

    fn publish(
        &mut self,
        devices: u64,
        incentive: u64,
        funds: u64,
        deadline: u64,
    ) -> Result<u64, LedgerError> {
        let req = DeployRequest {
            deadline,
            update_id: self.update_id,
            devices,
            attributes: self.w.clone(),
            node_keys: self.nodes.iter().map(|(_, d)| *d.pk()).collect(),
            incentive,
            funds,
        };
        let nonce = self.ledger.nonce(self.vendor.pk());
        let tx = Transaction::sign(&self.vendor, nonce, TxPayload::Publish(req), &mut self.rng);
        Ok(self.ledger.submit(&tx)?.contract.unwrap())
    }

    fn claim(&mut self, node: usize, contract: u64) -> Result<u64, LedgerError> {
        let (lk, dk) = (self.nodes[node].0.clone(), self.nodes[node].1.clone());
        let sig = sign_chain(
            &self.params,
            &self.device,
            &self.w,
            &dk.pk().to_bytes(),
            &mut self.rng,
        );
        let addr = DapsAddress::session(dk.pk(), &self.update_id);
        let payload = claim_digest(contract, &self.update_id, dk.pk(), lk.pk(), &sig);
        let daps: DapsSignature = daps_sign(&daps_setup(), dk.sk(), &addr, &payload);
        let nonce = self.ledger.nonce(lk.pk());
        let tx = Transaction::sign(
            &lk,
            nonce,
            TxPayload::Claim {
                contract,
                pk_t: *dk.pk(),
                oabs: sig,
                daps,
            },
            &mut self.rng,
        );
        Ok(self.ledger.submit(&tx)?.amount)
    }

    fn withdraw(&mut self, contract: u64) -> Result<u64, LedgerError> {
        let nonce = self.ledger.nonce(self.vendor.pk());
        let tx = Transaction::sign(
            &self.vendor,
            nonce,
            TxPayload::Withdraw { contract },
            &mut self.rng,
        );
        Ok(self.ledger.submit(&tx)?.amount)
    }
}

fn criterion_6() -> Verdict {
    let mut steps = 0;
    for n in [1u64, 3, 10] {
        for x in [1u64, 10] {
            for surplus in [0u64, 7] {
                let funds = n * x + surplus;
                let mut rig = ContractRig::new(n as usize + 1, funds);
                let deadline = 3;
                let id = rig
                    .publish(n, x, funds, deadline)
                    .map_err(|e| e.to_string())?;
                // pseudocode replay
                let mut balance = funds;
                let mut counter = n as i64 - 1;
                for k in 0..n as usize {
                    let expected = balance - x * counter as u64;
                    let got = rig
                        .claim(k, id)
                        .map_err(|e| format!("n={n} x={x} claim {k}: {e}"))?;
                    check(
                        got == expected,
                        format!("n={n} x={x} claim {k}: paid {got}, oracle {expected}"),
                    )?;
                    balance -= expected;
                    counter -= 1;
                    let c = rig.ledger.contract(id).unwrap();
                    check(
                        c.balance == balance && c.counter_updated_device == counter,
                        format!("n={n} x={x} claim {k}: state ({}, {}) vs oracle ({balance}, {counter})", c.balance, c.counter_updated_device),
                    )?;
                    steps += 1;
                }
                check(
                    rig.claim(n as usize, id) == Err(LedgerError::Exhausted),
                    format!("n={n} x={x}: extra claim not exhausted"),
                )?;
                while rig.ledger.height() <= deadline {
                    rig.ledger.advance_epoch();
                }
                let refund = rig.withdraw(id).map_err(|e| e.to_string())?;
                check(
                    refund == balance,
                    format!("n={n} x={x}: refund {refund} vs {balance}"),
                )?;
                check(rig.ledger.conservation_holds(), "conservation")?;
            }
        }
    }
    Ok(format!(
        "{steps} claims across n in {{1,3,10}}, x in {{1,10}} matched the pseudocode step for step"
    ))
}

fn criterion_7() -> Verdict {
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let (params, _) = oabs_setup(128, 16, 256, &mut rng).unwrap();
    let sets: Vec<AttributeSet> = [vec![], vec!["A"], vec!["A", "B"], vec!["C", "D", "E"]]
        .iter()
        .map(|l| params.attribute_set(l).unwrap())
        .collect();
    let verifiers: Vec<_> = sets
        .iter()
        .map(|w| OabsVerifier::new(&params, w).unwrap())
        .collect();
    let mut oabs_accepts = 0;
    for i in 0..10_000 {
        let k = i % sets.len();
        let sig = OabsSignature::from_parts(
            GroupElement::random(&mut rng),
            GroupElement::random(&mut rng),
            GroupElement::random(&mut rng),
            sets[k].clone(),
        );
        if verifiers[k].verify(&(i as u64).to_be_bytes(), &sig) {
            oabs_accepts += 1;
        }
    }
    let dp = daps_setup();
    let kp = daps_kgen(&dp, &mut rng);
    let addr = DapsAddress::new(b"smoke".to_vec()).unwrap();
    let mut daps_accepts = 0;
    for i in 0..10_000u64 {
        let sig =
            DapsSignature::from_parts(GroupElement::random(&mut rng), Scalar::random(&mut rng));
        if daps_verify(&dp, kp.pk(), &addr, &i.to_be_bytes(), &sig) {
            daps_accepts += 1;
        }
    }
    check(
        oabs_accepts == 0 && daps_accepts == 0,
        format!("{oabs_accepts} OABS / {daps_accepts} DAPS false accepts"),
    )?;
    Ok("0/10000 random OABS triples and 0/10000 random DAPS pairs accepted".into())
}

fn criterion_8() -> Verdict {
    let table = bench_sign(&[10, 20, 50], 30, 8).map_err(|e| e.to_string())?;
    let times = table.sign_times();
    let shown: Vec<String> = times
        .iter()
        .map(|(k, t)| format!("|W|={k}: {t:.2} ms"))
        .collect();
    check(
        table.sign_time_strictly_increasing(),
        format!("not strictly increasing: {}", shown.join(", ")),
    )?;
    Ok(format!(
        "{} (reference {PAPER_SIGN_MS_AT_50:.0} ms at 50, not asserted)",
        shown.join(", ")
    ))
}

fn criterion_9() -> Verdict {
    let mut runs = 0;
    for adversary in Adversary::ALL {
        for seed in [5u64, 6] {
            let cfg = ScenarioConfig {
                seed,
                adversary,
                devices: 2,
                nodes: 3,
                gateways: 2,
                ..ScenarioConfig::default()
            };
            let a = run_scenario(&cfg, &RunOptions::default()).map_err(|e| e.to_string())?;
            let b = run_scenario(&cfg, &RunOptions::default()).map_err(|e| e.to_string())?;
            check(
                a.report.to_json() == b.report.to_json(),
                format!("{adversary}/{seed}: report differs"),
            )?;
            check(
                a.event_log == b.event_log,
                format!("{adversary}/{seed}: ledger log differs"),
            )?;
            check(
                a.trace == b.trace,
                format!("{adversary}/{seed}: trace differs"),
            )?;
            runs += 1;
        }
    }
    Ok(format!(
        "{runs} scenario pairs byte-identical in report, ledger log and trace"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("completeness", criterion_1),
        ("verification-equation oracle", criterion_2),
        ("sigma2 uniqueness / key-free verification", criterion_3),
        ("DAPS extraction", criterion_4),
        ("fairness matrix", criterion_5),
        ("contract arithmetic", criterion_6),
        ("unforgeability smoke", criterion_7),
        ("benchmark shape", criterion_8),
        ("determinism", criterion_9),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.iter().any(|x| *x == id || name.contains(x.as_str())) {
            continue;
        }
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS [{id}] {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{id}] {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
