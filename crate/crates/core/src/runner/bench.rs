use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::daps::{daps_extract, daps_kgen, daps_setup, daps_sign, daps_verify, DapsAddress};
use crate::oabs::{oabs_keygen, oabs_setup, oabs_sign, oabs_sign_out, oabs_verify, OabsError};
use crate::payload::{decrypt, encrypt, ledger_keygen, ledger_sign, ledger_verify};
use crate::policy::{policy_to_lsss, AttributeSet};

/// Reference device-side signing time for 50 attributes on the original
/// laptop benchmark.
pub const PAPER_SIGN_MS_AT_50: f64 = 155.0;

/// Reference timings (ms) of the original benchmark: setup, key generation,
/// sign/encrypt, verify/decrypt, extract.
const PAPER_DAPS: [f64; 5] = [7.0, 13.0, 15.0, 31.0, 61.0];
const PAPER_ECDSA: [f64; 4] = [6.0, 2.0, 4.0, 10.0];
const PAPER_ELGAMAL: [f64; 4] = [6.0, 2.0, 11.0, 3.0];

const ELGAMAL_PAYLOAD: usize = 1024;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub scheme: String,
    pub operation: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attributes: Option<usize>,
    pub iterations: usize,
    pub mean_ms: f64,
    pub min_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchTable {
    pub rows: Vec<BenchRow>,
}

impl BenchTable {
    /// Mean device-side signing time per attribute count, in input order.
    pub fn sign_times(&self) -> Vec<(usize, f64)> {
        self.rows
            .iter()
            .filter(|r| r.scheme == "OABS" && r.operation == "sign")
            .filter_map(|r| r.attributes.map(|a| (a, r.mean_ms)))
            .collect()
    }

    pub fn sign_time_strictly_increasing(&self) -> bool {
        let mut times = self.sign_times();
        times.sort_by_key(|(a, _)| *a);
        times.windows(2).all(|p| p[1].1 > p[0].1)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{:<8} {:<10} {:>5} {:>6} {:>10} {:>10} {:>10}\n",
            "scheme", "operation", "|W|", "iters", "mean ms", "min ms", "ref ms"
        );
        for r in &self.rows {
            out += &format!(
                "{:<8} {:<10} {:>5} {:>6} {:>10.3} {:>10.3} {:>10}\n",
                r.scheme,
                r.operation,
                r.attributes.map_or("-".into(), |a| a.to_string()),
                r.iterations,
                r.mean_ms,
                r.min_ms,
                r.reference_ms.map_or("-".into(), |v| format!("{v:.0}")),
            );
        }
        out
    }
}

fn measure<F: FnMut()>(iterations: usize, mut f: F) -> (f64, f64) {
    f();
    let mut total = 0.0;
    let mut min = f64::INFINITY;
    for _ in 0..iterations {
        let t = Instant::now();
        f();
        let ms = t.elapsed().as_secs_f64() * 1e3;
        total += ms;
        min = min.min(ms);
    }
    (total / iterations as f64, min)
}

fn row(
    scheme: &str,
    operation: &str,
    attributes: Option<usize>,
    iterations: usize,
    (mean_ms, min_ms): (f64, f64),
    reference_ms: Option<f64>,
) -> BenchRow {
    BenchRow {
        scheme: scheme.into(),
        operation: operation.into(),
        attributes,
        iterations,
        mean_ms,
        min_ms,
        reference_ms,
    }
}

/// Times device-side signing for each attribute count, plus the outsourced
/// half and verification, followed by the DAPS, ledger-signature and
/// ElGamal primitives. Runs on the calling thread.
pub fn bench_sign(counts: &[usize], iterations: usize, seed: u64) -> Result<BenchTable, OabsError> {
    let iterations = iterations.max(1);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let capacity = counts.iter().copied().max().unwrap_or(0).max(1) + 2;
    let (params, msk) = oabs_setup(128, capacity, 256, &mut rng)?;
    let access = policy_to_lsss("a0")?;
    let (ok, dk) = oabs_keygen(&params, &msk, &access, &mut rng)?;
    let message = [7u8; 48];
    let mut rows = Vec::new();

    for &k in counts {
        let labels: Vec<String> = (0..k.max(1)).map(|i| format!("a{i}")).collect();
        let w = AttributeSet::from_labels(&labels, capacity)?;
        let partial = oabs_sign_out(&params, &ok, &w, &mut rng)?;
        let t = measure(iterations, || {
            oabs_sign_out(&params, &ok, &w, &mut rng).expect("satisfied");
        });
        rows.push(row("OABS", "sign_out", Some(k), iterations, t, None));
        let t = measure(iterations, || {
            oabs_sign(&params, &message, &dk, &partial, &mut rng).expect("sign");
        });
        let reference = (k == 50).then_some(PAPER_SIGN_MS_AT_50);
        rows.push(row("OABS", "sign", Some(k), iterations, t, reference));
        let sig = oabs_sign(&params, &message, &dk, &partial, &mut rng)?;
        let t = measure(iterations, || {
            assert!(oabs_verify(&params, &message, &sig));
        });
        rows.push(row("OABS", "verify", Some(k), iterations, t, None));
    }

    let t = measure(iterations, || {
        std::hint::black_box(daps_setup());
    });
    rows.push(row(
        "DAPS",
        "setup",
        None,
        iterations,
        t,
        Some(PAPER_DAPS[0]),
    ));
    let dp = daps_setup();
    let t = measure(iterations, || {
        daps_kgen(&dp, &mut rng);
    });
    rows.push(row(
        "DAPS",
        "kgen",
        None,
        iterations,
        t,
        Some(PAPER_DAPS[1]),
    ));
    let kp = daps_kgen(&dp, &mut rng);
    let addr = DapsAddress::new(b"bench".to_vec()).expect("non-empty");
    let t = measure(iterations, || {
        daps_sign(&dp, kp.sk(), &addr, b"one");
    });
    rows.push(row(
        "DAPS",
        "sign",
        None,
        iterations,
        t,
        Some(PAPER_DAPS[2]),
    ));
    let s1 = daps_sign(&dp, kp.sk(), &addr, b"one");
    let s2 = daps_sign(&dp, kp.sk(), &addr, b"two");
    let t = measure(iterations, || {
        assert!(daps_verify(&dp, kp.pk(), &addr, b"one", &s1));
    });
    rows.push(row(
        "DAPS",
        "verify",
        None,
        iterations,
        t,
        Some(PAPER_DAPS[3]),
    ));
    let t = measure(iterations, || {
        daps_extract(&dp, kp.pk(), &addr, (b"one", &s1), (b"two", &s2)).expect("extract");
    });
    rows.push(row(
        "DAPS",
        "extract",
        None,
        iterations,
        t,
        Some(PAPER_DAPS[4]),
    ));

    let t = measure(iterations, || {
        ledger_keygen(&mut rng);
    });
    rows.push(row(
        "LedgerSig",
        "kgen",
        None,
        iterations,
        t,
        Some(PAPER_ECDSA[1]),
    ));
    let lk = ledger_keygen(&mut rng);
    let t = measure(iterations, || {
        ledger_sign(&lk, &message, &mut rng);
    });
    rows.push(row(
        "LedgerSig",
        "sign",
        None,
        iterations,
        t,
        Some(PAPER_ECDSA[2]),
    ));
    let ls = ledger_sign(&lk, &message, &mut rng);
    let t = measure(iterations, || {
        assert!(ledger_verify(lk.pk(), &message, &ls));
    });
    rows.push(row(
        "LedgerSig",
        "verify",
        None,
        iterations,
        t,
        Some(PAPER_ECDSA[3]),
    ));

    let mut data = vec![0u8; ELGAMAL_PAYLOAD];
    rng.fill_bytes(&mut data);
    let t = measure(iterations, || {
        encrypt(kp.pk(), &data, &mut rng);
    });
    rows.push(row(
        "ElGamal",
        "encrypt",
        None,
        iterations,
        t,
        Some(PAPER_ELGAMAL[2]),
    ));
    let c = encrypt(kp.pk(), &data, &mut rng);
    let t = measure(iterations, || {
        decrypt(kp.sk(), &c).expect("decrypt");
    });
    rows.push(row(
        "ElGamal",
        "decrypt",
        None,
        iterations,
        t,
        Some(PAPER_ELGAMAL[3]),
    ));

    Ok(BenchTable { rows })
}
