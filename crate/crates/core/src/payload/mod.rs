//! Update encryption under a node's DAPS key, and the signature scheme used
//! for ledger transactions and vendor attestations.

mod hybrid;
mod ledger_sig;

pub use hybrid::{
    decrypt, encrypt, CipherError, HybridCiphertext, CIPHERTEXT_MAGIC, CIPHERTEXT_VERSION,
};
pub use ledger_sig::{
    ledger_keygen, ledger_sign, ledger_verify, LedgerKeypair, LedgerSignature,
    LEDGER_SIGNATURE_BYTES,
};
