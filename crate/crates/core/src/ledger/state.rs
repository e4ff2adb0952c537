use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{GroupElement, G1_BYTES};
use crate::daps::{daps_setup, DapsParams};
use crate::oabs::PublicParams;

use super::contract::ContractState;
use super::tx::{Transaction, TxKind, TxPayload};
use super::LedgerError;

type AccountKey = [u8; G1_BYTES];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Account {
    balance: u64,
    nonce: u64,
}

/// One line of the exported event log. Rejected transactions are logged
/// with their error and change no balances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerEvent {
    pub seq: u64,
    pub epoch: u64,
    pub kind: TxKind,
    pub sender: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contract: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recipient: Option<String>,
    pub amount: u64,
    pub status: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Receipt {
    pub seq: u64,
    pub epoch: u64,
    pub contract: Option<u64>,
    pub amount: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AccountSnapshot {
    pub key: String,
    pub balance: u64,
    pub nonce: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractSnapshot {
    pub id: u64,
    pub owner: String,
    pub limitation_time: u64,
    pub update_id: String,
    pub registered_keys: usize,
    pub counter_updated_device: i64,
    pub incentive: u64,
    pub balance: u64,
    pub claims: Vec<(String, u64)>,
}

/// Serializable view of the full ledger state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerSnapshot {
    pub height: u64,
    pub total_supply: u64,
    pub accounts: Vec<AccountSnapshot>,
    pub contracts: Vec<ContractSnapshot>,
}

#[derive(Debug, Clone)]
pub struct LedgerState {
    params: PublicParams,
    daps_params: DapsParams,
    height: u64,
    accounts: BTreeMap<AccountKey, Account>,
    contracts: BTreeMap<u64, ContractState>,
    next_contract: u64,
    events: Vec<LedgerEvent>,
    supply: u64,
}

impl LedgerState {
    /// Starts the chain at height 0 with the given allocations, the only
    /// currency ever minted.
    pub fn genesis(
        params: PublicParams,
        allocations: &[(GroupElement, u64)],
    ) -> Result<Self, LedgerError> {
        let mut state = LedgerState {
            params,
            daps_params: daps_setup(),
            height: 0,
            accounts: BTreeMap::new(),
            contracts: BTreeMap::new(),
            next_contract: 0,
            events: Vec::new(),
            supply: 0,
        };
        for (pk, amount) in allocations {
            let acct = state.accounts.entry(pk.to_bytes()).or_default();
            acct.balance = acct
                .balance
                .checked_add(*amount)
                .ok_or(LedgerError::Overflow)?;
            state.supply = state
                .supply
                .checked_add(*amount)
                .ok_or(LedgerError::Overflow)?;
            state.log(TxKind::Genesis, pk, None, Some(pk), *amount, "ok".into());
        }
        Ok(state)
    }

    pub fn params(&self) -> &PublicParams {
        &self.params
    }

    pub fn daps_params(&self) -> &DapsParams {
        &self.daps_params
    }

    pub fn height(&self) -> u64 {
        self.height
    }

    pub fn advance_epoch(&mut self) {
        self.height += 1;
    }

    pub fn balance(&self, pk: &GroupElement) -> u64 {
        self.accounts.get(&pk.to_bytes()).map_or(0, |a| a.balance)
    }

    pub fn nonce(&self, pk: &GroupElement) -> u64 {
        self.accounts.get(&pk.to_bytes()).map_or(0, |a| a.nonce)
    }

    pub fn contract(&self, id: u64) -> Option<&ContractState> {
        self.contracts.get(&id)
    }

    pub fn contracts(&self) -> impl Iterator<Item = &ContractState> {
        self.contracts.values()
    }

    pub fn events(&self) -> &[LedgerEvent] {
        &self.events
    }

    /// Sum of account and contract balances.
    pub fn total_supply(&self) -> u64 {
        self.accounts.values().map(|a| a.balance).sum::<u64>()
            + self.contracts.values().map(|c| c.balance).sum::<u64>()
    }

    pub fn minted(&self) -> u64 {
        self.supply
    }

    pub fn conservation_holds(&self) -> bool {
        self.total_supply() == self.supply
    }

    /// Applies `tx` at the current height. On error nothing but the event
    /// log changes.
    pub fn submit(&mut self, tx: &Transaction) -> Result<Receipt, LedgerError> {
        let contract_hint = match &tx.payload {
            TxPayload::Claim { contract, .. } | TxPayload::Withdraw { contract } => Some(*contract),
            _ => None,
        };
        match self.apply(tx) {
            Ok(receipt) => Ok(receipt),
            Err(err) => {
                self.log(
                    tx.kind(),
                    &tx.sender,
                    contract_hint,
                    None,
                    0,
                    format!("rejected: {err}"),
                );
                Err(err)
            }
        }
    }

    fn apply(&mut self, tx: &Transaction) -> Result<Receipt, LedgerError> {
        if !tx.verify_signature() {
            return Err(LedgerError::SignatureRejected);
        }
        let expected = self.nonce(&tx.sender);
        if tx.nonce != expected {
            return Err(LedgerError::BadNonce {
                expected,
                got: tx.nonce,
            });
        }
        let sender = tx.sender;
        let (contract, recipient, amount) = match &tx.payload {
            TxPayload::Publish(req) => {
                let id = self.next_contract;
                let c = ContractState::deploy(id, sender, req, &self.params)?;
                self.debit(&sender, req.funds)?;
                self.contracts.insert(id, c);
                self.next_contract += 1;
                (Some(id), None, req.funds)
            }
            TxPayload::Claim {
                contract,
                pk_t,
                oabs,
                daps,
            } => {
                let now = self.height;
                let c = self
                    .contracts
                    .get_mut(contract)
                    .ok_or(LedgerError::UnknownContract(*contract))?;
                let amount = c.financial_incentive(
                    &self.params,
                    &self.daps_params,
                    oabs,
                    daps,
                    pk_t,
                    &sender,
                    now,
                )?;
                self.credit(&sender, amount)?;
                (Some(*contract), Some(sender), amount)
            }
            TxPayload::Withdraw { contract } => {
                let now = self.height;
                let c = self
                    .contracts
                    .get_mut(contract)
                    .ok_or(LedgerError::UnknownContract(*contract))?;
                let amount = c.withdraw(&sender, now)?;
                self.credit(&sender, amount)?;
                (Some(*contract), Some(sender), amount)
            }
            TxPayload::Transfer { to, amount } => {
                self.debit(&sender, *amount)?;
                self.credit(to, *amount)?;
                (None, Some(*to), *amount)
            }
        };
        self.accounts.entry(sender.to_bytes()).or_default().nonce += 1;
        let seq = self.log(
            tx.kind(),
            &sender,
            contract,
            recipient.as_ref(),
            amount,
            "ok".into(),
        );
        Ok(Receipt {
            seq,
            epoch: self.height,
            contract,
            amount,
        })
    }

    fn debit(&mut self, pk: &GroupElement, amount: u64) -> Result<(), LedgerError> {
        let balance = self.balance(pk);
        if balance < amount {
            return Err(LedgerError::InsufficientFunds {
                balance,
                needed: amount,
            });
        }
        self.accounts.entry(pk.to_bytes()).or_default().balance -= amount;
        Ok(())
    }

    fn credit(&mut self, pk: &GroupElement, amount: u64) -> Result<(), LedgerError> {
        let acct = self.accounts.entry(pk.to_bytes()).or_default();
        acct.balance = acct
            .balance
            .checked_add(amount)
            .ok_or(LedgerError::Overflow)?;
        Ok(())
    }

    fn log(
        &mut self,
        kind: TxKind,
        sender: &GroupElement,
        contract: Option<u64>,
        recipient: Option<&GroupElement>,
        amount: u64,
        status: String,
    ) -> u64 {
        let seq = self.events.len() as u64;
        self.events.push(LedgerEvent {
            seq,
            epoch: self.height,
            kind,
            sender: sender.to_hex(),
            contract,
            recipient: recipient.map(GroupElement::to_hex),
            amount,
            status,
        });
        seq
    }

    /// Event log as JSON lines.
    pub fn event_log_jsonl(&self) -> String {
        self.events
            .iter()
            .map(|e| serde_json::to_string(e).expect("event serializes") + "\n")
            .collect()
    }

    pub fn snapshot(&self) -> LedgerSnapshot {
        LedgerSnapshot {
            height: self.height,
            total_supply: self.total_supply(),
            accounts: self
                .accounts
                .iter()
                .map(|(k, a)| AccountSnapshot {
                    key: hex::encode(k),
                    balance: a.balance,
                    nonce: a.nonce,
                })
                .collect(),
            contracts: self
                .contracts
                .values()
                .map(|c| ContractSnapshot {
                    id: c.id,
                    owner: c.owner.to_hex(),
                    limitation_time: c.limitation_time,
                    update_id: hex::encode(c.update_id),
                    registered_keys: c.public_key_list.len(),
                    counter_updated_device: c.counter_updated_device,
                    incentive: c.incentive,
                    balance: c.balance,
                    claims: c
                        .claims
                        .iter()
                        .map(|r| (r.payee.to_hex(), r.amount))
                        .collect(),
                })
                .collect(),
        }
    }
}
