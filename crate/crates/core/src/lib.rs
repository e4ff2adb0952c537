pub mod algebra;
pub mod daps;
pub mod ledger;
pub mod oabs;
pub mod payload;
pub mod policy;
pub mod protocol;
pub mod runner;
