//! Energy-efficient frequency estimation with a GHZ-diagonal probe prepared
//! from thermal qubits and exposed to phase-covariant noise with memory.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blockstate;
pub mod channel;
pub mod cli;
pub mod energetics;
pub mod error;
pub mod metrology;
pub mod numeric;
pub mod optimize;
pub mod oracle;

pub use blockstate::{block_coefficients, readout_probabilities, MeasurementSetting, ProbeBlocks};
pub use channel::{channel_at, ChannelSnapshot, NoiseParams};
pub use energetics::{ledger, EnergyLedger};
pub use error::{Error, Result};
pub use metrology::{cfi, optimal_setting, qfi_exact, qfi_small_r, DerivativeMode};
pub use optimize::{optimal_time, FisherMode, Objective};
