//! LDPC decoding laboratory.
//!
//! * [`code`]: sparse parity-check matrices, alist I/O, DVB-T2 eIRA
//!   construction and encoding.
//! * [`channel`]: Gray-mapped square QAM, AWGN, exact and max-log demapping.
//! * [`decoder`]: flooding belief propagation with SPA, min-sum, scaled
//!   min-sum and staircase variable-scaled (SVS) min-sum check updates.
//! * [`sim`]: deterministic Monte-Carlo BER sweeps and parameter grid search.
//! * [`cli`]: config files, manifests and the command implementations behind
//!   the `ldpc-lab` binary.

pub mod channel;
pub mod cli;
pub mod code;
pub mod decoder;
pub mod sim;

pub use channel::{ChannelParams, DemapMode, ModulationScheme, LLR_MAX};
pub use code::{AddressTable, CodeDescriptor, CodeError, Codeword, LdpcCode, SparseParityCheck};
pub use decoder::{decode, DecodeResult, Decoder, DecoderVariant};
