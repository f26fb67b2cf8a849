//! Desk-scale Deutsch-Jozsa decider.
//!
//! Builds indicator functions (truth tables) for constant, balanced, binary
//! periodic and monochromatic languages over `{0,1}^n`, computes the output
//! amplitudes of the Deutsch-Jozsa circuit with three independent engines,
//! and classifies tables against the constant/balanced promise.
//!
//! Bit address 0 is the least significant bit everywhere in this crate.

pub mod analysis;
pub mod bitstring;
pub mod cli;
pub mod fmt;
pub mod oracle;
pub mod rng;
pub mod simulator;

pub use analysis::{
    classify, count_balanced, count_monochromatic, dark_lines, detect_monochromatic,
};
pub use analysis::{Classification, Verdict};
pub use bitstring::{bitget, bitput, bitstrval, bool_dot, bstr, BitError, BitString, MAX_WIDTH};
pub use oracle::{
    combine, load_truth_table, make_binary_periodic, make_constant, make_monochromatic,
    make_random_balanced, perfect_square_layer, save_truth_table, CombineOp, OracleError,
    OracleKind, OracleSpec, TruthTable,
};
pub use simulator::{
    amplitudes_direct, amplitudes_fwht, sample_outcomes, statevector_run, SimError, Spectrum,
    StateVector, StatevectorRun,
};
