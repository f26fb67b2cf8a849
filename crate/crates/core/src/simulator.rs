//! Output amplitudes of the Deutsch-Jozsa circuit.
//!
//! With `n` query qubits and indicator `f`, the query register leaves the
//! circuit in `sum_z psi(z) |z>` where
//!
//! ```text
//! psi(z) = 2^-n * sum_x (-1)^(f(x) + x.z)
//! ```
//!
//! Three engines compute `psi` independently:
//!
//! * [`amplitudes_direct`] evaluates the double sum, `O(4^n)`;
//! * [`amplitudes_fwht`] runs the in-place Walsh-Hadamard butterfly on the
//!   sign vector `(-1)^f(x)`, `O(n 2^n)`;
//! * [`statevector_run`] executes the `(n+1)`-qubit circuit gate by gate.
//!
//! Every operator in the circuit is real, so amplitudes are stored as `f64`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use thiserror::Error;

use crate::bitstring::{check_width, dot, BitError};
use crate::fmt::g17;
use crate::oracle::TruthTable;
use crate::rng::SplitMix64;

/// Entrywise agreement required between engines, and the bound on
/// normalization drift.
pub const ENGINE_TOLERANCE: f64 = 1e-12;

/// Widest table the quadratic engine accepts.
pub const DIRECT_MAX_WIDTH: u32 = 14;

/// Widest table the statevector engine accepts (`2^13` amplitudes).
pub const STATEVECTOR_MAX_WIDTH: u32 = 12;

/// Accepted deviation of total probability from 1 before sampling.
const SAMPLING_NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Bit(#[from] BitError),
    #[error("{engine} engine supports n <= {max}, got n = {width}")]
    WidthTooLarge {
        engine: &'static str,
        width: u32,
        max: u32,
    },
    #[error("answer qubit does not factor out after step {step}: residual {residual:e}")]
    Factorization { step: u8, residual: f64 },
    #[error("state norm drifted to {norm_sqr} after step {step}")]
    NormDrift { step: u8, norm_sqr: f64 },
    #[error("spectrum is not normalized: total probability {total}")]
    Unnormalized { total: f64 },
    #[error("expected {expected} amplitudes, got {found}")]
    Length { expected: usize, found: usize },
    #[error("shot count must be positive")]
    NoShots,
}

/// Output amplitudes `psi(z)` for every `z` in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    width: u32,
    amplitudes: Vec<f64>,
}

impl Spectrum {
    pub fn new(width: u32, amplitudes: Vec<f64>) -> Result<Self, SimError> {
        check_width(width)?;
        let expected = 1usize << width;
        if amplitudes.len() != expected {
            return Err(SimError::Length {
                expected,
                found: amplitudes.len(),
            });
        }
        Ok(Self { width, amplitudes })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, z: u32) -> f64 {
        self.amplitudes[z as usize]
    }

    pub fn probability(&self, z: u32) -> f64 {
        let a = self.amplitude(z);
        a * a
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a * a).collect()
    }

    /// `sum_z psi(z)^2`; equals 1 for any indicator by Parseval.
    pub fn total_probability(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum()
    }

    /// Largest entrywise `|psi_a(z) - psi_b(z)|`; infinite on width mismatch.
    pub fn max_deviation(&self, other: &Spectrum) -> f64 {
        if self.width != other.width {
            return f64::INFINITY;
        }
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// CSV with header `z,amplitude,probability`, one row per `z`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("z,amplitude,probability\n");
        for (z, &a) in self.amplitudes.iter().enumerate() {
            let _ = writeln!(out, "{z},{},{}", g17(a), g17(a * a));
        }
        out
    }
}

fn signs(f: &TruthTable) -> Vec<f64> {
    f.bits()
        .iter()
        .map(|&b| if b { -1.0 } else { 1.0 })
        .collect()
}

fn scale(n: u32) -> f64 {
    // exact power of two
    (-(n as i32) as f64).exp2()
}

/// Reference engine: the double sum over `x` for every `z`.
pub fn amplitudes_direct(f: &TruthTable) -> Result<Spectrum, SimError> {
    let n = f.width();
    if n > DIRECT_MAX_WIDTH {
        return Err(SimError::WidthTooLarge {
            engine: "direct",
            width: n,
            max: DIRECT_MAX_WIDTH,
        });
    }
    let size = 1u32 << n;
    let norm = scale(n);
    let amplitudes = (0..size)
        .map(|z| {
            let sum: f64 = (0..size)
                .map(|x| if f.get(x) ^ dot(x, z) { -1.0 } else { 1.0 })
                .sum();
            sum * norm
        })
        .collect();
    Spectrum::new(n, amplitudes)
}

/// In-place unnormalized Walsh-Hadamard transform; `data.len()` must be a
/// power of two.
pub fn fwht_in_place(data: &mut [f64]) {
    let len = data.len();
    debug_assert!(len.is_power_of_two());
    let mut half = 1;
    while half < len {
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        half *= 2;
    }
}

/// Butterfly engine: Walsh-Hadamard transform of `(-1)^f(x)`, scaled by `2^-n`.
pub fn amplitudes_fwht(f: &TruthTable) -> Result<Spectrum, SimError> {
    let n = f.width();
    let mut data = signs(f);
    fwht_in_place(&mut data);
    let norm = scale(n);
    data.iter_mut().for_each(|v| *v *= norm);
    Spectrum::new(n, data)
}

/// Real statevector over `n_total` qubits. Basis bit 0 is the answer qubit;
/// query bit `x_j` is basis bit `j + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubits: u32,
    amps: Vec<f64>,
}

impl StateVector {
    /// Computational basis state `|index>`.
    pub fn basis(qubits: u32, index: usize) -> Self {
        let mut amps = vec![0.0; 1 << qubits];
        amps[index] = 1.0;
        Self { qubits, amps }
    }

    pub fn qubits(&self) -> u32 {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum()
    }

    pub fn hadamard(&mut self, qubit: u32) {
        assert!(qubit < self.qubits, "qubit {qubit} out of range");
        let stride = 1usize << qubit;
        for block in self.amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = (x + y) * FRAC_1_SQRT_2;
                *b = (x - y) * FRAC_1_SQRT_2;
            }
        }
    }

    /// `U_f : |x>|y> -> |x>|y XOR f(x)>`, a permutation of basis states.
    pub fn apply_oracle(&mut self, f: &TruthTable) {
        assert_eq!(f.width() + 1, self.qubits, "oracle width mismatch");
        for (pair, &fx) in self.amps.chunks_exact_mut(2).zip(f.bits()) {
            if fx {
                pair.swap(0, 1);
            }
        }
    }

    /// Splits the state as `psi_out ⊗ (|0> - |1>)/sqrt2` and returns
    /// `psi_out` with the largest residual `|state[x,0] + state[x,1]|`.
    fn split_answer_qubit(&self) -> (Vec<f64>, f64) {
        let mut residual = 0.0f64;
        let top = self
            .amps
            .chunks_exact(2)
            .map(|pair| {
                residual = residual.max((pair[0] + pair[1]).abs());
                (pair[0] - pair[1]) * FRAC_1_SQRT_2
            })
            .collect();
        (top, residual)
    }
}

/// Structural checks of a statevector run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnswerQubitReport {
    /// Largest `|state[x,0] + state[x,1]|` after the oracle.
    pub step2_residual: f64,
    /// Largest deviation of the query register from `(-1)^f(x) / sqrt(2^n)`
    /// after the oracle (phase kickback).
    pub kickback_deviation: f64,
    /// Largest `|state[x,0] + state[x,1]|` after the final Hadamards.
    pub step3_residual: f64,
    /// Answer qubit amplitudes `(<0|, <1|)` projected against `psi_out`;
    /// `(1/sqrt2, -1/sqrt2)` when the circuit is correct.
    pub answer_qubit: [f64; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatevectorRun {
    pub spectrum: Spectrum,
    pub report: AnswerQubitReport,
    /// Final `(n+1)`-qubit state.
    pub state: StateVector,
}

fn check_norm(state: &StateVector, step: u8) -> Result<(), SimError> {
    let norm_sqr = state.norm_sqr();
    if (norm_sqr - 1.0).abs() > ENGINE_TOLERANCE {
        return Err(SimError::NormDrift { step, norm_sqr });
    }
    Ok(())
}

/// Executes the circuit on `|0...0>|1>`: `H` on all `n+1` qubits, `U_f`,
/// then `H` on the query register only.
pub fn statevector_run(f: &TruthTable) -> Result<StatevectorRun, SimError> {
    let n = f.width();
    if n > STATEVECTOR_MAX_WIDTH {
        return Err(SimError::WidthTooLarge {
            engine: "statevector",
            width: n,
            max: STATEVECTOR_MAX_WIDTH,
        });
    }
    let mut state = StateVector::basis(n + 1, 1);

    for q in 0..=n {
        state.hadamard(q);
    }
    check_norm(&state, 1)?;

    state.apply_oracle(f);
    check_norm(&state, 2)?;
    let (kicked, step2_residual) = state.split_answer_qubit();
    let expected_mag = scale(n).sqrt();
    let kickback_deviation = kicked
        .iter()
        .zip(f.bits())
        .map(|(&a, &fx)| (a - if fx { -expected_mag } else { expected_mag }).abs())
        .fold(0.0, f64::max);
    let worst = step2_residual.max(kickback_deviation);
    if worst > ENGINE_TOLERANCE {
        return Err(SimError::Factorization {
            step: 2,
            residual: worst,
        });
    }

    for q in 1..=n {
        state.hadamard(q);
    }
    check_norm(&state, 3)?;
    let (psi, step3_residual) = state.split_answer_qubit();
    if step3_residual > ENGINE_TOLERANCE {
        return Err(SimError::Factorization {
            step: 3,
            residual: step3_residual,
        });
    }

    let mut answer_qubit = [0.0; 2];
    for (pair, &p) in state.amps.chunks_exact(2).zip(&psi) {
        answer_qubit[0] += p * pair[0];
        answer_qubit[1] += p * pair[1];
    }

    Ok(StatevectorRun {
        spectrum: Spectrum::new(n, psi)?,
        report: AnswerQubitReport {
            step2_residual,
            kickback_deviation,
            step3_residual,
            answer_qubit,
        },
        state,
    })
}

/// Draws `shots` outcomes from `|psi(z)|^2` by inverse-CDF sampling over
/// ascending `z`.
pub fn sample_outcomes(
    spectrum: &Spectrum,
    shots: u64,
    seed: u64,
) -> Result<BTreeMap<u32, u64>, SimError> {
    if shots == 0 {
        return Err(SimError::NoShots);
    }
    let mut cdf = Vec::with_capacity(spectrum.amplitudes.len());
    let mut total = 0.0;
    for p in spectrum.probabilities() {
        total += p;
        cdf.push(total);
    }
    if (total - 1.0).abs() > SAMPLING_NORM_TOLERANCE {
        return Err(SimError::Unnormalized { total });
    }
    let last_bright = spectrum
        .amplitudes
        .iter()
        .rposition(|&a| a != 0.0)
        .expect("normalized spectrum has a nonzero line");

    let mut rng = SplitMix64::new(seed);
    let mut histogram = BTreeMap::new();
    for _ in 0..shots {
        let u = rng.next_f64() * total;
        // first z whose cumulative probability exceeds u; zero-probability
        // entries never qualify
        let z = cdf.partition_point(|&c| c <= u).min(last_bright);
        *histogram.entry(z as u32).or_insert(0) += 1;
    }
    Ok(histogram)
}
