//! Verdicts against the constant/balanced promise, recovery of affine
//! (monochromatic) parameters, dark lines, and exact counting.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::bitstring::BitString;
use crate::fmt::g17;
use crate::oracle::{make_monochromatic, TruthTable};
use crate::simulator::{amplitudes_fwht, Spectrum};

/// Amplitudes below this magnitude count as dark.
pub const DEFAULT_DARK_EPS: f64 = 1e-9;

/// Tolerance on `|psi(z)| = 1` when looking for a single bright line.
const BRIGHT_EPS: f64 = 1e-9;

/// Largest decimal rendering `count_balanced` will produce (1 MiB).
pub const DECIMAL_RENDER_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Constant(bool),
    /// `f(x) = k . x XOR c` with `k != 0`.
    Monochromatic {
        k: BitString,
        c: bool,
    },
    BalancedNonAffine,
    /// Neither constant nor balanced: the promise does not hold.
    Unbalanced,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Constant(c) => write!(f, "Constant({})", *c as u8),
            Verdict::Monochromatic { k, c } => {
                write!(f, "Monochromatic k={} c={}", k.value(), *c as u8)
            }
            Verdict::BalancedNonAffine => f.write_str("BalancedNonAffine"),
            Verdict::Unbalanced => f.write_str("Unbalanced"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub verdict: Verdict,
    pub ones_count: u64,
    /// `(z, probability)` for every line that is not dark, ascending `z`.
    pub lines: Vec<(u32, f64)>,
}

impl Classification {
    /// Stable text report: `verdict=`, `ones_count=`, then one
    /// `line z=<z> p=<p>` per bright line.
    pub fn report(&self) -> String {
        let mut out = format!("verdict={}\nones_count={}\n", self.verdict, self.ones_count);
        for &(z, p) in &self.lines {
            out.push_str(&format!("line z={z} p={}\n", g17(p)));
        }
        out
    }
}

pub fn classify(f: &TruthTable) -> Classification {
    let spectrum = amplitudes_fwht(f).expect("table widths are always supported by the FWHT");
    let ones_count = f.ones_count();
    let size = f.len() as u64;

    let verdict = if ones_count == 0 || ones_count == size {
        Verdict::Constant(ones_count == size)
    } else if 2 * ones_count == size {
        match detect_in_spectrum(f, &spectrum) {
            Some((k, c)) => Verdict::Monochromatic { k, c },
            None => Verdict::BalancedNonAffine,
        }
    } else {
        Verdict::Unbalanced
    };

    let lines = spectrum
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.abs() >= DEFAULT_DARK_EPS)
        .map(|(z, a)| (z as u32, a * a))
        .collect();

    Classification {
        verdict,
        ones_count,
        lines,
    }
}

/// Recovers `(k, c)` with `f(x) = k . x XOR c`, if such a pair exists.
///
/// The candidate comes from the single line with `|psi(k)| = 1`; the sign of
/// that amplitude is `(-1)^c`. The candidate is confirmed by exact table
/// comparison before it is returned.
pub fn detect_monochromatic(f: &TruthTable) -> Option<(BitString, bool)> {
    let spectrum = amplitudes_fwht(f).ok()?;
    detect_in_spectrum(f, &spectrum)
}

fn detect_in_spectrum(f: &TruthTable, spectrum: &Spectrum) -> Option<(BitString, bool)> {
    let n = f.width();
    let (z, &a) = spectrum
        .amplitudes()
        .iter()
        .enumerate()
        .find(|(_, a)| (a.abs() - 1.0).abs() < BRIGHT_EPS)?;
    let k = BitString::new(n, z as u64).ok()?;
    let c = a < 0.0;
    let candidate = make_monochromatic(n, &k, c).ok()?;
    (candidate == *f).then_some((k, c))
}

/// Outcomes with `|psi(z)| < eps`, ascending.
pub fn dark_lines(spectrum: &Spectrum, eps: f64) -> Vec<u32> {
    spectrum
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.abs() < eps)
        .map(|(z, _)| z as u32)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("width {0} outside supported range 1..=64")]
    WidthOutOfRange(u32),
    #[error("count for n = {width} has about {digits} decimal digits, above the cap of {cap}")]
    RenderCap { width: u32, digits: u64, cap: u64 },
}

/// Estimated decimal digit count of `C(2m, m)` (Stirling; error far below
/// one digit for the widths where it matters).
fn central_binomial_digits(m: f64) -> u64 {
    let ln = 2.0 * m * std::f64::consts::LN_2 - 0.5 * (std::f64::consts::PI * m).ln();
    (ln / std::f64::consts::LN_10).floor() as u64 + 1
}

/// Number of balanced indicator functions on `{0,1}^n`:
/// `N! / ((N/2)!)^2 = C(2^n, 2^(n-1))`, computed exactly.
pub fn count_balanced(n: u32) -> Result<BigUint, CountError> {
    if n == 0 || n > 64 {
        return Err(CountError::WidthOutOfRange(n));
    }
    let half = 2f64.powi(n as i32 - 1);
    let digits = central_binomial_digits(half);
    if digits > DECIMAL_RENDER_CAP {
        return Err(CountError::RenderCap {
            width: n,
            digits,
            cap: DECIMAL_RENDER_CAP,
        });
    }
    Ok(central_binomial(1u64 << (n - 1)))
}

/// `C(2m, m)` from its prime factorization: the exponent of `p` is the
/// number of carries when adding `m + m` in base `p` (Kummer).
fn central_binomial(m: u64) -> BigUint {
    let top = 2 * m as usize;
    let mut factors: Vec<BigUint> = Vec::new();
    for p in primes_up_to(top) {
        let p = p as u64;
        let mut exponent = 0u32;
        let mut pk = p;
        loop {
            exponent += ((2 * m / pk) - 2 * (m / pk)) as u32;
            match pk.checked_mul(p) {
                Some(next) if next <= 2 * m => pk = next,
                _ => break,
            }
        }
        if exponent > 0 {
            factors.push(BigUint::from(p).pow(exponent));
        }
    }
    product_tree(factors)
}

fn primes_up_to(limit: usize) -> Vec<usize> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        primes.push(i);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

fn product_tree(mut values: Vec<BigUint>) -> BigUint {
    if values.is_empty() {
        return BigUint::one();
    }
    while values.len() > 1 {
        values = values
            .chunks(2)
            .map(|pair| match pair {
                [a, b] => a * b,
                [a] => a.clone(),
                _ => unreachable!(),
            })
            .collect();
    }
    values.pop().unwrap()
}

/// Monochromatic languages at width `n` with the complement constant held
/// fixed and `k = 0` excluded: `2^n - 1`. Counting both values of `c` gives
/// twice this.
pub fn count_monochromatic(n: u32) -> Result<u64, CountError> {
    if n == 0 || n > 64 {
        return Err(CountError::WidthOutOfRange(n));
    }
    Ok(((1u128 << n) - 1) as u64)
}
