//! Indicator functions (truth tables) of the language classes the decider
//! handles, and their set-algebra combinations.

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::bitstring::{check_width, dot, BitError, BitString};
use crate::rng::{shuffle, SplitMix64};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Bit(#[from] BitError),
    #[error("malformed header {0:?}: expected `n=<decimal>`")]
    MalformedHeader(String),
    #[error("wrong bit count: expected {expected}, found {found}")]
    WrongBitCount { expected: usize, found: usize },
    #[error("invalid character {ch:?} at position {position} of the bit line")]
    InvalidCharacter { ch: char, position: usize },
    #[error("unexpected content after the bit line")]
    TrailingContent,
    #[error("{op} needs {expected} operand(s)")]
    OperandCount { op: CombineOp, expected: usize },
    #[error("table in {path} has width {found}, expected {expected}")]
    FileWidth {
        path: PathBuf,
        expected: u32,
        found: u32,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Explicit indicator function over `{0,1}^n`: entry `x` holds `f(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    width: u32,
    bits: Vec<bool>,
}

impl TruthTable {
    pub fn new(width: u32, bits: Vec<bool>) -> Result<Self, OracleError> {
        check_width(width)?;
        let expected = 1usize << width;
        if bits.len() != expected {
            return Err(OracleError::WrongBitCount {
                expected,
                found: bits.len(),
            });
        }
        Ok(Self { width, bits })
    }

    /// Table of `f` sampled at every `x` in ascending order.
    pub fn from_fn(width: u32, f: impl FnMut(u32) -> bool) -> Result<Self, OracleError> {
        check_width(width)?;
        let bits = (0..1u32 << width).map(f).collect();
        Ok(Self { width, bits })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Number of entries, `2^n`.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, x: u32) -> bool {
        self.bits[x as usize]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn ones_count(&self) -> u64 {
        self.bits.iter().filter(|&&b| b).count() as u64
    }

    /// Constant value, if the table is constant.
    pub fn constant_value(&self) -> Option<bool> {
        let first = self.bits[0];
        self.bits.iter().all(|&b| b == first).then_some(first)
    }

    pub fn is_balanced(&self) -> bool {
        self.ones_count() == (self.len() / 2) as u64
    }

    /// The language layer `L_n = { x : f(x) = 1 }`, ascending.
    pub fn members(&self) -> impl Iterator<Item = u32> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(x, _)| x as u32)
    }

    /// Canonical text form: `n=<width>\n<bits>\n`.
    pub fn to_text(&self) -> String {
        let mut s = format!("n={}\n", self.width);
        s.reserve(self.bits.len() + 1);
        s.extend(self.bits.iter().map(|&b| if b { '1' } else { '0' }));
        s.push('\n');
        s
    }

    /// Parses the text form. A missing final newline is tolerated; any other
    /// whitespace is an error.
    pub fn from_text(text: &str) -> Result<Self, OracleError> {
        let (header, rest) = text
            .split_once('\n')
            .ok_or_else(|| OracleError::MalformedHeader(text.chars().take(32).collect()))?;
        let width = header
            .strip_prefix("n=")
            .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|d| d.parse::<u32>().ok())
            .filter(|&n| check_width(n).is_ok())
            .ok_or_else(|| OracleError::MalformedHeader(header.to_string()))?;

        let line = match rest.split_once('\n') {
            Some((line, "")) => line,
            Some(_) => return Err(OracleError::TrailingContent),
            None => rest,
        };
        let mut bits = Vec::with_capacity(line.len());
        for (position, ch) in line.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(OracleError::InvalidCharacter { ch, position }),
            }
        }
        Self::new(width, bits)
    }
}

pub fn make_constant(n: u32, c: bool) -> Result<TruthTable, OracleError> {
    TruthTable::from_fn(n, |_| c)
}

/// Binary periodic table `f(x) = c XOR x_m`, period `2^(m+1)`.
///
/// `c` is the XOR constant, not the member bit: the language "strings whose
/// bit `m` equals `b`" is `c = 1 XOR b` (so `m = 0, c = 1` gives the even
/// numbers).
pub fn make_binary_periodic(n: u32, m: u32, c: bool) -> Result<TruthTable, OracleError> {
    check_width(n)?;
    if m >= n {
        return Err(BitError::AddressOutOfRange {
            address: m,
            width: n,
        }
        .into());
    }
    TruthTable::from_fn(n, |x| c ^ (x >> m & 1 == 1))
}

/// Affine table `f(x) = k . x XOR c`.
pub fn make_monochromatic(n: u32, k: &BitString, c: bool) -> Result<TruthTable, OracleError> {
    if k.width() != n {
        return Err(BitError::WidthMismatch {
            left: n,
            right: k.width(),
        }
        .into());
    }
    let k = k.value();
    TruthTable::from_fn(n, |x| dot(k, x) ^ c)
}

/// Seeded balanced table: shuffles `[0, 2^n)` and marks the first half as
/// members.
pub fn make_random_balanced(n: u32, seed: u64) -> Result<TruthTable, OracleError> {
    check_width(n)?;
    let size = 1usize << n;
    let mut order: Vec<u32> = (0..size as u32).collect();
    shuffle(&mut order, &mut SplitMix64::new(seed));
    let mut bits = vec![false; size];
    for &x in &order[..size / 2] {
        bits[x as usize] = true;
    }
    TruthTable::new(n, bits)
}

/// Layer `L_n` of the perfect-squares language: all ones when `n` is a
/// perfect square, all zeros otherwise.
pub fn perfect_square_layer(n: u32) -> Result<TruthTable, OracleError> {
    make_constant(n, is_perfect_square(n))
}

fn is_perfect_square(n: u32) -> bool {
    (0..=n).take_while(|r| r * r <= n).any(|r| r * r == n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CombineOp {
    /// Intersection.
    And,
    /// Union.
    Or,
    /// Symmetric difference.
    Xor,
    /// Complement.
    Not,
}

impl CombineOp {
    pub fn arity(self) -> usize {
        match self {
            CombineOp::Not => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for CombineOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CombineOp::And => "and",
            CombineOp::Or => "or",
            CombineOp::Xor => "xor",
            CombineOp::Not => "not",
        })
    }
}

/// Pointwise combination of indicator functions.
pub fn combine(
    op: CombineOp,
    a: &TruthTable,
    b: Option<&TruthTable>,
) -> Result<TruthTable, OracleError> {
    let b = match (op, b) {
        (CombineOp::Not, None) => {
            let bits = a.bits.iter().map(|&x| !x).collect();
            return TruthTable::new(a.width, bits);
        }
        (CombineOp::Not, Some(_)) | (_, None) => {
            return Err(OracleError::OperandCount {
                op,
                expected: op.arity(),
            })
        }
        (_, Some(b)) => b,
    };
    if a.width != b.width {
        return Err(BitError::WidthMismatch {
            left: a.width,
            right: b.width,
        }
        .into());
    }
    let f: fn(bool, bool) -> bool = match op {
        CombineOp::And => |x, y| x & y,
        CombineOp::Or => |x, y| x | y,
        CombineOp::Xor => |x, y| x ^ y,
        CombineOp::Not => unreachable!(),
    };
    let bits = a.bits.iter().zip(&b.bits).map(|(&x, &y)| f(x, y)).collect();
    TruthTable::new(a.width, bits)
}

pub fn load_truth_table(path: impl AsRef<Path>) -> Result<TruthTable, OracleError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| OracleError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    TruthTable::from_text(&text)
}

pub fn save_truth_table(table: &TruthTable, path: impl AsRef<Path>) -> Result<(), OracleError> {
    let path = path.as_ref();
    std::fs::write(path, table.to_text()).map_err(|source| OracleError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Symbolic recipe for a truth table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSpec {
    width: u32,
    kind: OracleKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleKind {
    Constant {
        c: bool,
    },
    BinaryPeriodic {
        m: u32,
        c: bool,
    },
    Monochromatic {
        k: u32,
        c: bool,
    },
    RandomBalanced {
        seed: u64,
    },
    FromFile(PathBuf),
    Combine {
        op: CombineOp,
        left: Box<OracleSpec>,
        right: Option<Box<OracleSpec>>,
    },
    PerfectSquareLayer,
}

impl OracleSpec {
    pub fn new(width: u32, kind: OracleKind) -> Result<Self, OracleError> {
        check_width(width)?;
        match &kind {
            OracleKind::BinaryPeriodic { m, .. } if *m >= width => {
                return Err(BitError::AddressOutOfRange { address: *m, width }.into())
            }
            OracleKind::Monochromatic { k, .. } => {
                BitString::new(width, *k as u64)?;
            }
            OracleKind::Combine { op, left, right } => {
                if right.is_some() as usize + 1 != op.arity() {
                    return Err(OracleError::OperandCount {
                        op: *op,
                        expected: op.arity(),
                    });
                }
                for operand in std::iter::once(left).chain(right) {
                    if operand.width != width {
                        return Err(BitError::WidthMismatch {
                            left: width,
                            right: operand.width,
                        }
                        .into());
                    }
                }
            }
            _ => {}
        }
        Ok(Self { width, kind })
    }

    /// Spec for a table file; the width is read from the file.
    pub fn from_file(path: impl Into<PathBuf>) -> Result<Self, OracleError> {
        let path = path.into();
        let width = load_truth_table(&path)?.width();
        Ok(Self {
            width,
            kind: OracleKind::FromFile(path),
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn kind(&self) -> &OracleKind {
        &self.kind
    }

    /// Period `T = 2^(m+1)` of a binary periodic spec.
    pub fn period(&self) -> Option<u64> {
        match self.kind {
            OracleKind::BinaryPeriodic { m, .. } => Some(1u64 << (m + 1)),
            _ => None,
        }
    }

    pub fn build(&self) -> Result<TruthTable, OracleError> {
        let n = self.width;
        match &self.kind {
            OracleKind::Constant { c } => make_constant(n, *c),
            OracleKind::BinaryPeriodic { m, c } => make_binary_periodic(n, *m, *c),
            OracleKind::Monochromatic { k, c } => {
                make_monochromatic(n, &BitString::new(n, *k as u64)?, *c)
            }
            OracleKind::RandomBalanced { seed } => make_random_balanced(n, *seed),
            OracleKind::FromFile(path) => {
                let table = load_truth_table(path)?;
                if table.width() != n {
                    return Err(OracleError::FileWidth {
                        path: path.clone(),
                        expected: n,
                        found: table.width(),
                    });
                }
                Ok(table)
            }
            OracleKind::Combine { op, left, right } => {
                let a = left.build()?;
                let b = right.as_ref().map(|r| r.build()).transpose()?;
                combine(*op, &a, b.as_ref())
            }
            OracleKind::PerfectSquareLayer => perfect_square_layer(n),
        }
    }

    /// One-line description used in report headers.
    pub fn describe(&self) -> String {
        let bit = |b: bool| b as u8;
        match &self.kind {
            OracleKind::Constant { c } => format!("constant c={}", bit(*c)),
            OracleKind::BinaryPeriodic { m, c } => {
                format!("periodic m={m} c={} T={}", bit(*c), 1u64 << (m + 1))
            }
            OracleKind::Monochromatic { k, c } => format!("mono k={k} c={}", bit(*c)),
            OracleKind::RandomBalanced { seed } => format!("random-balanced seed={seed}"),
            OracleKind::FromFile(path) => format!("file {}", path.display()),
            OracleKind::Combine { op, left, right } => match right {
                Some(r) => format!("{op}({}; {})", left.describe(), r.describe()),
                None => format!("{op}({})", left.describe()),
            },
            OracleKind::PerfectSquareLayer => "perfect-square-layer".to_string(),
        }
    }
}
