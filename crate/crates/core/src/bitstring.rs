//! Fixed-width bit strings and the boolean inner product.
//!
//! A [`BitString`] of width `n` is identified with its numeric meaning
//! `x = sum_j x_j 2^j`; bit address 0 is the least significant bit.

use std::fmt;

use thiserror::Error;

/// Largest supported bit width. Every engine is at least `O(2^n)` in memory.
pub const MAX_WIDTH: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitError {
    #[error("bit width {0} outside supported range 1..={MAX_WIDTH}")]
    WidthOutOfRange(usize),
    #[error("value {value} does not fit in {width} bits")]
    ValueOutOfRange { value: u64, width: u32 },
    #[error("bit address {address} out of range for width {width}")]
    AddressOutOfRange { address: u32, width: u32 },
    #[error("width mismatch: {left} vs {right}")]
    WidthMismatch { left: u32, right: u32 },
}

/// Validates a bit width against `1..=MAX_WIDTH`.
pub fn check_width(n: u32) -> Result<(), BitError> {
    if n == 0 || n > MAX_WIDTH {
        return Err(BitError::WidthOutOfRange(n as usize));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    width: u32,
    value: u32,
}

impl BitString {
    pub fn new(width: u32, value: u64) -> Result<Self, BitError> {
        check_width(width)?;
        if value >> width != 0 {
            return Err(BitError::ValueOutOfRange { value, width });
        }
        Ok(Self {
            width,
            value: value as u32,
        })
    }

    pub fn zero(width: u32) -> Result<Self, BitError> {
        Self::new(width, 0)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    /// Size of the domain `N = 2^n`.
    pub fn domain_size(&self) -> usize {
        1usize << self.width
    }

    /// Bits in address order, position 0 first.
    pub fn bits(&self) -> Vec<bool> {
        (0..self.width).map(|j| self.value >> j & 1 == 1).collect()
    }

    pub fn count_ones(&self) -> u32 {
        self.value.count_ones()
    }
}

impl fmt::Display for BitString {
    /// Conventional written order `x_{n-1} ... x_1 x_0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.value, width = self.width as usize)
    }
}

/// Numeric meaning of a bit sequence given position 0 first.
pub fn bitstrval(bits: &[bool]) -> Result<u32, BitError> {
    if bits.is_empty() || bits.len() > MAX_WIDTH as usize {
        return Err(BitError::WidthOutOfRange(bits.len()));
    }
    Ok(bits
        .iter()
        .enumerate()
        .fold(0u32, |acc, (j, &b)| acc | (b as u32) << j))
}

/// Inverse of [`bitstrval`]: the `n`-bit string whose numeric meaning is `x`.
pub fn bstr(n: u32, x: u64) -> Result<BitString, BitError> {
    BitString::new(n, x)
}

pub fn bitget(j: u32, x: &BitString) -> Result<bool, BitError> {
    check_address(j, x.width)?;
    Ok(x.value >> j & 1 == 1)
}

/// Copy of `x` with bit `j` set to `b`.
pub fn bitput(j: u32, x: &BitString, b: bool) -> Result<BitString, BitError> {
    check_address(j, x.width)?;
    let value = (x.value & !(1 << j)) | (b as u32) << j;
    Ok(BitString {
        width: x.width,
        value,
    })
}

/// Boolean inner product `x . z = sum_j x_j z_j mod 2`.
pub fn bool_dot(x: &BitString, z: &BitString) -> Result<bool, BitError> {
    if x.width != z.width {
        return Err(BitError::WidthMismatch {
            left: x.width,
            right: z.width,
        });
    }
    Ok(dot(x.value, z.value))
}

/// Parity of the bitwise AND of two raw values.
#[inline]
pub fn dot(x: u32, z: u32) -> bool {
    (x & z).count_ones() & 1 == 1
}

fn check_address(j: u32, width: u32) -> Result<(), BitError> {
    if j >= width {
        return Err(BitError::AddressOutOfRange { address: j, width });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reg(bits: [u8; 4]) -> BitString {
        let bits: Vec<bool> = bits.iter().map(|&b| b == 1).collect();
        bstr(4, bitstrval(&bits).unwrap() as u64).unwrap()
    }

    // Mod-2 sum of products, written out as in the definition.
    fn dot_by_sum(x: u32, z: u32, n: u32) -> bool {
        (0..n).map(|j| (x >> j & 1) * (z >> j & 1)).sum::<u32>() % 2 == 1
    }

    #[test]
    fn register_example() {
        let x = reg([1, 0, 1, 1]);
        assert_eq!(x.value(), 13);
        assert!(bitget(0, &x).unwrap());
        assert!(!bitget(1, &x).unwrap());
        let y = bitput(1, &x, true).unwrap();
        assert_eq!(y.bits(), vec![true; 4]);
        // value semantics
        assert_eq!(x.value(), 13);
    }

    #[test]
    fn bitstrval_examples() {
        assert_eq!(bitstrval(&[true, false, true, true]).unwrap(), 13);
        assert_eq!(bitstrval(&[false; 4]).unwrap(), 0);
        assert_eq!(bitstrval(&[true; 4]).unwrap(), 15);
        assert_eq!(bitstrval(&[]), Err(BitError::WidthOutOfRange(0)));
        assert_eq!(bitstrval(&[false; 25]), Err(BitError::WidthOutOfRange(25)));
    }

    #[test]
    fn bstr_examples() {
        assert_eq!(bstr(4, 13).unwrap().bits(), vec![true, false, true, true]);
        assert_eq!(bstr(4, 0).unwrap().bits(), vec![false; 4]);
        assert_eq!(
            bstr(6, 30).unwrap().bits(),
            vec![false, true, true, true, true, false]
        );
        assert_eq!(bstr(6, 30).unwrap().to_string(), "011110");
        assert!(matches!(bstr(4, 16), Err(BitError::ValueOutOfRange { .. })));
        assert!(matches!(bstr(0, 0), Err(BitError::WidthOutOfRange(0))));
        assert!(matches!(bstr(25, 0), Err(BitError::WidthOutOfRange(25))));
    }

    #[test]
    fn bit_access_examples() {
        assert!(bitget(3, &bstr(4, 8).unwrap()).unwrap());
        let x = reg([1, 0, 1, 1]);
        assert_eq!(bitput(0, &x, true).unwrap(), x);
        assert_eq!(bitput(3, &bstr(4, 15).unwrap(), false).unwrap().value(), 7);
        assert!(matches!(
            bitget(4, &x),
            Err(BitError::AddressOutOfRange {
                address: 4,
                width: 4
            })
        ));
        assert!(bitput(4, &x, true).is_err());
    }

    #[test]
    fn bool_dot_examples() {
        let d = |n, x, z| bool_dot(&bstr(n, x).unwrap(), &bstr(n, z).unwrap()).unwrap();
        assert!(d(3, 5, 3));
        assert!(!d(2, 3, 3));
        for x in 0..16 {
            assert!(!d(4, x, 0));
        }
        assert!(matches!(
            bool_dot(&bstr(2, 1).unwrap(), &bstr(3, 1).unwrap()),
            Err(BitError::WidthMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn round_trip_exhaustive() {
        for n in 1..=12u32 {
            for x in 0..1u64 << n {
                let b = bstr(n, x).unwrap();
                assert_eq!(bitstrval(&b.bits()).unwrap() as u64, x);
            }
        }
    }

    #[test]
    fn dot_symmetry_and_linearity_exhaustive() {
        for n in 1..=8u32 {
            let size = 1u32 << n;
            for x in 0..size {
                for z in 0..size {
                    assert_eq!(dot(x, z), dot(z, x));
                    assert_eq!(dot(x, z), dot_by_sum(x, z, n));
                }
            }
        }
        // linearity in the second argument
        for n in 1..=8u32 {
            let size = 1u32 << n;
            for x in 0..size {
                for z1 in 0..size {
                    for z2 in 0..size {
                        assert_eq!(dot(x, z1 ^ z2), dot(x, z1) ^ dot(x, z2));
                    }
                }
            }
        }
    }

    #[test]
    fn put_then_get_exhaustive() {
        for n in 1..=8u32 {
            for x in 0..1u64 << n {
                let s = bstr(n, x).unwrap();
                for j in 0..n {
                    for b in [false, true] {
                        let t = bitput(j, &s, b).unwrap();
                        assert_eq!(bitget(j, &t).unwrap(), b);
                        // other bits untouched
                        assert_eq!(t.value() & !(1 << j), s.value() & !(1 << j));
                    }
                }
            }
        }
    }
}
