//! Bit strings, fixed-width fields and Elias-gamma codes.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("gamma code is undefined for 0")]
    ZeroGamma,
    #[error("bit string ends inside a field")]
    Truncated,
    #[error("gamma code longer than 64 bits")]
    GammaOverflow,
    #[error("{0} unconsumed bits after the certificate")]
    TrailingBits(usize),
    #[error("invalid hex bit string: {0}")]
    BadHex(String),
    #[error("invalid field value: {0}")]
    InvalidValue(&'static str),
}

/// An owned sequence of bits, most significant first within each field.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    /// Appends `value` on exactly `width` bits.
    ///
    /// Panics if `value` does not fit.
    pub fn push_uint(&mut self, value: u64, width: u32) {
        assert!(width >= 64 || value >> width == 0, "{value} does not fit in {width} bits");
        for i in (0..width).rev() {
            self.bits.push(i < 64 && (value >> i) & 1 == 1);
        }
    }

    /// Appends the gamma code of `k >= 1`.
    pub fn push_gamma(&mut self, k: u64) -> Result<(), CodecError> {
        if k == 0 {
            return Err(CodecError::ZeroGamma);
        }
        let width = 64 - k.leading_zeros();
        self.bits.extend(std::iter::repeat_n(false, width as usize - 1));
        self.push_uint(k, width);
        Ok(())
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn reader(&self) -> BitReader<'_> {
        BitReader { bits: &self.bits, pos: 0 }
    }

    /// Hex rendering, four bits per digit, zero-padded at the end. The empty string renders as `0`.
    pub fn to_hex(&self) -> String {
        if self.bits.is_empty() {
            return "0".into();
        }
        self.bits
            .chunks(4)
            .map(|c| {
                let nibble = c.iter().enumerate().fold(0u32, |acc, (i, &b)| acc | (u32::from(b) << (3 - i)));
                char::from_digit(nibble, 16).unwrap()
            })
            .collect()
    }

    /// Inverse of [`BitString::to_hex`] given the exact bit length.
    pub fn from_hex(hex: &str, len: usize) -> Result<Self, CodecError> {
        let digits = len.div_ceil(4).max(1);
        if hex.len() != digits {
            return Err(CodecError::BadHex(format!("{} digits for {len} bits", hex.len())));
        }
        let mut bits = Vec::with_capacity(digits * 4);
        for ch in hex.chars() {
            let nibble = ch.to_digit(16).ok_or_else(|| CodecError::BadHex(format!("non-hex digit {ch:?}")))?;
            bits.extend((0..4).rev().map(|i| (nibble >> i) & 1 == 1));
        }
        if bits[len..].iter().any(|&b| b) {
            return Err(CodecError::BadHex("non-zero padding".into()));
        }
        bits.truncate(len);
        Ok(BitString { bits })
    }
}

impl From<Vec<bool>> for BitString {
    fn from(bits: Vec<bool>) -> Self {
        BitString { bits }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(\"{self}\")")
    }
}

impl FromStr for BitString {
    type Err = CodecError;

    /// Parses a string of `0`/`1` characters.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(CodecError::InvalidValue("binary digit")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString::from)
    }
}

/// Sequential reader over a bit slice.
#[derive(Clone, Debug)]
pub struct BitReader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bits: &'a [bool]) -> Self {
        BitReader { bits, pos: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    pub fn read_bit(&mut self) -> Result<bool, CodecError> {
        let b = *self.bits.get(self.pos).ok_or(CodecError::Truncated)?;
        self.pos += 1;
        Ok(b)
    }

    pub fn read_uint(&mut self, width: u32) -> Result<u64, CodecError> {
        if self.remaining() < width as usize {
            return Err(CodecError::Truncated);
        }
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | u64::from(self.read_bit()?);
        }
        Ok(v)
    }

    pub fn read_gamma(&mut self) -> Result<u64, CodecError> {
        let mut zeros = 0u32;
        while !self.read_bit()? {
            zeros += 1;
            if zeros > 63 {
                return Err(CodecError::GammaOverflow);
            }
        }
        let rest = self.read_uint(zeros)?;
        Ok((1u64 << zeros) | rest)
    }

    /// Succeeds only if every bit was consumed.
    pub fn finish(self) -> Result<(), CodecError> {
        match self.remaining() {
            0 => Ok(()),
            r => Err(CodecError::TrailingBits(r)),
        }
    }

    pub fn rest(&self) -> BitString {
        BitString::from(self.bits[self.pos..].to_vec())
    }
}

pub fn gamma_encode(k: u64) -> Result<BitString, CodecError> {
    let mut b = BitString::new();
    b.push_gamma(k)?;
    Ok(b)
}

/// Decodes one gamma code from the front of `bits` and returns the unconsumed suffix.
pub fn gamma_decode(bits: &BitString) -> Result<(u64, BitString), CodecError> {
    let mut r = bits.reader();
    let k = r.read_gamma()?;
    Ok((k, r.rest()))
}

/// Length of the gamma code of `k >= 1`.
pub fn gamma_len(k: u64) -> usize {
    debug_assert!(k > 0);
    2 * (63 - k.leading_zeros() as usize) + 1
}

/// Bits needed to write any value in `0..=max`, i.e. `ceil(log2(max + 1))`.
pub fn width_for(max: u64) -> u32 {
    64 - max.leading_zeros()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_encode(1).unwrap(), bits("1"));
        assert_eq!(gamma_encode(2).unwrap(), bits("010"));
        assert_eq!(gamma_encode(4).unwrap(), bits("00100"));
        assert_eq!(gamma_encode(0), Err(CodecError::ZeroGamma));
    }

    #[test]
    fn gamma_decode_examples() {
        assert_eq!(gamma_decode(&bits("1")), Ok((1, bits(""))));
        assert_eq!(gamma_decode(&bits("010011")), Ok((2, bits("011"))));
        assert_eq!(gamma_decode(&bits("00")), Err(CodecError::Truncated));
        assert_eq!(gamma_decode(&bits("")), Err(CodecError::Truncated));
        assert_eq!(gamma_decode(&bits("0010")), Err(CodecError::Truncated));
    }

    #[test]
    fn gamma_extremes() {
        let big = gamma_encode(u64::MAX).unwrap();
        assert_eq!(big.len(), 127);
        assert_eq!(gamma_decode(&big).unwrap().0, u64::MAX);
        let too_long: BitString = BitString::from(vec![false; 64]);
        assert_eq!(gamma_decode(&too_long), Err(CodecError::GammaOverflow));
    }

    #[test]
    fn widths() {
        assert_eq!(width_for(0), 0);
        assert_eq!(width_for(1), 1);
        assert_eq!(width_for(255), 8);
        assert_eq!(width_for(256), 9);
        assert_eq!(width_for(1 << 32), 33);
    }

    #[test]
    fn hex_rendering() {
        assert_eq!(bits("").to_hex(), "0");
        assert_eq!(bits("1").to_hex(), "8");
        assert_eq!(bits("00000001011").to_hex(), "016");
        assert_eq!(BitString::from_hex("016", 11), Ok(bits("00000001011")));
        assert_eq!(BitString::from_hex("0", 0), Ok(bits("")));
        assert!(BitString::from_hex("017", 11).is_err());
        assert!(BitString::from_hex("16", 11).is_err());
        assert!(BitString::from_hex("0g6", 11).is_err());
    }

    #[test]
    fn reader_finish_reports_trailing() {
        let b = bits("1011");
        let mut r = b.reader();
        assert_eq!(r.read_uint(2), Ok(0b10));
        assert_eq!(r.clone().finish(), Err(CodecError::TrailingBits(2)));
        assert_eq!(r.read_uint(3), Err(CodecError::Truncated));
    }

    proptest! {
        #[test]
        fn gamma_round_trip(k in 1u64.., tail in proptest::collection::vec(any::<bool>(), 0..16)) {
            let mut b = gamma_encode(k).unwrap();
            prop_assert_eq!(b.len(), gamma_len(k));
            let tail = BitString::from(tail);
            b.extend_from(&tail);
            prop_assert_eq!(gamma_decode(&b).unwrap(), (k, tail));
        }

        #[test]
        fn hex_round_trip(v in proptest::collection::vec(any::<bool>(), 0..200)) {
            let b = BitString::from(v);
            prop_assert_eq!(BitString::from_hex(&b.to_hex(), b.len()).unwrap(), b);
        }

        #[test]
        fn uint_round_trip(v in any::<u64>(), extra in 0u32..8) {
            let w = (width_for(v) + extra).min(64);
            let mut b = BitString::new();
            b.push_uint(v, w);
            prop_assert_eq!(b.len(), w as usize);
            prop_assert_eq!(b.reader().read_uint(w).unwrap(), v);
        }
    }
}
