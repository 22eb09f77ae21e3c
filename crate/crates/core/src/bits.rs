//! Bit strings: the universal currency for instances, witnesses and encodings.
//!
//! Numbers are written most-significant bit first. The canonical form of a
//! number has no leading zeros and zero is the empty string.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BitsError {
    #[error("invalid bit character {0:?}")]
    BadChar(char),
    #[error("malformed hex bit string {0:?}")]
    BadHex(String),
}

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new() -> Self {
        BitString(Vec::new())
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    pub fn zeros(len: usize) -> Self {
        BitString(vec![false; len])
    }

    pub fn ones(len: usize) -> Self {
        BitString(vec![true; len])
    }

    /// Canonical binary numeral of `n`: no leading zeros, `0` is empty.
    pub fn from_num(n: u64) -> Self {
        let width = 64 - n.leading_zeros() as usize;
        Self::from_num_width(n, width)
    }

    /// `n` written in exactly `width` bits (high bits dropped if too narrow).
    pub fn from_num_width(n: u64, width: usize) -> Self {
        BitString(
            (0..width)
                .rev()
                .map(|i| i < 64 && (n >> i) & 1 == 1)
                .collect(),
        )
    }

    pub fn from_bytes(bytes: &[u8]) -> Self {
        BitString(
            bytes
                .iter()
                .flat_map(|b| (0..8).rev().map(move |i| (b >> i) & 1 == 1))
                .collect(),
        )
    }

    /// Inverse of [`from_bytes`](Self::from_bytes); `None` unless the length is a multiple of 8.
    pub fn to_bytes(&self) -> Option<Vec<u8>> {
        if self.0.len() % 8 != 0 {
            return None;
        }
        Some(
            self.0
                .chunks(8)
                .map(|c| c.iter().fold(0u8, |acc, &b| (acc << 1) | b as u8))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.0
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.0.get(i).copied()
    }

    pub fn push(&mut self, b: bool) {
        self.0.push(b);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut out = self.clone();
        out.extend_from(other);
        out
    }

    pub fn slice(&self, start: usize, end: usize) -> BitString {
        BitString(self.0[start..end].to_vec())
    }

    /// Numeric value, ignoring leading zeros. `None` if it does not fit in 64 bits.
    pub fn value(&self) -> Option<u64> {
        let first = self.0.iter().position(|&b| b).unwrap_or(self.0.len());
        if self.0.len() - first > 64 {
            return None;
        }
        Some(self.0[first..].iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }

    /// True when this is the canonical numeral of its value.
    pub fn is_canonical(&self) -> bool {
        self.0.first() != Some(&false)
    }

    /// Strict numeric decoding: canonical numerals only.
    pub fn canonical_value(&self) -> Option<u64> {
        if self.0.first() == Some(&false) {
            return None;
        }
        self.value()
    }

    /// Hex form `<len>:<hex>`, bits packed MSB-first and zero-filled to whole nibbles.
    pub fn to_hex(&self) -> String {
        let mut hex = String::new();
        for chunk in self.0.chunks(4) {
            let mut nib = 0u32;
            for i in 0..4 {
                nib = (nib << 1) | chunk.get(i).copied().unwrap_or(false) as u32;
            }
            hex.push(std::char::from_digit(nib, 16).unwrap());
        }
        format!("{}:{}", self.0.len(), hex)
    }

    pub fn from_hex(s: &str) -> Result<BitString, BitsError> {
        let bad = || BitsError::BadHex(s.to_string());
        let (len, hex) = s.split_once(':').ok_or_else(bad)?;
        let len: usize = len.trim().parse().map_err(|_| bad())?;
        let hex = hex.trim();
        if hex.len() != len.div_ceil(4) {
            return Err(bad());
        }
        let mut bits = Vec::with_capacity(hex.len() * 4);
        for c in hex.chars() {
            let nib = c.to_digit(16).ok_or_else(bad)?;
            bits.extend((0..4).rev().map(|i| (nib >> i) & 1 == 1));
        }
        if bits[len..].iter().any(|&b| b) {
            return Err(bad());
        }
        bits.truncate(len);
        Ok(BitString(bits))
    }

    /// All strings of exactly `len` bits in lexicographic order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = BitString> {
        assert!(len < 64, "length {len} too large to enumerate");
        (0u64..(1u64 << len)).map(move |v| BitString::from_num_width(v, len))
    }

    /// All strings of length at most `max_len`, in length-lexicographic order.
    pub fn all_up_to(max_len: usize) -> impl Iterator<Item = BitString> {
        (0..=max_len).flat_map(BitString::all_of_length)
    }
}

/// Length-lexicographic order: shorter first, then lexicographic.
pub fn length_lex(a: &BitString, b: &BitString) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.0.cmp(&b.0))
}

/// Length-lex order, so ordered collections list shorter strings first.
impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        length_lex(self, other)
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b\"{self}\"")
    }
}

impl FromStr for BitString {
    type Err = BitsError;

    /// Parses `0`/`1` characters; `ε` or the empty string give the empty string.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "ε" {
            return Ok(BitString::new());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(BitsError::BadChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString)
    }
}

impl From<&str> for BitString {
    fn from(s: &str) -> Self {
        s.parse().expect("bit literal")
    }
}

impl Serialize for BitString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        BitString::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numerals() {
        assert_eq!(BitString::from_num(0), BitString::new());
        assert_eq!(BitString::from_num(5).to_string(), "101");
        assert_eq!(BitString::from("0101").value(), Some(5));
        assert_eq!(BitString::from("0101").canonical_value(), None);
        assert_eq!(BitString::from("101").canonical_value(), Some(5));
    }

    #[test]
    fn hex_codec() {
        let b = BitString::from("101");
        assert_eq!(b.to_hex(), "3:a");
        assert_eq!(BitString::from_hex("3:a").unwrap(), b);
        assert_eq!(BitString::from_hex("0:").unwrap(), BitString::new());
        assert!(BitString::from_hex("3:b").is_err());
        assert!(BitString::from_hex("zz").is_err());
        for v in BitString::all_up_to(9) {
            assert_eq!(BitString::from_hex(&v.to_hex()).unwrap(), v);
        }
    }

    #[test]
    fn enumeration_is_length_lex() {
        let all: Vec<_> = BitString::all_up_to(3).collect();
        assert_eq!(all.len(), 15);
        assert!(all.windows(2).all(|w| length_lex(&w[0], &w[1]) == Ordering::Less));
    }

    #[test]
    fn bytes_round_trip() {
        let b = BitString::from_bytes(b"Hi");
        assert_eq!(b.len(), 16);
        assert_eq!(b.to_bytes().unwrap(), b"Hi");
    }
}
