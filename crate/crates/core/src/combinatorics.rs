//! Bit strings, the ordered input set, and parity sets.
//!
//! Strings are stored most-significant-bit first: bit `y = 1` is the
//! leftmost character, so ascending integer order is ascending binary
//! listing order. Input indices `delta` are 1-based and pair as
//! `i + l = 2^n + 1`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported bit count for enumeration.
pub const MAX_BITS: usize = 20;

/// An `n`-bit string, `1 <= n <= MAX_BITS`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    value: u32,
    len: usize,
}

impl BitString {
    pub fn new(value: u32, len: usize) -> Result<Self> {
        if len == 0 || len > MAX_BITS {
            return Err(Error::SizeLimit {
                what: "bit-string length",
                value: len,
                limit: MAX_BITS,
            });
        }
        if u64::from(value) >= 1u64 << len {
            return Err(Error::Domain(format!("{value} does not fit in {len} bits")));
        }
        Ok(Self { value, len })
    }

    /// Parses a string of `'0'`/`'1'` characters, leftmost bit first.
    pub fn parse(s: &str) -> Result<Self> {
        let mut value = 0u32;
        for c in s.chars() {
            let bit = match c {
                '0' => 0,
                '1' => 1,
                _ => return Err(Error::Domain(format!("invalid bit character {c:?}"))),
            };
            value = value.checked_shl(1).unwrap_or(0) | bit;
        }
        Self::new(value, s.chars().count())
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(0, len)
    }

    pub fn ones(len: usize) -> Result<Self> {
        Self::new(((1u64 << len) - 1) as u32, len)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Integer value with bit 1 as the most significant bit.
    #[inline]
    pub fn value(&self) -> u32 {
        self.value
    }

    /// The `y`-th bit, 1-based from the left. Panics when `y` is out of range.
    #[inline]
    pub fn bit(&self, y: usize) -> u8 {
        assert!((1..=self.len).contains(&y), "bit index {y} out of 1..={}", self.len);
        ((self.value >> (self.len - y)) & 1) as u8
    }

    /// Sign `(-1)^{x_y}`.
    #[inline]
    pub fn sign(&self, y: usize) -> i32 {
        1 - 2 * i32::from(self.bit(y))
    }

    pub fn bits(&self) -> impl Iterator<Item = u8> + '_ {
        (1..=self.len).map(move |y| self.bit(y))
    }

    #[inline]
    pub fn weight(&self) -> u32 {
        self.value.count_ones()
    }

    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        check_len(self, other)?;
        Ok(BitString {
            value: self.value ^ other.value,
            len: self.len,
        })
    }

    pub fn complement(&self) -> BitString {
        BitString {
            value: !self.value & (((1u64 << self.len) - 1) as u32),
            len: self.len,
        }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

fn check_len(a: &BitString, b: &BitString) -> Result<()> {
    if a.len != b.len {
        return Err(Error::LengthMismatch {
            left: a.len,
            right: b.len,
        });
    }
    Ok(())
}

/// All `2^n` strings in ascending binary order, addressed by 1-based `delta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedInputSet {
    n: usize,
    strings: Vec<BitString>,
}

impl OrderedInputSet {
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of strings, `2^n`.
    #[inline]
    pub fn len(&self) -> usize {
        self.strings.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    /// The string `x^delta`, `1 <= delta <= 2^n`.
    pub fn get(&self, delta: usize) -> Result<BitString> {
        if delta == 0 || delta > self.strings.len() {
            return Err(Error::IndexOutOfRange {
                index: delta,
                max: self.strings.len(),
            });
        }
        Ok(self.strings[delta - 1])
    }

    /// Index `l = 2^n + 1 - delta` of the complementary string.
    pub fn partner(&self, delta: usize) -> Result<usize> {
        self.get(delta)?;
        Ok(self.strings.len() + 1 - delta)
    }

    /// The first half `x^1 .. x^{2^{n-1}}`, i.e. the strings labelling
    /// Alice's measurements.
    pub fn first_half(&self) -> &[BitString] {
        &self.strings[..self.strings.len() / 2]
    }

    pub fn iter(&self) -> impl Iterator<Item = &BitString> {
        self.strings.iter()
    }

    pub fn as_slice(&self) -> &[BitString] {
        &self.strings
    }
}

/// Enumerates `{0,1}^n` in ascending order, `1 <= n <= 20`.
pub fn enumerate_inputs(n: usize) -> Result<OrderedInputSet> {
    if n == 0 || n > MAX_BITS {
        return Err(Error::SizeLimit {
            what: "bit count n",
            value: n,
            limit: MAX_BITS,
        });
    }
    let strings = (0..(1u32 << n))
        .map(|v| BitString { value: v, len: n })
        .collect();
    Ok(OrderedInputSet { n, strings })
}

/// Strings of Hamming weight at least two; `2^n - n - 1` of them.
pub fn parity_set(n: usize) -> Result<Vec<BitString>> {
    if n < 2 {
        return Err(Error::EmptyParitySet(n));
    }
    let all = enumerate_inputs(n)?;
    Ok(all.strings.into_iter().filter(|s| s.weight() >= 2).collect())
}

/// Odd-weight members of the parity set; `2^{n-1} - n` of them. Each one
/// yields a linear constraint on Alice's observables.
pub fn nontrivial_parities(n: usize) -> Result<Vec<BitString>> {
    Ok(parity_set(n)?
        .into_iter()
        .filter(|s| s.weight() % 2 == 1)
        .collect())
}

/// `s . x` modulo 2.
pub fn parity_bit(s: &BitString, x: &BitString) -> Result<u8> {
    check_len(s, x)?;
    Ok(((s.value & x.value).count_ones() & 1) as u8)
}
