//! Plain bit vectors and fixed-width integer arrays.
//!
//! Bits are addressed by position; the byte serialization packs them
//! most-significant-bit first and zero-pads the final byte.

use std::fmt;

/// A growable sequence of bits backed by 64-bit words.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            words: Vec::with_capacity(bits.div_ceil(64)),
            len: 0,
        }
    }

    /// A vector of `len` zero bits.
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, bit: bool) {
        if self.len % 64 == 0 {
            self.words.push(0);
        }
        if bit {
            self.words[self.len / 64] |= 1 << (self.len % 64);
        }
        self.len += 1;
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push_int(&mut self, value: u64, width: u32) {
        debug_assert!(width == 64 || value >> width == 0);
        for shift in (0..width).rev() {
            self.push((value >> shift) & 1 == 1);
        }
    }

    pub fn extend_from(&mut self, other: &BitVec) {
        for bit in other.iter() {
            self.push(bit);
        }
    }

    /// Returns the bit at `index`. Panics when out of bounds.
    #[inline]
    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.len, "bit index {index} out of bounds");
        (self.words[index / 64] >> (index % 64)) & 1 == 1
    }

    pub fn set(&mut self, index: usize, bit: bool) {
        assert!(index < self.len, "bit index {index} out of bounds");
        let mask = 1 << (index % 64);
        if bit {
            self.words[index / 64] |= mask;
        } else {
            self.words[index / 64] &= !mask;
        }
    }

    /// The eight bits at `start..start + 8` with bit `start` lowest; `start` must be a multiple of 8.
    #[inline]
    pub(crate) fn byte(&self, start: usize) -> u8 {
        debug_assert!(start % 8 == 0 && start + 8 <= self.len);
        (self.words[start / 64] >> (start % 64)) as u8
    }

    /// Reads `width` bits starting at `start` as an unsigned integer, most significant first.
    pub fn read_int(&self, start: usize, width: u32) -> u64 {
        (start..start + width as usize).fold(0, |acc, i| (acc << 1) | self.get(i) as u64)
    }

    /// Number of set bits in positions `start..end`.
    pub fn count_ones_in(&self, start: usize, end: usize) -> usize {
        debug_assert!(start <= end && end <= self.len);
        if start == end {
            return 0;
        }
        let (first, last) = (start / 64, (end - 1) / 64);
        let head = !0u64 << (start % 64);
        let tail = !0u64 >> (63 - (end - 1) % 64);
        if first == last {
            return (self.words[first] & head & tail).count_ones() as usize;
        }
        let middle: usize = self.words[first + 1..last]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum();
        (self.words[first] & head).count_ones() as usize
            + middle
            + (self.words[last] & tail).count_ones() as usize
    }

    pub fn count_ones(&self) -> usize {
        self.count_ones_in(0, self.len)
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Packs the bits most-significant-bit first into `len.div_ceil(8)` bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len.div_ceil(8)];
        for (i, bit) in self.iter().enumerate() {
            if bit {
                out[i / 8] |= 0x80 >> (i % 8);
            }
        }
        out
    }

    /// Unpacks `len` bits from `bytes`. Returns `None` if `bytes` has the wrong
    /// size or any padding bit is set.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Option<Self> {
        if bytes.len() != len.div_ceil(8) {
            return None;
        }
        let mut bits = Self::with_capacity(len);
        for i in 0..len {
            bits.push(bytes[i / 8] & (0x80 >> (i % 8)) != 0);
        }
        if len % 8 != 0 && bytes[len / 8] & (0xff >> (len % 8)) != 0 {
            return None;
        }
        Some(bits)
    }
}

impl FromIterator<bool> for BitVec {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut bits = BitVec::new();
        for bit in iter {
            bits.push(bit);
        }
        bits
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec(\"{self}\")")
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Parses a string of `0`/`1` characters; whitespace is ignored.
impl std::str::FromStr for BitVec {
    type Err = char;

    fn from_str(s: &str) -> std::result::Result<Self, char> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(other),
            })
            .collect()
    }
}

/// Number of bits needed to write any value in `0..=max`.
pub(crate) fn bit_width(max: u64) -> u32 {
    (u64::BITS - max.leading_zeros()).max(1)
}

/// Fixed-width unsigned integers packed back to back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct PackedInts {
    width: u32,
    len: usize,
    words: Vec<u64>,
}

impl PackedInts {
    pub(crate) fn new(width: u32, len: usize) -> Self {
        assert!((1..=64).contains(&width));
        Self {
            width,
            len,
            words: vec![0; (width as usize * len).div_ceil(64)],
        }
    }

    pub(crate) fn from_values(width: u32, values: &[u64]) -> Self {
        let mut packed = Self::new(width, values.len());
        for (i, &v) in values.iter().enumerate() {
            packed.set(i, v);
        }
        packed
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    pub(crate) fn bit_len(&self) -> usize {
        self.width as usize * self.len
    }

    fn mask(&self) -> u64 {
        if self.width == 64 {
            !0
        } else {
            (1 << self.width) - 1
        }
    }

    pub(crate) fn get(&self, index: usize) -> u64 {
        debug_assert!(index < self.len);
        let bit = index * self.width as usize;
        let (word, offset) = (bit / 64, bit % 64);
        let mut value = self.words[word] >> offset;
        if offset + self.width as usize > 64 {
            value |= self.words[word + 1] << (64 - offset);
        }
        value & self.mask()
    }

    pub(crate) fn set(&mut self, index: usize, value: u64) {
        debug_assert!(index < self.len);
        let mask = self.mask();
        debug_assert!(value & !mask == 0);
        let bit = index * self.width as usize;
        let (word, offset) = (bit / 64, bit % 64);
        self.words[word] &= !(mask << offset);
        self.words[word] |= value << offset;
        if offset + self.width as usize > 64 {
            let spill = 64 - offset;
            self.words[word + 1] &= !(mask >> spill);
            self.words[word + 1] |= value >> spill;
        }
    }
}
