//! Plain bit vectors, a constant-time rank directory, and fixed-width packed
//! integer arrays.
//!
//! Bits are stored most-significant-first inside `u64` words, so writing the
//! words out as big-endian bytes yields the MSB-first byte layout used by the
//! index file.

use crate::error::{Error, Result};

#[inline]
fn low_mask(width: u32) -> u64 {
    if width >= 64 {
        !0
    } else {
        (1u64 << width) - 1
    }
}

/// Number of bits needed to store every value in `0..=max`.
pub fn bit_width(max: u64) -> u32 {
    64 - max.leading_zeros()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            words: Vec::with_capacity(bits.div_ceil(64)),
            len: 0,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (63 - i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (63 - i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn push(&mut self, bit: bool) {
        if self.len % 64 == 0 {
            self.words.push(0);
        }
        self.len += 1;
        if bit {
            self.set(self.len - 1, true);
        }
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push_bits(&mut self, value: u64, width: u32) {
        debug_assert!(width <= 64);
        for k in (0..width).rev() {
            self.push((value >> k) & 1 == 1);
        }
    }

    /// Reads `width` bits starting at `pos` as an unsigned integer.
    #[inline]
    pub fn get_bits(&self, pos: usize, width: u32) -> u64 {
        if width == 0 {
            return 0;
        }
        debug_assert!(pos + width as usize <= self.len);
        let word = pos / 64;
        let off = (pos % 64) as u32;
        if off + width <= 64 {
            (self.words[word] << off) >> (64 - width)
        } else {
            let first = 64 - off;
            let rest = width - first;
            let hi = self.words[word] & low_mask(first);
            let lo = self.words[word + 1] >> (64 - rest);
            (hi << rest) | lo
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// MSB-first byte image, `ceil(len / 8)` bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out: Vec<u8> = self.words.iter().flat_map(|w| w.to_be_bytes()).collect();
        out.truncate(self.len.div_ceil(8));
        out
    }

    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<Self> {
        if bytes.len() < len.div_ceil(8) {
            return Err(Error::Truncated("bit vector"));
        }
        let mut words = Vec::with_capacity(len.div_ceil(64));
        for chunk in bytes[..len.div_ceil(8)].chunks(8) {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            words.push(u64::from_be_bytes(buf));
        }
        // clear anything past `len` so equality and popcounts stay exact
        if len % 64 != 0 {
            if let Some(last) = words.last_mut() {
                *last &= !low_mask(64 - (len % 64) as u32);
            }
        }
        Ok(Self { words, len })
    }
}

impl FromIterator<bool> for BitVec {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut bv = BitVec::new();
        for b in iter {
            bv.push(b);
        }
        bv
    }
}

/// A bit vector with constant-time `rank1`.
///
/// One cumulative count per 512-bit superblock; the remainder is at most
/// eight popcounts.
#[derive(Clone, Debug, Default)]
pub struct RankBitVec {
    bits: BitVec,
    supers: Vec<usize>,
}

const SUPER_WORDS: usize = 8;

impl RankBitVec {
    pub fn new(bits: BitVec) -> Self {
        let mut supers = Vec::with_capacity(bits.words.len() / SUPER_WORDS + 1);
        let mut acc = 0usize;
        for chunk in bits.words.chunks(SUPER_WORDS) {
            supers.push(acc);
            acc += chunk.iter().map(|w| w.count_ones() as usize).sum::<usize>();
        }
        supers.push(acc);
        Self { bits, supers }
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.bits.get(i)
    }

    /// Number of set bits in `[0, i)`.
    #[inline]
    pub fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.bits.len);
        let word = i / 64;
        let sup = word / SUPER_WORDS;
        let mut r = self.supers[sup];
        for w in &self.bits.words[sup * SUPER_WORDS..word] {
            r += w.count_ones() as usize;
        }
        let off = i % 64;
        if off != 0 {
            r += (self.bits.words[word] >> (64 - off)).count_ones() as usize;
        }
        r
    }

    pub fn count_ones(&self) -> usize {
        *self.supers.last().unwrap_or(&0)
    }
}

/// Unsigned integers of a fixed bit width, packed back to back.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntVec {
    bits: BitVec,
    width: u32,
    len: usize,
}

impl IntVec {
    pub fn new(width: u32) -> Self {
        assert!(width <= 64);
        Self {
            bits: BitVec::new(),
            width,
            len: 0,
        }
    }

    /// Packs `values` using the smallest width that holds the largest one.
    pub fn from_values(values: &[u64]) -> Self {
        let width = bit_width(values.iter().copied().max().unwrap_or(0));
        Self::from_values_with_width(values, width)
    }

    pub fn from_values_with_width(values: &[u64], width: u32) -> Self {
        let mut iv = Self::new(width);
        iv.bits = BitVec::with_capacity(values.len() * width as usize);
        for &v in values {
            iv.push(v);
        }
        iv
    }

    pub fn push(&mut self, value: u64) {
        debug_assert!(value <= low_mask(self.width), "{value} exceeds width {}", self.width);
        self.bits.push_bits(value, self.width);
        self.len += 1;
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        debug_assert!(i < self.len);
        self.bits.get_bits(i * self.width as usize, self.width)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn bit_len(&self) -> usize {
        self.len * self.width as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.bits.to_bytes()
    }

    pub fn from_bytes(bytes: &[u8], width: u32, len: usize) -> Result<Self> {
        if width > 64 {
            return Err(Error::Format(format!("integer width {width} exceeds 64")));
        }
        let bit_len = len
            .checked_mul(width as usize)
            .ok_or(Error::Truncated("packed integers"))?;
        Ok(Self {
            bits: BitVec::from_bytes(bytes, bit_len)?,
            width,
            len,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn msb_first_byte_layout() {
        let bv: BitVec = [true, false, true, true, false, false, false, false, true]
            .into_iter()
            .collect();
        assert_eq!(bv.to_bytes(), vec![0b1011_0000, 0b1000_0000]);
        let back = BitVec::from_bytes(&bv.to_bytes(), 9).unwrap();
        assert_eq!(back, bv);
    }

    #[test]
    fn get_bits_across_word_boundary() {
        let mut bv = BitVec::new();
        bv.push_bits(0, 60);
        bv.push_bits(0b1011_0110, 8);
        assert_eq!(bv.get_bits(60, 8), 0b1011_0110);
        assert_eq!(bv.get_bits(62, 4), 0b1101);
    }

    #[test]
    fn from_bytes_rejects_short_input() {
        assert!(BitVec::from_bytes(&[0xff], 9).is_err());
    }

    #[test]
    fn bit_width_edges() {
        assert_eq!(bit_width(0), 0);
        assert_eq!(bit_width(1), 1);
        assert_eq!(bit_width(4), 3);
        assert_eq!(bit_width(u64::MAX), 64);
    }

    proptest! {
        #[test]
        fn rank_matches_prefix_count(bits in proptest::collection::vec(any::<bool>(), 0..2000)) {
            let rb = RankBitVec::new(bits.iter().copied().collect());
            let mut acc = 0;
            for i in 0..=bits.len() {
                prop_assert_eq!(rb.rank1(i), acc);
                if i < bits.len() && bits[i] {
                    acc += 1;
                }
            }
            prop_assert_eq!(rb.count_ones(), acc);
        }

        #[test]
        fn int_vec_round_trips(values in proptest::collection::vec(0u64..5000, 0..300)) {
            let iv = IntVec::from_values(&values);
            prop_assert_eq!(iv.iter().collect::<Vec<_>>(), values.clone());
            let back = IntVec::from_bytes(&iv.to_bytes(), iv.width(), iv.len()).unwrap();
            prop_assert_eq!(back, iv);
        }
    }
}
