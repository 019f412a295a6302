//! The `2n - 2` bit code for a maximal-palindrome array.
//!
//! Longest even-palindromic suffixes of successive prefixes have
//! non-decreasing centers. Writing each center difference in unary (ones
//! followed by a terminating zero) gives at most `(n - 1) + (n - 1)` bits,
//! and the suffix array, hence the maximal-palindrome array, decodes back
//! from it.
//!
//! The center of an empty suffix palindrome ending at `j` is taken to be
//! `j + 1`, so every center is `j + 1 - LEPal[j] / 2` and the sequence starts
//! at 1.

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::pal_core::{manacher_even, mepal_to_lepal, LongestSuffixPalArray, Symbol};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CenterSequence(Vec<usize>);

impl CenterSequence {
    pub fn new(centers: Vec<usize>) -> Result<Self> {
        for (j, &c) in centers.iter().enumerate() {
            if c == 0 || c > j + 1 {
                return Err(Error::Malformed(format!("center {c} invalid at {j}")));
            }
            if j > 0 && c < centers[j - 1] {
                return Err(Error::Malformed(format!("centers decrease at {j}")));
            }
        }
        Ok(Self(centers))
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Fails when a center is too far left for its suffix to fit.
    pub fn to_lepal(&self) -> Result<LongestSuffixPalArray> {
        let values = self
            .0
            .iter()
            .enumerate()
            .map(|(j, &c)| 2 * (j + 1 - c))
            .collect();
        LongestSuffixPalArray::new(values)
    }
}

pub fn centers_of(l: &LongestSuffixPalArray) -> Result<CenterSequence> {
    let centers = l
        .values()
        .iter()
        .enumerate()
        .map(|(j, &len)| {
            if len % 2 != 0 || len > j + 1 {
                Err(Error::Malformed(format!("invalid suffix length {len} at {j}")))
            } else {
                Ok(j + 1 - len / 2)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    CenterSequence::new(centers)
}

/// Unary-coded center differences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterEncoding {
    bits: BitVec,
    source_len: usize,
}

impl CenterEncoding {
    pub fn from_bits(bits: BitVec, source_len: usize) -> Self {
        Self { bits, source_len }
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn bit_len(&self) -> usize {
        self.bits.len()
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }

    /// Renders the bits as a `0`/`1` string.
    pub fn to_bit_string(&self) -> String {
        self.bits.iter().map(|b| if b { '1' } else { '0' }).collect()
    }
}

pub fn encode(centers: &CenterSequence) -> CenterEncoding {
    let c = centers.values();
    let mut bits = BitVec::with_capacity(2 * c.len());
    for pair in c.windows(2) {
        for _ in 0..pair[1] - pair[0] {
            bits.push(true);
        }
        bits.push(false);
    }
    CenterEncoding {
        bits,
        source_len: c.len(),
    }
}

/// Reads `n - 1` unary groups from `bits` starting at bit 0. Returns the
/// centers and the number of bits consumed.
fn decode_groups(bits: &BitVec, n: usize) -> Result<(Vec<usize>, usize)> {
    let mut centers = Vec::with_capacity(n);
    if n == 0 {
        return Ok((centers, 0));
    }
    centers.push(1);
    let mut pos = 0;
    let mut cur = 1usize;
    for j in 1..n {
        loop {
            if pos >= bits.len() {
                return Err(Error::Malformed(format!(
                    "encoding ends after {} of {} groups",
                    j - 1,
                    n - 1
                )));
            }
            let b = bits.get(pos);
            pos += 1;
            if !b {
                break;
            }
            cur += 1;
        }
        if cur > j + 1 {
            return Err(Error::Malformed(format!("decoded center {cur} exceeds {}", j + 1)));
        }
        centers.push(cur);
    }
    Ok((centers, pos))
}

pub fn decode(e: &CenterEncoding) -> Result<CenterSequence> {
    let (centers, used) = decode_groups(&e.bits, e.source_len)?;
    if used != e.bits.len() {
        return Err(Error::Malformed(format!(
            "{} trailing bits after {} groups",
            e.bits.len() - used,
            e.source_len.saturating_sub(1)
        )));
    }
    Ok(CenterSequence(centers))
}

/// Convenience: the full encoding of a string's maximal-palindrome array.
pub fn encode_string<T: Eq>(w: &[T]) -> CenterEncoding {
    let l = mepal_to_lepal(&manacher_even(w));
    encode(&centers_of(&l).expect("suffix array of a real string"))
}

/// Largest block parameter whose window key fits in 128 bits.
pub const MAX_KEY_TAU: usize = 16;

/// Fixed-width exact-match key of a `4 tau` window: `8 tau - 2` bits, the
/// center encoding left-aligned and padded on the right with ones.
///
/// Bit `width - 1` of `bits` holds the first encoding bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WindowKey {
    bits: u128,
    width: u32,
}

impl WindowKey {
    pub fn from_raw(bits: u128, tau: usize) -> Result<Self> {
        let width = key_width(tau)?;
        if width < 128 && bits >> width != 0 {
            return Err(Error::Format(format!("key has bits above width {width}")));
        }
        Ok(Self { bits, width })
    }

    pub fn raw(&self) -> u128 {
        self.bits
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.width)
            .rev()
            .map(|k| if (self.bits >> k) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Recovers the window's center sequence; trailing padding is ignored
    /// because decoding stops after `4 tau - 1` groups.
    pub fn decode(&self) -> Result<CenterSequence> {
        let window = (self.width as usize + 2) / 2;
        let bits: BitVec = (0..self.width).rev().map(|k| (self.bits >> k) & 1 == 1).collect();
        let (centers, used) = decode_groups(&bits, window)?;
        if (used..bits.len()).any(|i| !bits.get(i)) {
            return Err(Error::Malformed("key padding must be all ones".into()));
        }
        Ok(CenterSequence(centers))
    }
}

fn key_width(tau: usize) -> Result<u32> {
    if tau == 0 || tau > MAX_KEY_TAU {
        return Err(Error::InvalidTau {
            tau,
            len: 4 * tau,
            reason: "window keys need 1 <= tau <= 16",
        });
    }
    Ok((8 * tau - 2) as u32)
}

pub fn window_key(x: &[Symbol], tau: usize) -> Result<WindowKey> {
    let width = key_width(tau)?;
    if x.len() != 4 * tau {
        return Err(Error::Malformed(format!(
            "window has length {}, expected {}",
            x.len(),
            4 * tau
        )));
    }
    let enc = encode_string(x);
    debug_assert!(enc.bit_len() <= width as usize);
    let mut bits = 0u128;
    for b in enc.bits.iter() {
        bits = (bits << 1) | b as u128;
    }
    let pad = width as usize - enc.bit_len();
    for _ in 0..pad {
        bits = (bits << 1) | 1;
    }
    Ok(WindowKey { bits, width })
}
