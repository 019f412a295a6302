//! Short maximal palindromes (length `<= 2 tau`).
//!
//! Every short maximal palindrome, together with the two symbols that block
//! it, lies inside one of the `4 tau` windows
//! `X_k = w[(k - 1) 2 tau .. (k + 1) 2 tau)` for `k in 1..n / 2tau`, or touches
//! the string boundary there. Windows with equal center encodings have equal
//! maximal-palindrome arrays, so a table keyed by encoding stores each
//! distinct window pattern once; each window keeps only its table slot.
//!
//! The packed mode instead stores every short length directly in
//! `ceil(log2(2 tau + 1))` bits.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bits::{bit_width, IntVec};
use crate::error::{Error, Result};
use crate::lepal_encoding::{window_key, WindowKey, MAX_KEY_TAU};
use crate::pal_core::{manacher_even, MaxPalArray, Symbol};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShortMode {
    #[default]
    Table,
    Packed,
}

impl std::str::FromStr for ShortMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "table" => Ok(ShortMode::Table),
            "packed" => Ok(ShortMode::Packed),
            other => Err(format!("unknown short mode '{other}' (expected table or packed)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct WindowTable {
    tau: usize,
    n: usize,
    keys: Vec<WindowKey>,
    /// Window-local lengths, `4 tau` per key, in key order.
    lengths: IntVec,
    /// Slot of window `k` at position `k - 1`.
    slots: IntVec,
}

#[derive(Clone, Debug)]
pub struct PackedShort {
    tau: usize,
    lengths: IntVec,
}

#[derive(Clone, Debug)]
pub enum ShortIndex {
    Table(WindowTable),
    Packed(PackedShort),
}

pub fn build_short(w: &[Symbol], m: &MaxPalArray, tau: usize, mode: ShortMode) -> Result<ShortIndex> {
    let n = w.len();
    if tau == 0 || 4 * tau > n || n % (2 * tau) != 0 {
        return Err(Error::InvalidTau {
            tau,
            len: n,
            reason: "need 1 <= tau <= n/4 and n a multiple of 2 tau",
        });
    }
    match mode {
        ShortMode::Table => build_table(w, tau).map(ShortIndex::Table),
        ShortMode::Packed => {
            if m.len() != n {
                return Err(Error::Malformed("array length differs from string length".into()));
            }
            let width = bit_width(2 * tau as u64);
            let values: Vec<u64> = m
                .values()
                .iter()
                .map(|&v| if v <= 2 * tau { v as u64 } else { 0 })
                .collect();
            Ok(ShortIndex::Packed(PackedShort {
                tau,
                lengths: IntVec::from_values_with_width(&values, width),
            }))
        }
    }
}

fn build_table(w: &[Symbol], tau: usize) -> Result<WindowTable> {
    if tau > MAX_KEY_TAU {
        return Err(Error::InvalidTau {
            tau,
            len: w.len(),
            reason: "table mode needs tau <= 16; use packed mode",
        });
    }
    let n = w.len();
    let span = 2 * tau;
    let window = 4 * tau;
    let windows = n / span - 1;
    let width = bit_width(window as u64);

    let mut slot_of: HashMap<WindowKey, usize> = HashMap::new();
    let mut keys = Vec::new();
    let mut lengths = IntVec::new(width);
    let mut slots = Vec::with_capacity(windows);

    for k in 1..=windows {
        let x = &w[(k - 1) * span..(k + 1) * span];
        let key = window_key(x, tau)?;
        let local = manacher_even(x);
        let slot = match slot_of.get(&key) {
            Some(&slot) => {
                let base = slot * window;
                if let Some(p) = (0..window).find(|&p| lengths.get(base + p) as usize != local.get(p)) {
                    return Err(Error::Inconsistent(format!(
                        "windows share key {} but differ at offset {p}",
                        key.to_bit_string()
                    )));
                }
                slot
            }
            None => {
                let slot = keys.len();
                slot_of.insert(key, slot);
                keys.push(key);
                for &v in local.values() {
                    lengths.push(v as u64);
                }
                slot
            }
        };
        slots.push(slot as u64);
    }

    let slot_width = bit_width(keys.len().saturating_sub(1) as u64);
    Ok(WindowTable {
        tau,
        n,
        keys,
        lengths,
        slots: IntVec::from_values_with_width(&slots, slot_width),
    })
}

impl WindowTable {
    pub(crate) fn from_parts(
        tau: usize,
        n: usize,
        keys: Vec<WindowKey>,
        lengths: IntVec,
        slots: IntVec,
    ) -> Result<Self> {
        if tau == 0 || 4 * tau > n || n % (2 * tau) != 0 {
            return Err(Error::Format("table parameters inconsistent with length".into()));
        }
        if slots.len() != n / (2 * tau) - 1 {
            return Err(Error::Format(format!("{} window slots for length {n}", slots.len())));
        }
        if lengths.len() != keys.len() * 4 * tau {
            return Err(Error::Format("table length array does not match key count".into()));
        }
        if slots.iter().any(|s| s as usize >= keys.len()) {
            return Err(Error::Format("window slot outside table".into()));
        }
        Ok(Self {
            tau,
            n,
            keys,
            lengths,
            slots,
        })
    }

    pub fn keys(&self) -> &[WindowKey] {
        &self.keys
    }

    pub fn lengths(&self) -> &IntVec {
        &self.lengths
    }

    pub fn slots(&self) -> &IntVec {
        &self.slots
    }

    pub fn window_count(&self) -> usize {
        self.slots.len()
    }

    /// Window id `k` (1-based, boundary aliases resolved) and its first
    /// position, for center `c`.
    #[inline]
    pub fn window_of(&self, c: usize) -> (usize, usize) {
        let block = c / self.tau + 1;
        let k = (block / 2).clamp(1, self.n / (2 * self.tau) - 1);
        (k, (k - 1) * 2 * self.tau)
    }

    #[inline]
    pub fn query(&self, c: usize) -> Result<usize> {
        if c >= self.n {
            return Err(Error::OutOfRange {
                what: "center",
                value: c,
                limit: self.n,
            });
        }
        let (k, beg) = self.window_of(c);
        let slot = self.slots.get(k - 1) as usize;
        if slot >= self.keys.len() {
            return Err(Error::Corrupt(format!("window {k} points at missing key {slot}")));
        }
        Ok(self.lengths.get(slot * 4 * self.tau + c - beg) as usize)
    }
}

impl PackedShort {
    pub(crate) fn from_parts(tau: usize, lengths: IntVec) -> Self {
        Self { tau, lengths }
    }

    pub fn lengths(&self) -> &IntVec {
        &self.lengths
    }
}

impl ShortIndex {
    pub fn tau(&self) -> usize {
        match self {
            ShortIndex::Table(t) => t.tau,
            ShortIndex::Packed(p) => p.tau,
        }
    }

    pub fn mode(&self) -> ShortMode {
        match self {
            ShortIndex::Table(_) => ShortMode::Table,
            ShortIndex::Packed(_) => ShortMode::Packed,
        }
    }

    /// Length at `c`, valid when the maximal palindrome there is short.
    #[inline]
    pub fn query(&self, c: usize) -> Result<usize> {
        match self {
            ShortIndex::Table(t) => t.query(c),
            ShortIndex::Packed(p) => {
                if c >= p.lengths.len() {
                    return Err(Error::OutOfRange {
                        what: "center",
                        value: c,
                        limit: p.lengths.len(),
                    });
                }
                Ok(p.lengths.get(c) as usize)
            }
        }
    }

    pub fn distinct_keys(&self) -> Option<usize> {
        match self {
            ShortIndex::Table(t) => Some(t.keys.len()),
            ShortIndex::Packed(_) => None,
        }
    }
}
