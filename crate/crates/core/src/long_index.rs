//! Long maximal palindromes (length `> 2 tau`), grouped by blocks of `tau`
//! consecutive centers.
//!
//! A block with at most two long centers stores them verbatim. A block with
//! three or more has its long centers evenly spaced at some distance `r`, and
//! they all sit inside one maximal factor `w[e_l..=e_r]` of period `2r`. The
//! radius at such a center `c` is `min(c - e_l, e_r - c + 1)`, except at the
//! single center where both terms are equal; that one is stored explicitly.

use crate::bits::{BitVec, RankBitVec};
use crate::error::{Error, Result};
use crate::pal_core::{MaxPalArray, Symbol};

/// A long palindrome stored as `(center, length)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LongPal {
    pub center: usize,
    pub len: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockRecord {
    Empty,
    Explicit {
        first: LongPal,
        second: Option<LongPal>,
    },
    Run {
        e_l: usize,
        e_r: usize,
        exception: Option<LongPal>,
    },
}

impl BlockRecord {
    /// Length of the long palindrome at `c` according to this record.
    #[inline]
    pub fn length_at(&self, c: usize) -> Option<usize> {
        match *self {
            BlockRecord::Empty => None,
            BlockRecord::Explicit { first, second } => {
                if first.center == c {
                    Some(first.len)
                } else {
                    second.filter(|p| p.center == c).map(|p| p.len)
                }
            }
            BlockRecord::Run { e_l, e_r, exception } => {
                if let Some(p) = exception.filter(|p| p.center == c) {
                    return Some(p.len);
                }
                if c < e_l || c > e_r {
                    return None;
                }
                Some(2 * (c - e_l).min(e_r - c + 1))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LongStats {
    pub long_centers: usize,
    pub explicit_blocks: usize,
    pub run_blocks: usize,
    pub run_exceptions: usize,
}

#[derive(Clone, Debug)]
pub struct LongIndex {
    tau: usize,
    ls: BitVec,
    occupied: RankBitVec,
    records: Vec<BlockRecord>,
}

fn check_tau(n: usize, tau: usize) -> Result<()> {
    if tau == 0 || 4 * tau > n {
        return Err(Error::InvalidTau {
            tau,
            len: n,
            reason: "need 1 <= tau <= n/4",
        });
    }
    if n % (2 * tau) != 0 {
        return Err(Error::InvalidTau {
            tau,
            len: n,
            reason: "length must be a multiple of 2 tau",
        });
    }
    Ok(())
}

pub fn build_long(w: &[Symbol], m: &MaxPalArray, tau: usize) -> Result<LongIndex> {
    let n = w.len();
    if m.len() != n {
        return Err(Error::Malformed(format!(
            "array length {} differs from string length {n}",
            m.len()
        )));
    }
    check_tau(n, tau)?;

    let ls: BitVec = (0..n).map(|c| m.get(c) > 2 * tau).collect();
    let blocks = n / tau;
    let mut occupied = BitVec::zeros(blocks);
    let mut records = Vec::new();
    let mut long_centers = Vec::with_capacity(tau);

    for k in 0..blocks {
        long_centers.clear();
        long_centers.extend((k * tau..(k + 1) * tau).filter(|&c| ls.get(c)));
        let record = match long_centers.len() {
            0 => continue,
            1 | 2 => BlockRecord::Explicit {
                first: LongPal {
                    center: long_centers[0],
                    len: m.get(long_centers[0]),
                },
                second: long_centers.get(1).map(|&c| LongPal { center: c, len: m.get(c) }),
            },
            _ => derive_run(w, &long_centers, m)?,
        };
        for &c in &long_centers {
            if record.length_at(c) != Some(m.get(c)) {
                return Err(Error::Inconsistent(format!(
                    "block {} record {record:?} gives {:?} at center {c}, expected {}",
                    k + 1,
                    record.length_at(c),
                    m.get(c)
                )));
            }
        }
        occupied.set(k, true);
        records.push(record);
    }

    Ok(LongIndex {
        tau,
        ls,
        occupied: RankBitVec::new(occupied),
        records,
    })
}

/// Builds the run record for three or more long centers of one block.
///
/// `e_l..=e_r` is the maximal extension of `w[c_1 - r .. c_1 + r - 1]` that
/// keeps period `2r`. Every center is checked against `m`: all but possibly
/// the balanced center `c*` (with `c* - e_l == e_r - c* + 1`) must follow the
/// min formula, and `c*` must be at least as long as the formula says.
pub fn derive_run(w: &[Symbol], centers: &[usize], m: &MaxPalArray) -> Result<BlockRecord> {
    if centers.len() < 3 {
        return Err(Error::Inconsistent(format!(
            "run needs at least 3 centers, got {}",
            centers.len()
        )));
    }
    let r = centers[1]
        .checked_sub(centers[0])
        .filter(|&r| r > 0)
        .ok_or_else(|| Error::Inconsistent("centers not increasing".into()))?;
    if let Some(bad) = centers.windows(2).find(|p| p[1] != p[0] + r) {
        return Err(Error::Inconsistent(format!(
            "long centers {centers:?} not evenly spaced ({} -> {})",
            bad[0], bad[1]
        )));
    }
    let c1 = centers[0];
    if m.radius(c1) < r {
        return Err(Error::Inconsistent(format!(
            "seed radius {} at {c1} below spacing {r}",
            m.radius(c1)
        )));
    }

    let n = w.len();
    let period = 2 * r;
    let mut e_l = c1 - r;
    while e_l >= 1 && w[e_l - 1] == w[e_l - 1 + period] {
        e_l -= 1;
    }
    let mut e_r = c1 + r - 1;
    while e_r + 1 < n && w[e_r + 1] == w[e_r + 1 - period] {
        e_r += 1;
    }

    let mut exception = None;
    for &c in centers {
        if c < e_l || c > e_r {
            return Err(Error::Inconsistent(format!(
                "center {c} outside periodic factor [{e_l}..{e_r}]"
            )));
        }
        let (left, right) = (c - e_l, e_r - c + 1);
        let actual = m.radius(c);
        if left == right {
            if actual < left {
                return Err(Error::Inconsistent(format!(
                    "balanced center {c} has radius {actual} < {left}"
                )));
            }
            exception = Some(LongPal { center: c, len: m.get(c) });
        } else if actual != left.min(right) {
            return Err(Error::Inconsistent(format!(
                "center {c} has radius {actual}, run [{e_l}..{e_r}] predicts {}",
                left.min(right)
            )));
        }
    }
    Ok(BlockRecord::Run { e_l, e_r, exception })
}

impl LongIndex {
    /// Assembles an index from serialized parts; `records` lists the
    /// non-empty blocks in order.
    pub(crate) fn from_parts(tau: usize, ls: BitVec, records: Vec<BlockRecord>) -> Result<Self> {
        let n = ls.len();
        check_tau(n, tau)?;
        let blocks = n / tau;
        let mut occupied = BitVec::zeros(blocks);
        for k in 0..blocks {
            if (k * tau..(k + 1) * tau).any(|c| ls.get(c)) {
                occupied.set(k, true);
            }
        }
        let occupied = RankBitVec::new(occupied);
        if occupied.count_ones() != records.len() {
            return Err(Error::Format(format!(
                "{} block records for {} occupied blocks",
                records.len(),
                occupied.count_ones()
            )));
        }
        Ok(Self {
            tau,
            ls,
            occupied,
            records,
        })
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn len(&self) -> usize {
        self.ls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ls.is_empty()
    }

    pub fn ls(&self) -> &BitVec {
        &self.ls
    }

    #[inline]
    pub fn is_long(&self, c: usize) -> bool {
        self.ls.get(c)
    }

    /// Record of block `k` (0-based; the block of center `c` is `c / tau`).
    pub fn block(&self, k: usize) -> &BlockRecord {
        if self.occupied.get(k) {
            &self.records[self.occupied.rank1(k)]
        } else {
            &BlockRecord::Empty
        }
    }

    /// Non-empty blocks as `(0-based block, record)`.
    pub fn records(&self) -> impl Iterator<Item = (usize, &BlockRecord)> + '_ {
        (0..self.occupied.len())
            .filter(|&k| self.occupied.get(k))
            .zip(self.records.iter())
    }

    pub(crate) fn record_slice(&self) -> &[BlockRecord] {
        &self.records
    }

    /// Length of the long maximal palindrome at `c`. Constant time; needs
    /// neither the string nor the array.
    #[inline]
    pub fn query(&self, c: usize) -> Result<usize> {
        if c >= self.ls.len() {
            return Err(Error::OutOfRange {
                what: "center",
                value: c,
                limit: self.ls.len(),
            });
        }
        if !self.ls.get(c) {
            return Err(Error::Corrupt(format!("center {c} is not long")));
        }
        let rec = self.block(c / self.tau);
        match rec.length_at(c) {
            Some(len) if len > 2 * self.tau => Ok(len),
            other => Err(Error::Corrupt(format!(
                "block record {rec:?} yields {other:?} for long center {c}"
            ))),
        }
    }

    pub fn stats(&self) -> LongStats {
        let mut s = LongStats {
            long_centers: self.ls.count_ones(),
            ..Default::default()
        };
        for r in &self.records {
            match r {
                BlockRecord::Explicit { .. } => s.explicit_blocks += 1,
                BlockRecord::Run { exception, .. } => {
                    s.run_blocks += 1;
                    s.run_exceptions += exception.is_some() as usize;
                }
                BlockRecord::Empty => {}
            }
        }
        s
    }
}
