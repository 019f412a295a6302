//! Constant-time range maximum/minimum queries that never store the values.
//!
//! Positions are grouped into blocks of 8. Each block keeps only the rank of
//! its Cartesian tree among the 1430 shapes on 8 nodes (ballot-number
//! numbering); one process-wide table holds the in-block answer for every
//! shape and every `(l, r)`. Above the blocks there is a sparse table over
//! blocks inside each 256-position superblock (one-byte entries) and a sparse
//! table over superblocks. Values are read through a caller-supplied accessor
//! only to compare the handful of candidates a query produces.
//!
//! Ties go to the smallest index.

use std::sync::OnceLock;

use crate::bits::IntVec;
use crate::error::{Error, Result};
use crate::format::{pos_width, ByteReader, ByteWriter};

pub const BLOCK: usize = 8;
const BLOCKS_PER_SUPER: usize = 32;
const INNER_LEVELS: usize = 4;
/// Number of Cartesian tree shapes on `BLOCK` nodes.
pub const SHAPES: usize = 1430;
const SIG_BITS: u32 = 11;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RmqMode {
    Max,
    Min,
}

fn ballot() -> &'static [[u32; BLOCK + 1]; BLOCK + 1] {
    static BALLOT: OnceLock<[[u32; BLOCK + 1]; BLOCK + 1]> = OnceLock::new();
    BALLOT.get_or_init(|| {
        let mut c = [[0u32; BLOCK + 1]; BLOCK + 1];
        for q in 0..=BLOCK {
            for p in 0..=q {
                c[p][q] = if p == 0 && q == 0 {
                    1
                } else {
                    let left = if q > 0 { c[p][q - 1] } else { 0 };
                    let down = if p > 0 { c[p - 1][q] } else { 0 };
                    left + down
                };
            }
        }
        c
    })
}

/// Cartesian tree number of a block with `len` real entries. `beats(i, j)`
/// says entry `i` strictly wins over the earlier entry `j`; entries past
/// `len` never win.
fn signature(len: usize, mut beats: impl FnMut(usize, usize) -> bool) -> u16 {
    let c = ballot();
    let mut stack = [0usize; BLOCK];
    let mut top = 0usize;
    let mut q = BLOCK;
    let mut number = 0u32;
    for i in 0..BLOCK {
        if i < len {
            while top > 0 && beats(i, stack[top - 1]) {
                number += c[BLOCK - 1 - i][q];
                q -= 1;
                top -= 1;
            }
        }
        stack[top] = i;
        top += 1;
    }
    number as u16
}

/// In-block answers for every shape: `answers[shape * 64 + l * 8 + r]`.
fn shape_table() -> &'static [u8] {
    static TABLE: OnceLock<Vec<u8>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut answers = vec![u8::MAX; SHAPES * BLOCK * BLOCK];
        let mut seen = vec![false; SHAPES];
        let mut perm: Vec<usize> = (0..BLOCK).collect();
        loop {
            let sig = signature(BLOCK, |i, j| perm[i] < perm[j]) as usize;
            if !seen[sig] {
                seen[sig] = true;
                for l in 0..BLOCK {
                    let mut best = l;
                    for r in l..BLOCK {
                        if perm[r] < perm[best] {
                            best = r;
                        }
                        answers[sig * BLOCK * BLOCK + l * BLOCK + r] = best as u8;
                    }
                }
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        debug_assert!(seen.iter().all(|&s| s));
        answers
    })
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[derive(Clone, Debug)]
pub struct Rmq {
    n: usize,
    mode: RmqMode,
    sigs: Vec<u16>,
    /// Per block, for levels 1..=4: the winning block among
    /// `[b, b + 2^level)` (clipped to the superblock), relative to the
    /// superblock's first block.
    inner: Vec<[u8; INNER_LEVELS]>,
    /// Sparse table over superblocks; level `k` entry `s` is the winning
    /// position among superblocks `[s, s + 2^k)`.
    outer: Vec<Vec<usize>>,
}

impl Rmq {
    pub fn build<T: PartialOrd, F: Fn(usize) -> T>(n: usize, mode: RmqMode, value: F) -> Self {
        let table = shape_table();
        let blocks = n.div_ceil(BLOCK);
        let mut rmq = Rmq {
            n,
            mode,
            sigs: Vec::with_capacity(blocks),
            inner: Vec::with_capacity(blocks),
            outer: Vec::new(),
        };

        let mut buf: Vec<T> = Vec::with_capacity(BLOCK);
        for b in 0..blocks {
            let start = b * BLOCK;
            let len = BLOCK.min(n - start);
            buf.clear();
            buf.extend((start..start + len).map(&value));
            let sig = signature(len, |i, j| strictly_better(mode, &buf[i], &buf[j]));
            debug_assert!((sig as usize) < SHAPES);
            rmq.sigs.push(sig);
        }
        debug_assert!(table.len() == SHAPES * BLOCK * BLOCK);

        rmq.inner = vec![[0u8; INNER_LEVELS]; blocks];
        let supers = blocks.div_ceil(BLOCKS_PER_SUPER);
        for s in 0..supers {
            let b0 = s * BLOCKS_PER_SUPER;
            let b1 = blocks.min(b0 + BLOCKS_PER_SUPER);
            for level in 1..=INNER_LEVELS {
                let half = 1usize << (level - 1);
                for b in b0..b1 {
                    let a = if level == 1 { b } else { b0 + rmq.inner[b][level - 2] as usize };
                    let winner = if b + half < b1 {
                        let other = if level == 1 {
                            b + half
                        } else {
                            b0 + rmq.inner[b + half][level - 2] as usize
                        };
                        rmq.better_block(a, other, &value)
                    } else {
                        a
                    };
                    rmq.inner[b][level - 1] = (winner - b0) as u8;
                }
            }
        }

        let first: Vec<usize> = (0..supers)
            .map(|s| {
                let b0 = s * BLOCKS_PER_SUPER;
                let b1 = blocks.min(b0 + BLOCKS_PER_SUPER) - 1;
                rmq.blocks_within_super(b0, b1, &value)
            })
            .collect();
        rmq.outer.push(first);
        let mut k = 1;
        while (1usize << k) <= supers {
            let prev = &rmq.outer[k - 1];
            let half = 1usize << (k - 1);
            let level: Vec<usize> = (0..=supers - (1 << k))
                .map(|s| rmq.pick(prev[s], prev[s + half], &value))
                .collect();
            rmq.outer.push(level);
            k += 1;
        }
        rmq
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn mode(&self) -> RmqMode {
        self.mode
    }

    /// Index in `[s, t]` holding the extremal value, smallest index on ties.
    pub fn query<T: PartialOrd, F: Fn(usize) -> T>(&self, s: usize, t: usize, value: F) -> Result<usize> {
        if s > t || t >= self.n {
            return Err(Error::InvalidRange {
                start: s,
                end: t,
                len: self.n,
            });
        }
        let (bs, bt) = (s / BLOCK, t / BLOCK);
        if bs == bt {
            return Ok(self.in_block(bs, s % BLOCK, t % BLOCK));
        }
        let mut best = self.pick(
            self.in_block(bs, s % BLOCK, BLOCK - 1),
            self.in_block(bt, 0, t % BLOCK),
            &value,
        );
        if bs + 1 < bt {
            best = self.pick(best, self.blocks_between(bs + 1, bt - 1, &value), &value);
        }
        Ok(best)
    }

    #[inline]
    fn in_block(&self, b: usize, l: usize, r: usize) -> usize {
        let sig = self.sigs[b] as usize;
        b * BLOCK + shape_table()[sig * BLOCK * BLOCK + l * BLOCK + r] as usize
    }

    #[inline]
    fn block_best(&self, b: usize) -> usize {
        let len = BLOCK.min(self.n - b * BLOCK);
        self.in_block(b, 0, len - 1)
    }

    #[inline]
    fn pick<T: PartialOrd, F: Fn(usize) -> T>(&self, a: usize, b: usize, value: &F) -> usize {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if strictly_better(self.mode, &value(hi), &value(lo)) {
            hi
        } else {
            lo
        }
    }

    fn better_block<T: PartialOrd, F: Fn(usize) -> T>(&self, a: usize, b: usize, value: &F) -> usize {
        let winner = self.pick(self.block_best(a), self.block_best(b), value);
        winner / BLOCK
    }

    /// Best position over blocks `bl..=br` of a single superblock.
    fn blocks_within_super<T: PartialOrd, F: Fn(usize) -> T>(&self, bl: usize, br: usize, value: &F) -> usize {
        let b0 = bl / BLOCKS_PER_SUPER * BLOCKS_PER_SUPER;
        let span = br - bl + 1;
        let level = (span.ilog2() as usize).min(INNER_LEVELS);
        if level == 0 {
            return self.block_best(bl);
        }
        let a = b0 + self.inner[bl][level - 1] as usize;
        let b = b0 + self.inner[br + 1 - (1 << level)][level - 1] as usize;
        self.pick(self.block_best(a), self.block_best(b), value)
    }

    fn blocks_between<T: PartialOrd, F: Fn(usize) -> T>(&self, bl: usize, br: usize, value: &F) -> usize {
        let (sl, sr) = (bl / BLOCKS_PER_SUPER, br / BLOCKS_PER_SUPER);
        if sl == sr {
            return self.blocks_within_super(bl, br, value);
        }
        let mut best = self.pick(
            self.blocks_within_super(bl, (sl + 1) * BLOCKS_PER_SUPER - 1, value),
            self.blocks_within_super(sr * BLOCKS_PER_SUPER, br, value),
            value,
        );
        if sl + 1 < sr {
            let (a, b) = (sl + 1, sr - 1);
            let k = (b - a + 1).ilog2() as usize;
            let mid = self.pick(self.outer[k][a], self.outer[k][b + 1 - (1 << k)], value);
            best = self.pick(best, mid, value);
        }
        best
    }

    /// Serialized size of this structure in bits.
    pub fn serialized_bits(&self) -> usize {
        let mut w = ByteWriter::new();
        self.write_to(&mut w);
        w.len() * 8
    }

    pub(crate) fn write_to(&self, w: &mut ByteWriter) {
        w.put_u64(self.n as u64);
        w.put_u8(match self.mode {
            RmqMode::Max => 0,
            RmqMode::Min => 1,
        });
        let sigs: Vec<u64> = self.sigs.iter().map(|&s| s as u64).collect();
        w.put_bytes(&IntVec::from_values_with_width(&sigs, SIG_BITS).to_bytes());
        for entry in &self.inner {
            w.put_bytes(entry);
        }
        let pw = pos_width(self.n);
        w.put_u8(self.outer.len() as u8);
        for level in &self.outer {
            for &p in level {
                w.put_uint(p as u64, pw);
            }
        }
    }

    pub(crate) fn read_from(r: &mut ByteReader<'_>) -> Result<Self> {
        let n = r.get_usize()?;
        let mode = match r.get_u8()? {
            0 => RmqMode::Max,
            1 => RmqMode::Min,
            other => return Err(Error::Format(format!("unknown range-query mode {other}"))),
        };
        let blocks = n.div_ceil(BLOCK);
        let sig_bytes = (blocks * SIG_BITS as usize).div_ceil(8);
        let packed = IntVec::from_bytes(r.take(sig_bytes)?, SIG_BITS, blocks)?;
        let sigs: Vec<u16> = packed.iter().map(|s| s as u16).collect();
        if sigs.iter().any(|&s| s as usize >= SHAPES) {
            return Err(Error::Format("block shape number out of range".into()));
        }
        let raw = r.take(blocks * INNER_LEVELS)?;
        let inner: Vec<[u8; INNER_LEVELS]> = raw
            .chunks(INNER_LEVELS)
            .map(|c| [c[0], c[1], c[2], c[3]])
            .collect();
        if inner.iter().flatten().any(|&v| v as usize >= BLOCKS_PER_SUPER) {
            return Err(Error::Format("inner sparse entry out of range".into()));
        }
        let supers = blocks.div_ceil(BLOCKS_PER_SUPER);
        let levels = r.get_u8()? as usize;
        let expected_levels = if supers == 0 { 1 } else { supers.ilog2() as usize + 1 };
        if levels != expected_levels {
            return Err(Error::Format(format!("{levels} sparse levels, expected {expected_levels}")));
        }
        let pw = pos_width(n);
        let mut outer = Vec::with_capacity(levels);
        for k in 0..levels {
            let count = if k == 0 { supers } else { supers + 1 - (1 << k) };
            let mut level = Vec::with_capacity(count);
            for _ in 0..count {
                let p = r.get_uint(pw)? as usize;
                if p >= n {
                    return Err(Error::Format("sparse entry outside array".into()));
                }
                level.push(p);
            }
            outer.push(level);
        }
        Ok(Rmq {
            n,
            mode,
            sigs,
            inner,
            outer,
        })
    }
}

#[inline]
fn strictly_better<T: PartialOrd>(mode: RmqMode, a: &T, b: &T) -> bool {
    match mode {
        RmqMode::Max => a > b,
        RmqMode::Min => a < b,
    }
}

/// Linear-scan reference answer.
pub fn naive_query<T: PartialOrd, F: Fn(usize) -> T>(mode: RmqMode, s: usize, t: usize, value: F) -> usize {
    let mut best = s;
    for i in s + 1..=t {
        if strictly_better(mode, &value(i), &value(best)) {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn ballot_numbers_give_catalan() {
        assert_eq!(ballot()[BLOCK][BLOCK] as usize, SHAPES);
        assert_eq!(ballot()[3][3], 5);
    }

    #[test]
    fn every_permutation_agrees_with_its_shape() {
        let table = shape_table();
        let mut perm: Vec<usize> = (0..BLOCK).collect();
        loop {
            let sig = signature(BLOCK, |i, j| perm[i] < perm[j]) as usize;
            assert!(sig < SHAPES);
            for l in 0..BLOCK {
                for r in l..BLOCK {
                    let want = naive_query(RmqMode::Min, l, r, |i| perm[i]);
                    assert_eq!(table[sig * 64 + l * 8 + r] as usize, want);
                }
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }

    #[test]
    fn small_examples() {
        let v = [0, 0, 0, 6, 0, 0, 0, 4, 0, 2];
        let rmq = Rmq::build(v.len(), RmqMode::Max, |i| v[i]);
        assert_eq!(naive_query(RmqMode::Max, 0, 9, |i| v[i]), 3);
        assert_eq!(rmq.query(0, 9, |i| v[i]).unwrap(), 3);
        assert_eq!(naive_query(RmqMode::Max, 4, 9, |i| v[i]), 7);
        assert_eq!(rmq.query(4, 9, |i| v[i]).unwrap(), 7);
        for s in 0..v.len() {
            assert_eq!(rmq.query(s, s, |i| v[i]).unwrap(), s);
        }
        assert!(rmq.query(5, 4, |i| v[i]).is_err());
        assert!(rmq.query(0, 10, |i| v[i]).is_err());
    }

    #[test]
    fn ties_go_to_smallest_index() {
        let v = vec![3i64; 1000];
        for mode in [RmqMode::Max, RmqMode::Min] {
            let rmq = Rmq::build(v.len(), mode, |i| v[i]);
            assert_eq!(rmq.query(17, 900, |i| v[i]).unwrap(), 17);
        }
    }

    #[test]
    fn random_arrays_match_linear_scan() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..60 {
            let n = rng.gen_range(1..3000);
            let range = rng.gen_range(1..50i64);
            let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-range..range)).collect();
            for mode in [RmqMode::Max, RmqMode::Min] {
                let rmq = Rmq::build(n, mode, |i| v[i]);
                for _ in 0..200 {
                    let s = rng.gen_range(0..n);
                    let t = rng.gen_range(s..n);
                    assert_eq!(
                        rmq.query(s, t, |i| v[i]).unwrap(),
                        naive_query(mode, s, t, |i| v[i]),
                        "n={n} {mode:?} [{s}, {t}]"
                    );
                }
            }
        }
    }

    #[test]
    fn serialization_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let n = 5000;
        let v: Vec<u32> = (0..n).map(|_| rng.gen_range(0..100)).collect();
        let rmq = Rmq::build(n, RmqMode::Min, |i| v[i]);
        let mut w = ByteWriter::new();
        rmq.write_to(&mut w);
        let bytes = w.into_inner();
        let mut r = ByteReader::new(&bytes);
        let back = Rmq::read_from(&mut r).unwrap();
        r.expect_end().unwrap();
        for _ in 0..500 {
            let s = rng.gen_range(0..n);
            let t = rng.gen_range(s..n);
            assert_eq!(back.query(s, t, |i| v[i]).unwrap(), rmq.query(s, t, |i| v[i]).unwrap());
        }
    }
}
