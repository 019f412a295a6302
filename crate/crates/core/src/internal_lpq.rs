//! Longest palindromic factor of any substring `w[i..=j]` in `O(log n)`.
//!
//! Everything runs on the doubled string, where `[i..=j]` becomes
//! `[2i..=2j+1]`. The answer is the maximum of three candidates: the longest
//! palindromic prefix, the longest palindromic suffix, and the longest
//! maximal palindrome whose center lies strictly between the prefix and
//! suffix centers. The prefix and suffix centers are found by binary search
//! with range-min/max queries over the start and end positions
//! `S[c] = c - MEPal[c]/2` and `E[c] = c + MEPal[c]/2 - 1`, which are read
//! off the center index and never stored.

use crate::error::{Error, Result};
use crate::format::{ByteReader, ByteWriter};
use crate::mepal_index::{
    decode_file, encode_file, IndexParams, PalIndex, RawFile, Section, SpaceReport, FLAG_LPQ, SEC_RMQ_END,
    SEC_RMQ_MEPAL, SEC_RMQ_START,
};
use crate::rmq::{Rmq, RmqMode};

#[derive(Clone, Debug)]
pub struct LpqIndex {
    pal: PalIndex,
    rmq_mepal: Rmq,
    rmq_end: Rmq,
    rmq_start: Rmq,
}

impl LpqIndex {
    /// Builds over `text`; the center index is always in general mode.
    pub fn build(text: &[u8], params: IndexParams) -> Result<Self> {
        let pal = PalIndex::build(
            text,
            IndexParams {
                general: true,
                ..params
            },
        )?;
        Ok(Self::over(pal))
    }

    pub fn from_index(pal: PalIndex) -> Result<Self> {
        if !pal.is_general() {
            return Err(Error::ModeMismatch("range queries need an index built in general mode"));
        }
        Ok(Self::over(pal))
    }

    fn over(pal: PalIndex) -> Self {
        let n = pal.n_centers();
        let rmq_mepal = Rmq::build(n, RmqMode::Max, |c| mepal(&pal, c));
        let rmq_end = Rmq::build(n, RmqMode::Max, |c| end(&pal, c));
        let rmq_start = Rmq::build(n, RmqMode::Min, |c| start(&pal, c));
        Self {
            pal,
            rmq_mepal,
            rmq_end,
            rmq_start,
        }
    }

    pub fn pal(&self) -> &PalIndex {
        &self.pal
    }

    pub fn n_original(&self) -> usize {
        self.pal.n_original()
    }

    #[inline]
    pub fn mepal(&self, c: usize) -> usize {
        mepal(&self.pal, c)
    }

    /// Last position of the maximal palindrome at `c`; `c - 1` when empty.
    #[inline]
    pub fn end(&self, c: usize) -> i64 {
        end(&self.pal, c)
    }

    /// First position of the maximal palindrome at `c`; `c` when empty.
    #[inline]
    pub fn start(&self, c: usize) -> i64 {
        start(&self.pal, c)
    }

    fn check_doubled(&self, i2: usize, j2: usize) -> Result<()> {
        let n = self.pal.n_centers();
        if i2 > j2 || j2 >= n || i2 % 2 != 0 || j2 % 2 != 1 {
            return Err(Error::InvalidRange {
                start: i2,
                end: j2,
                len: n,
            });
        }
        Ok(())
    }

    /// `(c_s, len)` for the longest palindromic suffix of `[i2..=j2]` of the
    /// doubled string; `c_s = j2 + 1` and `len = 0` when there is none.
    pub fn longest_suffix_pal(&self, i2: usize, j2: usize) -> Result<(usize, usize)> {
        self.check_doubled(i2, j2)?;
        let m = (i2 + j2 + 1) / 2;
        let target = j2 as i64;
        let reaches = |c: usize| -> Result<bool> {
            let best = self.rmq_end.query(m, c, |x| self.end(x))?;
            Ok(self.end(best) >= target)
        };
        if !reaches(j2)? {
            return Ok((j2 + 1, 0));
        }
        let (mut lo, mut hi) = (m, j2);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if reaches(mid)? {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok((lo, 2 * (j2 - lo + 1)))
    }

    /// `(c_p, len)` for the longest palindromic prefix of `[i2..=j2]`;
    /// `c_p = i2` and `len = 0` when there is none.
    pub fn longest_prefix_pal(&self, i2: usize, j2: usize) -> Result<(usize, usize)> {
        self.check_doubled(i2, j2)?;
        let m = (i2 + j2 + 1) / 2;
        let target = i2 as i64;
        let reaches = |c: usize| -> Result<bool> {
            let best = self.rmq_start.query(c, m, |x| self.start(x))?;
            Ok(self.start(best) <= target)
        };
        if !reaches(i2 + 1)? {
            return Ok((i2, 0));
        }
        let (mut lo, mut hi) = (i2 + 1, m);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if reaches(mid)? {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        Ok((lo, 2 * (lo - i2)))
    }

    /// Length of a longest palindrome occurring in `w[i..=j]`.
    pub fn internal_longest_pal(&self, i: usize, j: usize) -> Result<usize> {
        let n = self.n_original();
        if i > j || j >= n {
            return Err(Error::InvalidRange { start: i, end: j, len: n });
        }
        let (i2, j2) = (2 * i, 2 * j + 1);
        let (c_p, l_p) = self.longest_prefix_pal(i2, j2)?;
        let (c_s, l_s) = self.longest_suffix_pal(i2, j2)?;
        let l_m = if c_p + 1 < c_s {
            self.mepal(self.rmq_mepal.query(c_p + 1, c_s - 1, |x| self.mepal(x))?)
        } else {
            0
        };
        Ok(l_p.max(l_s).max(l_m) / 2)
    }

    pub(crate) fn sections(&self) -> Vec<Section> {
        let mut sections = self.pal.sections();
        for (kind, rmq) in [
            (SEC_RMQ_MEPAL, &self.rmq_mepal),
            (SEC_RMQ_END, &self.rmq_end),
            (SEC_RMQ_START, &self.rmq_start),
        ] {
            let mut w = ByteWriter::new();
            rmq.write_to(&mut w);
            sections.push(Section::bytes(kind, w.into_inner()));
        }
        sections
    }

    pub fn serialize(&self) -> Vec<u8> {
        encode_file(&self.pal, self.pal.flags() | FLAG_LPQ, &self.sections())
    }

    pub fn deserialize(bytes: &[u8]) -> Result<Self> {
        Self::from_raw(&decode_file(bytes)?)
    }

    pub(crate) fn from_raw(raw: &RawFile<'_>) -> Result<Self> {
        if raw.flags & FLAG_LPQ == 0 {
            return Err(Error::ModeMismatch("file holds no range-query structures"));
        }
        let pal = PalIndex::from_raw(raw)?;
        if !pal.is_general() {
            return Err(Error::Format("range-query file without general mode".into()));
        }
        let n = pal.n_centers();
        let read = |kind: u8, mode: RmqMode| -> Result<Rmq> {
            let sec = raw.section(kind)?;
            let mut r = ByteReader::new(sec.payload);
            let rmq = Rmq::read_from(&mut r)?;
            r.expect_end()?;
            if rmq.len() != n || rmq.mode() != mode {
                return Err(Error::Format(format!("range-query section {kind} does not match the index")));
            }
            Ok(rmq)
        };
        Ok(Self {
            rmq_mepal: read(SEC_RMQ_MEPAL, RmqMode::Max)?,
            rmq_end: read(SEC_RMQ_END, RmqMode::Max)?,
            rmq_start: read(SEC_RMQ_START, RmqMode::Min)?,
            pal,
        })
    }

    pub fn space_report(&self) -> SpaceReport {
        SpaceReport::from_sections(self.pal.n_original(), self.pal.tau(), &self.sections())
    }
}

// Centers handed to these come from range queries bounded by `n_centers`,
// and deserialization checks every center answers, so a failure here is a
// broken invariant.
#[inline]
fn mepal(pal: &PalIndex, c: usize) -> usize {
    pal.query(c).expect("center inside the indexed string")
}

#[inline]
fn end(pal: &PalIndex, c: usize) -> i64 {
    c as i64 + (mepal(pal, c) / 2) as i64 - 1
}

#[inline]
fn start(pal: &PalIndex, c: usize) -> i64 {
    c as i64 - (mepal(pal, c) / 2) as i64
}
