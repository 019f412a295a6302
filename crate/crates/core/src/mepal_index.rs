//! The maximal-palindrome index: build pipeline, constant-time center
//! queries, odd/even center queries through the doubled string, the index
//! file format and the space audit.
//!
//! A query at center `c` goes to the long index when `LS[c] = 1` and to the
//! short index otherwise. Inputs shorter than 64 symbols (after doubling)
//! keep a plain array instead; the block machinery needs `4 tau <= n`.

use serde::{Deserialize, Serialize};

use crate::bits::{bit_width, BitVec, IntVec};
use crate::error::{Error, Result};
use crate::format::{pos_width, ByteReader, ByteWriter};
use crate::lepal_encoding::WindowKey;
use crate::long_index::{build_long, BlockRecord, LongIndex, LongPal};
use crate::pal_core::{double, manacher_even, normalize, pad_to_multiple, MaxPalArray};
use crate::short_index::{build_short, PackedShort, ShortIndex, ShortMode, WindowTable};

pub const MAGIC: &[u8; 4] = b"MPL1";
pub const VERSION: u8 = 1;
pub const FALLBACK_LEN: usize = 64;

pub(crate) const FLAG_GENERAL: u8 = 1;
pub(crate) const FLAG_PACKED: u8 = 1 << 1;
pub(crate) const FLAG_PLAIN: u8 = 1 << 2;
pub(crate) const FLAG_LPQ: u8 = 1 << 3;

pub(crate) const SEC_LS: u8 = 1;
pub(crate) const SEC_BLOCKS: u8 = 2;
pub(crate) const SEC_SHORT: u8 = 3;
pub(crate) const SEC_PLAIN: u8 = 4;
pub(crate) const SEC_RMQ_MEPAL: u8 = 5;
pub(crate) const SEC_RMQ_END: u8 = 6;
pub(crate) const SEC_RMQ_START: u8 = 7;

const HEADER_BYTES: usize = 4 + 1 + 1 + 4 + 8 + 8 + 4;
const ENTRY_BYTES: usize = 1 + 8 + 8;
const CHECKSUM_BYTES: usize = 4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexParams {
    /// Block parameter; `None` picks [`default_tau`].
    pub tau: Option<usize>,
    pub short_mode: ShortMode,
    /// Index the doubled string so odd palindromes are answerable too.
    pub general: bool,
}

/// `max(1, floor(log2(n) / 16))`.
pub fn default_tau(n: usize) -> usize {
    if n < 2 {
        return 1;
    }
    (n.ilog2() as usize / 16).max(1)
}

#[derive(Clone, Debug)]
enum Repr {
    Plain(MaxPalArray),
    Succinct { long: LongIndex, short: ShortIndex },
}

#[derive(Clone, Debug)]
pub struct PalIndex {
    tau: usize,
    n_original: usize,
    n_padded: usize,
    general: bool,
    short_mode: ShortMode,
    repr: Repr,
}

impl PalIndex {
    pub fn build(text: &[u8], params: IndexParams) -> Result<Self> {
        let base = normalize(text);
        let processed = if params.general { double(&base) } else { base };
        let n = processed.len();

        if n < FALLBACK_LEN {
            return Ok(Self {
                tau: 0,
                n_original: text.len(),
                n_padded: n,
                general: params.general,
                short_mode: params.short_mode,
                repr: Repr::Plain(manacher_even(processed.as_slice())),
            });
        }

        let tau = params.tau.unwrap_or_else(|| default_tau(n));
        if tau == 0 {
            return Err(Error::InvalidTau {
                tau,
                len: n,
                reason: "tau must be at least 1",
            });
        }
        let padded = pad_to_multiple(&processed, 2 * tau);
        if 4 * tau > padded.len() {
            return Err(Error::InvalidTau {
                tau,
                len: padded.len(),
                reason: "need tau <= n/4",
            });
        }
        let m = manacher_even(padded.as_slice());
        let long = build_long(padded.as_slice(), &m, tau)?;
        let short = build_short(padded.as_slice(), &m, tau, params.short_mode)?;
        Ok(Self {
            tau,
            n_original: text.len(),
            n_padded: padded.len(),
            general: params.general,
            short_mode: params.short_mode,
            repr: Repr::Succinct { long, short },
        })
    }

    /// Block parameter; 0 for the plain fallback.
    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn n_original(&self) -> usize {
        self.n_original
    }

    /// Number of queryable centers: the text length, doubled in general mode.
    pub fn n_centers(&self) -> usize {
        if self.general {
            2 * self.n_original
        } else {
            self.n_original
        }
    }

    pub fn n_padded(&self) -> usize {
        self.n_padded
    }

    pub fn is_general(&self) -> bool {
        self.general
    }

    pub fn short_mode(&self) -> ShortMode {
        self.short_mode
    }

    pub fn is_fallback(&self) -> bool {
        matches!(self.repr, Repr::Plain(_))
    }

    pub fn long(&self) -> Option<&LongIndex> {
        match &self.repr {
            Repr::Succinct { long, .. } => Some(long),
            Repr::Plain(_) => None,
        }
    }

    pub fn short(&self) -> Option<&ShortIndex> {
        match &self.repr {
            Repr::Succinct { short, .. } => Some(short),
            Repr::Plain(_) => None,
        }
    }

    /// Maximal even palindrome length at center `c` of the indexed string
    /// (the doubled one in general mode).
    #[inline]
    pub fn query(&self, c: usize) -> Result<usize> {
        if c >= self.n_centers() {
            return Err(Error::OutOfRange {
                what: "center",
                value: c,
                limit: self.n_centers(),
            });
        }
        match &self.repr {
            Repr::Plain(m) => Ok(m.get(c)),
            Repr::Succinct { long, short } => {
                if long.is_long(c) {
                    long.query(c)
                } else {
                    short.query(c)
                }
            }
        }
    }

    /// Length of the maximal palindrome `w[i..=j]` with `i + j = c'`.
    pub fn pal_center_query(&self, c_prime: usize) -> Result<usize> {
        if !self.general {
            return Err(Error::ModeMismatch("odd/even center queries need an index built in general mode"));
        }
        let limit = (2 * self.n_original).saturating_sub(1);
        if c_prime >= limit {
            return Err(Error::OutOfRange {
                what: "palindrome center",
                value: c_prime,
                limit,
            });
        }
        Ok(self.query(c_prime + 1)? / 2)
    }

    pub(crate) fn flags(&self) -> u8 {
        let mut f = 0;
        if self.general {
            f |= FLAG_GENERAL;
        }
        if self.short_mode == ShortMode::Packed {
            f |= FLAG_PACKED;
        }
        if self.is_fallback() {
            f |= FLAG_PLAIN;
        }
        f
    }

    pub(crate) fn sections(&self) -> Vec<Section> {
        match &self.repr {
            Repr::Plain(m) => {
                let width = bit_width(self.n_padded as u64);
                let values: Vec<u64> = m.values().iter().map(|&v| v as u64).collect();
                let iv = IntVec::from_values_with_width(&values, width);
                vec![Section::packed(SEC_PLAIN, iv.to_bytes(), iv.bit_len())]
            }
            Repr::Succinct { long, short } => vec![
                Section::packed(SEC_LS, long.ls().to_bytes(), long.len()),
                Section::bytes(SEC_BLOCKS, encode_blocks(long, self.n_padded)),
                encode_short(short),
            ],
        }
    }

    pub fn serialize(&self) -> Vec<u8> {
        encode_file(self, self.flags(), &self.sections())
    }

    pub fn deserialize(bytes: &[u8]) -> Result<Self> {
        Self::from_raw(&decode_file(bytes)?)
    }

    pub(crate) fn from_raw(raw: &RawFile<'_>) -> Result<Self> {
        let general = raw.flags & FLAG_GENERAL != 0;
        let short_mode = if raw.flags & FLAG_PACKED != 0 {
            ShortMode::Packed
        } else {
            ShortMode::Table
        };
        let n_centers = if general { 2 * raw.n_original } else { raw.n_original };
        let n = raw.n_padded;

        let repr = if raw.flags & FLAG_PLAIN != 0 {
            if n != n_centers || n >= FALLBACK_LEN || raw.tau != 0 {
                return Err(Error::Format("plain fallback header is inconsistent".into()));
            }
            let sec = raw.section(SEC_PLAIN)?;
            let iv = IntVec::from_bytes(sec.payload, bit_width(n as u64), n)?;
            Repr::Plain(MaxPalArray::new(iv.iter().map(|v| v as usize).collect())?)
        } else {
            let tau = raw.tau;
            if n < n_centers || n < FALLBACK_LEN || tau == 0 || n % (2 * tau) != 0 || n - n_centers >= 2 * tau {
                return Err(Error::Format("padded length does not fit tau and text length".into()));
            }
            let ls_sec = raw.section(SEC_LS)?;
            if ls_sec.bits != n {
                return Err(Error::Format("LS section length differs from padded length".into()));
            }
            let ls = BitVec::from_bytes(ls_sec.payload, n)?;
            let records = decode_blocks(raw.section(SEC_BLOCKS)?.payload, n, tau)?;
            let long = LongIndex::from_parts(tau, ls, records)?;
            let short = decode_short(raw.section(SEC_SHORT)?, short_mode, tau, n)?;
            Repr::Succinct { long, short }
        };

        let idx = Self {
            tau: raw.tau,
            n_original: raw.n_original,
            n_padded: n,
            general,
            short_mode,
            repr,
        };
        for c in 0..idx.n_centers() {
            idx.query(c)?;
        }
        Ok(idx)
    }

    pub fn space_report(&self) -> SpaceReport {
        SpaceReport::from_sections(self.n_original, self.tau, &self.sections())
    }
}

/// One payload of the index file with its exact size in bits.
#[derive(Clone, Debug)]
pub(crate) struct Section {
    pub kind: u8,
    pub bits: usize,
    pub payload: Vec<u8>,
}

impl Section {
    pub(crate) fn packed(kind: u8, payload: Vec<u8>, bits: usize) -> Self {
        debug_assert_eq!(payload.len(), bits.div_ceil(8));
        Self { kind, bits, payload }
    }

    pub(crate) fn bytes(kind: u8, payload: Vec<u8>) -> Self {
        Self {
            kind,
            bits: payload.len() * 8,
            payload,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct RawSection<'a> {
    pub kind: u8,
    pub bits: usize,
    pub payload: &'a [u8],
}

#[derive(Clone, Debug)]
pub(crate) struct RawFile<'a> {
    pub flags: u8,
    pub tau: usize,
    pub n_original: usize,
    pub n_padded: usize,
    pub sections: Vec<RawSection<'a>>,
}

impl<'a> RawFile<'a> {
    pub(crate) fn section(&self, kind: u8) -> Result<RawSection<'a>> {
        let mut found = self.sections.iter().filter(|s| s.kind == kind);
        let sec = found
            .next()
            .copied()
            .ok_or_else(|| Error::Format(format!("missing section {kind}")))?;
        if found.next().is_some() {
            return Err(Error::Format(format!("duplicate section {kind}")));
        }
        Ok(sec)
    }
}

pub(crate) fn encode_file(idx: &PalIndex, flags: u8, sections: &[Section]) -> Vec<u8> {
    let mut w = ByteWriter::new();
    w.put_bytes(MAGIC);
    w.put_u8(VERSION);
    w.put_u8(flags);
    w.put_u32(idx.tau as u32);
    w.put_u64(idx.n_original as u64);
    w.put_u64(idx.n_padded as u64);
    w.put_u32(sections.len() as u32);
    let mut offset = HEADER_BYTES + ENTRY_BYTES * sections.len();
    for s in sections {
        w.put_u8(s.kind);
        w.put_u64(offset as u64);
        w.put_u64(s.bits as u64);
        offset += s.payload.len();
    }
    for s in sections {
        w.put_bytes(&s.payload);
    }
    let crc = crc32fast::hash(w.as_slice());
    w.put_u32(crc);
    w.into_inner()
}

pub(crate) fn decode_file(bytes: &[u8]) -> Result<RawFile<'_>> {
    if bytes.len() < MAGIC.len() || &bytes[..4] != MAGIC {
        return Err(Error::BadMagic);
    }
    if bytes.len() < 5 {
        return Err(Error::Truncated("header"));
    }
    if bytes[4] != VERSION {
        return Err(Error::UnsupportedVersion(bytes[4]));
    }
    if bytes.len() < HEADER_BYTES + CHECKSUM_BYTES {
        return Err(Error::Truncated("header"));
    }
    let body = &bytes[..bytes.len() - CHECKSUM_BYTES];
    let stored = u32::from_le_bytes(bytes[body.len()..].try_into().unwrap());
    let computed = crc32fast::hash(body);
    if stored != computed {
        return Err(Error::Checksum { stored, computed });
    }

    let mut r = ByteReader::new(&body[5..]);
    let flags = r.get_u8()?;
    if flags & !(FLAG_GENERAL | FLAG_PACKED | FLAG_PLAIN | FLAG_LPQ) != 0 {
        return Err(Error::Format(format!("unknown flag bits {flags:#04x}")));
    }
    let tau = r.get_u32()? as usize;
    let n_original = r.get_usize()?;
    let n_padded = r.get_usize()?;
    let count = r.get_u32()? as usize;
    if count > 64 {
        return Err(Error::Format(format!("{count} sections")));
    }
    let mut sections = Vec::with_capacity(count);
    for _ in 0..count {
        let kind = r.get_u8()?;
        let offset = r.get_usize()?;
        let bits = r.get_usize()?;
        let len = bits.div_ceil(8);
        let end = offset.checked_add(len).ok_or(Error::Truncated("section table"))?;
        if offset < HEADER_BYTES + ENTRY_BYTES * count || end > body.len() {
            return Err(Error::Truncated("section extends past the end of the file"));
        }
        sections.push(RawSection {
            kind,
            bits,
            payload: &body[offset..end],
        });
    }
    Ok(RawFile {
        flags,
        tau,
        n_original,
        n_padded,
        sections,
    })
}

fn encode_blocks(long: &LongIndex, n: usize) -> Vec<u8> {
    let pw = pos_width(n);
    let mut w = ByteWriter::new();
    let recs = long.record_slice();
    w.put_u64(recs.len() as u64);
    for rec in recs {
        match *rec {
            BlockRecord::Empty => unreachable!("empty blocks are not stored"),
            BlockRecord::Explicit { first, second } => {
                w.put_u8(if second.is_some() { 2 } else { 1 });
                for p in std::iter::once(first).chain(second) {
                    w.put_uint(p.center as u64, pw);
                    w.put_uint(p.len as u64, pw);
                }
            }
            BlockRecord::Run { e_l, e_r, exception } => {
                w.put_u8(if exception.is_some() { 4 } else { 3 });
                w.put_uint(e_l as u64, pw);
                w.put_uint(e_r as u64, pw);
                if let Some(p) = exception {
                    w.put_uint(p.center as u64, pw);
                    w.put_uint(p.len as u64, pw);
                }
            }
        }
    }
    w.into_inner()
}

fn decode_blocks(bytes: &[u8], n: usize, tau: usize) -> Result<Vec<BlockRecord>> {
    let pw = pos_width(n);
    let mut r = ByteReader::new(bytes);
    let count = r.get_usize()?;
    if count > n / tau {
        return Err(Error::Format(format!("{count} block records for {} blocks", n / tau)));
    }
    let pos = |r: &mut ByteReader<'_>| -> Result<usize> {
        let v = r.get_uint(pw)? as usize;
        if v > n {
            return Err(Error::Format(format!("position {v} past padded length {n}")));
        }
        Ok(v)
    };
    let mut records = Vec::with_capacity(count);
    for _ in 0..count {
        let rec = match r.get_u8()? {
            tag @ (1 | 2) => {
                let first = LongPal {
                    center: pos(&mut r)?,
                    len: pos(&mut r)?,
                };
                let second = if tag == 2 {
                    Some(LongPal {
                        center: pos(&mut r)?,
                        len: pos(&mut r)?,
                    })
                } else {
                    None
                };
                BlockRecord::Explicit { first, second }
            }
            tag @ (3 | 4) => {
                let e_l = pos(&mut r)?;
                let e_r = pos(&mut r)?;
                let exception = if tag == 4 {
                    Some(LongPal {
                        center: pos(&mut r)?,
                        len: pos(&mut r)?,
                    })
                } else {
                    None
                };
                BlockRecord::Run { e_l, e_r, exception }
            }
            other => return Err(Error::Format(format!("unknown block record tag {other}"))),
        };
        records.push(rec);
    }
    r.expect_end()?;
    Ok(records)
}

fn encode_short(short: &ShortIndex) -> Section {
    match short {
        ShortIndex::Packed(p) => Section::packed(SEC_SHORT, p.lengths().to_bytes(), p.lengths().bit_len()),
        ShortIndex::Table(t) => {
            let mut w = ByteWriter::new();
            w.put_u32(t.keys().len() as u32);
            for k in t.keys() {
                w.put_u128(k.raw());
            }
            w.put_bytes(&t.lengths().to_bytes());
            w.put_u8(t.slots().width() as u8);
            w.put_bytes(&t.slots().to_bytes());
            Section::bytes(SEC_SHORT, w.into_inner())
        }
    }
}

fn decode_short(sec: RawSection<'_>, mode: ShortMode, tau: usize, n: usize) -> Result<ShortIndex> {
    match mode {
        ShortMode::Packed => {
            let width = bit_width(2 * tau as u64);
            if sec.bits != n * width as usize {
                return Err(Error::Format("packed short section has the wrong size".into()));
            }
            let lengths = IntVec::from_bytes(sec.payload, width, n)?;
            Ok(ShortIndex::Packed(PackedShort::from_parts(tau, lengths)))
        }
        ShortMode::Table => {
            let mut r = ByteReader::new(sec.payload);
            let count = r.get_u32()? as usize;
            if count > n {
                return Err(Error::Format(format!("{count} window keys for length {n}")));
            }
            let mut keys = Vec::with_capacity(count);
            for _ in 0..count {
                keys.push(WindowKey::from_raw(r.get_u128()?, tau)?);
            }
            let width = bit_width(4 * tau as u64);
            let len = count * 4 * tau;
            let lengths = IntVec::from_bytes(r.take((len * width as usize).div_ceil(8))?, width, len)?;
            let slot_width = r.get_u8()? as u32;
            if slot_width > 32 {
                return Err(Error::Format(format!("slot width {slot_width}")));
            }
            let windows = n / (2 * tau) - 1;
            let slots = IntVec::from_bytes(
                r.take((windows * slot_width as usize).div_ceil(8))?,
                slot_width,
                windows,
            )?;
            r.expect_end()?;
            Ok(ShortIndex::Table(WindowTable::from_parts(tau, n, keys, lengths, slots)?))
        }
    }
}

/// Bits used by each part of a serialized index. `total_bits` is the sum
/// of all section sizes; the fixed header, section table and checksum are
/// reported separately in `header_bits`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SpaceReport {
    pub n_original: usize,
    pub tau: usize,
    pub ls_bits: usize,
    pub block_bits: usize,
    pub short_bits: usize,
    pub plain_bits: usize,
    pub rmq_bits: usize,
    pub header_bits: usize,
    pub total_bits: usize,
    pub bits_per_symbol: f64,
}

impl SpaceReport {
    pub(crate) fn from_sections(n_original: usize, tau: usize, sections: &[Section]) -> Self {
        let raw: Vec<RawSection<'_>> = sections
            .iter()
            .map(|s| RawSection {
                kind: s.kind,
                bits: s.bits,
                payload: &s.payload,
            })
            .collect();
        Self::tally(n_original, tau, &raw)
    }

    fn tally(n_original: usize, tau: usize, sections: &[RawSection<'_>]) -> Self {
        let mut r = SpaceReport {
            n_original,
            tau,
            header_bits: 8 * (HEADER_BYTES + ENTRY_BYTES * sections.len() + CHECKSUM_BYTES),
            ..Default::default()
        };
        for s in sections {
            let slot = match s.kind {
                SEC_LS => &mut r.ls_bits,
                SEC_BLOCKS => &mut r.block_bits,
                SEC_SHORT => &mut r.short_bits,
                SEC_PLAIN => &mut r.plain_bits,
                _ => &mut r.rmq_bits,
            };
            *slot += s.bits;
            r.total_bits += s.bits;
        }
        r.bits_per_symbol = if n_original == 0 {
            0.0
        } else {
            r.total_bits as f64 / n_original as f64
        };
        r
    }

    /// Reads the breakdown straight from an index file.
    pub fn from_file(bytes: &[u8]) -> Result<Self> {
        let raw = decode_file(bytes)?;
        Ok(Self::tally(raw.n_original, raw.tau, &raw.sections))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pal_core::{brute_general, brute_mepal_even};

    const SAMPLE: &[u8] = b"abccbabbaa";

    #[test]
    fn tiny_inputs_use_the_plain_array() {
        let idx = PalIndex::build(SAMPLE, IndexParams::default()).unwrap();
        assert!(idx.is_fallback());
        let got: Vec<usize> = (0..10).map(|c| idx.query(c).unwrap()).collect();
        assert_eq!(got, [0, 0, 0, 6, 0, 0, 0, 4, 0, 2]);
        assert!(idx.query(10).is_err());

        let empty = PalIndex::build(b"", IndexParams::default()).unwrap();
        assert_eq!(empty.n_centers(), 0);
        assert!(empty.query(0).is_err());
    }

    #[test]
    fn sample_string_with_block_machinery() {
        // sixteen copies keep every center's answer checkable with tau = 2
        let text = SAMPLE.repeat(16);
        let params = IndexParams {
            tau: Some(2),
            ..Default::default()
        };
        let idx = PalIndex::build(&text, params).unwrap();
        assert!(!idx.is_fallback());
        let m = brute_mepal_even(&text);
        for c in 0..text.len() {
            assert_eq!(idx.query(c).unwrap(), m.get(c), "c={c}");
        }
        assert_eq!(idx.query(3).unwrap(), 6);
        assert_eq!(idx.query(7).unwrap(), 4);
        assert_eq!(idx.query(0).unwrap(), 0);
    }

    #[test]
    fn general_mode_answers_odd_centers() {
        for text in [SAMPLE.to_vec(), SAMPLE.repeat(9)] {
            let idx = PalIndex::build(
                &text,
                IndexParams {
                    general: true,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(idx.n_centers(), 2 * text.len());
            let want = brute_general(&text);
            for (c, &len) in want.iter().enumerate() {
                assert_eq!(idx.pal_center_query(c).unwrap(), len, "c'={c}");
            }
            assert_eq!(idx.pal_center_query(5).unwrap(), 6);
            assert_eq!(idx.pal_center_query(13).unwrap(), 4);
            assert_eq!(idx.pal_center_query(0).unwrap(), 1);
            assert!(idx.pal_center_query(want.len()).is_err());
        }
        let even = PalIndex::build(SAMPLE, IndexParams::default()).unwrap();
        assert!(matches!(even.pal_center_query(0), Err(Error::ModeMismatch(_))));
    }

    #[test]
    fn tau_bounds() {
        let text = vec![b'a'; 100];
        let bad = IndexParams {
            tau: Some(50),
            short_mode: ShortMode::Packed,
            ..Default::default()
        };
        assert!(matches!(PalIndex::build(&text, bad), Err(Error::InvalidTau { .. })));
        let zero = IndexParams {
            tau: Some(0),
            ..Default::default()
        };
        assert!(PalIndex::build(&text, zero).is_err());
        // fallback sizes accept any tau
        assert!(PalIndex::build(b"abc", zero).is_ok());
        assert_eq!(default_tau(1 << 20), 1);
        assert_eq!(default_tau(1 << 33), 2);
    }

    #[test]
    fn round_trip_and_format_errors() {
        let text: Vec<u8> = b"abaababaabaababaababa".repeat(12);
        for short_mode in [ShortMode::Table, ShortMode::Packed] {
            for general in [false, true] {
                let params = IndexParams {
                    tau: Some(3),
                    short_mode,
                    general,
                };
                let idx = PalIndex::build(&text, params).unwrap();
                let bytes = idx.serialize();
                assert_eq!(bytes, PalIndex::build(&text, params).unwrap().serialize());
                let back = PalIndex::deserialize(&bytes).unwrap();
                for c in 0..idx.n_centers() {
                    assert_eq!(back.query(c).unwrap(), idx.query(c).unwrap());
                }
                let report = idx.space_report();
                assert_eq!(report, SpaceReport::from_file(&bytes).unwrap());
                assert_eq!(report.ls_bits, idx.n_padded());
                let payload_bytes: usize = idx.sections().iter().map(|s| s.bits.div_ceil(8)).sum();
                assert_eq!(bytes.len() * 8, report.header_bits + payload_bytes * 8);
                if short_mode == ShortMode::Packed {
                    assert_eq!(report.short_bits, idx.n_padded() * bit_width(6) as usize);
                }
            }
        }

        let bytes = PalIndex::build(&text, IndexParams::default()).unwrap().serialize();
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert_eq!(PalIndex::deserialize(&bad).unwrap_err(), Error::BadMagic);
        let mut bad = bytes.clone();
        bad[4] = VERSION + 1;
        assert_eq!(PalIndex::deserialize(&bad).unwrap_err(), Error::UnsupportedVersion(VERSION + 1));
        let mut bad = bytes.clone();
        let mid = bytes.len() / 2;
        bad[mid] ^= 0x10;
        assert!(matches!(PalIndex::deserialize(&bad), Err(Error::Checksum { .. })));
        assert!(PalIndex::deserialize(&bytes[..bytes.len() - 7]).is_err());
        assert!(matches!(PalIndex::deserialize(&bytes[..10]), Err(Error::Truncated(_))));
    }
}
