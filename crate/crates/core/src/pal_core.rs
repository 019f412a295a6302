//! Symbol strings, the doubling and padding transforms, even-center Manacher,
//! brute-force oracles, and the conversions between the maximal
//! even-palindrome array and the longest even-palindromic-suffix array.
//!
//! Centers follow the "first position of the right half" convention: the even
//! palindrome `w[c - r .. c + r - 1]` has center `c` and radius `r`.

use crate::error::{Error, Result};

pub type Symbol = u32;

/// Sentinel code for byte input: one past the largest byte value.
pub const BYTE_SENTINEL: Symbol = 256;

/// A string over integer symbol codes, optionally padded with a sentinel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolString {
    symbols: Vec<Symbol>,
    original_len: usize,
    sentinel: Symbol,
}

impl SymbolString {
    /// Wraps raw codes; every code must be below `sentinel`.
    pub fn from_codes(symbols: Vec<Symbol>, sentinel: Symbol) -> Result<Self> {
        if let Some(pos) = symbols.iter().position(|&s| s >= sentinel) {
            return Err(Error::Malformed(format!(
                "symbol {} at {pos} is not below sentinel {sentinel}",
                symbols[pos]
            )));
        }
        let original_len = symbols.len();
        Ok(Self {
            symbols,
            original_len,
            sentinel,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Length before padding.
    #[inline]
    pub fn original_len(&self) -> usize {
        self.original_len
    }

    #[inline]
    pub fn sentinel(&self) -> Symbol {
        self.sentinel
    }

    #[inline]
    pub fn as_slice(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }
}

impl AsRef<[Symbol]> for SymbolString {
    fn as_ref(&self) -> &[Symbol] {
        &self.symbols
    }
}

pub fn normalize(text: &[u8]) -> SymbolString {
    SymbolString {
        symbols: text.iter().map(|&b| Symbol::from(b)).collect(),
        original_len: text.len(),
        sentinel: BYTE_SENTINEL,
    }
}

/// `w[0] w[0] w[1] w[1] ...`: odd palindromes of `w` become even ones here.
pub fn double(w: &SymbolString) -> SymbolString {
    SymbolString {
        symbols: w.symbols.iter().flat_map(|&s| [s, s]).collect(),
        original_len: 2 * w.original_len,
        sentinel: w.sentinel,
    }
}

/// Appends sentinels up to the next multiple of `block`.
pub fn pad_to_multiple(w: &SymbolString, block: usize) -> SymbolString {
    assert!(block >= 1, "block must be positive");
    let target = w.len().next_multiple_of(block);
    let mut symbols = Vec::with_capacity(target);
    symbols.extend_from_slice(&w.symbols);
    symbols.resize(target, w.sentinel);
    SymbolString {
        symbols,
        original_len: w.original_len,
        sentinel: w.sentinel,
    }
}

/// Lengths of the maximal even palindromes, one per center.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MaxPalArray(Vec<usize>);

impl MaxPalArray {
    /// Checks parity and span containment; maximality needs the string and is
    /// not checked here.
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        for (c, &len) in values.iter().enumerate() {
            if len % 2 != 0 {
                return Err(Error::Malformed(format!("odd length {len} at center {c}")));
            }
            let r = len / 2;
            if r > c || c + r > n {
                return Err(Error::Malformed(format!(
                    "palindrome of length {len} at center {c} leaves [0, {n})"
                )));
            }
        }
        Ok(Self(values))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, c: usize) -> usize {
        self.0[c]
    }

    #[inline]
    pub fn radius(&self, c: usize) -> usize {
        self.0[c] / 2
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn into_values(self) -> Vec<usize> {
        self.0
    }
}

/// Per end position, the length of the longest even palindromic suffix.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LongestSuffixPalArray(Vec<usize>);

impl LongestSuffixPalArray {
    /// Checks parity, `values[j] <= j + 1` and the `+2` step bound.
    pub fn new(values: Vec<usize>) -> Result<Self> {
        for (j, &len) in values.iter().enumerate() {
            if len % 2 != 0 || len > j + 1 {
                return Err(Error::Malformed(format!("invalid suffix length {len} at {j}")));
            }
            if j > 0 && len > values[j - 1] + 2 {
                return Err(Error::Malformed(format!(
                    "suffix length jumps from {} to {len} at {j}",
                    values[j - 1]
                )));
            }
        }
        Ok(Self(values))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, j: usize) -> usize {
        self.0[j]
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn into_values(self) -> Vec<usize> {
        self.0
    }
}

/// Manacher's algorithm restricted to even centers. Linear in `w.len()`.
pub fn manacher_even<T: Eq>(w: &[T]) -> MaxPalArray {
    let n = w.len();
    let mut rad = vec![0usize; n];
    // [lo, hi) is the span of the palindrome reaching furthest right so far
    let (mut lo, mut hi) = (0usize, 0usize);
    for c in 0..n {
        let mut k = if c < hi {
            rad[lo + hi - c].min(hi - c)
        } else {
            0
        };
        while c + k < n && k < c && w[c + k] == w[c - k - 1] {
            k += 1;
        }
        rad[c] = k;
        if c + k > hi {
            lo = c - k;
            hi = c + k;
        }
    }
    MaxPalArray(rad.into_iter().map(|r| 2 * r).collect())
}

/// Quadratic center expansion; the testing oracle for [`manacher_even`].
pub fn brute_mepal_even<T: Eq>(w: &[T]) -> MaxPalArray {
    let n = w.len();
    let values = (0..n)
        .map(|c| {
            let mut r = 0;
            while r < c && c + r < n && w[c - r - 1] == w[c + r] {
                r += 1;
            }
            2 * r
        })
        .collect();
    MaxPalArray(values)
}

/// For each `c' in [0, 2n - 1)`, the length of the maximal palindrome
/// `w[i..j]` with `i + j = c'`, by direct expansion.
pub fn brute_general<T: Eq>(w: &[T]) -> Vec<usize> {
    let n = w.len();
    if n == 0 {
        return Vec::new();
    }
    (0..2 * n - 1)
        .map(|cp| {
            // innermost pair (i, j) with i + j = cp
            let (mut i, mut j) = (cp / 2, cp.div_ceil(2));
            if i != j && w[i] != w[j] {
                return 0;
            }
            while i > 0 && j + 1 < n && w[i - 1] == w[j + 1] {
                i -= 1;
                j += 1;
            }
            j - i + 1
        })
        .collect()
}

/// Length of a longest palindromic factor of `w`, by center expansion with
/// pruning. Quadratic in the worst case; an oracle, not a fast path.
pub fn brute_longest_pal_factor<T: Eq>(w: &[T]) -> usize {
    let n = w.len();
    if n == 0 {
        return 0;
    }
    // visit centers by decreasing potential so the search can stop early
    let mut centers: Vec<usize> = (0..2 * n - 1).collect();
    let potential = |cp: usize| {
        let (i, j) = (cp / 2, cp.div_ceil(2));
        2 * i.min(n - 1 - j) + (j - i) + 1
    };
    centers.sort_by_key(|&cp| std::cmp::Reverse(potential(cp)));
    let mut best = 0;
    for cp in centers {
        if potential(cp) <= best {
            break;
        }
        let (mut i, mut j) = (cp / 2, cp.div_ceil(2));
        if i != j && w[i] != w[j] {
            continue;
        }
        while i > 0 && j + 1 < n && w[i - 1] == w[j + 1] {
            i -= 1;
            j += 1;
        }
        best = best.max(j - i + 1);
    }
    best
}

/// Linear-time conversion using the non-decreasing sequence of suffix centers.
pub fn mepal_to_lepal(m: &MaxPalArray) -> LongestSuffixPalArray {
    let n = m.len();
    let mut out = Vec::with_capacity(n);
    let mut c = 0usize;
    for j in 0..n {
        // a center that cannot reach j cannot reach anything later either
        while c <= j && c + m.radius(c) <= j {
            c += 1;
        }
        out.push(if c <= j { 2 * (j - c + 1) } else { 0 });
    }
    LongestSuffixPalArray(out)
}

/// Inverse of [`mepal_to_lepal`], in linear time.
///
/// Runs a Manacher-style sweep over centers. Mirror information decides a
/// radius whenever it can; when the palindrome at `c` may extend past the
/// rightmost end seen so far, its true end is the last position whose longest
/// suffix palindrome is centered at `c`. The result is checked by converting
/// it back, so any array that no string produces is rejected.
pub fn lepal_to_mepal(l: &LongestSuffixPalArray) -> Result<MaxPalArray> {
    let n = l.len();
    const NONE: usize = usize::MAX;

    let mut last_end = vec![NONE; n + 1];
    let mut prev_center = 0usize;
    for j in 0..n {
        let len = l.get(j);
        if len % 2 != 0 || len > j + 1 {
            return Err(Error::Malformed(format!("invalid suffix length {len} at {j}")));
        }
        let center = j + 1 - len / 2;
        if center < prev_center {
            return Err(Error::Malformed(format!(
                "suffix centers decrease at {j} ({prev_center} -> {center})"
            )));
        }
        prev_center = center;
        if len > 0 {
            last_end[center] = j;
        }
    }

    let mut rad = vec![0usize; n];
    // `reach` is one past the right end of the rightmost palindrome so far
    let (mut owner, mut reach) = (0usize, 0usize);
    for c in 0..n {
        let mirrored = if c < reach {
            let bound = reach - c;
            let rm = rad[2 * owner - c];
            match rm.cmp(&bound) {
                std::cmp::Ordering::Less => Some(rm),
                std::cmp::Ordering::Greater => Some(bound),
                std::cmp::Ordering::Equal => None,
            }
        } else {
            None
        };
        let r = match mirrored {
            Some(r) => r,
            None => {
                let mut end = reach.max(c);
                if last_end[c] != NONE && last_end[c] + 1 > end {
                    end = last_end[c] + 1;
                }
                end - c
            }
        };
        if r > c || c + r > n {
            return Err(Error::Malformed(format!("derived radius {r} at {c} leaves the string")));
        }
        rad[c] = r;
        if c + r > reach {
            owner = c;
            reach = c + r;
        }
    }

    let m = MaxPalArray(rad.into_iter().map(|r| 2 * r).collect());
    if mepal_to_lepal(&m).values() != l.values() {
        return Err(Error::Malformed(
            "no maximal-palindrome array reproduces this suffix array".into(),
        ));
    }
    if manacher_even(&infer_string(&m)) != m {
        return Err(Error::Malformed("no string has these palindromes".into()));
    }
    Ok(m)
}

/// A string with as few equal symbols as `m` allows: each position copies
/// its mirror inside a palindrome that covers it, or gets a fresh symbol.
/// If any string has maximal even palindromes `m`, this one does.
pub fn infer_string(m: &MaxPalArray) -> Vec<usize> {
    let n = m.len();
    let mut w = Vec::with_capacity(n);
    let (mut owner, mut reach) = (0usize, 0usize);
    for i in 0..n {
        let r = m.radius(i);
        if i + r > reach {
            owner = i;
            reach = i + r;
        }
        w.push(if i < reach {
            w[2 * owner - 1 - i]
        } else {
            i
        });
    }
    w
}
