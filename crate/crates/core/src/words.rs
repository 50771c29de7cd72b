//! Packed word codes used by the bounded splicing closure.
//!
//! A word of length `l ≤ max_len` over a `b`-symbol alphabet is packed into a
//! single `u128`: the symbol digits in base `b` (little endian) in the low
//! bits and the length in the top seven bits. Prefix, suffix and
//! concatenation become integer arithmetic.
//!
//! Word sets are held in a [`CodePool`]. When the whole bounded universe
//! `Σ_{l ≤ cap} b^l` is small enough, membership lives in a direct-indexed
//! bitset (the code maps to `offset[len] + digits`), which keeps the closure
//! fixpoint fast even when it touches hundreds of thousands of words; larger
//! universes fall back to a hash set.

use std::collections::HashSet;
use std::hash::{BuildHasherDefault, Hasher};

use crate::error::{Error, Result};
use crate::symbol::Symbol;

const LEN_SHIFT: u32 = 120;

/// Universes up to this many distinct words use the dense bitset (2^28
/// bits = 32 MiB at the limit).
const DENSE_LIMIT: u128 = 1 << 28;

/// Encoder/decoder for one (alphabet size, max length) pair.
#[derive(Debug, Clone)]
pub(crate) struct WordCodec {
    base: u128,
    /// `pows[i] = base^i`
    pows: Vec<u128>,
    /// `offsets[l] = Σ_{i<l} base^i`, the index of the first length-`l` word.
    offsets: Vec<u128>,
}

impl WordCodec {
    pub fn new(alphabet_size: usize, max_len: usize) -> Result<WordCodec> {
        let base = alphabet_size.max(1) as u128;
        let mut pows = Vec::with_capacity(max_len + 2);
        let mut offsets = Vec::with_capacity(max_len + 2);
        let mut p: u128 = 1;
        let mut total: u128 = 0;
        pows.push(1);
        offsets.push(0);
        for _ in 0..max_len {
            total += p;
            p = p.checked_mul(base).ok_or(Error::WordTooWide {
                len: max_len,
                symbols: alphabet_size,
            })?;
            if p >= 1u128 << LEN_SHIFT {
                return Err(Error::WordTooWide {
                    len: max_len,
                    symbols: alphabet_size,
                });
            }
            pows.push(p);
            offsets.push(total);
        }
        offsets.push(total + p);
        Ok(WordCodec { base, pows, offsets })
    }

    /// Number of distinct words of length at most `cap`.
    pub fn universe_size(&self, cap: usize) -> u128 {
        self.offsets[cap + 1]
    }

    #[inline]
    pub fn len(&self, code: u128) -> usize {
        (code >> LEN_SHIFT) as usize
    }

    #[inline]
    fn digits(&self, code: u128) -> u128 {
        code & ((1u128 << LEN_SHIFT) - 1)
    }

    #[inline]
    pub fn pack(&self, digits: u128, len: usize) -> u128 {
        digits | ((len as u128) << LEN_SHIFT)
    }

    /// Dense index of a code: `offsets[len] + digits`.
    #[inline]
    fn index(&self, code: u128) -> u128 {
        self.offsets[self.len(code)] + self.digits(code)
    }

    /// Inverse of [`WordCodec::index`].
    fn from_index(&self, idx: u128) -> u128 {
        let len = match self.offsets.binary_search(&idx) {
            Ok(l) if l + 1 < self.offsets.len() => l,
            Ok(l) => l - 1,
            Err(ins) => ins - 1,
        };
        self.pack(idx - self.offsets[len], len)
    }

    pub fn encode(&self, word: &[Symbol]) -> u128 {
        debug_assert!(word.len() < self.pows.len());
        let mut digits: u128 = 0;
        for (i, s) in word.iter().enumerate() {
            digits += s.0 as u128 * self.pows[i];
        }
        self.pack(digits, word.len())
    }

    pub fn decode(&self, code: u128) -> Vec<Symbol> {
        let len = self.len(code);
        let mut digits = self.digits(code);
        let mut word = Vec::with_capacity(len);
        for _ in 0..len {
            word.push(Symbol((digits % self.base) as u32));
            digits /= self.base;
        }
        word
    }

    #[inline]
    pub fn symbol_at(&self, code: u128, i: usize) -> Symbol {
        Symbol(((self.digits(code) / self.pows[i]) % self.base) as u32)
    }

    /// The first `i` symbols.
    #[inline]
    pub fn prefix(&self, code: u128, i: usize) -> u128 {
        self.pack(self.digits(code) % self.pows[i], i)
    }

    /// The symbols after position `i` (exclusive).
    #[inline]
    pub fn suffix_after(&self, code: u128, i: usize) -> u128 {
        let len = self.len(code);
        self.pack(self.digits(code) / self.pows[i + 1], len - i - 1)
    }

    /// `a ++ mid ++ b`; the caller guarantees the combined length fits.
    #[inline]
    pub fn concat3(&self, a: u128, mid: u128, b: u128) -> u128 {
        let la = self.len(a);
        let lm = self.len(mid);
        let lb = self.len(b);
        let digits = self.digits(a)
            + self.digits(mid) * self.pows[la]
            + self.digits(b) * self.pows[la + lm];
        self.pack(digits, la + lm + lb)
    }

    /// Number of words of exactly length `len`.
    #[inline]
    pub fn slice_size(&self, len: usize) -> u128 {
        self.pows[len]
    }

    #[inline]
    pub(crate) fn pows_at(&self, i: usize) -> u128 {
        self.pows[i]
    }
}

/// Multiply-mix hasher for packed word codes.
#[derive(Default)]
pub(crate) struct CodeHasher(u64);

impl Hasher for CodeHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 ^ b as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        }
    }

    fn write_u128(&mut self, v: u128) {
        let lo = v as u64;
        let hi = (v >> 64) as u64;
        let mut h = lo ^ hi.rotate_left(31);
        h = h.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        h ^= h >> 29;
        h = h.wrapping_mul(0xBF58_476D_1CE4_E5B9);
        h ^= h >> 32;
        self.0 = h;
    }
}

type CodeHashSet = HashSet<u128, BuildHasherDefault<CodeHasher>>;

enum PoolRepr {
    Dense { bits: Vec<u64> },
    Sparse(CodeHashSet),
}

/// A set of packed word codes over one codec, dense when the universe fits.
pub(crate) struct CodePool {
    repr: PoolRepr,
    len: usize,
    cap: usize,
}

impl CodePool {
    pub fn new(codec: &WordCodec, cap: usize) -> CodePool {
        let universe = codec.universe_size(cap);
        let repr = if universe <= DENSE_LIMIT {
            PoolRepr::Dense {
                bits: vec![0u64; (universe as usize).div_ceil(64)],
            }
        } else {
            PoolRepr::Sparse(CodeHashSet::default())
        };
        CodePool { repr, len: 0, cap }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn insert(&mut self, codec: &WordCodec, code: u128) -> bool {
        debug_assert!(codec.len(code) <= self.cap);
        let fresh = match &mut self.repr {
            PoolRepr::Dense { bits } => {
                let idx = codec.index(code) as usize;
                let mask = 1u64 << (idx % 64);
                let block = &mut bits[idx / 64];
                let fresh = *block & mask == 0;
                *block |= mask;
                fresh
            }
            PoolRepr::Sparse(set) => set.insert(code),
        };
        self.len += fresh as usize;
        fresh
    }

    #[inline]
    pub fn contains(&self, codec: &WordCodec, code: u128) -> bool {
        match &self.repr {
            PoolRepr::Dense { bits } => {
                let idx = codec.index(code) as usize;
                bits[idx / 64] & (1u64 << (idx % 64)) != 0
            }
            PoolRepr::Sparse(set) => set.contains(&code),
        }
    }

    /// Visits every member of length at most `max_len`, in code order for
    /// the dense representation and arbitrary order for the sparse one.
    pub fn for_each_upto(&self, codec: &WordCodec, max_len: usize, mut f: impl FnMut(u128)) {
        match &self.repr {
            PoolRepr::Dense { bits } => {
                let end = codec.universe_size(max_len.min(self.cap));
                for (bi, &block) in bits.iter().enumerate() {
                    if block == 0 {
                        continue;
                    }
                    let base = (bi * 64) as u128;
                    if base >= end {
                        break;
                    }
                    let mut b = block;
                    while b != 0 {
                        let bit = b.trailing_zeros() as u128;
                        b &= b - 1;
                        let idx = base + bit;
                        if idx >= end {
                            break;
                        }
                        f(codec.from_index(idx));
                    }
                }
            }
            PoolRepr::Sparse(set) => {
                for &code in set {
                    if codec.len(code) <= max_len {
                        f(code);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(ids: &[u32]) -> Vec<Symbol> {
        ids.iter().map(|&i| Symbol(i)).collect()
    }

    #[test]
    fn roundtrip_and_parts() {
        let c = WordCodec::new(3, 12).unwrap();
        let word = w(&[2, 0, 1, 1, 2]);
        let code = c.encode(&word);
        assert_eq!(c.len(code), 5);
        assert_eq!(c.decode(code), word);
        assert_eq!(c.symbol_at(code, 2), Symbol(1));
        assert_eq!(c.decode(c.prefix(code, 2)), w(&[2, 0]));
        assert_eq!(c.decode(c.suffix_after(code, 2)), w(&[1, 2]));
        let mid = c.encode(&w(&[0]));
        let glued = c.concat3(c.prefix(code, 2), mid, c.suffix_after(code, 2));
        assert_eq!(c.decode(glued), w(&[2, 0, 0, 1, 2]));
    }

    #[test]
    fn empty_word() {
        let c = WordCodec::new(4, 8).unwrap();
        let e = c.encode(&[]);
        assert_eq!(c.len(e), 0);
        assert_eq!(c.decode(e), Vec::<Symbol>::new());
    }

    #[test]
    fn width_guard() {
        assert!(WordCodec::new(1 << 20, 12).is_err());
        assert!(WordCodec::new(256, 12).is_ok());
    }

    #[test]
    fn index_roundtrip() {
        let c = WordCodec::new(3, 6).unwrap();
        for word in [vec![], w(&[0]), w(&[2]), w(&[1, 0, 2]), w(&[2, 2, 2, 2, 2, 2])] {
            let code = c.encode(&word);
            assert_eq!(c.from_index(c.index(code)), code);
        }
    }

    #[test]
    fn pool_dense_and_sparse_agree() {
        let c = WordCodec::new(3, 5).unwrap();
        let mut dense = CodePool::new(&c, 5);
        assert!(matches!(dense.repr, PoolRepr::Dense { .. }));
        let mut sparse = CodePool {
            repr: PoolRepr::Sparse(CodeHashSet::default()),
            len: 0,
            cap: 5,
        };
        let words = [vec![], w(&[1]), w(&[1, 2, 0]), w(&[2, 2, 2, 2, 2])];
        for word in &words {
            let code = c.encode(word);
            assert!(dense.insert(&c, code));
            assert!(!dense.insert(&c, code));
            sparse.insert(&c, code);
        }
        assert_eq!(dense.len(), words.len());
        for word in &words {
            assert!(dense.contains(&c, c.encode(word)));
            assert!(sparse.contains(&c, c.encode(word)));
        }
        let mut seen = Vec::new();
        dense.for_each_upto(&c, 3, |code| seen.push(c.decode(code)));
        assert_eq!(seen.len(), 3);
        let mut seen_sparse = Vec::new();
        sparse.for_each_upto(&c, 3, |code| seen_sparse.push(c.decode(code)));
        assert_eq!(seen_sparse.len(), 3);
    }
}
