"""Succinct storage: rank-supported bitvectors, Elias-Fano sequences, and
the 4-symbol type sequence.

RankBitvector keeps a Rank9-style directory (one absolute count plus seven
packed 9-bit relative counts per 512-bit block, ~25% of the payload) so
rank is O(1). Select over the Elias-Fano high bits uses positions sampled
every 1024 ones plus an in-block scan; the batch path instead binary-searches
the block directory and resolves inside the block with byte tables.

Serialization is little-endian: parameters, payload words, and the rank
directory words. Select samples are rebuilt on load.
"""

import numpy as np

from ._binio import Reader, Writer
from .errors import IndexOutOfRange, NotMonotone, UniverseTooSmall

__all__ = ["RankBitvector", "IntVector", "EliasFanoSeq", "TypeSequence"]

_U64 = np.uint64
_FULL64 = np.uint64(0xFFFFFFFFFFFFFFFF)

popcount = np.bitwise_count

# position of the (r+1)-th set bit of a byte, 255 when absent
_SELECT_IN_BYTE = np.full((256, 8), 255, dtype=np.uint8)
for _b in range(256):
    _r = 0
    for _i in range(8):
        if (_b >> _i) & 1:
            _SELECT_IN_BYTE[_b, _r] = _i
            _r += 1

_SELECT_SAMPLE_RATE = 1024


def _width_mask(width):
    return _FULL64 if width >= 64 else _U64((1 << width) - 1)


class RankBitvector:
    """Static bitvector with O(1) rank1 and sampled select1."""

    def __init__(self, nbits, words=None):
        self.nbits = int(nbits)
        ndata = (self.nbits + 63) // 64
        nblocks = (ndata + 7) // 8
        # one zero pad block so rank/select gathers never index out of range
        total = (nblocks + 1) * 8
        if words is None:
            self._words = np.zeros(total, dtype=_U64)
        else:
            self._words = np.zeros(total, dtype=_U64)
            self._words[:words.size] = words
        self._nblocks = nblocks
        self._abs = None
        self._rel = None
        self._samples = None
        self.num_ones = 0

    @classmethod
    def from_positions(cls, nbits, positions):
        bv = cls(nbits)
        positions = np.asarray(positions, dtype=np.int64)
        word = positions >> 6
        bit = _U64(1) << (positions & 63).astype(_U64)
        np.bitwise_or.at(bv._words, word, bit)
        bv._build_directory()
        return bv

    @classmethod
    def from_bools(cls, bits):
        return cls.from_positions(len(bits), np.flatnonzero(bits))

    def _build_directory(self):
        nb = self._nblocks
        pc = popcount(self._words[:nb * 8]).reshape(nb, 8).astype(_U64)
        within = np.cumsum(pc, axis=1)
        self._abs = np.zeros(nb + 1, dtype=_U64)
        if nb:
            np.cumsum(within[:, 7], out=self._abs[1:])
        rel = np.zeros(nb, dtype=_U64)
        for j in range(1, 8):
            rel |= within[:, j - 1] << _U64(9 * (j - 1))
        self._rel = np.concatenate([rel, np.zeros(1, dtype=_U64)])
        self.num_ones = int(self._abs[nb])

    def _build_samples(self):
        bits = np.unpackbits(
            self._words[:self._nblocks * 8].view(np.uint8), bitorder="little")
        ones = np.flatnonzero(bits)
        self._samples = ones[::_SELECT_SAMPLE_RATE].astype(np.int64)

    def get(self, i):
        return int((self._words[i >> 6] >> _U64(i & 63)) & _U64(1))

    def get_many(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        return ((self._words[idx >> 6] >> (idx & 63).astype(_U64)) & _U64(1))

    def rank1(self, i):
        """Number of set bits in [0, i); 0 <= i <= nbits."""
        if not 0 <= i <= self.nbits:
            raise IndexOutOfRange(f"rank position {i} outside [0, {self.nbits}]")
        block, sub = i >> 9, (i >> 6) & 7
        r = int(self._abs[block])
        if sub:
            r += int((self._rel[block] >> _U64(9 * (sub - 1))) & _U64(511))
        mask = (1 << (i & 63)) - 1
        return r + int(popcount(self._words[i >> 6] & _U64(mask)))

    def rank1_many(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        block = idx >> 9
        sub = ((idx >> 6) & 7).astype(_U64)
        r = self._abs[block].copy()
        shift = (sub - _U64(1)) * _U64(9)
        rel = np.where(sub > 0, (self._rel[block] >> shift) & _U64(511), _U64(0))
        r += rel
        mask = (_U64(1) << (idx & 63).astype(_U64)) - _U64(1)
        r += popcount(self._words[idx >> 6] & mask).astype(_U64)
        return r.astype(np.int64)

    def select1(self, j):
        """Position of the (j+1)-th set bit, 0-based; 0 <= j < num_ones."""
        if not 0 <= j < self.num_ones:
            raise IndexOutOfRange(f"select rank {j} outside [0, {self.num_ones})")
        if self._samples is None:
            self._build_samples()
        anchor = int(self._samples[j >> 10])
        rem = j - ((j >> 10) << 10)
        wi = anchor >> 6
        word = int(self._words[wi]) & ~((1 << (anchor & 63)) - 1)
        while True:
            c = word.bit_count()
            if c > rem:
                for _ in range(rem):
                    word &= word - 1
                return (wi << 6) + ((word & -word).bit_length() - 1)
            rem -= c
            wi += 1
            word = int(self._words[wi])

    def select1_many(self, js):
        js = np.asarray(js, dtype=np.int64)
        if js.size == 0:
            return js.copy()
        block = np.searchsorted(self._abs[:self._nblocks + 1], js, side="right") - 1
        rem = (js - self._abs[block].astype(np.int64)).astype(np.int64)
        rows = self._words[:(self._nblocks + 1) * 8].reshape(-1, 8)[block]
        pc = popcount(rows).astype(np.int64)
        cum = np.cumsum(pc, axis=1)
        t = (cum <= rem[:, None]).sum(axis=1)
        prev = np.take_along_axis(
            np.concatenate([np.zeros((cum.shape[0], 1), dtype=np.int64), cum], axis=1),
            t[:, None], axis=1)[:, 0]
        rem2 = rem - prev
        wv = np.take_along_axis(rows, t[:, None], axis=1)[:, 0]
        byte_shifts = (np.arange(8, dtype=_U64) * _U64(8))
        bys = (wv[:, None] >> byte_shifts[None, :]) & _U64(0xFF)
        bpc = popcount(bys).astype(np.int64)
        bcum = np.cumsum(bpc, axis=1)
        tb = (bcum <= rem2[:, None]).sum(axis=1)
        prevb = np.take_along_axis(
            np.concatenate([np.zeros((bcum.shape[0], 1), dtype=np.int64), bcum], axis=1),
            tb[:, None], axis=1)[:, 0]
        rem3 = rem2 - prevb
        byte = np.take_along_axis(bys, tb[:, None], axis=1)[:, 0].astype(np.int64)
        bit = _SELECT_IN_BYTE[byte, rem3].astype(np.int64)
        return (block << 9) + (t << 6) + (tb << 3) + bit

    def size_in_bits(self):
        return 8 * len(self.to_bytes())

    def to_bytes(self):
        ndata = (self.nbits + 63) // 64
        w = Writer()
        w.u64(self.nbits)
        w.u64(self.num_ones)
        w.array(self._words[:ndata])
        w.array(self._abs[:self._nblocks])
        w.array(self._rel[:self._nblocks])
        return w.getvalue()

    @classmethod
    def read_from(cls, r):
        nbits = r.u64()
        num_ones = r.u64()
        ndata = (nbits + 63) // 64
        nblocks = (ndata + 7) // 8
        bv = cls(nbits, words=r.array(_U64, ndata))
        abs_stored = r.array(_U64, nblocks)
        rel_stored = r.array(_U64, nblocks)
        bv._abs = np.concatenate([abs_stored, np.array([num_ones], dtype=_U64)])
        bv._rel = np.concatenate([rel_stored, np.zeros(1, dtype=_U64)])
        bv.num_ones = num_ones
        return bv

    @classmethod
    def from_bytes(cls, buf):
        r = Reader(buf)
        bv = cls.read_from(r)
        r.done()
        return bv


class IntVector:
    """Fixed-width packed integer array (width 0..64)."""

    def __init__(self, length, width, words=None):
        self.length = int(length)
        self.width = int(width)
        nwords = (self.length * self.width + 63) // 64 + 1
        self._words = np.zeros(nwords, dtype=_U64)
        if words is not None:
            self._words[:words.size] = words

    @classmethod
    def from_values(cls, values, width):
        values = np.asarray(values)
        iv = cls(values.size, width)
        if width == 0 or values.size == 0:
            return iv
        v = values.astype(_U64) & _width_mask(width)
        off = np.arange(values.size, dtype=np.int64) * width
        wi = off >> 6
        sh = (off & 63).astype(_U64)
        with np.errstate(over="ignore"):
            np.bitwise_or.at(iv._words, wi, v << sh)
        spill = (off & 63) + width > 64
        if np.any(spill):
            np.bitwise_or.at(iv._words, wi[spill] + 1,
                             v[spill] >> (_U64(64) - sh[spill]))
        return iv

    def get(self, i):
        if not 0 <= i < self.length:
            raise IndexOutOfRange(f"index {i} outside [0, {self.length})")
        if self.width == 0:
            return 0
        off = i * self.width
        sh = off & 63
        val = int(self._words[off >> 6]) >> sh
        if sh + self.width > 64:
            val |= int(self._words[(off >> 6) + 1]) << (64 - sh)
        return val & ((1 << self.width) - 1)

    def get_many(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        if self.width == 0:
            return np.zeros(idx.size, dtype=np.int64)
        off = idx * self.width
        wi = off >> 6
        sh = (off & 63).astype(_U64)
        lo = self._words[wi] >> sh
        shift2 = (_U64(64) - sh) & _U64(63)
        hi = np.where(sh > 0, self._words[wi + 1] << shift2, _U64(0))
        return ((lo | hi) & _width_mask(self.width)).astype(np.int64)

    def __len__(self):
        return self.length

    def size_in_bits(self):
        return 8 * len(self.to_bytes())

    def to_bytes(self):
        ndata = (self.length * self.width + 63) // 64
        w = Writer()
        w.u64(self.length)
        w.u64(self.width)
        w.array(self._words[:ndata])
        return w.getvalue()

    @classmethod
    def read_from(cls, r):
        length = r.u64()
        width = r.u64()
        ndata = (length * width + 63) // 64
        return cls(length, width, words=r.array(_U64, ndata))

    @classmethod
    def from_bytes(cls, buf):
        r = Reader(buf)
        iv = cls.read_from(r)
        r.done()
        return iv


class EliasFanoSeq:
    """Non-decreasing integer sequence with O(1) access.

    Values split into low bits (fixed width floor(log2(u/l))) and unary-coded
    high bits with select support.
    """

    def __init__(self, length, universe, low_width, low, high):
        self.length = length
        self.universe = universe
        self.low_width = low_width
        self._low = low
        self._high = high

    @classmethod
    def from_values(cls, values, universe):
        values = np.asarray(values, dtype=np.int64)
        length = values.size
        if length:
            if values[0] < 0 or np.any(values[1:] < values[:-1]):
                raise NotMonotone("sequence must be non-decreasing and non-negative")
            if int(values[-1]) > universe:
                raise UniverseTooSmall(
                    f"largest value {int(values[-1])} > universe {universe}")
        lw = 0
        if length and universe // length >= 1:
            lw = int(universe // length).bit_length() - 1
        low = IntVector.from_values(values, lw)
        hpos = (values >> lw) + np.arange(length, dtype=np.int64)
        nbits_high = (universe >> lw) + length + 1
        high = RankBitvector.from_positions(nbits_high, hpos)
        return cls(length, int(universe), lw, low, high)

    def access(self, i):
        if not 0 <= i < self.length:
            raise IndexOutOfRange(f"index {i} outside [0, {self.length})")
        hval = self._high.select1(i) - i
        return (hval << self.low_width) | self._low.get(i)

    def access_many(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        hval = self._high.select1_many(idx) - idx
        return (hval << self.low_width) | self._low.get_many(idx)

    def __len__(self):
        return self.length

    def __getitem__(self, i):
        return self.access(i)

    def payload_bits(self):
        return self.length * self.low_width + self._high.nbits

    def size_in_bits(self):
        return 8 * len(self.to_bytes())

    def to_bytes(self):
        w = Writer()
        w.u64(self.length)
        w.u64(self.universe)
        w.u64(self.low_width)
        w.raw(self._low.to_bytes())
        w.raw(self._high.to_bytes())
        return w.getvalue()

    @classmethod
    def read_from(cls, r):
        length = r.u64()
        universe = r.u64()
        lw = r.u64()
        low = IntVector.read_from(r)
        high = RankBitvector.read_from(r)
        return cls(length, universe, lw, low, high)

    @classmethod
    def from_bytes(cls, buf):
        r = Reader(buf)
        ef = cls.read_from(r)
        r.done()
        return ef


class TypeSequence:
    """Length-|M| sequence over 4 symbols with O(1) access and per-symbol rank.

    Depth-2 wavelet decomposition: one bitvector for the symbol high bit, a
    second for the low bits grouped by high bit (left part then right part).
    """

    def __init__(self, length, b1, b2, count0):
        self.length = length
        self._b1 = b1
        self._b2 = b2
        self._count0 = count0

    @classmethod
    def from_symbols(cls, symbols):
        symbols = np.asarray(symbols, dtype=np.uint8)
        if symbols.size and int(symbols.max()) > 3:
            raise ValueError("symbols must be in [0, 3]")
        hi = symbols >> 1
        b1 = RankBitvector.from_bools(hi == 1)
        order = np.concatenate([np.flatnonzero(hi == 0), np.flatnonzero(hi == 1)])
        b2 = RankBitvector.from_bools((symbols[order] & 1) == 1)
        return cls(symbols.size, b1, b2, int(np.count_nonzero(hi == 0)))

    def access(self, i):
        if not 0 <= i < self.length:
            raise IndexOutOfRange(f"index {i} outside [0, {self.length})")
        c1 = self._b1.get(i)
        if c1 == 0:
            pos2 = i - self._b1.rank1(i)
        else:
            pos2 = self._count0 + self._b1.rank1(i)
        return (c1 << 1) | self._b2.get(pos2)

    def access_many(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        c1 = self._b1.get_many(idx).astype(np.int64)
        r1 = self._b1.rank1_many(idx)
        pos2 = np.where(c1 == 0, idx - r1, self._count0 + r1)
        return ((c1 << 1) | self._b2.get_many(pos2).astype(np.int64)).astype(np.uint8)

    def rank(self, t, i):
        """Occurrences of symbol t in the first i positions (0 <= i <= length)."""
        if not 0 <= i <= self.length:
            raise IndexOutOfRange(f"rank position {i} outside [0, {self.length}]")
        c1, c0 = (t >> 1) & 1, t & 1
        n1 = self._b1.rank1(i)
        if c1 == 0:
            n, ones = i - n1, self._b2.rank1(i - n1)
        else:
            n = n1
            ones = self._b2.rank1(self._count0 + n1) - self._b2.rank1(self._count0)
        return ones if c0 else n - ones

    def rank_many(self, ts, idx):
        """Vector rank for per-element (symbol, position) pairs."""
        ts = np.asarray(ts, dtype=np.int64)
        idx = np.asarray(idx, dtype=np.int64)
        c1, c0 = (ts >> 1) & 1, ts & 1
        n1 = self._b1.rank1_many(idx)
        n0 = idx - n1
        pos = np.where(c1 == 0, n0, self._count0 + n1)
        base = self._b2.rank1(self._count0)
        ones = self._b2.rank1_many(pos) - np.where(c1 == 0, 0, base)
        n = np.where(c1 == 0, n0, n1)
        return np.where(c0 == 1, ones, n - ones)

    def __len__(self):
        return self.length

    def size_in_bits(self):
        return 8 * len(self.to_bytes())

    def to_bytes(self):
        w = Writer()
        w.u64(self.length)
        w.u64(self._count0)
        w.raw(self._b1.to_bytes())
        w.raw(self._b2.to_bytes())
        return w.getvalue()

    @classmethod
    def read_from(cls, r):
        length = r.u64()
        count0 = r.u64()
        b1 = RankBitvector.read_from(r)
        b2 = RankBitvector.read_from(r)
        return cls(length, b1, b2, count0)

    @classmethod
    def from_bytes(cls, buf):
        r = Reader(buf)
        ts = cls.read_from(r)
        r.done()
        return ts
