"""2-bit DNA packing and deterministic 64-bit hashing.

Bases map to fixed 2-bit codes (A=0, C=1, G=2, T=3); a packed k-mer stores
its bases most-significant-first, so "ACGT" packs to 0b00_01_10_11 = 27.
k is capped at 63 (the packed value fits two 64-bit words) and m-mers at 32
(one word). All hashing goes through a splitmix64-style finalizer, seeded by
xor-folding a pre-mixed seed into the input; for a fixed seed the mixer is a
bijection on 64-bit values.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidBase, LengthOutOfRange

__all__ = [
    "MAX_K", "MAX_M", "BASES",
    "encode_bases", "decode_bases", "Kmer", "encode_kmer",
    "mix64", "mix64_array", "hash_mmer", "hash_mmer_array", "hash_words_array",
    "window_values", "kmer_words", "kmer_words_at",
]

MAX_K = 63
MAX_M = 32
BASES = "ACGT"

_U64 = np.uint64
_MASK64 = 0xFFFFFFFFFFFFFFFF

# uppercase and lowercase accepted, everything else is a hard error
_CODE_LUT = np.full(256, 255, dtype=np.uint8)
for _i, _b in enumerate(BASES):
    _CODE_LUT[ord(_b)] = _i
    _CODE_LUT[ord(_b.lower())] = _i

_BASE_LUT = np.frombuffer(BASES.encode(), dtype=np.uint8)


def encode_bases(s):
    """Encode a DNA string (str or bytes) into a uint8 code array."""
    if isinstance(s, str):
        s = s.encode("ascii", errors="replace")
    raw = np.frombuffer(s, dtype=np.uint8)
    codes = _CODE_LUT[raw]
    bad = np.flatnonzero(codes == 255)
    if bad.size:
        i = int(bad[0])
        raise InvalidBase(f"invalid base {chr(raw[i])!r} at position {i}")
    return codes


def decode_bases(codes):
    """Inverse of encode_bases."""
    return _BASE_LUT[np.asarray(codes, dtype=np.uint8)].tobytes().decode("ascii")


@dataclass(frozen=True)
class Kmer:
    """A fixed-length DNA string packed into 2k bits.

    `value` holds the bases most-significant-first; for k > 32 the packed
    value spans two 64-bit words, exposed as `hi` (first k-32 bases) and
    `lo` (last 32 bases).
    """

    k: int
    value: int

    def __post_init__(self):
        if not 1 <= self.k <= MAX_K:
            raise LengthOutOfRange(f"k={self.k} outside [1, {MAX_K}]")
        if not 0 <= self.value < (1 << (2 * self.k)):
            raise ValueError(f"packed value out of range for k={self.k}")

    @classmethod
    def from_string(cls, s):
        codes = encode_bases(s)
        if not 1 <= codes.size <= MAX_K:
            raise LengthOutOfRange(f"k={codes.size} outside [1, {MAX_K}]")
        value = 0
        for c in codes:
            value = (value << 2) | int(c)
        return cls(codes.size, value)

    @property
    def hi(self):
        return self.value >> 64

    @property
    def lo(self):
        return self.value & _MASK64

    def mmer_at(self, pos, m):
        """Packed m-mer starting at 1-based position pos (pos in [1, k-m+1])."""
        if not 1 <= pos <= self.k - m + 1:
            raise IndexError(f"m-mer position {pos} out of range")
        shift = 2 * (self.k - m - (pos - 1))
        return (self.value >> shift) & ((1 << (2 * m)) - 1)

    def __str__(self):
        out = []
        for i in range(self.k - 1, -1, -1):
            out.append(BASES[(self.value >> (2 * i)) & 3])
        return "".join(out)


def encode_kmer(s):
    """Pack a DNA string of length 1..63 into a Kmer."""
    return Kmer.from_string(s)


# --- hashing -----------------------------------------------------------------

def mix64(x):
    """splitmix64 finalizer on a 64-bit value (scalar)."""
    x &= _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x


def mix64_array(x):
    """splitmix64 finalizer over a uint64 numpy array."""
    x = x.astype(_U64, copy=True)
    with np.errstate(over="ignore"):
        x ^= x >> _U64(30)
        x *= _U64(0xBF58476D1CE4E5B9)
        x ^= x >> _U64(27)
        x *= _U64(0x94D049BB133111EB)
        x ^= x >> _U64(31)
    return x


def hash_mmer(mmer, seed):
    """Deterministic 64-bit hash of a packed m-mer (m <= 32) under a seed."""
    return mix64(mmer ^ mix64(seed ^ 0x9E3779B97F4A7C15))


def hash_mmer_array(mmers, seed):
    """Vector version of hash_mmer; equal to the scalar elementwise."""
    s = _U64(mix64(seed ^ 0x9E3779B97F4A7C15))
    return mix64_array(mmers ^ s)


def hash_words_array(hi, lo, seed):
    """64-bit hash of two-word packed keys (used for k-mers, k > 32 allowed)."""
    s = _U64(mix64(seed ^ 0x9E3779B97F4A7C15))
    return mix64_array(mix64_array(lo ^ s) ^ hi)


def hash_words(hi, lo, seed):
    s = mix64(seed ^ 0x9E3779B97F4A7C15)
    return mix64(mix64(lo ^ s) ^ hi)


# --- bulk packing over code arrays -------------------------------------------

def window_values(codes, width):
    """Packed base-4 values of every `width`-window of a code array.

    Returns a uint64 array of length len(codes) - width + 1; width <= 32.
    """
    if width > MAX_M:
        raise LengthOutOfRange(f"window width {width} > {MAX_M}")
    n = codes.size - width + 1
    if n <= 0:
        return np.empty(0, dtype=_U64)
    c64 = codes.astype(_U64)
    acc = np.zeros(n, dtype=_U64)
    for j in range(width):
        acc <<= _U64(2)
        acc |= c64[j:j + n]
    return acc


def kmer_words(codes, k):
    """(hi, lo) packed words for every k-mer start position of a code array."""
    n = codes.size - k + 1
    if n <= 0:
        return np.empty(0, dtype=_U64), np.empty(0, dtype=_U64)
    if k <= 32:
        return np.zeros(n, dtype=_U64), window_values(codes, k)
    hi = window_values(codes, k - 32)[:n]
    lo = window_values(codes, 32)[k - 32:k - 32 + n]
    return hi, lo


def kmer_words_at(codes, k, positions):
    """(hi, lo) packed words for k-mers at the given start positions only."""
    positions = np.asarray(positions, dtype=np.int64)
    c64 = codes.astype(_U64)
    lo_width = min(k, 32)
    hi_width = k - lo_width
    hi = np.zeros(positions.size, dtype=_U64)
    for j in range(hi_width):
        hi <<= _U64(2)
        hi |= c64[positions + j]
    lo = np.zeros(positions.size, dtype=_U64)
    for j in range(hi_width, k):
        lo <<= _U64(2)
        lo |= c64[positions + j]
    return hi, lo
