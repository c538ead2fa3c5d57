"""Shared assembly and lookup plumbing for the two hash-structure variants.

Both variants hash every distinct minimizer (ambiguous ones included) with
the same inner MPHF and lay their per-super-k-mer data out in that slot
order; ambiguous slots carry a size-0 sentinel and their k-mers live in a
fallback MPHF placed after all positionally-ranked k-mers.
"""

from dataclasses import dataclass

import numpy as np

from .kmers import kmer_words, kmer_words_at, mix64
from .minimizers import census_from_scan
from .mphf import GeneralMphf

_U64 = np.uint64
_FM_SALT = 0x5B1D5EEDDEADBEEF
_FB_SALT = 0xFA11BACC0FFEE123


@dataclass
class SlotAssembly:
    """Per-minimizer-slot data in inner-MPHF order."""

    fm: GeneralMphf
    slot_sizes: np.ndarray       # super-k-mer size per slot, 0 when ambiguous
    slot_p1: np.ndarray          # first-k-mer minimizer position, 0 when ambiguous
    slot_ambiguous: np.ndarray   # bool per slot
    fm_of_skm: np.ndarray        # slot index per super-k-mer (scan order)
    skm_ambiguous: np.ndarray    # bool per super-k-mer
    census: object
    n_unambiguous: int


def assemble_slots(scan, seed):
    census = census_from_scan(scan)
    fm = GeneralMphf.build(census.distinct, seed=mix64(seed ^ _FM_SALT))
    slot_of_distinct = fm.evaluate_many(census.distinct)
    inverse = np.searchsorted(census.distinct, scan.minvals)
    fm_of_skm = slot_of_distinct[inverse]
    amb_distinct = census.counts > 1
    skm_ambiguous = amb_distinct[inverse]
    m = census.distinct.size
    slot_sizes = np.zeros(m, dtype=np.int64)
    slot_p1 = np.zeros(m, dtype=np.int64)
    keep = ~skm_ambiguous
    slot_sizes[fm_of_skm[keep]] = scan.sizes[keep]
    slot_p1[fm_of_skm[keep]] = scan.p1[keep]
    slot_ambiguous = np.zeros(m, dtype=bool)
    slot_ambiguous[slot_of_distinct[amb_distinct]] = True
    return SlotAssembly(
        fm=fm, slot_sizes=slot_sizes, slot_p1=slot_p1,
        slot_ambiguous=slot_ambiguous, fm_of_skm=fm_of_skm,
        skm_ambiguous=skm_ambiguous, census=census,
        n_unambiguous=int(scan.sizes[keep].sum()))


def expand_ranges(starts, lengths):
    """Concatenate arange(s, s+l) for every (s, l) pair."""
    lengths = np.asarray(lengths, dtype=np.int64)
    total = int(lengths.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    idx = np.repeat(np.asarray(starts, dtype=np.int64), lengths)
    off = np.arange(total, dtype=np.int64) - np.repeat(
        np.cumsum(lengths) - lengths, lengths)
    return idx + off


def ambiguous_kmer_words(spss, scan, skm_ambiguous):
    """(hi, lo) packed words of every k-mer inside an ambiguous super-k-mer,
    in SPSS order."""
    his, los = [], []
    for sid, codes in enumerate(spss.codes):
        sel = skm_ambiguous & (scan.string_id == sid)
        if not np.any(sel):
            continue
        positions = expand_ranges(scan.starts[sel], scan.sizes[sel])
        if positions.size > codes.size // 8:
            hi, lo = kmer_words(codes, spss.k)
            his.append(hi[positions])
            los.append(lo[positions])
        else:
            hi, lo = kmer_words_at(codes, spss.k, positions)
            his.append(hi)
            los.append(lo)
    if not his:
        e = np.empty(0, dtype=_U64)
        return e, e
    return np.concatenate(his), np.concatenate(los)


def build_fallback(spss, scan, skm_ambiguous, seed):
    hi, lo = ambiguous_kmer_words(spss, scan, skm_ambiguous)
    return GeneralMphf.build(lo, hi, seed=mix64(seed ^ _FB_SALT))


def finish_lookup(base, p1s, sizes, p, fb_mask, fb_words, struct, checked):
    """Combine slot parameters into final hash values.

    base/p1s/sizes are per-element slot data, p the query minimizer position,
    fb_mask the elements routed to the fallback MPHF, fb_words a callable
    returning (hi, lo) for exactly those elements.
    """
    r = p1s - p + 1
    out = base + r - 1
    if np.any(fb_mask):
        fhi, flo = fb_words()
        out[fb_mask] = struct.n_unambiguous + struct.fallback.evaluate_many(flo, fhi)
    miss = ~fb_mask & ((r < 1) | (r > sizes))
    if checked:
        out[miss] = -1
    elif np.any(miss):
        np.clip(out, 0, struct.n - 1, out=out)
    return out
