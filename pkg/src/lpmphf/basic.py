"""Un-partitioned locality-preserving MPHF.

Layout: an inner MPHF over all distinct minimizers, an Elias-Fano array L of
length |M|+1 holding prefix sums of super-k-mer sizes in slot order (L[0]=0,
ambiguous slots contribute 0), and a fixed-width array P of the minimizer
position in each super-k-mer's first k-mer (sentinel 0 on ambiguous slots).

A k-mer with minimizer slot i and minimizer position p hashes to
L[i] + P[i] - p; the codomain is 0-based, so the k-mers of the slot-i
super-k-mer occupy [L[i], L[i+1]) in string order and consecutive k-mers of
one super-k-mer get consecutive values. K-mers whose minimizer is ambiguous
(slot size 0) hash to n_unambiguous + fallback(x) instead; non-member
queries return an arbitrary in-range value unless checked lookup detects an
impossible minimizer position.
"""

import numpy as np

from ._build import (assemble_slots, build_fallback, expand_ranges,
                     finish_lookup)
from ._lookup import kmer_minimizers, resolve_kmer_input, stream_plan
from .errors import DefiniteMiss
from .kmers import kmer_words_at
from .minimizers import scan_spss, warn_if_density_condition_violated
from .succinct import EliasFanoSeq, IntVector

__all__ = ["LpMphfBasic", "build_basic", "measure_epsilon"]


class LpMphfBasic:
    variant = "basic"

    def __init__(self, scheme, n, n_unambiguous, fm, L, P, fallback):
        self.scheme = scheme
        self.n = n
        self.n_unambiguous = n_unambiguous
        self.fm = fm
        self.L = L
        self.P = P
        self.fallback = fallback

    @property
    def num_minimizers(self):
        return self.fm.n_keys

    # --- construction ---

    @classmethod
    def build(cls, spss, scheme, threads=1):
        warn_if_density_condition_violated(scheme)
        scan = scan_spss(spss, scheme, threads=threads)
        slots = assemble_slots(scan, scheme.seed)
        prefix = np.concatenate([[0], np.cumsum(slots.slot_sizes)])
        L = EliasFanoSeq.from_values(prefix, universe=slots.n_unambiguous)
        P = IntVector.from_values(slots.slot_p1, width=scheme.w.bit_length())
        fallback = build_fallback(spss, scan, slots.skm_ambiguous, scheme.seed)
        return cls(scheme, scan.n, slots.n_unambiguous, slots.fm, L, P, fallback)

    # --- lookup ---

    def _slot_params(self, slot):
        lo = self.L.access_many(slot)
        hi = self.L.access_many(slot + 1)
        sizes = hi - lo
        p1s = self.P.get_many(slot)
        return lo, p1s, sizes, sizes == 0

    def lookup_words(self, hi, lo, checked=False):
        """Vector lookup over packed k-mer word arrays."""
        mvals, p = kmer_minimizers(hi, lo, self.scheme)
        slot = self.fm.evaluate_many(mvals)
        base, p1s, sizes, fb = self._slot_params(slot)
        return finish_lookup(base, p1s, sizes, p, fb,
                             lambda: (hi[fb], lo[fb]), self, checked)

    def lookup(self, x, checked=False):
        """Hash one k-mer (Kmer, DNA string, or packed int)."""
        hi, lo = resolve_kmer_input(x, self.scheme.k)
        out = int(self.lookup_words(hi, lo, checked=checked)[0])
        if checked and out < 0:
            raise DefiniteMiss("k-mer cannot be in the indexed set")
        return out

    def stream_lookup(self, q, checked=False):
        """One value per consecutive k-mer of a query string.

        Equal to per-k-mer lookups elementwise; the minimizer slot is only
        resolved once per run of k-mers sharing a minimizer occurrence.
        """
        plan = stream_plan(q, self.scheme)
        slot = self.fm.evaluate_many(plan.run_minvals)
        base, p1s, sizes, fb = self._slot_params(slot)
        return plan.expand(base, p1s, sizes, fb, self, checked)

    # --- diagnostics ---

    def assigned_values(self, spss):
        """Build-side value of every k-mer, in SPSS order.

        Independent of the query path: derived from the super-k-mer scan and
        the stored arrays, it is the table lookups are checked against.
        """
        return _assigned_values(self, spss, self._slot_params)

    def size_in_bits(self):
        return 8 * len(self.to_bytes())

    def bits_per_kmer(self):
        return self.size_in_bits() / self.n

    def to_bytes(self):
        from .storage import structure_to_bytes
        return structure_to_bytes(self)

    def save(self, path):
        from .storage import save_structure
        save_structure(self, path)


def build_basic(spss, scheme, threads=1):
    """Build the un-partitioned structure over an SPSS."""
    return LpMphfBasic.build(spss, scheme, threads=threads)


def _assigned_values(struct, spss, slot_params):
    scan = scan_spss(spss, struct.scheme)
    slots_of_skm = struct.fm.evaluate_many(scan.minvals)
    base, _, sizes, _ = slot_params(slots_of_skm)
    amb = sizes != scan.sizes  # ambiguous slots carry size 0
    out = np.empty(scan.n, dtype=np.int64)
    pos = expand_ranges(scan.kmer_base[~amb], scan.sizes[~amb])
    out[pos] = expand_ranges(base[~amb], scan.sizes[~amb])
    if np.any(amb):
        for sid, codes in enumerate(spss.codes):
            sel = amb & (scan.string_id == sid)
            if not np.any(sel):
                continue
            local = expand_ranges(scan.starts[sel], scan.sizes[sel])
            hi, lo = kmer_words_at(codes, spss.k, local)
            gpos = expand_ranges(scan.kmer_base[sel], scan.sizes[sel])
            out[gpos] = struct.n_unambiguous + struct.fallback.evaluate_many(lo, hi)
    return out


def measure_epsilon(struct, spss):
    """Fraction of adjacent in-string k-mer pairs NOT mapped to consecutive
    values: epsilon = 1 - |A|/n."""
    hits = 0
    for codes in spss.codes:
        vals = struct.stream_lookup(codes)
        hits += int(np.count_nonzero(np.diff(vals) == 1))
    return 1.0 - hits / spss.n
