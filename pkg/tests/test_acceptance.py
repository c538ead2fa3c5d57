"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
report. The large fixtures (10^6 k-mers) are shared across criteria.
"""

import time

import numpy as np
import pytest

from lpmphf import (GeneralMphf, MinimizerScheme, SpssInput, TheoryParams,
                    build_basic, build_partitioned, census, generate_spss,
                    load_structure, measure_epsilon, save_structure,
                    space_bound_basic, space_bound_partitioned, stats,
                    type_probabilities)
from lpmphf.errors import CorruptFile
from lpmphf.kmers import kmer_words
from lpmphf.minimizers import scan_spss
from lpmphf.storage import structure_from_bytes, structure_to_bytes

N_BIG = 10 ** 6
SEED = 1105


def report(criterion, ok, detail):
    print(f"\n{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}")
    assert ok, f"criterion {criterion}: {detail}"


@pytest.fixture(scope="module")
def big_spss():
    return generate_spss(N_BIG + 30, 31, seed=SEED)


@pytest.fixture(scope="module")
def builds31(big_spss):
    scheme = MinimizerScheme(k=31, m=15, seed=SEED)
    return {
        "basic": build_basic(big_spss, scheme),
        "partitioned": build_partitioned(big_spss, scheme),
        "spss": big_spss,
        "scheme": scheme,
    }


@pytest.fixture(scope="module")
def builds63(big_spss):
    spss63 = SpssInput(k=63, codes=big_spss.codes)
    scheme = MinimizerScheme(k=63, m=15, seed=SEED)
    return {
        "basic": build_basic(spss63, scheme),
        "partitioned": build_partitioned(spss63, scheme),
        "spss": spss63,
        "scheme": scheme,
    }


def stream_all(f, spss):
    return np.concatenate([f.stream_lookup(c) for c in spss.codes])


def test_criterion_1_type_probability_reproduction():
    tables = {11: (0.297, 0.248, 0.248, 0.207),
              22: (0.273, 0.249, 0.249, 0.228)}
    worst = 0.0
    for w, expected in tables.items():
        got = type_probabilities(w)
        worst = max(worst, max(abs(g - e) for g, e in zip(got, expected)))
    report(1, worst < 1e-3,
           f"type probabilities at w=11/w=22 match the reference values to 3 "
           f"decimals (max gap {worst:.2e})")


def test_criterion_2_bijectivity(builds31):
    t0 = time.perf_counter()
    ok = True
    details = []
    for n_target in (10 ** 3, 10 ** 5, N_BIG):
        if n_target == N_BIG:
            spss, pair = builds31["spss"], (builds31["basic"],
                                            builds31["partitioned"])
        else:
            spss = generate_spss(n_target + 30, 31, seed=SEED + n_target)
            scheme = MinimizerScheme(k=31, m=15, seed=SEED)
            pair = (build_basic(spss, scheme), build_partitioned(spss, scheme))
        for f in pair:
            vals = stream_all(f, spss)
            good = np.array_equal(np.sort(vals), np.arange(f.n))
            ok &= good
            details.append(f"{f.variant}@n={f.n}:{'ok' if good else 'BAD'}")
    dt = time.perf_counter() - t0
    report(2, ok, f"exact permutation of 0..n-1 for {', '.join(details)} "
                  f"({dt:.1f}s)")


def test_criterion_3_locality(builds31):
    spss, scheme = builds31["spss"], builds31["scheme"]
    xi = census(spss, scheme).xi
    alpha = spss.fragmentation
    lower = alpha + 1 / spss.n
    upper = 1.2 * (2 / (scheme.w + 1)) + xi + alpha
    ok = True
    parts = []
    for f in (builds31["basic"], builds31["partitioned"]):
        eps = measure_epsilon(f, spss)
        good = lower <= eps <= upper
        ok &= good
        parts.append(f"{f.variant}: {lower:.5f} <= eps={eps:.5f} <= {upper:.5f}")
    report(3, ok, "; ".join(parts))


def test_criterion_4_consecutive_within_superkmer(builds31, rng):
    # the +1 ranking law covers super-k-mers whose minimizer is unambiguous;
    # ambiguous ones go through the fallback MPHF and give up locality
    from lpmphf.minimizers import census_from_scan
    spss, scheme = builds31["spss"], builds31["scheme"]
    scan = scan_spss(spss, scheme)
    cen = census_from_scan(scan)
    amb = cen.counts[np.searchsorted(cen.distinct, scan.minvals)] > 1
    eligible = np.flatnonzero((scan.sizes >= 2) & ~amb)
    sample = rng.choice(eligible, size=10 ** 4, replace=False)
    violations = 0
    for f in (builds31["basic"], builds31["partitioned"]):
        vals = stream_all(f, spss)
        starts = scan.kmer_base[sample]
        sizes = scan.sizes[sample]
        for s, z in zip(starts, sizes):
            run = vals[s:s + z]
            if not np.array_equal(np.diff(run), np.ones(z - 1, dtype=np.int64)):
                violations += 1
    report(4, violations == 0,
           f"10^4 sampled unambiguous super-k-mers per variant, consecutive "
           f"k-mers map to consecutive values; {violations} violations")


def test_criterion_5_type_proportions(big_spss):
    t0 = time.perf_counter()
    scheme = MinimizerScheme(k=31, m=21, seed=SEED)
    f = build_partitioned(big_spss, scheme)
    rep = stats(big_spss, f)
    gaps = [abs(g - w) for g, w in zip(rep.measured_proportions,
                                       rep.computed_proportions)]
    dt = time.perf_counter() - t0
    report(5, max(gaps) <= 0.02,
           f"(k,m)=(31,21), n=10^6: per-type |measured-computed| = "
           f"{', '.join(f'{g:.4f}' for g in gaps)} (<= 0.02, {dt:.1f}s)")


def test_criterion_6_space(builds31, builds63):
    ok = True
    parts = []
    bits = {}
    for tag, builds in (("k=31", builds31), ("k=63", builds63)):
        spss, scheme = builds["spss"], builds["scheme"]
        xi = census(spss, scheme).xi
        for variant, bound_fn in (("basic", space_bound_basic),
                                  ("partitioned", space_bound_partitioned)):
            f = builds[variant]
            params = TheoryParams(k=scheme.k, m=scheme.m,
                                  b=f.fm.bits_per_key, little_oh=0.5)
            bound = bound_fn(spss.n, params, xi=xi)
            measured = f.size_in_bits()
            ratio = measured / bound
            bits[(tag, variant)] = measured / spss.n
            good = 0.85 <= ratio <= 1.15
            ok &= good
            parts.append(f"{tag} {variant}: {measured / spss.n:.3f} b/kmer, "
                         f"theory ratio {ratio:.3f}")
    for tag, builds in (("k=31", builds31), ("k=63", builds63)):
        good = bits[(tag, "partitioned")] < bits[(tag, "basic")]
        ok &= good
        parts.append(f"{tag}: partitioned < basic {'ok' if good else 'BAD'}")
    for variant in ("basic", "partitioned"):
        good = bits[("k=63", variant)] < bits[("k=31", variant)]
        ok &= good
        parts.append(f"{variant}: k=63 < k=31 {'ok' if good else 'BAD'}")
    report(6, ok, "; ".join(parts))


def test_criterion_7_streaming_speed(builds31):
    f = builds31["partitioned"]
    codes = builds31["spss"].codes[0]
    t0 = time.perf_counter()
    sv = f.stream_lookup(codes)
    t_stream = time.perf_counter() - t0
    hi, lo = kmer_words(codes, 31)
    rng = np.random.default_rng(SEED)
    perm = rng.permutation(hi.size)
    t0 = time.perf_counter()
    rv = f.lookup_words(hi[perm], lo[perm])
    t_random = time.perf_counter() - t0
    unshuffled = np.empty_like(rv)
    unshuffled[perm] = rv
    equal = np.array_equal(sv, unshuffled)
    speedup = t_random / t_stream
    report(7, equal and speedup >= 2.0,
           f"{sv.size} consecutive queries: streaming "
           f"{1e9 * t_stream / sv.size:.0f} ns/kmer vs random "
           f"{1e9 * t_random / rv.size:.0f} ns/kmer ({speedup:.1f}x, need "
           f">= 2x); results elementwise equal: {equal}")


def test_criterion_8_succinct_oracles(rng):
    from lpmphf import EliasFanoSeq, RankBitvector, TypeSequence
    n, probes = 10 ** 5, 10 ** 4
    vals = np.sort(rng.integers(0, 10 ** 8, size=n))
    ef = EliasFanoSeq.from_values(vals, universe=10 ** 8)
    idx = rng.integers(0, n, size=probes)
    ef_ok = np.array_equal(ef.access_many(idx), vals[idx]) and \
        all(ef.access(int(i)) == int(vals[i]) for i in idx[:100])

    bits = rng.random(n) < 0.37
    bv = RankBitvector.from_bools(bits)
    cum = np.concatenate([[0], np.cumsum(bits)])
    ridx = rng.integers(0, n + 1, size=probes)
    bv_ok = np.array_equal(bv.rank1_many(ridx), cum[ridx]) and \
        all(bv.rank1(int(i)) == int(cum[i]) for i in ridx[:100])

    symbols = rng.integers(0, 4, size=n).astype(np.uint8)
    ts = TypeSequence.from_symbols(symbols)
    cums = {t: np.concatenate([[0], np.cumsum(symbols == t)]) for t in range(4)}
    t_arr = rng.integers(0, 4, size=probes)
    i_arr = rng.integers(0, n + 1, size=probes)
    want = np.array([cums[int(t)][int(i)] for t, i in zip(t_arr, i_arr)])
    ts_ok = np.array_equal(ts.rank_many(t_arr, i_arr), want) and \
        all(ts.rank(int(t), int(i)) == int(w)
            for t, i, w in zip(t_arr[:100], i_arr[:100], want[:100]))

    report(8, ef_ok and bv_ok and ts_ok,
           f"10^5-element instances, 10^4 probes exact: Elias-Fano access "
           f"{ef_ok}, bitvector rank {bv_ok}, type-sequence rank {ts_ok}")


def test_criterion_9_serialization(builds31, tmp_path, rng):
    ok = True
    parts = []
    spss = builds31["spss"]
    q_pos = rng.integers(0, spss.n, size=10 ** 4)
    hi_all, lo_all = spss.kmer_word_arrays()
    for variant in ("basic", "partitioned"):
        f = builds31[variant]
        path = tmp_path / f"{variant}.lph"
        save_structure(f, path)
        g = load_structure(path)
        same = np.array_equal(g.lookup_words(hi_all[q_pos], lo_all[q_pos]),
                              f.lookup_words(hi_all[q_pos], lo_all[q_pos]))
        ok &= same
        parts.append(f"{variant} round-trip identical on 10^4 queries: {same}")
    blob = bytearray(structure_to_bytes(builds31["basic"]))
    blob[:4] = b"XXXX"
    try:
        structure_from_bytes(bytes(blob))
        magic_ok = False
    except CorruptFile:
        magic_ok = True
    blob = bytearray(structure_to_bytes(builds31["basic"]))
    blob[4] = 0xEE
    try:
        structure_from_bytes(bytes(blob))
        version_ok = False
    except CorruptFile:
        version_ok = True
    ok &= magic_ok and version_ok
    parts.append(f"bad magic rejected: {magic_ok}, bad version rejected: "
                 f"{version_ok}")
    report(9, ok, "; ".join(parts))


def test_criterion_10_internal_mphf(rng):
    def build_timed(n, seed):
        keys = np.unique(rng.integers(0, 2 ** 62, size=int(n * 1.05),
                                      dtype=np.uint64))[:n]
        assert keys.size == n
        best = float("inf")
        f = None
        for _ in range(3):
            t0 = time.perf_counter()
            f = GeneralMphf.build(keys, seed=seed, gamma=2.0)
            best = min(best, time.perf_counter() - t0)
        return f, keys, best

    f5, keys5, t5 = build_timed(10 ** 5, seed=3)
    vals = f5.evaluate_many(keys5)
    bijective = np.array_equal(np.sort(vals), np.arange(10 ** 5))
    b = f5.bits_per_key
    f6, keys6, t6 = build_timed(10 ** 6, seed=3)
    vals6 = f6.evaluate_many(keys6)
    bijective &= np.array_equal(np.sort(vals6), np.arange(10 ** 6))
    ratio = t6 / t5
    ok = bijective and b <= 4.2 and ratio <= 15.0
    report(10, ok,
           f"bijective on 10^5 and 10^6 random keys: {bijective}; "
           f"b = {b:.3f} bits/key (<= 4.2); build time x10 keys -> "
           f"{ratio:.1f}x (<= 15x)")
