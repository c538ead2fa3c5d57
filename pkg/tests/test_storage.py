import numpy as np
import pytest

from lpmphf import (MinimizerScheme, build_basic, build_partitioned,
                    load_structure, save_structure)
from lpmphf.errors import CorruptFile
from lpmphf.kmers import kmer_words
from lpmphf.storage import structure_from_bytes, structure_to_bytes

from oracles import random_dna


@pytest.fixture(scope="module", params=["basic", "partitioned"])
def built(request, small_spss):
    scheme = MinimizerScheme(k=31, m=15, seed=41)
    builder = build_basic if request.param == "basic" else build_partitioned
    return builder(small_spss, scheme)


def test_round_trip_answers_identically(built, small_spss, tmp_path, rng):
    p = tmp_path / "f.lph"
    save_structure(built, p)
    back = load_structure(p)
    assert back.variant == built.variant
    assert back.n == built.n and back.scheme == built.scheme
    # member queries
    for codes in small_spss.codes:
        assert np.array_equal(back.stream_lookup(codes),
                              built.stream_lookup(codes))
    # arbitrary queries, checked and unchecked
    q = random_dna(rng, 10_000 + 30)
    from lpmphf.kmers import encode_bases
    hi, lo = kmer_words(encode_bases(q), 31)
    for checked in (False, True):
        assert np.array_equal(back.lookup_words(hi, lo, checked=checked),
                              built.lookup_words(hi, lo, checked=checked))


def test_reserialization_is_identical(built):
    blob = structure_to_bytes(built)
    again = structure_to_bytes(structure_from_bytes(blob))
    assert blob == again


def test_build_deterministic(small_spss):
    scheme = MinimizerScheme(k=31, m=15, seed=7)
    a = structure_to_bytes(build_partitioned(small_spss, scheme))
    b = structure_to_bytes(build_partitioned(small_spss, scheme))
    assert a == b
    c = structure_to_bytes(
        build_partitioned(small_spss, MinimizerScheme(k=31, m=15, seed=8)))
    assert a != c


def test_bad_magic_rejected(built):
    blob = bytearray(structure_to_bytes(built))
    blob[:4] = b"NOPE"
    with pytest.raises(CorruptFile):
        structure_from_bytes(bytes(blob))


def test_bad_version_rejected(built):
    blob = bytearray(structure_to_bytes(built))
    blob[4] = 99
    with pytest.raises(CorruptFile):
        structure_from_bytes(bytes(blob))


def test_truncated_rejected(built):
    blob = structure_to_bytes(built)
    with pytest.raises(CorruptFile):
        structure_from_bytes(blob[:len(blob) // 2])
    with pytest.raises(CorruptFile):
        structure_from_bytes(blob[:10])


def test_trailing_garbage_rejected(built):
    blob = structure_to_bytes(built) + b"\x00"
    with pytest.raises(CorruptFile):
        structure_from_bytes(blob)
