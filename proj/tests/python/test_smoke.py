import math
import random

import pytest

import fastmm


def naive(a, b):
    return [[sum(a[i][j] * b[j][h] for j in range(len(b))) for h in range(len(b[0]))] for i in range(len(a))]


@pytest.mark.parametrize("alg", ["naive", "strassen", "winograd"])
def test_multiply_matches_naive(alg):
    rng = random.Random(7)
    for n in (1, 3, 4, 7):
        a = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        b = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        out = fastmm.multiply(a, b, alg=alg, cutoff=1)
        assert out["product"] == naive(a, b)


def test_big_integers_survive():
    big = 10**40 + 3
    out = fastmm.multiply([[big, 1], [0, 1]], [[big, 0], [2, 1]], alg="strassen")
    assert out["product"] == [[big * big + 2, 1], [2, 1]]


def test_strassen_counts():
    a = [[1] * 8 for _ in range(8)]
    assert fastmm.multiply(a, a, alg="strassen", cutoff=1)["mults"] == 343
    assert fastmm.multiply(a, a, alg="naive")["mults"] == 512


def test_verify_and_export():
    for name in ("strassen", "winograd", "complex_mult"):
        ok, msg = fastmm.verify_builtin(name)
        assert ok, msg
    text = fastmm.export_builtin("strassen")
    assert fastmm.verify_text(text)[0]
    broken = text.replace("W 6 0 1", "W 6 0 -1")
    assert broken != text
    assert not fastmm.verify_text(broken)[0]


def test_aggregation_ranks():
    assert fastmm.aggregate("two", 2, 2, 2)["rank"] == 20
    assert fastmm.aggregate("apa", 7, 1, 7)["border_rank"] == 63
    three = fastmm.aggregate("three", 1, 1, 1)
    assert three["rank"] == three["aggregates"] + three["corrections"]


def test_apa_lift_exact():
    a = [[[1, 2], [3, 4]], [[5, 6], [7, 8]]]
    b = [[[1, 0], [2, 1]], [[0, 1], [1, 3]]]
    got = fastmm.apa_lift(2, 2, 2, a, b)
    # Second problem is MM(k, n, m) with the same sizes here.
    assert got == [naive(a[0], b[0]), naive(a[1], b[1])]


def test_exponents():
    assert fastmm.exponent_from_rank(2, 2, 2, 7) == pytest.approx(math.log2(7))
    assert fastmm.apa_exponent(7, 1, 7) < 2.66
    rows = fastmm.history()
    assert ("1a", "unrestricted", "2.3728639", "LG14", 2014) in rows


def test_binseg():
    assert fastmm.binseg_inner([1, 2, 3], [3, 4, 5], 2, 3) == 26
    assert fastmm.binseg_sum([7, 7, 7, 7], 3) == 28
    assert fastmm.binseg_poly_mult([1, 2], [3, 4], 3) == [3, 10, 8]
    with pytest.raises(Exception):
        fastmm.binseg_inner([9], [1], 2, 1)
