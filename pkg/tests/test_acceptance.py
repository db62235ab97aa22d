"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line with its wall time. Run
``python tests/test_acceptance.py`` to get just those lines.
"""
from __future__ import annotations

import io
import json
import math
import random
import sys
import time
from contextlib import contextmanager
from itertools import permutations
from math import comb

import pytest

from fsmat.cli import run
from fsmat.contributions import count_contributions, count_contributions_oracle, forcing_matrix
from fsmat.extremal import fs_exact, fs_naive
from fsmat.matrix import Matrix, Pattern, all_patterns, concatenate, contains
from fsmat.setfamily import (
    SetFamily,
    Subset,
    compress_family,
    down_close,
    nested_pair_count,
    sauer_shelah_threshold,
    shattered_sets,
    support_cover_peeling,
    trace_size,
)

# Verdict lines, also echoed in the pytest terminal summary (see conftest).
RESULTS: list[str] = []


@contextmanager
def criterion(number: int, title: str, limit: float):
    """Time the block, print one verdict line, and re-raise any failure."""
    t0 = time.perf_counter()
    failure = None
    try:
        yield
    except AssertionError as exc:
        failure = exc
    elapsed = time.perf_counter() - t0
    if failure is None and elapsed > limit:
        failure = AssertionError(f"took {elapsed:.2f}s, limit {limit:g}s")
    verdict = "PASS" if failure is None else "FAIL"
    detail = "" if failure is None else f" -- {str(failure).splitlines()[0]}"
    line = f"[{verdict}] criterion {number:>2}: {title} ({elapsed:.2f}s / {limit:g}s){detail}"
    RESULTS.append(line)
    print(line)
    if failure is not None:
        raise failure


def cli_json(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv + ["--json"], out, err)
    assert code == 0, err.getvalue()
    return json.loads(out.getvalue())["result"]


def test_criterion_01_quadratic_exponents():
    with criterion(1, "quadratic mode k=3..10 gives 2k/3-1 and 5k/3-1", 1.0):
        rows = cli_json(["exponents", "--table", "3..10", "--mode", "quadratic", "--tol", "1e-9"])["rows"]
        assert [r["k"] for r in rows] == list(range(3, 11))
        for r in rows:
            k = r["k"]
            assert r["converged"]
            assert abs(r["limit"] - (2 * k / 3 - 1)) < 1e-6, (k, r["limit"])
            assert abs(r["fs_exponent"] - (5 * k / 3 - 1)) < 1e-6, (k, r["fs_exponent"])


def test_criterion_02_exact_exponents():
    with criterion(2, "exact mode k=4 -> 5.6180, k=5 -> 7.3028, k=3 -> 4", 1.0):
        rows = {r["k"]: r for r in cli_json(
            ["exponents", "--table", "3..5", "--mode", "exact", "--tol", "1e-9"])["rows"]}
        e3, e4, e5 = (rows[k]["fs_exponent"] for k in (3, 4, 5))
        assert abs(e4 - 5.6180) < 5e-4, e4
        assert abs(e4 - (4 + (1 + math.sqrt(5)) / 2)) < 1e-9, e4
        assert abs(e5 - 7.3028) < 5e-4, e5
        assert abs(e5 - (5 + (1 + math.sqrt(13)) / 2)) < 1e-9, e5
        assert abs(e3 - 4.0) < 1e-9, e3


def test_criterion_03_k2_regime():
    with criterion(3, "k=2 sequence is 1/(n+1) and fs exponent tends to 2", 1.0):
        row = cli_json(["exponents", "--k", "2", "--mode", "k2", "--sequence", "101"])["rows"][0]
        seq = row["gamma_sequence"]
        assert len(seq) == 101
        worst = max(abs(g - 1 / (n + 1)) for n, g in enumerate(seq))
        assert worst < 1e-12, worst
        # Convergence is like 1/n, so the limit is only reached to about sqrt(tol).
        assert row["converged"] and abs(row["fs_exponent"] - 2) < 1e-4, row["fs_exponent"]
        exps = [2 + seq[n] for n in (1, 10, 100)]
        assert exps == sorted(exps, reverse=True)


def test_criterion_04_sauer_shelah_exhaustive():
    with criterion(4, "every family above the threshold shatters a k-set (m<=4)", 120.0):
        checked = 0
        for m in range(1, 5):
            universe = 1 << m
            for code in range(1 << universe):
                masks = frozenset(s for s in range(universe) if code >> s & 1)
                fam = SetFamily(m, masks)
                for k in (1, 2, 3):
                    if k > m or len(masks) < sauer_shelah_threshold(m, k):
                        continue
                    checked += 1
                    assert shattered_sets(fam, k), (m, sorted(masks), k)
        assert checked > 60000


def test_criterion_05_compression_trace_monotone():
    with criterion(5, "1e5 compression triples never grow a trace; down_close is sound", 60.0):
        rng = random.Random(20240605)
        for _ in range(100_000):
            m = rng.randint(1, 10)
            fam = SetFamily(m, frozenset(rng.sample(range(1 << m), rng.randint(0, min(40, 1 << m)))))
            i = rng.randint(1, m)
            s = Subset(m, rng.getrandbits(m))
            before = trace_size(fam, s)
            after = trace_size(compress_family(fam, i), s)
            assert before >= after, (m, sorted(fam.masks), i, s.mask)
            closed = down_close(fam)
            assert len(closed) == len(fam)
            assert closed.is_down_family()


def test_criterion_06_contributions_vs_oracle():
    with criterion(6, "greedy contribution count equals the oracle; additivity", 300.0):
        for m in range(1, 4):
            cols = range(1 << m)
            for n in range(0, min(8, 1 << m) + 1):
                for seq in permutations(cols, n):
                    mat = Matrix(m, seq)
                    for k in range(1, min(2, m) + 1):
                        got = count_contributions(mat, k)[0]
                        want = count_contributions_oracle(mat, k)
                        assert got == want, (mat.to_rows(), k, got, want)
        rng = random.Random(7)
        for _ in range(10_000):
            m = rng.randint(1, 4)
            mat = Matrix(m, tuple(rng.sample(range(1 << m), rng.randint(0, min(10, 1 << m)))))
            k = rng.randint(1, m)
            assert count_contributions(mat, k)[0] == count_contributions_oracle(mat, k), (mat.to_rows(), k)
        for _ in range(1_000):
            m = rng.randint(1, 5)
            cols = rng.sample(range(1 << m), rng.randint(0, 1 << m))
            cut = rng.randint(0, len(cols))
            a, b = Matrix(m, tuple(cols[:cut])), Matrix(m, tuple(cols[cut:]))
            joined, simple = concatenate(a, b)
            assert simple
            for k in range(1, m + 1):
                both = count_contributions(joined, k)[0]
                assert both >= count_contributions(a, k)[0] + count_contributions(b, k)[0]


def test_criterion_07_forcing_blocks():
    with criterion(7, "two full blocks on 3 rows contain all 16 2x2 patterns", 1.0):
        mat = forcing_matrix(3, 2, 2)
        assert mat.is_simple and mat.n == 8
        pats = list(all_patterns(2, 2))
        assert len(pats) == 16
        missing = [str(f) for f in pats if not contains(mat, f)]
        assert not missing, missing


def test_criterion_08_fs_exactness():
    with criterion(8, "fs_exact equals the naive oracle on small patterns", 300.0):
        for k, l in ((1, 1), (1, 2), (2, 1)):
            for f in all_patterns(k, l):
                for m in range(1, 4):
                    assert fs_exact(m, f).value == fs_naive(m, f), (m, str(f))
        one = Pattern.from_rows(["1"])
        for m in range(0, 5):
            assert fs_exact(m, one).value == 1
        zeros = Pattern.from_rows(["00"])
        for m in (2, 3):
            assert fs_exact(m, zeros).value == fs_naive(m, zeros) == m + 1


def test_criterion_09_peeling_contract():
    with criterion(9, "peeling transcripts on 1e4 families satisfy the contract", 60.0):
        rng = random.Random(99)
        for _ in range(10_000):
            m = rng.randint(1, 8)
            fam = SetFamily(m, frozenset(rng.sample(range(1 << m), rng.randint(0, min(60, 1 << m)))))
            t = support_cover_peeling(fam, rng.randint(1, 12))
            res = t.residuals
            assert res[0] == len(fam)
            assert all(a > b for a, b in zip(res, res[1:]))
            final = t.final_x.mask
            for j, layer in enumerate(t.cover_layers, start=1):
                assert len(layer) <= len(t.x_sequence[j])
                covered = 0
                for s in layer.masks:
                    covered |= s
                assert covered & final == final


def test_criterion_10_nested_pair_bound():
    with criterion(10, "nested pairs of down families obey C(k,a)|A^(k)|", 60.0):
        rng = random.Random(5)
        for _ in range(10_000):
            m = rng.randint(4, 8)
            fam = down_close(SetFamily(m, frozenset(rng.sample(range(1 << m), rng.randint(0, min(50, 1 << m))))))
            for k in range(1, 5):
                top = len(fam.level(k))
                for a in range(1, k + 1):
                    assert nested_pair_count(fam, a, k) <= comb(k, a) * top


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
