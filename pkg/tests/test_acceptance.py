"""End-to-end acceptance checks; each test carries its criterion number."""

import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from diffam import concentration as conc
from diffam.diff import (
    conjecture_rhs, difference_family, difference_size, maximal_extension,
    partition_check,
)
from diffam.family import SetFamily, is_intersecting, mu_p
from diffam.junta import (
    Junta, a3_closed_form, a3_gap, a3_threshold, as_junta, build_a_p, fano_plane,
    full_star, junta_diff_count, junta_family,
)
from diffam.search import certify_counterexample, random_junta, verify_conjecture
from diffam.shadow import katona_criterion, kk_verify, lovasz_x, real_binomial

from oracles import a_p, diff_family, k_sets, masks_to_sets, star, star_rhs

criterion = pytest.mark.criterion
HALF = Fraction(1, 2)


def _star_cases():
    out = []
    for k in range(1, 33):
        for n in range(2 * k, 65):
            if math.comb(n, k) <= 5000:
                out.append((n, k))
    return out


@criterion(1, "star difference count equals the binomial sum")
def test_star_identity():
    cases = _star_cases()
    assert len(cases) > 100
    for n, k in cases:
        assert difference_size(full_star(n, k)) == conjecture_rhs(n, k), (n, k)
    assert conjecture_rhs(10, 3) == 46
    # frozenset oracle on the small end of the range
    for n, k in [(n, k) for n, k in cases if n <= 12]:
        assert len(diff_family(star(n, k))) == star_rhs(n, k)


@criterion(2, "A_3 closed form and gap identity")
@pytest.mark.parametrize("n,k,gap", [(10, 4, -1), (11, 4, 7)])
def test_a3_closed_form_and_gap(n, k, gap):
    brute_a3 = len(diff_family(a_p(n, k, 3)))
    brute_star = len(diff_family(star(n, k)))
    assert difference_size(build_a_p(n, k, 3)) == brute_a3
    assert a3_closed_form(n, k) == brute_a3
    assert a3_gap(n, k) == brute_star - brute_a3 == gap


# exact |D(A_5(13, 5))| from the first oracle run
AK_13_5_DIFF = 823


@criterion(3, "counterexample certification")
def test_counterexamples_certified():
    a3 = build_a_p(10, 4, 3)
    assert certify_counterexample(a3)
    ak = build_a_p(13, 5, 5)
    # star minus the 35 sets {1} + C([7, 13], 4), plus [2, 6]
    assert len(ak) == math.comb(12, 4) - math.comb(7, 4) + 1 == 461
    assert len(ak) == len(a_p(13, 5, 5))
    assert certify_counterexample(ak)
    brute = len(diff_family(a_p(13, 5, 5)))
    assert brute >= 823 > conjecture_rhs(13, 5) == 794
    assert brute == difference_size(ak) == AK_13_5_DIFF


@criterion(4, "A_k gain and loss at (13, 5)")
def test_ak_gain_loss():
    d_star = diff_family(star(13, 5))
    d_ak = diff_family(a_p(13, 5, 5))
    lost = d_star - d_ak
    assert lost == {frozenset(c) for c in itertools.combinations(range(7, 14), 4)}
    assert len(lost) == 35
    assert len(d_ak - d_star) >= 64


def _random_intersecting_juntas(count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        k = 2 + len(out) % 7  # cycle k over 2..8
        n = rng.randint(2 * k + 1, 4 * k)
        width = rng.randint(2, min(5, n - 1))
        j = random_junta(width, k, rng)
        fam = junta_family(j, n, k)
        if not len(fam) or len(fam) > 12000 or not is_intersecting(fam):
            continue
        out.append((j, n, k))
    return out


@criterion(5, "junta decomposition matches brute force")
def test_junta_decomposition():
    cases = _random_intersecting_juntas(50, seed=5)
    assert {k for _, _, k in cases} == set(range(2, 9))
    for j, n, k in cases:
        assert junta_diff_count(j, n, k) == difference_size(junta_family(j, n, k)), (j, n, k)
    # the A_p juntas themselves
    for p, n, k in [(2, 9, 3), (3, 10, 4), (3, 11, 4), (4, 12, 5), (5, 13, 5), (3, 16, 6)]:
        j = as_junta(p)
        assert junta_diff_count(j, n, k) == difference_size(junta_family(j, n, k))
        assert junta_family(j, n, k) == build_a_p(n, k, p)


@criterion(6, "exhaustive verification over maximal intersecting families")
@pytest.mark.parametrize("n,k", [(5, 2), (6, 2), (7, 2), (7, 3)])
def test_exhaustive_verification(n, k):
    rep = verify_conjecture(n, k, "exhaustive-maximal")
    rhs = conjecture_rhs(n, k)
    assert rep.rhs == rhs
    if (n, k) == (7, 3):
        assert rhs == 22
        assert difference_size(full_star(7, 3)) == 22
        assert difference_size(fano_plane()) == 22
    assert rep.verdict == "conjecture-holds", f"max |D| = {rep.max_value} > {rhs}: {rep.worst_family.sets()}"
    assert rep.max_value == rhs


def _random_uniform(rng, n, k, size):
    pool = list(itertools.combinations(range(1, n + 1), k))
    size = min(size, len(pool))
    return SetFamily.from_sets(rng.sample(pool, size), n, k)


@criterion(7, "Kruskal-Katona in Lovasz form")
def test_kruskal_katona():
    rng = random.Random(7)
    checked = 0
    for _ in range(1000):
        k = rng.randint(1, 6)
        n = rng.randint(k + 1, 20)
        f = _random_uniform(rng, n, k, rng.randint(1, 60))
        for i in range(k):
            r = kk_verify(f, i)
            assert r.holds, (f, i, r)
            checked += 1
        x = lovasz_x(len(f), k, n)
        assert abs(real_binomial(x, k) - len(f)) <= 1e-9 * len(f)
    assert checked > 2000


@criterion(8, "Katona criterion agrees with pairwise cross-intersection")
def test_katona_criterion():
    rng = random.Random(8)
    agree = outcomes = 0
    seen = set()
    for _ in range(1000):
        n = rng.randint(2, 14)
        k = rng.randint(1, n - 1)
        ell = rng.randint(1, n - k)
        # small families hit both outcomes often
        f = _random_uniform(rng, n, k, rng.randint(1, 6))
        g = _random_uniform(rng, n, ell, rng.randint(1, 6))
        pair = all(set(a) & set(b) for a in f.sets() for b in g.sets())
        assert katona_criterion(f, g) == pair
        agree += 1
        seen.add(pair)
    assert agree == 1000 and seen == {True, False}


MATCHING_GRID = [
    # m, ell, t, a, family
    (20, 2, 5, 1.0, "star"),
    (20, 2, 5, 0.5, "star"),
    (20, 2, 5, 0.1, "star"),
    (20, 2, 10, 0.5, "random"),
    (30, 2, 10, 1.0, "star"),
    (30, 2, 15, 0.5, "random"),
    (12, 3, 4, 0.5, "clique3"),
    (16, 4, 4, 0.3, "random"),
    (24, 3, 8, 0.25, "star"),
    (18, 2, 9, 0.2, "random"),
    (10, 2, 5, 0.5, "star"),
    (20, 2, 5, 2.0, "random"),
]
COMPLEMENT_GRID = [
    # m, ell, ell', t, a, family
    (30, 2, 4, 10, 1.0, "star"),
    (30, 2, 4, 10, 2.0, "star"),
    (30, 2, 4, 10, 0.5, "random"),
    (20, 2, 2, 9, 0.1, "random"),
    (24, 3, 3, 7, 0.3, "clique3"),
    (16, 2, 6, 5, 0.2, "star"),
    (40, 2, 10, 15, 0.5, "random"),
    (20, 2, 4, 8, 1.0, "all"),
]
SAMPLES = 100_000


def _conc_family(kind, m, ell, seed):
    if kind == "star":
        return full_star(m, ell)
    if kind == "clique3":
        return conc.element_clique(m, ell, 3)
    if kind == "all":
        return SetFamily.all_k_sets(m, ell)
    return conc.random_uniform_family(m, ell, 0.5, np.random.default_rng(seed))


@criterion(9, "concentration tails within three standard errors")
@pytest.mark.parametrize("idx", range(len(MATCHING_GRID)))
def test_matching_concentration(idx):
    m, ell, t, a, kind = MATCHING_GRID[idx]
    g = _conc_family(kind, m, ell, seed=idx)
    reports = conc.verify_matching_conc(g, t, a, SAMPLES, seed=900 + idx)
    for r in reports:
        assert r.empirical_tail - 3 * r.standard_error <= r.theoretical_bound, r
        assert r.verdict == "consistent"
    mean, var = reports[0].sample_mean, reports[0].sample_variance
    sigma = math.sqrt(var / SAMPLES)
    assert abs(mean - reports[0].alpha * t) <= 4 * sigma + 1e-12


@criterion(9, "concentration tails within three standard errors")
@pytest.mark.parametrize("idx", range(len(COMPLEMENT_GRID)))
def test_complement_concentration(idx):
    m, ell, ell_prime, t, a, kind = COMPLEMENT_GRID[idx]
    g = _conc_family(kind, m, ell, seed=100 + idx)
    for tail in ("lower", "upper"):
        r = conc.verify_complement_conc(g, ell_prime, t, a, SAMPLES, seed=950 + idx, tail=tail)
        assert r.empirical_tail - 3 * r.standard_error <= r.theoretical_bound, r
        assert r.verdict == "consistent"


def _random_intersecting(rng, n):
    fam = []
    for _ in range(rng.randint(1, 3 * n)):
        s = frozenset(e for e in range(1, n + 1) if rng.random() < rng.choice((0.3, 0.5, 0.7)))
        if s and all(s & t for t in fam):
            fam.append(s)
    if not fam:
        fam = [frozenset({1})]
    return SetFamily.from_sets(fam, n)


@criterion(10, "maximal extension partitions the power set")
def test_extension_structure():
    rng = random.Random(10)
    for _ in range(100):
        n = rng.randint(2, 12)
        f = _random_intersecting(rng, n)
        g = maximal_extension(f)
        assert f.is_subfamily(g)
        assert len(g) == 2 ** (n - 1)
        assert partition_check(g)
        assert mu_p(g, HALF) == HALF
        assert mu_p(difference_family(g), HALF) == HALF
        assert mu_p(difference_family(f), HALF) <= HALF


@criterion(11, "A_3 threshold consistency")
def test_threshold_consistency():
    for k in range(4, 41):
        thr = a3_threshold(k)
        for n in range(2 * k + 1, 4 * k + 1):
            gap = a3_gap(n, k)
            # below the larger root A_3 wins (gap < 0); above it the star wins
            if n > thr:
                assert gap > 0, (n, k)
            elif n < thr:
                assert gap < 0, (n, k)
            else:
                assert gap == 0
    k = 10**6
    assert abs(a3_threshold(k) / k - (3 + math.sqrt(5)) / 2) < 1e-3


@criterion(12, "Marica-Schonheim inequality")
def test_marica_schonheim():
    rng = np.random.default_rng(12)
    for _ in range(10_000):
        n = int(rng.integers(1, 17))
        size = int(rng.integers(1, min(2**n, 60) + 1))
        masks = rng.choice(2**n, size=size, replace=False).astype(np.uint64)
        f = SetFamily(n, masks)
        assert difference_size(f) >= len(f)


def test_oracle_sanity():
    """The frozenset oracles agree with the package on tiny inputs."""
    f = SetFamily.from_sets([(1, 2), (2, 3), (1, 3)], 3)
    assert set(masks_to_sets(difference_family(f).masks)) == diff_family([frozenset(s) for s in f.sets()])
    assert len(k_sets(5, 2)) == 10
    assert Junta.from_sets(2, [(1,), (1, 2)]).width == 2
