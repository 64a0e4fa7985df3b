"""The nine acceptance criteria, one test each.

Each test carries a ``criterion`` marker; ``conftest.py`` turns the outcomes
into PASS/FAIL lines at the end of the run.
"""

import itertools
import json
import subprocess
import sys
from collections import Counter

import numpy as np
import pytest

from largeness.algebra import PRIMES, Poly, rank_rational
from largeness.kempfness import (
    ROUNDING_SLACK,
    FlowConfig,
    kempf_ness_flow,
    membership_check,
    rank_sample,
)
from largeness.koszul import (
    KoszulComplex,
    KoszulLimits,
    component_analysis,
    euler_checks,
    fd_condition_check,
    fd_report,
    homology_table,
    one_large_consistency,
    regular_sequence_check,
)
from largeness.moment import jacobian_matrix, moment_components
from largeness.oracle import classical_verdict, sl2_verdict
from largeness.repspec import build_classical, build_sl2, build_torus
from largeness.torus import largeness_verdict, stability_check

TOL = 1e-10


def random_weights(rng, k_max, n_max, full_rank):
    while True:
        k = int(rng.integers(1, k_max + 1))
        n = int(rng.integers(k if full_rank else 1, n_max + 1))
        w = rng.integers(-3, 4, size=(k, n)).tolist()
        if not full_rank or rank_rational(w) == k:
            return w


def regular(action):
    return regular_sequence_check(moment_components(action))


def fd(action, d):
    return fd_condition_check(jacobian_matrix(action), d)


# -- 1 ----------------------------------------------------------------------------

@pytest.mark.criterion(1, "stability (exact LP) == one_large (FPIG + 1-modular) on 250 random full-rank tori")
def test_criterion_1_stability_iff_one_large():
    rng = np.random.default_rng(101)
    mismatches = []
    for _ in range(250):
        w = random_weights(rng, 3, 8, full_rank=True)
        if stability_check(w).stable != largeness_verdict(w).one_large:
            mismatches.append(w)
    assert not mismatches


# -- 2 ----------------------------------------------------------------------------

@pytest.mark.criterion(2, "two copies of C^2 under SL2: dim 5 CI, (F_0) not (F_1), strict saturation, two primes")
def test_criterion_2_two_copies_of_the_plane():
    a = build_sl2([1, 1])
    m = moment_components(a)
    r = regular_sequence_check(m, PRIMES)
    assert r.regular and r.dimension == 5
    j = jacobian_matrix(a)
    assert fd_condition_check(j, 0, PRIMES) and not fd_condition_check(j, 1, PRIMES)
    det = Poly({(1, 0, 0, 1): 1, (0, 1, 1, 0): -1}, 4)
    ev = component_analysis(m, det, PRIMES)
    assert ev.strict and ev.dimension == ev.ideal_dimension == 5 and ev.reducible


# -- 3 ----------------------------------------------------------------------------

@pytest.mark.criterion(3, "regular sequence == 0-modular on 60 random tori with n <= 5")
def test_criterion_3_regular_iff_zero_modular():
    rng = np.random.default_rng(303)
    mismatches = []
    for _ in range(60):
        w = random_weights(rng, 3, 5, full_rank=False)
        zero_modular = largeness_verdict(w).max_modular is not None
        if regular(build_torus(w)).regular != zero_modular:
            mismatches.append(w)
    assert not mismatches


# -- 4 ----------------------------------------------------------------------------

def _canonical(cols, k):
    """Representative under column permutations and signed row permutations."""
    best = None
    for perm in itertools.permutations(range(k)):
        for signs in itertools.product((1, -1), repeat=k):
            key = tuple(sorted(tuple(s * c[r] for s, r in zip(signs, perm)) for c in cols))
            best = key if best is None or key < best else best
    return best


def locally_free_small_tori():
    seen = set()
    for k, entries in ((1, range(-3, 4)), (2, range(-2, 3))):
        columns = list(itertools.product(entries, repeat=k))
        for n in range(1, 5):
            for cols in itertools.combinations_with_replacement(columns, n):
                w = [[c[r] for c in cols] for r in range(k)]
                if rank_rational(w) == k:
                    seen.add((k, _canonical(cols, k)))
    return [[[c[r] for c in cols] for r in range(k)] for k, cols in sorted(seen)]


@pytest.mark.criterion(4, "(F_d) == (max_modular >= d) for d <= 2 on 3200 enumerated locally free tori, n <= 4, k <= 2")
def test_criterion_4_fd_iff_modular():
    specs = locally_free_small_tori()
    assert len(specs) > 3000
    mismatches = []
    for w in specs:
        mm = largeness_verdict(w).max_modular
        rep = fd_report(jacobian_matrix(build_torus(w)))
        for d in (0, 1, 2):
            if rep.holds(d) != (mm is not None and mm >= d):
                mismatches.append((w, d))
    assert not mismatches


# -- 5 ----------------------------------------------------------------------------

def multisets_up_to(total):
    """Multisets of binary form degrees whose module dimension is at most ``total``."""
    def parts(rest, largest):
        if rest == 0:
            yield []
            return
        for p in range(min(rest, largest), 0, -1):
            for tail in parts(rest - p, p):
                yield [p] + tail
    for dim in range(1, total + 1):
        for part in parts(dim, dim):
            yield [p - 1 for p in part]


@pytest.mark.criterion(5, "SL2 table on every multiset of dimension <= 10, symbolic confirmations")
def test_criterion_5_sl2_table():
    exceptions = {(1,), (1, 1), (2,)}
    checked = 0
    for ds in multisets_up_to(10):
        v = sl2_verdict(ds)
        if 0 in ds:
            assert not v.applicable
            continue
        assert v.applicable and v.one_large == (tuple(sorted(ds)) not in exceptions)
        cons = one_large_consistency(build_sl2(ds), v.one_large, semisimple=True)
        assert cons.consistent, (ds, cons.contradictions)
        checked += 1
    assert checked == 41
    for ds in ([2], [1, 1]):
        assert not fd(build_sl2(ds), 1)
    for ds in ([3], [1, 1, 1], [1, 2]):
        a = build_sl2(ds)
        assert regular(a).regular and fd(a, 1)


# -- 6 ----------------------------------------------------------------------------

@pytest.mark.criterion(6, "Sp2: p = 3 passes, p = 2 fails oracle and (F_1); SO3 with p = 2 is oracle-true and regular")
def test_criterion_6_classical_minimality():
    sp3, sp2 = build_classical("sp", 1, 3), build_classical("sp", 1, 2)
    assert classical_verdict("sp", 1, 3).one_large and fd(sp3, 1) and regular(sp3).regular
    assert not classical_verdict("sp", 1, 2).one_large and not fd(sp2, 1)
    so = build_classical("so", 3, 2)
    assert classical_verdict("so", 3, 2).one_large and regular(so).regular


# -- 7 ----------------------------------------------------------------------------

WIDE = KoszulLimits(max_slice=2_000_000)


def koszul_corpus():
    rng = np.random.default_rng(707)
    tori = [build_torus(random_weights(rng, 2, 4, full_rank=False)) for _ in range(12)]
    sl2 = [build_sl2(ds) for ds in ([1, 1], [3], [1, 2], [4], [1, 1, 1])]
    return tori + sl2 + [build_classical("so", 3, 2)]


@pytest.mark.slow
@pytest.mark.criterion(7, "Koszul homology vanishes on regular instances up to 2k+4; R1 has H_1 != 0; Euler identity")
def test_criterion_7_koszul_soundness():
    n_regular = 0
    for a in koszul_corpus():
        m = moment_components(a)
        d_max = 2 * m.k + 4
        if regular_sequence_check(m).regular:
            n_regular += 1
            table = homology_table(m, d_max, PRIMES, WIDE)
            assert all(h == 0 for _, _, h in table), a.label
        for p in PRIMES:
            assert all(c["ok"] for c in euler_checks(m, range(d_max + 1), p, WIDE)), (a.label, p)
    assert n_regular >= 10
    r1 = moment_components(build_sl2([1]))
    assert not regular_sequence_check(r1).regular
    for p in PRIMES:
        kc = KoszulComplex(r1, p)
        assert any(kc.homology(1, d) for d in range(7))
        assert all(c["ok"] for c in euler_checks(r1, range(7), p))


# -- 8 ----------------------------------------------------------------------------

def assert_monotone(result):
    norms = [f for _, f, _ in result.trace]
    assert all(b <= a * (1 + ROUNDING_SLACK) for a, b in zip(norms, norms[1:]))


@pytest.mark.criterion(8, "Kempf-Ness flow: closed form, null cone, membership, monotone descent and cone property")
def test_criterion_8_kempf_ness_numerics():
    a = build_torus([[1, -1]])
    r = kempf_ness_flow(a, [2, 1])
    assert r.status == "converged" and r.rho_norm <= TOL
    assert abs(r.norm ** 2 - 4) <= 1e-8 and rank_sample(a, r.vector) == 1

    rng = np.random.default_rng(808)
    b = build_torus([[1, 1]])
    starts = [[1, 0], [0, 1j], [3, -2]] + [rng.standard_normal(2) + 1j * rng.standard_normal(2) for _ in range(10)]
    assert all(kempf_ness_flow(b, v).status == "null_cone" for v in starts)

    # multipliers +-2^e and +-i 2^e keep the pair exactly dependent in floating point
    pair = build_sl2([1, 1])
    for _ in range(20):
        v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        c = 2.0 ** rng.integers(-3, 4) * (1, -1, 1j, -1j)[rng.integers(4)]
        assert kempf_ness_flow(pair, np.concatenate([v, c * v])).status == "null_cone"

    actions = [build_torus([[1, -1]]), build_torus([[1, -1, 2, -3], [0, 1, 1, -2]]), build_sl2([3]),
               build_sl2([1, 2]), build_sl2([1, 1, 1]), build_classical("so", 3, 2),
               build_classical("gl", 2, 2, 2), build_torus([[1, 1]]), build_sl2([2]), build_sl2([4])]
    cfg = FlowConfig(trace=True)
    runs = 0
    for action in actions:
        for _ in range(10):
            v0 = rng.standard_normal(action.dim_v) + 1j * rng.standard_normal(action.dim_v)
            lam = rng.uniform(0.25, 4.0)
            r1 = kempf_ness_flow(action, v0, cfg)
            r2 = kempf_ness_flow(action, lam * v0, cfg)
            assert_monotone(r1)
            assert_monotone(r2)
            assert r1.status == r2.status != "max_iter"
            if r1.converged:
                assert r1.rho_norm <= TOL
                assert membership_check(action, r1.vector) <= 10 * TOL
                assert membership_check(action, r2.vector) <= 10 * TOL
                assert abs(r2.norm - lam * r1.norm) <= 1e-6 * lam * r1.norm
            runs += 1
    assert runs == 100


# -- 9 ----------------------------------------------------------------------------

SUITE = [
    {"group": {"type": "torus", "rank": 1}, "rep": {"weights": [[1, -1]]}},
    {"group": {"type": "torus", "rank": 2}, "rep": {"weights": [[1, 0, -1, 0], [0, 1, 0, -1]]}},
    {"group": {"type": "torus", "rank": 1}, "rep": {"weights": [[1, 1]]}},
    {"group": {"type": "sl2"}, "rep": {"binary_forms": [1, 1]}, "witness": "x1*x4 - x2*x3"},
    {"group": {"type": "sl2"}, "rep": {"binary_forms": [3]}},
    {"group": {"type": "classical", "family": "sp", "n": 1}, "rep": {"p": 2, "q": 0}},
]


@pytest.mark.slow
@pytest.mark.criterion(9, "byte-identical reports across two runs with the same seed and config")
def test_criterion_9_determinism(tmp_path):
    paths = []
    for i, doc in enumerate(SUITE):
        p = tmp_path / f"spec{i}.json"
        p.write_text(json.dumps(doc))
        paths.append(str(p))
    outputs = []
    for run in range(2):
        out = tmp_path / f"report{run}.json"
        proc = subprocess.run(
            [sys.executable, "-m", "largeness", "verify", *paths,
             "--seed", "9", "--degree-bound", "6", "--output", str(out)],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0, proc.stderr
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
    reports = json.loads(outputs[0])
    assert [r["exit_code"] for r in reports] == [0] * len(SUITE)
    assert Counter(r["command"] for r in reports) == {"verify": len(SUITE)}
