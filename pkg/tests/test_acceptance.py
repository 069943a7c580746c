"""End-to-end checks, one per headline claim the package makes.

Each test is self-contained, prints one pass/fail line under pytest -v,
and asserts its own wall-clock budget so a regression in the search core
shows up here and not only as a slow CI run.
"""

import json
import math
import random
import time
from itertools import combinations

from blocksets.arrangement import (arrangement_make, complement,
                                   evaluate_form, flats_in_complement)
from blocksets.blocking import (build_instance, classify_arrangement,
                                exhaustive_oracle, is_blocking, is_minimal,
                                join_blocking, make_instance, min_blocking_set,
                                minimalize, restrict_blocking)
from blocksets.braid import (braid_arrangement, braid_complement_points,
                             braid_existence, braid_transversal,
                             escape_parameter, line_in_complement)
from blocksets.cli import main
from blocksets.geometry import (AFFINE, PROJECTIVE, flats_within, span, space)


def _parse_pt(s):
    return tuple(int(c) for c in s.split(","))


def test_contained_line_census_through_cli(capsys):
    start = time.monotonic()
    for q, expect in ((3, 2), (4, 6), (5, 24)):
        assert main(["braid", "--lines", "--q", str(q)]) == 0
        rep = json.loads(capsys.readouterr().out)
        lines = rep["lines"]
        assert len(lines) == expect
        sp = space(AFFINE, q, q)
        fq = sp.field
        for line in lines:
            pts = [_parse_pt(s) for s in line]
            idx = set(sp.index_of(p) for p in pts)
            for p in pts:
                shifted = tuple(fq.add(c, 1) for c in p)
                assert sp.index_of(shifted) in idx  # direction (1,...,1)
        comp = complement(sp, braid_arrangement(sp))
        enumerated = [[",".join(str(c) for c in sp.points[p]) for p in fl.points]
                      for fl in flats_in_complement(comp, 1)]
        assert lines == enumerated
    assert time.monotonic() - start < 5.0


def test_escape_parameter_biconditional_exhaustive():
    start = time.monotonic()
    bad = []
    for q in (3, 4):
        sp = space(AFFINE, q, q)
        fq = sp.field
        members = [sp.points[i] for i in braid_complement_points(sp)]
        for x, y in combinations(members, 2):
            hit = escape_parameter(sp, x, y)
            contained = line_in_complement(sp, x, y)
            if (hit is None) != contained:
                bad.append((q, x, y))
                continue
            if hit is None:
                continue
            (i, j), t0, P = hit
            # documented parametrization: P = y + t0 (x - y)
            recomputed = tuple(fq.add(b, fq.mul(t0, fq.sub(a, b)))
                               for a, b in zip(x, y))
            if P != recomputed or P[i] != P[j] or t0 in (0, 1):
                bad.append((q, x, y))
    assert bad == []
    assert time.monotonic() - start < 10.0


def test_transversal_is_minimal_blocking():
    start = time.monotonic()
    for q in (3, 4, 5):
        sp = space(AFFINE, q, q)
        inst = build_instance(sp, braid_arrangement(sp), q - 1, "contained")
        tv = braid_transversal(sp)
        assert len(tv) == math.factorial(q - 1)
        assert is_blocking(inst, tv)
        assert is_minimal(inst, tv)
    assert time.monotonic() - start < 5.0


def test_projective_existence_dichotomy():
    start = time.monotonic()
    for q in (2, 3, 4, 5):
        for n in range(1, q + 2):
            out = braid_existence(PROJECTIVE, n, q, t=1, scope="touching")
            if n > q - 1:
                assert out.verdict == "empty"
                assert out.universe_size == 0
            else:
                assert out.verdict == "exists"
                assert out.universe_size > 0
                assert is_blocking(out.instance, out.result.witness)
    assert time.monotonic() - start < 60.0


def test_small_plane_minima_against_full_oracle():
    start = time.monotonic()
    sp = space(PROJECTIVE, 2, 3)
    inst = build_instance(sp, arrangement_make(sp, []), 1, "contained")
    res = min_blocking_set(inst, require_nontrivial=True)
    ora = exhaustive_oracle(inst, require_nontrivial=True)
    assert res.verdict == ora.verdict == "exists"
    assert res.size == ora.size == 6
    assert res.witness == ora.witness

    one_line = arrangement_make(sp, [(1, 0, 0)])
    ainst = build_instance(sp, one_line, 1, "touching")
    assert len(ainst.universe) == 9
    ares = min_blocking_set(ainst, require_nontrivial=True)
    aora = exhaustive_oracle(ainst, require_nontrivial=True)
    assert ares.verdict == aora.verdict == "not-exists"

    cls = classify_arrangement(sp, one_line, t=1, scope="touching",
                               convention="nontrivial")
    assert cls.category == "blocking-arrangement"
    assert cls.minimal is True
    assert len(one_line.forms) == 1
    assert time.monotonic() - start < 10.0


def test_minimum_equals_flat_of_level_dimension():
    start = time.monotonic()
    for n, q, t in ((2, 2, 1), (2, 3, 1), (3, 2, 1), (3, 2, 2), (3, 3, 1)):
        sp = space(PROJECTIVE, n, q)
        inst = build_instance(sp, arrangement_make(sp, []), t, "contained")
        res = min_blocking_set(inst)
        expect = (q ** (t + 1) - 1) // (q - 1)
        assert res.size == expect
        fl = span(sp, res.witness)
        assert fl.d == t
        assert fl.points == res.witness  # the witness is exactly a t-flat
    assert time.monotonic() - start < 60.0


def test_larger_plane_minima():
    start = time.monotonic()
    sp4 = space(PROJECTIVE, 2, 4)
    inst4 = build_instance(sp4, arrangement_make(sp4, []), 1, "contained")
    res4 = min_blocking_set(inst4, require_nontrivial=True)
    assert (res4.verdict, res4.size) == ("exists", 7)
    ora4 = exhaustive_oracle(inst4, require_nontrivial=True, size_cap=7)
    assert (ora4.verdict, ora4.size) == ("exists", 7)
    wit = set(res4.witness)
    for tr in inst4.family:
        assert len(wit & set(tr)) in (1, 3)  # subplane intersection pattern

    sp5 = space(PROJECTIVE, 2, 5)
    inst5 = build_instance(sp5, arrangement_make(sp5, []), 1, "contained")
    res5 = min_blocking_set(inst5, require_nontrivial=True)
    assert (res5.verdict, res5.size) == ("exists", 9)

    sp7 = space(PROJECTIVE, 2, 7)
    inst7 = build_instance(sp7, arrangement_make(sp7, []), 1, "contained")
    res7 = min_blocking_set(inst7, require_nontrivial=True, size_cap=14)
    assert (res7.verdict, res7.size) == ("exists", 12)
    assert is_blocking(inst7, res7.witness)
    assert time.monotonic() - start < 300.0


def _holds(inst, pts, nontrivial):
    """Re-check a witness from the raw traces, bypassing the predicates."""
    s = set(pts)
    if not s <= set(inst.universe):
        return False
    for tr in inst.family:
        if not any(p in s for p in tr):
            return False
    if nontrivial:
        for tr in inst.forbidden:
            if set(tr) <= s:
                return False
    return True


def test_randomized_instances_agree_with_oracle():
    start = time.monotonic()
    rng = random.Random(20260817)
    pool = [space(PROJECTIVE, 2, 2), space(PROJECTIVE, 2, 3),
            space(AFFINE, 2, 3), space(AFFINE, 3, 2),
            space(PROJECTIVE, 3, 2), space(AFFINE, 2, 4)]
    for case in range(200):
        sp = rng.choice(pool)
        t = rng.choice([1] if sp.n == 2 else [1, 2])
        base = build_instance(sp, arrangement_make(sp, []), t, "contained")
        k = rng.randint(1, len(base.family))
        family = tuple(sorted(rng.sample(base.family, k)))
        nontrivial = rng.random() < 0.3
        forbidden = base.forbidden if nontrivial else ()
        inst = make_instance(sp, t, base.universe, family, forbidden)
        cap = rng.randint(2, 5) if rng.random() < 0.3 else None
        if nontrivial and cap is None and sp.npoints > 13:
            cap = 6  # keep the exhaustive side inside its budget
        res = min_blocking_set(inst, require_nontrivial=nontrivial,
                               size_cap=cap)
        ora = exhaustive_oracle(inst, require_nontrivial=nontrivial,
                                size_cap=cap)
        assert res.verdict == ora.verdict, (case, sp, t)
        assert res.size == ora.size, (case, sp, t)
        if res.witness is not None:
            assert _holds(inst, res.witness, nontrivial), (case, sp, t)
            assert _holds(inst, ora.witness, nontrivial), (case, sp, t)
    assert time.monotonic() - start < 120.0


def test_restriction_keeps_blocking_property():
    start = time.monotonic()
    rng = random.Random(1824)
    pool = [space(PROJECTIVE, 3, 2), space(AFFINE, 3, 2),
            space(PROJECTIVE, 3, 3), space(AFFINE, 3, 3),
            space(PROJECTIVE, 2, 3), space(PROJECTIVE, 2, 4)]
    failures = []
    for case in range(100):
        sp = rng.choice(pool)
        t = rng.choice([1, 2]) if sp.n == 3 else 1
        inst = build_instance(sp, arrangement_make(sp, []), t, "contained")
        order = list(inst.universe)
        rng.shuffle(order)
        cand = set()
        for p in order:
            cand.add(p)
            if is_blocking(inst, cand):
                break
        if rng.random() < 0.5:
            cand = set(minimalize(inst, cand))
        dims = [d for d in range(t + 1, sp.n + 1)]
        d = rng.choice(dims)
        flats = flats_within(sp, range(sp.npoints), d)
        fl = rng.choice(flats)
        try:
            sub, part = restrict_blocking(inst, cand, fl)
            if not is_blocking(sub, part):
                failures.append((case, sp, t, fl.key()))
        except AssertionError:
            failures.append((case, sp, t, fl.key()))
    assert failures == []
    assert time.monotonic() - start < 120.0


def test_join_across_a_hyperplane():
    start = time.monotonic()
    rng = random.Random(905)
    failures = []
    for case in range(100):
        n, q = rng.choice([(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)])
        sp = space(PROJECTIVE, n, q)
        t = 2 if (n == 3 and rng.random() < 0.3) else 1
        while True:
            row = tuple(rng.randrange(q) for _ in range(sp.ncoords))
            if any(row):
                break
        arr = arrangement_make(sp, [row])
        form = arr.forms[0]
        hset = set(i for i in range(sp.npoints)
                   if evaluate_form(sp, form, i) == 0)
        inst = build_instance(sp, arr, t, "touching")
        order = list(inst.universe)
        rng.shuffle(order)
        c1 = set()
        for p in order:
            c1.add(p)
            if is_blocking(inst, c1):
                break
        if t == 1:
            k = rng.randint(1, 3)
            c2 = set(rng.sample(sorted(hset), min(k, len(hset))))
        else:
            lines = flats_within(sp, hset, 1)
            c2 = set(rng.choice(lines).points)
        try:
            union = join_blocking(c1, c2, row, sp, t=t)
            full = build_instance(sp, arrangement_make(sp, []), t, "contained")
            if not is_blocking(full, union):
                failures.append((case, n, q, t))
        except AssertionError:
            failures.append((case, n, q, t))
    assert failures == []
    assert time.monotonic() - start < 120.0


def test_worker_count_leaves_reports_unchanged(capsys, tmp_path):
    one_line = tmp_path / "one-line.txt"
    one_line.write_text("projective 2 3\n1 0 0\n")
    runs = [
        ("search", str(one_line), "--t", "1", "--scope", "touching",
         "--convention", "nontrivial"),
        ("search", "--space", "pg", "--n", "2", "--q", "3",
         "--t", "1", "--convention", "nontrivial"),
        ("search", "--space", "pg", "--n", "3", "--q", "2", "--t", "2"),
        ("search", "--space", "pg", "--n", "2", "--q", "4",
         "--t", "1", "--convention", "nontrivial"),
        ("search", "--space", "pg", "--n", "2", "--q", "5",
         "--t", "1", "--convention", "nontrivial"),
        ("search", "--space", "pg", "--n", "2", "--q", "7",
         "--t", "1", "--convention", "nontrivial", "--cap", "14"),
    ]
    for argv in runs:
        outs = []
        for workers in ("1", "8"):
            code = main(["--no-meta", *argv, "--workers", workers])
            assert code == 0
            outs.append(capsys.readouterr().out)
        assert outs[0] == outs[1], argv
