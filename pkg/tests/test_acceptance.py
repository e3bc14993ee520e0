"""Acceptance criteria; each test prints one PASS/FAIL line."""

from __future__ import annotations

import functools
import itertools
import random
import time
from fractions import Fraction
from pathlib import Path

import pytest

from opcalc.cli import main
from opcalc.dfamily import (
    FALSIFIED, VERIFIED, FamilySpec, correct_right_inverses, corresponds, degree_witness,
    effectivity_check, family_constants, family_degree, family_initial, family_Pn, recheck_witness,
    weakly_effective,
)
from opcalc.dpoly import decompose, reconstruct
from opcalc.dsl import parse, pretty, run_script
from opcalc.models import expmono_ops, grid_ops, jackson_ops, sequence_ops
from opcalc.opcore import (
    Element, apply, compose, perturb_initial, perturb_right_inverse, power, random_operator, realize,
    right_inverse_from_initial, verify_initial, verify_right_inverse,
)
from opcalc.ratlin import SubspaceBasis, column_space, intersect, nullspace
from opcalc.suites import canonical_triples, dd2_family, expmono_family, grid_family, random_element
from opcalc.taylor import taylor_operator, taylor_split

from .conftest import ACCEPTANCE

OPS = Path(__file__).resolve().parents[1] / "scripts" / "ops"


def criterion(number: int, title: str):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            try:
                detail = fn(*args, **kwargs)
            except BaseException as exc:
                line = f"FAIL  criterion {number:2d}: {title} ({type(exc).__name__}: {exc})"
                ACCEPTANCE[number] = line
                print(line)
                raise
            took = time.perf_counter() - t0
            line = f"PASS  criterion {number:2d}: {title} [{took:.1f}s]" + (f" {detail}" if detail else "")
            ACCEPTANCE[number] = line
            print(line)
        return run
    return wrap


@criterion(1, "Taylor identity on all four models")
def test_taylor_identity():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    for name, (D, R, F) in canonical_triples(8).items():
        for m in range(5):
            g = tuple(max(c, m + 3) for c in D.space.default_grade)
            assert realize(taylor_operator(D, R, F, m), g).is_identity(), (name, m)
        g = D.space.default_grade
        for _ in range(200):
            x = random_element(D.space, g, rng)
            split = taylor_split(D, R, F, rng.randrange(5), x)
            assert split.poly_part + split.remainder == x, name
    took = time.perf_counter() - t0
    assert took < 10, f"took {took:.1f}s"


@criterion(2, "Newton expansion of n^2")
def test_newton_fixture():
    D, R, F = sequence_ops(6)
    values = [n * n for n in range(1, 7)]
    u = Element.from_vector(D.space, (6,), values)
    # oracle: first entries of the iterated forward differences
    oracle, row = [], values
    while row:
        oracle.append(row[0])
        row = [b - a for a, b in zip(row, row[1:])]
    dec = decompose(D, R, F, u)
    z = [c.vector()[0] for _, c in dec.parts]
    assert z == [c for c in oracle if c] == [1, 3, 2]
    assert reconstruct(R, dec, (6,)) == u
    for n in range(1, 7):
        assert 1 + 3 * (n - 1) + (n - 1) * (n - 2) == n * n


@criterion(3, "dim P_n(D) = (n+1) dim Z(D)")
def test_dimension_formula():
    cases = [
        ("difference", sequence_ops(10).D, (10,), 1),
        ("jackson q=2", jackson_ops(9, 2).D, (10,), 1),
        ("grid axis 1", grid_ops(2, (6, 6))[0].D, (6, 6), 6),
        ("grid axis 2", grid_ops(2, (6, 6))[1].D, (6, 6), 6),
    ]
    for name, D, g, dz in cases:
        z = nullspace(realize(D, g)).dim
        assert z == dz, name
        for n in range(5):
            assert nullspace(realize(power(D, n + 1), g)).dim == (n + 1) * z, (name, n)


@criterion(4, "constants and degrees of the two example families")
def test_example_fixtures():
    grid, exp = grid_family((6, 6)), expmono_family(8)
    zg = family_constants(grid)
    assert zg == SubspaceBasis.span([[1] * 36], 36)
    weight = Element.make(exp.space, exp.grade, {(0, 0): 1})
    ze = family_constants(exp)
    assert ze == SubspaceBasis.span([weight.vector()], ze.ambient_dim)
    ij = Element.from_function(grid.space, grid.grade, lambda idx: Fraction(idx[0] * idx[1]))
    assert family_degree(grid, ij).value == 2
    x1 = Element.make(exp.space, exp.grade, {(1, 0): 1})
    assert family_degree(exp, x1).value == 1


@criterion(5, "effectivity verified for the grid and expmono families")
def test_effectivity_verified():
    times = []
    for fam in (grid_family((6, 6)), expmono_family(8)):
        t0 = time.perf_counter()
        rep = effectivity_check(fam, 3, samples=50, seed=0)
        took = time.perf_counter() - t0
        times.append(took)
        assert rep.verdict == VERIFIED, rep.witnesses[:1]
        assert all(r.passed for r in rep.linear_inclusions)
        assert took < 60, f"took {took:.1f}s"
    return f"(grid {times[0]:.1f}s, expmono {times[1]:.1f}s)"


@criterion(6, "{D, D^2} with {R, R^2} is falsified")
def test_falsification(capsys):
    fam = dd2_family(12)
    rep = effectivity_check(fam, 3, samples=10, seed=0)
    assert rep.verdict == FALSIFIED
    assert rep.witnesses and all(recheck_witness(fam, w) for w in rep.witnesses)
    # R^2 raises the single-operator degree by 2: the constant 1 lands in degree 2
    D = fam.members[0]
    one = rep.witnesses[0].element
    assert one.vector() == (1,) * 12
    y = apply(fam.right_inverses[1], one.restrict((10,)))
    assert not apply(power(D, 2), y).is_zero() and apply(power(D, 3), y).is_zero()
    assert main(["run", str(OPS / "dd2_falsify.ops")]) == 1
    assert "witness:" in capsys.readouterr().out


@criterion(7, "lattice laws over all grid subfamilies, n <= 3")
def test_lattice_laws():
    fam = grid_family((5, 5))
    g = fam.grade
    subs = [tuple(s) for r in range(3) for s in itertools.combinations(range(2), r)]
    for s in subs:
        sub = fam.restrict(s)
        chain = [family_Pn(sub, n, g) for n in range(4)]
        assert chain[0] == family_constants(sub)
        assert all(a <= b for a, b in zip(chain, chain[1:]))
    for s1, s2 in itertools.product(subs, repeat=2):
        f1, f2 = fam.restrict(s1), fam.restrict(s2)
        union = fam.restrict(sorted(set(s1) | set(s2)))
        # Z of a union is the intersection, checked against brute-force kernels
        kernels = [nullspace(realize(fam.members[i], g)) for i in sorted(set(s1) | set(s2))]
        assert family_constants(union) == intersect(kernels, 25)
        assert family_constants(union) == family_constants(f1) & family_constants(f2)
        for n in range(4):
            assert family_Pn(union, n, g) <= family_Pn(f1, n, g) & family_Pn(f2, n, g)
            if set(s1) <= set(s2) and s1:
                assert family_Pn(f1, n, g) >= family_Pn(f2, n, g)


@criterion(8, "algebra of right inverses and initial operators")
def test_algebra_of_inverses():
    singles = canonical_triples(6)
    # family versions: the single-operator models as one-member families
    family_triples = {
        "sequence": [singles["sequence"]],
        "jackson": [singles["jackson"]],
        "grid": list(grid_ops(2, (6, 6))),
        "expmono": list(expmono_ops(2, (1, 2), 6)),
    }
    for name, (D, R, F) in singles.items():
        g = D.space.default_grade
        D0, R0, F0 = family_triples[name][0]
        fam = FamilySpec.from_triples(family_triples[name])
        for t in range(20):
            A = random_operator(D.space, R.shift, 1000 * t + 17)
            R2 = perturb_right_inverse(R, F, A)
            assert verify_right_inverse(D, R2, g), (name, t)
            F2 = perturb_initial(F, A, D)
            m = realize(F2, g)
            assert m @ m == m and column_space(m) == nullspace(realize(D, g)), (name, t)
            assert verify_initial(F2, D, g)
            # the right inverse built from F2 does not depend on the starting R
            assert realize(right_inverse_from_initial(D, R, F2, g), g) == \
                realize(right_inverse_from_initial(D, R2, F2, g), g), (name, t)
            A0 = random_operator(D0.space, R0.shift, 1000 * t + 29)
            bent = FamilySpec(fam.space, fam.members,
                              (perturb_right_inverse(R0, F0, A0),) + fam.right_inverses[1:])
            Fop = family_initial(bent)
            assert corresponds(Fop, correct_right_inverses(Fop, bent)), (name, t)


@criterion(9, "verified families are weakly effective and closed under subfamilies")
def test_hierarchy():
    fam = grid_family((6, 6))
    k = len(fam.members)
    verdicts = {}
    for r in range(k + 1):
        for s in itertools.combinations(range(k), r):
            verdicts[s] = effectivity_check(fam.restrict(s), 3, samples=10, seed=0).verdict
    verified = [s for s, v in verdicts.items() if v == VERIFIED]
    assert (0, 1) in verified
    for s in verified:
        if s:
            assert weakly_effective(fam.restrict(s))[0], s
        for r in range(len(s)):
            for sub in itertools.combinations(s, r):
                assert verdicts[sub] != FALSIFIED, (s, sub)
    return f"({len(verified)}/{len(verdicts)} subfamilies verified)"


@criterion(10, "degree witnesses have exact degree n")
def test_degree_witnesses():
    for fam in (grid_family((6, 6)), expmono_family(8)):
        for n in range(5):
            w = degree_witness(fam, n)
            assert w.grade == fam.grade
            assert family_degree(fam, w).value == n


@criterion(11, "deterministic reports and parse/print round trip")
def test_cli_determinism(capsys):
    scripts = sorted(OPS.glob("*.ops"))
    assert len(scripts) >= 5
    for path in scripts:
        outs = []
        for _ in range(2):
            main(["run", str(path), "--json", "--seed", "7"])
            outs.append(capsys.readouterr().out)
        assert outs[0] == outs[1] and outs[0].startswith("{"), path.name
        tree = parse(path.read_text())
        assert parse(pretty(tree)) == tree, path.name
    assert run_script(scripts[0].read_text(), seed=1).to_json() == run_script(scripts[0].read_text(), seed=1).to_json()
