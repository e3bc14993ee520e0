"""Built-in check suites, runnable via ``opcalc check <suite>``.

Each suite returns a list of :class:`CheckResult`; a suite passes when all of
its checks pass.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .dfamily import (
    VERIFIED, FALSIFIED, FamilySpec, correct_right_inverses, corresponds, degree_witness,
    effectivity_check, family_constants, family_degree, family_initial, lattice_check,
    recheck_witness, weakly_effective,
)
from .dpoly import decompose, dim_formula_check, reconstruct
from .errors import OpcalcError
from .models import OperatorTriple, expmono_ops, grid_ops, jackson_ops, sequence_ops
from .opcore import (
    Element, perturb_initial, perturb_right_inverse, power, random_operator,
    realize, right_inverse_from_initial, verify_initial, verify_right_inverse,
)
from .taylor import taylor_operator, taylor_split

EXPMONO_A = (Fraction(1), Fraction(2))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def canonical_triples(N: int = 8) -> dict[str, OperatorTriple]:
    """One canonical (D, R, F) per model at comparable size."""
    return {
        "sequence": sequence_ops(N),
        "grid": grid_ops(2, (N, N))[0],
        "jackson": jackson_ops(N, Fraction(2)),
        "expmono": expmono_ops(2, EXPMONO_A, N)[0],
    }


def grid_family(box=(6, 6)) -> FamilySpec:
    return FamilySpec.from_triples(grid_ops(2, box), grade=box)


def expmono_family(N: int = 8) -> FamilySpec:
    return FamilySpec.from_triples(expmono_ops(2, EXPMONO_A, N))


def dd2_family(N: int = 12) -> FamilySpec:
    D, R, _ = sequence_ops(N)
    return FamilySpec(D.space, (D, power(D, 2)), (R, power(R, 2)))


def random_element(space, grade, rng: random.Random) -> Element:
    return Element.from_function(
        space, grade, lambda idx: Fraction(rng.randint(-9, 9), rng.choice((1, 2, 3))))


# --- suites ------------------------------------------------------------------------

def suite_taylor(seed: int = 0, splits: int = 200) -> list[CheckResult]:
    out = []
    rng = random.Random(seed)
    for name, (D, R, F) in canonical_triples().items():
        g = D.space.default_grade
        ok = all(realize(taylor_operator(D, R, F, m), g).is_identity() for m in range(5))
        out.append(CheckResult(f"taylor-operator-{name}", ok))
        good = True
        for _ in range(splits):
            x = random_element(D.space, g, rng)
            if not taylor_split(D, R, F, rng.randrange(5), x).reconstructs(x):
                good = False
                break
        out.append(CheckResult(f"taylor-split-{name}", good))
    return out


def suite_newton(seed: int = 0) -> list[CheckResult]:
    D, R, F = sequence_ops(6)
    u = Element.from_function(D.space, (6,), lambda idx: Fraction(idx ** 2))
    dec = decompose(D, R, F, u)
    z = [c.vector()[0] for _, c in dec.parts]
    fixed = z == [1, 3, 2] and reconstruct(R, dec, (6,)) == u
    return [CheckResult("newton-n-squared", fixed, f"z = {[str(c) for c in z]}")]


def suite_dimension(seed: int = 0) -> list[CheckResult]:
    out = []
    cases = {
        "sequence": (sequence_ops(10).D, (10,)),
        "jackson": (jackson_ops(9, Fraction(2)).D, (10,)),
        "grid-axis1": (grid_ops(2, (6, 6))[0].D, (6, 6)),
        "grid-axis2": (grid_ops(2, (6, 6))[1].D, (6, 6)),
    }
    for name, (D, g) in cases.items():
        out.append(CheckResult(f"dim-formula-{name}", all(dim_formula_check(D, n, g) for n in range(5))))
    return out


def suite_fixtures(seed: int = 0) -> list[CheckResult]:
    grid, exp = grid_family(), expmono_family()
    zg, ze = family_constants(grid), family_constants(exp)
    const_ok = zg.dim == 1 and zg.contains([1] * zg.ambient_dim)
    weight = Element.make(exp.space, exp.grade, {(0, 0): 1})
    exp_ok = ze.dim == 1 and ze.contains(weight.vector())
    ij = Element.from_function(grid.space, grid.grade, lambda idx: Fraction(idx[0] * idx[1]))
    x1 = Element.make(exp.space, exp.grade, {(1, 0): 1})
    return [
        CheckResult("constants-grid", const_ok),
        CheckResult("constants-expmono", exp_ok),
        CheckResult("degree-grid-i1*i2", family_degree(grid, ij).value == 2),
        CheckResult("degree-expmono-x1", family_degree(exp, x1).value == 1),
    ]


def suite_effectivity(seed: int = 0, samples: int = 50) -> list[CheckResult]:
    out = []
    for name, fam in (("grid", grid_family()), ("expmono", expmono_family())):
        rep = effectivity_check(fam, 3, samples=samples, seed=seed)
        out.append(CheckResult(f"effective-{name}", rep.verdict == VERIFIED, rep.verdict))
    return out


def suite_falsification(seed: int = 0) -> list[CheckResult]:
    fam = dd2_family()
    rep = effectivity_check(fam, 3, samples=10, seed=seed)
    ok = rep.verdict == FALSIFIED and bool(rep.witnesses) and all(recheck_witness(fam, w) for w in rep.witnesses)
    return [CheckResult("falsify-D-D2", ok, rep.verdict)]


def suite_lattice(seed: int = 0) -> list[CheckResult]:
    laws = lattice_check(grid_family(), 3)
    return [CheckResult(f"lattice-{k}", v) for k, v in laws.items()]


def suite_inverses(seed: int = 0, trials: int = 20) -> list[CheckResult]:
    out = []
    for name, (D, R, F) in canonical_triples(6).items():
        g = D.space.default_grade
        r_ok = f_ok = indep = True
        for t in range(trials):
            A_up = random_operator(D.space, R.shift, seed * 1000 + t, name="A")
            R2 = perturb_right_inverse(R, F, A_up)
            r_ok &= verify_right_inverse(D, R2, g)
            F2 = perturb_initial(F, A_up, D)
            f_ok &= verify_initial(F2, D, g)
            a = right_inverse_from_initial(D, R, F2, g)
            b = right_inverse_from_initial(D, R2, F2, g)
            indep &= realize(a, g) == realize(b, g)
        out += [CheckResult(f"perturb-right-inverse-{name}", r_ok),
                CheckResult(f"perturb-initial-{name}", f_ok),
                CheckResult(f"independent-of-start-{name}", indep)]
    # family correction
    fam = grid_family((5, 5))
    g = fam.grade
    base = correct_right_inverses(family_initial(fam), fam).right_inverses[0]
    ok, depends = True, 0
    for t in range(trials):
        A = random_operator(fam.space, fam.right_inverses[0].shift, seed * 1000 + t)
        bent = FamilySpec(fam.space, fam.members,
                          (perturb_right_inverse(fam.right_inverses[0], grid_ops(2, (5, 5))[0].F, A),)
                          + fam.right_inverses[1:], fam.grade)
        Fop = family_initial(bent)
        ok &= corresponds(Fop, correct_right_inverses(Fop, bent))
        # with F held fixed, does R - F R still depend on the starting R?
        fixed = correct_right_inverses(family_initial(fam), bent).right_inverses[0]
        depends += realize(fixed, g) != realize(base, g)
    out.append(CheckResult("correct-right-inverses-grid", ok))
    # recorded, not asserted
    out.append(CheckResult("correction-start-dependence-grid", True,
                           f"R-FR differed from the unperturbed start in {depends}/{trials} trials"))
    return out


def suite_hierarchy(seed: int = 0, samples: int = 20) -> list[CheckResult]:
    fam = grid_family((5, 5))
    k = len(fam.members)
    verified = []
    for r in range(1, k + 1):
        for idx in itertools.combinations(range(k), r):
            sub = fam.restrict(idx)
            if effectivity_check(sub, 3, samples=samples, seed=seed).verdict == VERIFIED:
                verified.append(idx)
    weak = all(weakly_effective(fam.restrict(idx))[0] for idx in verified)
    closed = True
    for idx in verified:
        for r in range(1, len(idx)):
            for sub in itertools.combinations(idx, r):
                if effectivity_check(fam.restrict(sub), 3, samples=samples, seed=seed).verdict == FALSIFIED:
                    closed = False
    return [CheckResult("verified-implies-weak", weak and bool(verified)),
            CheckResult("subfamilies-not-falsified", closed)]


def suite_witnesses(seed: int = 0) -> list[CheckResult]:
    out = []
    for name, fam in (("grid", grid_family()), ("expmono", expmono_family())):
        ok = all(family_degree(fam, degree_witness(fam, n)).value == n for n in range(5))
        out.append(CheckResult(f"degree-witness-{name}", ok))
    return out


SMOKE_SCRIPT = """\
model seq N=6;
let x = [1, 4, 9, 16, 25, 36];
degree D x;
decompose D R F x;
taylor D R F m=1 x;
model grid m=2 N=5;
let G = {D1: R1, D2: R2};
constants G;
effective G nmax=2 samples=5;
"""


def suite_cli(seed: int = 0) -> list[CheckResult]:
    from .dsl.evaluator import run_script
    from .dsl.parser import parse
    from .dsl.syntax import pretty

    a = run_script(SMOKE_SCRIPT, seed=seed).to_json()
    b = run_script(SMOKE_SCRIPT, seed=seed).to_json()
    tree = parse(SMOKE_SCRIPT)
    return [CheckResult("deterministic-report", a == b),
            CheckResult("parse-print-roundtrip", parse(pretty(tree)) == tree)]


SUITES: dict[str, Callable[..., list[CheckResult]]] = {
    "taylor": suite_taylor,
    "newton": suite_newton,
    "dimension": suite_dimension,
    "fixtures": suite_fixtures,
    "effectivity": suite_effectivity,
    "falsification": suite_falsification,
    "lattice": suite_lattice,
    "inverses": suite_inverses,
    "hierarchy": suite_hierarchy,
    "witnesses": suite_witnesses,
    "cli": suite_cli,
}


def run_suite(name: str, seed: int = 0) -> list[CheckResult]:
    if name == "all":
        return [r for fn in SUITES.values() for r in fn(seed=seed)]
    if name not in SUITES:
        raise OpcalcError(f"unknown suite {name!r}; choose from all, {', '.join(SUITES)}")
    return SUITES[name](seed=seed)
