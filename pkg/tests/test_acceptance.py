"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; the whole file is the package's exit bar.
"""

import random
import subprocess
import sys
import time
from fractions import Fraction as F

from qlerch.identities import CATALOG
from qlerch.series import MonomialSpec as M
from qlerch.verify import (
    Specialization,
    check_identity,
    cross_validate,
    random_specialization,
)
from qlerch.residues import run_residue_family

TOL20 = F(1, 10**20)
EPS30 = F(1, 10**30)

# criterion 1 specializations: generic monomials, exponent denominators <= 8
THM1_SPECS = [
    {"x": M(1, F(1, 3)), "y": M(1, F(1, 2)), "z": M(1, F(2, 5))},
    {"x": M(2, F(1, 2)), "y": M(1, F(1, 3)), "z": M(2, F(2, 3))},
    {"x": M(1, F(5, 8)), "y": M(1, F(1, 2)), "z": M(1, F(1, 8))},
    {"x": M(3, F(2, 5)), "y": M(1, F(1, 5)), "z": M(1, F(3, 5))},
    {"x": M(F(1, 2), F(1, 2)), "y": M(1, F(1, 4)), "z": M(1, F(1, 4))},
]


def _announce(criterion, ok, extra=""):
    print(f"[criterion {criterion}] {'PASS' if ok else 'FAIL'} {extra}")
    assert ok, f"criterion {criterion} failed: {extra}"


def test_criterion_1_theorem1_formal():
    spec = CATALOG["thm1"]
    worst = 0.0
    for bindings in THM1_SPECS:
        t0 = time.monotonic()
        rep = check_identity(spec, Specialization("formal", bindings, order=F(25)))
        dt = time.monotonic() - t0
        worst = max(worst, dt)
        assert rep.status == "pass", (bindings, rep.message, rep.first_discrepancy)
        assert dt < 60, f"check took {dt:.1f}s"
    _announce(1, True, f"5 specializations at order 25, slowest {worst:.1f}s")


def test_criterion_2_companion_identities():
    ids = [
        "cor1.2", "thm1.3", "thm1.4", "kronecker-1.1", "kronecker-1.2",
        "hecke-1.4", "hickerson-1.7", "hickerson-1.8", "lemma8.1",
    ]
    rng = random.Random(20160810)
    slow = {}
    for name in ids:
        spec = CATALOG[name]
        for k in range(5):
            t0 = time.monotonic()
            s = random_specialization(spec, rng, F(25))
            rep = check_identity(spec, s)
            dt = time.monotonic() - t0
            slow[name] = max(slow.get(name, 0.0), dt)
            assert rep.status == "pass", (name, s.bindings, rep.message,
                                          rep.first_discrepancy)
            assert dt < 60, (name, dt)
    worst = max(slow.values())
    _announce(2, True, f"{len(ids)} identities x 5 specializations, slowest {worst:.1f}s")


def test_criterion_3_section2_battery():
    ids = [
        "theta-2.1a", "theta-2.1b", "theta-2.1c", "theta-2.1d",
        "m-2.4a", "m-2.4b", "m-2.4c", "m-2.4d",
        "prop2.3", "eq2.9", "eq2.10", "eq2.13",
    ]
    rng = random.Random(20160810)
    for name in ids:
        spec = CATALOG[name]
        order = F(20)
        for k in range(10):
            s = random_specialization(spec, rng, order)
            rep = check_identity(spec, s)
            assert rep.status == "pass", (name, s.bindings, rep.message,
                                          rep.first_discrepancy)
    _announce(3, True, f"{len(ids)} identities x 10 random specializations")


def test_criterion_4_functional_equations():
    ids = ["prop3.1-F", "prop3.1-G", "prop6-F", "prop6-G", "prop7-F", "prop7-G",
           "fe-H-thm1", "fe-H-same", "fe-H-diff"]
    rng = random.Random(20160810)
    for name in ids:
        spec = CATALOG[name]
        for k in range(3):
            s = random_specialization(spec, rng, F(20))
            rep = check_identity(spec, s)
            assert rep.status == "pass", (name, s.bindings, rep.message,
                                          rep.first_discrepancy)
    _announce(4, True, "F, G and H functional equations, 3 specializations each")


def test_criterion_5_residue_suite():
    q, y, z = F(1, 7), F(1, 2), F(2, 5)
    total = 0
    worst = F(0)
    for family in ("prop21", "f4", "f6", "f7"):
        ks = (-1, 0, 1, 2) if family == "prop21" else None
        reports, h_sums = run_residue_family(
            family, q, y, z, range(-2, 4), ks=ks, eps=EPS30, levels=6
        )
        for r in reports:
            assert r.status == "pass", (r.label, r.message, float(r.diff))
            assert r.diff <= TOL20, (r.label, float(r.diff))
            worst = max(worst, r.diff)
        for label, ssum in h_sums:
            assert ssum <= TOL20, (label, float(ssum))
            worst = max(worst, ssum)
        total += len(reports)
    _announce(5, True, f"{total} pole lemmas + H residue sums, worst |diff| {float(worst):.2e}")


def test_criterion_6_numeric_cross_validation():
    # the same three points per identity serve both halves of the criterion:
    # the points are monomial substitutions q^(1/scale) = u, so the direct
    # numeric check and the formal-then-substitute comparison share them
    kron_bindings = {"x": M(1, F(1, 2)), "y": M(1, F(1, 3))}
    thm1_bindings = {"x": M(1, F(1, 3)), "y": M(1, F(1, 2)), "z": M(1, F(2, 5))}
    cases = [
        ("kronecker-1.1", kron_bindings, F(20), [F(1, 3), F(1, 4), F(2, 7)]),
        ("thm1", thm1_bindings, F(15), [F(1, 3), F(1, 4), F(2, 7)]),
    ]
    for name, bindings, order, us in cases:
        spec = CATALOG[name]
        scale = 1
        for mono in bindings.values():
            import math

            scale = math.lcm(scale, mono.e.denominator)
        for u in us:
            qv = u**scale
            vals = {k: v.c * u ** int(v.e * scale) for k, v in bindings.items()}
            rep = check_identity(
                spec, Specialization("numeric", vals, q=qv, eps=EPS30)
            )
            assert rep.status == "pass", (name, u, rep.message)
            assert rep.abs_diff <= 2 * rep.bound
            s = Specialization("formal", bindings, order=order)
            u_major = (1 + 2 * u) / 3  # a third of the way from u toward 1
            rep = cross_validate(spec, s, u, u_major, EPS30)
            assert rep.status == "pass", (name, u, rep.message)
    _announce(6, True, "2 identities x 3 rational points, both backends agree")


def test_criterion_7_negative_controls():
    gen3 = {"x": M(1, F(1, 3)), "y": M(1, F(1, 2)), "z": M(1, F(2, 5))}
    gen2 = {"x": M(1, F(1, 3)), "y": M(1, F(1, 2))}
    gen1 = {"x": M(1, F(2, 5))}
    cases = [
        ("ctl-thm1-qxy", gen3),
        ("ctl-2.1d-J1", gen1),
        ("ctl-perturb", gen2),
    ]
    for name, bindings in cases:
        spec = CATALOG[name]
        rep = check_identity(spec, Specialization("formal", bindings, order=F(10)))
        assert rep.status == "fail", (name, rep.status, rep.message)
        d = rep.first_discrepancy
        exponent = F(d["exponent_num"], d["exponent_den"])
        assert exponent <= 5, (name, exponent)
    _announce(7, True, "all three controls fail with first discrepancy <= q^5")


def test_criterion_8a_theta_product_vs_sum_q40():
    from qlerch.qfunctions import jacobi_theta

    rng = random.Random(77)
    exps = [F(1, 2), F(1, 3), F(2, 5), F(3, 7), F(5, 8), F(-7, 3), F(11, 4), F(3)]
    coeffs = [F(1), F(-1), F(2), F(-2), F(3), F(1, 2)]
    for k in range(50):
        x = M(rng.choice(coeffs), rng.choice(exps))
        mod = rng.choice((1, 2, 3))
        p = jacobi_theta(x, mod, 40, form="product")
        sform = jacobi_theta(x, mod, 40, form="sum")
        assert p.eq_upto(sform, 40).equal, (x, mod)
    _announce("8a", True, "theta product = sum to q^40 for 50 random arguments")


def test_criterion_8b_parser_roundtrip_200():
    from qlerch.dsl import ast_equal, parse, pretty
    from helpers import random_ast

    rng = random.Random(12345)
    for k in range(200):
        ast = random_ast(rng)
        assert ast_equal(ast, parse(pretty(ast)))
    _announce("8b", True, "200 expressions round-trip")


def test_criterion_8c_default_suite_under_10_minutes():
    t0 = time.monotonic()
    proc = subprocess.run(
        [sys.executable, "-m", "qlerch.cli", "suite"],
        capture_output=True,
        text=True,
        timeout=600,
    )
    dt = time.monotonic() - t0
    ok = proc.returncode == 0 and dt < 600
    tail = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else ""
    _announce("8c", ok, f"suite finished in {dt:.0f}s, exit {proc.returncode}: {tail}")
