"""Verification engines: formal coefficientwise checks, certified numeric
checks at rational points, cross-validation between the two backends, and
the suite runner with its JSON report format.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import ConfigError, ConstraintViolation, QLerchError
from .identities import CATALOG, IdentitySpec
from .numeric import Ball
from .residues import run_residue_family
from .series import MonomialSpec

_ZERO = Fraction(0)

EXPONENT_POOL = (
    Fraction(1, 2), Fraction(1, 3), Fraction(2, 5), Fraction(3, 7), Fraction(5, 8),
)
COEFF_POOL = (
    Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(3), Fraction(1, 2),
)

RESIDUE_FAMILIES = ("prop21", "f4", "f6", "f7")


@dataclass
class Specialization:
    """Formal (monomial bindings + order) or numeric (rational bindings +
    q + eps) instantiation of an identity's parameters."""

    mode: str                      # "formal" | "numeric"
    bindings: dict
    order: Optional[Fraction] = None
    q: Optional[Fraction] = None
    eps: Optional[Fraction] = None


@dataclass
class Report:
    id: str
    citation: str
    mode: str
    bindings: dict
    order_or_eps: object
    status: str                    # pass | fail | error
    case: str = ""
    first_discrepancy: Optional[dict] = None
    abs_diff: Optional[Fraction] = None
    bound: Optional[Fraction] = None
    millis: int = 0
    message: str = ""

    def to_json_dict(self) -> dict:
        def rat(v):
            if v is None:
                return None
            f = Fraction(v)
            # exact certified rationals can carry very long integers
            import sys

            if hasattr(sys, "set_int_max_str_digits"):
                need = max(
                    f.numerator.bit_length(), f.denominator.bit_length()
                ) // 3 + 640
                if sys.get_int_max_str_digits() < need:
                    sys.set_int_max_str_digits(need)
            return f"{f.numerator}/{f.denominator}"

        bindings = {}
        for k, v in self.bindings.items():
            if isinstance(v, MonomialSpec):
                bindings[k] = f"{rat(v.c)}*q^({rat(v.e)})"
            else:
                bindings[k] = rat(v)
        return {
            "id": self.id,
            "citation": self.citation,
            "mode": self.mode,
            "bindings": bindings,
            "order_or_eps": rat(self.order_or_eps),
            "status": self.status,
            "case": self.case,
            "first_discrepancy": self.first_discrepancy,
            "abs_diff": rat(self.abs_diff),
            "bound": rat(self.bound),
            "millis": self.millis,
            "message": self.message,
        }


def numeric_eval(builder, point: dict, q: Fraction, eps: Fraction):
    """Evaluate a numeric builder at exact rational bindings.

    Returns (value, bound) with |true - value| <= bound; the bound comes
    from the builder's certified tail estimates, never from heuristics.
    """
    ball: Ball = builder(point, Fraction(q), Fraction(eps))
    return ball.val, ball.err


def check_identity(spec: IdentitySpec, s: Specialization) -> Report:
    """Run one identity at one specialization and report the outcome."""
    t0 = time.monotonic()

    def finish(status, **kw):
        return Report(
            spec.id,
            spec.citation,
            s.mode,
            s.bindings,
            s.order if s.mode == "formal" else s.eps,
            status,
            millis=int((time.monotonic() - t0) * 1000),
            **kw,
        )

    try:
        spec.constraints(s.bindings) if s.mode == "formal" else None
    except ConstraintViolation as exc:
        return finish("error", message=str(exc))
    try:
        if s.mode == "formal":
            order = Fraction(s.order)
            for case, lhs, rhs in spec.build(s.bindings, order):
                rep = lhs.eq_upto(rhs, order)
                if not rep.equal:
                    return finish(
                        "fail",
                        case=case,
                        first_discrepancy={
                            "exponent_num": rep.exponent.numerator,
                            "exponent_den": rep.exponent.denominator,
                            "lhs": f"{rep.lhs.numerator}/{rep.lhs.denominator}",
                            "rhs": f"{rep.rhs.numerator}/{rep.rhs.denominator}",
                        },
                    )
            return finish("pass")
        if spec.numeric_lhs is None or spec.numeric_rhs is None:
            raise ConfigError(f"identity {spec.id} has no numeric backend")
        eps = Fraction(s.eps)
        lhs = spec.numeric_lhs(s.bindings, s.q, eps)
        rhs = spec.numeric_rhs(s.bindings, s.q, eps)
        diff = abs(lhs.val - rhs.val)
        bound = lhs.err + rhs.err
        ok = diff <= 2 * bound
        return finish("pass" if ok else "fail", abs_diff=diff, bound=bound)
    except QLerchError as exc:
        return finish("error", message=str(exc))


def random_specialization(
    spec: IdentitySpec, rng: random.Random, order: Fraction, max_tries: int = 500
) -> Specialization:
    """Draw monomial bindings from the fixed pools until the identity's
    constraints accept them.

    Draws whose exponent denominators have a joint lcm above 40 are redrawn:
    the series grid size scales with that lcm, and combinations like
    {5/8, 3/7, 2/5} (lcm 280) blow the suite's wall-clock budget without
    adding coverage (every pool exponent still occurs in accepted draws).
    """
    from math import lcm

    for _ in range(max_tries):
        bindings = {
            name: MonomialSpec(rng.choice(COEFF_POOL), rng.choice(EXPONENT_POOL))
            for name in spec.params
        }
        scale = 1
        for mono in bindings.values():
            scale = lcm(scale, mono.e.denominator)
        if scale > 40:
            continue
        try:
            spec.constraints(bindings)
        except ConstraintViolation:
            continue
        return Specialization("formal", bindings, order=order)
    raise ConfigError(
        f"could not draw a generic specialization for {spec.id} "
        f"after {max_tries} tries"
    )


def cross_validate(
    spec: IdentitySpec,
    s: Specialization,
    u: Fraction,
    u_major: Fraction,
    eps: Fraction,
) -> Report:
    """Check that the truncated formal series, substituted at the rational
    point q^(1/scale) = u, matches direct certified numeric evaluation.

    The coefficient tail of the true function beyond the series order is
    bounded by the Cauchy-style majorant M(u1) (u/u1)^(K+1) / (1 - u/u1),
    where M(u1) is the certified sum of absolute values of all defining
    terms at the larger radius u1 and K is the series order in u-units.
    """
    t0 = time.monotonic()
    bindings = s.bindings
    order = Fraction(s.order)
    scale = 1
    for mono in bindings.values():
        scale = scale * mono.e.denominator // __import__("math").gcd(
            scale, mono.e.denominator
        )
    q_val = u**scale
    vals = {k: v.c * u ** int(v.e * scale) for k, v in bindings.items()}
    vals1 = {k: abs(v.c) * u_major ** int(v.e * scale) for k, v in bindings.items()}
    q1 = u_major**scale

    def run(side_builder, numeric_side):
        series = side_builder
        sub = _ZERO
        for e, c in series.items():
            sub += c * u ** int(e * scale)
        direct = numeric_side(vals, q_val, eps)
        major = numeric_side(vals1, q1, Fraction(1, 10**6), True)
        K = int(order * scale)
        tail = major.mag() * (u / u_major) ** (K + 1) / (1 - u / u_major)
        return sub, direct, tail

    try:
        results = list(spec.build(bindings, order))
        case, lhs_series, rhs_series = results[0]
        sub_l, dir_l, tail_l = run(lhs_series, spec.numeric_lhs)
        sub_r, dir_r, tail_r = run(rhs_series, spec.numeric_rhs)
        diff = max(abs(sub_l - dir_l.val), abs(sub_r - dir_r.val))
        bound = max(tail_l + dir_l.err, tail_r + dir_r.err)
        ok = abs(sub_l - dir_l.val) <= tail_l + dir_l.err and abs(
            sub_r - dir_r.val
        ) <= tail_r + dir_r.err
        return Report(
            spec.id,
            spec.citation,
            "cross",
            bindings,
            s.order,
            "pass" if ok else "fail",
            abs_diff=diff,
            bound=bound,
            millis=int((time.monotonic() - t0) * 1000),
        )
    except QLerchError as exc:
        return Report(
            spec.id, spec.citation, "cross", bindings, s.order, "error",
            message=str(exc), millis=int((time.monotonic() - t0) * 1000),
        )


@dataclass
class SuiteConfig:
    identities: Optional[list] = None   # None = default set
    seed: int = 20160810
    order: Optional[Fraction] = None
    eps: Fraction = Fraction(1, 10**30)
    parallelism: int = field(default_factory=lambda: __import__("os").cpu_count() or 1)
    include_controls: bool = False
    residue_ns: tuple = (-2, -1, 0, 1, 2, 3)
    residue_point: tuple = (Fraction(1, 7), Fraction(1, 2), Fraction(2, 5))

    @staticmethod
    def from_file(path) -> "SuiteConfig":
        with open(path) as fh:
            raw = json.load(fh)
        cfg = SuiteConfig()
        for key in ("identities", "seed", "parallelism", "include_controls"):
            if key in raw:
                setattr(cfg, key, raw[key])
        if raw.get("order") is not None:
            cfg.order = Fraction(raw["order"])
        if raw.get("eps") is not None:
            cfg.eps = Fraction(str(raw["eps"]))
        return cfg


@dataclass
class SuiteReport:
    reports: list
    residue_reports: list = field(default_factory=list)
    h_sums: list = field(default_factory=list)

    @property
    def failures(self) -> list:
        bad = [r for r in self.reports if r.status != "pass"]
        bad += [r for r in self.residue_reports if r.status != "pass"]
        bad += [(label, s) for label, s in self.h_sums if s > Fraction(1, 10**20)]
        return bad

    def to_json(self) -> str:
        return json.dumps(
            {
                "checks": [r.to_json_dict() for r in self.reports],
                "residues": [
                    {
                        "label": r.label,
                        "status": r.status,
                        "diff": float(r.diff),
                        "estimate": float(r.estimate),
                        "message": r.message,
                    }
                    for r in self.residue_reports
                ],
                "h_sums": [
                    {"label": label, "abs_sum": float(s)} for label, s in self.h_sums
                ],
            },
            indent=2,
        )


def _plan_suite(config: SuiteConfig):
    """Deterministic list of (identity id, Specialization) jobs."""
    rng = random.Random(config.seed)
    wanted = config.identities
    if wanted is None:
        wanted = [
            i for i, s in sorted(CATALOG.items())
            if s.expected == "pass" or config.include_controls
        ]
    jobs = []
    for ident in wanted:
        if isinstance(ident, dict):
            name = ident["id"]
            spec = CATALOG.get(name)
            if spec is None:
                raise ConfigError(f"unknown identity id {name!r}")
            order = Fraction(ident.get("order", config.order or spec.default_order))
            if "bindings" in ident:
                bindings = {
                    k: _parse_binding(v) for k, v in ident["bindings"].items()
                }
                jobs.append((name, Specialization("formal", bindings, order=order)))
            else:
                for _ in range(int(ident.get("count", spec.default_count))):
                    jobs.append((name, random_specialization(spec, rng, order)))
        else:
            spec = CATALOG.get(ident)
            if spec is None:
                raise ConfigError(f"unknown identity id {ident!r}")
            order = Fraction(config.order or spec.default_order)
            for _ in range(spec.default_count):
                jobs.append((ident, random_specialization(spec, rng, order)))
    return jobs


def _parse_binding(text: str) -> MonomialSpec:
    from .dsl import parse_monomial

    return parse_monomial(text)


def _run_job(job):
    kind = job[0]
    if kind == "identity":
        _, name, s = job
        return ("identity", check_identity(CATALOG[name], s))
    _, family, q, y, z, ns, ks, eps = job
    reps, hs = run_residue_family(family, q, y, z, ns, ks=ks, eps=eps)
    return ("residue", reps, hs)


def run_suite(config: SuiteConfig, with_residues: bool = True) -> SuiteReport:
    """Execute the configured checks, aggregate the reports, and sort them
    stably by id.  The residue families run when the config does not narrow
    the identity list (the full default suite) unless disabled."""
    jobs = [("identity", name, s) for name, s in _plan_suite(config)]
    if with_residues and config.identities is None:
        q, y, z = config.residue_point
        for family in RESIDUE_FAMILIES:
            if family == "prop21":
                jobs.append(
                    ("residue", family, q, y, z, (), (-1, 0, 1, 2), config.eps)
                )
            else:
                # one job per pole index for load balance across workers
                for n in config.residue_ns:
                    jobs.append(
                        ("residue", family, q, y, z, (n,), None, config.eps)
                    )
    if config.parallelism and config.parallelism > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
            results = list(pool.map(_run_job, jobs, chunksize=1))
    else:
        results = [_run_job(j) for j in jobs]
    out = SuiteReport([])
    for res in results:
        if res[0] == "identity":
            out.reports.append(res[1])
        else:
            out.residue_reports.extend(res[1])
            out.h_sums.extend(res[2])
    out.reports.sort(key=lambda r: r.id)
    out.residue_reports.sort(key=lambda r: r.label)
    out.h_sums.sort(key=lambda t: t[0])
    return out
