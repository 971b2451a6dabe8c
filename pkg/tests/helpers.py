"""Shared test utilities."""

import random


def random_ast(rng: random.Random, depth=0):
    """A random well-formed DSL AST for round-trip checks."""
    import qlerch.dsl as D

    choices = ["num", "q", "var"]
    if depth < 4:
        choices += ["neg", "bin", "call"] * 2
    kind = rng.choice(choices)
    span = (0, 0)
    if kind == "num":
        return D.Num(rng.randrange(0, 50), span)
    if kind == "q":
        return D.Q(span)
    if kind == "var":
        return D.Var(rng.choice("xyzw"), span)
    if kind == "neg":
        return D.Unary("-", random_ast(rng, depth + 1), span)
    if kind == "bin":
        op = rng.choice("+-*/^")
        return D.Bin(op, random_ast(rng, depth + 1), random_ast(rng, depth + 1), span)
    name = rng.choice(["j", "m", "J", "Jb", "Jm", "poch", "kron1", "triple", "F"])
    arity, semi_at = D._CALLS[name]
    args = [random_ast(rng, depth + 1) for _ in range(arity)]
    seps = ["comma"] * (arity - 1)
    if semi_at is not None:
        seps[semi_at - 1] = "semicolon"
    return D.Call(name, args, seps, span)
