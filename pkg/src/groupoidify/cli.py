"""
Command-line entry point.

Every command prints one JSON document {"status": ..., "payload": ...} with
sorted keys; ``matrix --csv`` prints bare CSV instead.  ``--json-out PATH``
writes just the payload, so a composite span can be fed back in.  Exit codes:
0 ok, 1 an invariant failed (the output carries a witness), 2 the input could
not be used.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from fractions import Fraction

from . import config
from .degroupoidify import (
    frac_str,
    generating_function,
    inner_product,
    inner_product_weighted,
    matrix,
    matrix_oracle,
    vector,
)
from .errors import GroupoidError
from .groupoid import (
    FiniteGroupoid,
    Groupoid,
    ValidationReport,
    cardinality,
    cardinality_by_sources,
    validate_functor,
    validate_groupoid,
)
from .jsonio import dumps, load, over_from_json, span_from_json, span_to_json, groupoid_from_json

OK, VIOLATION, ERROR = 0, 1, 2


class Violation(Exception):
    def __init__(self, report: ValidationReport | dict, where: str):
        super().__init__(where)
        self.payload = report.to_json() if isinstance(report, ValidationReport) else report
        self.where = where


def _checked(G: Groupoid, where: str) -> Groupoid:
    if isinstance(G, FiniteGroupoid):
        r = validate_groupoid(G)
        if not r.ok:
            raise Violation(r, where)
    return G


def _check_functor(F, where: str) -> None:
    r = validate_functor(F)
    if not r.ok:
        raise Violation(r, where)


def _load_span(path: str):
    S = span_from_json(load(path))
    _checked(S.apex, "apex")
    _checked(S.domain, "domain")
    _checked(S.codomain, "codomain")
    _check_functor(S.left, "left leg")
    _check_functor(S.right, "right leg")
    return S


def _load_over(path: str):
    v = over_from_json(load(path))
    _checked(v.total, "total")
    _checked(v.base, "base")
    _check_functor(v.projection, "projection")
    return v


# ---------------------------------------------------------------------------
# commands


def cmd_card(args) -> tuple[int, object]:
    G = _checked(groupoid_from_json(load(args.groupoid)), "groupoid")
    return OK, frac_str(cardinality(G))


def cmd_vector(args):
    return OK, vector(_load_over(args.over)).to_json()


def cmd_matrix(args):
    M = matrix(_load_span(args.span))
    if args.csv:
        return OK, M.to_csv()
    return OK, M.to_json()


def cmd_compose(args):
    from .span import compose
    T, S = _load_span(args.t), _load_span(args.s)
    return OK, span_to_json(compose(T, S))


def cmd_inner(args):
    return OK, frac_str(inner_product(_load_over(args.phi), _load_over(args.psi)))


def cmd_genfun(args):
    return OK, generating_function(_load_over(args.over), args.max).to_json()


FEYNMAN_CASES = [((1,), 0, 1), ((2,), 1, 1), ((2,), 2, 0), ((2,), 0, 2), ((1, 1), 0, 0),
                 ((2, 2), 0, 0), ((3, 3), 0, 0), ((4,), 2, 2), ((1, 2), 1, 0)]

LISTED_NORMAL_ORDER = {
    0: {"": 1},
    1: {"a": 1, "a*": 1},
    2: {"aa": 1, "a*a": 2, "a*a*": 1},
    3: {"aaa": 1, "a*aa": 3, "a*a*a": 3, "a*a*a*": 1},
    4: {"aaaa": 1, "a*aaa": 4, "a*a*aa": 6, "a*a*a*a": 4, "a*a*a*a*": 1},
}


def cmd_osc_verify(args):
    from .oscillator import feynman_entry, normal_order, safe_bound, span_entry, verify_commutation
    N = args.max_n
    comm = verify_commutation(N)
    orders = {str(n): normal_order(n).as_strings() == LISTED_NORMAL_ORDER[n]
              for n in range(5)}
    feyn = []
    for vals, i, j in FEYNMAN_CASES:
        if safe_bound(vals, i, j) > N:
            continue
        a, b = feynman_entry(vals, i, j), span_entry(vals, i, j)
        feyn.append({"valences": list(vals), "in": i, "out": j,
                     "diagrams": frac_str(a), "spans": frac_str(b), "agree": a == b})
    ok = comm.ok and all(orders.values()) and all(f["agree"] for f in feyn)
    payload = {"commutation": comm.to_json(), "normal_order": orders, "feynman": feyn, "ok": ok}
    return (OK if ok else VIOLATION), payload


def cmd_hecke_verify(args):
    from .hecke import verify_hecke
    rep = verify_hecke(args.q)
    return (OK if rep.ok else VIOLATION), rep.to_json()


def selftest(seed: int = 0, rounds: int = 20) -> dict:
    """Randomized spot checks of the main identities."""
    from .randomized import random_groupoid, random_over, random_span
    from .span import compose, identity_span, scalar, span_sum
    from .groupoid import discrete
    rng = random.Random(seed)
    results: dict[str, bool] = {}

    def record(name: str, ok: bool):
        results[name] = results.get(name, True) and ok

    for _ in range(rounds):
        G = random_groupoid(rng)
        record("groupoid_valid", validate_groupoid(G).ok)
        record("cardinality_by_sources", cardinality(G) == cardinality_by_sources(G))
        X, Y, Z = (random_groupoid(rng) for _ in range(3))
        S, T = random_span(rng, X, Y), random_span(rng, Y, Z)
        record("matrix_oracle", matrix(S) == matrix_oracle(S))
        record("functoriality", matrix(compose(T, S)) == matrix(T) @ matrix(S))
        S2 = random_span(rng, X, Y)
        record("sum", matrix(span_sum(S, S2)) == matrix(S) + matrix(S2))
        k = rng.randint(1, 3)
        record("scalar", matrix(scalar(discrete(k), S)) == matrix(S).scale(k))
        phi, psi = random_over(rng, X), random_over(rng, X)
        record("inner_two_routes", inner_product(phi, psi) == inner_product_weighted(phi, psi))
        record("identity", matrix(identity_span(X)).grid
               == [[Fraction(int(i == j)) for j in range(len(X.classes))]
                   for i in range(len(X.classes))])
    return {"checks": dict(sorted(results.items())), "ok": all(results.values()),
            "rounds": rounds, "seed": seed}


def cmd_selftest(args):
    out = selftest(args.seed, args.rounds)
    return (OK if out["ok"] else VIOLATION), out


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--json-out", metavar="PATH", help="also write the payload to PATH")
    common.add_argument("--cap", type=int, help="candidate-triple cap for weak pullbacks")
    common.add_argument("--timing", action="store_true", help="include elapsed milliseconds")

    p = argparse.ArgumentParser(prog="groupoidify", parents=[common],
                                description="Exact degroupoidification of finite groupoids.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("card", parents=[common], help="cardinality of a groupoid")
    s.add_argument("groupoid")
    s.set_defaults(func=cmd_card)

    s = sub.add_parser("vector", parents=[common], help="vector of a groupoid over X")
    s.add_argument("over")
    s.set_defaults(func=cmd_vector)

    s = sub.add_parser("matrix", parents=[common], help="matrix of a span")
    s.add_argument("span")
    s.add_argument("--csv", action="store_true", help="emit the matrix as CSV text")
    s.set_defaults(func=cmd_matrix)

    s = sub.add_parser("compose", parents=[common], help="composite span T∘S")
    s.add_argument("t")
    s.add_argument("s")
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("inner", parents=[common], help="inner product of two groupoids over X")
    s.add_argument("phi")
    s.add_argument("psi")
    s.set_defaults(func=cmd_inner)

    s = sub.add_parser("genfun", parents=[common], help="generating function of a stuff type")
    s.add_argument("over")
    s.add_argument("--max", type=int, required=True)
    s.set_defaults(func=cmd_genfun)

    osc = sub.add_parser("osc", help="oscillator checks")
    osc_sub = osc.add_subparsers(dest="action", required=True)
    s = osc_sub.add_parser("verify", parents=[common])
    s.add_argument("--max-n", type=int, default=6)
    s.set_defaults(func=cmd_osc_verify)

    hk = sub.add_parser("hecke", help="Hecke algebra checks")
    hk_sub = hk.add_subparsers(dest="action", required=True)
    s = hk_sub.add_parser("verify", parents=[common])
    s.add_argument("--q", type=int, default=2)
    s.set_defaults(func=cmd_hecke_verify)

    s = sub.add_parser("selftest", parents=[common], help="randomized property checks")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--rounds", type=int, default=20)
    s.set_defaults(func=cmd_selftest)
    return p


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return ERROR if e.code else OK
    cap = getattr(args, "cap", None)
    if cap is not None:
        config.set_pullback_cap(cap)
    start = time.perf_counter()
    try:
        code, payload = args.func(args)
        doc = {"status": "ok" if code == OK else "violation", "payload": payload}
    except Violation as v:
        code, doc = VIOLATION, {"status": "violation", "where": v.where, "witness": v.payload}
    except (GroupoidError, OSError, ValueError, KeyError, TypeError) as e:
        # json.JSONDecodeError is a ValueError
        code, doc = ERROR, {"status": "error", "message": f"{type(e).__name__}: {e}"}
    finally:
        if cap is not None:
            config.set_pullback_cap(None)
    if getattr(args, "timing", False):
        doc["timing"] = round((time.perf_counter() - start) * 1000, 3)
    if code == OK and getattr(args, "csv", False):
        stdout.write(doc["payload"])
    else:
        stdout.write(dumps(doc) + "\n")
    out_path = getattr(args, "json_out", None)
    if out_path:
        # the bare payload, so outputs feed straight back in as inputs
        with open(out_path, "w") as fh:
            fh.write(dumps(doc.get("payload", doc)) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
