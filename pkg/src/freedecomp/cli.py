"""Command-line front end.

Exit codes: 0 pass, 1 a check failed, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import registry
from .free import BudgetError, IntegrityError, check_sheaf, roundtrip_presheaf, roundtrip_space, validate_presheaf
from .incidence import check_mobius, comult, format_fraction, lengths, mobius
from .simplicial import (
    TruncationError,
    check_culf,
    check_decomposition,
    check_segal,
    check_simplicial_identities,
    compare_active_arrows_with_el_bn,
    compare_tw_bn_with_delta_inert,
)


class UsageError(Exception):
    pass


@dataclass
class CommandConfig:
    example: str
    truncation: int | None
    bound: int | None
    element: str | None
    fmt: str
    alphabet: str | None = None

    def validate(self):
        if self.bound is not None and self.bound < 1:
            raise UsageError("--bound must be positive")
        if self.truncation is not None and self.truncation < 1:
            raise UsageError("--truncation must be positive")
        try:
            self.entry = registry.get(self.example)
        except registry.UnknownExample as exc:
            raise UsageError(exc.args[0]) from None
        return self

    @property
    def N(self) -> int:
        return self.entry.truncation if self.truncation is None else self.truncation

    def presheaf(self):
        return self.entry.presheaf(self.bound, alphabet=self.alphabet)

    def space(self, N=None):
        return self.entry.space(self.N if N is None else N, self.bound, alphabet=self.alphabet)


def _emit(doc: dict, fmt: str, table_rows=None, header=None) -> None:
    if fmt == "json":
        print(json.dumps(doc, indent=2, ensure_ascii=False))
        return
    if header:
        print(header)
    for row in table_rows or []:
        print("  ".join(str(c) for c in row))


def _config(args) -> CommandConfig:
    return CommandConfig(args.example, args.truncation, args.bound, getattr(args, "element", None), args.format, args.alphabet).validate()


def cmd_enumerate(args) -> int:
    cfg = _config(args)
    level = 1 if args.level is None else args.level
    if args.space == "free":
        X, _ = cfg.space(max(cfg.N, level))
        elems = X.encodings(level)
    else:
        if isinstance(cfg.entry, registry.NaturalsExample):
            X, _ = cfg.space(max(cfg.N, level))
            elems = X.encodings(level)
        else:
            A = cfg.presheaf()
            if level > A.budget:
                raise UsageError(f"level {level} is above the budget {A.budget}; raise --bound")
            elems = [A.encode(x) for x in A.levels[level]]
    doc = {"example": cfg.example, "space": args.space, "level": level, "count": len(elems), "elements": elems}
    _emit(doc, cfg.fmt, [[e if e else "()"] for e in elems], f"{cfg.example} {args.space} level {level}: {len(elems)} elements")
    return 0


def cmd_check(args) -> int:
    cfg = _config(args)
    which = args.which
    if which == "sheaf" or which == "presheaf":
        if isinstance(cfg.entry, registry.NaturalsExample):
            A = cfg.entry.presheaf(cfg.bound)
        else:
            A = cfg.presheaf()
        rep = check_sheaf(A) if which == "sheaf" else validate_presheaf(A)
    else:
        X, phi = cfg.space()
        if which == "simplicial":
            rep = check_simplicial_identities(X)
        elif which == "decomposition":
            rep = check_decomposition(X)
        elif which == "segal":
            rep = check_segal(X)
        else:
            rep = check_culf(phi, full=args.full)
    doc = {"example": cfg.example, "truncation": cfg.N, **rep.to_json()}
    _emit(doc, cfg.fmt, [[json.dumps(w, ensure_ascii=False)] for w in rep.witnesses], f"{which}: {rep.verdict}")
    return 0 if rep.passed else 1


def cmd_comult(args) -> int:
    cfg = _config(args)
    if cfg.element is None:
        raise UsageError("comult needs --element")
    if cfg.N < 2:
        raise UsageError("comult needs truncation >= 2")
    if cfg.bound is None:
        cfg.bound = cfg.entry.budget_for(cfg.element)
    X, _ = cfg.space()
    A = cfg.presheaf()
    try:
        j = cfg.entry.simplex(X, A, cfg.element)
    except registry.ParseError as exc:
        raise UsageError(str(exc)) from None
    t = comult(X, j, iterate=args.iterate)
    doc = {"example": cfg.example, "element": X.encodings(1)[j], "iterate": args.iterate, "count": len(t), **t.to_json()}
    rows = [[format_fraction(c), " (x) ".join(k) if isinstance(k, tuple) else k] for k, c in t]
    _emit(doc, cfg.fmt, rows, f"comult of {X.encodings(1)[j]}: {len(t)} terms")
    return 0


def cmd_mobius(args) -> int:
    cfg = _config(args)
    if cfg.N < 2:
        raise UsageError("mobius needs truncation >= 2")
    X, _ = cfg.space()
    up_to = cfg.N - 1 if args.level is None else args.level
    if up_to > cfg.N - 1:
        raise UsageError(f"length {up_to} needs truncation >= {up_to + 1}")
    mu = mobius(X, up_to)
    rep = check_mobius(X, up_to)
    ln = lengths(X)
    enc = X.encodings(1)
    rows = [[enc[j] or "()", ln[j], format_fraction(mu.values[j])] for j in mu.defined()]
    doc = {"example": cfg.example, "truncation": cfg.N, **mu.to_json(), "lengths": {enc[j]: ln[j] for j in mu.defined()}, "cross_check": rep.verdict}
    _emit(doc, cfg.fmt, rows, "element  length  mu")
    return 0 if rep.passed else 1


def cmd_roundtrip(args) -> int:
    cfg = _config(args)
    if cfg.N < 2:
        raise UsageError("roundtrip needs truncation >= 2")
    X, phi = cfg.space()
    A = cfg.entry.presheaf(cfg.bound, alphabet=cfg.alphabet)
    r1 = roundtrip_presheaf(A, cfg.N)
    r2 = roundtrip_space(X, phi)
    passed = r1.passed and r2.passed
    doc = {"example": cfg.example, "truncation": cfg.N, "verdict": "pass" if passed else "fail", "checks": [r1.to_json(), r2.to_json()]}
    _emit(doc, cfg.fmt, [[r1.name, r1.verdict], [r2.name, r2.verdict]], f"roundtrip: {doc['verdict']}")
    return 0 if passed else 1


def cmd_compare(args) -> int:
    N = 5 if args.truncation is None else args.truncation
    W = 6 if args.bound is None else args.bound
    reports = []
    rows = []
    if args.which in ("tw", "all"):
        if N < 5:
            raise UsageError("the tw comparison needs --truncation >= 5")
        r = compare_tw_bn_with_delta_inert(N, W)
        reports.append(r)
        rows += [[f"hom({k})", v] for k, v in r.details["homs"].items()]
    if args.which in ("arr", "all"):
        r = compare_active_arrows_with_el_bn(args.kmax, W)
        reports.append(r)
        rows += [[k, v] for k, v in r.details.items()]
    passed = all(r.passed for r in reports)
    doc = {"truncation": N, "bound": W, "verdict": "pass" if passed else "fail", "checks": [r.to_json() for r in reports]}
    _emit(doc, args.format, rows, f"compare: {doc['verdict']}")
    return 0 if passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="freedecomp", description="Free decomposition spaces and their incidence coalgebras.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, element=False):
        sp.add_argument("--example", default="words", help="registered example name")
        sp.add_argument("--truncation", type=int, help="simplicial truncation N")
        sp.add_argument("--bound", type=int, help="weight or length budget")
        sp.add_argument("--alphabet", help="alphabet for word examples")
        sp.add_argument("--format", choices=("json", "table"), default="json")
        if element:
            sp.add_argument("--element", help="element in the example's encoding")

    sp = sub.add_parser("enumerate", help="list one level of a presheaf or free space")
    common(sp)
    sp.add_argument("--level", type=int)
    sp.add_argument("--space", choices=("presheaf", "free"), default="presheaf")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("check", help="run a checker; exit 1 on failure")
    common(sp)
    sp.add_argument("--which", choices=("simplicial", "decomposition", "segal", "sheaf", "culf", "presheaf"), default="decomposition")
    sp.add_argument("--full", action="store_true", help="culf: check every active generator")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("comult", help="comultiplication of one element")
    common(sp, element=True)
    sp.add_argument("--iterate", type=int, default=1)
    sp.set_defaults(func=cmd_comult)

    sp = sub.add_parser("mobius", help="Möbius function up to the certified length")
    common(sp)
    sp.add_argument("--level", type=int, help="largest length to report")
    sp.set_defaults(func=cmd_mobius)

    sp = sub.add_parser("roundtrip", help="recover(free(A)) = A and free(recover(X)) = X")
    common(sp)
    sp.set_defaults(func=cmd_roundtrip)

    sp = sub.add_parser("compare", help="tw(BN) against the inert maps, active arrows against el(BN)")
    sp.add_argument("--which", choices=("tw", "arr", "all"), default="all")
    sp.add_argument("--truncation", type=int)
    sp.add_argument("--bound", type=int)
    sp.add_argument("--kmax", type=int, default=3)
    sp.add_argument("--format", choices=("json", "table"), default="json")
    sp.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except (UsageError, BudgetError, TruncationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IntegrityError as exc:
        print(f"integrity failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
