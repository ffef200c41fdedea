"""Batch command line front end.

Every command reads one expression, runs deterministically, and emits a JSON
report (stdout, and --json PATH for a file copy).  Reports carry a schema
tag, the inputs with their sha256 digest, exact values as num/2^exp strings,
and named pass/fail assertions.  Nothing time- or machine-dependent goes
into a report, so identical inputs and seeds give byte-identical output.

Exit codes: 0 ok, 2 expression syntax, 3 validation, 4 broken certificate
or budget, 5 statistical gate.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

from .codes import (
    annotate_min_ranks,
    evaluate,
    is_complement_free,
    make_alternating,
    member,
    normalize_demorgan,
    support_depth,
)
from .decoration import (
    check_preservation,
    decorate,
    empty_generator,
    split_generator,
)
from .dsl import code_to_json, parse_dsl, print_dsl
from .errors import (
    BudgetError,
    CertificateError,
    ParseError,
    StatisticalGateError,
    ValidationError,
)
from .gdelta import budget_report
from .measure import (
    assemble_bad_gdelta,
    build_decomposition,
    measure_of_code,
    verify_decomposition,
)
from .ordinals import OrdinalNotation
from .sampling import mc_integral
from .space import ClopenSet, EventuallyPeriodicPoint, SeededPoint, enumerate_eventually_periodic

SCHEMA = "cantor-measure/1"


def _parse_point(spec: str):
    if spec.startswith("seed="):
        try:
            return SeededPoint(int(spec[5:], 10))
        except ValueError:
            raise ValidationError(f"bad seed in point spec {spec!r}")
    if spec.startswith("u=") and ":v=" in spec:
        u, _, v = spec[2:].partition(":v=")
        return EventuallyPeriodicPoint(u, v)
    raise ValidationError(
        f"point spec {spec!r} is neither 'u=<bits>:v=<bits>' nor 'seed=<int>'"
    )


def _addr_str(addr) -> str:
    return ".".join(str(a) for a in addr)


def _prepared(args):
    """Parse and apply the shared shaping flags."""
    code = parse_dsl(args.expr)
    shaped = code
    if getattr(args, "normalize", False) or getattr(args, "alternating", False):
        shaped = normalize_demorgan(shaped)
    if getattr(args, "alternating", False):
        shaped = make_alternating(annotate_min_ranks(shaped))
    return code, shaped


def _report(args, verb: str, payload: dict) -> dict:
    inputs = {"expr": args.expr}
    for k in ("point", "mc", "seed", "depth", "rank", "generator", "budget",
              "normalize", "alternating"):
        v = getattr(args, k, None)
        if v not in (None, False):
            inputs[k] = v
    digest = hashlib.sha256(
        json.dumps([verb, inputs], sort_keys=True).encode()
    ).hexdigest()
    out = {"schema": SCHEMA, "command": verb, "inputs": inputs, "digest": digest}
    out.update(payload)
    return out


def _emit(report: dict, path: str | None) -> None:
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    sys.stdout.write(text)
    if path:
        with open(path, "w") as fh:
            fh.write(text)


def _require_normalized(code):
    return code if is_complement_free(code) else normalize_demorgan(code)


def _cmd_parse(args) -> dict:
    code, shaped = _prepared(args)
    assertions = []
    payload = {
        "expr": print_dsl(shaped),
        "code": code_to_json(shaped),
        "complement_free": is_complement_free(shaped),
    }
    if is_complement_free(shaped):
        payload["support_depth"] = support_depth(shaped)
    if args.rank is not None:
        want = OrdinalNotation.parse(args.rank)
        ranked = annotate_min_ranks(_require_normalized(shaped))
        got = ranked.rank
        ok = got == want
        assertions.append({"name": "root rank", "pass": ok,
                           "want": str(want), "got": str(got)})
        if not ok:
            payload["assertions"] = assertions
            return payload, 3
    payload["assertions"] = assertions
    return payload


def _cmd_eval(args) -> dict:
    if args.point is None:
        raise ValidationError("eval needs --point")
    _, shaped = _prepared(args)
    shaped = _require_normalized(shaped)
    x = _parse_point(args.point)
    emap = evaluate(shaped, x)
    return {
        "point": x.describe(),
        "member": bool(member(shaped, x)),
        "eval_map": {_addr_str(a): v for a, v in sorted(emap.items())},
    }


def _cmd_measure(args) -> dict:
    _, shaped = _prepared(args)
    shaped = _require_normalized(shaped)
    exact = measure_of_code(shaped)
    payload = {"measure": str(exact)}
    if args.mc:
        est = mc_integral(shaped, args.mc, args.seed)
        payload["estimate"] = str(est.value)
        payload["trials"] = est.trials
        payload["seed"] = est.seed
        payload["abs_delta"] = str(abs(exact - est.value))
    return payload


def _cmd_decompose(args) -> dict:
    _, shaped = _prepared(args)
    shaped = _require_normalized(shaped)
    d = build_decomposition(shaped)
    res = verify_decomposition(shaped, d)
    if not res:
        raise CertificateError(
            f"decomposition fails the {res.law} law at address {res.address}"
        )
    rows = []
    for addr in sorted(d):
        lim = d[addr].exact_limit()
        rows.append({"address": _addr_str(addr), "integral": str(lim.integral())})
    return {
        "addresses": rows,
        "measure": str(measure_of_code(shaped)),
        "assertions": [{"name": "decomposition laws", "pass": True}],
    }


def _cmd_tests_combine(args) -> dict:
    _, shaped = _prepared(args)
    shaped = _require_normalized(shaped)
    d = build_decomposition(shaped)
    t = assemble_bad_gdelta(shaped, d)
    size = args.depth if args.depth is not None else 3
    table = []
    for n in range(size + 1):
        row = []
        for s in range(size + 1):
            row.append(str(budget_report(t, n, s)))
        table.append(row)
    return {
        "levels": size + 1,
        "stages": size + 1,
        "stage_measures": table,
        "assertions": [{"name": "stage budgets", "pass": True}],
    }


def _load_generator(args, root_rank):
    spec = args.generator or "empty"
    if spec == "empty":
        if args.budget:
            budgets = [OrdinalNotation.parse(b) for b in args.budget.split(",")]
            return empty_generator_from(budgets)
        return empty_generator(root_rank)
    if spec == "split" or spec.startswith("split:"):
        if not args.budget:
            raise ValidationError("split generator needs --budget")
        budgets = [OrdinalNotation.parse(b) for b in args.budget.split(",")]
        targets = None
        if spec.startswith("split:"):
            with open(spec[6:]) as fh:
                raw = json.load(fh)
            targets = [ClopenSet(tuple(gens)) for gens in raw]
        return split_generator(budgets, targets)
    raise ValidationError(f"unknown generator {spec!r}")


def empty_generator_from(budgets):
    from .decoration import DecorationGenerator, empty_set_code

    return DecorationGenerator(
        tuple((b, empty_set_code(b), empty_set_code(b)) for b in budgets)
    )


def _cmd_decorate(args) -> dict:
    _, shaped = _prepared(args)
    shaped = make_alternating(annotate_min_ranks(_require_normalized(shaped)))
    gen = _load_generator(args, shaped.rank)
    out = decorate(shaped, gen)
    k = args.depth if args.depth is not None else 2
    points = list(enumerate_eventually_periodic(k, k))
    rep = check_preservation(shaped, gen, points)
    return {
        "expr": print_dsl(out),
        "rank": str(out.rank),
        "budgets": [str(b) for b in gen.budgets()],
        "checked_points": rep.checked,
        "preserved": rep.preserved,
        "captured": list(rep.captured),
        "assertions": [
            {"name": "membership outside footprint", "pass": rep.ok},
            {"name": "evaluation maps clause-valid", "pass": not rep.violations},
        ],
    }


def _cmd_report(args) -> dict:
    _, shaped = _prepared(args)
    shaped = _require_normalized(shaped)
    payload = {
        "expr": print_dsl(shaped),
        "support_depth": support_depth(shaped),
        "measure": str(measure_of_code(shaped)),
    }
    d = build_decomposition(shaped)
    res = verify_decomposition(shaped, d)
    assertions = [{"name": "decomposition laws", "pass": bool(res)}]
    t = assemble_bad_gdelta(shaped, d)
    for n in range(3):
        for s in range(3):
            budget_report(t, n, s)
    assertions.append({"name": "stage budgets", "pass": True})
    if args.mc:
        est = mc_integral(shaped, args.mc, args.seed)
        payload["estimate"] = str(est.value)
        payload["seed"] = est.seed
        payload["trials"] = est.trials
    payload["assertions"] = assertions
    return payload


_COMMANDS = {
    "parse": _cmd_parse,
    "eval": _cmd_eval,
    "measure": _cmd_measure,
    "decompose": _cmd_decompose,
    "tests-combine": _cmd_tests_combine,
    "decorate": _cmd_decorate,
    "report": _cmd_report,
}


def _build_argparser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cantor-measure",
        description="Exact measure computations on Borel codes over Cantor space.",
    )
    sub = ap.add_subparsers(dest="verb", required=True)
    for verb in _COMMANDS:
        p = sub.add_parser(verb)
        p.add_argument("expr", help="expression in the cyl/union/inter DSL")
        p.add_argument("--normalize", action="store_true",
                       help="push complements to the leaves")
        p.add_argument("--alternating", action="store_true",
                       help="normalize, rank, and fuse to alternating form")
        p.add_argument("--rank", default=None, metavar="CNF",
                       help="assert the minimal root rank equals this notation")
        p.add_argument("--point", default=None, metavar="SPEC",
                       help="'u=<bits>:v=<bits>' or 'seed=<int>'")
        p.add_argument("--mc", type=int, default=None, metavar="N",
                       help="Monte Carlo trial count")
        p.add_argument("--seed", type=int, default=0, metavar="S")
        p.add_argument("--depth", type=int, default=None, metavar="D")
        p.add_argument("--json", default=None, metavar="PATH",
                       help="also write the report to this file")
        p.add_argument("--generator", default=None, metavar="G",
                       help="'empty' or 'split' or 'split:<targets.json>'")
        p.add_argument("--budget", default=None, metavar="CNFS",
                       help="comma-separated ordinal notations")
    return ap


def main(argv=None) -> int:
    args = _build_argparser().parse_args(argv)
    try:
        result = _COMMANDS[args.verb](args)
        rc = 0
        if isinstance(result, tuple):
            result, rc = result
        _emit(_report(args, args.verb, result), args.json)
        return rc
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except (BudgetError, CertificateError) as e:
        print(f"certificate error: {e}", file=sys.stderr)
        return 4
    except StatisticalGateError as e:
        print(f"statistical gate: {e}", file=sys.stderr)
        return 5
    except ValidationError as e:
        print(f"validation error: {e}", file=sys.stderr)
        return 3
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
