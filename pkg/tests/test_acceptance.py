"""End-to-end acceptance gate.

Each test prints one PASS/FAIL line for its criterion and asserts it.  Run
with -s to see the lines as they happen:

    pytest tests/test_acceptance.py -v -s
"""

import functools
import json
import random
import time

from cantor_measure.cli import main as cli_main
from cantor_measure.codes import (
    InterNode,
    Leaf,
    UnionNode,
    addresses,
    check_rank,
    child_items,
    eval_map_violations,
    evaluate,
    is_alternating,
    membership_table,
    support_depth,
)
from cantor_measure.decoration import (
    check_preservation,
    decorate,
    empty_generator,
    split_generator,
)
from cantor_measure.dsl import parse_dsl, print_dsl
from cantor_measure.dyadic import Dyadic
from cantor_measure.gdelta import combine
from cantor_measure.measure import (
    build_decomposition,
    char_to_regularity,
    measure_of_code,
    regularity_to_char,
    verify_decomposition,
)
from cantor_measure.names import (
    bad_set,
    constant_name,
    diagonal_name,
    names_equal,
)
from cantor_measure.ordinals import ONE_ORD, OrdinalNotation
from cantor_measure.sampling import conditional_average, mc_integral, sampled_average
from cantor_measure.space import (
    ClopenSet,
    EventuallyPeriodicPoint,
    clopen_subset,
    enumerate_eventually_periodic,
    mu_I,
)
from cantor_measure.stepfn import StepFunction, l1_norm

from bruteforce import contains_prefix, counting_measure, dyadic_fraction, emap_bf
from gen import (
    char_noise_name,
    perturbed_name,
    random_code,
    random_ranked_alternating,
    random_stepfn,
    rapid_family_member,
)


def _line(n, label, ok, detail):
    print(f"[criterion {n:02d}] {label}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {n} failed: {detail}"


@functools.lru_cache(maxsize=1)
def _corpus():
    rng = random.Random(1001)
    out = []
    for _ in range(1000):
        out.append(
            random_code(
                rng,
                max_depth=rng.randint(1, 8),
                max_children=3,
                max_gen_len=rng.randint(2, 6),
            )
        )
    return out


def test_criterion_01_exact_measure_oracle():
    t0 = time.monotonic()
    codes = _corpus()
    good = 0
    for c in codes:
        if dyadic_fraction(measure_of_code(c)) == counting_measure(c):
            good += 1
    dt = time.monotonic() - t0
    _line(1, "exact measure equals prefix-counting oracle",
          good == 1000 and dt < 30.0, f"{good}/1000 in {dt:.1f}s")


def test_criterion_02_evaluation_semantics():
    codes = _corpus()
    checked = bad = 0
    for c in codes:
        d = support_depth(c)
        for i in range(1 << d):
            p = format(i, f"0{d}b") if d else ""
            x = EventuallyPeriodicPoint(p, "0")
            emap = evaluate(c, x)
            checked += 1
            if emap != emap_bf(c, p):
                bad += 1
            elif list(eval_map_violations(c, x, emap)):
                bad += 1
    _line(2, "evaluation maps match direct truth recursion",
          bad == 0, f"{checked} prefix points, {bad} mismatches")


def _mirror(code):
    if isinstance(code, Leaf):
        return code
    kids = tuple(_mirror(c) for _, c in child_items(code))[::-1]
    return type(code)(children=kids, rank=code.rank)


def _mirror_addr(code, addr):
    out = []
    node = code
    for s in addr:
        n = len(node.children)
        out.append(n - 1 - s)
        node = dict(child_items(node))[s]
    return tuple(out)


def test_criterion_03_decomposition_laws_and_uniqueness():
    codes = _corpus()
    verified = agree = total_addr = 0
    for c in codes:
        d = build_decomposition(c)
        if verify_decomposition(c, d):
            verified += 1
        m = _mirror(c)
        dm = build_decomposition(m)
        for addr in addresses(c):
            total_addr += 1
            if names_equal(d[addr], dm[_mirror_addr(c, addr)]).equal:
                agree += 1
    ok = verified == 1000 and agree == total_addr
    _line(3, "decompositions verify and are unique up to child order",
          ok, f"{verified}/1000 verified, {agree}/{total_addr} addresses agree")


def test_criterion_04_bad_set_and_diagonal_bounds():
    rng = random.Random(1004)
    names = [perturbed_name(rng) for _ in range(250)]
    names += [char_noise_name(rng) for _ in range(250)]
    stage_bad = 0
    for nm in names:
        for level in range(4):
            bs = bad_set(nm, level)
            for s in range(4):
                if not mu_I(bs.stage(s)) <= Dyadic.pow2(-level):
                    stage_bad += 1

    diag_bad = 0
    for _ in range(60):
        base = random_stepfn(rng, max_depth=3, max_exp=3)
        hs = []
        for j in range(rng.randint(3, 5)):
            delta = StepFunction(
                1, j + 3, (rng.randint(0, 2), rng.randint(0, 2))
            ) if rng.random() < 0.7 else StepFunction.constant(Dyadic(0, 0))
            shifted = base + delta
            hs.append(constant_name(shifted, label=f"h{j}")
                      if rng.random() < 0.5 else
                      perturbed_name(rng, base=shifted, label=f"h{j}"))
        g = constant_name(base)
        out = diagonal_name(hs, g=g)
        fs = [h.term(2 * i + 1) for i, h in enumerate(hs)]
        for i in range(len(fs) - 1):
            bound = Dyadic.pow2(-2 * i) + Dyadic.pow2(-i) + Dyadic.pow2(-2 * i)
            if not l1_norm(fs[i], fs[i + 1]) <= bound:
                diag_bad += 1
        glim = g.exact_limit()
        for i, f in enumerate(fs):
            if not l1_norm(f, glim) <= Dyadic.pow2(-2 * i) + Dyadic.pow2(-i + 1):
                diag_bad += 1
        if out.exact_limit() is not None and l1_norm(out.exact_limit(), glim) > Dyadic.pow2(-1):
            diag_bad += 1
    ok = stage_bad == 0 and diag_bad == 0
    _line(4, "bad-set budgets and diagonal difference bounds hold exactly",
          ok, f"500 names, 60 diagonals, {stage_bad + diag_bad} violations")


def test_criterion_05_test_combination():
    rng = random.Random(1005)
    fams = [rapid_family_member(rng) for _ in range(500)]
    bad = 0
    for g0 in range(0, 500, 4):
        group = fams[g0 : g0 + 4]
        c = combine(group, label=f"grp{g0}")
        for j in range(3):
            for s in range(5):
                if not mu_I(c.stage(j, s)) <= Dyadic.pow2(-j):
                    bad += 1
                for n in range(min(len(group) - 1, s) + 1):
                    if not clopen_subset(group[n].stage(n + j + 1, s), c.stage(j, s)):
                        bad += 1
    _line(5, "combined tests keep budgets and contain scheduled inputs",
          bad == 0, f"500 families in 125 groups, {bad} violations")


def test_criterion_06_conditional_average_exactness():
    rng = random.Random(1006)
    bad = 0
    for _ in range(200):
        f = random_stepfn(rng)
        for i in range(f.depth, f.depth + 3):
            if conditional_average(f, i) != f:
                bad += 1
        norms = [l1_norm(conditional_average(f, i), f) for i in range(f.depth + 1)]
        if norms[f.depth] != Dyadic(0, 0):
            bad += 1
        if f.depth > 0 and norms[f.depth - 1] == Dyadic(0, 0):
            bad += 1
    _line(6, "cell averages are exact and sharp at the support depth",
          bad == 0, f"200 step functions, {bad} violations")


_FIXED = [
    ("cyl()", Dyadic(1, 0)),
    ("empty", Dyadic(0, 0)),
    ("cyl(0)", Dyadic(1, 1)),
    ("cyl(01)", Dyadic(1, 2)),
    ("union(cyl(0),cyl(11))", Dyadic(3, 2)),
    ("inter(cyl(0),cyl(01))", Dyadic(1, 2)),
    ("compl(cyl(000))", Dyadic(7, 3)),
    ("union(cyl(00),cyl(01))", Dyadic(1, 1)),
    ("inter(union(cyl(0),cyl(10)),compl(cyl(00)))", Dyadic(1, 1)),
    ("bigunion(n,0,3,reloc($n,cyl()))", Dyadic(15, 4)),
    ("union(cyl(000),cyl(001),cyl(01),cyl(1))", Dyadic(1, 0)),
    ("inter(compl(cyl(0)),compl(cyl(10)))", Dyadic(1, 2)),
    ("union(inter(cyl(0),cyl(00)),inter(cyl(1),cyl(11)))", Dyadic(1, 1)),
    ("reloc(2,cyl(1))", Dyadic(1, 4)),
    ("union(cyl(0101),cyl(1010))", Dyadic(1, 3)),
    ("compl(union(cyl(00),cyl(11)))", Dyadic(1, 1)),
    ("inter(cyl(),union(cyl(0),cyl(1)))", Dyadic(1, 0)),
    ("union(cyl(0),compl(cyl(0)))", Dyadic(1, 0)),
    ("inter(union(cyl(00),cyl(01),cyl(10)),union(cyl(01),cyl(10),cyl(11)))", Dyadic(1, 1)),
    ("bigunion(n,0,2,reloc($n,cyl(1)))", Dyadic(7, 4)),
]


def test_criterion_07_monte_carlo_gates():
    from cantor_measure.codes import normalize_demorgan

    t0 = time.monotonic()
    hits = 0
    for k, (expr, want) in enumerate(_FIXED):
        code = normalize_demorgan(parse_dsl(expr))
        assert measure_of_code(code) == want
        est = mc_integral(code, trials=100_000, seed=k)
        if abs(float(est) - float(want)) <= 0.01:
            hits += 1

    f = random_stepfn(random.Random(1007), max_depth=3, max_exp=3)
    avg_hits = 0
    for seed in range(20):
        h = sampled_average(f, 2, trials=20_000, seed=seed)
        if float(l1_norm(h, conditional_average(f, 2))) <= 0.02:
            avg_hits += 1
    dt = time.monotonic() - t0
    ok = hits >= 19 and avg_hits >= 19 and dt < 60.0
    _line(7, "seeded Monte Carlo lands inside both statistical gates",
          ok, f"integral {hits}/20, average {avg_hits}/20, {dt:.1f}s")


def test_criterion_08_regularity_round_trips():
    rng = random.Random(1008)
    bad = 0
    for _ in range(100):
        nm = char_noise_name(rng)
        approx = char_to_regularity(nm)
        back = regularity_to_char(approx, stage_oracle=lambda n: 0)
        if not names_equal(nm, back).equal:
            bad += 1
        a2 = char_to_regularity(back)
        again = regularity_to_char(a2, stage_oracle=lambda n: 0)
        if not names_equal(back, again).equal:
            bad += 1
        for n in range(5):
            if not mu_I(approx.overlap_stage(n, 1)) <= Dyadic(3, 0) * Dyadic.pow2(-n + 1):
                bad += 1
    _line(8, "regularity round-trips preserve names within overlap budgets",
          bad == 0, f"100 names both directions, {bad} violations")


def test_criterion_09_decorate_properties():
    rng = random.Random(1009)
    gens = [
        empty_generator(OrdinalNotation.finite(4)),
        split_generator([ONE_ORD, OrdinalNotation.finite(2), OrdinalNotation.finite(3)]),
    ]
    pts = list(enumerate_eventually_periodic(2, 2))
    bad = 0
    for _ in range(100):
        code = random_ranked_alternating(rng)
        for gi, gen in enumerate(gens):
            dec = decorate(code, gen)
            if not (check_rank(dec) and is_alternating(dec) and dec.rank == code.rank):
                bad += 1
            if gi == 0:
                d = max(membership_table(code)[0], membership_table(dec)[0])
                if membership_table(code, d)[1] != membership_table(dec, d)[1]:
                    bad += 1
            else:
                rep = check_preservation(code, gen, pts)
                if rep.violations:
                    bad += 1
    _line(9, "decoration keeps rank, alternation, and honest membership",
          bad == 0, f"100 ranked codes, both generators, {bad} violations")


def test_criterion_10_cli_round_trip_and_stability(tmp_path):
    rng = random.Random(1010)
    bad = 0
    for _ in range(200):
        c = random_code(rng, max_depth=3, max_gen_len=4, allow_compl=True)
        s = print_dsl(c)
        if print_dsl(parse_dsl(s)) != s:
            bad += 1

    stable = True
    for k, argv in enumerate([
        ["report", "union(cyl(0),cyl(11))", "--mc", "1000", "--seed", "5"],
        ["measure", "inter(cyl(0),cyl(01))", "--mc", "500"],
        ["decompose", "union(cyl(0),inter(cyl(1),cyl(11)))"],
    ]):
        a, b = tmp_path / f"a{k}.json", tmp_path / f"b{k}.json"
        assert cli_main(argv + ["--json", str(a)]) == 0
        assert cli_main(argv + ["--json", str(b)]) == 0
        if a.read_bytes() != b.read_bytes():
            stable = False
        json.loads(a.read_text())
    ok = bad == 0 and stable
    _line(10, "printer and parser agree and reports are byte-stable",
          ok, f"200 expressions, {bad} drifts, stable={stable}")
