import random

import pytest

from cantor_measure.codes import (
    ComplNode,
    InterNode,
    Leaf,
    UnionNode,
    annotate_min_ranks,
    membership_table,
)
from cantor_measure.dsl import code_from_json, code_to_json, parse_dsl, print_dsl
from cantor_measure.errors import ParseError, ValidationError
from cantor_measure.space import ClopenSet

from bruteforce import counting_measure
from gen import random_code


def test_basic_forms():
    assert parse_dsl("empty") == Leaf(ClopenSet.empty())
    assert parse_dsl("full") == Leaf(ClopenSet.full())
    assert parse_dsl("cyl(01)") == Leaf(ClopenSet.cylinder("01"))
    assert parse_dsl("cyl()") == Leaf(ClopenSet.cylinder(""))
    u = parse_dsl("union(cyl(0),cyl(1))")
    assert isinstance(u, UnionNode) and len(u.children) == 2
    i = parse_dsl("inter(cyl(0))")
    assert isinstance(i, InterNode)
    c = parse_dsl("compl(cyl(0))")
    assert isinstance(c, ComplNode)


def test_whitespace_insensitive():
    a = parse_dsl("union( cyl(0) ,\n  cyl(1) )")
    b = parse_dsl("union(cyl(0),cyl(1))")
    assert a == b


def test_error_positions():
    with pytest.raises(ParseError) as e:
        parse_dsl("union(cyl(0)")
    assert "expecting" in str(e.value)
    assert e.value.line == 1

    with pytest.raises(ParseError) as e:
        parse_dsl("union(cyl(0),\n  qqq(1))")
    assert e.value.line == 2
    assert "unknown form" in str(e.value)

    with pytest.raises(ParseError) as e:
        parse_dsl("cyl(0);")
    assert "unexpected character" in str(e.value)


def test_trailing_garbage_rejected():
    with pytest.raises(ParseError):
        parse_dsl("cyl(0) cyl(1)")


def test_digit_context_typing():
    # bits after cyl, decimal in nat positions
    with pytest.raises(ParseError):
        parse_dsl("cyl(02)")
    c = parse_dsl("reloc(10, cyl())")
    d, table = membership_table(c)
    assert d == 11
    assert sum(table) == 1


def test_bigunion_inclusive_bounds():
    c = parse_dsl("bigunion(n,0,3,reloc($n,cyl()))")
    assert counting_measure(c) == counting_measure(
        parse_dsl("union(reloc(0,cyl()),reloc(1,cyl()),reloc(2,cyl()),reloc(3,cyl()))")
    )


def test_bigunion_empty_range():
    c = parse_dsl("bigunion(n,3,2,cyl(0))")
    assert isinstance(c, UnionNode) and c.children == ()
    assert print_dsl(c) == "empty"


def test_bigunion_nested_shadowing():
    outer = parse_dsl("bigunion(i,0,1,bigunion(i,$i,2,reloc($i,cyl(1))))")
    # inner i shadows outer; lower bound reads the outer binding
    manual = parse_dsl(
        "union(bigunion(i,0,2,reloc($i,cyl(1))),bigunion(i,1,2,reloc($i,cyl(1))))"
    )
    assert counting_measure(outer) == counting_measure(manual)


def test_unbound_index_rejected():
    with pytest.raises(ParseError) as e:
        parse_dsl("reloc($k, cyl(0))")
    assert "unbound index $k" in str(e.value)


def test_reloc_normalizes_complement_first():
    # inside [01] the complement of [0] relocates to [011]; outside nothing
    c = parse_dsl("reloc(1, compl(cyl(0)))")
    assert counting_measure(c) == counting_measure(parse_dsl("cyl(011)"))


def test_print_parse_identity_on_canonical_spellings():
    rng = random.Random(90)
    for _ in range(150):
        c = random_code(rng, max_depth=3, max_gen_len=4, allow_compl=True)
        s = print_dsl(c)
        s2 = print_dsl(parse_dsl(s))
        assert s == s2


def test_print_special_cases():
    assert print_dsl(UnionNode(())) == "empty"
    assert print_dsl(InterNode(())) == "full"
    assert print_dsl(Leaf(ClopenSet.empty())) == "empty"
    assert print_dsl(Leaf(ClopenSet.full())) == "full"
    assert print_dsl(Leaf(ClopenSet.cylinder("01"))) == "cyl(01)"
    two = Leaf(ClopenSet(("0", "10")))
    assert print_dsl(two) == "union(cyl(0),cyl(10))"


def test_json_round_trip_plain():
    rng = random.Random(91)
    for _ in range(100):
        c = random_code(rng, max_depth=3, max_gen_len=4, allow_compl=True)
        assert code_from_json(code_to_json(c)) == c


def test_json_round_trip_ranked_with_slots():
    from gen import random_ranked_alternating

    rng = random.Random(92)
    for _ in range(40):
        c = annotate_min_ranks(random_code(rng, max_depth=3, max_gen_len=3))
        assert code_from_json(code_to_json(c)) == c
        r = random_ranked_alternating(rng)
        assert code_from_json(code_to_json(r)) == r


def test_json_rejects_malformed():
    with pytest.raises(ValidationError):
        code_from_json({"rank": None})
    with pytest.raises(ValidationError):
        code_from_json({"kind": "pentagon"})
    with pytest.raises(ValidationError):
        code_from_json("cyl(0)")
