from fractions import Fraction

import pytest

from idealgames import dsl, seqspace as sq, setexpr as sx
from idealgames.errors import DslParseError


class TestSets:
    def test_finite(self):
        assert dsl.parse_set("finite{3,7}") == sx.Finite((3, 7))
        assert dsl.parse_set("finite{}") == sx.Finite(())

    def test_ap_tail(self):
        assert dsl.parse_set("ap(2,2)") == sx.ArithProg(2, 2)
        assert dsl.parse_set("tail(5)") == sx.Tail(5)

    def test_schedules(self):
        s = dsl.parse_set("isch(pow2)")
        assert isinstance(s, sx.IntervalSchedule)
        assert s.selector == sx.Tail(1)
        assert dsl.parse_set("isch(pow2,even)").selector == sx.ArithProg(2, 2)
        assert dsl.parse_set("isch(linear,{1,3})").selector == sx.Finite((1, 3))
        assert dsl.parse_set("isch(expE,all)").gen.name == "expE"

    def test_boolean(self):
        s = dsl.parse_set("union(inter(ap(2,2),tail(5)),compl(finite{1}))")
        assert s.member(6) and s.member(2) and not s.member(1)

    def test_whitespace_tolerated(self):
        s = dsl.parse_set(" union( ap(1,2) , finite{ 2 } ) ")
        assert s.member(1) and s.member(2) and not s.member(4)

    def test_round_trip_via_to_dsl(self):
        for text in (
            "finite{3,7}",
            "ap(2,2)",
            "tail(9)",
            "isch(pow2)",
            "isch(esum,even)",
            "isch(linear,{2,4})",
            "union(ap(1,2),compl(tail(40)))",
            "inter(ap(2,2),tail(5))",
        ):
            expr = dsl.parse_set(text)
            assert dsl.parse_set(expr.to_dsl()) == expr


class TestSeqs:
    def test_alt(self):
        x = dsl.parse_seq("alt(0,1)")
        assert x == sq.AlternatingPair(0, 1)

    def test_alt_fractions(self):
        x = dsl.parse_seq("alt(1/2,-1/3)")
        assert x.v0 == Fraction(1, 2) and x.v1 == Fraction(-1, 3)

    def test_inv(self):
        x = dsl.parse_seq("inv")
        assert x.term(4) == Fraction(1, 4)

    def test_enums(self):
        assert isinstance(dsl.parse_seq("ratenum"), sq.RationalEnum)
        assert isinstance(dsl.parse_seq("ratenum-signed"), sq.SignedRationalEnum)

    def test_piecewise(self):
        x = dsl.parse_seq("piecewise(finite{4,9},n,0)")
        assert x.term(4) == 4 and x.term(5) == 0

    def test_const(self):
        assert dsl.parse_seq("const(3)").term(17) == 3

    def test_decimal_is_exact(self):
        x = dsl.parse_seq("alt(0.1,0)")
        assert x.v0 == Fraction(1, 10)


class TestTransforms:
    def test_stem(self):
        t = dsl.parse_transform("stem[2,4,6]")
        assert isinstance(t, sq.Subseq) and t.stem == (2, 4, 6)

    def test_set(self):
        t = dsl.parse_transform("set(ap(2,2))")
        assert t.index(3) == 6

    def test_perm(self):
        t = dsl.parse_transform("perm-stem[2,1]")
        assert isinstance(t, sq.Perm) and t.index(1) == 2 and t.index(3) == 3


class TestErrors:
    def test_position_reported(self):
        with pytest.raises(DslParseError) as err:
            dsl.parse_set("union(ap(2,2)")
        assert err.value.line == 1

    def test_trailing_garbage(self):
        with pytest.raises(DslParseError):
            dsl.parse_set("tail(5)x")

    def test_unknown_name(self):
        with pytest.raises(DslParseError):
            dsl.parse_set("blob(3)")

    def test_multiline_position(self):
        with pytest.raises(DslParseError) as err:
            dsl.parse_set("union(ap(1,2),\n  blob)")
        assert err.value.line == 2
