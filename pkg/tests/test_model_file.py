import pytest
from sympy import QQ

from cli.model_file import load_model, parse_model, parse_polynomial, print_model, tokenize
from errors import ParseError
from graded.algebra import Algebra, Generator

EXAMPLE = """\
# comment line
name nonformal_wedge
generator a 3
generator b 3
generator u 5
d u = a*b   # trailing comment
truncate 9
"""


def _parse_error(text: str) -> ParseError:
    with pytest.raises(ParseError) as info:
        parse_model(text)
    return info.value


class TestPolynomials:

    @pytest.fixture
    def ring(self):
        return Algebra([Generator("a", 3), Generator("e", 2), Generator("x'", 2)])

    def test_tokens_carry_columns(self):
        tokens = tokenize("2*e^2 - x'", offset=4)
        assert [t.text for t in tokens] == ["2", "*", "e", "^", "2", "-", "x'", ""]
        assert tokens[0].column == 5
        assert tokens[-1].kind == "end"

    def test_rationals_and_powers(self, ring):
        value = parse_polynomial("1/2*e^2 - (e + x')*e", ring)
        e, x = ring.gen("e"), ring.gen("x'")
        assert value == (e ** 2).scale(QQ(1, 2)) - (e + x) * e

    def test_unary_minus(self, ring):
        assert parse_polynomial("-a", ring) == -ring.gen("a")
        assert parse_polynomial("--a", ring) == ring.gen("a")

    def test_undeclared_symbol(self, ring):
        with pytest.raises(ParseError) as info:
            parse_polynomial("e + z", ring, line=4)
        assert (info.value.line, info.value.column) == (4, 5)
        assert "undeclared symbol" in info.value.message

    def test_odd_generator_power(self, ring):
        with pytest.raises(ParseError) as info:
            parse_polynomial("a^2", ring)
        assert "odd generator" in info.value.message
        assert info.value.column == 3

    def test_odd_parenthesized_power(self, ring):
        with pytest.raises(ParseError) as info:
            parse_polynomial("(a)^2", ring)
        assert "odd element (a)" in info.value.message
        assert info.value.column == 5
        with pytest.raises(ParseError):
            parse_polynomial("(e*a - 2*a*x')^3", ring)
        assert parse_polynomial("(e)^2", ring) == ring.gen("e") ** 2

    @pytest.mark.parametrize("text", ["1/", "1/0", "3/e"])
    def test_malformed_rational(self, ring, text):
        with pytest.raises(ParseError) as info:
            parse_polynomial(text, ring)
        assert "malformed rational" in info.value.message
        assert info.value.column == 1

    def test_unbalanced_parenthesis(self, ring):
        with pytest.raises(ParseError):
            parse_polynomial("(e + x'", ring)

    def test_unexpected_character(self, ring):
        with pytest.raises(ParseError) as info:
            parse_polynomial("e $ x'", ring)
        assert info.value.column == 3


class TestModelFile:

    def test_example(self):
        model = parse_model(EXAMPLE)
        assert model.name == "nonformal_wedge"
        assert [(g.name, g.degree) for g in model.generators] == [("a", 3), ("b", 3), ("u", 5)]
        assert str(model.differential["u"]) == "a*b"
        assert model.truncate == 9
        assert not model.formal

    def test_print_then_parse(self):
        model = parse_model(EXAMPLE)
        text = print_model(model)
        assert text.splitlines()[0] == "name nonformal_wedge"
        again = parse_model(text)
        assert print_model(again) == text

    def test_generators_may_follow_their_use(self):
        model = parse_model("d y = e^2\ngenerator e 2\ngenerator y 3\nrelation e^2\n")
        assert str(model.differential["y"]) == "e^2"
        assert [str(r) for r in model.relations] == ["e^2"]

    def test_zero_differential_is_dropped(self):
        model = parse_model("generator a 3\nd a = 0\n")
        assert model.differential == {}

    def test_name_defaults_to_file_stem(self, tmp_path):
        path = tmp_path / "s3.model"
        path.write_text("generator a 3\n", encoding="utf-8")
        assert load_model(str(path)).name == "s3"

    def test_algebras(self):
        model = parse_model(EXAMPLE)
        free = model.free_algebra(10)
        quotient = model.quotient_algebra(10)
        assert free.ideal.kind == "none"
        assert quotient.truncation_degree == 9
        assert free.max_degree == quotient.max_degree == 11


class TestModelErrors:

    def test_unknown_statement(self):
        error = _parse_error("generator a 3\n  cell b 4\n")
        assert (error.line, error.column) == (2, 3)
        assert "unknown statement" in error.message

    def test_duplicate_generator(self):
        error = _parse_error("generator a 3\ngenerator a 5\n")
        assert (error.line, error.column) == (2, 11)
        assert "duplicate generator" in error.message

    @pytest.mark.parametrize("degree", ["0", "-2", "x"])
    def test_bad_degree(self, degree):
        error = _parse_error(f"generator a {degree}\n")
        assert error.line == 1
        assert error.column == 13

    def test_wrong_differential_degree(self):
        error = _parse_error("generator a 3\ngenerator b 3\ngenerator u 4\nd u = a*b\n")
        assert error.line == 4
        assert "degree 5" in error.message

    def test_undeclared_symbol_in_differential(self):
        error = _parse_error("generator u 5\nd u = a*b\n")
        assert (error.line, error.column) == (2, 7)

    def test_differential_given_twice(self):
        error = _parse_error("generator e 2\ngenerator y 3\nd y = e^2\nd y = e^2\n")
        assert error.line == 4

    def test_formal_with_differential(self):
        error = _parse_error("generator e 2\ngenerator y 3\nformal\nd y = e^2\n")
        assert error.line == 4
        assert "formal" in error.message

    def test_inhomogeneous_relation(self):
        error = _parse_error("generator e 2\ngenerator a 3\nrelation e + a\n")
        assert error.line == 3
        assert "not homogeneous" in error.message

    def test_truncate_twice(self):
        error = _parse_error("generator a 3\ntruncate 9\ntruncate 10\n")
        assert error.line == 3
