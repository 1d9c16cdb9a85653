"""Tests for the argument parsing helpers."""

import math

import pytest

from collisim.util import parse_grid, parse_number, parse_probabilities


class TestParseNumber:
    """Tests for parse_number()."""

    def test_plain(self) -> None:
        assert parse_number("0.25") == 0.25
        assert parse_number(" -1e-3 ") == -1e-3

    def test_pi_multiples(self) -> None:
        assert parse_number("pi") == math.pi
        assert parse_number("pi/2") == math.pi / 2
        assert parse_number("-2pi") == -2 * math.pi
        assert parse_number("0.5*pi") == 0.5 * math.pi
        assert parse_number("3 * PI / 4") == 3 * math.pi / 4

    def test_invalid(self) -> None:
        with pytest.raises(ValueError):
            parse_number("half")
        with pytest.raises(ValueError):
            parse_number("pi/0")


class TestParseGrid:
    """Tests for parse_grid()."""

    def test_inclusive(self) -> None:
        assert parse_grid("-1:1:5") == [-1.0, -0.5, 0.0, 0.5, 1.0]

    def test_endpoints_exact(self) -> None:
        grid = parse_grid("-1:1:201")
        assert len(grid) == 201
        assert grid[0] == -1.0
        assert grid[-1] == 1.0
        assert grid[100] == pytest.approx(0.0, abs=1e-15)

    def test_pi_endpoints(self) -> None:
        grid = parse_grid("0:pi:9")
        assert grid[0] == 0.0
        assert grid[-1] == math.pi
        assert grid[4] == pytest.approx(math.pi / 2)

    def test_single_point(self) -> None:
        assert parse_grid("0.3") == [0.3]
        assert parse_grid("0.5:0.5:1") == [0.5]

    def test_invalid(self) -> None:
        for spec in ("0:1", "0:1:x", "0:1:0", "0:1:1", "a:b:3"):
            with pytest.raises(ValueError):
                parse_grid(spec)


class TestParseProbabilities:
    """Tests for parse_probabilities()."""

    def test_list(self) -> None:
        assert parse_probabilities("0.9,0.05,0.05") == [0.9, 0.05, 0.05]

    def test_trailing_comma(self) -> None:
        assert parse_probabilities("0.5, 0.5,") == [0.5, 0.5]

    def test_invalid(self) -> None:
        with pytest.raises(ValueError):
            parse_probabilities("")
        with pytest.raises(ValueError):
            parse_probabilities("0.5,half")
