# desc: Homogeneous balance-sheet primitives - equity, per-edge exposure, single-hit cutoff, activity
# All threshold quantities are exact rationals; the single-hit boundary sits at equality L/d = E
# ----------------------------------------------------------------------------
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Union
import math

RationalLike = Union[int, str, Fraction]


def parse_rational(value: RationalLike, name: str = 'value') -> Fraction:
    """Parses 'p/q', a decimal string, an int or a Fraction into an exact Fraction.

    Floats are accepted through their shortest repr, so 2.5 becomes 5/2 rather than its binary expansion.
    """

    if isinstance(value, bool):
        raise ValueError('{} must be a rational number, got {!r}'.format(name, value))
    if isinstance(value, float):
        value = repr(value)
    if isinstance(value, (Rational, str)):
        try:
            return Fraction(value.strip() if isinstance(value, str) else value)
        except (ValueError, ZeroDivisionError):
            pass
    raise ValueError('{} must be a rational like 5/2 or 2.5, got {!r}'.format(name, value))


def equity(L: RationalLike, C: RationalLike) -> Fraction:
    """E = L / (C - 1)"""
    L, C = parse_rational(L, 'L'), parse_rational(C, 'C')

    if L <= 0:
        raise ValueError('Liabilities L must be positive, got {}'.format(L))
    if C <= 1:
        raise ValueError('Leverage C must exceed 1, got {}'.format(C))

    return L / (C - 1)


def d_star(L: RationalLike, C: RationalLike) -> int:
    """Largest d >= 1 with L/d >= E, i.e. floor(L/E) = floor(C - 1); 0 when no such d exists (C < 2)"""
    return math.floor(parse_rational(L, 'L') / equity(L, C))


def edge_exposure(L: RationalLike, d_out: int) -> Fraction:
    """Exposure L / d_out carried by each outgoing edge of a sender with d_out >= 1 counterparties"""
    if d_out < 1:
        # Zero out-degree institutions owe everything to the external sector
        raise ValueError('A sender with out-degree {} carries no interbank exposure'.format(d_out))
    return parse_rational(L, 'L') / int(d_out)


@dataclass(frozen=True)
class BalanceSheet:
    """Balance sheet shared by every institution: liabilities L, leverage C, and the derived equity E and
    single-hit cutoff d_star. Outcomes depend on C only; L scales exposures and equity together."""

    C: Fraction
    L: Fraction = Fraction(1)
    E: Fraction = field(init=False)
    d_star: int = field(init=False)

    def __post_init__(self):
        C, L = parse_rational(self.C, 'C'), parse_rational(self.L, 'L')
        object.__setattr__(self, 'C', C)
        object.__setattr__(self, 'L', L)
        object.__setattr__(self, 'E', equity(L, C))
        object.__setattr__(self, 'd_star', d_star(L, C))

    def exposure(self, d_out: int) -> Fraction:
        return edge_exposure(self.L, d_out)

    def is_active(self, d_out: int) -> bool:
        return is_active(d_out, self)

    def __repr__(self):
        return "BalanceSheet(C={}, L={}, E={}, d_star={})".format(self.C, self.L, self.E, self.d_star)


def is_active(d_out: int, bs: BalanceSheet) -> bool:
    """A sender is active when a single one of its edges meets equity: d_out <= d_star"""
    return d_out <= bs.d_star
