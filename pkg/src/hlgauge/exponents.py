"""Exact rational summability exponents and the schedules built from them.

Every exponent lives in ``[1, inf]`` and is stored through its reciprocal,
a :class:`fractions.Fraction` in ``[0, 1]``; ``inf`` is simply reciprocal 0.
Nothing in this module touches floating point except ``__float__``.

Indices ``k`` are 1-based everywhere, so ``tail_sum(p, 1)`` is ``|1/p|``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

__all__ = [
    "Exponent",
    "ExponentVector",
    "ScheduleResult",
    "Admissibility",
    "INF",
    "as_exponent",
    "as_exponent_vector",
    "tail_sum",
    "schedule_inclusion",
    "schedule_bayart",
    "schedule_pellegrino",
    "schedule_hl",
    "dsp_exponent",
    "anps_min_schedule",
    "bhhl_admissible",
    "format_fraction",
]

_FRACTION_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


class Exponent:
    """A summability exponent in ``[1, inf]``, exact.

    Construct from an int, a Fraction, ``"a/b"`` / ``"inf"`` strings or
    ``float('inf')``. Decimal strings are rejected on purpose.
    """

    __slots__ = ("_recip",)

    def __init__(self, value: "ExponentLike"):
        if isinstance(value, Exponent):
            self._recip = value._recip
            return
        if isinstance(value, str):
            recip = _parse_reciprocal(value)
        elif isinstance(value, float):
            if value == float("inf"):
                recip = Fraction(0)
            elif value != value or value == float("-inf"):
                raise ValueError(f"invalid exponent {value!r}")
            else:
                recip = _reciprocal_of(Fraction(value))
        elif isinstance(value, (int, Rational)) and not isinstance(value, bool):
            recip = _reciprocal_of(Fraction(value))
        else:
            raise TypeError(f"cannot build an exponent from {type(value).__name__}")
        self._recip = recip

    @classmethod
    def from_reciprocal(cls, recip: Fraction | int) -> "Exponent":
        recip = Fraction(recip)
        if not 0 <= recip <= 1:
            raise ValueError(f"reciprocal {recip} outside [0, 1]")
        obj = cls.__new__(cls)
        obj._recip = recip
        return obj

    @property
    def reciprocal(self) -> Fraction:
        return self._recip

    @property
    def is_inf(self) -> bool:
        return self._recip == 0

    @property
    def value(self) -> Fraction:
        if self.is_inf:
            raise ValueError("exponent is infinite")
        return 1 / self._recip

    def dual(self) -> "Exponent":
        """Conjugate exponent: ``1/p + 1/p* = 1``."""
        return Exponent.from_reciprocal(1 - self._recip)

    def __float__(self) -> float:
        return float("inf") if self.is_inf else float(self.value)

    def __str__(self) -> str:
        return "inf" if self.is_inf else format_fraction(self.value)

    def __repr__(self) -> str:
        return f"Exponent('{self}')"

    def __hash__(self) -> int:
        return hash(("Exponent", self._recip))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Exponent):
            return self._recip == other._recip
        try:
            return self._recip == Exponent(other)._recip  # type: ignore[arg-type]
        except (TypeError, ValueError):
            return NotImplemented

    # larger exponent <=> smaller reciprocal
    def __lt__(self, other: "ExponentLike") -> bool:
        return self._recip > Exponent(other)._recip

    def __le__(self, other: "ExponentLike") -> bool:
        return self._recip >= Exponent(other)._recip

    def __gt__(self, other: "ExponentLike") -> bool:
        return self._recip < Exponent(other)._recip

    def __ge__(self, other: "ExponentLike") -> bool:
        return self._recip <= Exponent(other)._recip


ExponentLike = Union[Exponent, int, Fraction, str, float]

INF = Exponent.from_reciprocal(0)


def _reciprocal_of(value: Fraction) -> Fraction:
    if value < 1:
        raise ValueError(f"exponent {value} is below 1")
    return 1 / value


def _parse_reciprocal(text: str) -> Fraction:
    t = text.strip().lower()
    if t in ("inf", "+inf", "infinity", "oo"):
        return Fraction(0)
    m = _FRACTION_RE.match(t)
    if m is None:
        raise ValueError(f"malformed exponent {text!r}: expected an integer, 'a/b' or 'inf'")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"malformed exponent {text!r}: zero denominator")
    return _reciprocal_of(Fraction(num, den))


def format_fraction(x: Fraction) -> str:
    """``Fraction(12, 5)`` -> ``"12/5"``, ``Fraction(4)`` -> ``"4"``."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def as_exponent(value: ExponentLike) -> Exponent:
    return value if isinstance(value, Exponent) else Exponent(value)


@dataclass(frozen=True)
class ExponentVector:
    """Ordered exponents ``(p_1, ..., p_m)``; Python indexing is 0-based."""

    entries: tuple[Exponent, ...]

    def __post_init__(self):
        entries = tuple(as_exponent(e) for e in self.entries)
        if not entries:
            raise ValueError("an exponent vector needs at least one entry")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def parse(cls, text: str, m: int | None = None) -> "ExponentVector":
        """Parse ``"4,4,4"``; a single entry is replicated to length ``m``."""
        parts = [part for part in text.split(",") if part.strip()]
        if not parts:
            raise ValueError(f"empty exponent list {text!r}")
        entries = [Exponent(part) for part in parts]
        if m is not None and len(entries) == 1:
            entries = entries * m
        if m is not None and len(entries) != m:
            raise ValueError(f"expected {m} exponents, got {len(entries)} in {text!r}")
        return cls(tuple(entries))

    @classmethod
    def isotropic(cls, p: ExponentLike, m: int) -> "ExponentVector":
        return cls((as_exponent(p),) * m)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def reciprocals(self) -> tuple[Fraction, ...]:
        return tuple(e.reciprocal for e in self.entries)

    def tail_sum(self, k: int) -> Fraction:
        return tail_sum(self, k)

    def dual(self) -> "ExponentVector":
        return ExponentVector(tuple(e.dual() for e in self.entries))

    def floats(self) -> list[float]:
        return [float(e) for e in self.entries]

    def to_json(self) -> list[str]:
        return [str(e) for e in self.entries]

    def __str__(self) -> str:
        return ", ".join(str(e) for e in self.entries)


def as_exponent_vector(value) -> ExponentVector:
    if isinstance(value, ExponentVector):
        return value
    if isinstance(value, str):
        return ExponentVector.parse(value)
    return ExponentVector(tuple(value))


def tail_sum(p: ExponentVector | Sequence[ExponentLike], k: int) -> Fraction:
    """``1/p_k + ... + 1/p_m`` (1-based ``k``)."""
    p = as_exponent_vector(p)
    m = len(p)
    if not 1 <= k <= m:
        raise IndexError(f"tail index k={k} outside 1..{m}")
    return sum((e.reciprocal for e in p.entries[k - 1:]), Fraction(0))


@dataclass(frozen=True)
class ScheduleResult:
    """Outcome of an exponent formula.

    ``reciprocals`` always holds the exact values ``1/s_k`` given by the
    formula; ``s`` is ``None`` when some of them leave ``[0, 1]`` (then no
    valid exponent exists). Hypothesis failures land in
    ``violated_conditions`` instead of raising.
    """

    reciprocals: tuple[Fraction, ...]
    hypothesis_ok: bool
    violated_conditions: tuple[str, ...] = ()
    s: ExponentVector | None = field(default=None)

    @classmethod
    def build(cls, reciprocals: Iterable[Fraction], violated: list[str]) -> "ScheduleResult":
        recips = tuple(Fraction(x) for x in reciprocals)
        violated = list(violated)
        bad = [k for k, x in enumerate(recips, start=1) if not 0 <= x <= 1]
        for k in bad:
            violated.append(f"s_{k}_out_of_range")
        s = None if bad else ExponentVector(tuple(Exponent.from_reciprocal(x) for x in recips))
        return cls(recips, not violated, tuple(violated), s)

    @property
    def exponent(self) -> Exponent:
        """The single exponent of a scalar-valued formula."""
        if self.s is None:
            raise ValueError(f"no valid exponent: {', '.join(self.violated_conditions)}")
        return self.s[0]

    def to_json(self) -> dict:
        return {
            "s": None if self.s is None else self.s.to_json(),
            "reciprocals": [format_fraction(x) for x in self.reciprocals],
            "hypothesis_ok": self.hypothesis_ok,
            "violated_conditions": list(self.violated_conditions),
        }


def _require_same_length(p: ExponentVector, q: ExponentVector) -> None:
    if len(p) != len(q):
        raise ValueError(f"length mismatch: p has {len(p)} entries, q has {len(q)}")


def schedule_inclusion(r: ExponentLike, p, q) -> ScheduleResult:
    """Per-index exponents ``1/s_k = 1/r - |1/p|_{>=k} + |1/q|_{>=k}``."""
    r = as_exponent(r)
    p, q = as_exponent_vector(p), as_exponent_vector(q)
    _require_same_length(p, q)
    m = len(p)
    violated = [f"q_{k}>=p_{k}" for k in range(1, m + 1) if not q[k - 1] >= p[k - 1]]
    if not r.reciprocal - tail_sum(p, 1) + tail_sum(q, 1) > 0:
        violated.append("1/r-|1/p|+|1/q|>0")
    recips = [r.reciprocal - tail_sum(p, k) + tail_sum(q, k) for k in range(1, m + 1)]
    return ScheduleResult.build(recips, violated)


def schedule_bayart(r: ExponentLike, p, q) -> ScheduleResult:
    """Single exponent ``1/s = 1/r - |1/p| + |1/q|``."""
    full = schedule_inclusion(r, p, q)
    return ScheduleResult.build(full.reciprocals[:1], [c for c in full.violated_conditions
                                                       if not c.startswith("s_")])


def schedule_pellegrino(r: ExponentLike, p: ExponentLike, q: ExponentLike, m: int) -> ScheduleResult:
    """Isotropic inclusion exponent ``1/s = 1/r - m/p + m/q``."""
    if m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    r, p, q = as_exponent(r), as_exponent(p), as_exponent(q)
    violated = []
    if not q >= p:
        violated.append("q>=p")
    recip = r.reciprocal - m * p.reciprocal + m * q.reciprocal
    if not recip > 0:
        violated.append("1/r-m/p+m/q>0")
    return ScheduleResult.build([recip], violated)


def schedule_hl(m: int, p) -> ScheduleResult:
    """Anisotropic Hardy-Littlewood exponents.

    ``s_k = [1/2 + (m-k+1)/(2m) - |1/p|_{>=k}]^{-1}``, valid when
    ``|1/p| < 1`` and every ``p_k <= 2m``.
    """
    p = as_exponent_vector(p)
    if len(p) != m:
        raise ValueError(f"length mismatch: m={m} but p has {len(p)} entries")
    violated = []
    if not tail_sum(p, 1) < 1:
        violated.append("|1/p|<1")
    violated.extend(f"p_{k}<=2m" for k in range(1, m + 1) if not p[k - 1] <= 2 * m)
    recips = [Fraction(1, 2) + Fraction(m - k + 1, 2 * m) - tail_sum(p, k) for k in range(1, m + 1)]
    return ScheduleResult.build(recips, violated)


def dsp_exponent(p) -> ScheduleResult:
    """Isotropic exponent ``1/(1 - |1/p|)`` for ``1/2 <= |1/p| < 1``."""
    p = as_exponent_vector(p)
    total = tail_sum(p, 1)
    violated = []
    if not total >= Fraction(1, 2):
        violated.append("|1/p|>=1/2")
    if not total < 1:
        violated.append("|1/p|<1")
    return ScheduleResult.build([1 - total], violated)


def anps_min_schedule(p, strict: bool = False) -> ScheduleResult:
    """Componentwise minimal schedule ``s_k = [1 - |1/p|_{>=k}]^{-1}``.

    With ``strict=True`` the range ``1 < p_m <= 2 < p_1, ..., p_{m-1}``
    (and ``m >= 2``) is checked as well.
    """
    p = as_exponent_vector(p)
    m = len(p)
    violated = []
    if not tail_sum(p, 1) < 1:
        violated.append("|1/p|<1")
    if strict:
        if m < 2:
            violated.append("m>=2")
        if not (p[m - 1] > 1 and p[m - 1] <= 2):
            violated.append(f"1<p_{m}<=2")
        violated.extend(f"p_{k}>2" for k in range(1, m) if not p[k - 1] > 2)
    recips = [1 - tail_sum(p, k) for k in range(1, m + 1)]
    return ScheduleResult.build(recips, violated)


@dataclass(frozen=True)
class Admissibility:
    ok: bool
    reasons: tuple[str, ...]
    lhs: Fraction
    rhs: Fraction

    def to_json(self) -> dict:
        return {"ok": self.ok, "reasons": list(self.reasons),
                "lhs": format_fraction(self.lhs), "rhs": format_fraction(self.rhs)}


def bhhl_admissible(p, s) -> Admissibility:
    """Exponent test ``|1/s| <= (m+1)/2 - |1/p|`` with its range preconditions."""
    p, s = as_exponent_vector(p), as_exponent_vector(s)
    _require_same_length(p, s)
    m = len(p)
    total_p = tail_sum(p, 1)
    reasons = []
    if not total_p <= Fraction(1, 2):
        reasons.append("|1/p|<=1/2")
    low = 1 - total_p  # reciprocal of the lower end (1-|1/p|)^{-1}
    for k, sk in enumerate(s.entries, start=1):
        if not (sk.reciprocal <= low and sk <= 2):
            reasons.append(f"s_{k} in [(1-|1/p|)^-1, 2]")
    lhs = tail_sum(s, 1)
    rhs = Fraction(m + 1, 2) - total_p
    if not lhs <= rhs:
        reasons.append("|1/s|<=(m+1)/2-|1/p|")
    return Admissibility(not reasons, tuple(reasons), lhs, rhs)
