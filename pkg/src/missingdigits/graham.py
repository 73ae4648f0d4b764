"""Integers with simultaneously restricted digits in several bases.

A restriction system is a list of (base b_i, digit set D_i, scale t_i)
with t_i in (0, 1].  An integer n qualifies when, for every i, the
base-b_i expansion of floor(t_i * n) uses only digits from D_i.  The
unscaled enumeration generates candidates by digit DFS in the most
restrictive base -- the one with the smallest #D/b ratio, so only about
(#D)^(log_b N) candidates are ever built -- and filters them against
the remaining bases.  The scaled variant must walk n = 1..N linearly
because floor(t*n) is not monotone in the digit tree; scales are exact
fractions so the floor never suffers a boundary misclassification,
which is why floating-point scales are rejected outright.

By convention 0 never appears in the output: the subject is positive
integers, even though 0's digit string "0" passes any digit set
containing 0.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .budget import EvalBudget, ensure_budget
from .errors import ConfigError

ONE = Fraction(1)


@dataclass(frozen=True)
class Restriction:
    """One digit condition: base-`base` digits of floor(scale * n)
    must all lie in `digits`."""

    base: int
    digits: frozenset
    scale: Fraction = ONE

    def __post_init__(self):
        if not isinstance(self.base, int) or self.base < 3:
            raise ConfigError("restriction base must be an integer >= 3")
        digits = frozenset(int(d) for d in self.digits)
        if not digits:
            raise ConfigError("digit set must be nonempty")
        if any(d < 0 or d >= self.base for d in digits):
            raise ConfigError(f"digits must lie in 0..{self.base - 1}")
        if not isinstance(self.scale, (Fraction, int)):
            raise ConfigError(
                "scale must be an exact Fraction (or integer 1); "
                "floating-point scales misclassify floor boundaries"
            )
        scale = Fraction(self.scale)
        if not 0 < scale <= 1:
            raise ConfigError("scale must lie in (0, 1]")
        object.__setattr__(self, "digits", digits)
        object.__setattr__(self, "scale", scale)

    @property
    def selectivity(self) -> float:
        return len(self.digits) / self.base


@dataclass(frozen=True)
class RestrictionSystem:
    restrictions: tuple

    def __post_init__(self):
        rs = tuple(self.restrictions)
        if not rs:
            raise ConfigError("restriction system must be nonempty")
        if not all(isinstance(r, Restriction) for r in rs):
            raise ConfigError("restrictions must be Restriction instances")
        object.__setattr__(self, "restrictions", rs)

    @property
    def unscaled(self) -> bool:
        return all(r.scale == 1 for r in self.restrictions)


def system(*parts, scales=None) -> RestrictionSystem:
    """Build a RestrictionSystem from (base, digits) pairs plus an
    optional parallel list of scales."""
    scales = [ONE] * len(parts) if scales is None else list(scales)
    if len(scales) != len(parts):
        raise ConfigError("need one scale per restriction")
    return RestrictionSystem(tuple(
        Restriction(base, frozenset(digits), scale)
        for (base, digits), scale in zip(parts, scales)
    ))


def parse_system(text: str, scales_text: str | None = None) -> RestrictionSystem:
    """Parse "3:{0,1};5:{0,1,2}" with optional scales "1,1/2"."""
    parts = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        base_text, _, digit_text = chunk.partition(":")
        digit_text = digit_text.strip()
        if not digit_text.startswith("{") or not digit_text.endswith("}"):
            raise ConfigError(f"digit set must be brace-delimited: {chunk!r}")
        try:
            base = int(base_text)
            digits = frozenset(int(d) for d in digit_text[1:-1].split(","))
        except ValueError as exc:
            raise ConfigError(f"bad restriction {chunk!r}: {exc}") from exc
        parts.append((base, digits))
    scales = None
    if scales_text is not None:
        scales = [Fraction(s.strip()) for s in scales_text.split(",")]
    return system(*parts, scales=scales)


# ------------------------------------------------------------- digit test


def digits_ok(m: int, base: int, digits) -> bool:
    """True iff every base-`base` digit of m lies in `digits`; m = 0
    has the single digit 0."""
    if m == 0:
        return 0 in digits
    while m:
        m, d = divmod(m, base)
        if d not in digits:
            return False
    return True


def _passes(system_: RestrictionSystem, n: int) -> bool:
    for r in system_.restrictions:
        scaled = (r.scale.numerator * n) // r.scale.denominator
        if not digits_ok(scaled, r.base, r.digits):
            return False
    return True


# ------------------------------------------------------------ enumeration


def _dfs_from(seeds, base, digits, limit):
    """All integers <= limit whose base-`base` expansion extends a seed
    (most significant digit first) using only `digits`."""
    out = []
    stack = list(seeds)
    while stack:
        m = stack.pop()
        out.append(m)
        for d in digits:
            child = m * base + d
            if child <= limit:
                stack.append(child)
    return out


def enumerate_restricted(system_: RestrictionSystem, limit: int,
                         budget: EvalBudget | None = None,
                         workers: int = 1) -> list:
    """Sorted list of n in [1, limit] meeting every restriction; all
    scales must be 1 (use enumerate_scaled otherwise)."""
    if not system_.unscaled:
        raise ConfigError("enumerate_restricted requires all scales = 1")
    if limit < 1:
        return []
    bud = ensure_budget(budget)
    order = sorted(system_.restrictions, key=lambda r: r.selectivity)
    lead, rest = order[0], order[1:]
    depth = int(math.log(limit, lead.base)) + 1
    bud.charge(len(lead.digits) ** min(depth, 63), "digit tree")
    seeds = [d for d in sorted(lead.digits) if 0 < d <= limit]
    if workers > 1 and len(seeds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = pool.map(
                lambda s: _dfs_from([s], lead.base, lead.digits, limit), seeds)
        candidates = [m for chunk in chunks for m in chunk]
    else:
        candidates = _dfs_from(seeds, lead.base, lead.digits, limit)
    keep = sorted(
        m for m in candidates
        if all(digits_ok(m, r.base, r.digits) for r in rest)
    )
    return keep


def enumerate_scaled(system_: RestrictionSystem, limit: int,
                     budget: EvalBudget | None = None) -> list:
    """Sorted list of n in [1, limit] such that floor(scale_i * n)
    passes every digit restriction; linear scan with exact floors."""
    bud = ensure_budget(budget)
    bud.charge(max(limit, 0) * len(system_.restrictions), "scaled scan")
    return [n for n in range(1, limit + 1) if _passes(system_, n)]


def density_report(system_: RestrictionSystem, checkpoints,
                   budget: EvalBudget | None = None) -> list:
    """Counts of qualifying integers up to each checkpoint N together
    with the fitted exponent log(count)/log(N); rows are dicts."""
    checkpoints = sorted(int(n) for n in checkpoints)
    if any(n < 2 for n in checkpoints):
        raise ConfigError("checkpoints must be >= 2")
    top = checkpoints[-1]
    if system_.unscaled:
        members = enumerate_restricted(system_, top, budget)
    else:
        members = enumerate_scaled(system_, top, budget)
    rows = []
    idx = 0
    for n in checkpoints:
        while idx < len(members) and members[idx] <= n:
            idx += 1
        count = idx
        exponent = math.log(count) / math.log(n) if count else float("nan")
        rows.append({"limit": n, "count": count, "exponent": exponent})
    return rows
