"""Missing-digits measures and their product combinations.

A missing-digits measure on [0,1]^n is the law of the random series

    S = sum_{i>=1} p^{-i} d_i,

where the d_i are independent and uniform on a digit set D contained in
{0,...,p-1}^n.  Its support is the set of points whose base-p expansion
uses only digits from D.  Products of such measures (possibly with
different bases per factor) are handled by ProductMeasureSpec.

Bases are represented as b^e so that astronomically large bases (say
10^10000) can be manipulated through their logarithms without ever
materializing the integer.  Digit sets are either explicit vectors or
integer intervals lo..hi; intervals may have symbolic endpoints, in
which case only log-arithmetic (dimension formulas, certified bounds)
is available, not sampling or pointwise Fourier evaluation.

The Hausdorff dimension of a factor is log(#D)/log(p); for a product it
is the sum over factors.  This is also the L2-flattening dimension of
the measure, since missing-digits measures are Ahlfors-David regular.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

from .budget import EvalBudget, ensure_budget
from .errors import ConfigError, SymbolicBaseError

# Largest integer we are willing to materialize exactly: anything whose
# logarithm exceeds ln(2^62) stays symbolic and supports only
# log-arithmetic.
_EXACT_LOG_CAP = 62 * math.log(2.0)

# Cap on explicit digit enumeration (rows of a digit matrix).
_ENUM_CAP = 1 << 22


# ---------------------------------------------------------------- BasePower


@dataclass(frozen=True)
class BasePower:
    """Integer of the form b^e, kept symbolic when too large to touch.

    log_value() is always available; exact_int() only when
    e*ln(b) <= ln(2^62).
    """

    b: int
    e: int = 1

    def __post_init__(self):
        if self.b < 2:
            raise ConfigError(f"base must be >= 2, got {self.b}")
        if self.e < 1:
            raise ConfigError(f"exponent must be >= 1, got {self.e}")

    def log_value(self) -> float:
        return self.e * math.log(self.b)

    def is_exact(self) -> bool:
        return self.log_value() <= _EXACT_LOG_CAP

    def exact_int(self) -> int:
        if not self.is_exact():
            raise SymbolicBaseError(
                f"{self} is too large to materialize as an exact integer"
            )
        return self.b ** self.e

    def __str__(self) -> str:
        return str(self.b) if self.e == 1 else f"{self.b}^{self.e}"

    @staticmethod
    def parse(text: str) -> "BasePower":
        text = text.strip()
        m = re.fullmatch(r"(\d+)\s*\^\s*(\d+)", text)
        if m:
            return BasePower(int(m.group(1)), int(m.group(2)))
        if re.fullmatch(r"\d+", text):
            return BasePower(int(text), 1)
        raise ConfigError(f"cannot parse integer or power: {text!r}")


IntLike = Union[int, BasePower]


def log_int(x: IntLike) -> float:
    """Natural log of a positive integer or symbolic power."""
    if isinstance(x, BasePower):
        return x.log_value()
    if x <= 0:
        raise ValueError("log_int needs a positive integer")
    return math.log(x)


def as_exact_int(x: IntLike) -> int:
    return x.exact_int() if isinstance(x, BasePower) else int(x)


def is_exact_int(x: IntLike) -> bool:
    return not isinstance(x, BasePower) or x.is_exact()


def int_less(x: IntLike, y: IntLike) -> bool:
    """Exact x < y for possibly-symbolic integers."""
    if is_exact_int(x) and is_exact_int(y):
        return as_exact_int(x) < as_exact_int(y)
    if isinstance(x, BasePower) and isinstance(y, BasePower) and x.b == y.b:
        return x.e < y.e
    lx, ly = log_int(x), log_int(y)
    if abs(lx - ly) > 1e-9 * max(1.0, abs(lx), abs(ly)):
        return lx < ly
    raise ConfigError(
        f"cannot compare {x} and {y} exactly; rewrite them with a common base"
    )


# ---------------------------------------------------------------- digit sets


@dataclass(frozen=True)
class ExplicitDigits:
    """Digit set given as explicit vectors in {0,...,p-1}^n.

    Vectors are stored sorted lexicographically; duplicates are
    rejected.  For n = 1 scalar digits are accepted and normalized to
    1-vectors.
    """

    vectors: tuple

    def __init__(self, vectors: Iterable):
        rows = []
        for v in vectors:
            if isinstance(v, (int, np.integer)):
                rows.append((int(v),))
            else:
                rows.append(tuple(int(c) for c in v))
        if not rows:
            raise ConfigError("digit set must be nonempty")
        dims = {len(r) for r in rows}
        if len(dims) != 1:
            raise ConfigError("digit vectors must share one dimension")
        if len(set(rows)) != len(rows):
            raise ConfigError("digit set contains duplicates")
        object.__setattr__(self, "vectors", tuple(sorted(rows)))

    @property
    def dim(self) -> int:
        return len(self.vectors[0])

    def count(self) -> int:
        return len(self.vectors)

    def log_count(self) -> float:
        return math.log(self.count())

    def validate_for(self, base: BasePower, ambient_dim: int) -> None:
        if self.dim != ambient_dim:
            raise ConfigError(
                f"digit vectors have dimension {self.dim}, spec has n={ambient_dim}"
            )
        if not base.is_exact():
            raise SymbolicBaseError(
                "explicit digit sets require a materializable base"
            )
        p = base.exact_int()
        for v in self.vectors:
            if any(c < 0 or c >= p for c in v):
                raise ConfigError(f"digit {v} outside {{0..{p - 1}}}^{ambient_dim}")

    def digit_matrix(self) -> np.ndarray:
        return np.asarray(self.vectors, dtype=np.int64)

    def max_euclid_norm(self) -> float:
        mat = self.digit_matrix()
        return float(np.sqrt((mat.astype(float) ** 2).sum(axis=1)).max())

    def is_rectangle(self) -> bool:
        """True when the set equals a product of integer intervals."""
        mat = self.digit_matrix()
        sizes = []
        for j in range(mat.shape[1]):
            vals = np.unique(mat[:, j])
            if vals[-1] - vals[0] + 1 != len(vals):
                return False
            sizes.append(len(vals))
        if math.prod(sizes) != len(self.vectors):
            return False
        # Consecutive per-coordinate ranges with matching cardinality
        # force the set to be the full product.
        return True

    def rectangle_sides(self) -> list[tuple[int, int]]:
        if not self.is_rectangle():
            raise ValueError("digit set is not a rectangle")
        mat = self.digit_matrix()
        return [(int(mat[:, j].min()), int(mat[:, j].max())) for j in range(mat.shape[1])]

    def __str__(self) -> str:
        if self.dim == 1:
            return "{" + ",".join(str(v[0]) for v in self.vectors) + "}"
        return "{" + ",".join("(" + ",".join(map(str, v)) + ")" for v in self.vectors) + "}"


@dataclass(frozen=True)
class DigitInterval:
    """One-dimensional digit interval lo..hi, endpoints possibly symbolic.

    Always a rectangle; cardinality hi-lo+1 is computed exactly when the
    endpoints materialize and in log-space otherwise.
    """

    lo: IntLike
    hi: IntLike

    def __post_init__(self):
        lo, hi = self.lo, self.hi
        if isinstance(lo, BasePower) and lo.is_exact():
            object.__setattr__(self, "lo", lo.exact_int())
        if isinstance(hi, BasePower) and hi.is_exact():
            object.__setattr__(self, "hi", hi.exact_int())
        if isinstance(self.lo, int) and self.lo < 0:
            raise ConfigError("digit interval must start at >= 0")
        if is_exact_int(self.lo) and is_exact_int(self.hi):
            if as_exact_int(self.hi) < as_exact_int(self.lo):
                raise ConfigError("digit interval is empty")

    @property
    def dim(self) -> int:
        return 1

    def is_symbolic(self) -> bool:
        return not (is_exact_int(self.lo) and is_exact_int(self.hi))

    def count(self) -> int:
        if self.is_symbolic():
            raise SymbolicBaseError("symbolic digit interval has no exact count")
        return as_exact_int(self.hi) - as_exact_int(self.lo) + 1

    def log_count(self) -> float:
        if not self.is_symbolic():
            return math.log(self.count())
        # #D = hi - lo + 1 = hi * (1 - lo/hi + 1/hi), in logs:
        log_hi = log_int(self.hi)
        ratio = math.exp(log_int(self.lo) - log_hi) if not _is_zero(self.lo) else 0.0
        tiny = math.exp(-log_hi) if log_hi < 700 else 0.0
        return log_hi + math.log1p(-ratio + tiny)

    def validate_for(self, base: BasePower, ambient_dim: int) -> None:
        if ambient_dim != 1:
            raise ConfigError("digit intervals are one-dimensional; use n=1")
        # hi <= p-1, i.e. hi < p, must hold exactly.
        if not int_less(self.hi, base):
            raise ConfigError(f"digit interval end {self.hi} not below base {base}")

    def digit_matrix(self) -> np.ndarray:
        n = self.count()
        if n > _ENUM_CAP:
            raise SymbolicBaseError(
                f"digit interval has {n} elements; enumeration is capped at {_ENUM_CAP}"
            )
        lo = as_exact_int(self.lo)
        return np.arange(lo, lo + n, dtype=np.int64).reshape(-1, 1)

    def max_euclid_norm(self) -> float:
        if self.is_symbolic():
            raise SymbolicBaseError("symbolic digit interval has no float norm")
        return float(as_exact_int(self.hi))

    def is_rectangle(self) -> bool:
        return True

    def __str__(self) -> str:
        return f"{self.lo}..{self.hi}"


def _is_zero(x: IntLike) -> bool:
    return isinstance(x, int) and x == 0


DigitSet = Union[ExplicitDigits, DigitInterval]


# ---------------------------------------------------------------- specs


@dataclass(frozen=True)
class MissingDigitsSpec:
    """One missing-digits factor: base p = b^e, digit set D, ambient n."""

    base: BasePower
    digits: DigitSet
    ambient_dim: int = 1

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise ConfigError("ambient dimension must be >= 1")
        self.digits.validate_for(self.base, self.ambient_dim)

    # -- log-arithmetic quantities (always available) --

    def log_base(self) -> float:
        return self.base.log_value()

    def log_digit_count(self) -> float:
        return self.digits.log_count()

    def hausdorff_dim(self) -> float:
        return self.log_digit_count() / self.log_base()

    # -- exact quantities (materializable base only) --

    def is_enumerable(self) -> bool:
        if not self.base.is_exact():
            return False
        if isinstance(self.digits, DigitInterval) and self.digits.is_symbolic():
            return False
        return True

    def p_int(self) -> int:
        return self.base.exact_int()

    def digit_count(self) -> int:
        return self.digits.count()

    def digit_matrix(self) -> np.ndarray:
        if not self.is_enumerable():
            raise SymbolicBaseError(
                "spec with symbolic base or digits cannot enumerate digits"
            )
        return self.digits.digit_matrix()

    def max_digit_norm(self) -> float:
        return self.digits.max_euclid_norm()

    def config_text(self) -> str:
        return (
            f"factor {{ base = {self.base}; digits = {self.digits}; "
            f"n = {self.ambient_dim}; }}"
        )

    def __str__(self) -> str:
        return self.config_text()


@dataclass(frozen=True)
class ProductMeasureSpec:
    """Product of missing-digits factors, acting on R^(sum of factor dims)."""

    factors: tuple

    def __init__(self, factors: Sequence[MissingDigitsSpec]):
        factors = tuple(factors)
        if not factors:
            raise ConfigError("product spec needs at least one factor")
        for f in factors:
            if not isinstance(f, MissingDigitsSpec):
                raise ConfigError("product factors must be MissingDigitsSpec")
        object.__setattr__(self, "factors", factors)

    @property
    def total_dim(self) -> int:
        return sum(f.ambient_dim for f in self.factors)

    def hausdorff_dim(self) -> float:
        return sum(f.hausdorff_dim() for f in self.factors)

    def is_enumerable(self) -> bool:
        return all(f.is_enumerable() for f in self.factors)

    def factor_slices(self) -> list[slice]:
        out, at = [], 0
        for f in self.factors:
            out.append(slice(at, at + f.ambient_dim))
            at += f.ambient_dim
        return out

    def config_text(self) -> str:
        return "\n".join(f.config_text() for f in self.factors)

    def __str__(self) -> str:
        return self.config_text()


Spec = Union[MissingDigitsSpec, ProductMeasureSpec]


def as_product(spec: Spec) -> ProductMeasureSpec:
    """View any spec uniformly as a product of factors."""
    if isinstance(spec, ProductMeasureSpec):
        return spec
    return ProductMeasureSpec((spec,))


def hausdorff_dim(spec: Spec) -> float:
    """log(#D)/log(p) per factor, summed over factors; lies in [0, n]."""
    return as_product(spec).hausdorff_dim()


def total_dim(spec: Spec) -> int:
    return as_product(spec).total_dim


# ---------------------------------------------------------------- factories


def explicit_spec(base: int, digits: Iterable, n: int = 1) -> MissingDigitsSpec:
    return MissingDigitsSpec(BasePower(base), ExplicitDigits(digits), n)


def interval_spec(base: IntLike, lo: IntLike, hi: IntLike) -> MissingDigitsSpec:
    bp = base if isinstance(base, BasePower) else BasePower(int(base))
    return MissingDigitsSpec(bp, DigitInterval(lo, hi), 1)


def lebesgue_spec(base: int, n: int = 1) -> Spec:
    """Full digit set: the measure is Lebesgue on [0,1]^n (as an n-fold
    product of 1-D full-digit factors)."""
    factor = interval_spec(base, 0, base - 1)
    if n == 1:
        return factor
    return ProductMeasureSpec([factor] * n)


def product(*factors: MissingDigitsSpec) -> ProductMeasureSpec:
    return ProductMeasureSpec(factors)


def square(factor: MissingDigitsSpec) -> ProductMeasureSpec:
    return ProductMeasureSpec([factor, factor])


# ---------------------------------------------------------------- sampling


def sample(
    spec: Spec,
    depth: int,
    count: int,
    seed: int = 0,
    budget: EvalBudget | None = None,
) -> np.ndarray:
    """Draw `count` points of the depth-truncated series sum_{i<=depth}
    p^{-i} d_i with i.i.d. uniform digits; returns (count, total_dim).

    The truncation error per point is at most sqrt(n) * max(D) * p^-depth
    / (p-1) in each factor.  PCG64 generator; identical seed, identical
    stream.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if count < 1:
        raise ValueError("count must be >= 1")
    prod = as_product(spec)
    if not prod.is_enumerable():
        raise SymbolicBaseError("sampling requires enumerable factors")
    bud = ensure_budget(budget)
    bud.charge(count * depth * len(prod.factors), "digit draws")
    rng = np.random.Generator(np.random.PCG64(seed))
    cols = np.empty((count, prod.total_dim), dtype=np.float64)
    for f, sl in zip(prod.factors, prod.factor_slices()):
        mat = f.digit_matrix().astype(np.float64)
        p = f.p_int()
        idx = rng.integers(0, mat.shape[0], size=(count, depth))
        scales = p ** -np.arange(1, depth + 1, dtype=np.float64)
        # (count, depth, nf) digits weighted by p^-i, summed over i
        cols[:, sl] = np.einsum("d,cdn->cn", scales, mat[idx])
    return cols


# ---------------------------------------------------------------- parsing


_FACTOR_RE = re.compile(r"factor\s*\{", re.IGNORECASE)


def parse_spec(text: str) -> Spec:
    """Parse the factor config grammar.

    Each factor is written

        factor { base = <int>|<int>^<int>; digits = <set>; n = <int>; }

    where <set> is {d,d,...} (scalars, or (c,...,c) tuples for n >= 2),
    or an interval lo..hi whose endpoints may be powers.  n defaults
    to 1.  A bare "base = ...; digits = ...;" body without the factor
    wrapper is accepted as a single factor.
    """
    if not text or not text.strip():
        raise ConfigError("empty measure config")
    bodies = _split_factor_bodies(text)
    factors = [_parse_factor_body(b) for b in bodies]
    if len(factors) == 1:
        return factors[0]
    return ProductMeasureSpec(factors)


def _split_factor_bodies(text: str) -> list[str]:
    bodies = []
    pos = 0
    found = False
    while True:
        m = _FACTOR_RE.search(text, pos)
        if not m:
            break
        found = True
        depth = 1
        i = m.end()
        while i < len(text) and depth:
            if text[i] == "{":
                depth += 1
            elif text[i] == "}":
                depth -= 1
            i += 1
        if depth:
            raise ConfigError("unbalanced braces in factor block")
        bodies.append(text[m.end(): i - 1])
        pos = i
    if not found:
        stripped = text.strip()
        if "{" in stripped.split("=", 1)[0]:
            raise ConfigError("expected 'factor { ... }' blocks")
        return [stripped]
    return bodies


def _parse_factor_body(body: str) -> MissingDigitsSpec:
    entries: dict[str, str] = {}
    for part in re.split(r"[;\n]+", body):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ConfigError(f"expected key = value, got {part!r}")
        key, val = part.split("=", 1)
        key = key.strip().lower()
        if key in entries:
            raise ConfigError(f"duplicate key {key!r} in factor")
        entries[key] = val.strip()
    unknown = set(entries) - {"base", "digits", "n"}
    if unknown:
        raise ConfigError(f"unknown factor keys: {sorted(unknown)}")
    if "base" not in entries or "digits" not in entries:
        raise ConfigError("factor needs both base and digits")
    base = BasePower.parse(entries["base"])
    n = int(entries.get("n", "1"))
    digits = _parse_digits(entries["digits"])
    return MissingDigitsSpec(base, digits, n)


def _parse_digits(text: str) -> DigitSet:
    text = text.strip()
    if text.startswith("{"):
        if not text.endswith("}"):
            raise ConfigError(f"unterminated digit set: {text!r}")
        inner = text[1:-1].strip()
        if not inner:
            raise ConfigError("digit set must be nonempty")
        if "(" in inner:
            tuples = re.findall(r"\(([^)]*)\)", inner)
            vecs = [tuple(int(c) for c in t.split(",")) for t in tuples]
            return ExplicitDigits(vecs)
        return ExplicitDigits(int(v) for v in inner.split(","))
    if ".." in text:
        lo_text, hi_text = text.split("..", 1)
        lo = BasePower.parse(lo_text) if "^" in lo_text else _parse_plain_int(lo_text)
        hi = BasePower.parse(hi_text) if "^" in hi_text else _parse_plain_int(hi_text)
        return DigitInterval(lo, hi)
    raise ConfigError(f"cannot parse digit set: {text!r}")


def _parse_plain_int(text: str) -> int:
    text = text.strip()
    if not re.fullmatch(r"\d+", text):
        raise ConfigError(f"expected a nonnegative integer, got {text!r}")
    return int(text)


def parse_fraction(text: str) -> Fraction:
    """Exact rational from '3', '1/2' or '0' (floats are rejected)."""
    text = text.strip()
    if re.fullmatch(r"\d+", text):
        return Fraction(int(text))
    m = re.fullmatch(r"(\d+)\s*/\s*(\d+)", text)
    if m:
        return Fraction(int(m.group(1)), int(m.group(2)))
    raise ConfigError(f"expected an integer or fraction, got {text!r}")
