"""Height laws and seeded random streams.

Only laws with a density, exponential tails and a finite first moment are
provided; every capability flag on :class:`DistributionSpec` is therefore
true by construction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

KINDS = ("gaussian", "uniform", "laplace")

_PARAMS = {
    "gaussian": ("mean", "sd"),
    "uniform": ("lo", "hi"),
    "laplace": ("loc", "scale"),
}


@dataclass(frozen=True)
class DistributionSpec:
    """An i.i.d. law for the heights.

    Build with :func:`gaussian`, :func:`uniform` or :func:`laplace`.
    """

    kind: str
    a: float
    b: float
    has_density: bool = field(default=True, init=False)
    exponential_tail: bool = field(default=True, init=False)
    finite_first_moment: bool = field(default=True, init=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError("distribution parameters must be finite")
        if self.kind == "gaussian" and not b > 0:
            raise ValueError("gaussian sd must be > 0")
        if self.kind == "uniform" and not a < b:
            raise ValueError("uniform needs lo < hi")
        if self.kind == "laplace" and not b > 0:
            raise ValueError("laplace scale must be > 0")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def params(self) -> dict:
        first, second = _PARAMS[self.kind]
        return {first: self.a, second: self.b}

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.params}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "DistributionSpec":
        kind = str(d.get("kind", "")).lower()
        if kind not in _PARAMS:
            raise ValueError(f"unknown distribution kind {kind!r}")
        first, second = _PARAMS[kind]
        try:
            return cls(kind, d[first], d[second])
        except KeyError as exc:
            raise ValueError(f"{kind} spec is missing {exc.args[0]!r}") from None

    @classmethod
    def from_json(cls, text: str) -> "DistributionSpec":
        return cls.from_dict(json.loads(text))


def gaussian(mean=0.0, sd=1.0) -> DistributionSpec:
    return DistributionSpec("gaussian", mean, sd)


def uniform(lo=0.0, hi=1.0) -> DistributionSpec:
    return DistributionSpec("uniform", lo, hi)


def laplace(loc=0.0, scale=1.0) -> DistributionSpec:
    return DistributionSpec("laplace", loc, scale)


# ---------------------------------------------------------------------------
# random streams

def substream(seed: int, *keys: int) -> np.random.Generator:
    """Independent generator for ``(seed, *keys)``.

    This is the split function used everywhere: the stream for row ``j`` of a
    field seeded with ``s`` is ``substream(s, j)``, the seed of Monte Carlo
    sample ``k`` under master seed ``m`` is ``derive_seed(m, k)``. Streams do
    not depend on thread count or on the order in which they are requested.
    """
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(ss))


def derive_seed(seed: int, *keys: int) -> int:
    """A 64-bit child seed, deterministic in ``(seed, *keys)``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def sample_array(spec: DistributionSpec, rng: np.random.Generator, size) -> np.ndarray:
    if spec.kind == "gaussian":
        out = rng.normal(spec.a, spec.b, size)
    elif spec.kind == "uniform":
        out = rng.uniform(spec.a, spec.b, size)
    else:
        out = rng.laplace(spec.a, spec.b, size)
    if not np.all(np.isfinite(out)):
        raise RuntimeError("non-finite height draw")
    return out


def sample(spec: DistributionSpec, rng: np.random.Generator) -> float:
    """One draw from ``spec``."""
    return float(sample_array(spec, rng, 1)[0])


# ---------------------------------------------------------------------------
# analytic properties

def mean(spec: DistributionSpec) -> float:
    if spec.kind == "uniform":
        return 0.5 * (spec.a + spec.b)
    return spec.a


def std(spec: DistributionSpec) -> float:
    if spec.kind == "gaussian":
        return spec.b
    if spec.kind == "uniform":
        return (spec.b - spec.a) / math.sqrt(12.0)
    return math.sqrt(2.0) * spec.b


def cdf(spec: DistributionSpec, x: float) -> float:
    if spec.kind == "gaussian":
        return 0.5 * math.erfc(-(x - spec.a) / (spec.b * math.sqrt(2.0)))
    if spec.kind == "uniform":
        return min(1.0, max(0.0, (x - spec.a) / (spec.b - spec.a)))
    z = (x - spec.a) / spec.b
    return 0.5 * math.exp(z) if z < 0 else 1.0 - 0.5 * math.exp(-z)


def _upper(spec: DistributionSpec, x: float) -> float:
    # P(X > x), computed without cancellation
    if spec.kind == "gaussian":
        return 0.5 * math.erfc((x - spec.a) / (spec.b * math.sqrt(2.0)))
    if spec.kind == "laplace":
        z = (x - spec.a) / spec.b
        return 0.5 * math.exp(-z) if z >= 0 else 1.0 - 0.5 * math.exp(z)
    return 1.0 - cdf(spec, x)


def tail_mass(spec: DistributionSpec, x: float) -> float:
    """``P(|X| > x)`` in closed form."""
    x = float(x)
    if not x >= 0:
        raise ValueError("tail_mass needs x >= 0")
    if x == 0:
        return 1.0
    return min(1.0, _upper(spec, x) + cdf(spec, -x))


def tail_constants(spec: DistributionSpec) -> tuple[float, float]:
    """Constants ``(c, C)`` with ``tail_mass(x) <= C * exp(-c * x)`` for x >= 0.

    gaussian(m, s): c = 1/s, C = 2 sqrt(e) exp(|m|/s), from
        P(|Z| > t) <= 2 exp(-t^2/2) <= 2 exp(1/2 - t).
    laplace(m, b):  c = 1/b, C = exp(|m|/b).
    uniform(lo, hi): c = 1, C = exp(max(|lo|, |hi|)); the tail vanishes past
        the support and C e^{-x} >= 1 before it.
    """
    if spec.kind == "gaussian":
        return 1.0 / spec.b, 2.0 * math.exp(0.5 + abs(spec.a) / spec.b)
    if spec.kind == "laplace":
        return 1.0 / spec.b, math.exp(abs(spec.a) / spec.b)
    return 1.0, math.exp(max(abs(spec.a), abs(spec.b)))


def difference_tail_constants(spec: DistributionSpec) -> tuple[float, float]:
    """``(c', x0)`` with ``P(|X(u) - X(v)| >= x) <= exp(-c' x)`` for x >= x0.

    Union bound on the two heights, then c' = c/4 and x0 chosen so that
    ``2 C exp(-c x / 2) <= exp(-c' x)``, i.e. ``x0 = 4 log(2C) / c``.
    """
    c, C = tail_constants(spec)
    return c / 4.0, max(4.0 * math.log(2.0 * C) / c, 0.0)
