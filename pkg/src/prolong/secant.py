"""Point sampling on toric varieties and their secants, exact throughout.

Nothing here is a proof: vanishing at sampled secant points and interpolated
graded pieces are evidence that holds generically, and reports say so.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .formspace import ColumnIndex, FormSpace, make_formspace
from .linalg import PRIMES, ModularRowReducer, certified_kernel
from .poly import (
    Monomial,
    Polynomial,
    VarSet,
    count_monomials,
    format_monomial,
    monomials_of_degree,
    parse_monomial,
)

MASK64 = (1 << 64) - 1
DEFAULT_RANGE = 97


class SplitMix64:
    """The splitmix64 generator (Steele, Lea, Flood); 64-bit state, 64-bit output."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform on [lo, hi] by multiply-shift (bias below 2^-40 for small ranges)."""
        return lo + ((self.next_u64() * (hi - lo + 1)) >> 64)

    def rational(self, h: int) -> Fraction:
        num = self.randint(1, h)
        den = self.randint(1, h)
        return Fraction(num, den)


@dataclass(frozen=True)
class SampleConfig:
    seed: int = 0
    coordinate_range: int = DEFAULT_RANGE

    def __post_init__(self):
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.coordinate_range < 1:
            raise ValueError("coordinate range must be positive")

    def rng(self) -> SplitMix64:
        return SplitMix64(self.seed)


@dataclass(frozen=True)
class MonomialMap:
    """Target coordinate k maps to the monomial ``images[k]`` in the parameters."""

    params: VarSet
    targets: VarSet
    images: tuple[Monomial, ...]

    def __post_init__(self):
        if len(self.images) != self.targets.n:
            raise ValueError("need exactly one image monomial per target variable")
        for m in self.images:
            if len(m) != self.params.n:
                raise ValueError(f"image {m} does not match the parameter set")

    def evaluate(self, values: Sequence) -> list[Fraction]:
        if len(values) != self.params.n:
            raise ValueError(f"expected {self.params.n} parameter values")
        vals = [Fraction(v) for v in values]
        out = []
        for m in self.images:
            x = Fraction(1)
            for v, e in zip(vals, m):
                if e:
                    x *= v ** e
            out.append(x)
        return out

    def pullback(self, f: Polynomial) -> Polynomial:
        """f composed with the map, as a polynomial in the parameters."""
        if f.varset != self.targets:
            raise ValueError("polynomial is not over the target variables")
        out: dict[Monomial, Fraction] = {}
        for m, c in f.terms.items():
            key = monomial_weight(self, m)
            out[key] = out.get(key, 0) + c
        return Polynomial(self.params, out)

    def to_json(self) -> dict:
        return {
            "params": list(self.params.names),
            "targets": list(self.targets.names),
            "images": {t: (format_monomial(m, self.params) or "1")
                       for t, m in zip(self.targets.names, self.images)},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, obj: dict) -> "MonomialMap":
        params = VarSet(tuple(obj["params"]))
        targets = VarSet(tuple(obj["targets"]))
        images = []
        for t in targets.names:
            if t not in obj["images"]:
                raise ValueError(f"no image given for target {t!r}")
            images.append(parse_monomial(obj["images"][t], params))
        return cls(params, targets, tuple(images))


def sample_variety_point(mmap: MonomialMap, cfg: SampleConfig, rng: SplitMix64 | None = None) -> list[Fraction]:
    """Image of a pseudo-random rational parameter vector.

    Without ``rng`` a fresh generator seeded from ``cfg`` is used, so the
    call is a pure function of its arguments.
    """
    rng = rng or cfg.rng()
    h = cfg.coordinate_range
    return mmap.evaluate([rng.rational(h) for _ in range(mmap.params.n)])


def sample_secant_point(mmap: MonomialMap, r: int, cfg: SampleConfig, rng: SplitMix64) -> list[Fraction]:
    """t_1 v_1 + ... + t_r v_r for r sampled variety points and random weights."""
    total = [Fraction(0)] * mmap.targets.n
    for _ in range(r):
        v = sample_variety_point(mmap, cfg, rng)
        t = rng.rational(cfg.coordinate_range)
        total = [a + t * b for a, b in zip(total, v)]
    return total


@dataclass
class SecantReport:
    trials: int
    zero: int
    nonzero: int
    witness: dict | None = field(default=None)

    @property
    def passes(self) -> bool:
        return self.nonzero == 0

    @property
    def failures(self) -> int:
        return self.nonzero

    def to_json(self) -> dict:
        return {"trials": self.trials, "zero": self.zero, "nonzero": self.nonzero,
                "witness": self.witness}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"


def secant_vanish_check(f: Polynomial, mmap: MonomialMap, r: int, trials: int,
                        cfg: SampleConfig) -> SecantReport:
    """Evaluate f exactly at ``trials`` random points of the r-th secant.

    The witness is the first (lowest-index) trial with a non-zero value.
    """
    if f.varset != mmap.targets:
        raise ValueError("polynomial variables do not match the map's targets")
    if r < 1 or trials < 1:
        raise ValueError("r and trials must be positive")
    rng = cfg.rng()
    zero = nonzero = 0
    witness = None
    for trial in range(trials):
        point = sample_secant_point(mmap, r, cfg, rng)
        value = f.evaluate(point)
        if value:
            nonzero += 1
            if witness is None:
                witness = {"trial": trial, "value": str(value),
                           "point": {name: str(x) for name, x in zip(mmap.targets.names, point)}}
        else:
            zero += 1
    return SecantReport(trials, zero, nonzero, witness)


def _integral_row(point: Sequence[Fraction], monos: Sequence[Monomial]) -> dict[int, int]:
    # Forms are homogeneous, so the point may be rescaled to integer coordinates.
    den = lcm(*(x.denominator for x in point)) if point else 1
    ints = [int(x * den) for x in point]
    row = {}
    for k, m in enumerate(monos):
        v = 1
        for x, e in zip(ints, m):
            if e:
                v *= x ** e
        if v:
            row[k] = v
    return row


def interpolate_vanishing_piece(mmap: MonomialMap, r: int, m: int, cfg: SampleConfig,
                                num_points: int | None = None,
                                monomials: Sequence[Monomial] | None = None) -> FormSpace:
    """Degree-m forms vanishing at sampled points of the r-th secant.

    Points are added in batches of ``num_points`` until two consecutive
    batches leave the same null-space dimension.  ``monomials`` optionally
    restricts the candidate forms to a sub-basis of S_m.  Ranks are tracked
    modulo a prime; the final null space is exact and verified.
    """
    if r < 1 or m < 1:
        raise ValueError("r and m must be positive")
    monos = list(monomials) if monomials is not None else list(monomials_of_degree(mmap.targets.n, m))
    cols = ColumnIndex(monos)
    size = len(cols)
    if num_points is None:
        num_points = size + 1
    if num_points < size:
        warnings.warn(f"{num_points} points per batch is below the {size} candidate monomials",
                      stacklevel=2)
    rng = cfg.rng()
    rows = []
    red = ModularRowReducer(PRIMES[0])
    previous = None
    while True:
        for _ in range(num_points):
            if red.rank == size:
                break
            row = _integral_row(sample_secant_point(mmap, r, cfg, rng), cols.monos)
            rows.append(row)
            red.add(row)
        dim = size - red.rank
        if dim == previous or dim == 0:
            break
        previous = dim
    basis = [cols.poly(vec, mmap.targets) for vec in certified_kernel(rows, size)] if dim else []
    return make_formspace(basis, m, mmap.targets)


def monomial_weight(mmap: MonomialMap, m: Monomial) -> Monomial:
    """Exponent vector of the parameters after substituting the map into m."""
    w = [0] * mmap.params.n
    for k, power in enumerate(m):
        if power:
            for i, x in enumerate(mmap.images[k]):
                w[i] += power * x
    return tuple(w)


def monomials_of_weight(mmap: MonomialMap, m: int, weight: Monomial) -> list[Monomial]:
    """Degree-m monomials in the targets whose pullback is the parameter monomial ``weight``.

    The parameter torus acts on the variety, so every secant ideal is spanned
    by forms whose monomials share one weight; interpolating within a single
    weight is exact for that piece and far smaller than all of S_m.
    """
    weight = tuple(weight)
    return [mono for mono in monomials_of_degree(mmap.targets.n, m)
            if monomial_weight(mmap, mono) == weight]


def lowest_degree_clear(mmap: MonomialMap, d: int, cfg: SampleConfig) -> bool:
    """True when no non-zero form of degree <= d-1 vanishes on the sampled variety.

    This is the hypothesis under which interpolated secant pieces are expected
    to match prolongations.
    """
    for deg in range(1, d):
        if not interpolate_vanishing_piece(mmap, 1, deg, cfg).is_zero():
            return False
    return True


def ambient_size(mmap: MonomialMap, m: int) -> int:
    return count_monomials(mmap.targets.n, m)


def segre_map(rows: int, cols: int) -> MonomialMap:
    """x_ij -> a_i b_j."""
    sep = "" if max(rows, cols) <= 9 else "_"
    params = VarSet(tuple([f"a{i}" for i in range(1, rows + 1)] + [f"b{j}" for j in range(1, cols + 1)]))
    targets = VarSet(tuple(f"x{sep}{i}{sep}{j}" for i in range(1, rows + 1) for j in range(1, cols + 1)))
    images = []
    for i in range(rows):
        for j in range(cols):
            e = [0] * (rows + cols)
            e[i] = 1
            e[rows + j] = 1
            images.append(tuple(e))
    return MonomialMap(params, targets, tuple(images))
