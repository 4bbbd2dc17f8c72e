"""Generators for the point-process families studied by the package.

A :class:`PointConfiguration` is a set of occupied sites on a segment of a
one-dimensional lattice.  Positions are stored relative to ``origin`` as
0-based offsets in ``[0, length)``.

Period-doubling positions are 0-based.  In 1-based counting the b sites form
the progressions 2+4j, 8+16j, 32+64j, ...; 0-based, subtract one.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .numtheory import interval_occupancy

KINDS = ("primes", "integer-lattice", "lattice-gas", "period-doubling-a",
         "period-doubling-b", "custom")


@dataclass(frozen=True)
class PointConfiguration:
    """Occupied lattice sites.

    Attributes
    ----------
    origin : int
        Absolute coordinate of site 0.
    length : int
        Number of lattice sites in the segment.
    occupied : ndarray of int64
        Sorted occupied offsets in ``[0, length)``.
    kind : str
        Family label.
    spacing : int
        Lattice constant measured in units of the underlying integers.
    """

    origin: int
    length: int
    occupied: np.ndarray = field(repr=False)
    kind: str = "custom"
    spacing: int = 1

    def __post_init__(self):
        occ = np.asarray(self.occupied, dtype=np.int64)
        if occ.ndim != 1:
            raise ValueError("occupied must be one-dimensional")
        if occ.size:
            if occ[0] < 0 or occ[-1] >= self.length:
                raise ValueError("occupied positions must lie in [0, length)")
            if np.any(np.diff(occ) <= 0):
                raise ValueError("occupied positions must be strictly increasing")
        occ.setflags(write=False)
        object.__setattr__(self, "occupied", occ)

    @property
    def N(self) -> int:
        return int(self.occupied.size)

    @property
    def f(self) -> float:
        """Occupation fraction."""
        return self.N / self.length if self.length else 0.0

    def occupancy(self, dtype=np.float64) -> np.ndarray:
        """0/1 occupancy sequence of length ``length``."""
        x = np.zeros(self.length, dtype=dtype)
        x[self.occupied] = 1
        return x

    def absolute(self) -> np.ndarray:
        """Occupied positions in absolute coordinates."""
        return self.origin + self.spacing * self.occupied

    def shifted(self, offset: int) -> "PointConfiguration":
        """Same points with the origin moved by ``offset`` sites."""
        return PointConfiguration(self.origin + offset * self.spacing, self.length,
                                  self.occupied, self.kind, self.spacing)

    def odd_sublattice(self) -> "PointConfiguration":
        """Restrict to the sublattice of odd absolute coordinates.

        The result has spacing ``2 * spacing`` and ``length`` equal to the
        number of odd sites in the segment.  Only meaningful for unit
        spacing; points on even sites are dropped (for the primes this is
        just the point 2).
        """
        if self.spacing != 1:
            raise ValueError("odd_sublattice needs a unit-spacing configuration")
        first = 0 if self.origin % 2 else 1  # offset of the first odd site
        n_sites = (self.length - first + 1) // 2
        pos = self.occupied[(self.occupied - first) % 2 == 0]
        return PointConfiguration(self.origin + first, n_sites, (pos - first) // 2,
                                  self.kind, 2)


def primes_config(M: int, L: int) -> PointConfiguration:
    """Primes p with M < p <= M+L; site 0 is the integer M+1."""
    occ = interval_occupancy(M, L)
    return PointConfiguration(int(M) + 1, int(L), np.flatnonzero(occ), "primes")


def integer_lattice_config(length: int, f: float) -> PointConfiguration:
    """Every (1/f)-th site occupied, starting at site 0."""
    if not 0 < f <= 1:
        raise ValueError("f must lie in (0, 1]")
    step = round(1 / f)
    if abs(step - 1 / f) > 1e-9 * step:
        raise ValueError(f"1/f = {1 / f} is not an integer")
    return PointConfiguration(0, int(length), np.arange(0, length, step),
                              "integer-lattice")


_GOLDEN = np.uint64(0x9E3779B97F4A7C15)


def _splitmix64(x: np.ndarray) -> np.ndarray:
    """SplitMix64 finaliser, vectorised (wrapping uint64 arithmetic)."""
    with np.errstate(over="ignore"):
        z = x + _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


def site_uniforms(seed: int, sites: np.ndarray) -> np.ndarray:
    """Uniform [0, 1) variates keyed by (seed, site).

    Each site's value depends only on the seed and the site index, so any
    sub-range can be regenerated independently and the result never depends
    on evaluation order.
    """
    key = _splitmix64(np.array([seed & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64))[0]
    with np.errstate(over="ignore"):
        z = _splitmix64(np.asarray(sites, dtype=np.uint64) * _GOLDEN ^ key)
    return (z >> np.uint64(11)).astype(np.float64) * 2.0**-53


def lattice_gas_config(length: int, f: float, seed: int = 0,
                       chunk: int = 1 << 22) -> PointConfiguration:
    """Each site occupied independently with probability ``f``."""
    if not 0 <= f <= 1:
        raise ValueError("f must lie in [0, 1]")
    parts = []
    for a in range(0, length, chunk):
        sites = np.arange(a, min(a + chunk, length), dtype=np.uint64)
        parts.append(sites[site_uniforms(seed, sites) < f].astype(np.int64))
    occ = np.concatenate(parts) if parts else np.zeros(0, np.int64)
    return PointConfiguration(0, int(length), occ, "lattice-gas")


@dataclass(frozen=True)
class SubstitutionRule:
    """A letter-to-word substitution; the default is period doubling."""

    mapping: dict = field(default_factory=lambda: {"a": "ab", "b": "aa"})
    seed: str = "a"

    def __post_init__(self):
        letters = set("".join(self.mapping.values())) | {self.seed}
        missing = letters - set(self.mapping)
        if missing:
            raise ValueError(f"mapping is not total; no rule for {sorted(missing)}")

    def word(self, iterations: int) -> str:
        w = self.seed
        for _ in range(iterations):
            w = "".join(self.mapping[c] for c in w)
        return w


MAX_PD_ITERATIONS = 34


def period_doubling_word(iterations: int) -> np.ndarray:
    """Boolean array, True at b sites, of the period-doubling word.

    Uses the closed form: the 1-based position i carries b exactly when the
    2-adic valuation of i is odd.  Agrees with iterating a->ab, b->aa.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if iterations > MAX_PD_ITERATIONS:
        raise OverflowError(f"2**{iterations} sites is beyond the supported size")
    i = np.arange(1, 2**iterations + 1, dtype=np.int64)
    low = i & -i  # lowest set bit
    # log2 of a power of two; odd exponent <=> low & 0xAAAA... != 0
    return (low & 0x2AAAAAAAAAAAAAAA) != 0


def period_doubling_config(iterations: int, letter: str = "a") -> PointConfiguration:
    """Positions (0-based) of ``letter`` in the word of length 2**iterations."""
    if letter not in ("a", "b"):
        raise ValueError("letter must be 'a' or 'b'")
    is_b = period_doubling_word(iterations)
    sel = is_b if letter == "b" else ~is_b
    return PointConfiguration(0, is_b.size, np.flatnonzero(sel),
                              f"period-doubling-{letter}")


def pd_b_progressions(length: int, one_based: bool = False) -> np.ndarray:
    """Union of 2+4j, 8+16j, 32+64j, ... up to ``length`` (1-based values).

    With ``one_based=False`` the values are shifted down by one to match the
    0-based positions used by :func:`period_doubling_config`.
    """
    out = []
    first, step = 2, 4
    while first <= length:
        out.append(np.arange(first, length + 1, step))
        first, step = first * 4, step * 4
    pos = np.sort(np.concatenate(out)) if out else np.zeros(0, np.int64)
    return pos if one_based else pos - 1


# ---------------------------------------------------------------- file formats

def write_positions(config: PointConfiguration, path, absolute: bool = True) -> None:
    """Newline-delimited integer positions with a ``#`` header."""
    pos = config.absolute() if absolute else config.occupied
    with open(path, "w") as fh:
        fh.write(f"# kind={config.kind} origin={config.origin} length={config.length} "
                 f"spacing={config.spacing} absolute={int(absolute)}\n")
        np.savetxt(fh, pos, fmt="%d")


def _parse_header(line: str) -> dict:
    out = {}
    for tok in line.lstrip("#").split():
        k, _, v = tok.partition("=")
        out[k] = v
    return out


def read_positions(path, origin: int | None = None, length: int | None = None,
                   kind: str = "custom") -> PointConfiguration:
    """Inverse of :func:`write_positions`.

    Files without a header are treated as absolute unit-spacing positions;
    ``origin`` defaults to the smallest position and ``length`` to the span.
    """
    text = Path(path).read_text().splitlines()
    meta = _parse_header(text[0]) if text and text[0].startswith("#") else {}
    body = [ln for ln in text if ln.strip() and not ln.startswith("#")]
    pos = np.array([int(x) for x in body], dtype=np.int64)
    spacing = int(meta.get("spacing", 1))
    absolute = meta.get("absolute", "1") == "1"
    if origin is None:
        if "origin" in meta:
            origin = int(meta["origin"])
        else:
            origin = int(pos.min()) if pos.size else 0
    if length is None:
        if "length" in meta:
            length = int(meta["length"])
        else:
            length = int((pos.max(initial=origin) - origin) // spacing + 1)
    rel = (pos - origin) // spacing if absolute else pos
    return PointConfiguration(origin, length, np.sort(rel), meta.get("kind", kind), spacing)


def to_runlength(config: PointConfiguration) -> np.ndarray:
    """Alternating run lengths of empty and occupied sites, starting empty.

    The first run may be zero.  The runs sum to ``length``.
    """
    x = config.occupancy(np.int8)
    edges = np.flatnonzero(np.diff(x)) + 1
    bounds = np.concatenate([[0], edges, [x.size]])
    runs = np.diff(bounds)
    if x.size and x[0] == 1:
        runs = np.concatenate([[0], runs])
    return runs.astype(np.int64)


def from_runlength(runs: Iterable[int], origin: int = 0, kind: str = "custom",
                   spacing: int = 1) -> PointConfiguration:
    runs = np.asarray(list(runs), dtype=np.int64)
    if np.any(runs < 0):
        raise ValueError("run lengths must be non-negative")
    x = np.repeat(np.arange(runs.size) % 2, runs).astype(bool)
    return PointConfiguration(origin, int(runs.sum()), np.flatnonzero(x), kind, spacing)


def write_runlength(config: PointConfiguration, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"# kind={config.kind} origin={config.origin} length={config.length} "
                 f"spacing={config.spacing} format=runlength\n")
        fh.write(" ".join(map(str, to_runlength(config).tolist())) + "\n")


def read_runlength(path) -> PointConfiguration:
    lines = Path(path).read_text().splitlines()
    meta = _parse_header(lines[0]) if lines[0].startswith("#") else {}
    runs = [int(t) for ln in lines if not ln.startswith("#") for t in ln.split()]
    return from_runlength(runs, int(meta.get("origin", 0)), meta.get("kind", "custom"),
                          int(meta.get("spacing", 1)))
