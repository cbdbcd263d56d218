"""Public computation API for the quadric and three-space invariants.

Surface-level counts are produced by the position scan (the explicit
diagram-plus-marking pipeline remains available as the oracle engine); the
two degree reduction formulas combine them into the three-space invariants.
All values are exact integers; a JSONL cache keyed by normalized bidegree
and convention makes table reproduction cheap.
"""

from __future__ import annotations

import json
import os
import sys
import threading
from dataclasses import dataclass

from . import fixtures
from .bidegree import Bidegree
from .diagrams import enumerate_diagrams
from .errors import InputError
from .markings import (
    DEFAULT_CONVENTION,
    LabelLayout,
    SignConvention,
    complex_multiplicity,
    count_complex_markings,
    real_contribution,
)
from .scan import scan_count

ENGINE_VERSION = "0.1.0"
CONVENTION_FILE = "pencilcount-convention.json"

_RECORD_FIELDS = ("kind", "a", "b", "d", "l", "value", "convention", "version")


@dataclass(frozen=True)
class InvariantRecord:
    kind: str  # gw2 | w2 | gw3 | w3
    a: int | None
    b: int | None
    d: int | None
    l: int | None
    value: str
    convention: str | None
    version: str = ENGINE_VERSION

    def to_json_line(self) -> str:
        payload = {field: getattr(self, field) for field in _RECORD_FIELDS}
        return json.dumps(payload, separators=(", ", ": "))

    @classmethod
    def from_json_line(cls, line: str) -> "InvariantRecord":
        data = json.loads(line)
        return cls(**{field: data.get(field) for field in _RECORD_FIELDS})


class ResultCache:
    """Invariant store: in-memory map with an optional JSONL file behind it.

    Reads are lock-free once loaded; writes append one record per line and
    are serialized by a process-local lock.
    """

    def __init__(self, path: str | None = None):
        self.path = path
        self._memory: dict = {}
        self._lock = threading.Lock()
        self._loaded = path is None

    @staticmethod
    def _key(kind, a, b, d, l, convention):
        return (kind, a, b, d, l, convention)

    def _load(self) -> None:
        if self._loaded:
            return
        self._loaded = True
        if not self.path or not os.path.exists(self.path):
            return
        with open(self.path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = InvariantRecord.from_json_line(line)
                key = self._key(rec.kind, rec.a, rec.b, rec.d, rec.l, rec.convention)
                self._memory[key] = int(rec.value)

    def get(self, kind, a=None, b=None, d=None, l=None, convention=None):
        self._load()
        return self._memory.get(self._key(kind, a, b, d, l, convention))

    def put(self, kind, value, a=None, b=None, d=None, l=None, convention=None):
        self._load()
        key = self._key(kind, a, b, d, l, convention)
        with self._lock:
            if key in self._memory:
                return
            self._memory[key] = value
            if self.path:
                rec = InvariantRecord(kind, a, b, d, l, str(value), convention)
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(rec.to_json_line() + "\n")

    def clear(self) -> None:
        with self._lock:
            self._memory.clear()
            self._loaded = self.path is None
            if self.path and os.path.exists(self.path):
                os.remove(self.path)


_memory_cache = ResultCache()


def load_fitted_convention(path: str = CONVENTION_FILE) -> SignConvention | None:
    if not os.path.exists(path):
        return None
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return SignConvention.from_ident(data["convention"])


def save_fitted_convention(conv: SignConvention, path: str = CONVENTION_FILE,
                           max_d: int | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"convention": conv.ident, "fitted_max_d": max_d,
                   "version": ENGINE_VERSION}, fh)
        fh.write("\n")


_warned_unfitted = False


def resolve_convention(convention: SignConvention | str | None = None,
                       convention_path: str = CONVENTION_FILE):
    """Active convention plus whether it came from a fit (or explicit choice)."""
    if convention is not None:
        if isinstance(convention, str):
            convention = SignConvention.from_ident(convention)
        return convention, True
    fitted = load_fitted_convention(convention_path)
    if fitted is not None:
        return fitted, True
    return DEFAULT_CONVENTION, False


def _warn_unfitted(a: int, b: int, l: int) -> None:
    global _warned_unfitted
    if _warned_unfitted:
        return
    if min(a, b) >= 3 and l >= 1:
        _warned_unfitted = True
        print(
            "warning: using the built-in sign convention without a recorded fit; "
            "run `pencilcount verify --suite conventions` to fit and persist it",
            file=sys.stderr)


def _validated_bidegree(a: int, b: int) -> Bidegree:
    return Bidegree(a, b)


def gw_quadric(a: int, b: int, *, engine: str = "scan", jobs: int = 1,
               cache: ResultCache | None = None,
               max_states: int | None = None) -> int:
    """Count of rational curves of bidegree (a, b) through 2(a+b)-1 points."""
    _validated_bidegree(a, b)
    lo, hi = min(a, b), max(a, b)
    cache = cache or _memory_cache
    hit = cache.get("gw2", a=lo, b=hi)
    if hit is not None:
        return hit
    if engine == "explicit":
        value = sum(complex_multiplicity(d) * count_complex_markings(d)
                    for d in enumerate_diagrams(Bidegree(lo, hi)))
    else:
        value = scan_count(Bidegree(lo, hi), "complex", jobs=jobs,
                           max_states=max_states)
    cache.put("gw2", value, a=lo, b=hi)
    return value


def w_quadric(a: int, b: int, l: int, *, convention: SignConvention | None = None,
              engine: str = "scan", jobs: int = 1,
              cache: ResultCache | None = None,
              layout: LabelLayout | None = None,
              max_states: int | None = None) -> int:
    """Signed count for bidegree (a, b) with l conjugate point pairs."""
    bd = _validated_bidegree(a, b)
    if not (0 <= l <= a + b - 1):
        raise InputError(f"l must satisfy 0 <= l <= a + b - 1 = {a + b - 1}, got {l}")
    conv, fitted = resolve_convention(convention)
    if not fitted:
        _warn_unfitted(a, b, l)
    lo, hi = min(a, b), max(a, b)
    cache = cache or _memory_cache
    if layout is None:
        hit = cache.get("w2", a=lo, b=hi, l=l, convention=conv.ident)
        if hit is not None:
            return hit
    if engine == "explicit":
        value = sum(real_contribution(d, l, layout=layout, convention=conv)
                    for d in enumerate_diagrams(Bidegree(lo, hi)))
    else:
        value = scan_count(Bidegree(lo, hi), "real", s=l, layout=layout,
                           convention=conv, jobs=jobs, max_states=max_states)
    if layout is None:
        cache.put("w2", value, a=lo, b=hi, l=l, convention=conv.ident)
    return value


def _real_torsion_coefficient(m: int) -> int:
    """Real solution count of the order-m torsion equation on the pointed
    component: m when m is odd, none forced when m is even."""
    return m if m % 2 == 1 else 0


def w_rp3(d: int, l: int, *, convention: SignConvention | None = None,
          force_compute: bool = False, jobs: int = 1,
          cache: ResultCache | None = None,
          max_states: int | None = None) -> int:
    """Three-space invariant for degree d with l conjugate point pairs.

    Odd d uses the signed reduction over bidegrees (a, d-a) with a < b.  Even
    d vanishes and is short-circuited; with force_compute the sum is
    evaluated anyway, each term carrying the real torsion-solution count
    (d - 2a when odd, else 0), so every even-degree term vanishes.  This
    force-computed path is exploratory only.
    """
    if d < 1:
        raise InputError(f"degree must be positive, got {d}")
    if l == d:
        raise InputError(
            f"l = d = {d} requests the all-conjugate invariant, which is out of "
            "scope for the reduction formula; it is available only as a fixture "
            "through the verify suite")
    if not (0 <= l <= d - 1):
        raise InputError(f"l must satisfy 0 <= l <= d - 1 = {d - 1}, got {l}")
    conv, _ = resolve_convention(convention)
    cache = cache or _memory_cache
    key = dict(d=d, l=l, convention=conv.ident)
    if d % 2 == 0 and not force_compute:
        return 0
    hit = cache.get("w3", **key)
    if hit is not None and not force_compute:
        return hit
    total = 0
    for a in range((d + 1) // 2):
        coef = _real_torsion_coefficient(d - 2 * a)
        if coef == 0 and not force_compute:
            continue
        # in the exploratory force-computed path the zero-coefficient terms
        # are still evaluated, so the engine really runs on every bidegree
        term = w_quadric(a, d - a, l, convention=conv, jobs=jobs, cache=cache,
                         max_states=max_states)
        total += (-1) ** a * coef * term
    if d % 2 == 1:
        cache.put("w3", total, **key)
    return total


def gw_cp3(d: int, *, jobs: int = 1, cache: ResultCache | None = None,
           max_states: int | None = None) -> int:
    """Count of degree-d rational curves in three-space through 2d points."""
    if d < 1:
        raise InputError(f"degree must be positive, got {d}")
    cache = cache or _memory_cache
    hit = cache.get("gw3", d=d)
    if hit is not None:
        return hit
    total = 0
    for a in range((d + 1) // 2):
        if d - 2 * a == 0:
            continue
        total += (d - 2 * a) ** 2 * gw_quadric(a, d - a, jobs=jobs, cache=cache,
                                               max_states=max_states)
    cache.put("gw3", total, d=d)
    return total


@dataclass(frozen=True)
class CongruenceRecord:
    a: int
    b: int
    l: int
    gw: int
    w: int
    gw_mod4: int
    w_mod4: int
    ok: bool


def congruence_check(a: int, b: int, l: int, *,
                     convention: SignConvention | None = None,
                     cache: ResultCache | None = None) -> CongruenceRecord:
    """Whether the complex and signed counts agree modulo 4."""
    gw = gw_quadric(a, b, cache=cache)
    w = w_quadric(a, b, l, convention=convention, cache=cache)
    return CongruenceRecord(a, b, l, gw, w, gw % 4, w % 4, gw % 4 == w % 4)


@dataclass(frozen=True)
class Cp3CongruenceRecord:
    d: int
    l: int
    gw: int
    w: int
    sign: int
    ok: bool


def cp3_congruence_check(d: int, l: int, *,
                         convention: SignConvention | None = None,
                         cache: ResultCache | None = None) -> Cp3CongruenceRecord:
    """Whether gw_cp3(d) is congruent to (-1)**((d-1)(d-2)/2) w_rp3(d, l) mod 4."""
    if d < 1:
        raise InputError(f"degree must be positive, got {d}")
    if not (0 <= l <= d - 1):
        raise InputError(f"l must satisfy 0 <= l <= d - 1, got {l}")
    gw = gw_cp3(d, cache=cache)
    w = w_rp3(d, l, convention=convention, cache=cache)
    sign = -1 if ((d - 1) * (d - 2) // 2) % 2 else 1
    return Cp3CongruenceRecord(d, l, gw, w, sign, gw % 4 == (sign * w) % 4)


@dataclass(frozen=True)
class SignPatternReport:
    d: int
    values: tuple[int, ...]
    normalized: tuple[int, ...]  # (-1)**((d-1)/2) * value
    signs: tuple[int, ...]
    alternation_start: int | None


def sign_pattern_report(d: int, *, convention: SignConvention | None = None,
                        cache: ResultCache | None = None) -> SignPatternReport:
    """Signs of the normalized column and the start of strict alternation.

    Purely descriptive: reports where, scanning l upward, the normalized
    values switch from constant sign to strictly alternating (None when the
    whole column keeps one sign).
    """
    if d % 2 == 0:
        raise InputError("sign pattern reports are defined for odd degree")
    values = tuple(w_rp3(d, l, convention=convention, cache=cache) for l in range(d))
    unit = -1 if ((d - 1) // 2) % 2 else 1
    normalized = tuple(unit * v for v in values)
    signs = tuple(0 if v == 0 else (1 if v > 0 else -1) for v in normalized)
    start: int | None = None
    for t in range(len(signs) - 1, -1, -1):
        tail = signs[t:]
        if all(tail[i] == -tail[i + 1] != 0 for i in range(len(tail) - 1)):
            start = t
        else:
            break
    if start is None or start >= len(signs) - 1:
        start = None  # no run of strict alternation
    return SignPatternReport(d, values, normalized, signs, start)


@dataclass(frozen=True)
class ConjectureReport:
    d: int
    computed_l: int
    computed: int
    fixture: int | None
    equal: bool | None  # None when untestable

    @property
    def testable(self) -> bool:
        return self.fixture is not None


def conjecture_report(d: int, *, convention: SignConvention | None = None,
                      cache: ResultCache | None = None) -> ConjectureReport:
    """Computed value at l = d-1 against the published all-conjugate fixture."""
    if d % 2 == 0:
        raise InputError("the comparison is defined for odd degree")
    computed = w_rp3(d, d - 1, convention=convention, cache=cache)
    if not fixtures.has_fixture(d, d):
        return ConjectureReport(d, d - 1, computed, None, None)
    fixture = fixtures.fixture_value(d, d)
    return ConjectureReport(d, d - 1, computed, fixture, computed == fixture)
