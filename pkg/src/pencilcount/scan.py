"""Single-pass enumerator over label positions with memoized states.

Instead of materializing diagrams and markings, the scan walks positions
1..n and maintains the multiset of open elevators: bottom edges open a
labeled weight-1 stub, a floor terminates a choice of open labeled stubs and
opens new unlabeled ones subject to divergence 0, and a label event marks an
open unlabeled stub.  Connectivity is tracked as a partition of the open
stubs into components; a floor may terminate at most one component-carrying
stub per component (anything more closes a cycle, which genus 0 forbids).

Counting semantics.  A state stands for the scanned prefix of a marked
diagram up to isomorphism.  Stubs opened together by one floor and not yet
labeled are interchangeable, so labeling one of them is a single choice;
stubs that already carry a label position are pairwise distinguishable even
when their attributes agree, so terminating j of k attribute-equal ones
contributes binomial(k, j) distinct completions.  With these weights the
scan total equals the explicit pipeline's sum over diagrams of multiplicity
times marking-orbit count.

In real mode each pair block consumes two consecutive positions through a
compound event: floor then label of a newly opened edge, label then floor
terminating that edge, bottom edge then terminating floor, two labels of
stubs sharing an origin floor, or (INCIDENT scope only) two edge placements
bonded to terminate at one common future floor.  Bonded pairs are merged
into a single record so the state stays Markovian.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from multiprocessing import get_context

from .bidegree import Bidegree
from .errors import InputError, ResourceCapError
from .markings import (
    DEFAULT_CONVENTION,
    SCOPE_INCIDENT,
    LabelLayout,
    SignConvention,
)

# stub kinds
KB = 0  # bounded elevator
KT = 1  # top edge
KM = 2  # bonded co-terminating pair carrying a component

# stub flags
FU = 0  # unlabeled
FL = 1  # labeled, uncovered (for tops: labeled, covered or not)
FC = 2  # labeled, covered by a pair block

NOTAG = -1
_FRESH = 10_000  # tag for stubs opened by the floor being placed
_TAG_STRIDE = 64  # disjoint tag ranges when blocks merge

_SINGLE = 0
_PAIRED = 1


@lru_cache(maxsize=None)
def _partitions(total: int) -> tuple[tuple[int, ...], ...]:
    """Partitions of `total` into positive non-increasing parts."""
    if total == 0:
        return ((),)
    out = []

    def rec(rest: int, cap: int, acc: tuple[int, ...]):
        if rest == 0:
            out.append(acc)
            return
        for part in range(min(rest, cap), 0, -1):
            rec(rest - part, part, acc + (part,))

    rec(total, total, ())
    return tuple(out)


def _merge_objs(groups) -> list:
    """Concatenate block object lists, keeping origin-tag groups disjoint."""
    merged = []
    for base, objs in enumerate(groups):
        off = base * _TAG_STRIDE
        for (k, w, f, t) in objs:
            merged.append((k, w, f, t + off) if f == FU else (k, w, f, t))
    return merged


@lru_cache(maxsize=1 << 20)
def _canon_block(objs) -> tuple:
    """Relabel origin tags of one block canonically and sort its objects."""
    members: dict[int, list] = {}
    for (k, w, f, t) in objs:
        if f == FU:
            members.setdefault(t, []).append((k, w))
    if not members:
        return tuple(sorted(objs))
    order = sorted(members, key=lambda t: (sorted(members[t]), t))
    remap = {t: i for i, t in enumerate(order)}
    return tuple(sorted(
        (k, w, f, remap[t]) if f == FU else (k, w, f, NOTAG)
        for (k, w, f, t) in objs))


def _canon_state(bots: int, floors: int, g: int, mg: int, blocks) -> tuple:
    return (bots, floors, g, mg, tuple(sorted(map(_canon_block, blocks))))


@dataclass
class ScanStats:
    """Statistics record produced by `state_space_report`."""

    a: int
    b: int
    mode: str
    positions: int
    states_per_position: tuple[int, ...]
    peak_states: int
    transitions: int
    peak_state_bytes: int


class _Scanner:
    def __init__(self, a: int, b: int, schedule, complex_mode: bool,
                 convention: SignConvention, memoize: bool = True,
                 check_flow: bool = False, max_states: int | None = None,
                 collect_stats: bool = False):
        self.a = a
        self.b = b
        self.schedule = schedule
        self.complex = complex_mode
        self.conv = convention
        self.incident = convention.pair_scope == SCOPE_INCIDENT
        self.memoize = memoize
        self.check_flow = check_flow
        self.max_states = max_states
        self.collect_stats = collect_stats
        self.state_counts: list[int] = []
        self.transitions = 0
        self.peak_states = 0

    # -- helpers ------------------------------------------------------------

    def _flow_ok(self, st) -> bool:
        bots, _, g, mg, blocks = st
        weight = sum(w for objs in blocks for (_, w, _, _) in objs)
        return weight + g + 2 * mg + bots == self.a

    def _prune(self, st, positions_left: int) -> bool:
        """True when the state cannot fill the remaining positions."""
        bots, floors, g, mg, blocks = st
        floors_left = self.b - floors
        if positions_left >= floors_left + bots + sum(map(len, blocks)):
            # even counting every open stub as unlabeled there is room
            if floors_left:
                return False
        fu = sum(1 for objs in blocks for (_, _, f, _) in objs if f == FU)
        if positions_left < floors_left + bots + fu:
            return True
        if floors_left == 0:
            if bots or g or mg:
                return True
            if any(k != KT for objs in blocks for (k, _, _, _) in objs):
                return True
        return False

    # -- floor placement ----------------------------------------------------

    def _floor_moves(self, st, *, forced=None, cover: bool = False):
        """All ways to place one floor: choose terminations, then openings.

        `forced` injects one transient terminated stub: ("ground", w) for a
        bottom edge placed alongside, ("block", bi, w) for a just-covered
        elevator whose component is block bi.  With `cover` set, the second
        pair position labels one of the newly opened stubs as covered, and
        only those variants are produced.
        """
        bots, floors, g, mg, blocks = st
        if floors >= self.b:
            return
        forced_kind = forced[0] if forced else None
        forced_block = forced[1] if forced_kind == "block" else None
        forced_w = forced[-1] if forced else 0

        options = []
        for bi, objs in enumerate(blocks):
            opts = [None]
            if bi != forced_block:
                classes: dict = {}
                for obj in objs:
                    k, w, f, t = obj
                    if k == KM or (k == KB and f != FU):
                        classes[obj] = classes.get(obj, 0) + 1
                opts.extend(classes.items())
            options.append(opts)

        for combo in itertools.product(*options):
            total = forced_w
            mult = 1
            picked = []
            dead = False
            for bi, pick in enumerate(combo):
                if pick is None:
                    continue
                (k, w, f, t), cnt = pick
                if k == KB and f == FL and not self.complex and w % 2 == 0:
                    dead = True
                    break  # uncovered even weight; odd contributes +1
                total += w
                mult *= cnt
                picked.append((bi, (k, w, f, t)))
            if dead:
                continue
            contrib = {bi for bi, _ in picked}
            if forced_block is not None:
                contrib.add(forced_block)
            for gj in range(g + 1):
                for mj in range(mg + 1):
                    tot = total + gj + 2 * mj
                    mult2 = mult * comb(g, gj) * comb(mg, mj)
                    g_rem = g - gj
                    m_rem = mg - mj
                    for tau in range(tot + 1):
                        for parts in _partitions(tot - tau):
                            yield from self._open_floor(
                                st, picked, contrib, mult2, g_rem, m_rem,
                                tau, parts, cover)

    def _open_floor(self, st, picked, contrib, factor, g_rem, m_rem, tau, parts, cover):
        bots, floors, g, mg, blocks = st
        carried = []
        for bi in contrib:
            objs = list(blocks[bi])
            for (pbi, obj) in picked:
                if pbi == bi:
                    objs.remove(obj)
            carried.append(objs)
        merged = _merge_objs(carried)
        open_factor = 1
        for p in parts:
            merged.append((KB, p, FU, _FRESH))
            if self.complex:
                open_factor *= p * p
        merged.extend((KT, 1, FU, _FRESH) for _ in range(tau))
        others = [objs for bi, objs in enumerate(blocks) if bi not in contrib]

        if not merged:
            # the new floor closes its component: only the lone-floor diagram
            if others or g_rem or m_rem or bots or floors + 1 != self.b:
                return
            yield (bots, floors + 1, 0, 0, ()), factor
            return

        base = (bots, floors + 1, g_rem, m_rem)
        if not cover:
            yield base + (tuple(others) + (tuple(merged),),), factor * open_factor
            return
        # pair variant: the position after the floor labels one new stub
        for w in sorted(set(parts)):
            variant = list(merged)
            variant.remove((KB, w, FU, _FRESH))
            variant.append((KB, w, FC, NOTAG))
            yield (base + (tuple(others) + (tuple(variant),),),
                   factor * open_factor * self.conv.vertex_factor(w))
        if tau:
            variant = list(merged)
            variant.remove((KT, 1, FU, _FRESH))
            variant.append((KT, 1, FL, NOTAG))
            yield base + (tuple(others) + (tuple(variant),),), factor * open_factor

    # -- single-position events ----------------------------------------------

    def _single_moves(self, st):
        bots, floors, g, mg, blocks = st
        if bots:
            yield (bots - 1, floors, g + 1, mg, blocks), 1
        yield from self._label_moves(st)
        yield from self._floor_moves(st)

    def _label_moves(self, st):
        bots, floors, g, mg, blocks = st
        for bi, objs in enumerate(blocks):
            seen = set()
            for obj in objs:
                k, w, f, t = obj
                if f != FU or obj in seen:
                    continue
                seen.add(obj)
                if k == KB and not self.complex and w % 2 == 0:
                    continue  # uncovered even weight can only yield 0
                variant = list(objs)
                variant.remove(obj)
                variant.append((k, w, FL, NOTAG))
                out = blocks[:bi] + (tuple(variant),) + blocks[bi + 1:]
                yield (bots, floors, g, mg, out), 1

    # -- pair-block events ----------------------------------------------------

    def _pair_moves(self, st):
        bots, floors, g, mg, blocks = st
        # floor, then covered label of a stub it opened
        yield from self._floor_moves(st, cover=True)
        # covered label of an open stub, then the floor terminating it
        for bi, objs in enumerate(blocks):
            seen = set()
            for obj in objs:
                k, w, f, t = obj
                if k != KB or f != FU or obj in seen:
                    continue
                seen.add(obj)
                variant = list(objs)
                variant.remove(obj)
                stripped = blocks[:bi] + (tuple(variant),) + blocks[bi + 1:]
                factor = self.conv.vertex_factor(w)
                for nst, f2 in self._floor_moves(
                        (bots, floors, g, mg, stripped), forced=("block", bi, w)):
                    yield nst, factor * f2
        # bottom edge, then the floor terminating it
        if bots:
            for nst, f2 in self._floor_moves(
                    (bots - 1, floors, g, mg, blocks), forced=("ground", 1)):
                yield nst, f2
        # two labels sharing an origin floor
        yield from self._origin_pair_moves(st)
        # two placements bonded to co-terminate (INCIDENT scope only)
        if self.incident:
            yield from self._target_pair_moves(st)

    def _origin_pair_moves(self, st):
        bots, floors, g, mg, blocks = st
        for bi, objs in enumerate(blocks):
            classes: dict = {}
            for obj in objs:
                if obj[2] == FU:
                    classes[obj] = classes.get(obj, 0) + 1
            items = list(classes.items())
            for (o1, c1) in items:
                for (o2, c2) in items:
                    if o1[3] != o2[3]:
                        continue
                    if o1 == o2 and c1 < 2:
                        continue
                    variant = list(objs)
                    for o in (o1, o2):
                        k, w, _, _ = o
                        variant.remove(o)
                        if k == KB:
                            variant.append((KB, w, FC, NOTAG))
                        else:
                            variant.append((KT, 1, FL, NOTAG))
                    ws = tuple(sorted(o[1] for o in (o1, o2) if o[0] == KB))
                    out = blocks[:bi] + (tuple(variant),) + blocks[bi + 1:]
                    yield (bots, floors, g, mg, out), self.conv.origin_pair_factor(ws)

    def _target_pair_moves(self, st):
        bots, floors, g, mg, blocks = st
        labels = []
        for bi, objs in enumerate(blocks):
            seen = set()
            for obj in objs:
                if obj[0] == KB and obj[2] == FU and obj not in seen:
                    seen.add(obj)
                    labels.append((bi, obj))
        # bottom + bottom: one unordered bond
        if bots >= 2:
            yield (bots - 2, floors, g, mg + 1, blocks), self.conv.target_pair_factor(())
        # bottom + label, both orders
        if bots:
            for (bi, obj) in labels:
                w = obj[1]
                variant = list(blocks[bi])
                variant.remove(obj)
                variant.append((KM, w + 1, FL, NOTAG))
                out = blocks[:bi] + (tuple(variant),) + blocks[bi + 1:]
                factor = self.conv.target_pair_factor((w,))
                yield (bots - 1, floors, g, mg, out), factor
                yield (bots - 1, floors, g, mg, out), factor
        # label + label from distinct components, both orders
        for (bi, o1) in labels:
            for (bj, o2) in labels:
                if bi == bj:
                    continue
                w1, w2 = o1[1], o2[1]
                merged_src = [list(blocks[bi]), list(blocks[bj])]
                merged_src[0].remove(o1)
                merged_src[1].remove(o2)
                merged = _merge_objs(merged_src)
                merged.append((KM, w1 + w2, FL, NOTAG))
                out = tuple(objs for k2, objs in enumerate(blocks) if k2 not in (bi, bj))
                out = out + (tuple(merged),)
                yield ((bots, floors, g, mg, out),
                       self.conv.target_pair_factor(tuple(sorted((w1, w2)))))

    # -- main loop ------------------------------------------------------------

    def run(self, frontier=None):
        if frontier is None:
            frontier = {(self.a, 0, 0, 0, ()): 1}
        items = list(frontier.items())
        positions_left = sum(2 if s == _PAIRED else 1 for s in self.schedule)
        for step in self.schedule:
            positions_left -= 2 if step == _PAIRED else 1
            merged: dict = {}
            unmerged: list = []
            for st, coeff in items:
                moves = self._pair_moves(st) if step == _PAIRED else self._single_moves(st)
                for raw, factor in moves:
                    if self._prune(raw, positions_left):
                        continue
                    key = _canon_state(*raw)
                    if self.check_flow and not self._flow_ok(key):
                        raise AssertionError(f"flow invariant violated: {key}")
                    self.transitions += 1
                    if self.memoize:
                        merged[key] = merged.get(key, 0) + coeff * factor
                    else:
                        unmerged.append((key, coeff * factor))
            items = [(k, v) for k, v in merged.items() if v] if self.memoize else unmerged
            if self.max_states is not None and len(items) > self.max_states:
                raise ResourceCapError(
                    f"scan frontier for bidegree ({self.a}, {self.b}) exceeded "
                    f"{self.max_states} states")
            if self.collect_stats:
                self.state_counts.append(len(items))
            self.peak_states = max(self.peak_states, len(items))
        total = 0
        for st, coeff in items:
            if self._accepts(st):
                total += coeff
        return total

    def _accepts(self, st) -> bool:
        bots, floors, g, mg, blocks = st
        if floors != self.b or bots or g or mg:
            return False
        if self.a == 0:
            return blocks == ()
        if len(blocks) != 1:
            return False
        return all(obj[0] == KT and obj[2] == FL for obj in blocks[0])


def _build_schedule(n: int, layout: LabelLayout | None):
    if layout is None:
        return tuple([_SINGLE] * n)
    steps = []
    starts = set(layout.pair_starts)
    p = 1
    while p <= n:
        if p in starts:
            steps.append(_PAIRED)
            p += 2
        else:
            steps.append(_SINGLE)
            p += 1
    return tuple(steps)


def _tail_worker(payload):
    (a, b, schedule, complex_mode, conv_ident, max_states, chunk) = payload
    scanner = _Scanner(a, b, schedule, complex_mode,
                       SignConvention.from_ident(conv_ident), max_states=max_states)
    return scanner.run(dict(chunk))


def scan_count(bd: Bidegree, mode: str = "complex", *, s: int | None = None,
               layout: LabelLayout | None = None,
               convention: SignConvention = DEFAULT_CONVENTION,
               jobs: int = 1, memoize: bool = True, check_flow: bool = False,
               max_states: int | None = None) -> int:
    """Total multiplicity-weighted count of marked diagrams for `bd`.

    mode "complex" accrues squared elevator weights; mode "real" takes either
    `s` (pair blocks stacked on top, the default layout) or an explicit
    `layout`, plus a sign convention.  Equals the explicit pipeline's
    sum over diagrams.
    """
    a, b = bd.a, bd.b
    if b == 0:
        a, b = b, a
    n = 2 * (a + b) - 1
    if mode == "complex":
        lay = None
        complex_mode = True
    elif mode == "real":
        if layout is None:
            if s is None:
                raise InputError("real mode needs either s or an explicit layout")
            layout = LabelLayout.default(n, s)
        if layout.n != n:
            raise InputError(f"layout is for {layout.n} positions, bidegree needs {n}")
        if layout.r < 1:
            raise InputError(f"{layout.s} pair blocks leave no single position in 1..{n}")
        lay = layout
        complex_mode = False
    else:
        raise InputError(f"unknown scan mode {mode!r}")
    schedule = _build_schedule(n, lay)
    scanner = _Scanner(a, b, schedule, complex_mode, convention,
                       memoize=memoize, check_flow=check_flow, max_states=max_states)
    if jobs <= 1 or not memoize:
        return scanner.run()
    return _run_parallel(scanner, a, b, schedule, complex_mode, convention, jobs)


def _run_parallel(scanner: _Scanner, a, b, schedule, complex_mode, convention, jobs):
    """Split the frontier at a fixed depth and reduce partial sums."""
    split = 0
    frontier = {(a, 0, 0, 0, ()): 1}
    target = jobs * 8
    while split < len(schedule) - 1 and len(frontier) < target:
        step = schedule[split]
        positions_left = sum(2 if s2 == _PAIRED else 1 for s2 in schedule[split + 1:])
        sub: dict = {}
        for st, coeff in frontier.items():
            moves = scanner._pair_moves(st) if step == _PAIRED else scanner._single_moves(st)
            for raw, factor in moves:
                if scanner._prune(raw, positions_left):
                    continue
                key = _canon_state(*raw)
                sub[key] = sub.get(key, 0) + coeff * factor
        frontier = sub
        if scanner.max_states is not None and len(frontier) > scanner.max_states:
            raise ResourceCapError(
                f"scan frontier for bidegree ({a}, {b}) exceeded "
                f"{scanner.max_states} states")
        split += 1
    rest = schedule[split:]
    if not frontier:
        return 0
    items = sorted(frontier.items())
    chunks = [items[i::jobs] for i in range(jobs)]
    chunks = [c for c in chunks if c]
    payloads = [(a, b, rest, complex_mode, convention.ident, scanner.max_states, chunk)
                for chunk in chunks]
    if len(payloads) == 1:
        return _tail_worker(payloads[0])
    ctx = get_context("fork")
    with ctx.Pool(len(payloads)) as pool:
        parts = pool.map(_tail_worker, payloads)
    return sum(parts)


def state_space_report(bd: Bidegree, mode: str = "complex", *, s: int | None = None,
                       layout: LabelLayout | None = None,
                       convention: SignConvention = DEFAULT_CONVENTION,
                       max_states: int | None = None) -> ScanStats:
    """Run the scan machinery for statistics only (no invariant is reported)."""
    a, b = bd.a, bd.b
    if b == 0:
        a, b = b, a
    n = 2 * (a + b) - 1
    lay = None
    complex_mode = True
    if mode == "real":
        lay = layout if layout is not None else LabelLayout.default(n, s or 0)
        complex_mode = False
    schedule = _build_schedule(n, lay)
    scanner = _Scanner(a, b, schedule, complex_mode, convention,
                       max_states=max_states, collect_stats=True)
    scanner.run()
    counts = tuple(scanner.state_counts)
    # rough per-state footprint: key tuple plus up to `a` object tuples
    per_state = 88 + 56 * (a + 2)
    return ScanStats(
        a=a, b=b, mode=mode, positions=n,
        states_per_position=counts,
        peak_states=scanner.peak_states,
        transitions=scanner.transitions,
        peak_state_bytes=scanner.peak_states * per_state,
    )
