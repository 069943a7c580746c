"""Exact minimum hitting search over trace masks.

The engine works on bitmasks: universe positions are bits 0..U-1, every
trace is a point mask, and the family side carries one cover mask per point
(which traces that point hits).  Search is branch and bound on the trace
with the fewest undecided points: each branch includes one of its points
and excludes the points tried before it, so the subtrees partition the
solution space.  The lower bound is a greedy packing of pairwise-disjoint
uncovered traces, strengthened by the counting bound ceil(uncovered / max
point degree); the packing gets sharper as exclusions accumulate, which is
what makes projective instances (where any two traces meet) tractable.

Verdict sizes are exact.  Witnesses are pinned separately: after the
optimum s* is known, a prefix-by-prefix feasibility scan builds the
lexicographically least s*-subset that works, so the reported witness never
depends on exploration order, worker count, or the incumbent the bound
phase happened to find.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations

from .errors import SearchTimeout, UniverseTooLarge

ORACLE_FULL_CAP = 22
PARALLEL_MIN_UNIVERSE = 24  # below this the pool costs more than the search


@dataclass
class SearchResult:
    verdict: str          # exists | not-exists | vacuous
    size: int = None
    witness: tuple = None  # sorted point indices; () for vacuous
    nodes: int = 0
    elapsed: float = 0.0
    certificate: object = None


def _mask_bits(mask):
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return out


def _build_masks(universe, traces):
    pos = {p: i for i, p in enumerate(universe)}
    masks = []
    seen = set()
    for tr in traces:
        m = 0
        for p in tr:
            m |= 1 << pos[p]
        if m not in seen:  # duplicates carry no extra constraint
            seen.add(m)
            masks.append(m)
    return masks


def _cover_masks(ntraces, trace_masks, npoints):
    cover = [0] * npoints
    for ti, m in enumerate(trace_masks):
        tb = 1 << ti
        mm = m
        while mm:
            b = mm & -mm
            cover[b.bit_length() - 1] |= tb
            mm ^= b
    return cover


def _violates(inc, forb_idx, forb_masks):
    for fi in forb_idx:
        f = forb_masks[fi]
        if f & inc == f:
            return True
    return False


def _search(trace_masks, cover, forb_masks, forb_at, npoints,
            inc0, exc0, cov0, best0, deadline, first_only):
    """Core branch and bound.  Returns (best, best_inc, nodes, timed_out);
    best is the smallest solution size < best0 reached from this state, or
    best0 if none (best_inc None in that case)."""
    F = len(trace_masks)
    full = (1 << F) - 1
    nodes = 0
    best = best0
    best_inc = None
    timed = False
    bit_count = int.bit_count

    def rec(inc, exc, cov, k):
        nonlocal nodes, best, best_inc, timed
        nodes += 1
        if deadline is not None and nodes % 2048 == 0 and time.monotonic() > deadline:
            timed = True
        if timed:
            return
        if cov == full:
            if k < best:
                best = k
                best_inc = inc
            return
        und = ~(inc | exc)
        pack = 0
        acc = 0
        u = 0
        usable = 0
        sel_opts = 0
        sel_cnt = npoints + 1
        m = full & ~cov
        while m:
            b = m & -m
            m ^= b
            opts = trace_masks[b.bit_length() - 1] & und
            if not opts:
                return  # some trace can no longer be hit
            u += 1
            usable |= opts
            if not opts & acc:
                acc |= opts
                pack += 1
            c = bit_count(opts)
            if c < sel_cnt:
                sel_cnt = c
                sel_opts = opts
        if k + pack >= best:
            return
        rem = full & ~cov
        # counting bound with the degree restricted to uncovered traces
        delta = 1
        m = usable
        while m:
            b = m & -m
            m ^= b
            dc = bit_count(cover[b.bit_length() - 1] & rem)
            if dc > delta:
                delta = dc
        if k - (-u // delta) >= best:
            return
        pts = _mask_bits(sel_opts)
        if len(pts) > 1:
            pts.sort(key=lambda p: (-bit_count(cover[p] & rem), p))
        excl = 0
        for p in pts:
            pb = 1 << p
            inc2 = inc | pb
            if not (forb_at and _violates(inc2, forb_at[p], forb_masks)):
                rec(inc2, exc | excl, cov | cover[p], k + 1)
                if timed or (first_only and best_inc is not None):
                    return
            excl |= pb

    rec(inc0, exc0, cov0, inc0.bit_count())
    return best, best_inc, nodes, timed


def _greedy_incumbent(trace_masks, cover, forb_masks, forb_at, npoints):
    """Deterministic greedy cover + one minimalization pass; None when the
    forbidden constraints block the greedy path."""
    F = len(trace_masks)
    full = (1 << F) - 1
    inc = 0
    cov = 0
    while cov != full:
        best_gain = 0
        best_p = None
        for p in range(npoints):
            pb = 1 << p
            if inc & pb:
                continue
            if forb_at and _violates(inc | pb, forb_at[p], forb_masks):
                continue
            gain = (cover[p] & ~cov).bit_count()
            if gain > best_gain:
                best_gain = gain
                best_p = p
        if best_p is None:
            return None
        inc |= 1 << best_p
        cov |= cover[best_p]
    for p in reversed(_mask_bits(inc)):
        trimmed = inc & ~(1 << p)
        c = 0
        for b in _mask_bits(trimmed):
            c |= cover[b]
        if c == full:
            inc = trimmed
    return inc


def _phase1_task(payload):
    (trace_masks, cover, forb_masks, forb_at, npoints,
     inc, exc, cov, best0, budget) = payload
    deadline = time.monotonic() + budget if budget is not None else None
    best, best_inc, nodes, timed = _search(
        trace_masks, cover, forb_masks, forb_at, npoints,
        inc, exc, cov, best0, deadline, False)
    return best, nodes, timed


def _expand_once(state, trace_masks, cover, forb_masks, forb_at, npoints):
    """One include/exclude branching step under the same trace-selection
    rule as _search; returns child states (empty when the state is dead)
    or None when it is already fully covered."""
    inc, exc, cov = state
    full = (1 << len(trace_masks)) - 1
    if cov == full:
        return None
    und = ~(inc | exc)
    sel_opts = 0
    sel_cnt = npoints + 1
    m = full & ~cov
    while m:
        b = m & -m
        m ^= b
        opts = trace_masks[b.bit_length() - 1] & und
        if not opts:
            return []
        c = opts.bit_count()
        if c < sel_cnt:
            sel_cnt = c
            sel_opts = opts
    rem = full & ~cov
    pts = _mask_bits(sel_opts)
    if len(pts) > 1:
        pts.sort(key=lambda p: (-(cover[p] & rem).bit_count(), p))
    excl = 0
    out = []
    for p in pts:
        pb = 1 << p
        inc2 = inc | pb
        if not (forb_at and _violates(inc2, forb_at[p], forb_masks)):
            out.append((inc2, exc | excl, cov | cover[p]))
        excl |= pb
    return out


def _split_tasks(trace_masks, cover, forb_masks, forb_at, npoints, target):
    """Grow the branch frontier breadth-first until it holds at least
    `target` states (or stops growing).  The states partition the search
    space, so scanning them all is equivalent to one sequential run."""
    frontier = [(0, 0, 0)]
    while len(frontier) < target:
        grown = []
        progress = False
        for st in frontier:
            kids = _expand_once(st, trace_masks, cover, forb_masks, forb_at, npoints)
            if kids is None:
                grown.append(st)  # already a full cover, keep as a leaf task
            else:
                progress = True
                grown.extend(kids)
        frontier = grown
        if not progress or not frontier:
            break
    return frontier


def solve_masks(universe_size, trace_masks, forb_masks, size_cap=None,
                time_budget=None, workers=1):
    """Exact minimum over masks.  Returns (size or None, witness_mask or
    None, nodes).  witness_mask is the lexicographically least optimum
    (smallest bit indices first); None size means nothing <= cap."""
    start = time.monotonic()
    deadline = start + time_budget if time_budget is not None else None
    U = universe_size
    cap = U if size_cap is None else min(size_cap, U)
    cover = _cover_masks(len(trace_masks), trace_masks, U)
    if forb_masks:
        forb_at = [tuple(fi for fi, f in enumerate(forb_masks) if f >> p & 1)
                   for p in range(U)]
    else:
        forb_at = None
    nodes = 0

    best0 = cap + 1
    incumbent = _greedy_incumbent(trace_masks, cover, forb_masks, forb_at, U)
    if incumbent is not None and incumbent.bit_count() <= cap:
        best0 = incumbent.bit_count()
    else:
        incumbent = None

    branches = None
    if workers > 1 and U >= PARALLEL_MIN_UNIVERSE:
        branches = _split_tasks(trace_masks, cover, forb_masks, forb_at, U,
                                workers * 8)
    if branches and len(branches) > 1:
        budget = None if deadline is None else max(deadline - time.monotonic(), 0.01)
        payloads = [(trace_masks, cover, forb_masks, forb_at, U,
                     inc, exc, cov, best0, budget)
                    for inc, exc, cov in branches]
        best = best0
        timed = False
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for b, n, t in pool.map(_phase1_task, payloads, chunksize=1):
                nodes += n
                timed = timed or t
                if b < best:
                    best = b
        nodes += 1  # the root itself
        if timed:
            raise SearchTimeout("search exceeded its time budget",
                                nodes=nodes, elapsed=time.monotonic() - start)
    else:
        best, _inc, n1, timed = _search(
            trace_masks, cover, forb_masks, forb_at, U,
            0, 0, 0, best0, deadline, False)
        nodes += n1
        if timed:
            raise SearchTimeout("search exceeded its time budget",
                                nodes=nodes, elapsed=time.monotonic() - start)
        if _inc is not None:
            incumbent = _inc

    if best > cap and incumbent is None:
        return None, None, nodes
    s_star = min(best, best0)
    if s_star > cap:
        return None, None, nodes

    # Lexicographic refinement: fix witness elements smallest-first.
    if incumbent is None or incumbent.bit_count() != s_star:
        # the optimum came from the search; recover some witness at s_star
        _b, incumbent, n2, timed = _search(
            trace_masks, cover, forb_masks, forb_at, U,
            0, 0, 0, s_star + 1, deadline, True)
        nodes += n2
        if timed or incumbent is None:
            raise SearchTimeout("search exceeded its time budget",
                                nodes=nodes, elapsed=time.monotonic() - start)
    witness = sorted(_mask_bits(incumbent))
    full_mask = (1 << U) - 1
    prefix_mask = 0
    prefix_cov = 0
    prefix = []
    for pos in range(s_star):
        lo = prefix[-1] + 1 if prefix else 0
        for p in range(lo, witness[pos]):
            pb = 1 << p
            inc0 = prefix_mask | pb
            if forb_at and _violates(inc0, forb_at[p], forb_masks):
                continue
            allowed = inc0 | (full_mask & ~((pb << 1) - 1))
            exc0 = full_mask & ~allowed
            cov0 = prefix_cov | cover[p]
            _b, found, n3, timed = _search(
                trace_masks, cover, forb_masks, forb_at, U,
                inc0, exc0, cov0, s_star + 1, deadline, True)
            nodes += n3
            if timed:
                raise SearchTimeout("search exceeded its time budget",
                                    nodes=nodes, elapsed=time.monotonic() - start)
            if found is not None:
                witness = sorted(_mask_bits(found))
                break
        prefix.append(witness[pos])
        prefix_mask |= 1 << witness[pos]
        prefix_cov |= cover[witness[pos]]
    wmask = 0
    for p in witness:
        wmask |= 1 << p
    return s_star, wmask, nodes


def oracle_masks(universe_size, trace_masks, forb_masks, size_cap=None):
    """Independent route: plain subset enumeration, sizes ascending and
    combinations in lexicographic order, so the first hit is both minimum
    and lexicographically least.  Returns (size or None, witness_mask or
    None, subsets_checked)."""
    U = universe_size
    if size_cap is None:
        if U > ORACLE_FULL_CAP:
            raise UniverseTooLarge(
                "full enumeration over %d points; cap is %d" % (U, ORACLE_FULL_CAP))
        cap = U
    else:
        cap = min(size_cap, U)
    cover = _cover_masks(len(trace_masks), trace_masks, U)
    full = (1 << len(trace_masks)) - 1
    checked = 0
    for k in range(1, cap + 1):
        for combo in combinations(range(U), k):
            checked += 1
            cov = 0
            pm = 0
            for p in combo:
                cov |= cover[p]
                pm |= 1 << p
            if cov != full:
                continue
            if forb_masks and any(f & pm == f for f in forb_masks):
                continue
            return k, pm, checked
    return None, None, checked
