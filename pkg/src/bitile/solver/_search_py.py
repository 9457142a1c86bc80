"""Pure-Python search kernel (fallback for the compiled ``_search`` module).

State: remaining vertices per twin class and embedded components per type.
Each node picks the class with the fewest fitting placements and branches
on covering its lowest remaining vertex; in ``max`` mode a further branch
discards that vertex.  Both kernels take and return the same plain data.
"""

from __future__ import annotations

import time

DONE = 0
BUDGET = 1


class _OutOfBudget(Exception):
    pass


def search(class_sizes, pl_type, pl_cls, pl_cnt, type_size, mult, caps,
           factor_mode, node_limit, time_limit, split_mod=1, split_idx=0, sides=None):
    """Return ``(status, value, decisions, nodes)``.

    In factor mode ``value`` is 1 when a factor was found.  In max mode it
    is the number of complete pattern copies in the best packing found.

    ``sides = (pl_x, type_lo, type_hi, x_total, cls_nbrs, cls_is_x, type_dev)``
    enables two factor-mode bounds.  The X vertices left must be coverable
    by the components left, each of which puts between ``type_lo[t]`` and
    ``type_hi[t]`` into X.  And every component lands inside one connected
    piece of the free host, so the pieces' |X| - |Y| imbalances must sum to
    at most what the components left can absorb (``type_dev[t]`` each).
    """
    n_cls = len(class_sizes)
    n_types = len(type_size)
    n_pl = len(pl_type)
    rem = list(class_sizes)
    cnt = [0] * n_types
    by_class = [[] for _ in range(n_cls)]
    for p in range(n_pl):
        for c in pl_cls[p]:
            by_class[c].append(p)
    cap_copies = min(caps[t] // mult[t] for t in range(n_types)) if n_types else 0
    deadline = time.monotonic() + time_limit
    seen = set()
    path = []
    state = {"nodes": 0, "best": -1, "best_path": []}
    if sides is not None:
        pl_x, type_lo, type_hi, x_left, cls_nbrs, cls_is_x, type_dev = sides
        state["x"] = x_left

    def tick():
        state["nodes"] += 1
        if state["nodes"] > node_limit:
            raise _OutOfBudget
        if state["nodes"] & 1023 == 0 and time.monotonic() > deadline:
            raise _OutOfBudget

    def fits(p):
        t = pl_type[p]
        if cnt[t] >= caps[t]:
            return False
        for c, k in zip(pl_cls[p], pl_cnt[p]):
            if rem[c] < k:
                return False
        return True

    def choose():
        best_c, best_list = -1, None
        for c in range(n_cls):
            if rem[c] == 0:
                continue
            lst = [p for p in by_class[c] if fits(p)]
            if best_list is None or len(lst) < len(best_list):
                best_c, best_list = c, lst
                if not lst:
                    break
        return best_c, best_list

    def apply(p, sign):
        cnt[pl_type[p]] += sign
        for c, k in zip(pl_cls[p], pl_cnt[p]):
            rem[c] -= sign * k
        if sides is not None:
            state["x"] -= sign * pl_x[p]

    def sides_ok():
        if sides is None:
            return True
        lo = hi = dev = 0
        for t in range(n_types):
            left = caps[t] - cnt[t]
            lo += left * type_lo[t]
            hi += left * type_hi[t]
            dev += left * type_dev[t]
        if not lo <= state["x"] <= hi:
            return False
        return spread() <= dev

    def spread():
        """Sum over connected pieces of the free host of their side imbalance."""
        total = 0
        mark = [False] * n_cls
        for start in range(n_cls):
            if mark[start] or rem[start] == 0:
                continue
            mark[start] = True
            stack = [start]
            imbalance = 0
            while stack:
                c = stack.pop()
                imbalance += rem[c] if cls_is_x[c] else -rem[c]
                for b in cls_nbrs[c]:
                    if not mark[b] and rem[b]:
                        mark[b] = True
                        stack.append(b)
            total += abs(imbalance)
        return total

    def factor(depth):
        tick()
        if not sides_ok():
            return False
        c, options = choose()
        if c < 0:
            return True
        if not options:
            return False
        key = tuple(rem) + tuple(cnt)
        if key in seen:
            return False
        for i, p in enumerate(options):
            if depth == 0 and i % split_mod != split_idx:
                continue
            apply(p, 1)
            path.append(p)
            if factor(depth + 1):
                return True
            path.pop()
            apply(p, -1)
        seen.add(key)
        return False

    def copies_now():
        return min(cnt[t] // mult[t] for t in range(n_types))

    def upper_bound(current):
        left = sum(rem)
        k = current
        while k < cap_copies:
            need = 0
            for t in range(n_types):
                short = (k + 1) * mult[t] - cnt[t]
                if short > 0:
                    need += short * type_size[t]
            if need > left:
                break
            k += 1
        return k

    def maximise(depth):
        tick()
        value = copies_now()
        if value > state["best"]:
            state["best"] = value
            state["best_path"] = list(path)
        if upper_bound(value) <= state["best"]:
            return
        key = tuple(rem) + tuple(cnt)
        if key in seen:
            return
        c, options = choose()
        if c < 0:
            return
        branches = list(options) + [-(c + 1)]
        for i, p in enumerate(branches):
            if depth == 0 and i % split_mod != split_idx:
                continue
            if p >= 0:
                apply(p, 1)
            else:
                rem[c] -= 1
            path.append(p)
            maximise(depth + 1)
            path.pop()
            if p >= 0:
                apply(p, -1)
            else:
                rem[c] += 1
            if upper_bound(copies_now()) <= state["best"]:
                break
        # everything below is now bounded by the incumbent, so a revisit cannot improve it
        seen.add(key)

    status = DONE
    try:
        if factor_mode:
            found = factor(0)
            value = 1 if found else 0
            decisions = list(path) if found else []
        else:
            maximise(0)
    except _OutOfBudget:
        status = BUDGET
        value = 0
        decisions = []
    if not factor_mode:
        value = max(state["best"], 0)
        decisions = state["best_path"]
    return status, value, decisions, state["nodes"]
