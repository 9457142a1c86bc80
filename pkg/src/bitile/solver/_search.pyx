# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernel; same contract as ``_search_py.search``."""

from libc.stdlib cimport malloc, free
from libc.string cimport memset
from cpython.bytes cimport PyBytes_FromStringAndSize

import time

DONE = 0
BUDGET = 1


cdef class _Kernel:
    cdef int n_cls, n_types, n_pl, split_mod, split_idx, cap_copies
    cdef long long nodes, node_limit
    cdef double deadline
    cdef bint out_of_budget
    cdef int *state          # rem[0:n_cls] then cnt[0:n_types]
    cdef int *pl_type
    cdef int *pl_start       # CSR over (class, count) pairs per placement
    cdef int *pl_cls
    cdef int *pl_cnt
    cdef int *cls_start      # CSR over placements per class
    cdef int *cls_pl
    cdef int *type_size
    cdef int *mult
    cdef int *caps
    cdef int *optbuf
    cdef int *pl_x
    cdef int *type_lo
    cdef int *type_hi
    cdef int *type_dev
    cdef int *nb_start       # CSR over neighbouring classes per class
    cdef int *nb_cls
    cdef char *is_x
    cdef int *stack
    cdef char *mark
    cdef int x_left
    cdef bint use_sides
    cdef int *path
    cdef int depth_cap
    cdef int path_len
    cdef int best
    cdef list best_path
    cdef set seen

    def __cinit__(self):
        self.state = NULL
        self.pl_type = NULL
        self.pl_start = NULL
        self.pl_cls = NULL
        self.pl_cnt = NULL
        self.cls_start = NULL
        self.cls_pl = NULL
        self.type_size = NULL
        self.mult = NULL
        self.caps = NULL
        self.optbuf = NULL
        self.path = NULL
        self.pl_x = NULL
        self.type_lo = NULL
        self.type_hi = NULL
        self.type_dev = NULL
        self.nb_start = NULL
        self.nb_cls = NULL
        self.is_x = NULL
        self.stack = NULL
        self.mark = NULL

    def __dealloc__(self):
        free(self.state); free(self.pl_type); free(self.pl_start); free(self.pl_cls)
        free(self.pl_cnt); free(self.cls_start); free(self.cls_pl); free(self.type_size)
        free(self.mult); free(self.caps); free(self.optbuf); free(self.path)
        free(self.pl_x); free(self.type_lo); free(self.type_hi); free(self.type_dev)
        free(self.nb_start); free(self.nb_cls); free(self.is_x); free(self.stack); free(self.mark)

    def setup(self, class_sizes, pl_type, pl_cls, pl_cnt, type_size, mult, caps,
              long long node_limit, double time_limit, int split_mod, int split_idx, sides=None):
        cdef int i, c, p, k, total_pairs, total_vertices
        self.n_cls = len(class_sizes)
        self.n_types = len(type_size)
        self.n_pl = len(pl_type)
        self.node_limit = node_limit
        self.deadline = time.monotonic() + time_limit
        self.split_mod = split_mod
        self.split_idx = split_idx
        self.nodes = 0
        self.out_of_budget = False
        self.best = -1
        self.best_path = []
        self.seen = set()

        self.state = <int *> malloc((self.n_cls + self.n_types + 1) * sizeof(int))
        memset(self.state, 0, (self.n_cls + self.n_types + 1) * sizeof(int))
        total_vertices = 0
        for c in range(self.n_cls):
            self.state[c] = class_sizes[c]
            total_vertices += class_sizes[c]

        self.type_size = <int *> malloc((self.n_types + 1) * sizeof(int))
        self.mult = <int *> malloc((self.n_types + 1) * sizeof(int))
        self.caps = <int *> malloc((self.n_types + 1) * sizeof(int))
        self.cap_copies = 0
        for i in range(self.n_types):
            self.type_size[i] = type_size[i]
            self.mult[i] = mult[i]
            self.caps[i] = caps[i]
            k = caps[i] // mult[i]
            if i == 0 or k < self.cap_copies:
                self.cap_copies = k

        total_pairs = 0
        for p in range(self.n_pl):
            total_pairs += len(pl_cls[p])
        self.pl_type = <int *> malloc((self.n_pl + 1) * sizeof(int))
        self.pl_start = <int *> malloc((self.n_pl + 1) * sizeof(int))
        self.pl_cls = <int *> malloc((total_pairs + 1) * sizeof(int))
        self.pl_cnt = <int *> malloc((total_pairs + 1) * sizeof(int))
        self.cls_start = <int *> malloc((self.n_cls + 1) * sizeof(int))
        self.cls_pl = <int *> malloc((total_pairs + 1) * sizeof(int))
        memset(self.cls_start, 0, (self.n_cls + 1) * sizeof(int))
        k = 0
        for p in range(self.n_pl):
            self.pl_type[p] = pl_type[p]
            self.pl_start[p] = k
            for i in range(len(pl_cls[p])):
                self.pl_cls[k] = pl_cls[p][i]
                self.pl_cnt[k] = pl_cnt[p][i]
                self.cls_start[self.pl_cls[k] + 1] += 1
                k += 1
        self.pl_start[self.n_pl] = k
        for c in range(self.n_cls):
            self.cls_start[c + 1] += self.cls_start[c]
        fill = [self.cls_start[c] for c in range(self.n_cls)]
        for p in range(self.n_pl):
            for i in range(self.pl_start[p], self.pl_start[p + 1]):
                c = self.pl_cls[i]
                self.cls_pl[fill[c]] = p
                fill[c] += 1

        self.use_sides = sides is not None
        self.pl_x = <int *> malloc((self.n_pl + 1) * sizeof(int))
        self.type_lo = <int *> malloc((self.n_types + 1) * sizeof(int))
        self.type_hi = <int *> malloc((self.n_types + 1) * sizeof(int))
        self.type_dev = <int *> malloc((self.n_types + 1) * sizeof(int))
        self.nb_start = <int *> malloc((self.n_cls + 1) * sizeof(int))
        self.is_x = <char *> malloc((self.n_cls + 1) * sizeof(char))
        self.stack = <int *> malloc((self.n_cls + 1) * sizeof(int))
        self.mark = <char *> malloc((self.n_cls + 1) * sizeof(char))
        self.x_left = 0
        if self.use_sides:
            for p in range(self.n_pl):
                self.pl_x[p] = sides[0][p]
            for i in range(self.n_types):
                self.type_lo[i] = sides[1][i]
                self.type_hi[i] = sides[2][i]
                self.type_dev[i] = sides[6][i]
            self.x_left = sides[3]
            nbrs = sides[4]
            k = sum(len(row) for row in nbrs)
            self.nb_cls = <int *> malloc((k + 1) * sizeof(int))
            k = 0
            for c in range(self.n_cls):
                self.nb_start[c] = k
                self.is_x[c] = 1 if sides[5][c] else 0
                for i in nbrs[c]:
                    self.nb_cls[k] = i
                    k += 1
            self.nb_start[self.n_cls] = k

        self.depth_cap = total_vertices + 2
        self.optbuf = <int *> malloc((<long long> self.depth_cap * (self.n_pl + 1) + 1) * sizeof(int))
        self.path = <int *> malloc((self.depth_cap + 1) * sizeof(int))
        self.path_len = 0

    cdef inline bint tick(self):
        self.nodes += 1
        if self.nodes > self.node_limit:
            self.out_of_budget = True
        elif (self.nodes & 1023) == 0 and time.monotonic() > self.deadline:
            self.out_of_budget = True
        return self.out_of_budget

    cdef inline bint fits(self, int p):
        cdef int t = self.pl_type[p]
        cdef int i
        if self.state[self.n_cls + t] >= self.caps[t]:
            return False
        for i in range(self.pl_start[p], self.pl_start[p + 1]):
            if self.state[self.pl_cls[i]] < self.pl_cnt[i]:
                return False
        return True

    cdef int choose(self, int *opts, int *n_opts):
        """Most constrained class; its fitting placements go to ``opts``."""
        cdef int c, i, count, best_c = -1, best_count = -1
        for c in range(self.n_cls):
            if self.state[c] == 0:
                continue
            count = 0
            for i in range(self.cls_start[c], self.cls_start[c + 1]):
                if self.fits(self.cls_pl[i]):
                    count += 1
            if best_c < 0 or count < best_count:
                best_c = c
                best_count = count
                if count == 0:
                    break
        n_opts[0] = 0
        if best_c < 0:
            return -1
        for i in range(self.cls_start[best_c], self.cls_start[best_c + 1]):
            if self.fits(self.cls_pl[i]):
                opts[n_opts[0]] = self.cls_pl[i]
                n_opts[0] += 1
        return best_c

    cdef inline void apply(self, int p, int sign):
        cdef int i
        self.state[self.n_cls + self.pl_type[p]] += sign
        for i in range(self.pl_start[p], self.pl_start[p + 1]):
            self.state[self.pl_cls[i]] -= sign * self.pl_cnt[i]
        if self.use_sides:
            self.x_left -= sign * self.pl_x[p]

    cdef inline bint sides_ok(self):
        cdef int t, left, lo = 0, hi = 0, dev = 0
        if not self.use_sides:
            return True
        for t in range(self.n_types):
            left = self.caps[t] - self.state[self.n_cls + t]
            lo += left * self.type_lo[t]
            hi += left * self.type_hi[t]
            dev += left * self.type_dev[t]
        if not lo <= self.x_left <= hi:
            return False
        return self.spread() <= dev

    cdef int spread(self):
        """Sum over connected pieces of the free host of their side imbalance."""
        cdef int start, c, b, i, top, imbalance, total = 0
        memset(self.mark, 0, self.n_cls * sizeof(char))
        for start in range(self.n_cls):
            if self.mark[start] or self.state[start] == 0:
                continue
            self.mark[start] = 1
            self.stack[0] = start
            top = 1
            imbalance = 0
            while top:
                top -= 1
                c = self.stack[top]
                imbalance += self.state[c] if self.is_x[c] else -self.state[c]
                for i in range(self.nb_start[c], self.nb_start[c + 1]):
                    b = self.nb_cls[i]
                    if not self.mark[b] and self.state[b]:
                        self.mark[b] = 1
                        self.stack[top] = b
                        top += 1
            total += imbalance if imbalance >= 0 else -imbalance
        return total

    cdef bytes key(self):
        return PyBytes_FromStringAndSize(<char *> self.state, (self.n_cls + self.n_types) * sizeof(int))

    cdef int factor(self, int depth):
        """1 found, 0 exhausted, -1 out of budget."""
        cdef int c, i, p, n_opts, res
        cdef int *opts = self.optbuf + <long long> depth * (self.n_pl + 1)
        cdef bytes k
        if self.tick():
            return -1
        if not self.sides_ok():
            return 0
        c = self.choose(opts, &n_opts)
        if c < 0:
            return 1
        if n_opts == 0:
            return 0
        k = self.key()
        if k in self.seen:
            return 0
        for i in range(n_opts):
            if depth == 0 and i % self.split_mod != self.split_idx:
                continue
            p = opts[i]
            self.apply(p, 1)
            self.path[self.path_len] = p
            self.path_len += 1
            res = self.factor(depth + 1)
            if res != 0:
                return res
            self.path_len -= 1
            self.apply(p, -1)
        self.seen.add(k)
        return 0

    cdef int copies_now(self):
        cdef int t, v, best = -1
        for t in range(self.n_types):
            v = self.state[self.n_cls + t] // self.mult[t]
            if best < 0 or v < best:
                best = v
        return best

    cdef int upper_bound(self, int current):
        cdef int left = 0, c, t, k = current, short, need
        for c in range(self.n_cls):
            left += self.state[c]
        while k < self.cap_copies:
            need = 0
            for t in range(self.n_types):
                short = (k + 1) * self.mult[t] - self.state[self.n_cls + t]
                if short > 0:
                    need += short * self.type_size[t]
            if need > left:
                break
            k += 1
        return k

    cdef int maximise(self, int depth):
        """0 normally, -1 when out of budget."""
        cdef int value, c, i, p, n_opts, n_branch
        cdef int *opts = self.optbuf + <long long> depth * (self.n_pl + 1)
        cdef bytes k
        if self.tick():
            return -1
        value = self.copies_now()
        if value > self.best:
            self.best = value
            self.best_path = [self.path[i] for i in range(self.path_len)]
        if self.upper_bound(value) <= self.best:
            return 0
        k = self.key()
        if k in self.seen:
            return 0
        c = self.choose(opts, &n_opts)
        if c < 0:
            return 0
        opts[n_opts] = -(c + 1)
        n_branch = n_opts + 1
        for i in range(n_branch):
            if depth == 0 and i % self.split_mod != self.split_idx:
                continue
            p = opts[i]
            if p >= 0:
                self.apply(p, 1)
            else:
                self.state[c] -= 1
            self.path[self.path_len] = p
            self.path_len += 1
            if self.maximise(depth + 1) < 0:
                return -1
            self.path_len -= 1
            if p >= 0:
                self.apply(p, -1)
            else:
                self.state[c] += 1
            if self.upper_bound(self.copies_now()) <= self.best:
                break
        self.seen.add(k)
        return 0

    def run(self, bint factor_mode):
        cdef int res
        cdef int i
        if factor_mode:
            res = self.factor(0)
            if res < 0:
                return BUDGET, 0, [], self.nodes
            if res == 1:
                return DONE, 1, [self.path[i] for i in range(self.path_len)], self.nodes
            return DONE, 0, [], self.nodes
        res = self.maximise(0)
        status = BUDGET if res < 0 else DONE
        return status, max(self.best, 0), list(self.best_path), self.nodes


def search(class_sizes, pl_type, pl_cls, pl_cnt, type_size, mult, caps,
           factor_mode, node_limit, time_limit, split_mod=1, split_idx=0, sides=None):
    kernel = _Kernel()
    kernel.setup(class_sizes, pl_type, pl_cls, pl_cnt, type_size, mult, caps,
                 min(int(node_limit), 2 ** 62), float(time_limit), int(split_mod), int(split_idx),
                 sides)
    return kernel.run(bool(factor_mode))
