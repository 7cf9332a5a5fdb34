# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled closure kernels.  Same contract as ``clonekit._pykernels``."""

from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memcpy
from cpython.bytes cimport PyBytes_FromStringAndSize, PyBytes_AS_STRING

from clonekit.errors import CapacityError


cdef class _Engine:
    cdef int k
    cdef Py_ssize_t C
    cdef unsigned char *store
    cdef Py_ssize_t n_items
    cdef Py_ssize_t cap_items
    cdef Py_ssize_t limit
    cdef Py_ssize_t stop_at
    cdef bint stopped
    cdef dict index
    cdef set present
    cdef object escaped
    cdef int n_gens
    cdef int *arity
    cdef int **single
    cdef unsigned int **mask
    cdef int max_arity
    cdef int max_size
    cdef long *acc
    cdef unsigned char *buf
    cdef int *slot_of
    cdef int *free_idx
    cdef int *cell_slot
    cdef int *free_cells
    cdef int *vals
    cdef int *nvals
    cdef int *choice
    cdef Py_ssize_t *ctr
    cdef Py_ssize_t *lo
    cdef Py_ssize_t *hi

    def __cinit__(self, int k, Py_ssize_t C, gens):
        cdef int g, i, v, a, size
        cdef unsigned int m
        cdef Py_ssize_t c, cc = max(C, 1)
        self.k = k
        self.C = C
        self.store = NULL
        self.n_items = 0
        self.cap_items = 0
        self.index = {}
        self.present = set()
        self.n_gens = len(gens)
        self.arity = <int *> malloc(max(self.n_gens, 1) * sizeof(int))
        self.single = <int **> malloc(max(self.n_gens, 1) * sizeof(int *))
        self.mask = <unsigned int **> malloc(max(self.n_gens, 1) * sizeof(unsigned int *))
        self.max_arity = 1
        self.max_size = 1
        for g in range(self.n_gens):
            a, masks = gens[g]
            size = len(masks)
            self.arity[g] = a
            self.single[g] = <int *> malloc(size * sizeof(int))
            self.mask[g] = <unsigned int *> malloc(size * sizeof(unsigned int))
            for i in range(size):
                m = masks[i]
                self.mask[g][i] = m
                self.single[g][i] = -1
                if m != 0 and (m & (m - 1)) == 0:
                    v = 0
                    while not (m >> v) & 1:
                        v += 1
                    self.single[g][i] = v
            if a > self.max_arity:
                self.max_arity = a
            if size > self.max_size:
                self.max_size = size
        self.acc = <long *> malloc((self.max_arity + 1) * cc * sizeof(long))
        for c in range(cc):
            self.acc[c] = 0
        self.buf = <unsigned char *> malloc(cc)
        self.slot_of = <int *> malloc(self.max_size * sizeof(int))
        for i in range(self.max_size):
            self.slot_of[i] = -1
        self.free_idx = <int *> malloc(cc * sizeof(int))
        self.cell_slot = <int *> malloc(cc * sizeof(int))
        self.free_cells = <int *> malloc(cc * sizeof(int))
        self.vals = <int *> malloc(cc * k * sizeof(int))
        self.nvals = <int *> malloc(cc * sizeof(int))
        self.choice = <int *> malloc(cc * sizeof(int))
        self.ctr = <Py_ssize_t *> malloc(self.max_arity * sizeof(Py_ssize_t))
        self.lo = <Py_ssize_t *> malloc(self.max_arity * sizeof(Py_ssize_t))
        self.hi = <Py_ssize_t *> malloc(self.max_arity * sizeof(Py_ssize_t))

    def __dealloc__(self):
        cdef int g
        for g in range(self.n_gens):
            free(self.single[g])
            free(self.mask[g])
        free(self.arity)
        free(self.single)
        free(self.mask)
        free(self.store)
        free(self.acc)
        free(self.buf)
        free(self.slot_of)
        free(self.free_idx)
        free(self.cell_slot)
        free(self.free_cells)
        free(self.vals)
        free(self.nvals)
        free(self.choice)
        free(self.ctr)
        free(self.lo)
        free(self.hi)

    cdef int _append(self, const unsigned char *src) except -1:
        cdef Py_ssize_t new_cap
        cdef unsigned char *grown
        if self.n_items == self.cap_items:
            new_cap = 64 if self.cap_items == 0 else 2 * self.cap_items
            grown = <unsigned char *> realloc(self.store, new_cap * max(self.C, 1))
            if grown == NULL:
                raise MemoryError()
            self.store = grown
            self.cap_items = new_cap
        memcpy(self.store + self.n_items * self.C, src, self.C)
        self.n_items += 1
        return 0

    cdef int _add(self, bytes key) except -1:
        """Insert a trace; 1 if it was new."""
        if key in self.index:
            return 0
        self.index[key] = self.n_items
        self._append(<const unsigned char *> PyBytes_AS_STRING(key))
        if self.n_items > self.limit:
            raise CapacityError(self.n_items)
        if self.stop_at > 0 and self.n_items >= self.stop_at:
            self.stopped = True
        return 1

    cdef void _recompute(self, int a, int from_level):
        cdef int l
        cdef Py_ssize_t c, C = self.C
        cdef long k = self.k
        cdef unsigned char *row
        for l in range(from_level, a):
            row = self.store + self.ctr[l] * C
            for c in range(C):
                self.acc[(l + 1) * C + c] = self.acc[l * C + c] * k + row[c]

    cdef int _emit_images(self, int g, int a, bint escape_mode) except -1:
        """Emit every image of the current tuple; 1 if escape mode found one."""
        cdef Py_ssize_t c, C = self.C
        cdef long idx
        cdef int s, slot, nfree = 0, nfc = 0, v, t
        cdef unsigned int m
        cdef long *final = self.acc + a * C
        cdef int *single = self.single[g]
        cdef unsigned int *mask = self.mask[g]
        cdef bytes key
        for c in range(C):
            idx = final[c]
            s = single[idx]
            if s >= 0:
                self.buf[c] = <unsigned char> s
                self.cell_slot[c] = -1
            else:
                slot = self.slot_of[idx]
                if slot < 0:
                    slot = nfree
                    self.slot_of[idx] = slot
                    self.free_idx[slot] = <int> idx
                    m = mask[idx]
                    t = 0
                    for v in range(self.k):
                        if (m >> v) & 1:
                            self.vals[slot * self.k + t] = v
                            t += 1
                    self.nvals[slot] = t
                    self.choice[slot] = 0
                    nfree += 1
                self.cell_slot[c] = slot
                self.free_cells[nfc] = <int> c
                nfc += 1
        for slot in range(nfree):
            self.slot_of[self.free_idx[slot]] = -1
        while True:
            for t in range(nfc):
                c = self.free_cells[t]
                slot = self.cell_slot[c]
                self.buf[c] = <unsigned char> self.vals[slot * self.k + self.choice[slot]]
            key = PyBytes_FromStringAndSize(<char *> self.buf, C)
            if escape_mode:
                if key not in self.present:
                    self.escaped = key
                    return 1
            else:
                self._add(key)
                if self.stopped:
                    return 0
            slot = nfree - 1
            while slot >= 0:
                self.choice[slot] += 1
                if self.choice[slot] < self.nvals[slot]:
                    break
                self.choice[slot] = 0
                slot -= 1
            if slot < 0:
                return 0

    cdef int _run_ranges(self, int g, bint escape_mode) except -1:
        """Odometer over ``lo[q] <= ctr[q] < hi[q]``; 1 on escape."""
        cdef int a = self.arity[g]
        cdef int q
        for q in range(a):
            if self.lo[q] >= self.hi[q]:
                return 0
            self.ctr[q] = self.lo[q]
        self._recompute(a, 0)
        while True:
            if self._emit_images(g, a, escape_mode):
                return 1
            if self.stopped:
                return 0
            q = a - 1
            while q >= 0:
                self.ctr[q] += 1
                if self.ctr[q] < self.hi[q]:
                    break
                self.ctr[q] = self.lo[q]
                q -= 1
            if q < 0:
                return 0
            self._recompute(a, q)

    def close(self, init, Py_ssize_t limit, Py_ssize_t stop_at):
        cdef Py_ssize_t j, q
        cdef int g, a, p
        self.limit = limit
        self.stop_at = stop_at
        self.stopped = False
        for t in init:
            self._add(bytes(bytearray(t)))
            if self.stopped:
                return self._items()
        j = 0
        while j < self.n_items:
            for g in range(self.n_gens):
                a = self.arity[g]
                for p in range(a):
                    if p > 0 and j == 0:
                        continue
                    for q in range(a):
                        if q < p:
                            self.lo[q] = 0
                            self.hi[q] = j
                        elif q == p:
                            self.lo[q] = j
                            self.hi[q] = j + 1
                        else:
                            self.lo[q] = 0
                            self.hi[q] = j + 1
                    self._run_ranges(g, False)
                    if self.stopped:
                        return self._items()
            j += 1
        return self._items()

    def escape(self, rows):
        cdef int g, q
        self.limit = len(rows) + 1
        self.stop_at = 0
        self.stopped = False
        for t in rows:
            key = bytes(bytearray(t))
            if key not in self.present:
                self.present.add(key)
                self._append(<const unsigned char *> PyBytes_AS_STRING(key))
        for g in range(self.n_gens):
            for q in range(self.arity[g]):
                self.lo[q] = 0
                self.hi[q] = self.n_items
            if self._run_ranges(g, True):
                combo = tuple(self.ctr[q] for q in range(self.arity[g]))
                return g, combo, tuple(self.escaped)
        return None

    cdef list _items(self):
        cdef Py_ssize_t i
        cdef Py_ssize_t C = self.C
        out = []
        for i in range(self.n_items):
            out.append(tuple(self.store[i * C:(i + 1) * C]))
        return out


def close_traces(int k, init, gens, Py_ssize_t limit, Py_ssize_t stop_at=0):
    init = [tuple(t) for t in init]
    if not init:
        return []
    cdef Py_ssize_t C = len(init[0])
    if C == 0:
        return [()]
    if k > 256:
        raise ValueError("compiled kernel supports carriers up to 256")
    return _Engine(k, C, gens).close(init, limit, stop_at)


def first_escape(int k, rows, gens):
    rows = [tuple(r) for r in rows]
    if not rows:
        return None
    cdef Py_ssize_t C = len(rows[0])
    if C == 0:
        return None
    engine = _Engine(k, C, gens)
    hit = engine.escape(rows)
    if hit is None:
        return None
    g, combo, image = hit
    # report indices into the caller's row list
    distinct = list(dict.fromkeys(rows))
    position = {r: rows.index(r) for r in distinct}
    return g, tuple(position[distinct[i]] for i in combo), image
