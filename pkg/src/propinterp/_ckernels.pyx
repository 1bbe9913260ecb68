# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled resolution kernels; same contract as ``_pykernels``.

Clause masks are held as fixed-width arrays of 64-bit words (``W`` words for
the positive mask followed by ``W`` for the negative mask).  Deduplication
uses a hash of the words with chaining through ``nxt``.
"""
from libc.stdint cimport uint64_t
from libcpp.vector cimport vector
from libcpp.unordered_map cimport unordered_map

from .errors import ResourceLimitError

cdef extern from *:
    """
    static inline int pi_clz64(unsigned long long x) { return __builtin_clzll(x); }
    """
    int pi_clz64(unsigned long long x) nogil

cdef uint64_t MASK64 = 0xFFFFFFFFFFFFFFFFULL


cdef class _Store:
    cdef int W
    cdef int S
    cdef vector[uint64_t] words
    cdef unordered_map[uint64_t, int] head
    cdef vector[int] nxt

    def __cinit__(self, int W):
        self.W = W
        self.S = 2 * W

    cdef inline uint64_t _hash(self, const uint64_t* c) nogil:
        cdef uint64_t h = 0x9E3779B97F4A7C15ULL
        cdef int i
        for i in range(self.S):
            h = (h ^ c[i]) * 0xBF58476D1CE4E5B9ULL
            h ^= h >> 31
        return h

    cdef int size(self) nogil:
        return <int>self.nxt.size()

    cdef int find(self, const uint64_t* c):
        cdef uint64_t h = self._hash(c)
        cdef int idx, i
        cdef bint same
        if self.head.count(h) == 0:
            return -1
        idx = self.head[h]
        while idx >= 0:
            same = True
            for i in range(self.S):
                if self.words[idx * self.S + i] != c[i]:
                    same = False
                    break
            if same:
                return idx
            idx = self.nxt[idx]
        return -1

    cdef int add(self, const uint64_t* c):
        cdef uint64_t h = self._hash(c)
        cdef int idx = <int>self.nxt.size()
        cdef int i
        for i in range(self.S):
            self.words.push_back(c[i])
        if self.head.count(h):
            self.nxt.push_back(self.head[h])
        else:
            self.nxt.push_back(-1)
        self.head[h] = idx
        return idx

    cdef void get(self, int idx, uint64_t* out):
        cdef int i
        for i in range(self.S):
            out[i] = self.words[idx * self.S + i]

    cdef object decode(self, int idx):
        cdef int w
        pos = 0
        neg = 0
        for w in range(self.W - 1, -1, -1):
            pos = (pos << 64) | self.words[idx * self.S + w]
            neg = (neg << 64) | self.words[idx * self.S + self.W + w]
        return (pos, neg)


cdef void _encode(object pos, object neg, int W, uint64_t* out):
    cdef int w
    for w in range(W):
        out[w] = <uint64_t>((pos >> (64 * w)) & MASK64)
        out[W + w] = <uint64_t>((neg >> (64 * w)) & MASK64)


cdef int _width(list clauses):
    cdef int bits = 1
    for pos, neg in clauses:
        bits = max(bits, (pos | neg).bit_length())
    return (bits + 63) // 64


cdef int _max_atom(const uint64_t* c, int W) nogil:
    cdef int w
    cdef uint64_t x
    for w in range(W - 1, -1, -1):
        x = c[w] | c[W + w]
        if x:
            return 64 * w + 63 - pi_clz64(x)
    return -1


def saturate(clauses, long step_limit):
    clauses = list(clauses)
    cdef int W = _width(clauses)
    cdef int S = 2 * W
    cdef _Store store = _Store(W)
    cdef vector[uint64_t] g
    cdef vector[uint64_t] h
    cdef vector[uint64_t] r
    g.resize(S)
    h.resize(S)
    r.resize(S)
    cdef int i, j, k, m, mw, gi, hi, idx, nin
    cdef uint64_t bit
    cdef bint positive, taut, empty
    cdef vector[vector[int]] buckets
    cdef vector[int] queue
    cdef vector[int] der
    cdef size_t qh = 0
    cdef long steps = 0

    for pos, neg in clauses:
        _encode(pos, neg, W, &r[0])
        store.add(&r[0])
        if not pos and not neg:
            return True, clauses, []
    nin = store.size()
    buckets.resize(2 * 64 * W)
    for i in range(nin):
        queue.push_back(i)

    while qh < queue.size():
        gi = queue[qh]
        qh += 1
        store.get(gi, &g[0])
        m = _max_atom(&g[0], W)
        mw = m // 64
        bit = (<uint64_t>1) << (m % 64)
        positive = (g[mw] & bit) != 0
        k = 2 * m + (0 if positive else 1)
        for j in range(<int>buckets[k ^ 1].size()):
            hi = buckets[k ^ 1][j]
            store.get(hi, &h[0])
            taut = False
            empty = True
            for i in range(S):
                r[i] = g[i] | h[i]
            r[mw] &= ~bit
            r[W + mw] &= ~bit
            for i in range(W):
                if r[i] & r[W + i]:
                    taut = True
                    break
                if r[i] | r[W + i]:
                    empty = False
            if taut:
                continue
            if store.find(&r[0]) >= 0:
                continue
            if steps >= step_limit:
                raise ResourceLimitError(f"resolution step limit {step_limit} exceeded")
            steps += 1
            idx = store.add(&r[0])
            if positive:
                der.push_back(gi)
                der.push_back(hi)
            else:
                der.push_back(hi)
                der.push_back(gi)
            der.push_back(m)
            if empty:
                return True, _collect(store, clauses, nin), _triples(der)
            queue.push_back(idx)
        buckets[k].push_back(gi)
    return False, _collect(store, clauses, nin), _triples(der)


cdef list _collect(_Store store, list inputs, int nin):
    cdef int i
    out = list(inputs)
    for i in range(nin, store.size()):
        out.append(store.decode(i))
    return out


cdef list _triples(vector[int]& der):
    cdef size_t i
    return [(der[i], der[i + 1], der[i + 2]) for i in range(0, der.size(), 3)]


def resolve_pivot(pos_side, neg_side, long clause_limit):
    pos_side = list(pos_side)
    neg_side = list(neg_side)
    if not pos_side or not neg_side:
        return []
    cdef int W = max(_width(pos_side), _width(neg_side))
    cdef int S = 2 * W
    cdef int np_ = len(pos_side)
    cdef int nn = len(neg_side)
    cdef vector[uint64_t] a
    cdef vector[uint64_t] b
    cdef vector[uint64_t] r
    a.resize(np_ * S)
    b.resize(nn * S)
    r.resize(S)
    cdef int i, j, w
    cdef bint taut
    for i, (pos, neg) in enumerate(pos_side):
        _encode(pos, neg, W, &a[i * S])
    for i, (pos, neg) in enumerate(neg_side):
        _encode(pos, neg, W, &b[i * S])
    cdef _Store store = _Store(W)
    for i in range(np_):
        for j in range(nn):
            taut = False
            for w in range(S):
                r[w] = a[i * S + w] | b[j * S + w]
            for w in range(W):
                if r[w] & r[W + w]:
                    taut = True
                    break
            if taut or store.find(&r[0]) >= 0:
                continue
            store.add(&r[0])
            if store.size() > clause_limit:
                raise ResourceLimitError(f"clause limit {clause_limit} exceeded")
    return [store.decode(i) for i in range(store.size())]
