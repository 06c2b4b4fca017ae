# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled signed unshuffle counting.  Same contract as ``_unshuffle_py``."""

from libc.stdlib cimport malloc, free


def signed_unshuffle_count(letters, odd, int k, content):
    cdef int n = len(letters)
    cdef int ngen = len(content)
    cdef int i, j, pos, crossings, seen, ok, need_total
    cdef long long total = 0
    if k < 0 or k > n:
        return 0
    need_total = 0
    for i in range(ngen):
        need_total += content[i]
    if need_total != k:
        return 0
    if k == 0:
        return 1

    cdef int *word = <int *> malloc(n * sizeof(int))
    cdef int *oddw = <int *> malloc(n * sizeof(int))
    cdef int *need = <int *> malloc(ngen * sizeof(int))
    cdef int *counts = <int *> malloc(ngen * sizeof(int))
    cdef int *idx = <int *> malloc(k * sizeof(int))
    if not word or not oddw or not need or not counts or not idx:
        free(word); free(oddw); free(need); free(counts); free(idx)
        raise MemoryError()
    try:
        for i in range(n):
            word[i] = letters[i]
            oddw[i] = 1 if odd[word[i]] else 0
        for i in range(ngen):
            need[i] = content[i]
        for i in range(k):
            idx[i] = i
        while True:
            for i in range(ngen):
                counts[i] = 0
            for i in range(k):
                counts[word[idx[i]]] += 1
            ok = 1
            for i in range(ngen):
                if counts[i] != need[i]:
                    ok = 0
                    break
            if ok:
                crossings = 0
                seen = 0
                j = 0
                for pos in range(n):
                    if j < k and idx[j] == pos:
                        j += 1
                        if oddw[pos]:
                            crossings += seen
                    elif oddw[pos]:
                        seen += 1
                if crossings & 1:
                    total -= 1
                else:
                    total += 1
            # next k-combination of range(n) in lexicographic order
            i = k - 1
            while i >= 0 and idx[i] == n - k + i:
                i -= 1
            if i < 0:
                break
            idx[i] += 1
            for j in range(i + 1, k):
                idx[j] = idx[j - 1] + 1
    finally:
        free(word); free(oddw); free(need); free(counts); free(idx)
    return total
