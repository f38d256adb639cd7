# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contract as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, uint8_t, int32_t

cnp.import_array()

BACKEND = "cython"

OP_AND, OP_XOR, OP_NOT, OP_CONST0, OP_CONST1 = 0, 1, 2, 3, 4


cdef inline uint64_t rotl(uint64_t x, int b) noexcept nogil:
    return (x << b) | (x >> (64 - b))


cdef inline void sipround(uint64_t* v) noexcept nogil:
    v[0] += v[1]; v[1] = rotl(v[1], 13); v[1] ^= v[0]; v[0] = rotl(v[0], 32)
    v[2] += v[3]; v[3] = rotl(v[3], 16); v[3] ^= v[2]
    v[0] += v[3]; v[3] = rotl(v[3], 21); v[3] ^= v[0]
    v[2] += v[1]; v[1] = rotl(v[1], 17); v[1] ^= v[2]; v[2] = rotl(v[2], 32)


cdef inline uint64_t sip_words(uint64_t k0, uint64_t k1, const uint64_t* m, int n) noexcept nogil:
    cdef uint64_t v[4]
    cdef int i
    v[0] = k0 ^ 0x736F6D6570736575ULL
    v[1] = k1 ^ 0x646F72616E646F6DULL
    v[2] = k0 ^ 0x6C7967656E657261ULL
    v[3] = k1 ^ 0x7465646279746573ULL
    for i in range(n):
        v[3] ^= m[i]
        sipround(v)
        sipround(v)
        v[0] ^= m[i]
    v[2] ^= 0xFF
    sipround(v); sipround(v); sipround(v); sipround(v)
    return v[0] ^ v[1] ^ v[2] ^ v[3]


cdef inline uint64_t prf(uint64_t k0, uint64_t k1, uint64_t a0, uint64_t a1,
                         uint64_t b0, uint64_t b1, uint64_t gate, uint64_t j) noexcept nogil:
    cdef uint64_t m[6]
    m[0] = a0; m[1] = a1; m[2] = b0; m[3] = b1
    m[4] = (gate << 8) | j
    m[5] = (<uint64_t>40) << 56
    return sip_words(k0, k1, m, 6)


def siphash24(k0, k1, data):
    cdef bytes buf = bytes(data)
    cdef Py_ssize_t n = len(buf), full = n - n % 8, i
    words = [int.from_bytes(buf[i:i + 8], "little") for i in range(0, full, 8)]
    words.append(int.from_bytes(buf[full:], "little") | ((n & 0xFF) << 56))
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] arr = np.array(words, dtype=np.uint64)
    return int(sip_words(<uint64_t>(k0 & 0xFFFFFFFFFFFFFFFF), <uint64_t>(k1 & 0xFFFFFFFFFFFFFFFF),
                         <uint64_t*>arr.data, len(words)))


def prf_word(k0, k1, a_lo, a_hi, b_lo, b_hi, gate, j):
    return int(prf(k0, k1, a_lo, a_hi, b_lo, b_hi, gate, j))


def row_layout(label_bits, tag_bits):
    if not 1 <= label_bits <= 128 or not 1 <= tag_bits <= 64:
        raise ValueError("label_bits must be in [1, 128] and tag_bits in [1, 64]")
    total = label_bits + tag_bits
    if total <= 64:
        return True, [(1 << total) - 1]
    masks = []
    rem = label_bits
    while rem > 0:
        take = min(rem, 64)
        masks.append((1 << take) - 1)
        rem -= take
    masks.append((1 << tag_bits) - 1)
    return False, masks


def garble_tables(ops, in_a, in_b, int n_inputs, labels, int label_bits, int tag_bits, k0, k1):
    packed_py, masks_py = row_layout(label_bits, tag_bits)
    cdef bint packed = packed_py
    cdef int nw = len(masks_py)
    cdef uint64_t mask[3]
    cdef int j
    for j in range(nw):
        mask[j] = <uint64_t>masks_py[j]
    cdef const uint8_t[:] op = np.ascontiguousarray(ops, dtype=np.uint8)
    cdef const int32_t[:] ia = np.ascontiguousarray(in_a, dtype=np.int32)
    cdef const int32_t[:] ib = np.ascontiguousarray(in_b, dtype=np.int32)
    cdef uint64_t[:, :, :] lab = labels
    cdef Py_ssize_t G = op.shape[0]
    tables = np.zeros((G, 4, nw), dtype=np.uint64)
    cdef uint64_t[:, :, :] tab = tables
    cdef uint64_t K0 = <uint64_t>k0, K1 = <uint64_t>k1
    cdef Py_ssize_t g, w, a, b
    cdef int va, vb, v, r, o
    cdef uint64_t pad
    with nogil:
        for g in range(G):
            o = op[g]
            w = n_inputs + g
            a = ia[g]
            if o == 2:
                lab[w, 0, 0] = lab[a, 1, 0]; lab[w, 0, 1] = lab[a, 1, 1]
                lab[w, 1, 0] = lab[a, 0, 0]; lab[w, 1, 1] = lab[a, 0, 1]
                continue
            if o != 0 and o != 1:
                continue
            b = ib[g]
            for va in range(2):
                for vb in range(2):
                    if o == 0:
                        v = va & vb
                    else:
                        v = va ^ vb
                    r = <int>(((lab[a, va, 0] & 1) << 1) | (lab[b, vb, 0] & 1))
                    if packed:
                        pad = prf(K0, K1, lab[a, va, 0], lab[a, va, 1], lab[b, vb, 0], lab[b, vb, 1], g, 0)
                        tab[g, r, 0] = (pad ^ lab[w, v, 0]) & mask[0]
                    else:
                        for j in range(nw):
                            pad = prf(K0, K1, lab[a, va, 0], lab[a, va, 1], lab[b, vb, 0], lab[b, vb, 1], g, j)
                            if j < nw - 1:
                                tab[g, r, j] = (pad ^ lab[w, v, j]) & mask[j]
                            else:
                                tab[g, r, j] = pad & mask[j]
    return tables


def eval_garbled(ops, in_a, in_b, int n_inputs, tables, const_labels, active,
                 int label_bits, int tag_bits, k0, k1):
    packed_py, masks_py = row_layout(label_bits, tag_bits)
    cdef bint packed = packed_py
    cdef int nw = len(masks_py)
    cdef uint64_t mask[3]
    cdef uint64_t word[3]
    cdef int j
    for j in range(nw):
        mask[j] = <uint64_t>masks_py[j]
    cdef const uint8_t[:] op = np.ascontiguousarray(ops, dtype=np.uint8)
    cdef const int32_t[:] ia = np.ascontiguousarray(in_a, dtype=np.int32)
    cdef const int32_t[:] ib = np.ascontiguousarray(in_b, dtype=np.int32)
    cdef const uint64_t[:, :, :] tab = np.ascontiguousarray(tables, dtype=np.uint64)
    cdef const uint64_t[:, :] cl = np.ascontiguousarray(const_labels, dtype=np.uint64)
    cdef uint64_t[:, :] act = active
    cdef Py_ssize_t G = op.shape[0]
    cdef uint64_t K0 = <uint64_t>k0, K1 = <uint64_t>k1
    cdef Py_ssize_t g, w, a, b
    cdef int r, o
    cdef uint64_t v
    cdef bint bad = 0
    with nogil:
        for g in range(G):
            o = op[g]
            w = n_inputs + g
            a = ia[g]
            if o == 2:
                act[w, 0] = act[a, 0]; act[w, 1] = act[a, 1]
                continue
            if o == 3 or o == 4:
                act[w, 0] = cl[g, 0]; act[w, 1] = cl[g, 1]
                continue
            b = ib[g]
            r = <int>(((act[a, 0] & 1) << 1) | (act[b, 0] & 1))
            if packed:
                v = (prf(K0, K1, act[a, 0], act[a, 1], act[b, 0], act[b, 1], g, 0) ^ tab[g, r, 0]) & mask[0]
                if v >> label_bits:
                    bad = 1
                    break
                act[w, 0] = v
                act[w, 1] = 0
            else:
                for j in range(nw):
                    word[j] = (prf(K0, K1, act[a, 0], act[a, 1], act[b, 0], act[b, 1], g, j) ^ tab[g, r, j]) & mask[j]
                if word[nw - 1] != 0:
                    bad = 1
                    break
                act[w, 0] = word[0]
                act[w, 1] = word[1] if nw == 3 else 0
    if bad:
        raise ValueError("invalid labels")
    return active


def compress_bits(x, mask, Py_ssize_t length):
    if not mask:
        return 0
    cdef Py_ssize_t nbytes = (length + 7) // 8
    cdef bytes xb = (x & ((<object>1 << length) - 1)).to_bytes(nbytes, "little")
    cdef bytes mb = mask.to_bytes(nbytes, "little")
    cdef const unsigned char* xp = xb
    cdef const unsigned char* mp = mb
    out = bytearray(nbytes)
    cdef unsigned char* op = out
    cdef Py_ssize_t i, k = 0
    cdef unsigned char mbyte, xbyte
    cdef int bit
    for i in range(nbytes):
        mbyte = mp[i]
        if not mbyte:
            continue
        xbyte = xp[i]
        for bit in range(8):
            if (mbyte >> bit) & 1:
                if (xbyte >> bit) & 1:
                    op[k >> 3] |= <unsigned char>(1 << (k & 7))
                k += 1
    return int.from_bytes(out, "little")


def gf_mul_small(a, b, modulus, int degree):
    cdef uint64_t A = a, B = b, M = modulus, R = 0
    cdef uint64_t top = (<uint64_t>1) << degree
    while B:
        if B & 1:
            R ^= A
        B >>= 1
        A <<= 1
        if A & top:
            A ^= M
    return int(R)


def toeplitz_rows(x, mask, seeds, int ell):
    cdef const uint8_t[:, :] X = np.ascontiguousarray(x, dtype=np.uint8)
    cdef const uint8_t[:, :] M = np.ascontiguousarray(mask, dtype=np.uint8)
    cdef const uint8_t[:, :] S = np.ascontiguousarray(seeds, dtype=np.uint8)
    cdef Py_ssize_t T = X.shape[0], m = X.shape[1], n = S.shape[1], t, i, j, rank
    out = np.zeros((T, ell), dtype=np.uint8)
    cdef uint8_t[:, :] O = out
    cdef uint64_t acc, w, bit
    cdef uint64_t[:] win
    if ell > 64:
        with nogil:
            for t in range(T):
                rank = 0
                for i in range(m):
                    if M[t, i]:
                        if X[t, i]:
                            for j in range(ell):
                                O[t, j] ^= S[t, rank + j]
                        rank += 1
        return out
    # win[p] packs seed bits p .. p+ell-1; one masked xor per input bit
    win = np.zeros(max(m, 1), dtype=np.uint64)
    with nogil:
        for t in range(T):
            w = 0
            for i in range(n - 1, -1, -1):
                w = (w << 1) | S[t, i]
                if ell < 64:
                    w &= ((<uint64_t>1) << ell) - 1
                if i < m:
                    win[i] = w
            acc = 0
            rank = 0
            for i in range(m):
                bit = <uint64_t>(X[t, i] & M[t, i] & 1)
                acc ^= win[rank] & (<uint64_t>0 - bit)
                rank += M[t, i] & 1
            for j in range(ell):
                O[t, j] = <uint8_t>((acc >> j) & 1)
    return out
