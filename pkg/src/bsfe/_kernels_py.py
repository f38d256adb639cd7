"""Pure-Python reference kernels.

Bit-exact twins of the routines in ``_kernels.pyx``.  ``bsfe.kernels``
picks the compiled module when it imports and falls back to this one.
"""

from itertools import compress

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF

OP_AND, OP_XOR, OP_NOT, OP_CONST0, OP_CONST1 = 0, 1, 2, 3, 4

BACKEND = "python"


def _rotl(x, b):
    return ((x << b) | (x >> (64 - b))) & MASK64


def _sipround(v0, v1, v2, v3):
    v0 = (v0 + v1) & MASK64
    v1 = _rotl(v1, 13) ^ v0
    v0 = _rotl(v0, 32)
    v2 = (v2 + v3) & MASK64
    v3 = _rotl(v3, 16) ^ v2
    v0 = (v0 + v3) & MASK64
    v3 = _rotl(v3, 21) ^ v0
    v2 = (v2 + v1) & MASK64
    v1 = _rotl(v1, 17) ^ v2
    v2 = _rotl(v2, 32)
    return v0, v1, v2, v3


def _sip_words(k0, k1, words, nbytes):
    v0 = k0 ^ 0x736F6D6570736575
    v1 = k1 ^ 0x646F72616E646F6D
    v2 = k0 ^ 0x6C7967656E657261
    v3 = k1 ^ 0x7465646279746573
    for m in words:
        v3 ^= m
        v0, v1, v2, v3 = _sipround(v0, v1, v2, v3)
        v0, v1, v2, v3 = _sipround(v0, v1, v2, v3)
        v0 ^= m
    return v0, v1, v2, v3


def _sip_finish(v0, v1, v2, v3):
    v2 ^= 0xFF
    for _ in range(4):
        v0, v1, v2, v3 = _sipround(v0, v1, v2, v3)
    return v0 ^ v1 ^ v2 ^ v3


def siphash24(k0, k1, data):
    """SipHash-2-4 of ``data`` under the 128-bit key ``(k0, k1)``."""
    data = bytes(data)
    n = len(data)
    full = n - n % 8
    words = [int.from_bytes(data[i:i + 8], "little") for i in range(0, full, 8)]
    last = int.from_bytes(data[full:], "little") | ((n & 0xFF) << 56)
    words.append(last)
    v0, v1, v2, v3 = _sip_words(k0 & MASK64, k1 & MASK64, words, n)
    return _sip_finish(v0, v1, v2, v3)


def prf_word(k0, k1, a_lo, a_hi, b_lo, b_hi, gate, j):
    # 40-byte message: five little-endian words, then the length block.
    words = (a_lo, a_hi, b_lo, b_hi, ((gate << 8) | j) & MASK64, 40 << 56)
    return _sip_finish(*_sip_words(k0, k1, words, 40))


def row_layout(label_bits, tag_bits):
    """Word masks of one garbled-table row.

    Returns ``(packed, masks)``.  Packed rows hold label and tag in one
    word; otherwise the label takes whole words and the tag its own word.
    """
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


def _encrypt_row(k0, k1, A, B, gate, out, packed, masks, label_bits):
    nw = len(masks)
    if packed:
        pad = prf_word(k0, k1, A[0], A[1], B[0], B[1], gate, 0)
        return [(pad ^ out[0]) & masks[0]]
    pt = [out[0], out[1]][: nw - 1] + [0]
    return [
        (prf_word(k0, k1, A[0], A[1], B[0], B[1], gate, j) ^ pt[j]) & masks[j]
        for j in range(nw)
    ]


def _decrypt_row(k0, k1, A, B, gate, ct, packed, masks, label_bits):
    if packed:
        v = (prf_word(k0, k1, A[0], A[1], B[0], B[1], gate, 0) ^ ct[0]) & masks[0]
        if v >> label_bits:
            return None
        return (v, 0)
    nw = len(masks)
    words = [
        (prf_word(k0, k1, A[0], A[1], B[0], B[1], gate, j) ^ int(ct[j])) & masks[j]
        for j in range(nw)
    ]
    if words[-1]:
        return None
    lab = words[:-1] + [0]
    return (lab[0], lab[1])


def garble_tables(ops, in_a, in_b, n_inputs, labels, label_bits, tag_bits, k0, k1):
    """Fill garbled tables for every binary gate.

    ``labels`` has shape (n_wires, 2, 2): wire, truth value, (lo, hi) word.
    NOT outputs are overwritten in place with the swapped input pair.
    Returns a uint64 array of shape (n_gates, 4, words_per_row).
    """
    packed, masks = row_layout(label_bits, tag_bits)
    nw = len(masks)
    ops_l = np.asarray(ops).tolist()
    a_l = np.asarray(in_a).tolist()
    b_l = np.asarray(in_b).tolist()
    lab = labels.tolist()
    tables = [[[0] * nw for _ in range(4)] for _ in range(len(ops_l))]
    for g, op in enumerate(ops_l):
        w = n_inputs + g
        if op == OP_NOT:
            src = lab[a_l[g]]
            lab[w] = [list(src[1]), list(src[0])]
            continue
        if op != OP_AND and op != OP_XOR:
            continue
        la, lb, lo = lab[a_l[g]], lab[b_l[g]], lab[w]
        rows = tables[g]
        for va in (0, 1):
            A = la[va]
            for vb in (0, 1):
                B = lb[vb]
                v = (va & vb) if op == OP_AND else (va ^ vb)
                r = ((A[0] & 1) << 1) | (B[0] & 1)
                rows[r] = _encrypt_row(k0, k1, A, B, g, lo[v], packed, masks, label_bits)
    labels[...] = np.array(lab, dtype=np.uint64)
    return np.array(tables, dtype=np.uint64).reshape(len(ops_l), 4, nw)


def eval_garbled(ops, in_a, in_b, n_inputs, tables, const_labels, active,
                 label_bits, tag_bits, k0, k1):
    """Propagate active labels through the garbled circuit.

    ``active`` has shape (n_wires, 2) with the input rows filled; the rest
    is written in place.  Raises ``ValueError("invalid labels")`` when a
    decrypted row fails its tag check.
    """
    packed, masks = row_layout(label_bits, tag_bits)
    ops_l = np.asarray(ops).tolist()
    a_l = np.asarray(in_a).tolist()
    b_l = np.asarray(in_b).tolist()
    act = active.tolist()
    consts = np.asarray(const_labels).tolist()
    for g, op in enumerate(ops_l):
        w = n_inputs + g
        if op == OP_NOT:
            act[w] = act[a_l[g]]
        elif op == OP_CONST0 or op == OP_CONST1:
            act[w] = consts[g]
        else:
            A, B = act[a_l[g]], act[b_l[g]]
            r = ((A[0] & 1) << 1) | (B[0] & 1)
            got = _decrypt_row(k0, k1, A, B, g, tables[g][r].tolist(), packed, masks, label_bits)
            if got is None:
                raise ValueError("invalid labels")
            act[w] = list(got)
    active[...] = np.array(act, dtype=np.uint64)
    return active


def compress_bits(x, mask, length):
    """Gather the bits of ``x`` at the set positions of ``mask`` (pext)."""
    if not mask:
        return 0
    xs = format(x & ((1 << length) - 1), "0%db" % length)[::-1]
    ms = format(mask, "0%db" % length)[::-1]
    picked = "".join(compress(xs, map("1".__eq__, ms)))
    return int(picked[::-1], 2) if picked else 0


def gf_mul_small(a, b, modulus, degree):
    """Multiply in GF(2)[x]/modulus for degree <= 32."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if (a >> degree) & 1:
            a ^= modulus
    return r


def toeplitz_rows(x, mask, seeds, ell):
    """Row-wise Toeplitz hash of the bits of ``x`` selected by ``mask``.

    Row t hashes the compressed vector ``x[t, mask[t]]`` with the seed
    prefix ``seeds[t, :count + ell - 1]``; output bit j is the parity of
    ``seed[j + k] & input[k]``.  Returns (T, ell) uint8.
    """
    T, m = x.shape
    mask = np.asarray(mask).astype(bool)
    rank = np.cumsum(mask, axis=1) - 1
    rank[~mask] = 0
    sel = (x & mask).astype(np.uint8)
    rows = np.arange(T)[:, None]
    out = np.empty((T, ell), dtype=np.uint8)
    for j in range(ell):
        out[:, j] = np.bitwise_xor.reduce(seeds[rows, rank + j] & sel, axis=1)
    return out
