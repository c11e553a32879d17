"""Pure numpy versions of the kernels in ``_kernels.pyx``.

Same signatures and in-place semantics; used when the extension is not built
or when ``QOSHOR_PURE_PYTHON`` is set.
"""
import numpy as np


def apply_1q(amps, bit, m00, m01, m10, m11):
    view = amps.reshape(-1, 2, 1 << bit)
    v0 = view[:, 0, :].copy()
    v1 = view[:, 1, :].copy()
    view[:, 0, :] = m00 * v0 + m01 * v1
    view[:, 1, :] = m10 * v0 + m11 * v1


def _pair_view(amps, bit_a, bit_b):
    lo, hi = min(bit_a, bit_b), max(bit_a, bit_b)
    return amps.reshape(-1, 2, 1 << (hi - lo - 1), 2, 1 << lo), lo, hi


def apply_cphase(amps, bit_a, bit_b, phase):
    view, _, _ = _pair_view(amps, bit_a, bit_b)
    view[:, 1, :, 1, :] *= phase


def apply_cnot(amps, control, target):
    view, lo, hi = _pair_view(amps, control, target)
    if control == hi:
        sub = view[:, 1]
        tmp = sub[:, :, 0, :].copy()
        sub[:, :, 0, :] = sub[:, :, 1, :]
        sub[:, :, 1, :] = tmp
    else:
        sub = view[:, :, :, 1, :]
        tmp = sub[:, 0].copy()
        sub[:, 0] = sub[:, 1]
        sub[:, 1] = tmp


def register_probabilities(amps, offset, width):
    p = (amps.real ** 2 + amps.imag ** 2).reshape(-1, 1 << width, 1 << offset)
    return p.sum(axis=(0, 2))


def gcd_trace_lengths(a_max, b_max, block=512):
    out = np.empty((a_max, b_max), dtype=np.int32)
    b_vals = np.arange(1, b_max + 1, dtype=np.int64)
    for start in range(1, a_max + 1, block):
        stop = min(start + block, a_max + 1)
        x = np.repeat(np.arange(start, stop, dtype=np.int64)[:, None], b_max, axis=1)
        y = np.broadcast_to(b_vals, x.shape).copy()
        count = np.ones(x.shape, dtype=np.int32)
        live = y != 0
        while live.any():
            xs, ys = x[live], y[live]
            x[live], y[live] = ys, xs % ys
            count[live] += 1
            live = y != 0
        out[start - 1:stop - 1] = count
    return out
