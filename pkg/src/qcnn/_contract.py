"""Tensor contractions used by the state-vector and density-matrix engines.

All state layouts put wire 0 on the most significant bit of the basis index,
so after reshaping to (2,)*n the tensor axis of a wire equals its position
in the wire list.  Batch axes, if any, sit in front and ride through every
contraction via einsum ellipses.  Gate matrices may carry their own leading
batch axes (per-sample rotation angles).
"""
from __future__ import annotations

import numpy as np

_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def apply_to_vector(psi: np.ndarray, gate: np.ndarray, positions, n: int) -> np.ndarray:
    """psi: (..., 2**n). gate: (..., 2**m, 2**m) acting on the given wire
    positions (first position = high bit of the gate's sub-space)."""
    m = len(positions)
    batch = psi.shape[:-1]
    t = psi.reshape(batch + (2,) * n)
    g = np.asarray(gate)
    gt = g.reshape(g.shape[:-2] + (2,) * (2 * m))

    axis = list(_LETTERS[:n])
    fresh = iter(_LETTERS[n:])
    g_out, g_in, out_axis = [], [], list(axis)
    for k, p in enumerate(positions):
        lbl = next(fresh)
        g_out.append(lbl)
        g_in.append(axis[p])
        out_axis[p] = lbl
    expr = f"...{''.join(g_out + g_in)},...{''.join(axis)}->...{''.join(out_axis)}"
    t = np.einsum(expr, gt, t)
    return t.reshape(batch + (2**n,))


def apply_to_density(rho: np.ndarray, gate: np.ndarray, positions, n: int) -> np.ndarray:
    """rho -> U rho U^dagger.  rho: (..., 2**n, 2**n), gate as above."""
    m = len(positions)
    batch = rho.shape[:-2]
    t = rho.reshape(batch + (2,) * (2 * n))
    g = np.asarray(gate)
    gt = g.reshape(g.shape[:-2] + (2,) * (2 * m))

    axis = list(_LETTERS[: 2 * n])
    fresh = iter(_LETTERS[2 * n :])

    g_out, g_in, out_axis = [], [], list(axis)
    for p in positions:
        lbl = next(fresh)
        g_out.append(lbl)
        g_in.append(axis[p])
        out_axis[p] = lbl
    expr = f"...{''.join(g_out + g_in)},...{''.join(axis)}->...{''.join(out_axis)}"
    t = np.einsum(expr, gt, t)
    axis = out_axis

    # conj(U) contracted against the bra axes: rho'_{ab} = U_{ac} rho_{cd} conj(U_{bd})
    g_out, g_in, out_axis = [], [], list(axis)
    for p in positions:
        lbl = next(fresh)
        g_out.append(lbl)
        g_in.append(axis[n + p])
        out_axis[n + p] = lbl
    expr = f"...{''.join(g_out + g_in)},...{''.join(axis)}->...{''.join(out_axis)}"
    t = np.einsum(expr, np.conj(gt), t)

    return t.reshape(batch + (2**n, 2**n))


def trace_out(rho: np.ndarray, position: int, n: int) -> np.ndarray:
    """Partial trace of one wire position out of an n-wire density matrix."""
    batch = rho.shape[:-2]
    t = rho.reshape(batch + (2,) * (2 * n))
    axis = list(_LETTERS[: 2 * n])
    axis[n + position] = axis[position]
    out = [axis[i] for i in range(2 * n) if i != position and i != n + position]
    t = np.einsum(f"...{''.join(axis)}->...{''.join(out)}", t)
    d = 2 ** (n - 1)
    return t.reshape(batch + (d, d))


def density_prob_one(rho: np.ndarray, position: int, n: int) -> np.ndarray:
    """Probability of measuring 1 on one wire of an n-wire density matrix."""
    batch = rho.shape[:-2]
    t = rho.reshape(batch + (2,) * (2 * n))
    axis = list(_LETTERS[: 2 * n])
    for i in range(n):
        if i != position:
            axis[n + i] = axis[i]
    out = [axis[position], axis[n + position]]
    r = np.einsum(f"...{''.join(axis)}->...{''.join(out)}", t)
    p = r[..., 1, 1].real
    return np.clip(p, 0.0, 1.0)


def vector_prob_one(psi: np.ndarray, position: int, n: int) -> np.ndarray:
    """Probability of measuring 1 on one wire of an n-wire state vector."""
    batch = psi.shape[:-1]
    t = psi.reshape(batch + (2,) * n)
    s = np.take(t, 1, axis=len(batch) + position)
    mag = np.abs(s) ** 2
    axes = tuple(range(len(batch), mag.ndim))
    p = mag.sum(axis=axes) if axes else mag
    return np.clip(p, 0.0, 1.0)
