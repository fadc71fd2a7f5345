"""Gate-application kernels with two interchangeable backends.

Both backends operate in place on a flat complex128 amplitude array and
compute the same linear algebra:

* a numba-jitted backend (default when numba is importable), and
* a pure-numpy backend, selected by setting ``QGANSIM_NO_NUMBA=1`` in the
  environment or used automatically when numba is missing.

A k-qubit gate touching target bit positions ``tshifts`` (bit significances,
so position 0 is the least significant bit of the basis index) is applied by
enumerating every "representative" index whose target bits are all zero,
keeping those whose control bits are all one, and transforming the 2^k
amplitudes of each group with the gate matrix. ``offsets[g]`` is the index
offset of gate-basis state g relative to the representative.
"""

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and os.environ.get("QGANSIM_NO_NUMBA", "0") != "1"


def _np_expand(reps, tshifts_asc):
    # Insert a zero bit at each target position, ascending order required.
    for s in tshifts_asc:
        low = reps & ((1 << s) - 1)
        reps = ((reps >> s) << (s + 1)) | low
    return reps


def np_apply_dense(amps, mat, tshifts_asc, offsets, cmask):
    k = len(tshifts_asc)
    reps = np.arange(amps.size >> k, dtype=np.int64)
    reps = _np_expand(reps, tshifts_asc)
    if cmask:
        reps = reps[(reps & cmask) == cmask]
    if reps.size == 0:
        return
    idx = reps[None, :] + offsets[:, None]
    amps[idx] = mat @ amps[idx]


def np_apply_diag(amps, diag, tshifts_asc, offsets, cmask):
    k = len(tshifts_asc)
    reps = np.arange(amps.size >> k, dtype=np.int64)
    reps = _np_expand(reps, tshifts_asc)
    if cmask:
        reps = reps[(reps & cmask) == cmask]
    if reps.size == 0:
        return
    idx = reps[None, :] + offsets[:, None]
    amps[idx] *= diag[:, None]


if HAS_NUMBA:

    @njit(cache=True)
    def nb_apply_dense(amps, mat, tshifts_asc, offsets, cmask):
        k = tshifts_asc.size
        dim = offsets.size
        buf = np.empty(dim, np.complex128)
        out = np.empty(dim, np.complex128)
        for r in range(amps.size >> k):
            x = r
            for i in range(k):
                s = tshifts_asc[i]
                low = x & ((1 << s) - 1)
                x = ((x >> s) << (s + 1)) | low
            if (x & cmask) == cmask:
                for g in range(dim):
                    buf[g] = amps[x + offsets[g]]
                for row in range(dim):
                    acc = 0.0 + 0.0j
                    for col in range(dim):
                        acc += mat[row, col] * buf[col]
                    out[row] = acc
                for g in range(dim):
                    amps[x + offsets[g]] = out[g]

    @njit(cache=True)
    def nb_apply_diag(amps, diag, tshifts_asc, offsets, cmask):
        k = tshifts_asc.size
        dim = offsets.size
        for r in range(amps.size >> k):
            x = r
            for i in range(k):
                s = tshifts_asc[i]
                low = x & ((1 << s) - 1)
                x = ((x >> s) << (s + 1)) | low
            if (x & cmask) == cmask:
                for g in range(dim):
                    amps[x + offsets[g]] *= diag[g]


if USE_NUMBA:
    apply_dense = nb_apply_dense
    apply_diag = nb_apply_diag
    BACKEND = "numba"
else:
    apply_dense = np_apply_dense
    apply_diag = np_apply_diag
    BACKEND = "numpy"
