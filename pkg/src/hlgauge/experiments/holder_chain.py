"""Reweighting that transfers an (r; p) bound to the (s; q) mixed norm.

For a nonnegative array ``a`` (think ``|T(x_j)|``) and
``1/s_k = 1/r - |1/p|_{>=k} + |1/q|_{>=k}``, the weights returned by
:func:`holder_chain_weights` satisfy

    ||a||_s * prod_k ||lam_k||_{t_k}  <=  ||a * lam_1 (x) ... (x) lam_m||_r,

with ``1/t_k = 1/p_k - 1/q_k``. Combined with Holder on weak norms,
``||(lam_j x_j)||_{w,p} <= ||lam||_t ||(x_j)||_{w,q}``, the reweighted
family ``(lam_k * x^k)_k`` has an (r; p) quotient at least as large as the
(s; q) quotient of the original family. Slot ``k`` is reweighted after
slots ``1..k-1``, measuring each slice in ``l_{s_{k+1}}`` over the earlier
indices and in ``l_{(s_{k+1}, ..., s_m)}`` over the later ones
(``s_{m+1} = r``).
"""

from __future__ import annotations

import numpy as np

from ..exponents import as_exponent, as_exponent_vector, schedule_inclusion
from ..tensor_norms import _nested_array


def holder_chain_weights(a, r, p, q) -> list[np.ndarray]:
    a = np.abs(np.asarray(a, dtype=float))
    r = as_exponent(r)
    p, q = as_exponent_vector(p), as_exponent_vector(q)
    sched = schedule_inclusion(r, p, q)
    if not sched.hypothesis_ok:
        raise ValueError(f"inclusion hypotheses fail: {', '.join(sched.violated_conditions)}")
    m = a.ndim
    s = sched.s.floats() + [float(r)]
    weights: list[np.ndarray] = []
    b = a.copy()
    for k in range(m):
        nxt = s[k + 1]
        exps = [nxt] * k + s[k + 1:m]
        slices = np.moveaxis(b, k, 0)
        nu = _nested_array(slices, exps) if exps else slices.copy()
        e = float((p[k].reciprocal - q[k].reciprocal) / sched.reciprocals[k])
        lam = np.ones_like(nu) if e == 0 else nu ** e
        weights.append(lam)
        shape = [1] * m
        shape[k] = -1
        b = b * lam.reshape(shape)
    return weights
