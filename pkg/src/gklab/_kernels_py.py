"""Pure-Python/numpy fallback for the hot kernels.

Same contracts as the compiled ``_kernels`` extension; used automatically
when the extension is unavailable (see ``backend``) and in the benchmark.
"""

import heapq
import math

import numpy as np

BACKEND_NAME = "pure"


def enumerate_products(step, y_root, count_target, mass_target, cap, want_indices):
    """Best-first enumeration of product eigenvalues in non-increasing order.

    See the compiled twin for the contract.
    """
    step = np.asarray(step, dtype=np.float64)
    d = step.shape[0]

    node_y = [float(y_root)]
    node_c = [d - 1]
    node_parent = [-1]
    node_inc = [-1]
    heap = [(node_y[0], 0)]

    out = []
    mass_sum = 0.0
    mass_comp = 0.0
    mass_now = 0.0
    hit_cap = False

    while heap:
        y, node = heapq.heappop(heap)
        out.append(node)
        v = math.exp(-y)
        t = mass_sum + v
        if abs(mass_sum) >= abs(v):
            mass_comp += (mass_sum - t) + v
        else:
            mass_comp += (v - t) + mass_sum
        mass_sum = t
        mass_now = mass_sum + mass_comp

        m = len(out)
        if count_target >= 0 and m >= count_target:
            break
        if mass_target >= 0.0 and mass_now >= mass_target:
            break
        if m >= cap:
            hit_cap = True
            break

        for i in range(node_c[node], -1, -1):
            child = len(node_y)
            node_y.append(y + step[i])
            node_c.append(i)
            node_parent.append(node)
            node_inc.append(i)
            heapq.heappush(heap, (node_y[child], child))
        if len(heap) > cap:
            hit_cap = True
            break

    y_out = np.array([node_y[n] for n in out], dtype=np.float64)

    indices = None
    if want_indices and out:
        indices = np.ones((len(out), d), dtype=np.int32)
        for r, node in enumerate(out):
            cur = node
            while node_parent[cur] >= 0:
                indices[r, node_inc[cur]] += 1
                cur = node_parent[cur]

    return y_out, mass_now, hit_cap, indices


def convolve_lattice(mass, log_count, shifts, probs, support_hi):
    """One dimension of the binned convolution (numpy shift-adds).

    Returns (new_mass, new_log_count, dropped_mass, dropped_log_count).
    """
    mass = np.asarray(mass, dtype=np.float64)
    log_count = np.asarray(log_count, dtype=np.float64)
    n = mass.shape[0]
    hi = min(int(support_hi), n)

    out_mass = np.zeros(n, dtype=np.float64)
    out_lc = np.full(n, -np.inf, dtype=np.float64)
    dropped_terms = []
    dropped_lcs = []

    for s, p in zip(shifts, probs):
        s = int(s)
        lim = min(hi, n - s) if s < n else 0
        if lim > 0:
            out_mass[s : s + lim] += p * mass[:lim]
            np.logaddexp(out_lc[s : s + lim], log_count[:lim], out=out_lc[s : s + lim])
        if lim < hi:
            dropped_terms.append(p * float(mass[lim:hi].sum()))
            tail = log_count[max(lim, 0) : hi]
            tail = tail[tail > -np.inf]
            if tail.size:
                dropped_lcs.append(float(np.logaddexp.reduce(tail)))

    dropped_mass = math.fsum(dropped_terms)
    dropped_lc = float(np.logaddexp.reduce(dropped_lcs)) if dropped_lcs else -np.inf
    return out_mass, out_lc, dropped_mass, dropped_lc
