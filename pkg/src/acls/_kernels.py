"""Compiled inner loops for the streaming runs.

Each kernel advances one chunk of pre-drawn samples through the sequential
recursion, mutating the state vectors in place and logging excess risks at
the requested iteration indices.  The accelerated update is, per step,

    y_{t+1} = x_t - beta * g_t
    z_{t+1} = z_t - alpha * (t+1) * g_t
    x_{t+1} = ((t+1) y_{t+1} + z_{t+1}) / (t+2)

with g_t the oracle gradient at x_t.  Averaging accumulators: wsum holds
sum_t (t+1) x_t (weighted scheme, x_0 carrying weight 1), psum holds
sum_t x_t (uniform scheme), tsum holds the tail window when enabled.

Status codes returned by the kernels: 0 = ok, 1 = diverged (non-finite or
absurdly large excess risk at a log point; the log is truncated there).
"""

import numpy as np
from numba import njit

AVG_LAST = 0
AVG_WEIGHTED = 1
AVG_POLYAK = 2
AVG_TAIL = 3

DIVERGENCE_RISK = 1e12


@njit(cache=True)
def _quad_risk(H, xstar, v):
    d = v.shape[0]
    acc = 0.0
    for i in range(d):
        di = v[i] - xstar[i]
        row = 0.0
        for j in range(d):
            row += H[i, j] * (v[j] - xstar[j])
        acc += di * row
    return 0.5 * acc


@njit(cache=True)
def _avg_vector(out, x, wsum, psum, tsum, t, wtot, tail_start, avg_mode):
    d = x.shape[0]
    if avg_mode == AVG_WEIGHTED:
        for j in range(d):
            out[j] = wsum[j] / wtot
    elif avg_mode == AVG_POLYAK:
        for j in range(d):
            out[j] = psum[j] / (t + 1.0)
    elif avg_mode == AVG_TAIL and t >= tail_start:
        cnt = t - tail_start + 1.0
        for j in range(d):
            out[j] = tsum[j] / cnt
    else:
        for j in range(d):
            out[j] = x[j]


@njit(cache=True)
def acsgd_chunk(x, y, z, wsum, psum, tsum, A, bv, batch, t0, wtot0,
                alpha, beta, tail_start, log_ts, ptr0, H, xstar,
                out_last, out_avg, avg_mode):
    n_iters = A.shape[0] // batch
    d = x.shape[0]
    g = np.empty(d)
    av = np.empty(d)
    t = t0
    wtot = wtot0
    ptr = ptr0
    status = 0
    for k in range(n_iters):
        base = k * batch
        for j in range(d):
            g[j] = 0.0
        for i in range(batch):
            row = base + i
            q = 0.0
            for j in range(d):
                q += A[row, j] * x[j]
            r = q - bv[row]
            for j in range(d):
                g[j] += A[row, j] * r
        for j in range(d):
            g[j] /= batch
        tp1 = t + 1.0
        tp2 = t + 2.0
        for j in range(d):
            yj = x[j] - beta * g[j]
            z[j] = z[j] - alpha * tp1 * g[j]
            xj = (tp1 * yj + z[j]) / tp2
            y[j] = yj
            x[j] = xj
            wsum[j] += tp2 * xj
            psum[j] += xj
        wtot += tp2
        t += 1
        if tail_start >= 0 and t >= tail_start:
            for j in range(d):
                tsum[j] += x[j]
        if ptr < log_ts.shape[0] and t == log_ts[ptr]:
            rl = _quad_risk(H, xstar, x)
            _avg_vector(av, x, wsum, psum, tsum, t, wtot, tail_start,
                        avg_mode)
            ra = _quad_risk(H, xstar, av)
            out_last[ptr] = rl
            out_avg[ptr] = ra
            ptr += 1
            if not (np.isfinite(rl) and np.isfinite(ra)) \
                    or rl > DIVERGENCE_RISK or ra > DIVERGENCE_RISK:
                status = 1
                break
    return t, wtot, ptr, status


@njit(cache=True)
def sgd_chunk(x, wsum, psum, tsum, A, bv, batch, t0, wtot0, gamma,
              tail_start, log_ts, ptr0, H, xstar, out_last, out_avg,
              avg_mode):
    n_iters = A.shape[0] // batch
    d = x.shape[0]
    g = np.empty(d)
    av = np.empty(d)
    t = t0
    wtot = wtot0
    ptr = ptr0
    status = 0
    for k in range(n_iters):
        base = k * batch
        for j in range(d):
            g[j] = 0.0
        for i in range(batch):
            row = base + i
            q = 0.0
            for j in range(d):
                q += A[row, j] * x[j]
            r = q - bv[row]
            for j in range(d):
                g[j] += A[row, j] * r
        for j in range(d):
            g[j] /= batch
        tp2 = t + 2.0
        for j in range(d):
            xj = x[j] - gamma * g[j]
            x[j] = xj
            wsum[j] += tp2 * xj
            psum[j] += xj
        wtot += tp2
        t += 1
        if tail_start >= 0 and t >= tail_start:
            for j in range(d):
                tsum[j] += x[j]
        if ptr < log_ts.shape[0] and t == log_ts[ptr]:
            rl = _quad_risk(H, xstar, x)
            _avg_vector(av, x, wsum, psum, tsum, t, wtot, tail_start,
                        avg_mode)
            ra = _quad_risk(H, xstar, av)
            out_last[ptr] = rl
            out_avg[ptr] = ra
            ptr += 1
            if not (np.isfinite(rl) and np.isfinite(ra)) \
                    or rl > DIVERGENCE_RISK or ra > DIVERGENCE_RISK:
                status = 1
                break
    return t, wtot, ptr, status


@njit(cache=True)
def acsgd_running_average_chunk(x, y, z, wsum, psum, tsum, gram_sum,
                                cross_sum, A, bv, t0, wtot0, alpha, beta,
                                tail_start, log_ts, ptr0, H, xstar,
                                out_last, out_avg, avg_mode):
    n_iters = A.shape[0]
    d = x.shape[0]
    g = np.empty(d)
    av = np.empty(d)
    t = t0
    wtot = wtot0
    ptr = ptr0
    status = 0
    for k in range(n_iters):
        # ingest sample t into the O(d^2) sufficient statistics
        for i in range(d):
            ai = A[k, i]
            cross_sum[i] += bv[k] * ai
            for j in range(d):
                gram_sum[i, j] += ai * A[k, j]
        inv = 1.0 / (t + 1.0)
        for i in range(d):
            s = 0.0
            for j in range(d):
                s += gram_sum[i, j] * x[j]
            g[i] = (s - cross_sum[i]) * inv
        tp1 = t + 1.0
        tp2 = t + 2.0
        for j in range(d):
            yj = x[j] - beta * g[j]
            z[j] = z[j] - alpha * tp1 * g[j]
            xj = (tp1 * yj + z[j]) / tp2
            y[j] = yj
            x[j] = xj
            wsum[j] += tp2 * xj
            psum[j] += xj
        wtot += tp2
        t += 1
        if tail_start >= 0 and t >= tail_start:
            for j in range(d):
                tsum[j] += x[j]
        if ptr < log_ts.shape[0] and t == log_ts[ptr]:
            rl = _quad_risk(H, xstar, x)
            _avg_vector(av, x, wsum, psum, tsum, t, wtot, tail_start,
                        avg_mode)
            ra = _quad_risk(H, xstar, av)
            out_last[ptr] = rl
            out_avg[ptr] = ra
            ptr += 1
            if not (np.isfinite(rl) and np.isfinite(ra)) \
                    or rl > DIVERGENCE_RISK or ra > DIVERGENCE_RISK:
                status = 1
                break
    return t, wtot, ptr, status
