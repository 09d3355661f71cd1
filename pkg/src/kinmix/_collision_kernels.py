"""Compiled inner loops for the strong-form collision quadrature.

Kept separate from collision_ops so the jitted code stays free of Python
object plumbing. All loops run in a fixed serial order; output nodes are
written exactly once, so results are bit-stable.
"""
import numpy as np
from numba import njit


@njit(cache=True)
def q_pair_2d(fp, fq, ax, dv, mp, mq, sig, wsig, cgam, gam, out):
    # out[a,b] = sum_{v*} sum_sigma w_{v*} w_sig B(|v-v*|) [fp(v')fq(v*') - fp(v)fq(v*)]
    # post-collision values by bilinear interpolation, zero outside the node hull
    n = ax.shape[0]
    lo = ax[0]
    ns = sig.shape[0]
    M = mp + mq
    rq = mq / M
    rp = mp / M
    w_vstar = dv * dv
    for a in range(n):
        va0 = ax[a]
        for b in range(n):
            vb0 = ax[b]
            fpv = fp[a, b]
            acc = 0.0
            for c in range(n):
                ux = va0 - ax[c]
                for e in range(n):
                    uy = vb0 - ax[e]
                    fqv = fq[c, e]
                    r = np.sqrt(ux * ux + uy * uy)
                    if gam == 0.0:
                        B = cgam
                    elif gam == 1.0:
                        B = cgam * r
                    else:
                        B = cgam * r**gam
                    Vx = rp * va0 + rq * ax[c]
                    Vy = rp * vb0 + rq * ax[e]
                    loss = fpv * fqv
                    for s in range(ns):
                        vpx = Vx + rq * r * sig[s, 0]
                        vpy = Vy + rq * r * sig[s, 1]
                        vsx = Vx - rp * r * sig[s, 0]
                        vsy = Vy - rp * r * sig[s, 1]
                        x = (vpx - lo) / dv
                        y = (vpy - lo) / dv
                        i0 = int(np.floor(x))
                        j0 = int(np.floor(y))
                        tx = x - i0
                        ty = y - j0
                        g1 = 0.0
                        if -1 <= i0 < n and -1 <= j0 < n:
                            if i0 >= 0 and j0 >= 0:
                                g1 += fp[i0, j0] * (1.0 - tx) * (1.0 - ty)
                            if i0 + 1 < n and j0 >= 0:
                                g1 += fp[i0 + 1, j0] * tx * (1.0 - ty)
                            if i0 >= 0 and j0 + 1 < n:
                                g1 += fp[i0, j0 + 1] * (1.0 - tx) * ty
                            if i0 + 1 < n and j0 + 1 < n:
                                g1 += fp[i0 + 1, j0 + 1] * tx * ty
                        x = (vsx - lo) / dv
                        y = (vsy - lo) / dv
                        i0 = int(np.floor(x))
                        j0 = int(np.floor(y))
                        tx = x - i0
                        ty = y - j0
                        g2 = 0.0
                        if -1 <= i0 < n and -1 <= j0 < n:
                            if i0 >= 0 and j0 >= 0:
                                g2 += fq[i0, j0] * (1.0 - tx) * (1.0 - ty)
                            if i0 + 1 < n and j0 >= 0:
                                g2 += fq[i0 + 1, j0] * tx * (1.0 - ty)
                            if i0 >= 0 and j0 + 1 < n:
                                g2 += fq[i0, j0 + 1] * (1.0 - tx) * ty
                            if i0 + 1 < n and j0 + 1 < n:
                                g2 += fq[i0 + 1, j0 + 1] * tx * ty
                        acc += wsig[s] * B * (g1 * g2 - loss)
            out[a, b] = acc * w_vstar


@njit(cache=True, inline="always")
def _interp3(f, x, y, z, n):
    # trilinear, corner-guarded, zero outside hull
    i0 = int(np.floor(x))
    j0 = int(np.floor(y))
    k0 = int(np.floor(z))
    if i0 < -1 or i0 >= n or j0 < -1 or j0 >= n or k0 < -1 or k0 >= n:
        return 0.0
    tx = x - i0
    ty = y - j0
    tz = z - k0
    g = 0.0
    if i0 >= 0 and j0 >= 0 and k0 >= 0:
        g += f[i0, j0, k0] * (1 - tx) * (1 - ty) * (1 - tz)
    if i0 + 1 < n and j0 >= 0 and k0 >= 0:
        g += f[i0 + 1, j0, k0] * tx * (1 - ty) * (1 - tz)
    if i0 >= 0 and j0 + 1 < n and k0 >= 0:
        g += f[i0, j0 + 1, k0] * (1 - tx) * ty * (1 - tz)
    if i0 >= 0 and j0 >= 0 and k0 + 1 < n:
        g += f[i0, j0, k0 + 1] * (1 - tx) * (1 - ty) * tz
    if i0 + 1 < n and j0 + 1 < n and k0 >= 0:
        g += f[i0 + 1, j0 + 1, k0] * tx * ty * (1 - tz)
    if i0 + 1 < n and j0 >= 0 and k0 + 1 < n:
        g += f[i0 + 1, j0, k0 + 1] * tx * (1 - ty) * tz
    if i0 >= 0 and j0 + 1 < n and k0 + 1 < n:
        g += f[i0, j0 + 1, k0 + 1] * (1 - tx) * ty * tz
    if i0 + 1 < n and j0 + 1 < n and k0 + 1 < n:
        g += f[i0 + 1, j0 + 1, k0 + 1] * tx * ty * tz
    return g


@njit(cache=True)
def q_pair_3d(fp, fq, ax, dv, mp, mq, sig, wsig, cgam, gam, out):
    n = ax.shape[0]
    lo = ax[0]
    ns = sig.shape[0]
    M = mp + mq
    rq = mq / M
    rp = mp / M
    w_vstar = dv * dv * dv
    for a in range(n):
        for b in range(n):
            for c in range(n):
                fpv = fp[a, b, c]
                acc = 0.0
                for a2 in range(n):
                    ux = ax[a] - ax[a2]
                    for b2 in range(n):
                        uy = ax[b] - ax[b2]
                        for c2 in range(n):
                            uz = ax[c] - ax[c2]
                            fqv = fq[a2, b2, c2]
                            r = np.sqrt(ux * ux + uy * uy + uz * uz)
                            if gam == 0.0:
                                B = cgam
                            elif gam == 1.0:
                                B = cgam * r
                            else:
                                B = cgam * r**gam
                            Vx = rp * ax[a] + rq * ax[a2]
                            Vy = rp * ax[b] + rq * ax[b2]
                            Vz = rp * ax[c] + rq * ax[c2]
                            loss = fpv * fqv
                            for s in range(ns):
                                g1 = _interp3(
                                    fp,
                                    (Vx + rq * r * sig[s, 0] - lo) / dv,
                                    (Vy + rq * r * sig[s, 1] - lo) / dv,
                                    (Vz + rq * r * sig[s, 2] - lo) / dv,
                                    n,
                                )
                                g2 = _interp3(
                                    fq,
                                    (Vx - rp * r * sig[s, 0] - lo) / dv,
                                    (Vy - rp * r * sig[s, 1] - lo) / dv,
                                    (Vz - rp * r * sig[s, 2] - lo) / dv,
                                    n,
                                )
                                acc += wsig[s] * B * (g1 * g2 - loss)
                out[a, b, c] = acc * w_vstar


@njit(cache=True)
def weighted_moment_table(Q, flat_coords, flat_sq, dim):
    # fixed-order accumulation of (sum Q, sum v_i Q, sum |v|^2 Q) over nodes
    s0 = 0.0
    s1 = np.zeros(dim)
    s2 = 0.0
    flat = Q.ravel()
    for k in range(flat.shape[0]):
        qk = flat[k]
        s0 += qk
        for i in range(dim):
            s1[i] += flat_coords[k, i] * qk
        s2 += flat_sq[k] * qk
    return s0, s1, s2
