"""Compiled core of the exact primal-dual solver.

Every point p carries a radius r_p >= 0 (the dual).  Invariants:

    unused pair (u, q):  r_u + r_q <= |x_u - x_q|
    used pair (u, q):    r_u + r_q >= |x_u - x_q|
    r_p > 0  =>  deg(p) <= current demand of p

With U = x + r and V = x - r, for q right of u an unused pair means
V_q >= U_u and a used pair means V_q <= U_u (mirror image on the left).
So every arc the shortest-path search needs is a successor/predecessor
query on V or U restricted to one side of u.  Those queries run on
treaps keyed by (value, point id) with subtree min/max id.

Points are numbered 0..n-1 in global sorted order; ``typ`` is 0 for S and
1 for T.  All values are int64: the caller keeps the coordinate span well
below 2**61.
"""

import numpy as np
from numba import njit

NIL = -1
EMPTY = -1
TOMB = -2


@njit(cache=True)
def _less(ka, ia, kb, ib):
    return ka < kb or (ka == kb and ia < ib)


@njit(cache=True)
def _pull(t, lc, rc, mn, mx):
    a = t
    b = t
    if lc[t] != NIL:
        a = min(a, mn[lc[t]])
        b = max(b, mx[lc[t]])
    if rc[t] != NIL:
        a = min(a, mn[rc[t]])
        b = max(b, mx[rc[t]])
    mn[t] = a
    mx[t] = b


@njit(cache=True)
def _attach(root, tail, right, x, lc, rc):
    if tail == NIL:
        return x
    if right:
        rc[tail] = x
    else:
        lc[tail] = x
    return root


@njit(cache=True)
def _split(t, k, i, key, lc, rc, mn, mx, path, st):
    """Split into (nodes < (k, i), nodes >= (k, i)); iterative."""
    lroot = NIL
    rroot = NIL
    ltail = NIL
    rtail = NIL
    depth = 0
    while t != NIL:
        st[0] += 1
        path[depth] = t
        depth += 1
        if _less(key[t], t, k, i):
            lroot = _attach(lroot, ltail, True, t, lc, rc)
            ltail = t
            t = rc[t]
        else:
            rroot = _attach(rroot, rtail, False, t, lc, rc)
            rtail = t
            t = lc[t]
    if ltail != NIL:
        rc[ltail] = NIL
    if rtail != NIL:
        lc[rtail] = NIL
    for d in range(depth - 1, -1, -1):
        _pull(path[d], lc, rc, mn, mx)
    return lroot, rroot


@njit(cache=True)
def _merge(a, b, pr, lc, rc, mn, mx, path, st):
    """Join two treaps where every key of ``a`` precedes every key of ``b``."""
    root = NIL
    tail = NIL
    right = True
    depth = 0
    while a != NIL and b != NIL:
        st[0] += 1
        if pr[a] > pr[b]:
            root = _attach(root, tail, right, a, lc, rc)
            tail = a
            right = True
            a = rc[a]
        else:
            root = _attach(root, tail, right, b, lc, rc)
            tail = b
            right = False
            b = lc[b]
        path[depth] = tail
        depth += 1
    root = _attach(root, tail, right, a if a != NIL else b, lc, rc)
    for d in range(depth - 1, -1, -1):
        _pull(path[d], lc, rc, mn, mx)
    return root


@njit(cache=True)
def _insert(root, x, key, pr, lc, rc, mn, mx, path, st):
    lc[x] = NIL
    rc[x] = NIL
    mn[x] = x
    mx[x] = x
    a, b = _split(root, key[x], x, key, lc, rc, mn, mx, path, st)
    return _merge(_merge(a, x, pr, lc, rc, mn, mx, path, st), b, pr, lc, rc, mn, mx, path, st)


@njit(cache=True)
def _delete(root, x, key, pr, lc, rc, mn, mx, path, st):
    a, b = _split(root, key[x], x, key, lc, rc, mn, mx, path, st)
    _, c = _split(b, key[x], x + 1, key, lc, rc, mn, mx, path, st)
    return _merge(a, c, pr, lc, rc, mn, mx, path, st)


@njit(cache=True)
def _side_ok(t, u, side, mn, mx):
    if side > 0:
        return mx[t] > u
    return mn[t] < u


@njit(cache=True)
def _node_ok(t, u, side):
    return t > u if side > 0 else t < u


@njit(cache=True)
def _first(t, u, side, lc, rc, mn, mx, st):
    if t == NIL or not _side_ok(t, u, side, mn, mx):
        return NIL
    while True:
        st[0] += 1
        if lc[t] != NIL and _side_ok(lc[t], u, side, mn, mx):
            t = lc[t]
        elif _node_ok(t, u, side):
            return t
        else:
            t = rc[t]


@njit(cache=True)
def _last(t, u, side, lc, rc, mn, mx, st):
    if t == NIL or not _side_ok(t, u, side, mn, mx):
        return NIL
    while True:
        st[0] += 1
        if rc[t] != NIL and _side_ok(rc[t], u, side, mn, mx):
            t = rc[t]
        elif _node_ok(t, u, side):
            return t
        else:
            t = lc[t]


@njit(cache=True)
def _succ(t, k0, i0, u, side, key, lc, rc, mn, mx, path, st):
    """Smallest (key, id) > (k0, i0) among ids on ``side`` of u."""
    # walk the search path; nodes above the bound are pending candidates,
    # each followed in order by its right subtree
    depth = 0
    while t != NIL and _side_ok(t, u, side, mn, mx):
        st[0] += 1
        if _less(k0, i0, key[t], t):
            path[depth] = t
            depth += 1
            t = lc[t]
        else:
            t = rc[t]
    for d in range(depth - 1, -1, -1):
        t = path[d]
        if _node_ok(t, u, side):
            return t
        res = _first(rc[t], u, side, lc, rc, mn, mx, st)
        if res != NIL:
            return res
    return NIL


@njit(cache=True)
def _pred(t, k0, i0, u, side, key, lc, rc, mn, mx, path, st):
    """Largest (key, id) < (k0, i0) among ids on ``side`` of u."""
    depth = 0
    while t != NIL and _side_ok(t, u, side, mn, mx):
        st[0] += 1
        if _less(key[t], t, k0, i0):
            path[depth] = t
            depth += 1
            t = rc[t]
        else:
            t = lc[t]
    for d in range(depth - 1, -1, -1):
        t = path[d]
        if _node_ok(t, u, side):
            return t
        res = _last(lc[t], u, side, lc, rc, mn, mx, st)
        if res != NIL:
            return res
    return NIL


@njit(cache=True)
def _slot(key, mask):
    h = (key * 0x9E3779B97F4A7C15) & 0x7FFFFFFFFFFFFFFF
    return (h >> 17) & mask


@njit(cache=True)
def _pair_find(table, key):
    mask = table.shape[0] - 1
    i = _slot(key, mask)
    while True:
        k = table[i]
        if k == key:
            return i
        if k == EMPTY:
            return -1
        i = (i + 1) & mask


@njit(cache=True)
def _pair_insert(table, key):
    mask = table.shape[0] - 1
    i = _slot(key, mask)
    while table[i] >= 0:
        i = (i + 1) & mask
    table[i] = key


@njit(cache=True)
def _rehash(table, size):
    out = np.full(size, EMPTY, np.int64)
    for k in table:
        if k >= 0:
            _pair_insert(out, k)
    return out


@njit(cache=True)
def _push(hk, hu, hkd, hq, size, key, u, kind, q):
    i = size
    while i > 0:
        par = (i - 1) >> 1
        if hk[par] <= key:
            break
        hk[i] = hk[par]
        hu[i] = hu[par]
        hkd[i] = hkd[par]
        hq[i] = hq[par]
        i = par
    hk[i] = key
    hu[i] = u
    hkd[i] = kind
    hq[i] = q
    return size + 1


@njit(cache=True)
def _pop(hk, hu, hkd, hq, size):
    size -= 1
    key = hk[size]
    u = hu[size]
    kind = hkd[size]
    q = hq[size]
    i = 0
    while True:
        c = 2 * i + 1
        if c >= size:
            break
        if c + 1 < size and hk[c + 1] < hk[c]:
            c += 1
        if hk[c] >= key:
            break
        hk[i] = hk[c]
        hu[i] = hu[c]
        hkd[i] = hkd[c]
        hq[i] = hq[c]
        i = c
    hk[i] = key
    hu[i] = u
    hkd[i] = kind
    hq[i] = q
    return size


# arc kinds in the search heap
VERTEX = 0
ADD_RIGHT = 1   # unused pair to a later point, ascending V
ADD_LEFT = 2    # unused pair to an earlier point, descending U
DROP_RIGHT = 3  # used pair to a later point, descending V
DROP_LEFT = 4   # used pair to an earlier point, ascending U


@njit(cache=True)
def _next_arc(kind, u, k0, i0, root_v, root_u, vkey, ukey, vl, vr, vmn, vmx,
              ul, ur, umn, umx, path, st):
    if kind == ADD_RIGHT:
        return _succ(root_v, k0, i0, u, 1, vkey, vl, vr, vmn, vmx, path, st)
    if kind == ADD_LEFT:
        return _pred(root_u, k0, i0, u, -1, ukey, ul, ur, umn, umx, path, st)
    if kind == DROP_RIGHT:
        return _pred(root_v, k0, i0, u, 1, vkey, vl, vr, vmn, vmx, path, st)
    return _succ(root_u, k0, i0, u, -1, ukey, ul, ur, umn, umx, path, st)


@njit(cache=True)
def _reduced(kind, xs, r, u, q):
    if kind == ADD_RIGHT:
        return (xs[q] - r[q]) - (xs[u] + r[u])
    if kind == ADD_LEFT:
        return (xs[u] - r[u]) - (xs[q] + r[q])
    if kind == DROP_RIGHT:
        return (xs[u] + r[u]) - (xs[q] - r[q])
    return (xs[q] + r[q]) - (xs[u] - r[u])


@njit(cache=True)
def solve_rounds(xs, typ, dem, prio):
    """Run demand rounds k = 1..max(dem); return (pairs, steps, counters).

    ``pairs`` holds (s_point, t_point) in global numbering.  ``counters`` is
    [augmentations, settled nodes, longest path (arcs), radius updates].
    """
    n = xs.shape[0]
    INF = np.int64(1) << 62
    st = np.zeros(1, np.int64)
    cnt = np.zeros(4, np.int64)
    path = np.zeros(n + 1, np.int64)

    vkey = xs.copy()
    ukey = xs.copy()
    vl = np.full(n, NIL, np.int64)
    vr = np.full(n, NIL, np.int64)
    vmn = np.zeros(n, np.int64)
    vmx = np.zeros(n, np.int64)
    ul = np.full(n, NIL, np.int64)
    ur = np.full(n, NIL, np.int64)
    umn = np.zeros(n, np.int64)
    umx = np.zeros(n, np.int64)
    root_v = np.full(2, NIL, np.int64)
    root_u = np.full(2, NIL, np.int64)
    for x in range(n):
        c = typ[x]
        root_v[c] = _insert(root_v[c], x, vkey, prio, vl, vr, vmn, vmx, path, st)
        root_u[c] = _insert(root_u[c], x, ukey, prio, ul, ur, umn, umx, path, st)

    r = np.zeros(n, np.int64)
    deg = np.zeros(n, np.int64)
    need = np.zeros(n, np.int64)
    dist = np.full(n, INF, np.int64)
    prev = np.full(n, -1, np.int64)
    done = np.zeros(n, np.bool_)
    touched = np.zeros(n, np.int64)
    settled = np.zeros(n, np.int64)

    total = 0
    top = 0
    for x in range(n):
        total += dem[x]
        top = max(top, dem[x])
    tsize = 16
    while tsize < 4 * total:
        tsize *= 2
    table = np.full(tsize, EMPTY, np.int64)
    live = 0
    tombs = 0

    cap = 256
    hk = np.zeros(cap, np.int64)
    hu = np.zeros(cap, np.int64)
    hkd = np.zeros(cap, np.int64)
    hq = np.zeros(cap, np.int64)

    for k in range(1, top + 1):
        for x in range(n):
            if dem[x] >= k:
                need[x] = k
        for p in range(n):
            while deg[p] < need[p]:
                cnt[0] += 1
                sgn = typ[p]
                ntouch = 1
                nset = 0
                touched[0] = p
                dist[p] = 0
                hs = _push(hk, hu, hkd, hq, 0, 0, p, VERTEX, p)
                best = INF
                tgt = -1
                while hs > 0:
                    if hs + 4 >= cap:
                        cap *= 2
                        hk = np.concatenate((hk, np.zeros_like(hk)))
                        hu = np.concatenate((hu, np.zeros_like(hu)))
                        hkd = np.concatenate((hkd, np.zeros_like(hkd)))
                        hq = np.concatenate((hq, np.zeros_like(hq)))
                    key = hk[0]
                    if key >= best:
                        break
                    u = hu[0]
                    kind = hkd[0]
                    q = hq[0]
                    hs = _pop(hk, hu, hkd, hq, hs)
                    st[0] += 1
                    if kind == VERTEX:
                        if done[u] or key > dist[u]:
                            continue
                        done[u] = True
                        settled[nset] = u
                        nset += 1
                        c = 1 - typ[u]
                        if typ[u] == sgn:
                            if u != p and deg[u] > need[u]:
                                # surplus edge can be released here
                                if key < best:
                                    best = key
                                    tgt = u
                                continue
                            k1, k2 = ADD_RIGHT, ADD_LEFT
                            b1 = xs[u] + r[u]
                            b2 = xs[u] - r[u]
                            i1 = np.int64(-1)
                            i2 = np.int64(n)
                        else:
                            if deg[u] < need[u]:
                                if key < best:
                                    best = key
                                    tgt = u
                                continue
                            if key + r[u] < best:
                                best = key + r[u]
                                tgt = u
                            k1, k2 = DROP_RIGHT, DROP_LEFT
                            b1 = xs[u] + r[u]
                            b2 = xs[u] - r[u]
                            i1 = np.int64(n)
                            i2 = np.int64(-1)
                        q1 = _next_arc(k1, u, b1, i1, root_v[c], root_u[c], vkey, ukey,
                                       vl, vr, vmn, vmx, ul, ur, umn, umx, path, st)
                        if q1 != NIL:
                            hs = _push(hk, hu, hkd, hq, hs, key + _reduced(k1, xs, r, u, q1), u, k1, q1)
                        q2 = _next_arc(k2, u, b2, i2, root_v[c], root_u[c], vkey, ukey,
                                       vl, vr, vmn, vmx, ul, ur, umn, umx, path, st)
                        if q2 != NIL:
                            hs = _push(hk, hu, hkd, hq, hs, key + _reduced(k2, xs, r, u, q2), u, k2, q2)
                        continue
                    # an arc candidate u -> q; queue the next one from u first
                    c = typ[q]
                    kk = vkey[q] if kind == ADD_RIGHT or kind == DROP_RIGHT else ukey[q]
                    nq = _next_arc(kind, u, kk, q, root_v[c], root_u[c], vkey, ukey,
                                   vl, vr, vmn, vmx, ul, ur, umn, umx, path, st)
                    du = dist[u]
                    if nq != NIL:
                        hs = _push(hk, hu, hkd, hq, hs, du + _reduced(kind, xs, r, u, nq), u, kind, nq)
                    if done[q]:
                        continue
                    red = key - du
                    if red == 0:
                        # tight pair: only the used/unused status tells arcs apart
                        a = u if typ[u] == 0 else q
                        b = q if typ[u] == 0 else u
                        used = _pair_find(table, a * n + b) >= 0
                        if (kind == ADD_RIGHT or kind == ADD_LEFT) == used:
                            continue
                    if key < dist[q]:
                        if dist[q] == INF:
                            touched[ntouch] = q
                            ntouch += 1
                        dist[q] = key
                        prev[q] = u
                        hs = _push(hk, hu, hkd, hq, hs, key, q, VERTEX, q)

                cnt[1] += nset
                for i in range(nset):
                    u = settled[i]
                    dl = best - dist[u]
                    if dl > 0:
                        c = typ[u]
                        root_v[c] = _delete(root_v[c], u, vkey, prio, vl, vr, vmn, vmx, path, st)
                        root_u[c] = _delete(root_u[c], u, ukey, prio, ul, ur, umn, umx, path, st)
                        if c == sgn:
                            r[u] += dl
                        else:
                            r[u] -= dl
                        vkey[u] = xs[u] - r[u]
                        ukey[u] = xs[u] + r[u]
                        root_v[c] = _insert(root_v[c], u, vkey, prio, vl, vr, vmn, vmx, path, st)
                        root_u[c] = _insert(root_u[c], u, ukey, prio, ul, ur, umn, umx, path, st)
                        cnt[3] += 1
                v = tgt
                if typ[v] != sgn:
                    deg[v] += 1
                else:
                    deg[v] -= 1
                plen = 0
                while v != p:
                    u = prev[v]
                    a = u if typ[u] == 0 else v
                    b = v if typ[u] == 0 else u
                    if typ[u] == sgn:
                        _pair_insert(table, a * n + b)
                        live += 1
                    else:
                        table[_pair_find(table, a * n + b)] = TOMB
                        live -= 1
                        tombs += 1
                    st[0] += 1
                    plen += 1
                    v = u
                deg[p] += 1
                cnt[2] = max(cnt[2], plen)
                if 2 * (live + tombs) > table.shape[0]:
                    table = _rehash(table, table.shape[0])
                    tombs = 0
                for i in range(ntouch):
                    u = touched[i]
                    dist[u] = INF
                    prev[u] = -1
                    done[u] = False

    out = np.zeros((live, 2), np.int64)
    j = 0
    for key in table:
        if key >= 0:
            out[j, 0] = key // n
            out[j, 1] = key % n
            j += 1
    return out, st[0], cnt, r
