"""Pure-Python kernels, used when the compiled extension is unavailable.

Every function here mirrors the one of the same name in ``_ckernels.pyx``:
same arguments, same dtypes, same tie-breaking.
"""

import numpy as np

NAME = "python"


def suffix_max_slope(row):
    y = np.ascontiguousarray(row, dtype=np.float64)
    n = y.shape[0]
    if n < 2:
        raise ValueError("row must have at least 2 entries")
    ys = y.tolist()
    out = [0.0] * (n - 1)
    off = [0] * (n - 1)
    stack = [n - 1]
    for u in range(n - 2, -1, -1):
        yu = ys[u]
        while len(stack) >= 2:
            h0, h1 = stack[-1], stack[-2]
            if (ys[h0] - yu) / (h0 - u) < (ys[h1] - yu) / (h1 - u):
                stack.pop()
            else:
                break
        h0 = stack[-1]
        out[u] = (ys[h0] - yu) / (h0 - u)
        off[u] = h0 - u
        while len(stack) >= 2:
            h0, h1 = stack[-1], stack[-2]
            if (ys[h0] - yu) / (h0 - u) <= (ys[h1] - yu) / (h1 - u):
                stack.pop()
            else:
                break
        stack.append(u)
    return np.array(out, dtype=np.float64), np.array(off, dtype=np.int64)


def truncated_max_slope(rows, width, horizon):
    y = np.ascontiguousarray(rows, dtype=np.float64)
    nrows, n = y.shape
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if width < 1 or width > n - 1:
        raise ValueError("width must satisfy 1 <= width <= ncols - 1")
    base = y[:, :width]
    best = y[:, 1:width + 1] - base
    best_r = np.ones((nrows, width), dtype=np.int64)
    for r in range(2, horizon + 1):
        # columns u with u + r > n - 1 are past the end of the row
        m = min(width, n - r)
        if m <= 0:
            break
        s = (y[:, r:r + m] - base[:, :m]) / r
        better = s > best[:, :m]
        best[:, :m] = np.where(better, s, best[:, :m])
        best_r[:, :m] = np.where(better, r, best_r[:, :m])
    return best, best_r


def next_smaller_or_equal(values):
    a = np.ascontiguousarray(values, dtype=np.float64).tolist()
    n = len(a)
    nxt = [-1] * n
    stack = []
    for u in range(n - 1, -1, -1):
        au = a[u]
        while stack and a[stack[-1]] > au:
            stack.pop()
        nxt[u] = stack[-1] if stack else -1
        stack.append(u)
    return np.array(nxt, dtype=np.int64)


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def label_components(mask, star):
    m = np.ascontiguousarray(mask, dtype=np.uint8)
    H, W = m.shape
    labels = np.zeros((H, W), dtype=np.int32)
    if H * W == 0:
        return labels, 0
    bits = m.astype(bool).ravel().tolist()
    parent = list(range(H * W))
    size = [1] * (H * W)

    def union(a, b):
        a = _find(parent, a)
        b = _find(parent, b)
        if a == b:
            return
        if size[a] < size[b]:
            a, b = b, a
        parent[b] = a
        size[a] += size[b]

    for j in range(H):
        for i in range(W):
            k = j * W + i
            if not bits[k]:
                continue
            if i > 0 and bits[k - 1]:
                union(k, k - 1)
            if j > 0:
                if bits[k - W]:
                    union(k, k - W)
                if star:
                    if i > 0 and bits[k - W - 1]:
                        union(k, k - W - 1)
                    if i < W - 1 and bits[k - W + 1]:
                        union(k, k - W + 1)

    flat = labels.ravel()
    rootlabel = {}
    for k in range(H * W):
        if bits[k]:
            root = _find(parent, k)
            lab = rootlabel.get(root)
            if lab is None:
                lab = rootlabel[root] = len(rootlabel) + 1
            flat[k] = lab
    return labels, len(rootlabel)
