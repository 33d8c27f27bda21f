"""Pure-Python box enumeration; fallback for the compiled ``_kernels`` module."""


def enumerate_box(lo, hi, a, b):
    """Scan the integer box in descending lexicographic order.

    ``a`` is a list of integer rows and ``b`` their integer bounds. Returns
    ``(best_point, best_total, points_visited)``; the first point reaching a
    new maximum total is kept, so ties resolve to the lexicographically
    largest point. ``best_point`` is None when nothing is feasible.
    """
    n = len(lo)
    m = len(a)
    x = list(hi)
    sums = [sum(row[j] * x[j] for j in range(n)) for row in a]
    cols = [[a[i][j] for i in range(m)] for j in range(n)]
    best = None
    best_total = -1
    visited = 0
    if any(l > h for l, h in zip(lo, hi)):
        return None, 0, 0
    total = sum(x)
    while True:
        visited += 1
        if total > best_total:
            for i in range(m):
                if sums[i] > b[i]:
                    break
            else:
                best = list(x)
                best_total = total
        j = n - 1
        while j >= 0 and x[j] == lo[j]:
            span = hi[j] - lo[j]
            if span:
                x[j] = hi[j]
                total += span
                col = cols[j]
                for i in range(m):
                    sums[i] += col[i] * span
            j -= 1
        if j < 0:
            break
        x[j] -= 1
        total -= 1
        col = cols[j]
        for i in range(m):
            sums[i] -= col[i]
    return best, (best_total if best is not None else 0), visited
