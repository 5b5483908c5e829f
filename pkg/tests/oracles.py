"""Independent oracles shared by the tests."""


def interval_partitions(nu):
    """Independent oracle: multisets of intervals [i, j] summing to nu."""
    intervals = [(i, j) for i in range(1, 5) for j in range(i, 5)]
    out = 0

    def rec(k, rest):
        nonlocal out
        if not any(rest):
            out += 1
            return
        if k == len(intervals):
            return
        i, j = intervals[k]
        r = list(rest)
        while True:
            rec(k + 1, r)
            if any(r[t - 1] == 0 for t in range(i, j + 1)):
                return
            for t in range(i, j + 1):
                r[t - 1] -= 1

    rec(0, list(nu))
    return out
