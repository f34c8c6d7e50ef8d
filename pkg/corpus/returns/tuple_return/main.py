def min_max(values):
    return (min(values), max(values))


lo, hi = min_max([2, 1, 3])
