def widen(items, extra):
    items = items + [extra]
    return items


merged = [1] + [2]
n = len(merged)
wide = widen(merged, 3)
