def to_float(text):
    return float(text)


v = to_float("2.5")
i = int(v)
flag = bool(i)
