def pair(v):
    return (v, v)


a, b = 1, "one"
first, *rest = [1, 2, 3]
t = pair(2)
