def has_key(mapping, key):
    return key in mapping


d = dict(x=1)
keys = list(d.keys())
flag = has_key(d, "x")
