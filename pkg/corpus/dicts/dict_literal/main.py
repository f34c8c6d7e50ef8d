def lookup(mapping, key):
    return mapping[key]


data = {"a": 1}
value = lookup(data, "a")
