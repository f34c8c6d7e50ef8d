from collections import OrderedDict


def put(store, key, value):
    store[key] = value
    return store


od = OrderedDict()
od = put(od, "k", 1)
