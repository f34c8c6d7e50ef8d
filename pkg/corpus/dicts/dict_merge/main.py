def merge(base, extra):
    combined = dict(base)
    combined.update(extra)
    return combined


defaults = {"host": "localhost"}
overrides = {"port": 8080}
settings = merge(defaults, overrides)
