def base(x, y):
    return x * y


def proxy(**kw):
    return base(**kw)


v = proxy(x=2, y=3)
