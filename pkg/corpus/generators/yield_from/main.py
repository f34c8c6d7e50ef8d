def inner_gen():
    yield 1
    yield 2


def outer_gen():
    yield from inner_gen()


values = list(outer_gen())
