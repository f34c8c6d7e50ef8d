import functools


def trace(func):
    @functools.wraps(func)
    def wrapper(n):
        return func(n)
    return wrapper


@trace
def add_one(n):
    return n + 1


result = add_one(41)
label = add_one.__name__
