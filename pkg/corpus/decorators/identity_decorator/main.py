def logged(func):
    def wrapper(x):
        return func(x)
    return wrapper


@logged
def shout(word):
    return word.upper()


out = shout("hi")
