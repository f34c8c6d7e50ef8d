def greet(name):
    return "Hello, " + name


def width():
    return 10


msg = greet("Ada")
n = width()
