def consume(gen):
    return list(gen)


squares = (n * n for n in [1, 2, 3])
items = consume(squares)
