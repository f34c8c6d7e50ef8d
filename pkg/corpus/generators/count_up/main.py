def count_up(limit):
    i = 0
    while i < limit:
        yield i
        i = i + 1


g = count_up(2)
first = next(g)
rest = list(g)
