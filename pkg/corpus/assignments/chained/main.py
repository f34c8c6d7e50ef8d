def bump(n):
    return n + 1


x = y = 10
z = bump(x)
