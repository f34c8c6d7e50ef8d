def pick():
    return [1, 2].pop()


text = "abc".upper()
n = pick()
