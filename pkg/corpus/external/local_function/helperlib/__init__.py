def make_pair(x):
    return (x, x)
