def sign(n):
    if n > 0:
        return "pos"
    if n < 0:
        return "neg"
    return "zero"


a = sign(1)
b = sign(-1)
c = sign(0)
