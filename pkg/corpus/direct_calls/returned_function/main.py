def make_adder(n):
    def add(m):
        return n + m
    return add


result = make_adder(2)(3)
