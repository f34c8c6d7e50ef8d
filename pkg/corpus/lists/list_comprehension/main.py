def square_all(values):
    return [v * v for v in values]


squares = square_all([1, 2, 3])
evens = [n for n in squares if n % 2 == 0]
