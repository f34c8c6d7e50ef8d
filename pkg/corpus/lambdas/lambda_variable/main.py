double = lambda n: n + n


d = double(4)
