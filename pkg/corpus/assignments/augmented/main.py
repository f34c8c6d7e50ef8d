def double(n):
    return n * 2


count = 0
count += 5
count = double(count)
