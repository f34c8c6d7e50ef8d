def length_of(items):
    return len(items)


n = length_of([1, 2, 3])
name = str(42)
