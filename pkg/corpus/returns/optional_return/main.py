def find(values, target):
    for value in values:
        if value == target:
            return value
    return None


hit = find([1, 2], 2)
miss = find([1, 2], 9)
