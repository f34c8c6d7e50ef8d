def describe(value):
    return type(value).__name__


for item in [1, "two", 3.0]:
    current = item
    label = describe(item)
