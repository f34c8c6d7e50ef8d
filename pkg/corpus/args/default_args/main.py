def scale(value, factor=2):
    return value * factor


a = scale(3)
b = scale(1.5, 4)
