import math


def circle_area(radius):
    return math.pi * radius * radius


area = circle_area(2)
