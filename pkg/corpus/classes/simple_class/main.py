class Point:
    def __init__(self, x):
        self.x = x

    def get_x(self):
        return self.x


p = Point(3)
val = p.get_x()
