class Widget:
    def __init__(self, size):
        self.size = size

    def area(self):
        return self.size * self.size
