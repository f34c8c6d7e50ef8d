class Counter:
    def __init__(self):
        self.count = 0

    def tick(self):
        current = self.count + 1
        self.count = current
        return current


c = Counter()
c.tick()
total = c.tick()
