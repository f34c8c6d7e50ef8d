class Box:
    def __init__(self, item):
        self.item = item

    def unwrap(self):
        return self.item


first = Box(1).unwrap()
second = Box("gift").unwrap()
