VERSION = "1.0"


class Config:
    def __init__(self, name):
        self.name = name
