class Base:
    def speak(self):
        return "base"


class Child(Base):
    def speak(self):
        return "child"


b = Base()
c = Child()
s1 = b.speak()
s2 = c.speak()
