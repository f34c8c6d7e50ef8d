class A:
    def value(self):
        return 1


class B(A):
    def value(self):
        return super().value() + 1


b = B()
v = b.value()
