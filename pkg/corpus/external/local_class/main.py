from helperlib import Widget


def build_widget(size):
    return Widget(size)


w = build_widget(3)
a = w.area()
