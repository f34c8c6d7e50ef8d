class Switch:
    def on(self):
        return True

    def off(self):
        return 0


sw = Switch()
for name in ["on", "off"]:
    handler = getattr(sw, name)
    state = handler()
