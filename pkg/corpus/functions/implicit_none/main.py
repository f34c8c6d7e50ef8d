def note(message):
    message.strip()


out = note(" hi ")
