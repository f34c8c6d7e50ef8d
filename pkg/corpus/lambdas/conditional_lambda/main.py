chooser = lambda flag: 1 if flag else "no"


yes = chooser(True)
no = chooser(False)
