def pick_value(flag):
    if flag:
        return 1
    return "none"


res_true = pick_value(True)
res_false = pick_value(False)
