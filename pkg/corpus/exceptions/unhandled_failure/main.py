def explode(flag):
    if flag:
        raise RuntimeError("boom")
    return flag


safe = explode(False)
explode(True)
never = "unreached"
