from helperlib import VERSION, Config


def load_config(name):
    return Config(name)


cfg = load_config("dev")
label = cfg.name
version = VERSION
