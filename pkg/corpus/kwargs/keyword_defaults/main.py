def format_name(first, last="Doe", upper=False):
    name = first + " " + last
    if upper:
        return name.upper()
    return name


full = format_name("Ada", upper=True)
plain = format_name("Bob", last="Ray")
