def parse_num(text):
    try:
        return int(text)
    except ValueError:
        return 0


good = parse_num("7")
bad = parse_num("oops")
