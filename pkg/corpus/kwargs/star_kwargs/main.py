def collect(**options):
    return options


opts = collect(a=1, b=2)
