def run_twice(f):
    return f(f(1))


value = (lambda a: a * 2)(4)
doubled = run_twice(lambda n: n + n)
