def repeat(times):
    def deco(func):
        def inner(v):
            results = []
            count = 0
            while count < times:
                results.append(func(v))
                count = count + 1
            return results
        return inner
    return deco


@repeat(2)
def echo(v):
    return v


r = echo(5)
