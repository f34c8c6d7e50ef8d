def safe_div(a, b):
    try:
        return a / b
    except ZeroDivisionError:
        return 0.0


ok = safe_div(1, 2)
fallback = safe_div(1, 0)
