def join_words(sep, *parts):
    return sep.join(parts)


s = join_words("-", "a", "b")
