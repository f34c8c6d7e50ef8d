pairs = [(2, "b"), (1, "a")]
pairs.sort(key=lambda pair: pair[0])
head = pairs[0]
