import helperlib


def sum_pair(pair):
    return pair[0] + pair[1]


pr = helperlib.make_pair(2)
s = sum_pair(pr)
