import json as j


def round_trip(payload):
    return j.loads(j.dumps(payload))


text = j.dumps([1, 2])
data = round_trip([3, 4])
