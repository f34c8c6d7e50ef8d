def total(*nums):
    return sum(nums)


t = total(1, 2, 3)
