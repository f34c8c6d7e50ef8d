def largest(nums):
    return max(nums)


m = largest([3, 1])
xs = sorted((2, 1))
total = sum(xs)
