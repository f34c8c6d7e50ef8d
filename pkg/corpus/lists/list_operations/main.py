def biggest(values):
    return max(values)


nums = [3, 1, 2]
first = nums[0]
tail = nums[1:]
top = biggest(nums)
