class Root:
    def tag(self):
        return "root"


class Left(Root):
    def tag(self):
        return "left"


class Right(Root):
    pass


class Bottom(Left, Right):
    pass


root_tag = Root().tag()
bottom = Bottom()
tag = bottom.tag()
