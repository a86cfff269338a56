from core.exceptions import CrosscapError


class BraidPreconditionError(CrosscapError):
    def __init__(self, first, second):
        self.first = first
        self.second = second
        super().__init__(f"braid move requires i(a,b)=1, got a={first}, b={second}")
