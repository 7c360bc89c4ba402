"""Shared exception types."""


class CapExceeded(RuntimeError):
    """A configurable safety cap would be exceeded.

    Carries enough context for front ends to tell the user which knob to
    raise (CLI maps this to exit code 3).
    """

    def __init__(self, cap_name, cap_value, needed, flag):
        self.cap_name = cap_name
        self.cap_value = cap_value
        self.needed = needed
        self.flag = flag
        super().__init__(
            f"{cap_name} cap exceeded (cap {cap_value}, needed {needed}); "
            f"raise it with {flag}"
        )
