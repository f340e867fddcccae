import numbers


class FbtreeError(Exception):
    pass


class InvalidArgumentError(FbtreeError, ValueError):
    pass


class NumericalError(FbtreeError, ArithmeticError):

    def __init__(self, message, step=None):
        if step is not None:
            message = "{} (time step {})".format(message, step)
        super().__init__(message)
        self.step = step


class ConfigError(FbtreeError, ValueError):

    def __init__(self, key, message):
        super().__init__("{}: {}".format(key, message))
        self.key = key


def check_positive(name, value, integer=False):
    if integer and (isinstance(value, bool)
                    or not isinstance(value, numbers.Integral)):
        raise InvalidArgumentError(
            "{} must be an int value: actual('{}')"
            .format(name, type(value).__name__))
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise InvalidArgumentError(
            "{} must be a number: actual('{}')"
            .format(name, type(value).__name__))
    if not value > 0:
        raise InvalidArgumentError(
            "{} must be positive: {}".format(name, value))
    return value
