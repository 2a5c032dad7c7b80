"""Exception types. Each carries the CLI exit code it maps to."""


class SDRError(Exception):
    exit_code = 1


class ConfigError(SDRError, ValueError):
    exit_code = 2


class DataError(SDRError, ValueError):
    exit_code = 3


class NumericError(SDRError, ArithmeticError):
    exit_code = 4
