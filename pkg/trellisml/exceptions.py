# -*- coding: UTF-8 -*-

from typing import Optional


class TrellisException(Exception):
    pass


class ContractError(TrellisException):
    pass


class FieldDomainError(TrellisException):
    pass


class ConfigurationError(TrellisException):
    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__("%s: %s" % (key, message) if key is not None else message)
        self.message = message
        self.key = key

    def __reduce__(self):
        return type(self), (self.message, self.key)


class ResourceError(TrellisException):
    def __init__(self, what: str, required: int, allowed: int):
        super().__init__("%s exceeds budget: %d required, %d allowed" % (what, required, allowed))
        self.what = what
        self.required = required
        self.allowed = allowed

    def __reduce__(self):
        return type(self), (self.what, self.required, self.allowed)


class OracleMismatch(TrellisException):
    pass


class UsageError(TrellisException):
    pass
