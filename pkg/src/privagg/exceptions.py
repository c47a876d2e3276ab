from __future__ import annotations


class ProtocolError(Exception):
    """A participant could not complete a protocol step."""

    def __init__(
        self, message: str, participant: int | None = None, t: int | None = None
    ) -> None:
        super().__init__(message)

        self.participant = participant
        self.t = t

    def __str__(self) -> str:
        if self.participant is None and self.t is None:
            msg = "while running protocol: "
        elif self.participant is None:
            msg = f"while running protocol at step t={self.t}: "
        else:
            msg = f"while running participant {self.participant}"
            msg += ": " if self.t is None else f" at step t={self.t}: "

        return msg + super().__str__()

    def __reduce__(self) -> tuple:  # for pickling.
        return self.__class__, (*self.args, self.participant, self.t)


class OverflowGuardError(Exception):
    """A fixed-point value left its integer budget."""

    def __init__(self, message: str, agent: int, t: int) -> None:
        super().__init__(message)

        self.agent = agent
        self.t = t

    def __str__(self) -> str:
        return f"agent {self.agent} at step t={self.t}: " + super().__str__()

    def __reduce__(self) -> tuple:  # for pickling.
        return self.__class__, (*self.args, self.agent, self.t)


class ConfigError(Exception):
    def __init__(self, message: str, file: str, key: str | None = None) -> None:
        super().__init__(message)

        self.file = str(file)
        self.key = key

    def __str__(self) -> str:
        if self.key is None:
            msg = f"while reading config {self.file}: "
        else:
            msg = f"while reading key '{self.key}' in config {self.file}: "

        return msg + super().__str__()

    def __reduce__(self) -> tuple:  # for pickling.
        return self.__class__, (*self.args, self.file, self.key)


class OracleMismatchError(Exception):
    """The encrypted aggregate differs from the plaintext oracle."""

    def __init__(self, message: str, scheme: str, t: int | None = None) -> None:
        super().__init__(message)

        self.scheme = scheme
        self.t = t

    def __str__(self) -> str:
        msg = f"scheme {self.scheme}"
        msg += ": " if self.t is None else f" at step t={self.t}: "
        return msg + super().__str__()

    def __reduce__(self) -> tuple:  # for pickling.
        return self.__class__, (*self.args, self.scheme, self.t)
