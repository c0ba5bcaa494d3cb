"""
Exception hierarchy for the fusion toolkit
"""


class FocusFuseError(Exception):
    """Base class for all toolkit errors"""


class ConfigError(FocusFuseError, ValueError):
    """Invalid parameter, unknown method or filter id"""


class DimensionError(FocusFuseError, ValueError):
    """Image dimensions violate an operation's precondition"""


class StructureError(FocusFuseError, ValueError):
    """Malformed block grid or transform decomposition"""


class PnmFormatError(FocusFuseError, ValueError):
    """
    Unparseable or unsupported PNM payload
    
    Args:
        message: Human readable description
        offset: Byte offset in the file where parsing failed
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset
