"""
Error handlers that turn any failure into a stage-named diagnostic and an exit code.
"""
import logging
import traceback
from typing import Dict, Any, Tuple

from .exceptions import (
    HanlmBaseException,
    ValidationError,
    ResourceNotFoundError,
    ConfigurationError,
    FileSystemError,
)


logger = logging.getLogger(__name__)


class ErrorHandler:
    """Main error handler for command runs."""

    def __init__(self):
        self.error_mappings = {
            FileNotFoundError: self._handle_file_not_found_error,
            PermissionError: self._handle_permission_error,
            UnicodeDecodeError: self._handle_unicode_error,
            ValueError: self._handle_value_error,
            KeyError: self._handle_key_error,
            OSError: self._handle_os_error,
        }

    def handle_error(self, exception: Exception, stage: str = None) -> Tuple[int, Dict[str, Any]]:
        """Handle any exception and return ``(exit_code, diagnostic)``."""
        error = self.normalize(exception)
        if stage and not error.stage:
            error.stage = stage

        self._log_error(error, exception)

        diagnostic = error.to_dict()
        diagnostic['summary'] = self.format_diagnostic(error)
        return error.exit_code, diagnostic

    def normalize(self, exception: Exception) -> HanlmBaseException:
        """Map built-in exceptions onto the hanlm hierarchy."""
        if isinstance(exception, HanlmBaseException):
            return exception

        for exc_type in type(exception).__mro__:
            handler = self.error_mappings.get(exc_type)
            if handler:
                return handler(exception)

        return HanlmBaseException(
            f"Unexpected {type(exception).__name__}: {exception}",
            error_code="INTERNAL_ERROR",
            details={'exception_type': type(exception).__name__},
        )

    @staticmethod
    def format_diagnostic(error: HanlmBaseException) -> str:
        stage = error.stage or 'unknown'
        return f"stage '{stage}' failed [{error.error_code}]: {error.message}"

    def _log_error(self, error: HanlmBaseException, original: Exception) -> None:
        log_data = {
            'error_code': error.error_code,
            'stage': error.stage,
            'exception_type': type(original).__name__,
        }
        logger.error(self.format_diagnostic(error), extra=log_data)
        # 스택 추적은 DEBUG 수준에서만
        logger.debug(''.join(traceback.format_exception(type(original), original, original.__traceback__)))

    def _handle_file_not_found_error(self, exception: FileNotFoundError) -> HanlmBaseException:
        path = getattr(exception, 'filename', None)
        return ResourceNotFoundError(
            f"File not found: {path or exception}",
            resource_type='file',
            resource_id=path,
        )

    def _handle_permission_error(self, exception: PermissionError) -> HanlmBaseException:
        return FileSystemError(
            f"Permission denied: {getattr(exception, 'filename', None) or exception}",
            file_path=getattr(exception, 'filename', None),
            operation='access',
        )

    def _handle_unicode_error(self, exception: UnicodeDecodeError) -> HanlmBaseException:
        return ValidationError(
            f"Input is not valid UTF-8: {exception.reason} at byte {exception.start}",
            details={'encoding': exception.encoding},
        )

    def _handle_value_error(self, exception: ValueError) -> HanlmBaseException:
        return ValidationError(str(exception))

    def _handle_key_error(self, exception: KeyError) -> HanlmBaseException:
        return ConfigurationError(f"Missing key: {exception}", config_key=str(exception.args[0]) if exception.args else None)

    def _handle_os_error(self, exception: OSError) -> HanlmBaseException:
        return FileSystemError(
            f"File system error: {exception}",
            file_path=getattr(exception, 'filename', None),
            details={'errno': exception.errno},
        )
