"""
Decorators for command handlers: error-to-exit-code mapping and run logging.
"""

import functools
import logging
import sys
import time
from typing import Any, Callable

from constants import ExitCodes
from services.errors import AcceptanceError, DomainError, NumericalError

logger = logging.getLogger(__name__)


def handle_errors(func: Callable) -> Callable:
    """
    Decorator mapping service exceptions to process exit codes.

    The wrapped handler's own return value is ignored; the wrapper returns
    0 on success, 2 for domain/config errors, 3 for numerical failures, 4 for
    acceptance-band failures and 1 for anything unexpected.
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs) -> int:
        try:
            func(*args, **kwargs)
            return ExitCodes.OK
        except DomainError as e:
            logger.error(f"Invalid input for {func.__name__}: {e.message}")
            for error in e.details.get("errors", []):
                if error != e.message:
                    logger.error(f"  - {error}")
            print(f"error: {e.message}", file=sys.stderr)
            return ExitCodes.CONFIG_ERROR
        except NumericalError as e:
            logger.error(f"Numerical failure in {func.__name__}: {e.message} {e.details}")
            print(f"numerical error: {e.message}", file=sys.stderr)
            return ExitCodes.NUMERICAL_ERROR
        except AcceptanceError as e:
            logger.error(f"Acceptance failure in {func.__name__}: {e.message}")
            for failure in e.failures:
                logger.error(f"  - {failure}")
            return ExitCodes.ACCEPTANCE_FAILURE
        except Exception as e:
            logger.exception(f"Unexpected error in {func.__name__}: {e}")
            return ExitCodes.UNEXPECTED

    return wrapper


def log_command(action_name: str = None):
    """
    Decorator to log command start, completion and elapsed time.
    """

    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs) -> Any:
            # handler methods log under their command name
            owner_name = getattr(args[0], "name", None) if args else None
            action = action_name or (owner_name if isinstance(owner_name, str) else func.__name__)
            logger.info(f"Running command: {action}")
            started = time.perf_counter()

            result = func(*args, **kwargs)

            logger.info(f"Command {action} finished in {time.perf_counter() - started:.2f}s")
            return result

        return wrapper

    return decorator


def combine_decorators(*decorators):
    """
    Utility to combine multiple decorators in a clean way.
    """

    def decorator(func):
        for d in reversed(decorators):
            func = d(func)
        return func

    return decorator


def command_handler(func: Callable) -> Callable:
    """
    Combines error handling and run logging.
    """
    return combine_decorators(handle_errors, log_command())(func)
