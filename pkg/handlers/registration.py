import logging
from typing import Dict

from handlers.base_handler import BaseCommandHandler
from handlers.diagnostics_handler import LemmaHandler, SubsumsHandler
from handlers.predict_handler import PredictHandler, VerifyHandler
from handlers.sums_handler import DecomposeHandler, SumHandler, TailsHandler

logger = logging.getLogger(__name__)

COMMAND_HANDLERS = (
    SumHandler,
    DecomposeHandler,
    PredictHandler,
    VerifyHandler,
    LemmaHandler,
    SubsumsHandler,
    TailsHandler,
)


def register_all_handlers(subparsers) -> Dict[str, BaseCommandHandler]:
    """Centralized function to register every command on the argument parser."""
    handlers = {}
    for handler_class in COMMAND_HANDLERS:
        handler = handler_class()
        handler.register(subparsers)
        handlers[handler.name] = handler

    logger.debug(f"Registered commands: {', '.join(handlers)}")
    return handlers
