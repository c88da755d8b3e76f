from .client import Backends, ServiceClient, missing_objects
from .mock import MockBackend, MockServer, default_fixtures, mock_server
from .types import (
    BackendEndpoint,
    BackendError,
    BackendTimeout,
    CaptionResult,
    GenerationRequest,
    ObjectLocation,
    SchemaError,
    ServiceError,
    TransportError,
    ZeroShotScores,
)

__all__ = [
    "BackendEndpoint",
    "BackendError",
    "BackendTimeout",
    "Backends",
    "CaptionResult",
    "GenerationRequest",
    "MockBackend",
    "MockServer",
    "ObjectLocation",
    "SchemaError",
    "ServiceClient",
    "ServiceError",
    "TransportError",
    "ZeroShotScores",
    "default_fixtures",
    "missing_objects",
    "mock_server",
]
