from .app import LiveMatch, ServerSettings, create_app
from .schemas import SCHEMA_VERSION, message_schema

__all__ = ["LiveMatch", "ServerSettings", "create_app", "SCHEMA_VERSION", "message_schema"]
