from pydantic import BaseModel, ConfigDict


class BaseSchema(BaseModel):
    """Base schema for immutable, finite-valued records"""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False, extra="forbid")
