"""Engine errors as HTTP errors"""
from fastapi import HTTPException

from app.errors import HeisgeomError, InputError
from app.utils.formatting import error_object


def http_error(error: HeisgeomError) -> HTTPException:
    """422 for input errors, 400 for every other engine error"""
    status = 422 if isinstance(error, InputError) else 400
    return HTTPException(status_code=status, detail=error_object(error))
