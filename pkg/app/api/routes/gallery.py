"""Gallery endpoints"""
from typing import Optional

from fastapi import APIRouter

from app.api.errors import http_error
from app.api.models.requests import GalleryRunRequest
from app.errors import HeisgeomError
from app.gallery import list_entries, run_all, run_entry
from app.utils.formatting import with_schema

router = APIRouter()


@router.get("/")
async def gallery_list():
    """Catalogue of worked examples"""
    return with_schema({"entries": [e.to_dict() for e in list_entries()]})


@router.post("/{name}")
def gallery_run(name: str, request: Optional[GalleryRunRequest] = None):
    """Run one entry, or every entry with name 'all'"""
    request = request or GalleryRunRequest()
    try:
        if name == "all":
            reports = run_all(request.samples, request.seed)
        else:
            reports = [run_entry(name, request.samples, request.seed)]
    except HeisgeomError as e:
        raise http_error(e)
    return with_schema({"passed": all(r.passed for r in reports), "entries": reports})
