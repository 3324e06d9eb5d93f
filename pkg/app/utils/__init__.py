"""Utility functions"""
from app.utils.formatting import error_object, format_float, to_csv, to_json, to_plain, with_schema

__all__ = ["error_object", "format_float", "to_csv", "to_json", "to_plain", "with_schema"]
