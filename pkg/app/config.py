"""Configuration settings for the heisgeom engine"""
import os
import logging
from pydantic_settings import BaseSettings
from typing import Any, Dict, List

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    """
    Engine settings.

    Priority (highest to lowest):
    1. CLI flag overrides (applied through apply_overrides)
    2. Environment variables (HEISGEOM_ prefix) and .env
    3. Default values
    """

    # Service Identity
    SERVICE_NAME: str = "heisgeom"
    SERVICE_PORT: int = 5001
    API_PREFIX: str = "/api/heisgeom"
    LOG_LEVEL: str = "INFO"

    # Parallelism cap for quadrature cells (HEISGEOM_THREADS)
    THREADS: int = 1

    # Classification thresholds
    TAU_H: float = 1e-10      # horizontal point, relative to |γ̇|_1
    TAU_CHAR: float = 1e-8    # characteristic point, on ‖∇_H u‖/‖∇u‖
    TAU_ON: float = 1e-9      # on-surface band, relative to ‖∇u‖·scale
    TAU_ABS: float = 1e-12    # abs() dead-band for jets
    TAU_EIK: float = 1e-8     # eikonal check ‖∇_H δ‖ = 1

    # g_L-geodesic integration
    GEODESIC_RTOL: float = 1e-10
    GEODESIC_ATOL: float = 1e-10

    # Quadrature
    QUAD_ORDER: int = 32
    QUAD_SINGULAR_ORDER: int = 64
    QUAD_TOL: float = 1e-11
    QUAD_MAX_SUBDIVISIONS: int = 12

    # Asymptotic sweeps
    EPS_SEQUENCE: List[float] = [0.1, 0.05, 0.025, 0.0125]
    L_SWEEP: List[float] = [1e2, 1e4, 1e6]

    # Gallery
    GALLERY_POINT_TOL: float = 1e-8
    GALLERY_INTEGRAL_TOL: float = 1e-5
    GALLERY_SAMPLES: int = 100
    GALLERY_SEED: int = 20240601

    # Report schema
    SCHEMA_VERSION: int = 1

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        env_prefix = "HEISGEOM_"
        extra = "ignore"

    def apply_overrides(self, overrides: Dict[str, Any]):
        """
        Apply command-line overrides.

        Accepted keys:
        - tol -> QUAD_TOL
        - tau_h -> TAU_H
        - tau_char -> TAU_CHAR
        - eps -> EPS_SEQUENCE
        - L -> L_SWEEP
        - threads -> THREADS

        Raises:
            ValueError: On unknown keys or invalid sequences
        """
        if not overrides:
            return

        mappings = {
            "tol": "QUAD_TOL",
            "tau_h": "TAU_H",
            "tau_char": "TAU_CHAR",
            "eps": "EPS_SEQUENCE",
            "L": "L_SWEEP",
            "threads": "THREADS",
        }

        for key, value in overrides.items():
            if value is None:
                continue
            attr = mappings.get(key)
            if attr is None:
                raise ValueError(f"Unknown setting override: {key}")

            if attr == "EPS_SEQUENCE":
                value = [float(v) for v in value]
                if any(v <= 0 for v in value) or any(b >= a for a, b in zip(value, value[1:])):
                    raise ValueError("eps sequence must be positive and strictly decreasing")
            elif attr == "L_SWEEP":
                value = [float(v) for v in value]
                if any(v <= 0 for v in value):
                    raise ValueError("L values must be positive")
            elif attr == "THREADS":
                value = max(1, int(value))
            elif float(value) <= 0:
                raise ValueError(f"{key} must be positive")

            setattr(self, attr, value)
            logger.info(f"Applied override for {attr}: {value}")


# Global settings instance
settings = Settings()


def initialize_settings():
    """
    Log the effective configuration.

    Should be called once by every entry point.
    """
    threads_env = os.getenv("HEISGEOM_THREADS")

    logger.info(f"Service: {settings.SERVICE_NAME}")
    logger.info(f"Threads: {settings.THREADS}{' (from HEISGEOM_THREADS)' if threads_env else ''}")
    logger.info(f"Thresholds: tau_h={settings.TAU_H}, tau_char={settings.TAU_CHAR}, "
                f"tau_on={settings.TAU_ON}, tau_abs={settings.TAU_ABS}, tau_eik={settings.TAU_EIK}")
    logger.info(f"Quadrature: order={settings.QUAD_ORDER}, singular order={settings.QUAD_SINGULAR_ORDER}, "
                f"tol={settings.QUAD_TOL}, max subdivisions={settings.QUAD_MAX_SUBDIVISIONS}")
    logger.info(f"Geodesics: rtol={settings.GEODESIC_RTOL}, atol={settings.GEODESIC_ATOL}")
    logger.info(f"Sweeps: eps={settings.EPS_SEQUENCE}, L={settings.L_SWEEP}")
