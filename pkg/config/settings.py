"""
Django settings for numlab.
Command-line only: no URLs, no database, templates are used for text output.
"""

from pathlib import Path
import os
from dotenv import load_dotenv


# ---------------------------------------------------------------------
# BASE & ENV
# ---------------------------------------------------------------------
BASE_DIR = Path(__file__).resolve().parent.parent
load_dotenv(BASE_DIR / ".env")  # loads .env from project root

SECRET_KEY = os.getenv("DJANGO_SECRET_KEY", "dev-secret")
DEBUG = os.getenv("DEBUG", "False").lower() == "true"

# ---------------------------------------------------------------------
# APPS
# ---------------------------------------------------------------------
INSTALLED_APPS = [
    # local
    "core",
]

# ---------------------------------------------------------------------
# TEMPLATES  (text renderings for --format text)
# ---------------------------------------------------------------------
TEMPLATES = [
    {
        "BACKEND": "django.template.backends.django.DjangoTemplates",
        "DIRS": [],
        "APP_DIRS": True,  # loads core/templates/core/*.txt
        "OPTIONS": {"autoescape": False},
    },
]

# ---------------------------------------------------------------------
# DATABASE
# - Nothing is persisted through the ORM; sweeps write JSONL files.
# ---------------------------------------------------------------------
DATABASES = {}

USE_TZ = True
TIME_ZONE = "UTC"


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    return int(float(raw))


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    return float(raw)


# ---------------------------------------------------------------------
# NUMBER THEORY KNOBS
# ---------------------------------------------------------------------
NUMLAB = {
    # θ(x) refuses x above this (memory bound of the sieve)
    "SIEVE_CEILING": _env_int("NUMLAB_SIEVE_CEILING", 10**8),
    # trial division by primes up to this bound, then Pollard rho (Brent)
    "TRIAL_DIVISION_LIMIT": _env_int("NUMLAB_TRIAL_DIVISION_LIMIT", 10**6),
    # smallest-prime-factor table for fast factorization of small inputs
    "SPF_TABLE_LIMIT": _env_int("NUMLAB_SPF_TABLE_LIMIT", 2 * 10**6),
    "RHO_SEED": _env_int("NUMLAB_RHO_SEED", 20240229),
    "RHO_MAX_ATTEMPTS": _env_int("NUMLAB_RHO_MAX_ATTEMPTS", 64),
    "MR_ROUNDS_LARGE": _env_int("NUMLAB_MR_ROUNDS_LARGE", 40),
    "FIT_NMIN": _env_int("NUMLAB_FIT_NMIN", 100),
    "CALCULUS_GRID": _env_int("NUMLAB_CALCULUS_GRID", 10**4),
    # |s|, |t| in Δ_min = -2^s 3^t (n²+1) must stay below this over a sweep
    "EXPONENT_CAP_S_T": _env_int("NUMLAB_EXPONENT_CAP_S_T", 12),
    "SHIMURA_ABC_EXPONENT": _env_float("NUMLAB_SHIMURA_ABC_EXPONENT", 3.0),
    # 11/2 + ε with ε = 1/2
    "SHIMURA_E_EXPONENT": _env_float("NUMLAB_SHIMURA_E_EXPONENT", 6.0),
    "SWEEP_CHUNK": _env_int("NUMLAB_SWEEP_CHUNK", 256),
}

# ---------------------------------------------------------------------
# LOGGING (stderr only; stdout carries command output)
# ---------------------------------------------------------------------
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "%(asctime)s %(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {"console": {"class": "logging.StreamHandler", "formatter": "plain"}},
    "root": {"handlers": ["console"], "level": "WARNING"},
    "loggers": {
        "core": {
            "handlers": ["console"],
            "level": os.getenv("NUMLAB_LOG_LEVEL", "INFO"),
            "propagate": False,
        },
    },
}
