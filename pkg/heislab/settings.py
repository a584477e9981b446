"""
Django settings for the heislab project.

Monte Carlo laboratory for the hypoelliptic Brownian motion on the
Heisenberg group. The numeric core lives in plain-Python modules of the
``heisenberg``, ``estimation``, ``spectra`` and ``chung`` apps; Django
provides configuration, the management-command CLI, the run archive and a
small read-only API.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

import os
from pathlib import Path
from typing import Any

from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent
DATA_DIR = BASE_DIR / "data"

# Database and collected static files live under data/
DATA_DIR.mkdir(exist_ok=True)
(DATA_DIR / "static").mkdir(exist_ok=True)

# Load environment variables from .env file
load_dotenv(BASE_DIR / ".env")


def parse_database_url(database_url: str) -> dict[str, Any]:
    """Parse database URL into Django database configuration."""
    if database_url.startswith("sqlite://"):
        db_path = database_url.replace("sqlite://", "")
        db_file = Path(db_path) if db_path.startswith("/") else DATA_DIR / db_path
        return {
            "ENGINE": "django.db.backends.sqlite3",
            "NAME": db_file,
        }
    # Default to SQLite if URL format is not recognized
    return {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": DATA_DIR / "db.sqlite3",
    }


def env_flag(name: str, default: str = "False") -> bool:
    return os.getenv(name, default).lower() in ("true", "1", "yes", "on")


def env_int(name: str, default: int) -> int:
    raw = os.getenv(name, "").strip()
    if not raw:
        return default
    try:
        return int(raw, 10)
    except ValueError as exc:
        msg = f"The {name} environment variable must be a decimal integer, got {raw!r}"
        raise ValueError(msg) from exc


# Local fallback only; deployments set SECRET_KEY.
SECRET_KEY = os.getenv("SECRET_KEY", "django-insecure-heislab-local-development-key")

DEBUG = env_flag("DEBUG")

_raw_allowed_hosts = os.getenv("ALLOWED_HOSTS", "*").strip()
if not _raw_allowed_hosts:
    ALLOWED_HOSTS = []
elif _raw_allowed_hosts == "*":
    ALLOWED_HOSTS = ["*"]
else:
    ALLOWED_HOSTS = [h.strip() for h in _raw_allowed_hosts.split(",") if h.strip()]


# Application definition

INSTALLED_APPS = [
    "django.contrib.admin",
    "django.contrib.auth",
    "django.contrib.contenttypes",
    "django.contrib.sessions",
    "django.contrib.messages",
    "django.contrib.staticfiles",
    "rest_framework",
    "drf_spectacular",
    "core",
    "heisenberg",
    "estimation",
    "spectra",
    "chung",
]

MIDDLEWARE = [
    "django.middleware.security.SecurityMiddleware",
    "django.contrib.sessions.middleware.SessionMiddleware",
    "django.middleware.common.CommonMiddleware",
    "django.middleware.csrf.CsrfViewMiddleware",
    "django.contrib.auth.middleware.AuthenticationMiddleware",
    "django.contrib.messages.middleware.MessageMiddleware",
    "django.middleware.clickjacking.XFrameOptionsMiddleware",
]

ROOT_URLCONF = "heislab.urls"

TEMPLATES = [
    {
        "BACKEND": "django.template.backends.django.DjangoTemplates",
        "DIRS": [],
        "APP_DIRS": True,
        "OPTIONS": {
            "context_processors": [
                "django.template.context_processors.debug",
                "django.template.context_processors.request",
                "django.contrib.auth.context_processors.auth",
                "django.contrib.messages.context_processors.messages",
            ],
        },
    },
]

WSGI_APPLICATION = "heislab.wsgi.application"
ASGI_APPLICATION = "heislab.asgi.application"


# Database
# https://docs.djangoproject.com/en/5.2/ref/settings/#databases

DATABASE_URL = os.getenv("DATABASE_URL", "sqlite://db.sqlite3")
DATABASES = {"default": parse_database_url(DATABASE_URL)}


AUTH_PASSWORD_VALIDATORS = [
    {
        "NAME": "django.contrib.auth.password_validation.UserAttributeSimilarityValidator",
    },
    {
        "NAME": "django.contrib.auth.password_validation.MinimumLengthValidator",
    },
]


LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = True

USE_TZ = True


STATIC_URL = "static/"
STATIC_ROOT = DATA_DIR / "static"

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

CACHES = {
    "default": {
        "BACKEND": "django.core.cache.backends.locmem.LocMemCache",
        "LOCATION": "heislab",
    },
}

REST_FRAMEWORK = {
    "DEFAULT_PAGINATION_CLASS": "rest_framework.pagination.PageNumberPagination",
    "PAGE_SIZE": 10,
    "DEFAULT_SCHEMA_CLASS": "drf_spectacular.openapi.AutoSchema",
    "DEFAULT_AUTHENTICATION_CLASSES": [
        "rest_framework.authentication.SessionAuthentication",
    ],
    "DEFAULT_PERMISSION_CLASSES": [
        "rest_framework.permissions.IsAuthenticated",
    ],
    "DEFAULT_PARSER_CLASSES": [
        "rest_framework.parsers.JSONParser",
    ],
}

SPECTACULAR_SETTINGS = {
    "TITLE": "Heisenberg Lab API",
    "DESCRIPTION": "Chung bounds and archived Monte Carlo runs",
    "VERSION": "0.1.0",
    "SERVE_INCLUDE_SCHEMA": False,
    "COMPONENT_SPLIT_REQUEST": True,
    "SCHEMA_PATH_PREFIX": "/api",
}


# Logging goes to stderr only; stdout carries the emitted JSON/CSV records.
LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING").upper()

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {
            "format": "{asctime} {levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "stderr": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "plain",
        },
    },
    "loggers": {
        app: {"handlers": ["stderr"], "level": LOG_LEVEL, "propagate": False}
        for app in ("core", "heisenberg", "estimation", "spectra", "chung")
    },
}


# Lab defaults; every one of them can be overridden by a CLI flag.
HEISLAB = {
    "DEFAULT_SEED": env_int("HEISLAB_SEED", 0),
    "STEPS_PER_UNIT": env_int("HEISLAB_STEPS_PER_UNIT", 10_000),
    "LIL_STEPS_PER_UNIT": env_int("HEISLAB_LIL_STEPS_PER_UNIT", 10),
    "CHUNK_STEPS": env_int("HEISLAB_CHUNK_STEPS", 4096),
    "BLOCK_SIZE": env_int("HEISLAB_BLOCK_SIZE", 256),
    "THREADS": env_int("HEISLAB_THREADS", os.cpu_count() or 1),
    "CACHE_TTL": env_int("HEISLAB_CACHE_TTL", 300),
}
