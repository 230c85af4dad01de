"""
Django settings for the densest_bandits project.

Algorithm defaults live here so that every management command reads the same
values; the library code in each app's ``utils`` package takes explicit
arguments and never imports settings.
"""

import os
from typing import (
    List,
    Optional,
)

import dj_database_url
from django.core.exceptions import ImproperlyConfigured


def get_env_var(key: str, default: Optional[str] = None) -> str:

    try:
        return os.environ[key]
    except KeyError:

        if default is None:
            raise ImproperlyConfigured(
                f'Missing environment variable {key}'
            )

        return default


def get_env_var_bool(key: str, default: str = 'FALSE') -> bool:
    return get_env_var(key, default).upper() == 'TRUE'


def get_env_var_list(key: str, default: str = '') -> List[str]:
    return get_env_var(key, default).split()


def get_env_var_float(key: str, default: str) -> float:

    value: str = get_env_var(key, default)

    try:
        return float(value)
    except ValueError:
        raise ImproperlyConfigured(
            f'Environment variable {key} must be a number, got "{value}"'
        )


def get_env_var_int(key: str, default: str) -> int:

    value: str = get_env_var(key, default)

    try:
        return int(value)
    except ValueError:
        raise ImproperlyConfigured(
            f'Environment variable {key} must be an integer, got "{value}"'
        )


# Build paths inside the project like this: os.path.join(BASE_DIR, ...)

BASE_DIR = os.path.dirname(
    os.path.dirname(
        os.path.abspath(__file__)
    )
)


# The API is meant for browsing local results, not for public deployment
SECRET_KEY = get_env_var('SECRET_KEY', 'densest-bandits-local-only')

DEBUG = get_env_var_bool('DEBUG')

ALLOWED_HOSTS = get_env_var_list('ALLOWED_HOSTS', 'localhost 127.0.0.1')


# Application definition
INSTALLED_APPS = [
    'densest_bandits.apps.DensestBanditsAdminConfig',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',
    'rest_framework',
    'graph_core',
    'offline_solvers',
    'stochastic_oracle',
    'dslin',
    'dssr',
    'baselines',
    'bench',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'densest_bandits.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.debug',
                'django.template.context_processors.request',
                'django.contrib.auth.context_processors.auth',
                'django.contrib.messages.context_processors.messages',
            ],
        },
    },
]

WSGI_APPLICATION = 'densest_bandits.wsgi.application'


# Database
DATABASES = {
    'default': dj_database_url.config(
        default=f'sqlite:///{os.path.join(BASE_DIR, "db.sqlite3")}',
        conn_max_age=600
    )
}

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True


REST_FRAMEWORK = {
    'DEFAULT_PAGINATION_CLASS': 'rest_framework.pagination.PageNumberPaginatio'
                                'n',
    'PAGE_SIZE': 100,
}


STATIC_URL = '/static/'


# Logging
DSB_LOG_LEVEL = get_env_var('DSB_LOG_LEVEL', 'INFO').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': DSB_LOG_LEVEL,
    },
}


# Admin site
SITE_NAME = get_env_var('SITE_NAME', 'Densest bandits lab')
DJANGO_ADMIN_SITE_HEADER = f'{SITE_NAME} admin'
DJANGO_ADMIN_SITE_TITLE = f'{SITE_NAME} admin portal'
DJANGO_ADMIN_SITE_INDEX_TITLE = f'{SITE_NAME} experiment records'


# Experiment harness
DSB_RESULTS_DIR = get_env_var(
    'DSB_RESULTS_DIR',
    os.path.join(BASE_DIR, 'results')
)
DSB_WORKERS = get_env_var_int('DSB_WORKERS', '1')

# DS-Lin. An unset DSLIN_L means sqrt(m) * 100, the knockout weight ceiling
DSLIN_EPSILON = get_env_var_float('DSLIN_EPSILON', '1.0')
DSLIN_DELTA = get_env_var_float('DSLIN_DELTA', '0.05')
DSLIN_LAMBDA = get_env_var_float('DSLIN_LAMBDA', '100')
DSLIN_R = get_env_var_float('DSLIN_R', '1')
DSLIN_L: Optional[float] = (
    get_env_var_float('DSLIN_L', '0') or None
)
DSLIN_K = get_env_var_int('DSLIN_K', '10')
DSLIN_MAIN_LOOP_CAP = get_env_var_int('DSLIN_MAIN_LOOP_CAP', '10000')
DSLIN_TRACE_EVERY = get_env_var_int('DSLIN_TRACE_EVERY', '1')
QP_EXACT_MAX_DIM = get_env_var_int('QP_EXACT_MAX_DIM', '22')

# R-Oracle
R_ORACLE_GAMMA = get_env_var_float('R_ORACLE_GAMMA', '0.9')
R_ORACLE_EPSILON = get_env_var_float('R_ORACLE_EPSILON', '0.9')
